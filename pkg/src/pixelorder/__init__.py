"""Dense-pixel visualization engine for geolocated time series over polygons.

The pipeline: ingest polygons and series (:mod:`pixelorder.geodata`), compute
a 1D ordering of the regions (:mod:`pixelorder.ordering`), quantify the
linearization artifacts (:mod:`pixelorder.quality`), and assemble the boosted
layout (:mod:`pixelorder.layout`, :mod:`pixelorder.render`). A session HTTP
service and a batch CLI expose the same operations.
"""

from .geodata import (
    ContiguityGraph,
    GeoDataError,
    Region,
    RegionSet,
    TimeSeriesMatrix,
    build_contiguity,
    grid_regions,
    load_geojson,
    load_timeseries,
    region_set_to_geojson,
    timeseries_to_csv,
)
from .ordering import (
    ClusterOrdering,
    DistanceMatrix,
    MixParams,
    Ordering,
    SpaceFillingOrdering,
    ahc_order,
    mix_distances,
    pairwise_geo,
    pairwise_ts,
    sfc_order,
)
from .quality import (
    DISCONNECTED,
    BorderWeights,
    GapMask,
    MoranProfile,
    QualityReport,
    default_beta,
    discontinuity_borders,
    hop_distance,
    moran_profile,
    morans_i,
    quality_report,
    trust_gaps,
)
from .layout import (
    Brush,
    GlyphData,
    LayoutConfig,
    PathData,
    PixelLayout,
    aggregate_selection,
    build_layout,
    column_widths,
    halo_strokes,
    ordering_path,
    tick_profile,
)
from .colors import color_map, resolve_colors, viridis_rgb
from .render import render_svg
from .server import SessionStore, create_app

__version__ = "0.1.0"

__all__ = [
    "BorderWeights",
    "Brush",
    "ClusterOrdering",
    "ContiguityGraph",
    "DISCONNECTED",
    "DistanceMatrix",
    "GapMask",
    "GeoDataError",
    "GlyphData",
    "LayoutConfig",
    "MixParams",
    "MoranProfile",
    "Ordering",
    "PathData",
    "PixelLayout",
    "QualityReport",
    "Region",
    "RegionSet",
    "SessionStore",
    "SpaceFillingOrdering",
    "TimeSeriesMatrix",
    "aggregate_selection",
    "ahc_order",
    "build_contiguity",
    "build_layout",
    "color_map",
    "column_widths",
    "create_app",
    "default_beta",
    "discontinuity_borders",
    "grid_regions",
    "halo_strokes",
    "hop_distance",
    "load_geojson",
    "load_timeseries",
    "mix_distances",
    "moran_profile",
    "morans_i",
    "ordering_path",
    "pairwise_geo",
    "pairwise_ts",
    "quality_report",
    "region_set_to_geojson",
    "render_svg",
    "resolve_colors",
    "sfc_order",
    "tick_profile",
    "timeseries_to_csv",
    "trust_gaps",
    "viridis_rgb",
]
