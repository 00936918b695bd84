"""Headless, deterministic SVG rendering of the boosted layout.

The output is a pure function of its inputs (byte-identical across runs):
one rect per cell, hatched separator bands at trust gaps, a bar-profile
timeline mirroring the distorted column widths, and an optional map inset
with glyph aggregates, halo strokes, and the ordering path.
"""

from __future__ import annotations

from shapely.geometry import MultiLineString

from .colors import color_map, rgb_hex, viridis_rgb
from .geodata import RegionSet
from .layout import GlyphData, LayoutConfig, PathData, PixelLayout, tick_profile

PAD = 10.0
TIMELINE_GAP = 8.0
INSET_GAP = 20.0
INSET_SIZE = 220.0


def _fmt(value: float) -> str:
    return f"{value:.3f}"


def render_svg(layout: PixelLayout, glyph: GlyphData | None = None,
               path: PathData | None = None, regions: RegionSet | None = None,
               config: LayoutConfig = LayoutConfig()) -> str:
    """Render the dense-pixel view (plus optional map inset) to SVG text."""
    n = len(layout.row_order)
    widths = layout.column_widths
    total_width = sum(widths)
    row_h = config.row_height
    band_h = config.gap_band_rows * row_h
    ticks = tick_profile(widths, config.max_tick_height)

    plot_height = n * row_h + band_h * sum(layout.gap_after_row[:-1])
    timeline_top = PAD + plot_height + TIMELINE_GAP
    height = timeline_top + config.max_tick_height + PAD
    width = PAD * 2 + total_width
    draw_inset = regions is not None and (glyph is not None or path is not None)
    if draw_inset:
        width += INSET_GAP + INSET_SIZE
        height = max(height, PAD * 2 + INSET_SIZE)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        '<defs><pattern id="hatch" width="6" height="6" patternUnits="userSpaceOnUse" '
        'patternTransform="rotate(45)">'
        '<rect width="6" height="6" fill="#f4f4f4"/>'
        '<line x1="0" y1="0" x2="0" y2="6" stroke="#888888" stroke-width="2"/>'
        "</pattern></defs>",
    ]

    # column left edges
    xs = [PAD]
    for w in widths:
        xs.append(xs[-1] + w)

    y = PAD
    for row, region_id in enumerate(layout.row_order):
        for col, value in enumerate(layout.cells[row]):
            fill = color_map(float(value), layout.color_domain)
            parts.append(
                f'<rect class="cell" x="{_fmt(xs[col])}" y="{_fmt(y)}" '
                f'width="{_fmt(widths[col])}" height="{_fmt(row_h)}" fill="{fill}"/>'
            )
        y += row_h
        if row < n - 1 and layout.gap_after_row[row]:
            parts.append(
                f'<rect class="gap-band" x="{_fmt(PAD)}" y="{_fmt(y)}" '
                f'width="{_fmt(total_width)}" height="{_fmt(band_h)}" fill="url(#hatch)"/>'
            )
            y += band_h

    # timeline: baseline plus a bar per column, heights mirroring the widths
    parts.append(
        f'<line class="timeline-axis" x1="{_fmt(PAD)}" y1="{_fmt(timeline_top)}" '
        f'x2="{_fmt(PAD + total_width)}" y2="{_fmt(timeline_top)}" '
        'stroke="#444444" stroke-width="1"/>'
    )
    for col, tick in enumerate(ticks):
        bar_w = max(widths[col] - 1.0, 0.5)
        parts.append(
            f'<rect class="tick" x="{_fmt(xs[col] + (widths[col] - bar_w) / 2)}" '
            f'y="{_fmt(timeline_top)}" width="{_fmt(bar_w)}" height="{_fmt(tick)}" '
            'fill="#777777"/>'
        )

    if draw_inset:
        parts.extend(_render_inset(glyph, path, regions, config,
                                   PAD * 2 + total_width + INSET_GAP, PAD))

    parts.append("</svg>")
    return "\n".join(parts)


def _transform(bounds, origin_x: float, origin_y: float, size: float):
    x0, y0, x1, y1 = bounds
    span = max(x1 - x0, y1 - y0) or 1.0
    scale = size / span
    def to_svg(pt):
        # geographic y grows upward, SVG y downward
        return (origin_x + (pt[0] - x0) * scale, origin_y + (y1 - pt[1]) * scale)
    return to_svg


def _ring_path(ring, to_svg) -> str:
    cmds = []
    for k, pt in enumerate(ring):
        x, y = to_svg(pt)
        cmds.append(f"{'M' if k == 0 else 'L'} {_fmt(x)} {_fmt(y)}")
    cmds.append("Z")
    return " ".join(cmds)


def _shared_border(region_a, region_b):
    la = MultiLineString([list(r) + [r[0]] for r in region_a.rings])
    lb = MultiLineString([list(r) + [r[0]] for r in region_b.rings])
    shared = la.intersection(lb)
    lines = []
    for geom in getattr(shared, "geoms", [shared]):
        if geom.geom_type == "LineString" and geom.length > 0:
            lines.append(list(geom.coords))
    return lines


def _render_inset(glyph: GlyphData | None, path: PathData | None,
                  regions: RegionSet, config: LayoutConfig,
                  origin_x: float, origin_y: float) -> list[str]:
    parts = [
        f'<rect class="inset-frame" x="{_fmt(origin_x)}" y="{_fmt(origin_y)}" '
        f'width="{_fmt(INSET_SIZE)}" height="{_fmt(INSET_SIZE)}" '
        'fill="#fcfcfc" stroke="#cccccc" stroke-width="1"/>'
    ]
    to_svg = _transform(regions.bounds(), origin_x, origin_y, INSET_SIZE)
    by_id = {region.id: region for region in regions.regions}

    if glyph is not None:
        # only the selected polygons are rendered, on the shared color domain
        for region_id in glyph.ids:
            fill = color_map(glyph.values[region_id], glyph.color_domain)
            for ring in by_id[region_id].rings:
                parts.append(
                    f'<path class="glyph-poly" d="{_ring_path(ring, to_svg)}" '
                    f'fill="{fill}" stroke="#ffffff" stroke-width="0.4"/>'
                )
        for (u, v), stroke_w in sorted(glyph.strokes.items()):
            for line in _shared_border(by_id[u], by_id[v]):
                pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in map(to_svg, line))
                parts.append(
                    f'<polyline class="halo" points="{pts}" fill="none" '
                    f'stroke="#1a1a1a" stroke-width="{_fmt(stroke_w)}"/>'
                )
    elif path is not None:
        # no glyph: color every polygon by its ordering position
        for region_id in path.ids:
            fill = rgb_hex(viridis_rgb(path.positions[region_id]))
            for ring in by_id[region_id].rings:
                parts.append(
                    f'<path class="order-poly" d="{_ring_path(ring, to_svg)}" '
                    f'fill="{fill}" stroke="#ffffff" stroke-width="0.4"/>'
                )

    if path is not None:
        svg_pts = [to_svg(p) for p in path.points]
        for k, hatched in enumerate(path.hatched):
            (x1, y1), (x2, y2) = svg_pts[k], svg_pts[k + 1]
            dash = ' stroke-dasharray="4 3"' if hatched else ""
            cls = "path-seg-hatched" if hatched else "path-seg"
            parts.append(
                f'<line class="{cls}" x1="{_fmt(x1)}" y1="{_fmt(y1)}" '
                f'x2="{_fmt(x2)}" y2="{_fmt(y2)}" stroke="#d62728" '
                f'stroke-width="1.2"{dash}/>'
            )
    return parts
