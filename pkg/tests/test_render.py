from datetime import date, timedelta
from pathlib import Path

import numpy as np

from pixelorder import (
    Brush,
    LayoutConfig,
    TimeSeriesMatrix,
    aggregate_selection,
    build_contiguity,
    build_layout,
    discontinuity_borders,
    grid_regions,
    moran_profile,
    ordering_path,
    render_svg,
    sfc_order,
    trust_gaps,
)

GOLDEN = Path(__file__).parent / "golden" / "morton4x4.svg"


def daily(values):
    values = np.asarray(values, dtype=float)
    stamps = tuple((date(2021, 1, 1) + timedelta(days=k)).isoformat()
                   for k in range(values.shape[1]))
    return stamps


def morton_fixture():
    rs = grid_regions(4, 4)
    g = build_contiguity(rs, "queen")
    o = sfc_order(rs, "morton")
    values = np.add.outer(np.arange(16.0), np.arange(6.0)) % 16.0
    ts = TimeSeriesMatrix(rs.ids, daily(values), values)
    gaps = trust_gaps(o, g, 2)
    profile = moran_profile(ts, g)
    config = LayoutConfig(total_width=480.0)
    layout = build_layout(ts, o, gaps, profile, config)
    path = ordering_path(o, rs, gaps)
    glyph = aggregate_selection(Brush((0, 7), (0, 5), "mean"), ts, o,
                                borders=discontinuity_borders(o, g))
    return rs, layout, path, glyph, config


def tiny_layout(gap=False):
    rs = grid_regions(1, 2) if gap else grid_regions(1, 1)
    g = build_contiguity(rs, "queen")
    values = np.array([[1.0], [2.0]]) if gap else np.array([[1.0]])
    ts = TimeSeriesMatrix(rs.ids, daily(values), values)
    from pixelorder import GapMask, MoranProfile, Ordering

    o = Ordering(rs.ids)
    eps = (True,) if gap else ()
    hops = (1,) if gap else ()
    return build_layout(ts, o, GapMask(eps, hops, 1), MoranProfile((0.0,), (0.5,)))


def test_single_cell_layout_has_one_data_rect():
    svg = render_svg(tiny_layout())
    assert svg.count('class="cell"') == 1
    assert svg.count('class="gap-band"') == 0


def test_one_gap_yields_one_hatch_band():
    svg = render_svg(tiny_layout(gap=True))
    assert svg.count('class="gap-band"') == 1
    assert 'url(#hatch)' in svg


def test_render_is_deterministic():
    rs, layout, path, glyph, config = morton_fixture()
    a = render_svg(layout, glyph=glyph, path=path, regions=rs, config=config)
    b = render_svg(layout, glyph=glyph, path=path, regions=rs, config=config)
    assert a == b


def test_cell_and_band_counts_match_layout():
    rs, layout, path, glyph, config = morton_fixture()
    svg = render_svg(layout, glyph=glyph, path=path, regions=rs, config=config)
    assert svg.count('class="cell"') == 16 * 6
    assert svg.count('class="gap-band"') == 1
    assert svg.count('class="tick"') == 6
    assert svg.count('class="glyph-poly"') == 8
    assert svg.count('class="path-seg') == 15  # includes the hatched variant

    hatched = svg.count('class="path-seg-hatched"')
    assert hatched == sum(path.hatched) == 1


def test_golden_file_byte_identical():
    rs, layout, path, glyph, config = morton_fixture()
    svg = render_svg(layout, glyph=glyph, path=path, regions=rs, config=config)
    assert svg == GOLDEN.read_text(encoding="utf-8")


def test_layout_only_render_has_no_inset():
    rs, layout, *_ = morton_fixture()
    svg = render_svg(layout)
    assert 'class="inset-frame"' not in svg
    assert svg.count('class="cell"') == 96
