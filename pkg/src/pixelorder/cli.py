"""Batch command-line interface mirroring the HTTP endpoints."""

from __future__ import annotations

import json
from datetime import date, timedelta

import click
import numpy as np

from .geodata import (
    build_contiguity,
    grid_regions,
    load_geojson,
    load_timeseries,
    region_set_to_geojson,
    timeseries_to_csv,
)
from .geodata import TimeSeriesMatrix
from .layout import Brush, LayoutConfig, aggregate_selection, build_layout, ordering_path
from .ordering import ahc_order, mix_distances, pairwise_geo, pairwise_ts, sfc_order
from .quality import default_beta, moran_profile, quality_report, trust_gaps
from .render import render_svg


@click.group()
def main():
    """Dense-pixel orderings, quality measures, and boosted layouts."""


def _parse_extent(text: str | None) -> tuple[int, int] | None:
    if text is None:
        return None
    try:
        start, end = text.split(":")
        return int(start), int(end)
    except ValueError:
        raise click.BadParameter("extent must look like START:END") from None


def _write(text: str, out: str | None):
    if out in (None, "-"):
        click.echo(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def ingest_options(fn):
    fn = click.option("--geojson", "geojson_path", required=True,
                      type=click.Path(exists=True), help="FeatureCollection file.")(fn)
    fn = click.option("--csv", "csv_path", required=True,
                      type=click.Path(exists=True), help="Wide CSV of the series.")(fn)
    fn = click.option("--id-property", default="id", show_default=True)(fn)
    fn = click.option("--rule", default="queen", show_default=True,
                      type=click.Choice(["queen", "rook"]))(fn)
    return fn


def ordering_options(fn):
    fn = click.option("--alpha", default=0.5, show_default=True, type=float)(fn)
    fn = click.option("--extent", default=None, help="Timestep window START:END.")(fn)
    fn = click.option("--linkage", default="ward", show_default=True,
                      type=click.Choice(["ward"]))(fn)
    fn = click.option("--curve", default=None,
                      type=click.Choice(["hilbert", "morton", "diagonal"]),
                      help="Use a space-filling curve instead of clustering.")(fn)
    return fn


def _load(geojson_path, csv_path, id_property, rule):
    with open(geojson_path, encoding="utf-8") as fh:
        regions = load_geojson(fh.read(), id_property)
    graph = build_contiguity(regions, rule)
    with open(csv_path, encoding="utf-8") as fh:
        series = load_timeseries(fh.read(), regions)
    return regions, graph, series


def _order(regions, series, alpha, extent, linkage, curve):
    if curve is not None:
        return sfc_order(regions, curve)
    extent = _parse_extent(extent)
    geo = pairwise_geo(regions)
    tsd = pairwise_ts(series, extent)
    mixed = mix_distances(geo, tsd, alpha)
    return ahc_order(mixed, linkage=linkage, alpha=alpha, extent=extent)


@main.command("gen-grid")
@click.option("--width", required=True, type=int)
@click.option("--height", required=True, type=int)
@click.option("--out", default="-", show_default=True)
def gen_grid(width, height, out):
    """Write a synthetic unit-grid FeatureCollection (ids x_y)."""
    doc = region_set_to_geojson(grid_regions(width, height))
    _write(json.dumps(doc), out)


@main.command("gen-series")
@click.option("--geojson", "geojson_path", required=True, type=click.Path(exists=True))
@click.option("--id-property", default="id", show_default=True)
@click.option("--days", default=64, show_default=True, type=int)
@click.option("--start", default="2020-01-01", show_default=True)
@click.option("--seed", default=7, show_default=True, type=int)
@click.option("--out", default="-", show_default=True)
def gen_series(geojson_path, id_property, days, start, seed, out):
    """Write a deterministic synthetic daily series for every region."""
    with open(geojson_path, encoding="utf-8") as fh:
        regions = load_geojson(fh.read(), id_property)
    rng = np.random.default_rng(seed)
    n = len(regions)
    t = np.arange(days)
    season = 40.0 * (1.0 + np.sin(2.0 * np.pi * t / max(days, 2)))
    centroids = regions.centroids()
    phase = centroids[:, 0] + centroids[:, 1]
    values = (
        season[None, :]
        + 15.0 * np.sin(2.0 * np.pi * t[None, :] / max(days, 2) + phase[:, None])
        + rng.normal(0.0, 2.0, size=(n, days)).cumsum(axis=1) * 0.2
    )
    values = np.round(values - values.min() + 1.0, 4)
    first = date.fromisoformat(start)
    stamps = tuple((first + timedelta(days=int(k))).isoformat() for k in range(days))
    series = TimeSeriesMatrix(regions.ids, stamps, values)
    _write(timeseries_to_csv(series), out)


@main.command("order")
@ingest_options
@ordering_options
@click.option("--out", default="-", show_default=True)
def order_cmd(geojson_path, csv_path, id_property, rule, alpha, extent, linkage, curve, out):
    """Compute an ordering and write it as JSON {sequence, provenance}."""
    regions, _, series = _load(geojson_path, csv_path, id_property, rule)
    ordering = _order(regions, series, alpha, extent, linkage, curve)
    _write(json.dumps(ordering.to_dict()), out)


@main.command("quality")
@ingest_options
@ordering_options
@click.option("--beta", default=None, type=int,
              help="Gap threshold in hops; defaults to the centrality heuristic.")
@click.option("--out", default="-", show_default=True)
def quality_cmd(geojson_path, csv_path, id_property, rule, alpha, extent, linkage,
                curve, beta, out):
    """Write the quality report JSON {beta, gaps, hops, borders, moran}."""
    regions, graph, series = _load(geojson_path, csv_path, id_property, rule)
    ordering = _order(regions, series, alpha, extent, linkage, curve)
    beta = default_beta(graph) if beta is None else beta
    report = quality_report(ordering, graph, series, beta)
    _write(json.dumps(report.to_dict()), out)


@main.command("layout")
@ingest_options
@ordering_options
@click.option("--beta", default=None, type=int)
@click.option("--total-width", default=960.0, show_default=True, type=float)
@click.option("--resolve-colors", is_flag=True, default=False,
              help="Embed per-cell hex colors instead of leaving them to the client.")
@click.option("--out", default="-", show_default=True)
def layout_cmd(geojson_path, csv_path, id_property, rule, alpha, extent, linkage,
               curve, beta, total_width, resolve_colors, out):
    """Write the dense-pixel layout JSON."""
    regions, graph, series = _load(geojson_path, csv_path, id_property, rule)
    ordering = _order(regions, series, alpha, extent, linkage, curve)
    beta = default_beta(graph) if beta is None else beta
    gaps = trust_gaps(ordering, graph, beta)
    profile = moran_profile(series, graph)
    config = LayoutConfig(total_width=total_width)
    built = build_layout(series, ordering, gaps, profile, config)
    _write(json.dumps(built.to_dict(resolve=resolve_colors)), out)


@main.command("render")
@ingest_options
@ordering_options
@click.option("--beta", default=None, type=int)
@click.option("--total-width", default=960.0, show_default=True, type=float)
@click.option("--with-path", is_flag=True, default=False,
              help="Add the map inset with the ordering path overlay.")
@click.option("--out", required=True, type=click.Path())
def render_cmd(geojson_path, csv_path, id_property, rule, alpha, extent, linkage,
               curve, beta, total_width, with_path, out):
    """Render the boosted dense-pixel view to an SVG file."""
    regions, graph, series = _load(geojson_path, csv_path, id_property, rule)
    ordering = _order(regions, series, alpha, extent, linkage, curve)
    beta = default_beta(graph) if beta is None else beta
    gaps = trust_gaps(ordering, graph, beta)
    profile = moran_profile(series, graph)
    config = LayoutConfig(total_width=total_width)
    built = build_layout(series, ordering, gaps, profile, config)
    path = ordering_path(ordering, regions, gaps) if with_path else None
    svg = render_svg(built, path=path, regions=regions if with_path else None,
                     config=config)
    _write(svg, out)


@main.command("select")
@ingest_options
@ordering_options
@click.option("--rows", required=True, help="Brushed row range FIRST:LAST.")
@click.option("--times", required=True, help="Brushed timestep range FIRST:LAST.")
@click.option("--stat", default="mean", show_default=True,
              type=click.Choice(["min", "mean", "max"]))
@click.option("--out", default="-", show_default=True)
def select_cmd(geojson_path, csv_path, id_property, rule, alpha, extent, linkage,
               curve, rows, times, stat, out):
    """Aggregate a brushed selection and write the map-glyph JSON."""
    regions, graph, series = _load(geojson_path, csv_path, id_property, rule)
    ordering = _order(regions, series, alpha, extent, linkage, curve)
    from .quality import discontinuity_borders

    brush = Brush(_parse_extent(rows), _parse_extent(times), stat)
    glyph = aggregate_selection(brush, series, ordering,
                                borders=discontinuity_borders(ordering, graph))
    _write(json.dumps(glyph.to_dict()), out)


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True,
              envvar="PIXELORDER_HOST")
@click.option("--port", default=8000, show_default=True, type=int,
              envvar="PIXELORDER_PORT")
@click.option("--default-alpha", default=0.5, show_default=True, type=float,
              envvar="PIXELORDER_DEFAULT_ALPHA")
@click.option("--default-rule", default="queen", show_default=True,
              type=click.Choice(["queen", "rook"]), envvar="PIXELORDER_DEFAULT_RULE")
@click.option("--snapshot-dir", default=None, envvar="PIXELORDER_SNAPSHOT_DIR",
              help="Directory for dataset snapshots of created sessions.")
def serve_cmd(host, port, default_alpha, default_rule, snapshot_dir):
    """Run the HTTP service."""
    import uvicorn

    from .server import create_app

    app = create_app(default_alpha=default_alpha, default_rule=default_rule,
                     snapshot_dir=snapshot_dir)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main(prog_name="pixelorder")
