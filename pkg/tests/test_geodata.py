import json
from datetime import date, timedelta

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pixelorder import (
    GeoDataError,
    Region,
    RegionSet,
    build_contiguity,
    grid_regions,
    load_geojson,
    load_timeseries,
    region_set_to_geojson,
    timeseries_to_csv,
)
from oracles import brute_force_edges


def feature(region_id, coords, id_property="id", gtype="Polygon"):
    return {
        "type": "Feature",
        "properties": {id_property: region_id},
        "geometry": {"type": gtype, "coordinates": coords},
    }


UNIT_SQUARE = [[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0]]]
SHIFTED_SQUARE = [[[1.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 0.0]]]


class TestLoadGeojson:
    def test_two_features_round_trip(self):
        doc = {"type": "FeatureCollection",
               "features": [feature("a", UNIT_SQUARE), feature("b", SHIFTED_SQUARE)]}
        rs = load_geojson(json.dumps(doc))
        assert len(rs) == 2
        assert rs.ids == ("a", "b")

    def test_missing_id_property(self):
        doc = {"type": "FeatureCollection",
               "features": [feature("a", UNIT_SQUARE, id_property="other")]}
        with pytest.raises(GeoDataError, match="missing id"):
            load_geojson(json.dumps(doc))

    def test_duplicate_ids(self):
        doc = {"type": "FeatureCollection",
               "features": [feature("a", UNIT_SQUARE), feature("a", SHIFTED_SQUARE)]}
        with pytest.raises(GeoDataError, match="duplicate"):
            load_geojson(json.dumps(doc))

    def test_non_areal_geometry(self):
        doc = {"type": "FeatureCollection",
               "features": [feature("a", [[0, 0], [1, 1]], gtype="LineString")]}
        with pytest.raises(GeoDataError, match="non-areal"):
            load_geojson(json.dumps(doc))

    def test_400_feature_file(self):
        # independent parse first: plain json feature count
        doc = json.dumps(region_set_to_geojson(grid_regions(20, 20)))
        assert len(json.loads(doc)["features"]) == 400
        rs = load_geojson(doc)
        assert len(rs) == 400

    def test_multipolygon_uses_largest_part_centroid(self):
        big = [[[0.0, 0.0], [10.0, 0.0], [10.0, 10.0], [0.0, 10.0], [0.0, 0.0]]]
        small = [[[20.0, 0.0], [21.0, 0.0], [21.0, 1.0], [20.0, 1.0], [20.0, 0.0]]]
        doc = {"type": "FeatureCollection",
               "features": [feature("m", [big, small], gtype="MultiPolygon")]}
        rs = load_geojson(json.dumps(doc))
        assert rs.regions[0].centroid == (5.0, 5.0)
        # both parts stay available for contiguity
        assert len(rs.regions[0].rings) == 2

    def test_serialize_round_trip_identity(self):
        rs = grid_regions(3, 2)
        doc = region_set_to_geojson(rs)
        back = load_geojson(json.dumps(doc))
        assert back.ids == rs.ids
        assert back.grid_dims == rs.grid_dims
        for a, b in zip(rs.regions, back.regions):
            assert [len(r) for r in a.rings] == [len(r) for r in b.rings]
            assert a.centroid == pytest.approx(b.centroid)

    def test_lonlat_projection_is_equal_area_style(self):
        doc = {"type": "FeatureCollection",
               "features": [feature("a", [[[0, 50], [1, 50], [1, 51], [0, 51], [0, 50]]])]}
        rs = load_geojson(json.dumps(doc), project_lonlat=True)
        (x0, y0) = rs.regions[0].parts[0][0][0]
        assert x0 == 0.0 and y0 == 50.0
        x1 = rs.regions[0].parts[0][0][1][0]
        assert x1 == pytest.approx(np.cos(np.radians(50.0)))


class TestGridRegions:
    def test_4x4(self):
        rs = grid_regions(4, 4)
        assert len(rs) == 16
        assert rs.grid_dims == (4, 4)

    def test_1x1(self):
        assert len(grid_regions(1, 1)) == 1

    def test_2x3_centroid(self):
        rs = grid_regions(2, 3)
        assert len(rs) == 6
        region = rs.regions[rs.index["1_2"]]
        assert region.centroid == (1.5, 2.5)

    @pytest.mark.parametrize("w,h", [(0, 3), (3, 0), (-1, 2)])
    def test_invalid_dims(self, w, h):
        with pytest.raises(GeoDataError):
            grid_regions(w, h)

    def test_centroids_inside_bounding_boxes(self):
        for region in grid_regions(3, 3).regions:
            xs = [x for ring in region.rings for x, _ in ring]
            ys = [y for ring in region.rings for _, y in ring]
            cx, cy = region.centroid
            assert min(xs) <= cx <= max(xs)
            assert min(ys) <= cy <= max(ys)


class TestBuildContiguity:
    def test_4x4_rook_24_edges(self, grid4):
        assert len(build_contiguity(grid4, "rook").edges) == 24

    def test_4x4_queen_42_edges(self, grid4):
        assert len(build_contiguity(grid4, "queen").edges) == 42

    def test_single_region_no_edges(self):
        g = build_contiguity(grid_regions(1, 1), "queen")
        assert len(g.edges) == 0

    @pytest.mark.parametrize("w", range(1, 9))
    @pytest.mark.parametrize("h", range(1, 9))
    def test_grid_formulas_against_geometry_oracle(self, w, h):
        rs = grid_regions(w, h)
        rook = build_contiguity(rs, "rook")
        queen = build_contiguity(rs, "queen")
        assert len(rook.edges) == w * (h - 1) + h * (w - 1)
        assert len(queen.edges) == w * (h - 1) + h * (w - 1) + 2 * (w - 1) * (h - 1)
        if w * h <= 36:  # the naive oracle is quadratic in cells x segments
            assert set(rook.edges) == brute_force_edges(rs, "rook")
            assert set(queen.edges) == brute_force_edges(rs, "queen")

    def test_rook_subset_of_queen(self):
        for w, h in [(2, 2), (3, 5), (6, 4)]:
            rs = grid_regions(w, h)
            rook = build_contiguity(rs, "rook")
            queen = build_contiguity(rs, "queen")
            assert rook.edges <= queen.edges

    def test_symmetric_and_no_self_loops(self, queen4):
        for u, v in queen4.edges:
            assert u != v
            assert v in queen4.neighbors[u]
            assert u in queen4.neighbors[v]

    def test_snap_tolerance_joins_near_coincident_borders(self):
        shifted = [[[1.0 + 1e-12, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0 + 1e-12, 1.0],
                    [1.0 + 1e-12, 0.0]]]
        doc = {"type": "FeatureCollection",
               "features": [feature("a", UNIT_SQUARE), feature("b", shifted)]}
        rs = load_geojson(json.dumps(doc))
        g = build_contiguity(rs, "rook", tolerance=1e-9)
        assert ("a", "b") in g.edges

    def test_isolated_regions_allowed(self):
        far = [[[50.0, 50.0], [51.0, 50.0], [51.0, 51.0], [50.0, 51.0], [50.0, 50.0]]]
        doc = {"type": "FeatureCollection",
               "features": [feature("a", UNIT_SQUARE), feature("b", far)]}
        rs = load_geojson(json.dumps(doc))
        assert len(build_contiguity(rs, "queen").edges) == 0

    def test_irregular_partition_with_t_junctions(self):
        # A spans the full left column; B and C split the right column, so
        # B's and C's corner vertices land mid-edge on A (T-junctions).
        # D touches C only at the point (2, 2).
        a = [[[0.0, 0.0], [1.0, 0.0], [1.0, 2.0], [0.0, 2.0], [0.0, 0.0]]]
        b = [[[1.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 0.0]]]
        c = [[[1.0, 1.0], [2.0, 1.0], [2.0, 2.0], [1.0, 2.0], [1.0, 1.0]]]
        d = [[[2.0, 2.0], [3.0, 2.0], [3.0, 3.0], [2.0, 3.0], [2.0, 2.0]]]
        doc = {"type": "FeatureCollection",
               "features": [feature("a", a), feature("b", b),
                            feature("c", c), feature("d", d)]}
        rs = load_geojson(json.dumps(doc))
        rook = build_contiguity(rs, "rook")
        queen = build_contiguity(rs, "queen")
        assert rook.edges == {("a", "b"), ("a", "c"), ("b", "c")}
        assert queen.edges == {("a", "b"), ("a", "c"), ("b", "c"), ("c", "d")}
        assert set(rook.edges) == brute_force_edges(rs, "rook")
        assert set(queen.edges) == brute_force_edges(rs, "queen")

    def test_numeric_id_property_is_coerced_to_string(self):
        doc = {"type": "FeatureCollection",
               "features": [feature(1001, UNIT_SQUARE), feature(1002, SHIFTED_SQUARE)]}
        rs = load_geojson(json.dumps(doc))
        assert rs.ids == ("1001", "1002")

    def test_multipolygon_secondary_part_carries_adjacency(self):
        # region m's small detached part shares a border with region b
        main = [[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0]]]
        satellite = [[[5.0, 0.0], [6.0, 0.0], [6.0, 1.0], [5.0, 1.0], [5.0, 0.0]]]
        next_door = [[[6.0, 0.0], [7.0, 0.0], [7.0, 1.0], [6.0, 1.0], [6.0, 0.0]]]
        doc = {"type": "FeatureCollection",
               "features": [feature("m", [main, satellite], gtype="MultiPolygon"),
                            feature("b", next_door)]}
        rs = load_geojson(json.dumps(doc))
        g = build_contiguity(rs, "rook")
        assert ("b", "m") in g.edges

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)),
                    min_size=2, max_size=8, unique=True))
    def test_random_rectangles_rook_subset_queen_and_symmetric(self, origins):
        regions = []
        for k, (x, y) in enumerate(origins):
            ring = ((float(x), float(y)), (float(x + 1), float(y)),
                    (float(x + 1), float(y + 1)), (float(x), float(y + 1)))
            regions.append(Region(f"r{k}", ((ring,),), (x + 0.5, y + 0.5)))
        rs = RegionSet(tuple(regions))
        rook = build_contiguity(rs, "rook")
        queen = build_contiguity(rs, "queen")
        assert rook.edges <= queen.edges
        for u, v in queen.edges:
            assert v in queen.neighbors[u] and u in queen.neighbors[v]


class TestLoadTimeseries:
    def grid2(self):
        return grid_regions(2, 1)

    def test_zero_matrix(self):
        rs = self.grid2()
        csv = "id,2021-01-01,2021-01-02,2021-01-03\n0_0,0,0,0\n1_0,0,0,0\n"
        ts = load_timeseries(csv, rs)
        assert ts.values.shape == (2, 3)
        assert np.all(ts.values == 0)
        assert ts.region_ids == rs.ids

    def test_unknown_region(self):
        csv = "id,2021-01-01\n0_0,1\nnope,2\n"
        with pytest.raises(GeoDataError, match="unknown region"):
            load_timeseries(csv, self.grid2())

    def test_missing_region(self):
        csv = "id,2021-01-01\n0_0,1\n"
        with pytest.raises(GeoDataError, match="missing"):
            load_timeseries(csv, self.grid2())

    def test_duplicate_region(self):
        csv = "id,2021-01-01\n0_0,1\n0_0,2\n1_0,3\n"
        with pytest.raises(GeoDataError, match="duplicate"):
            load_timeseries(csv, self.grid2())

    def test_unparseable_value(self):
        csv = "id,2021-01-01\n0_0,abc\n1_0,2\n"
        with pytest.raises(GeoDataError, match="unparseable"):
            load_timeseries(csv, self.grid2())

    def test_non_finite_value(self):
        csv = "id,2021-01-01\n0_0,nan\n1_0,2\n"
        with pytest.raises(GeoDataError, match="non-finite"):
            load_timeseries(csv, self.grid2())

    def test_non_monotone_timestamps(self):
        csv = "id,2021-01-02,2021-01-01\n0_0,1,2\n1_0,3,4\n"
        with pytest.raises(GeoDataError, match="strictly increasing"):
            load_timeseries(csv, self.grid2())

    def test_rows_realigned_to_region_order(self):
        rs = self.grid2()
        csv = "id,2021-01-01\n1_0,7\n0_0,3\n"
        ts = load_timeseries(csv, rs)
        assert ts.values[:, 0].tolist() == [3.0, 7.0]

    def test_400_regions_1461_daily_steps(self):
        # day count derived independently from calendar arithmetic
        first, last = date(2020, 1, 1), date(2023, 12, 31)
        n_days = (last - first).days + 1
        assert n_days == 1461

        rs = grid_regions(20, 20)
        stamps = [(first + timedelta(days=k)).isoformat() for k in range(n_days)]
        rng = np.random.default_rng(5)
        values = rng.uniform(0, 500, size=(400, n_days)).round(3)
        header = "id," + ",".join(stamps)
        lines = [header]
        for region_id, row in zip(rs.ids, values):
            lines.append(region_id + "," + ",".join(repr(float(v)) for v in row))
        ts = load_timeseries("\n".join(lines), rs)
        assert ts.values.shape == (400, 1461)
        assert np.array_equal(ts.values, values)

    def test_csv_round_trip(self, grid4, series4):
        again = load_timeseries(timeseries_to_csv(series4), grid4)
        assert again.timestamps == series4.timestamps
        assert np.array_equal(again.values, series4.values)
