import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from pixelorder import (
    build_contiguity,
    default_beta,
    grid_regions,
    region_set_to_geojson,
    timeseries_to_csv,
)
from pixelorder.server import create_app
from conftest import make_series
from oracles import mean_pairwise_hops


@pytest.fixture(scope="module")
def payload(divergent_series4_module):
    rs = grid_regions(4, 4)
    return {
        "geojson": json.dumps(region_set_to_geojson(rs)),
        "csv": timeseries_to_csv(divergent_series4_module),
        "rule": "queen",
    }


@pytest.fixture(scope="module")
def divergent_series4_module():
    grid = grid_regions(4, 4)
    t = 10
    pattern_a = np.linspace(0.0, 9.0, t)
    pattern_b = np.linspace(100.0, 55.0, t)
    rows = []
    for region_id in grid.ids:
        x, y = map(int, region_id.split("_"))
        base = pattern_a if (x + y) % 2 == 0 else pattern_b
        rows.append(base + 0.01 * (4 * y + x))
    return make_series(grid.ids, np.array(rows))


@pytest.fixture()
def client():
    return TestClient(create_app())


def create(client, payload, **overrides):
    response = client.post("/sessions", json={**payload, **overrides})
    assert response.status_code == 201, response.text
    return response.json()


class TestCreateSession:
    def test_defaults_match_the_heuristics(self, client, payload):
        info = create(client, payload)
        assert info["revision"] == 1
        assert info["ordering_revision"] == 1
        assert info["alpha"] == 0.5
        grid = grid_regions(4, 4)
        g = build_contiguity(grid, "queen")
        expected_beta = round(mean_pairwise_hops(g.ids, g.edges))
        assert info["beta"] == default_beta(g) == expected_beta
        assert info["n_regions"] == 16
        assert info["n_steps"] == 10

    def test_invalid_csv_is_422(self, client, payload):
        response = client.post("/sessions", json={**payload, "csv": "id,2021-01-01\nbogus,1\n"})
        assert response.status_code == 422
        assert response.json()["detail"]["code"] == "ingestion_error"

    def test_reposting_creates_independent_sessions(self, client, payload):
        a = create(client, payload)
        b = create(client, payload)
        assert a["session_id"] != b["session_id"]
        client.patch(f"/sessions/{a['session_id']}/params", json={"beta": 6})
        assert client.get(f"/sessions/{b['session_id']}").json()["revision"] == 1

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope").status_code == 404


class TestSetParams:
    def test_beta_only_keeps_the_ordering(self, client, payload):
        info = create(client, payload)
        sid = info["session_id"]
        before = client.patch(f"/sessions/{sid}/params", json={}).json()
        after = client.patch(f"/sessions/{sid}/params",
                             json={"beta": info["beta"] + 2}).json()
        assert after["ordering_revision"] == before["ordering_revision"]
        assert after["revision"] == before["revision"] + 1
        assert after["ordering"]["sequence"] == before["ordering"]["sequence"]

    def test_alpha_change_reorders_divergent_fixture(self, client, payload):
        sid = create(client, payload, alpha=0.0)["session_id"]
        base = client.patch(f"/sessions/{sid}/params", json={}).json()
        moved = client.patch(f"/sessions/{sid}/params", json={"alpha": 0.75}).json()
        assert moved["ordering_revision"] == base["ordering_revision"] + 1
        assert moved["ordering"]["sequence"] != base["ordering"]["sequence"]
        # moran profile depends only on data and graph
        assert moved["quality"]["moran"] == base["quality"]["moran"]

    def test_ordering_provenance_tracks_current_params(self, client, payload):
        sid = create(client, payload)["session_id"]
        doc = client.patch(f"/sessions/{sid}/params",
                           json={"alpha": 0.9, "extent": [2, 7]}).json()
        provenance = doc["ordering"]["provenance"]
        assert provenance["alpha"] == 0.9
        assert provenance["extent"] == [2, 7]
        assert provenance["method"] == "ahc"

    def test_idempotent_patch_does_not_bump_revisions(self, client, payload):
        sid = create(client, payload)["session_id"]
        first = client.patch(f"/sessions/{sid}/params", json={"alpha": 0.8}).json()
        second = client.patch(f"/sessions/{sid}/params", json={"alpha": 0.8}).json()
        assert second["revision"] == first["revision"]
        assert second["ordering_revision"] == first["ordering_revision"]
        assert second["ordering"] == first["ordering"]
        assert second["quality"] == first["quality"]

    def test_equal_window_extent_falls_back_to_tie_break_order(self, client):
        grid = grid_regions(4, 4)
        values = np.ones((16, 6))
        values[:, 3:] = np.random.default_rng(4).uniform(0, 50, size=(16, 3))
        csv = timeseries_to_csv(make_series(grid.ids, values))
        body = {"geojson": json.dumps(region_set_to_geojson(grid)), "csv": csv,
                "rule": "queen"}
        local = TestClient(create_app())
        sid = create(local, body)["session_id"]
        got = local.patch(f"/sessions/{sid}/params",
                          json={"alpha": 1.0, "extent": [0, 2]}).json()
        assert got["ordering"]["sequence"] == sorted(grid.ids)

    def test_extent_can_be_cleared(self, client, payload):
        sid = create(client, payload)["session_id"]
        set_resp = client.patch(f"/sessions/{sid}/params", json={"extent": [2, 5]}).json()
        assert set_resp["extent"] == [2, 5]
        cleared = client.patch(f"/sessions/{sid}/params", json={"extent": None}).json()
        assert cleared["extent"] is None

    def test_out_of_range_params_are_422(self, client, payload):
        sid = create(client, payload)["session_id"]
        assert client.patch(f"/sessions/{sid}/params", json={"alpha": 1.5}).status_code == 422
        assert client.patch(f"/sessions/{sid}/params", json={"beta": 0}).status_code == 422
        assert client.patch(f"/sessions/{sid}/params", json={"extent": [0, 99]}).status_code == 422


class TestViews:
    def test_fresh_layout_revision_1(self, client, payload):
        sid = create(client, payload)["session_id"]
        doc = client.get(f"/sessions/{sid}/layout").json()
        assert doc["revision"] == 1
        layout = doc["layout"]
        assert len(layout["row_order"]) == 16
        assert len(layout["widths"]) == 10
        assert sum(layout["widths"]) == pytest.approx(960.0, abs=1e-6)

    def test_full_brush_mean_equals_row_means(self, client, payload,
                                              divergent_series4_module):
        sid = create(client, payload)["session_id"]
        doc = client.post(f"/sessions/{sid}/selection",
                          json={"row_range": [0, 15], "time_range": [0, 9],
                                "stat": "mean"}).json()
        series = divergent_series4_module
        for rid, got in doc["glyph"]["values"].items():
            row = series.values[series.region_ids.index(rid)]
            assert got == pytest.approx(row.mean())

    def test_concurrent_reads_identical_bytes(self, client, payload):
        sid = create(client, payload)["session_id"]
        a = client.get(f"/sessions/{sid}/layout")
        b = client.get(f"/sessions/{sid}/layout")
        assert a.content == b.content

    def test_stale_revision_warning(self, client, payload):
        sid = create(client, payload)["session_id"]
        client.patch(f"/sessions/{sid}/params", json={"beta": 9})
        doc = client.get(f"/sessions/{sid}/layout", params={"revision": 1}).json()
        assert "stale revision 1" in doc["warning"]
        fresh = client.get(f"/sessions/{sid}/layout", params={"revision": 2}).json()
        assert "warning" not in fresh

    def test_quality_endpoint_schema(self, client, payload):
        sid = create(client, payload)["session_id"]
        doc = client.get(f"/sessions/{sid}/quality").json()
        assert set(doc["quality"]) == {"beta", "gaps", "hops", "borders", "moran"}
        assert len(doc["quality"]["gaps"]) == 15

    def test_path_endpoint(self, client, payload):
        sid = create(client, payload)["session_id"]
        doc = client.get(f"/sessions/{sid}/path").json()
        assert len(doc["path"]["points"]) == 16
        assert len(doc["path"]["hatched"]) == 15

    def test_resolved_colors_on_demand(self, client, payload):
        sid = create(client, payload)["session_id"]
        plain = client.get(f"/sessions/{sid}/layout").json()["layout"]
        resolved = client.get(f"/sessions/{sid}/layout",
                              params={"resolve_colors": "true"}).json()["layout"]
        assert "colors" not in plain
        assert resolved["colors"][0][0].startswith("#")

    def test_invalid_selection_is_422(self, client, payload):
        sid = create(client, payload)["session_id"]
        bad = client.post(f"/sessions/{sid}/selection",
                          json={"row_range": [0, 99], "time_range": [0, 1],
                                "stat": "mean"})
        assert bad.status_code == 422


class TestSnapshots:
    def test_dataset_snapshot_written(self, payload, tmp_path):
        app = create_app(snapshot_dir=str(tmp_path))
        local = TestClient(app)
        info = create(local, payload)
        snap = tmp_path / f"{info['session_id']}.json"
        assert snap.exists()
        doc = json.loads(snap.read_text())
        assert doc["rule"] == "queen"
        assert len(doc["geojson"]["features"]) == 16
