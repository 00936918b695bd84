import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pixelorder import (
    TimeSeriesMatrix,
    build_contiguity,
    grid_regions,
)


@pytest.fixture(scope="session")
def grid4():
    return grid_regions(4, 4)


@pytest.fixture(scope="session")
def rook4(grid4):
    return build_contiguity(grid4, "rook")


@pytest.fixture(scope="session")
def queen4(grid4):
    return build_contiguity(grid4, "queen")


def make_series(region_ids, values, start="2021-01-01"):
    """Helper: series with daily timestamps starting at `start`."""
    from datetime import date, timedelta

    values = np.asarray(values, dtype=float)
    first = date.fromisoformat(start)
    stamps = tuple(
        (first + timedelta(days=k)).isoformat() for k in range(values.shape[1])
    )
    return TimeSeriesMatrix(tuple(region_ids), stamps, values)


@pytest.fixture(scope="session")
def series4(grid4):
    rng = np.random.default_rng(2024)
    return make_series(grid4.ids, rng.uniform(0.0, 100.0, size=(16, 12)))


@pytest.fixture(scope="session")
def divergent_series4(grid4):
    """Two temporal clusters assigned in a checkerboard, so time-series
    similarity and geography disagree about who belongs together."""
    t = 10
    pattern_a = np.linspace(0.0, 9.0, t)
    pattern_b = np.linspace(100.0, 55.0, t)
    rows = []
    for region_id in grid4.ids:
        x, y = map(int, region_id.split("_"))
        base = pattern_a if (x + y) % 2 == 0 else pattern_b
        rows.append(base + 0.01 * (4 * y + x))
    return make_series(grid4.ids, np.array(rows))
