"""Shared fixtures for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from geofill.model import BoundingBox, LocalNeighborhood, SampleSet
from geofill.evaluation import synth_surface


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20260825))


@pytest.fixture
def unit_square_samples():
    """100 deterministic points spanning the unit square exactly."""
    g = np.linspace(0.0, 1.0, 10)
    gx, gy = np.meshgrid(g, g)
    xs = gx.ravel()
    ys = gy.ravel()
    return SampleSet(xs, ys, xs + ys)


@pytest.fixture
def ramp_samples():
    """1,000 random points on the plane z = 2x + 3y over [0, 10]^2."""
    r = np.random.Generator(np.random.PCG64(99))
    xs = r.uniform(0.0, 10.0, 1000)
    ys = r.uniform(0.0, 10.0, 1000)
    return SampleSet(xs, ys, 2.0 * xs + 3.0 * ys)


@pytest.fixture(scope="session")
def hills_extent():
    return BoundingBox(0.0, 100.0, 0.0, 100.0)


@pytest.fixture(scope="session")
def hills20k(hills_extent):
    """The benchmark surface: 20,000 seeded points on the Gaussian-hills field."""
    return synth_surface("hills", hills_extent, 20000, 42)


@pytest.fixture
def make_neighborhood():
    """Build a LocalNeighborhood from raw points and a query location."""

    def build(xs, ys, values, qx=0.0, qy=0.0):
        xs = np.asarray(xs, dtype=np.float64)
        ys = np.asarray(ys, dtype=np.float64)
        values = np.asarray(values, dtype=np.float64)
        d = np.sqrt((xs - qx) ** 2 + (ys - qy) ** 2)
        order = np.lexsort((np.arange(xs.size), d))
        return LocalNeighborhood(
            xs[order], ys[order], values[order], d[order], order
        )

    return build
