"""Shared fixtures: the three worked configurations used across the suite.

``ellipse_ring``: concentric ellipse pair, the closed-form annulus case.
``coupled_ring``: ring with equalities and mixed norms whose inner member
list is empty as printed (its equality row is inconsistent with the 0.2
ball), exercising the general solver and the invertible-stack raster path.
``ring_zonotope`` + ``cutter_zonotope``: the box-norm ring and the zonotope
it gets intersected with.
"""

import numpy as np
import pytest

import roundsets as rs


@pytest.fixture(scope="session")
def ellipse_outer() -> rs.Ccg:
    return rs.Ccg([0, 0], [[2, 0], [0, 1.5]], rs.single_group(2, 2.0, 1.0))


@pytest.fixture(scope="session")
def ellipse_inner() -> rs.Ccg:
    return rs.Ccg([0, 0], [[2, 0], [0, 1.5]], rs.single_group(2, 2.0, 0.5))


@pytest.fixture(scope="session")
def ellipse_ring(ellipse_outer, ellipse_inner) -> rs.Rcg:
    return rs.from_difference(ellipse_outer, ellipse_inner)


@pytest.fixture(scope="session")
def coupled_outer() -> rs.Ccg:
    return rs.Ccg(
        [0, 0],
        [[3, 0, 1], [0, 2, 1]],
        rs.single_group(3, "inf", 1.0),
        [[1, 0.5, 1]],
        [1],
    )


@pytest.fixture(scope="session")
def coupled_inner() -> rs.Ccg:
    return rs.Ccg(
        [1.2, 1],
        [[3, 0, 1], [0, 2, 1]],
        rs.single_group(3, "2", 0.2),
        [[1, 0, 1]],
        [1],
    )


@pytest.fixture(scope="session")
def coupled_ring(coupled_outer, coupled_inner) -> rs.Rcg:
    return rs.from_difference(coupled_outer, coupled_inner)


@pytest.fixture(scope="session")
def ring_zonotope() -> rs.Rcg:
    G = [[2, 0.5], [0.5, 2]]
    return rs.roundabout_zonotope([1, 1], G, [1, 1], G, 0.6)


@pytest.fixture(scope="session")
def cutter_zonotope() -> rs.Ccg:
    return rs.Ccg(
        [3, 2.5],
        [[1, -0.8, 0.3], [0.8, 1, 0.1]],
        rs.single_group(3, "inf", 1.0),
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(42)


def random_ccg(rng: np.random.Generator, dim: int = 2, max_gen: int = 4) -> rs.Ccg:
    """Random well-scaled set for property sweeps.

    Generators stay in [-2, 2], at most one equality row so feasibility is
    common, and each group picks its own norm.
    """
    m = int(rng.integers(1, max_gen + 1))
    c = rng.uniform(-2, 2, size=dim)
    G = rng.uniform(-2, 2, size=(dim, m))
    cut = sorted(rng.choice(np.arange(2, m + 1), size=int(rng.integers(0, min(2, m - 1) + 1)), replace=False)) if m > 1 else []
    bounds = [1] + list(cut) + [m + 1]
    groups = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        p = float(rng.choice([1.0, 2.0, np.inf]))
        groups.append(rs.NormGroup(tuple(range(lo, hi)), p, 1.0))
    if rng.random() < 0.4 and m >= 2:
        row = rng.uniform(-1, 1, size=(1, m))
        # keep the flat through a feasible beta so the set is nonempty
        beta0 = rng.uniform(-0.3, 0.3, size=m)
        A, b = row, row @ beta0
    else:
        A, b = (), ()
    return rs.validate_ccg(rs.Ccg(c, G, tuple(groups), A, b))
