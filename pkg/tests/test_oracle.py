"""Raster and sampling oracles."""

import numpy as np
import pytest

import roundsets as rs


def _box(cx, cy, hx, hy):
    return rs.Ccg([cx, cy], [[hx, 0], [0, hy]], rs.single_group(2, "inf", 1.0))


# --------------------------------------------------------------------------
# raster grid


def test_grid_validation():
    bits = np.zeros((4, 4), bool)
    with pytest.raises(rs.ShapeError):
        rs.RasterGrid((0, 1, 0, 1), 4, 4, bits, np.zeros((3, 4), bool))
    with pytest.raises(rs.ShapeError):
        rs.RasterGrid((1, 0, 0, 1), 4, 4, bits, bits)
    with pytest.raises(rs.ShapeError):
        rs.RasterGrid((0, 1, 0, 1), 1, 1, np.zeros((1, 1), bool), np.zeros((1, 1), bool))
    filled = np.ones((4, 4), bool)
    with pytest.raises(rs.ShapeError):
        rs.RasterGrid((0, 1, 0, 1), 4, 4, filled, filled)


def test_cell_centers_layout():
    g = rs.RasterGrid((0, 1, 10, 12), 2, 2, np.zeros((2, 2), bool), np.zeros((2, 2), bool))
    centers = g.cell_centers()
    assert centers.shape == (2, 4)
    # row-major from the bottom row up
    assert np.allclose(centers[:, 0], [0.25, 10.5])
    assert np.allclose(centers[:, 1], [0.75, 10.5])
    assert np.allclose(centers[:, 2], [0.25, 11.5])


def test_box_fills_a_quarter():
    g = rs.raster_membership(_box(0, 0, 1, 1), (-2, 2, -2, 2), 40, 40)
    assert g.filled_fraction == pytest.approx(0.25)
    assert g.band.sum() == 0


def test_rows_run_upward():
    g = rs.raster_membership(_box(0.5, 0.75, 0.5, 0.25), (0, 1, 0, 1), 4, 4)
    assert g.bits[0].sum() == 0  # bottom row below the box
    assert g.bits[-1].sum() == 4


def test_boundary_center_lands_in_band():
    disc = rs.Ccg([0, 0], [[1, 0], [0, 1]], rs.single_group(2, 2.0, 1.0))
    # cell (0, 0) center is (0.8, 0.6), exactly on the circle
    g = rs.raster_membership(disc, (0.75, 0.95, 0.55, 0.75), 2, 2)
    assert g.band[0, 0]
    assert not g.bits[0, 0]
    assert g.band.sum() == 1
    assert g.bits.sum() == 0


def test_raster_rejects_bad_inputs(ellipse_outer):
    with pytest.raises(rs.ShapeError):
        rs.raster_membership(rs.Halfspace([1, 0], 0), (0, 1, 0, 1), 4, 4)
    solid = rs.Ccg([0, 0, 0], np.eye(3), rs.single_group(3, 2.0, 1.0))
    with pytest.raises(rs.DimensionError):
        rs.raster_membership(solid, (0, 1, 0, 1), 4, 4)


def test_raster_is_deterministic(ellipse_ring):
    a = rs.raster_membership(ellipse_ring, (-3, 3, -3, 3), 50, 50)
    b = rs.raster_membership(ellipse_ring, (-3, 3, -3, 3), 50, 50)
    assert a == b


# --------------------------------------------------------------------------
# comparisons


def test_compare_identical(ellipse_ring):
    a = rs.raster_membership(ellipse_ring, (-3, 3, -3, 3), 30, 30)
    cmp = rs.compare_rasters(a, a)
    assert cmp.differing == 0
    assert cmp.off_band_differing == 0
    assert cmp.off_band_fraction == 0.0


def test_compare_full_against_empty():
    full = rs.raster_membership(_box(0, 0, 5, 5), (-1, 1, -1, 1), 10, 10)
    empty = rs.raster_membership(_box(50, 50, 0.1, 0.1), (-1, 1, -1, 1), 10, 10)
    assert full.filled_fraction == 1.0
    assert empty.filled_fraction == 0.0
    cmp = rs.compare_rasters(full, empty)
    assert cmp.off_band_fraction == 1.0


def test_compare_requires_matching_grids(ellipse_ring):
    a = rs.raster_membership(ellipse_ring, (-3, 3, -3, 3), 30, 30)
    b = rs.raster_membership(ellipse_ring, (-3, 3, -3, 3), 31, 30)
    with pytest.raises(rs.ShapeError):
        rs.compare_rasters(a, b)


# --------------------------------------------------------------------------
# sampling


def test_samples_are_members(coupled_outer):
    pts = rs.sample_members(coupled_outer, 200)
    assert pts.shape == (200, 2)
    batch = rs.ccg_member_batch(pts.T, coupled_outer)
    assert (batch.status == 1).all()


def test_sampling_is_seeded(ellipse_outer):
    a = rs.sample_members(ellipse_outer, 50, seed=3)
    b = rs.sample_members(ellipse_outer, 50, seed=3)
    c = rs.sample_members(ellipse_outer, 50, seed=4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_box_sampler_looks_uniform():
    pts = rs.sample_members(_box(0, 0, 1, 1), 4000, seed=11)
    for sx in (-1, 1):
        for sy in (-1, 1):
            n = int(((np.sign(pts[:, 0]) == sx) & (np.sign(pts[:, 1]) == sy)).sum())
            assert 850 <= n <= 1150


def test_ring_samples_avoid_the_hole(ellipse_ring):
    pts = rs.sample_members(ellipse_ring, 300, seed=5)
    Ginv = np.linalg.inv(np.array([[2.0, 0.0], [0.0, 1.5]]))
    norms = np.linalg.norm(pts @ Ginv.T, axis=1)
    assert (norms > 0.5).all()
    assert (norms <= 1.0 + 1e-9).all()


def test_sampling_an_empty_set_exhausts(coupled_inner):
    with pytest.raises(rs.SamplingExhausted):
        rs.sample_members(coupled_inner, 10)


def test_sampling_rejects_bad_count(ellipse_outer):
    with pytest.raises(rs.ShapeError):
        rs.sample_members(ellipse_outer, 0)
