"""Path sampling, exact-Hermite evaluation, statistical checks."""

from fractions import Fraction as Q

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import wienerforms as wf
from wienerforms import montecarlo as mc
from wienerforms.chaos import add as fadd
from wienerforms.randomfields import generate_field


def test_sampling_reproducible(unit_grid):
    a = mc.sample_paths(unit_grid, 2, 3, 50, seed=42)
    b = mc.sample_paths(unit_grid, 2, 3, 50, seed=42)
    assert np.array_equal(a.increments, b.increments)
    c = mc.sample_paths(unit_grid, 2, 3, 50, seed=43)
    assert not np.array_equal(a.increments, c.increments)
    sample = a[7]
    assert sample.increments.shape == (3, 2)


def test_sampler_moments(unit_grid):
    n = 100_000
    batch = mc.sample_paths(unit_grid, 1, 1, n, seed=1)
    b = mc.evaluate(wf.brownian(unit_grid), batch)
    assert abs(b.mean()) <= 4.0 / np.sqrt(n)
    assert abs(b.var() - 1.0) <= 4.0 * np.sqrt(2.0 / n)


def test_single_path_evaluate(unit_grid):
    batch = mc.sample_paths(unit_grid, 1, 1, 3, seed=5)
    f = wf.brownian(unit_grid)
    assert mc.evaluate(f, batch[1]) == pytest.approx(mc.evaluate(f, batch)[1])


@pytest.mark.parametrize("refinement", [1, 2, 4])
def test_hermite_exactness(unit_grid, refinement):
    batch = mc.sample_paths(unit_grid, 1, refinement, 2000, seed=3)
    bt = batch.increments[:, :, 0].sum(axis=1)
    i2 = wf.field(unit_grid, 1, 0, {2: wf.kernel(unit_grid, 1, 2, [((0, 0), 1)])})
    i2_half = wf.field(
        unit_grid, 1, 0, {2: wf.kernel(unit_grid, 1, 2, [((0, 0), 1, {0: (0, 1)})])},
        symmetrize_chaos=False,
    )
    i3 = wf.field(unit_grid, 1, 0, {3: wf.kernel(unit_grid, 1, 3, [((0, 0, 0), 1)])})
    assert np.max(np.abs(mc.evaluate(i2, batch) - (bt**2 - 1))) < 1e-12
    assert np.max(np.abs(mc.evaluate(i2_half, batch) - (bt**2 - 1) / 2)) < 1e-12
    assert np.max(np.abs(mc.evaluate(i3, batch) - (bt**3 - 3 * bt))) < 1e-11


def test_field_evaluation_matches_path(two_cell_grid):
    # density at s equal to the path value at s, on a refined grid
    specs = []
    for cs in range(2):
        for cr in range(cs + 1):
            specs.append(((cs, cr), 1, ({cs: (1, 0)} if cr == cs else None)))
    u = wf.field(two_cell_grid, 1, 1, {1: wf.kernel(two_cell_grid, 1, 2, specs)})
    batch = mc.sample_paths(two_cell_grid, 1, 4, 500, seed=11)
    points = mc.halton_parameter_points(1, 6, batch.n_substeps)
    vals = mc.evaluate_field(u, batch, points)
    cum = np.cumsum(batch.increments[:, :, 0], axis=1)
    for i, (b,) in enumerate(points):
        assert np.max(np.abs(vals[i, :, 0] - cum[:, b - 1])) < 1e-12


def test_halton_points_distinct():
    pts = mc.halton_parameter_points(2, 40, 6)
    for p in pts:
        assert len(set(p)) == 2
        assert all(1 <= b <= 6 for b in p)


def test_mc_check_identical_and_corrupted(unit_grid):
    b = wf.brownian(unit_grid)
    same = mc.mc_check(b, b, grid=unit_grid, m=1, n_paths=500, refinement=1, seed=5)
    assert same.passed and same.max_abs == 0.0
    shifted = fadd(b, wf.constant(unit_grid, 1, 1))
    bad = mc.mc_check(
        b, shifted, grid=unit_grid, m=1, n_paths=500, refinement=1, seed=5, bias_coeff=0.0
    )
    assert not bad.passed


def test_mc_check_representation_pathwise(unit_grid):
    u = generate_field(unit_grid, 1, 1, 3, seed=4, skew=True)
    dec = wf.represent_co1(u)
    rhs = fadd(dec.exact_part, dec.remainder)
    res = mc.mc_check(u, rhs, grid=unit_grid, m=1, n_paths=2000, refinement=1, seed=6)
    assert res.passed
    assert res.rel_max <= 1e-10


def test_mixed_component_bias_decreases(unit_grid):
    f = wf.field(
        unit_grid, 2, 0,
        {2: wf.kernel(unit_grid, 2, 2, [((0, 0), {(0, 1): Q(1)}, {0: (0, 1)})])},
    )
    exact = float(wf.l2_norm_sq(f))
    biases = []
    for r in (1, 2, 4, 8):
        res = mc.mc_check(
            exact,
            mc.pathwise_square(f),
            grid=unit_grid,
            m=2,
            n_paths=60_000,
            refinement=r,
            seed=9,
        )
        biases.append(abs(res.mean))
    assert all(x > y for x, y in zip(biases, biases[1:]))


def test_pairwise_sum_deterministic():
    v = np.random.default_rng(0).normal(size=1001)
    assert mc.pairwise_sum(v) == mc.pairwise_sum(v.copy())
    assert mc.pairwise_sum(v) == pytest.approx(v.sum(), rel=1e-12)


@given(st.integers(0, 5000))
@settings(max_examples=15, deadline=None)
def test_pathwise_linearity(seed):
    grid = wf.TimeGrid.uniform(2)
    f = generate_field(grid, 1, 0, 3, seed)
    g = generate_field(grid, 1, 0, 3, seed + 1)
    batch = mc.sample_paths(grid, 1, 1, 64, seed=2)
    lhs = mc.evaluate(fadd(f, g), batch)
    rhs = mc.evaluate(f, batch) + mc.evaluate(g, batch)
    assert np.allclose(lhs, rhs, atol=1e-10)


@given(st.integers(0, 5000))
@settings(max_examples=10, deadline=None)
def test_m2_evaluation_consistent_under_canonicalisation(seed):
    # two different constructions of the same random variable must evaluate
    # identically path by path
    grid = wf.TimeGrid.uniform(2)
    f = generate_field(grid, 2, 0, 2, seed)
    g = fadd(fadd(f, f), wf.chaos.scale(f, -1))
    batch = mc.sample_paths(grid, 2, 2, 64, seed=3)
    assert np.allclose(mc.evaluate(f, batch), mc.evaluate(g, batch), atol=1e-10)
