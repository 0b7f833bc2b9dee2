"""Acceptance suite: one test per criterion, one printed verdict line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""
import math
import time
from dataclasses import replace

import numpy as np
import pytest
from scipy.special import erfcx

import dirform as df
from dirform.boundary import Side, boundary_classify
from dirform.convergence import CorollaryCondition, Verdict, run_convergence
from dirform.grids import GridConfig, build_grid
from dirform.interval import Interval, REAL_LINE
from dirform.scale import ScaleFunction, SmoothDensity, natural_scale
from dirform.sets import ExplicitCellMasses, FatCantorSet
from dirform.solver import GeneratorMatrix, l2m_inner, l2m_norm
from dirform.spaces import (BoundaryCondition, CoreComposite, DirichletSpaceSpec,
                            Transience, bump_profile, energy)


def _verdict_line(num: int, label: str, started: float):
    print(f"criterion {num} ({label}): PASS in {time.time() - started:.1f}s")


def test_criterion_1_bijection_roundtrip(rng):
    t0 = time.time()
    line = REAL_LINE
    fixtures = [
        (df.IntervalUnionSet([(0.0, 1.0)], Interval(0, 1, 0.5)), (0.0, 1.0)),
        (df.IntervalUnionSet([(0.0, 1.0), (1.0, 2.0)], Interval(0, 2, 1.0)), (0.0, 2.0)),
        (df.IntervalUnionSet([(-1.0, -0.2), (-0.2, 0.5), (0.5, 1.0)],
                             Interval(-1, 1, 0.0)), (-1.0, 1.0)),
        (df.IntervalUnionSet([(-5.0, 5.0)], line), (-6.0, 6.0)),
        (df.IntervalUnionSet([(-math.inf, 0.0), (0.0, math.inf)], line), (-6.0, 6.0)),
        (df.IntervalUnionSet([(0.0, 0.5), (0.6, 1.0)], Interval(0, 1, 0.25)), (0.0, 1.0)),
        (df.fat_cantor(), (-6.0, 6.0)),
        (df.fat_cantor(df.CellMasses(0.5, 0.5, 0)), (-6.0, 6.0)),
        (df.fat_cantor(df.CellMasses(0.9, 0.3, 2)), (-6.0, 6.0)),
        (df.fat_cantor(depth=20), (-6.0, 6.0)),
        (FatCantorSet(ExplicitCellMasses({0: 0.3}), interval=Interval(0, 1, 0.5)),
         (0.0, 1.0)),
        (df.fat_cantor(df.CellMasses(0.99, 0.4, 4)), (-6.0, 6.0)),
    ]
    base = df.fat_cantor()
    fixtures += [(df.comb_sequence(base, n), (-6.0, 6.0)) for n in (2, 3, 5, 9)]
    fixtures += [(df.window_sequence(base, n), (-8.0, 8.0)) for n in (1, 2, 3, 7)]
    assert len(fixtures) == 20
    for G, (lo, hi) in fixtures:
        back = df.set_from_scale(df.scale_from_set(G))
        for _ in range(1000):
            c = rng.uniform(lo, hi)
            d = c + rng.uniform(1e-6, (hi - lo) / 2)
            assert abs(back.measure(c, d) - G.measure(c, d)) <= 1e-10
    _verdict_line(1, "bijection roundtrip, 20 fixtures x 1000 intervals", t0)


def _brownian_matrix(n_nodes: int):
    spec = DirichletSpaceSpec(natural_scale(REAL_LINE), df.lebesgue(),
                              BoundaryCondition.ABSORBING)
    cfg = GridConfig(n_nodes=n_nodes, radius=20.0, uniform_fraction=0.0, refine=False)
    grid = build_grid(spec, cfg)
    return grid, GeneratorMatrix(grid)


def test_criterion_2_solver_validation():
    t0 = time.time()
    sup_errors = {alpha: [] for alpha in (0.5, 1.0, 2.0)}
    for n in (500, 1000, 2000, 4000):
        grid, mat = _brownian_matrix(n)
        x = grid.nodes
        assert len(x) == n
        f = np.exp(-x ** 2)
        for alpha in sup_errors:
            c = math.sqrt(2 * alpha)
            exact = (math.sqrt(math.pi) / (2 * c)) * np.exp(-x ** 2) * (
                erfcx(c / 2 - x) + erfcx(c / 2 + x))
            u = mat.resolvent(alpha, f)
            sup_errors[alpha].append(float(np.max(np.abs(u - exact))))
    for alpha, errs in sup_errors.items():
        assert errs[-1] <= 1e-3, f"alpha={alpha}: {errs[-1]}"
        assert all(b < a for a, b in zip(errs[:-1], errs[1:])), (alpha, errs)
    _verdict_line(2, "Brownian resolvent vs kernel oracle", t0)


def test_criterion_3_decreasing_sequence_scenario():
    t0 = time.time()
    ex = df.paper_example("example51_recurrent_to_transient")
    rep = run_convergence(ex.scenario)
    assert rep.corollary is CorollaryCondition.CONDITION1
    assert rep.nesting.ok
    for s in rep.series:
        assert s.monotone_tail, (s.alpha, s.test_fn, s.column, s.errors)
        assert s.final_error <= 1e-2, (s.alpha, s.test_fn, s.column, s.final_error)
    assert rep.verdict is Verdict.CONVERGENCE_OBSERVED
    _verdict_line(3, "combs down to the Cantor-complement limit, Lebesgue measure", t0)


def test_criterion_4_increasing_sequence_scenario():
    t0 = time.time()
    ex = df.paper_example("example51_transient_to_recurrent")
    rep = run_convergence(ex.scenario)
    assert rep.nesting.ok
    for s in rep.series:
        assert s.monotone_tail, (s.alpha, s.test_fn, s.column, s.errors)
        assert s.final_error <= 1e-2, (s.alpha, s.test_fn, s.column, s.final_error)
    assert rep.verdict is Verdict.CONVERGENCE_OBSERVED
    _verdict_line(4, "windows up to the full line, Brownian limit", t0)


def test_criterion_5_two_limit_realizations():
    t0 = time.time()
    ex = df.paper_example("example31")
    rep = run_convergence(ex.scenario)
    tail = [i for i, n in enumerate(rep.indices) if n >= 8]
    for alpha in rep.alphas:
        for fn in rep.test_fns:
            e_full = rep.errors(alpha, fn, "F")
            e_abs = rep.errors(alpha, fn, "F0")
            for i in tail:
                assert e_full[i] < 1e-2, (alpha, fn, e_full)
            floor = max(1e-3, 10.0 * e_full[-1])
            for i in tail:
                assert e_abs[i] >= floor, (alpha, fn, e_abs, floor)
    _verdict_line(5, "full-limit errors fall, absorbing-limit errors stay up", t0)


def test_criterion_6_global_property_instability():
    t0 = time.time()
    for name, seq_expect, lim_expect in (
        ("example51_recurrent_to_transient",
         (Transience.RECURRENT, None), (Transience.TRANSIENT, None)),
        ("example51_transient_to_recurrent",
         (Transience.TRANSIENT, None), (Transience.RECURRENT, True)),
        ("example52_nonconservative_to_conservative",
         (None, False), (None, True)),
        ("example52_conservative_to_nonconservative",
         (None, True), (None, False)),
    ):
        ex = df.paper_example(name)
        outs = df.classify_example(ex, sample_indices=(1, 8, 32))
        for o in outs[:-1]:
            if seq_expect[0] is not None:
                assert o.observed_transience is seq_expect[0], (name, o)
            if seq_expect[1] is not None:
                assert o.observed_conservative is seq_expect[1], (name, o)
        lim = outs[-1]
        if lim_expect[0] is not None:
            assert lim.observed_transience is lim_expect[0], (name, lim)
        if lim_expect[1] is not None:
            assert lim.observed_conservative is lim_expect[1], (name, lim)

    # the non-conservative limit's lower end: the certified integral equals
    # the direct quadrature of the profile within 1%
    ex = df.paper_example("example52_conservative_to_nonconservative")
    speed = ex.scenario.speed
    scale = ex.scenario.limit_scale()
    b = boundary_classify(scale, speed, Side.LOWER)
    assert b.finite_time_approachable
    direct = speed.profile.abs_integral_lower(0.0)
    assert b.feller_value == pytest.approx(direct, rel=1e-2)
    _verdict_line(6, "recurrence/transience and conservativeness flips", t0)


def test_criterion_7_structural_invariants(rng, heavy_fat, default_fat):
    t0 = time.time()
    grid, mat = _brownian_matrix(2000)
    f = rng.standard_normal(len(grid.nodes))
    g = rng.standard_normal(len(grid.nodes))

    # resolvent identity
    a, b = 0.7, 1.9
    lhs = mat.resolvent(a, f) - mat.resolvent(b, f)
    rhs = (b - a) * mat.resolvent(a, mat.resolvent(b, f))
    assert l2m_norm(grid, lhs - rhs) <= 1e-8 * max(l2m_norm(grid, lhs), 1e-30)

    # mass symmetry
    ip1 = l2m_inner(grid, mat.resolvent(1.3, f), g)
    ip2 = l2m_inner(grid, f, mat.resolvent(1.3, g))
    assert abs(ip1 - ip2) <= 1e-8 * max(abs(ip1), 1e-30)

    # sub-Markov bounds
    h = np.clip(np.sin(grid.nodes) + 0.4, 0.0, 1.0)
    for alpha in (0.5, 2.0):
        u = mat.resolvent(alpha, h)
        assert np.min(alpha * u) >= -1e-10 and np.max(alpha * u) <= 1 + 1e-10

    # Galerkin energy consistency under grid doubling
    spec = DirichletSpaceSpec(natural_scale(REAL_LINE), df.lebesgue(),
                              BoundaryCondition.ABSORBING)
    u_exact = CoreComposite(bump_profile(0.0, 2.0), spec.scale)
    target = energy(u_exact, spec)
    errs = []
    for n in (250, 500, 1000, 2000):
        gr = build_grid(spec, GridConfig(n_nodes=n, radius=6.0,
                                         uniform_fraction=0.0, refine=False))
        vals = np.array([u_exact(float(x)) for x in gr.nodes])
        errs.append(abs(GeneratorMatrix(gr).dirichlet_energy(vals) - target))
    for coarse, fine in zip(errs[:-1], errs[1:]):
        assert fine <= 1.5 * (coarse / 2.0), errs

    # self-convergence of a constant sequence: ten times the solver residual
    errs = df.convergence.self_convergence_errors(
        df.cauchy(), heavy_fat, GridConfig(n_nodes=400, radius=5.0), alphas=(1.0,))
    assert max(errs) <= 10 * 1e-10

    # subspace chain for the comb sequence up to n = 32
    prev = None
    for n in (1, 2, 4, 8, 16, 32):
        s = df.comb_sequence(default_fat, n).scale()
        if prev is not None:
            assert df.is_admissible_scaling(s, prev), n
        prev = s
    assert df.is_admissible_scaling(default_fat.scale(), prev)
    _verdict_line(7, "resolvent identity, symmetry, bounds, consistency, chains", t0)


def test_criterion_8_spatial_transform_equivariance():
    t0 = time.time()
    j = ScaleFunction(REAL_LINE, SmoothDensity(
        lambda x: 1.0 + 0.3 * math.cos(x),
        antiderivative=lambda x: x + 0.3 * math.sin(x) if math.isfinite(x) else x),
        "wavy")
    ex = df.paper_example("example31")
    rep0 = run_convergence(ex.scenario)
    rep1 = run_convergence(replace(ex.scenario, transform=j))
    assert rep0.verdict is rep1.verdict
    # discretization tolerance 1e-3 (solver validation scale); sequences must
    # agree within five times that, relative
    for s0, s1 in zip(rep0.series, rep1.series):
        assert (s0.alpha, s0.test_fn, s0.column) == (s1.alpha, s1.test_fn, s1.column)
        assert s0.verdict is s1.verdict
        for e0, e1 in zip(s0.errors, s1.errors):
            assert abs(e0 - e1) <= 5e-3 * max(e0, 1e-6), (s0.alpha, s0.test_fn)
    _verdict_line(8, "verdicts and errors invariant under a smooth homeomorphism", t0)
