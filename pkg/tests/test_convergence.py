import math
from dataclasses import replace

import numpy as np
import pytest

import dirform as df
from dirform.convergence import (CorollaryCondition, Direction, Scenario, Verdict,
                                 check_nested_domains, corollary31_check,
                                 run_convergence, self_convergence_errors, CSV_HEADER)
from dirform.errors import AdmissibilityError
from dirform.grids import GridConfig
from dirform.interval import Interval
from dirform.sets import ExplicitCellMasses, FatCantorSet
from dirform.spaces import BoundaryCondition


class TestNestedDomains:
    def test_comb_chain_decreasing(self, default_fat):
        sets = [df.comb_sequence(default_fat, n) for n in (1, 2, 4, 8)]
        rep = check_nested_domains(sets, default_fat, Direction.DECREASING, (-6.0, 6.0))
        assert rep.ok

    def test_shuffled_chain_rejected(self, default_fat):
        # out of order: the wider-toothed member placed later
        sets = [df.comb_sequence(default_fat, 4), df.comb_sequence(default_fat, 3)]
        rep = check_nested_domains(sets, default_fat, Direction.DECREASING, (-6.0, 6.0))
        assert not rep.ok

    def test_window_chain_increasing(self, default_fat):
        sets = [df.window_sequence(default_fat, n) for n in (1, 2, 4)]
        rep = check_nested_domains(sets, None, Direction.INCREASING, (-6.0, 6.0))
        assert rep.ok


class TestCorollaryCheck:
    def test_lebesgue_gives_condition1(self, default_fat):
        sets = [df.comb_sequence(default_fat, n) for n in (1, 2)]
        got = corollary31_check(df.lebesgue(), default_fat, sets)
        assert got is CorollaryCondition.CONDITION1

    def test_finite_measure_comb_gives_neither(self, default_fat):
        sets = [df.comb_sequence(default_fat, n) for n in (1, 2, 4)]
        got = corollary31_check(df.cauchy(), default_fat, sets)
        assert got is CorollaryCondition.NEITHER

    def test_bounded_regular_fixture_gives_condition2(self):
        iv = Interval(0.0, 1.0, 0.5)
        G = FatCantorSet(ExplicitCellMasses({0: 0.5}), interval=iv)
        sets = [df.comb_sequence(G, n) for n in (2, 4)]
        got = corollary31_check(df.lebesgue(iv), G, sets)
        assert got is CorollaryCondition.CONDITION2


def test_self_convergence_is_exact(heavy_fat):
    errs = self_convergence_errors(df.cauchy(), heavy_fat,
                                   GridConfig(n_nodes=300, radius=5.0),
                                   alphas=(1.0,))
    assert max(errs) <= 1e-12


@pytest.fixture(scope="module")
def small_scenario(heavy_fat):
    return Scenario(
        name="small",
        speed=df.cauchy(),
        set_for=lambda n: df.comb_sequence(heavy_fat, n),
        limit_set=heavy_fat,
        direction=Direction.DECREASING,
        bc_limit=BoundaryCondition.FULL,
        alphas=(1.0,),
        test_functions={"gauss": lambda x: np.exp(-np.asarray(x) ** 2)},
        indices=(1, 2, 4, 8),
        grid=GridConfig(n_nodes=400, radius=5.0),
    )


class TestRunConvergence:
    def test_report_shape_and_csv(self, small_scenario):
        rep = run_convergence(small_scenario)
        assert rep.verdict is Verdict.CONVERGENCE_OBSERVED
        rows = rep.csv_rows()
        assert len(rows) == len(small_scenario.indices)
        assert len(rows[0]) == len(CSV_HEADER)
        e_f = rep.errors(1.0, "gauss", "F")
        assert e_f[-1] <= e_f[0]

    def test_both_columns_present(self, small_scenario):
        rep = run_convergence(small_scenario)
        assert rep.errors(1.0, "gauss", "F0") != rep.errors(1.0, "gauss", "F")

    def test_threads_match_serial(self, small_scenario):
        rep1 = run_convergence(small_scenario, threads=1)
        rep2 = run_convergence(small_scenario, threads=3)
        for s1, s2 in zip(rep1.series, rep2.series):
            assert s1.errors == s2.errors

    def test_nesting_gate_blocks_verdict(self, small_scenario):
        # mislabeling the comb chain as increasing fails the nesting check,
        # which must veto the observed verdict no matter the errors
        scn = replace(small_scenario, direction=Direction.INCREASING)
        rep = run_convergence(scn)
        assert not rep.nesting.ok
        assert rep.verdict is not Verdict.CONVERGENCE_OBSERVED

    def test_monotone_tail_flag(self, small_scenario):
        rep = run_convergence(small_scenario)
        for s in rep.series:
            if s.column == "F":
                assert s.monotone_tail


def test_inadmissible_sequence_rejected():
    bad = df.IntervalUnionSet([(0.0, 1.0)])      # zero measure on (2, 3)
    scn = Scenario(
        name="bad", speed=df.lebesgue(), set_for=lambda n: bad, limit_set=bad,
        direction=Direction.DECREASING, alphas=(1.0,),
        test_functions={"gauss": lambda x: np.exp(-np.asarray(x) ** 2)},
        indices=(1, 2), grid=GridConfig(n_nodes=100, radius=5.0))
    with pytest.raises(AdmissibilityError):
        run_convergence(scn)


def test_transform_equivariance_small(small_scenario):
    from dirform.scale import ScaleFunction, SmoothDensity
    from dirform.interval import REAL_LINE

    j = ScaleFunction(REAL_LINE, SmoothDensity(
        lambda x: 1.0 + 0.3 * math.cos(x),
        antiderivative=lambda x: x + 0.3 * math.sin(x) if math.isfinite(x) else x),
        "wavy")
    rep0 = run_convergence(small_scenario)
    rep1 = run_convergence(replace(small_scenario, transform=j))
    assert rep0.verdict is rep1.verdict
    for s0, s1 in zip(rep0.series, rep1.series):
        for a, b in zip(s0.errors, s1.errors):
            assert abs(a - b) <= 5e-3 * max(a, 1e-6)
