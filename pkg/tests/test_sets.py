import math

import pytest
from hypothesis import given, settings, strategies as st

import dirform as df
from dirform.errors import (InvalidMass, RequiresOpenSet, UnsupportedRepresentation)
from dirform.interval import Interval, REAL_LINE
from dirform.scale import ScaleFunction, SmoothDensity, natural_scale
from dirform.sets import ExplicitCellMasses, FatCantorSet, _LatticeWindows

INF = math.inf


class TestMeasureOracle:
    def test_interval_union(self):
        G = df.IntervalUnionSet([(0.0, 1.0), (2.0, 3.0)])
        assert G.measure(0.5, 2.5) == pytest.approx(1.0, abs=1e-14)

    def test_single_cell_mass(self):
        G = FatCantorSet(ExplicitCellMasses({0: 0.25}), interval=Interval(0, 1, 0.5))
        assert G.measure(0.0, 1.0) == pytest.approx(0.25, abs=1e-13)

    def test_positive_on_small_intervals(self, default_fat):
        for c in (-2.3, -0.55, 0.1, 1.77, 3.01):
            assert default_fat.measure(c, c + 1e-3) > 0.0

    def test_depth_agreement_within_tail_bound(self):
        shallow = df.fat_cantor(depth=12)
        deep = df.fat_cantor(depth=16)
        for c, d in ((-1.3, 0.7), (0.01, 0.02), (2.5, 4.5)):
            tail = shallow.masses.total() * 4.0 ** -12
            assert abs(shallow.measure(c, d) - deep.measure(c, d)) <= tail

    def test_total_mass_default(self, default_fat):
        assert default_fat.measure(-INF, INF) == pytest.approx(0.75, abs=1e-13)

    def test_complement_measure(self, default_fat):
        c, d = -1.0, 2.0
        g = default_fat.measure(c, d)
        assert default_fat.complement_measure(c, d) == pytest.approx((d - c) - g)


class TestFatCantor:
    def test_invalid_masses(self):
        with pytest.raises(InvalidMass):
            df.CellMasses(base=1.2)
        with pytest.raises(InvalidMass):
            df.CellMasses(ratio=1.0)   # divergent total
        with pytest.raises(InvalidMass):
            ExplicitCellMasses({0: 0.0})

    def test_is_open_and_admissible(self, default_fat):
        assert default_fat.is_open
        assert default_fat.is_admissible(window=(-3.0, 3.0), depth=14)

    def test_removed_intervals_lengths(self, default_fat):
        pieces = default_fat.removed_intervals(0.0, 1.0, depth=4)
        total = sum(hi - lo for lo, hi in pieces)
        # generations 0..3 carry 1 - 2**-4 of the cell's open mass
        assert total == pytest.approx(0.25 * (1 - 2.0 ** -4), abs=1e-12)


class TestCombSequence:
    def test_window_measure_lower_bound(self, default_fat):
        for n in (4, 8):
            Gn = df.comb_sequence(default_fat, n)
            assert Gn.measure(-1.0 / n, 1.0 / n) >= 2.0 / n - 1e-13

    def test_inclusion_chain(self, default_fat, rng):
        sets = [df.comb_sequence(default_fat, n) for n in (2, 4, 8, 16)]
        for _ in range(100):
            c = rng.uniform(-4, 4)
            d = c + rng.uniform(0.01, 2.0)
            vals = [g.measure(c, d) for g in sets]
            assert all(vals[i + 1] <= vals[i] + 1e-12 for i in range(len(vals) - 1))
            assert default_fat.measure(c, d) <= vals[-1] + 1e-12

    def test_convergence_to_base(self, default_fat):
        c, d = -1.5, 2.25
        target = default_fat.measure(c, d)
        gaps = [df.comb_sequence(default_fat, 2 ** j).measure(c, d) - target
                for j in range(2, 8)]
        assert all(g >= -1e-12 for g in gaps)
        assert gaps[-1] < gaps[0] and gaps[-1] < 0.1


class TestWindowSequence:
    def test_window_measure(self, default_fat):
        for n in (1, 3):
            Un = df.window_sequence(default_fat, n)
            assert Un.measure(-n, n) == pytest.approx(2.0 * n, abs=1e-12)

    def test_scale_limits_finite(self, default_fat):
        s = df.window_sequence(default_fat, 5).scale()
        lo, hi = s.limits
        assert math.isfinite(lo) and math.isfinite(hi)

    def test_chain_inclusion(self, default_fat, rng):
        sets = [df.window_sequence(default_fat, n) for n in (1, 2, 4)]
        for _ in range(50):
            c = rng.uniform(-5, 5)
            d = c + rng.uniform(0.05, 3.0)
            vals = [g.measure(c, d) for g in sets]
            assert all(vals[i] <= vals[i + 1] + 1e-12 for i in range(len(vals) - 1))

    def test_requires_open_base(self, default_fat):
        class ClosedSet(df.IntervalUnionSet):
            is_open = False

        with pytest.raises(RequiresOpenSet):
            df.window_sequence(ClosedSet([(0.0, 1.0)]), 2)


class TestBijection:
    def test_roundtrip_identity_on_interval_union(self):
        G = df.IntervalUnionSet([(0.0, 1.0)], Interval(0.0, 1.0, 0.5))
        back = df.set_from_scale(df.scale_from_set(G))
        assert back.measure(0.1, 0.9) == pytest.approx(G.measure(0.1, 0.9))

    def test_roundtrip_measure_agreement_fat(self, default_fat, rng):
        back = df.set_from_scale(df.scale_from_set(default_fat))
        for _ in range(100):
            c = rng.uniform(-4, 4)
            d = c + rng.uniform(1e-3, 2.0)
            assert back.measure(c, d) == pytest.approx(
                default_fat.measure(c, d), abs=10 * default_fat.tolerance)

    def test_identity_scale_maps_to_full_set(self):
        full = df.set_from_scale(natural_scale(REAL_LINE))
        assert full.measure(1.0, 4.0) == pytest.approx(3.0)

    def test_smooth_density_rejected(self):
        s = ScaleFunction(REAL_LINE, SmoothDensity(lambda x: 0.5,
                                                   antiderivative=lambda x: 0.5 * x))
        with pytest.raises(UnsupportedRepresentation):
            df.set_from_scale(s)


class TestAdmissibleScaling:
    def test_indicator_vs_natural(self, default_fat):
        assert df.is_admissible_scaling(default_fat.scale(), natural_scale(REAL_LINE))

    def test_half_density_rejected(self):
        half = ScaleFunction(REAL_LINE, SmoothDensity(lambda x: 0.5,
                                                      antiderivative=lambda x: 0.5 * x))
        assert not df.is_admissible_scaling(half, natural_scale(REAL_LINE))

    def test_natural_vs_natural(self):
        assert df.is_admissible_scaling(natural_scale(REAL_LINE),
                                        natural_scale(REAL_LINE))

    def test_scale_from_set_always_admissible(self, default_fat):
        for g in (default_fat, df.comb_sequence(default_fat, 4),
                  df.window_sequence(default_fat, 2)):
            assert df.is_admissible_scaling(g.scale(), natural_scale(REAL_LINE))


def test_monotonicity_under_inclusion(default_fat, rng):
    small = default_fat
    big = df.comb_sequence(default_fat, 4)
    for _ in range(60):
        c = rng.uniform(-4, 4)
        d = c + rng.uniform(0.01, 1.5)
        assert small.measure(c, d) <= big.measure(c, d) + 1e-12


@settings(max_examples=60, deadline=None)
@given(st.floats(-5, 5), st.floats(0.001, 2.0), st.floats(0.001, 2.0))
def test_measure_additive_over_adjacent_intervals(c, w1, w2):
    G = df.fat_cantor()
    left = G.measure(c, c + w1)
    right = G.measure(c + w1, c + w1 + w2)
    both = G.measure(c, c + w1 + w2)
    assert both == pytest.approx(left + right, abs=10 * G.tolerance)


def test_lattice_windows_cover_line_at_halfwidth_half():
    w = _LatticeWindows(0.5)
    assert w.measure(-3.0, 7.0) == pytest.approx(10.0)
