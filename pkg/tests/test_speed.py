import math

import pytest

import dirform as df
from dirform.interval import Interval, REAL_LINE

INF = math.inf


def test_lebesgue_and_cumulative_normalization():
    m = df.lebesgue()
    assert m.mass(0.0, 3.0) == pytest.approx(3.0)
    assert m.cumulative(0.0) == 0.0
    assert m.cumulative(2.0) == pytest.approx(2.0)
    assert m.cumulative(-2.0) == pytest.approx(-2.0)


def test_gaussian_total():
    m = df.gaussian()
    assert m.mass(-INF, INF) == pytest.approx(math.sqrt(math.pi), rel=1e-12)


def test_rational_total_crosscheck():
    from scipy.integrate import quad

    m = df.rational()
    total = m.mass(-INF, INF)
    direct, _ = quad(lambda x: 1.0 / (1.0 + x ** 4), -INF, INF)
    assert total == pytest.approx(direct, rel=1e-7)
    assert total == pytest.approx(math.pi / math.sqrt(2.0), rel=1e-7)


def test_atoms_cumulative_convention():
    m = df.lebesgue().with_atoms([(1.0, 2.0), (-1.0, 0.5)])
    assert m.cumulative(1.0) == pytest.approx(3.0)     # atom at x included in (e, x]
    assert m.cumulative(0.999) == pytest.approx(0.999)
    assert m.cumulative(-1.0) == pytest.approx(-1.0)   # atom at -1 outside (x, e]
    assert m.cumulative(-1.001) == pytest.approx(-1.501)
    with pytest.raises(ValueError):
        df.lebesgue().with_atoms([(0.0, -1.0)])


def test_full_support_probe():
    m = df.cauchy()
    for c in (-30.0, -1.0, 0.0, 7.5):
        assert m.mass(c, c + 1e-4) > 0.0


@pytest.fixture(scope="module")
def stieltjes():
    base = df.fat_cantor(df.CellMasses(0.99, 0.4, 4))
    return df.stieltjes_of_scale(base.scale(), alpha=0.5), base


class TestStieltjesComposite:

    def test_one_sided_masses_infinite(self, stieltjes):
        m, _ = stieltjes
        lo, hi = m.one_sided_masses()
        assert lo == INF and hi == INF

    def test_strictly_positive_between_points(self, stieltjes):
        m, _ = stieltjes
        for c in (-6.0, -0.25, 0.0, 1.3, 8.0):
            assert m.mass(c, c + 1e-3) > 0.0

    def test_normalized_at_base_point(self, stieltjes):
        m, _ = stieltjes
        assert m.cumulative(0.0) == pytest.approx(0.0, abs=1e-12)

    def test_profile_diverges_at_range_ends(self, stieltjes):
        m, base = stieltjes
        lo, hi = base.scale().limits
        prof = m.profile
        assert prof(lo) == -INF and prof(hi) == INF
        assert prof(lo + 1e-9) < -1e3
        assert prof(hi - 1e-9) > 1e3

    def test_no_cancellation_near_ends(self, stieltjes):
        # masses far out stay finite and positive even when the scale value
        # is within float epsilon of its limit
        m, _ = stieltjes
        v = m.mass(-80.0, 0.0)
        assert math.isfinite(v) and v > 0.0

    def test_profile_monotone(self, stieltjes):
        m, base = stieltjes
        lo, hi = base.scale().limits
        prof = m.profile
        ys = [lo + (hi - lo) * t for t in (0.001, 0.1, 0.34, 0.5, 0.66, 0.9, 0.999)]
        vals = [prof(y) for y in ys]
        assert all(a < b for a, b in zip(vals[:-1], vals[1:]))


def test_requires_finite_scale_range():
    with pytest.raises(ValueError):
        df.stieltjes_of_scale(df.natural_scale(REAL_LINE))


def test_measure_clipped_to_interval():
    m = df.lebesgue(Interval(0.0, 1.0, 0.5))
    assert m.mass(-5.0, 0.25) == pytest.approx(0.25)
