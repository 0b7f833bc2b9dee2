"""Packaged scenarios demonstrating instability of global properties.

Five named experiments pair comb or window sequences with a heavy
Cantor-complement base set:

* ``example31``                              decreasing combs under a finite
  measure; the sequence converges to the full realization of the limit but
  not to its absorbing realization (the limit has regular boundaries, the
  members do not).
* ``example51_recurrent_to_transient``       combs under Lebesgue measure;
  every member is recurrent, the limit is transient.
* ``example51_transient_to_recurrent``       growing windows under Lebesgue
  measure; transient members, recurrent (Brownian) limit.
* ``example52_nonconservative_to_conservative``   growing windows under a
  finite measure; members die at the ends in finite time, the limit never
  does.
* ``example52_conservative_to_nonconservative``   combs under the
  Lebesgue-Stieltjes measure of a diverging profile composed with the limit
  scale; conservative members, a limit that reaches the ends in finite time
  although the measure is infinite on both sides.

The base-set cell masses are scenario parameters: heavy cells keep the comb
teeth a small perturbation so the error sequences resolve cleanly at the
packaged grid sizes, while the geometric tail keeps the total finite (the
limit scale stays bounded, which the transience flips rely on).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .convergence import (CorollaryCondition, Direction, Scenario, Verdict)
from .errors import UnknownExample
from .grids import GridConfig
from .sets import CellMasses, comb_sequence, fat_cantor, window_sequence
from .spaces import BoundaryCondition, DirichletSpaceSpec, Transience, classify_global
from .speed import cauchy, lebesgue, stieltjes_of_scale


@dataclass(frozen=True)
class ExpectedGlobal:
    transience: Transience
    conservative: Optional[bool]    # None = not asserted


@dataclass(frozen=True)
class PaperExample:
    name: str
    scenario: Scenario
    expected_sequence: ExpectedGlobal
    expected_limit: ExpectedGlobal
    expected_verdict: Verdict
    expected_corollary: Optional[CorollaryCondition]
    # example31 pins both columns:
    expected_f_column: Optional[Verdict] = None
    expected_f0_column: Optional[Verdict] = None


# cell masses tuned per measure family: under a finite measure the grid is
# narrow and the boundary gap must stay visible; under Lebesgue measure the
# window is wide and the teeth must stay relatively small
FINITE_MEASURE_MASSES = CellMasses(base=0.99, ratio=0.4, plateau=4)
LEBESGUE_MASSES = CellMasses(base=0.96, ratio=0.5, plateau=16)

EXAMPLE_NAMES = (
    "example31",
    "example51_recurrent_to_transient",
    "example51_transient_to_recurrent",
    "example52_nonconservative_to_conservative",
    "example52_conservative_to_nonconservative",
)


def paper_example(name: str) -> PaperExample:
    if name not in EXAMPLE_NAMES:
        raise UnknownExample(f"{name!r}; known: {', '.join(EXAMPLE_NAMES)}")
    return _BUILDERS[name]()


def _example31() -> PaperExample:
    base = fat_cantor(FINITE_MEASURE_MASSES)
    scn = Scenario(
        name="example31",
        speed=cauchy(),
        set_for=lambda n: comb_sequence(base, n),
        limit_set=base,
        direction=Direction.DECREASING,
        bc_sequence=BoundaryCondition.ABSORBING,
        bc_limit=BoundaryCondition.FULL,
        grid=GridConfig(n_nodes=1200, radius=5.0),
        tolerance=2e-3,
    )
    return PaperExample(
        name="example31", scenario=scn,
        expected_sequence=ExpectedGlobal(Transience.RECURRENT, True),
        expected_limit=ExpectedGlobal(Transience.TRANSIENT, False),
        expected_verdict=Verdict.CONVERGENCE_OBSERVED,
        expected_corollary=CorollaryCondition.NEITHER,
        expected_f_column=Verdict.CONVERGENCE_OBSERVED,
        expected_f0_column=Verdict.NO_CONVERGENCE,
    )


def _example51_rec_to_trans() -> PaperExample:
    base = fat_cantor(LEBESGUE_MASSES)
    scn = Scenario(
        name="example51_recurrent_to_transient",
        speed=lebesgue(),
        set_for=lambda n: comb_sequence(base, n),
        limit_set=base,
        direction=Direction.DECREASING,
        bc_sequence=BoundaryCondition.ABSORBING,
        bc_limit=BoundaryCondition.ABSORBING,
        grid=GridConfig(n_nodes=1600, radius=20.0),
    )
    return PaperExample(
        name="example51_recurrent_to_transient", scenario=scn,
        expected_sequence=ExpectedGlobal(Transience.RECURRENT, True),
        expected_limit=ExpectedGlobal(Transience.TRANSIENT, None),
        expected_verdict=Verdict.CONVERGENCE_OBSERVED,
        expected_corollary=CorollaryCondition.CONDITION1,
    )


def _example51_trans_to_rec() -> PaperExample:
    base = fat_cantor(LEBESGUE_MASSES)
    scn = Scenario(
        name="example51_transient_to_recurrent",
        speed=lebesgue(),
        set_for=lambda n: window_sequence(base, n),
        limit_set=None,
        direction=Direction.INCREASING,
        bc_sequence=BoundaryCondition.ABSORBING,
        bc_limit=BoundaryCondition.ABSORBING,
        grid=GridConfig(n_nodes=1200, radius=10.0),
    )
    return PaperExample(
        name="example51_transient_to_recurrent", scenario=scn,
        expected_sequence=ExpectedGlobal(Transience.TRANSIENT, None),
        expected_limit=ExpectedGlobal(Transience.RECURRENT, True),
        expected_verdict=Verdict.CONVERGENCE_OBSERVED,
        expected_corollary=None,
    )


def _example52_noncons_to_cons() -> PaperExample:
    base = fat_cantor(FINITE_MEASURE_MASSES)
    scn = Scenario(
        name="example52_nonconservative_to_conservative",
        speed=cauchy(),
        set_for=lambda n: window_sequence(base, n),
        limit_set=None,
        direction=Direction.INCREASING,
        bc_sequence=BoundaryCondition.ABSORBING,
        bc_limit=BoundaryCondition.ABSORBING,
        grid=GridConfig(n_nodes=1200, radius=10.0),
    )
    return PaperExample(
        name="example52_nonconservative_to_conservative", scenario=scn,
        expected_sequence=ExpectedGlobal(Transience.TRANSIENT, False),
        expected_limit=ExpectedGlobal(Transience.RECURRENT, True),
        expected_verdict=Verdict.CONVERGENCE_OBSERVED,
        expected_corollary=None,
    )


def _example52_cons_to_noncons() -> PaperExample:
    base = fat_cantor(FINITE_MEASURE_MASSES)
    speed = stieltjes_of_scale(base.scale(), alpha=0.5)
    scn = Scenario(
        name="example52_conservative_to_nonconservative",
        speed=speed,
        set_for=lambda n: comb_sequence(base, n),
        limit_set=base,
        direction=Direction.DECREASING,
        bc_sequence=BoundaryCondition.ABSORBING,
        bc_limit=BoundaryCondition.ABSORBING,
        grid=GridConfig(n_nodes=1200, radius=4.0),
    )
    return PaperExample(
        name="example52_conservative_to_nonconservative", scenario=scn,
        expected_sequence=ExpectedGlobal(Transience.RECURRENT, True),
        expected_limit=ExpectedGlobal(Transience.TRANSIENT, False),
        expected_verdict=Verdict.CONVERGENCE_OBSERVED,
        expected_corollary=CorollaryCondition.CONDITION1,
    )


_BUILDERS = {
    "example31": _example31,
    "example51_recurrent_to_transient": _example51_rec_to_trans,
    "example51_transient_to_recurrent": _example51_trans_to_rec,
    "example52_nonconservative_to_conservative": _example52_noncons_to_cons,
    "example52_conservative_to_nonconservative": _example52_cons_to_noncons,
}


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassificationOutcome:
    label: str
    expected: ExpectedGlobal
    observed_transience: Transience
    observed_conservative: Optional[bool]

    @property
    def matches(self) -> bool:
        if self.expected.transience is not self.observed_transience:
            return False
        if self.expected.conservative is None:
            return True
        return self.expected.conservative == self.observed_conservative


def classify_example(ex: PaperExample,
                     sample_indices: tuple[int, ...] = (1, 8, 32)) -> list[ClassificationOutcome]:
    """Global classification of sampled sequence members and the limit."""
    scn = ex.scenario
    out = []
    for n in sample_indices:
        spec = DirichletSpaceSpec(scn.set_for(n).scale(), scn.speed,
                                  BoundaryCondition.ABSORBING)
        cls = classify_global(spec)
        out.append(ClassificationOutcome(f"n={n}", ex.expected_sequence,
                                         cls.transience, cls.conservative))
    limit_spec = DirichletSpaceSpec(scn.limit_scale(), scn.speed,
                                    BoundaryCondition.ABSORBING)
    cls = classify_global(limit_spec)
    out.append(ClassificationOutcome("limit", ex.expected_limit,
                                     cls.transience, cls.conservative))
    return out
