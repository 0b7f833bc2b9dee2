"""Numerical toolkit for one-dimensional Dirichlet forms in scale/speed form.

Regular subspaces are encoded by characteristic sets (the indicator density
of the subspace scale); the toolkit constructs such sets, classifies
boundaries and global properties of the associated diffusions, discretizes
the generator on graded grids, and runs resolvent-convergence experiments
for decreasing and increasing set sequences.
"""

from .boundary import BoundaryClassification, Side, boundary_classify, feller_integral
from .convergence import (CorollaryCondition, Direction, Scenario, Verdict,
                          ConvergenceReport, check_nested_domains,
                          corollary31_check, run_convergence, DEFAULT_BATTERY)
from .errors import (AdmissibilityError, ConfigError, DegenerateGrid, DirformError,
                     InvalidMass, MismatchedSpeed, NotAbsolutelyContinuous,
                     NotConverged, NotHomeomorphism, OracleToleranceError,
                     OutOfDomain, RequiresOpenSet, SingularSystem, UnknownExample,
                     UnsupportedRepresentation)
from .examples import EXAMPLE_NAMES, PaperExample, classify_example, paper_example
from .grids import Grid, GridConfig, RowKind, build_grid
from .interval import Interval, REAL_LINE
from .scale import ScaleFunction, eval_scale, natural_scale, scale_limits
from .sets import (CellMasses, CharacteristicSet, FatCantorSet, IntervalUnionSet,
                   UnionSet, comb_sequence, fat_cantor, full_set,
                   is_admissible_scaling, scale_from_set, set_from_scale,
                   window_sequence)
from .solver import GeneratorMatrix, l2m_inner, l2m_norm
from .spaces import (BoundaryCondition, CoreComposite, DirichletSpaceSpec,
                     GlobalClassification, GridSampled, Profile, SmoothFunction,
                     Transience, bump_profile, classify_global, energy,
                     is_subspace, membership, smoothstep_bump, spatial_transform,
                     tent_profile)
from .speed import (SpeedMeasure, cauchy, gaussian, lebesgue, measure_of,
                    rational, stieltjes_of_scale)

__version__ = "0.1.0"
