"""Exception hierarchy for the toolkit."""


class DirformError(Exception):
    """Base class for all toolkit errors."""


class OutOfDomain(DirformError):
    """A point lies outside the open state interval."""


class NotConverged(DirformError):
    """A limit or improper integral could not be certified finite or infinite
    within the iteration budget."""


class OracleToleranceError(DirformError):
    """A set-measure oracle cannot meet the requested tolerance at its
    configured enumeration depth."""


class InvalidMass(DirformError):
    """Cell masses outside (0,1) or with a divergent total."""


class AdmissibilityError(DirformError):
    """A candidate characteristic set has a subinterval of zero measure."""


class UnsupportedRepresentation(DirformError):
    """The operation requires an indicator-type scale density."""


class RequiresOpenSet(DirformError):
    """The construction is only defined for open characteristic sets."""


class MismatchedSpeed(DirformError):
    """Subspace comparison between specs with different speed measures."""


class NotAbsolutelyContinuous(DirformError):
    """A sampled function jumps across a zero-scale-increment gap."""


class NotHomeomorphism(DirformError):
    """The spatial transform map has a flat segment or is otherwise not a
    strictly increasing homeomorphism."""


class DegenerateGrid(DirformError):
    """Cell merging left fewer nodes than the minimum grid size."""


class SingularSystem(DirformError):
    """The tridiagonal resolvent system failed to factorize.  Cannot happen
    for alpha > 0 with a correctly assembled matrix; treated as an internal
    error signal."""


class UnknownExample(DirformError):
    """No packaged scenario with the requested name."""


class ConfigError(DirformError):
    """Scenario configuration file is malformed; the message names the key."""
