"""Exception types shared across the planners and the braid layer."""


class DuplicatePoint(ValueError):
    """Two points of a configuration coincide exactly."""


class SeparationTooSmall(ValueError):
    """Planner input with a minimum pairwise separation below the floor."""


class TimeOutOfRange(ValueError):
    """Path evaluated outside [0, 1]."""


class SizeMismatch(ValueError):
    """Operands with incompatible point or strand counts."""


class AmbiguousGrouping(ValueError):
    """Angle clustering produced a non-transitive near-coincidence chain."""


class PreconditionViolated(ValueError):
    """An operation was called outside its stated domain."""


class IterationCapExceeded(RuntimeError):
    """Redistribution failed to settle within the iteration budget."""


class LiftUnwrapFailure(RuntimeError):
    """Adjacent samples of the orientation argument jumped too far to unwrap."""


class NoParallelSide(RuntimeError):
    """Mixed line/triangle alignment found no triangle side parallel to the line."""


class MidpointMismatch(ValueError):
    """The two halves of a pair deformation do not meet at the same configuration."""


class NotPure(ValueError):
    """A pure-braid-only computation was requested for a non-pure word."""


class OddCrossingParity(RuntimeError):
    """A strand pair of a pure braid crossed an odd number of times."""


class IndexOutOfRange(ValueError):
    """Strand or generator index outside the valid range."""


class StratumEscape(RuntimeError):
    """A perturbed pair left the stratum of the pair it was derived from."""
