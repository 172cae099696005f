"""Exception taxonomy for the period/Abel-Jacobi pipeline.

Retryable errors signal that a certified computation could not be decided at
the current working precision; the pipeline driver catches them and restarts
with a larger guard.  Hard errors abort.
"""


class SeperiodsError(Exception):
    """Base class for all library errors."""


class InvalidInput(SeperiodsError):
    """Unusable problem data: bad degree, bad m, malformed config."""


class RetryablePrecisionError(SeperiodsError):
    """A certified decision failed at the current working precision.

    The pipeline doubles the guard precision and retries; if retries are
    exhausted it raises PrecisionExhausted.
    """


class NotSeparable(RetryablePrecisionError):
    """Root disks could not be certified pairwise disjoint.

    Message style: "not separable at this precision".  A genuinely repeated
    root never resolves and ends in PrecisionExhausted.
    """


class IndeterminateBranch(RetryablePrecisionError):
    """A disk straddles the branch cut so the root branch is undecidable."""


class PrecisionLoss(RetryablePrecisionError):
    """A published radius exceeded the target accuracy."""


class PrecisionExhausted(SeperiodsError):
    """All precision retries failed.  CLI exit code 2."""


class EdgeInvalid(SeperiodsError):
    """A branch point disk touches the open integration segment."""


class DegenerateConfiguration(SeperiodsError):
    """No usable spanning tree: some vertex has only capacity-0 edges."""


class IntersectionInconsistency(SeperiodsError):
    """A shifting number failed its integrality check: bookkeeping bug."""


class NonPrincipalPolarization(SeperiodsError):
    """Symplectic reduction met an elementary divisor != 1."""


class PipelineInconsistency(SeperiodsError):
    """A structural post-condition (symmetry, zero column, PD) failed hard."""


class BlockedSightLine(SeperiodsError):
    """No tree vertex sees the target point; a waypoint path is required."""


class RTooLarge(SeperiodsError):
    """A branch point disk intersects the closed integration region."""
