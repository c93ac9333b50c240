"""Exception types shared across the package."""


class DualMziError(Exception):
    """Base class for all package-specific errors."""


class StageError(DualMziError):
    """Operation applied at the wrong point of the circuit."""


class NormalizationError(DualMziError):
    """State norm deviates from 1 beyond tolerance."""


class ZeroProbabilityPostselection(DualMziError):
    """Postselected port has (numerically) zero marginal probability."""


class DegenerateConditional(DualMziError):
    """Conditional probability denominator vanished (chi -> 0, detuning -> pi)."""


class WeakValueDivergence(DualMziError):
    """Weak value diverges (pre- and post-selected states orthogonal)."""


class SingularFisher(DualMziError):
    """Fisher information undefined (p on the boundary, or chi = 0)."""


class EstimationDomainError(DualMziError):
    """log(0) with a nonzero coefficient, or probability outside [0, 1]."""


class EmptySample(DualMziError):
    """No postselected trials to evaluate."""


class DegenerateSample(DualMziError):
    """Sample proportion sits on the boundary {0, 1}; no spread to estimate."""


class InfiniteSNR(DualMziError):
    """Noise term vanished; SNR is unbounded at this setting."""
