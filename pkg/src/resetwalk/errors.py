"""Exception hierarchy shared across the package."""


class ResetWalkError(Exception):
    """Base class for all errors raised by this package."""


class NegativeRate(ResetWalkError):
    """A rate or scale parameter that must be nonnegative is negative."""


class ZeroMotionWarning(UserWarning):
    """Drift and jump intensity are both zero: the process is frozen between resets."""


class MissingLaplace(ResetWalkError):
    """A custom jump law without a Laplace transform was handed to a transform-domain operation."""


class PoleEvaluation(ResetWalkError):
    """A Laplace transform was evaluated at or beyond its abscissa of convergence."""


class InfiniteMoment(ResetWalkError):
    """A jump-size moment required by the requested quantity does not exist."""


class OutOfHorizon(ResetWalkError):
    """State requested at a time outside the simulated horizon."""


class NoExitBudget(ResetWalkError):
    """The event cap was exhausted before the process left the interval."""

    def __init__(self, msg, n_censored=1):
        super().__init__(msg)
        self.n_censored = n_censored


class DomainError(ResetWalkError):
    """An argument lies outside the mathematical domain of the formula."""


class UnsupportedRegime(ResetWalkError):
    """The requested closed form does not exist for this parameter regime."""


class DriftRequired(UnsupportedRegime):
    """The quantity is only defined for strictly positive drift."""


class ExponentialLawRequired(UnsupportedRegime):
    """The closed form is only available for exponentially distributed jumps."""


class NoStationaryLaw(UnsupportedRegime):
    """No stationary distribution exists (reset rate is zero)."""


class SelfConsistencySingular(ResetWalkError):
    """The linear self-consistency equation for the survival transform is singular."""


class NonConvergence(ResetWalkError):
    """Numerical Laplace inversion showed catastrophic term growth."""


class PrecisionLossWarning(UserWarning):
    """Stehfest coefficients of this order cancel badly in double precision."""


class InsufficientTail(ResetWalkError):
    """Not enough populated histogram bins in the requested range to fit a slope."""


class QuadratureFailure(ResetWalkError):
    """An adaptive quadrature did not reach the requested tolerance."""
