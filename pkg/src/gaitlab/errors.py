"""Exception types shared across the toolkit."""


class GaitlabError(Exception):
    """Base class for all toolkit errors."""


class GaitFailure(GaitlabError):
    """A step could not be completed (fall, missed switching surface, ...)."""


class NonFiniteState(GaitlabError):
    """A state component became NaN or infinite during integration."""


class NoCrossing(GaitFailure):
    """The armed guard never crossed zero within the step duration budget."""


class NotArmed(GaitFailure):
    """The guard never descended below the arming threshold."""


class NotOnGuard(GaitlabError):
    """A reset/impact map was applied to a state off the switching surface."""


class StepFailed(GaitFailure):
    """A closed-loop step failed (fall detection, missed impact, ...)."""


class SingularMatrix(GaitlabError):
    """Linear solve on a (numerically) singular matrix."""


class NoConvergence(GaitlabError):
    """An iterative solver hit its iteration cap without converging."""


class InfeasibleEnergy(GaitlabError):
    """Kinetic energy too low for the requested synchronized gait."""


class DegenerateY(GaitlabError):
    """Chart undefined: lateral coordinate y is (numerically) zero."""


class InconsistentCoords(GaitlabError):
    """Velocity-chart values violate |gamma| <= v**2 / 2."""


class LiftInfeasible(GaitFailure):
    """Reduced section coordinates do not lift to a reachable impact state."""


class SingularDecoupling(GaitlabError):
    """Output-to-torque decoupling matrix is too ill-conditioned to invert."""


class ConfigError(GaitlabError):
    """Invalid or unparsable experiment configuration."""
