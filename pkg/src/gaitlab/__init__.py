"""gaitlab: hybrid-dynamics toolkit for discrete-invariant bipedal gaits.

Two models share the same event-driven machinery: a 3D linear inverted
pendulum whose step-to-step self-synchronization admits closed-form
analysis, and a 9-DOF biped whose walking stability is certified through
a four-variable restricted return map.
"""

from . import errors
from .hybrid import (
    GuardEvent,
    HybridTrace,
    IntegratorConfig,
    integrate_fixed_step,
    locate_guard_crossing,
    run_hybrid,
)
from .linalg import eigenvalues, solve_dense
from .lip import LipParams, LipState, LipStepResult, SwitchCoords

__version__ = "0.1.0"

__all__ = [
    "errors",
    "GuardEvent",
    "HybridTrace",
    "IntegratorConfig",
    "integrate_fixed_step",
    "locate_guard_crossing",
    "run_hybrid",
    "eigenvalues",
    "solve_dense",
    "LipParams",
    "LipState",
    "LipStepResult",
    "SwitchCoords",
    "__version__",
]
