"""Derivative-free optimizer suite behind a single minimize interface.

Importing this package registers every implemented algorithm:

cmaes, cmaes_ft, de_best1bin, de_best1exp, de_rand1, shade, ilshade,
ga, hs, sa_fast, sa_boltzmann, sa_cauchy, isoma, pso, sos, spsa.

New algorithms plug in through :func:`vqebench.optim.base.register`.
"""

from .base import (
    BUDGET,
    STAGNATION,
    TARGET,
    OptimizerConfigError,
    OptimizerSpec,
    RunResult,
    Trace,
    TracePoint,
    UnsupportedAlgorithmError,
    default_spec,
    list_algorithms,
    minimize,
)

# Registration side effects: each module adds its algorithms on import.
from . import cmaes as _cmaes  # noqa: F401
from . import de as _de  # noqa: F401
from . import shade as _shade  # noqa: F401
from . import ga as _ga  # noqa: F401
from . import hs as _hs  # noqa: F401
from . import sa as _sa  # noqa: F401
from . import soma as _soma  # noqa: F401
from . import pso as _pso  # noqa: F401
from . import sos as _sos  # noqa: F401
from . import spsa as _spsa  # noqa: F401

__all__ = [
    "OptimizerSpec",
    "Trace",
    "TracePoint",
    "RunResult",
    "minimize",
    "default_spec",
    "list_algorithms",
    "OptimizerConfigError",
    "UnsupportedAlgorithmError",
    "BUDGET",
    "TARGET",
    "STAGNATION",
]
