"""Shared machinery for the derivative-free optimizer suite.

Every algorithm is a *driver* function looping over candidate points and
evaluating them through a :class:`_Run` harness.  The harness owns the
trace, the budget, bound assertions, the optional stagnation window, and
the target check, and signals termination by raising a control-flow
exception that :func:`minimize` converts into the run result.  Drivers
therefore never count evaluations themselves and cannot overrun the
budget.

All randomness flows through one Philox generator seeded from the spec,
and candidates are evaluated strictly sequentially, so a seed pins the
entire trace point by point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "OptimizerSpec",
    "Trace",
    "TracePoint",
    "RunResult",
    "minimize",
    "default_spec",
    "list_algorithms",
    "UnsupportedAlgorithmError",
    "OptimizerConfigError",
    "BUDGET",
    "TARGET",
    "STAGNATION",
]

BUDGET = "BUDGET"
TARGET = "TARGET"
STAGNATION = "STAGNATION"

STAGNATION_EPS = 1e-8
STAGNATION_WINDOW_PER_DIM = 20


class UnsupportedAlgorithmError(ValueError):
    """Requested algorithm identifier is not implemented."""


class OptimizerConfigError(ValueError):
    """Spec is inconsistent (bad bounds, unknown hyperparameters, ...)."""


@dataclass(frozen=True)
class OptimizerSpec:
    """One optimizer run: algorithm, box bounds, FE budget, seed.

    ``hyperparams`` overrides the algorithm defaults; unknown keys are a
    configuration error (fail fast).  ``target`` is an optional
    ``(value, tolerance)`` pair: a run stops early once an evaluation
    confirms ``value + tolerance`` (see :func:`minimize` for how the
    check can be customized).  ``stagnation`` enables the optional
    no-improvement termination window (off by default so FE tables are
    budget-limited only).
    """

    algorithm: str
    bounds: tuple[tuple[float, float], ...]
    budget: int
    seed: int = 0
    hyperparams: dict = field(default_factory=dict)
    target: tuple[float, float] | None = None
    stagnation: bool = False

    def __post_init__(self) -> None:
        if self.budget < 1:
            raise OptimizerConfigError("budget must be at least 1")
        if not self.bounds:
            raise OptimizerConfigError("bounds must define the dimension")
        for lo, hi in self.bounds:
            if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
                raise OptimizerConfigError(f"invalid bound pair ({lo}, {hi})")

    @property
    def dim(self) -> int:
        return len(self.bounds)


class TracePoint(NamedTuple):
    fe: int
    value: float
    is_new_best: bool


@dataclass
class Trace:
    """Per-evaluation history plus the incumbent solution."""

    points: list[TracePoint]
    best_params: np.ndarray
    best_value: float

    def best_at(self, fe: int) -> float:
        """Best value seen at or before evaluation ``fe`` (inf if none)."""
        best = np.inf
        for p in self.points:
            if p.fe > fe:
                break
            if p.value < best:
                best = p.value
        return best

    def running_best(self) -> list[float]:
        """Best-so-far value after each recorded evaluation."""
        best = np.inf
        out = []
        for p in self.points:
            if p.value < best:
                best = p.value
            out.append(best)
        return out


@dataclass
class RunResult:
    trace: Trace
    termination: str
    fe_used: int

    @property
    def fe_to_target(self) -> int | None:
        """FE count at early stop, None unless the target was confirmed."""
        return self.fe_used if self.termination == TARGET else None


class _StopRun(Exception):
    def __init__(self, termination: str):
        self.termination = termination


class _Run:
    """Evaluation harness: trace, budget, bounds, stagnation, target."""

    def __init__(
        self,
        objective: Callable[[np.ndarray], float],
        spec: OptimizerSpec,
        stop_check: Callable[[np.ndarray, float], bool] | None,
    ):
        self.objective = objective
        self.lo = np.array([b[0] for b in spec.bounds], dtype=float)
        self.hi = np.array([b[1] for b in spec.bounds], dtype=float)
        self.budget = spec.budget
        self.stop_check = stop_check
        self.window = (
            STAGNATION_WINDOW_PER_DIM * spec.dim if spec.stagnation else None
        )
        self.points: list[TracePoint] = []
        self.fe_used = 0
        self.best_value = np.inf
        self.best_params = (self.lo + self.hi) / 2.0
        self._last_significant_fe = 0

    def eval(self, x: np.ndarray) -> float:
        if self.fe_used >= self.budget:
            raise _StopRun(BUDGET)
        x = np.asarray(x, dtype=float)
        if np.any(x < self.lo) or np.any(x > self.hi):
            raise RuntimeError(
                "driver submitted an out-of-bounds point; clip before eval"
            )
        value = float(self.objective(x))
        self.fe_used += 1
        improved = value < self.best_value
        self.points.append(TracePoint(self.fe_used, value, improved))
        if improved:
            if value < self.best_value - STAGNATION_EPS:
                self._last_significant_fe = self.fe_used
            self.best_value = value
            self.best_params = x.copy()
        if self.stop_check is not None and self.stop_check(x, value):
            raise _StopRun(TARGET)
        if (
            self.window is not None
            and self.fe_used - self._last_significant_fe >= self.window
        ):
            raise _StopRun(STAGNATION)
        return value


@dataclass(frozen=True)
class Algorithm:
    """Registry entry: driver plus per-dimension defaults."""

    name: str
    drive: Callable[[_Run, np.random.Generator, np.ndarray, np.ndarray, dict], None]
    defaults: Callable[[int], dict]
    min_fes: Callable[[dict, int], int]


_REGISTRY: dict[str, Algorithm] = {}


def register(algorithm: Algorithm) -> None:
    _REGISTRY[algorithm.name] = algorithm


def list_algorithms() -> list[str]:
    return sorted(_REGISTRY)


def _resolve(spec: OptimizerSpec) -> tuple[Algorithm, dict]:
    try:
        algo = _REGISTRY[spec.algorithm]
    except KeyError:
        raise UnsupportedAlgorithmError(
            f"unknown algorithm {spec.algorithm!r}; available: {list_algorithms()}"
        ) from None
    params = algo.defaults(spec.dim)
    unknown = set(spec.hyperparams) - set(params)
    if unknown:
        raise OptimizerConfigError(
            f"unknown hyperparameters for {spec.algorithm}: {sorted(unknown)}"
        )
    params.update(spec.hyperparams)
    return algo, params


def default_spec(
    algorithm: str,
    dimension: int,
    budget: int = 100_000,
    seed: int = 0,
    bound: float = 2 * np.pi,
) -> OptimizerSpec:
    """Spec pre-filled with the algorithm's defaults and ``[-2pi, 2pi]`` box.

    Raises:
        UnsupportedAlgorithmError: for an unimplemented identifier.
    """
    spec = OptimizerSpec(
        algorithm=algorithm,
        bounds=tuple((-bound, bound) for _ in range(dimension)),
        budget=budget,
        seed=seed,
    )
    algo, params = _resolve(spec)
    return OptimizerSpec(
        algorithm=algorithm,
        bounds=spec.bounds,
        budget=budget,
        seed=seed,
        hyperparams=params,
    )


def minimize(
    spec: OptimizerSpec,
    objective: Callable[[np.ndarray], float],
    stop_check: Callable[[np.ndarray, float], bool] | None = None,
) -> RunResult:
    """Run one optimizer against a callable objective.

    The run ends when the budget is exhausted, the target is confirmed,
    or the algorithm stops natively (annealing floor, stagnation window);
    the full trace is returned either way.  Identical spec and objective
    state reproduce the trace point by point.

    ``stop_check(params, value)`` overrides the default target test
    (plain ``value <= target + tolerance``); the benchmark harness uses
    this hook for its exact-mode confirmation.
    """
    algo, params = _resolve(spec)
    need = algo.min_fes(params, spec.dim)
    if spec.budget < need:
        raise OptimizerConfigError(
            f"{spec.algorithm} needs at least {need} evaluations "
            f"(budget {spec.budget})"
        )
    if stop_check is None and spec.target is not None:
        value, tol = spec.target
        stop_check = lambda _x, v, _lim=value + tol: v <= _lim  # noqa: E731
    run = _Run(objective, spec, stop_check)
    rng = np.random.Generator(np.random.Philox(key=int(spec.seed)))
    termination = STAGNATION  # drivers returning naturally stopped themselves
    try:
        algo.drive(run, rng, run.lo, run.hi, params)
    except _StopRun as stop:
        termination = stop.termination
    trace = Trace(run.points, run.best_params, float(run.best_value))
    return RunResult(trace=trace, termination=termination, fe_used=run.fe_used)
