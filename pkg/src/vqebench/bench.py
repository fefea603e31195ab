"""Three-phase benchmark protocol, success metrics, and persistence.

Phase 1 screens optimizers on the 5-qubit Ising objective (an optimizer
advances when at least one of its seeded runs reaches the exact ground
energy within tolerance).  Phase 2 tabulates mean evaluations-to-target
across qubit counts; a cell renders as ``---`` when any of its runs
fails.  Phase 3 records convergence traces on the Hubbard objective
under a high- and a low-shot setting.

Success is always decided by a noise-free re-evaluation: a run stops
early only after a sampled value undercuts the target by three estimated
standard errors *and* an exact confirmation passes, so shot-noise flukes
are never credited.  Run seeds derive from a keyed hash of
``(seed_base, optimizer, model, run index)``, making every cell
independently reproducible; re-running a cell reproduces its records and
files byte for byte (wall times live in a separate timings file, outside
the determinism contract).
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .estimator import EXACT, EnergyObjective, ShotConfig, exact_expectation
from .models import (
    HubbardSpec,
    exact_spectrum,
    hubbard_hamiltonian,
    ising_hamiltonian,
)
from .optim import OptimizerSpec, RunResult, minimize
from .pauli import PauliSum, format_pauli_sum
from .simulator import Circuit, build_hubbard_hva, build_ising_ansatz, run_circuit

__all__ = [
    "ConfigError",
    "PhaseConfig",
    "OptimizerSetting",
    "ModelInstance",
    "RunRecord",
    "Phase1Report",
    "Phase2Table",
    "Phase3Dataset",
    "stable_seed",
    "success_check",
    "build_model",
    "run_phase1",
    "run_phase2",
    "run_phase3",
    "export_phase1",
    "export_phase2",
    "export_phase3",
    "write_hamiltonians",
    "checkpoint_grid",
    "load_config",
    "default_config",
    "apply_profile",
]

log = logging.getLogger(__name__)

PARAMETER_BOUND = 2 * math.pi
TRIGGER_SIGMA = 3.0
DEFAULT_TOLERANCE = 0.1
DEFAULT_SHOTS = 5120
PHASE2_QUBITS = (3, 4, 5, 6, 7, 8, 9)
PHASE3_SHOTS = (64, 5120)
MISSING_CELL = "---"


class ConfigError(ValueError):
    """Invalid benchmark configuration (unknown keys, bad values)."""


@dataclass(frozen=True)
class OptimizerSetting:
    algorithm: str
    hyperparams: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PhaseConfig:
    """Inputs of one phase run; see :func:`load_config` for the file form."""

    phase: int
    optimizers: tuple[OptimizerSetting, ...]
    runs_per_cell: int = 5
    tolerance: float = DEFAULT_TOLERANCE
    shots: int | str = DEFAULT_SHOTS
    seed_base: int = 0
    budget: int = 200_000
    output_dir: str | None = None
    stagnation: bool = False
    # phase 1: single qubit count; phase 2: the sweep
    qubits: tuple[int, ...] = (5,)
    # phase 3 extras
    hubbard: HubbardSpec = HubbardSpec(sites=6)
    layers: int = 10
    shots_list: tuple[int, ...] = PHASE3_SHOTS

    def __post_init__(self) -> None:
        if self.phase not in (1, 2, 3):
            raise ConfigError(f"phase must be 1, 2 or 3, got {self.phase}")
        if self.runs_per_cell < 1:
            raise ConfigError("runs_per_cell must be >= 1")
        if self.tolerance <= 0:
            raise ConfigError("tolerance must be positive")
        if self.budget < 1:
            raise ConfigError("budget must be >= 1")
        if not self.optimizers:
            raise ConfigError("at least one optimizer is required")


@dataclass(frozen=True)
class ModelInstance:
    """A benchmark objective: ansatz circuit + observable + exact floor."""

    model_id: str
    circuit: Circuit
    hamiltonian: PauliSum
    ground: float | None

    @property
    def n_params(self) -> int:
        return self.circuit.n_params


@dataclass(frozen=True)
class RunRecord:
    """One optimizer run on one model cell; the unit of persistence."""

    optimizer: str
    model_id: str
    shots: int | str
    run_index: int
    seed: int
    fe_to_target: int | None
    best_exact_energy: float
    termination: str
    fe_used: int
    wall_time: float
    trace: tuple[tuple[int, float], ...]  # best-improvement points (fe, value)

    def best_at(self, fe: int) -> float:
        best = math.inf
        for point_fe, value in self.trace:
            if point_fe > fe:
                break
            best = value
        return best

    @property
    def cell_key(self) -> tuple:
        return (self.model_id, str(self.shots), self.optimizer, self.run_index)


@dataclass
class Phase1Report:
    config: PhaseConfig
    records: list[RunRecord]
    passed: dict[str, bool]
    successes: dict[str, int]


@dataclass
class Phase2Table:
    config: PhaseConfig
    records: list[RunRecord]
    cells: dict[tuple[str, int], float | None]  # (optimizer, n_qubits) -> mean FE


@dataclass
class Phase3Dataset:
    config: PhaseConfig
    records: list[RunRecord]
    checkpoints: tuple[int, ...]
    # (optimizer, shots) -> per-checkpoint mean best, and per-run columns
    mean_curves: dict[tuple[str, int], list[float]]
    run_curves: dict[tuple[str, int], list[list[float]]]


def stable_seed(*parts) -> int:
    """64-bit run seed from a keyed hash of the cell coordinates."""
    digest = hashlib.blake2b(
        "\x1f".join(str(p) for p in parts).encode(), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big")


def build_model(
    kind: str,
    *,
    n_qubits: int | None = None,
    hubbard: HubbardSpec | None = None,
    layers: int = 10,
    with_ground: bool = True,
) -> ModelInstance:
    """Assemble the ansatz/Hamiltonian pair for one benchmark model."""
    if kind == "ising":
        if n_qubits is None:
            raise ConfigError("ising model needs n_qubits")
        ham = ising_hamiltonian(n_qubits)
        ground = exact_spectrum(ham, 1).ground if with_ground else None
        return ModelInstance(
            f"ising{n_qubits}", build_ising_ansatz(n_qubits), ham, ground
        )
    if kind == "hubbard":
        hubbard = hubbard or HubbardSpec(sites=6)
        ham = hubbard_hamiltonian(hubbard)
        ground = exact_spectrum(ham, 1).ground if with_ground else None
        return ModelInstance(
            f"hubbard{hubbard.sites}",
            build_hubbard_hva(hubbard.sites, layers, hubbard.periodic),
            ham,
            ground,
        )
    raise ConfigError(f"unknown model kind {kind!r}")


def success_check(
    best_params: Sequence[float],
    model: ModelInstance,
    tolerance: float,
    objective: EnergyObjective | None = None,
) -> bool:
    """True iff the noise-free energy of the parameters reaches the floor.

    Exactly one exact evaluation is performed per query; it never touches
    the sampling stream or the FE counter.
    """
    if model.ground is None:
        raise ValueError(f"model {model.model_id} has no exact ground energy")
    if objective is not None:
        energy = objective.exact_energy(best_params)
    else:
        state = run_circuit(model.circuit, best_params)
        energy = exact_expectation(state, model.hamiltonian)
    return energy <= model.ground + tolerance


def _run_cell(
    setting: OptimizerSetting,
    model: ModelInstance,
    shots: int | str,
    seed: int,
    budget: int,
    tolerance: float | None,
    stagnation: bool,
) -> RunRecord:
    objective = EnergyObjective(
        model.circuit, model.hamiltonian, ShotConfig(shots, seed)
    )
    bounds = tuple((-PARAMETER_BOUND, PARAMETER_BOUND) for _ in range(model.n_params))
    target = None
    stop_check = None
    if tolerance is not None and model.ground is not None:
        threshold = model.ground + tolerance
        target = (model.ground, tolerance)

        def stop_check(params, value, _t=threshold, _obj=objective):
            margin = TRIGGER_SIGMA * (_obj.last_stderr or 0.0)
            if value > _t - margin:
                return False
            return _obj.exact_energy(params) <= _t

    spec = OptimizerSpec(
        algorithm=setting.algorithm,
        bounds=bounds,
        budget=budget,
        seed=seed,
        hyperparams=dict(setting.hyperparams),
        target=target,
        stagnation=stagnation,
    )
    start = time.perf_counter()
    result: RunResult = minimize(spec, objective, stop_check=stop_check)
    elapsed = time.perf_counter() - start
    best_exact = objective.exact_energy(result.trace.best_params)
    improvements = tuple(
        (p.fe, float(p.value)) for p in result.trace.points if p.is_new_best
    )
    return RunRecord(
        optimizer=setting.algorithm,
        model_id=model.model_id,
        shots=shots,
        run_index=-1,  # filled by caller
        seed=seed,
        fe_to_target=result.fe_to_target,
        best_exact_energy=float(best_exact),
        termination=result.termination,
        fe_used=result.fe_used,
        wall_time=elapsed,
        trace=improvements,
    )


def _seeded_runs(
    setting: OptimizerSetting,
    model: ModelInstance,
    cfg: PhaseConfig,
    shots: int | str,
    tolerance: float | None,
) -> list[RunRecord]:
    records = []
    for run_index in range(cfg.runs_per_cell):
        seed = stable_seed(cfg.seed_base, setting.algorithm, model.model_id, run_index)
        record = _run_cell(
            setting, model, shots, seed, cfg.budget, tolerance, cfg.stagnation
        )
        record = replace(record, run_index=run_index)
        records.append(record)
        log.info(
            "%s %s shots=%s run=%d fe_to_target=%s best_exact=%.6f (%.1fs)",
            model.model_id,
            setting.algorithm,
            shots,
            run_index,
            record.fe_to_target,
            record.best_exact_energy,
            record.wall_time,
        )
    return records


def _sorted_records(records: Iterable[RunRecord]) -> list[RunRecord]:
    return sorted(records, key=lambda r: r.cell_key)


def run_phase1(cfg: PhaseConfig) -> Phase1Report:
    """Initial screening: pass iff any seeded run reaches the floor."""
    n_qubits = cfg.qubits[0]
    model = build_model("ising", n_qubits=n_qubits)
    records: list[RunRecord] = []
    passed: dict[str, bool] = {}
    successes: dict[str, int] = {}
    for setting in cfg.optimizers:
        cell = _seeded_runs(setting, model, cfg, cfg.shots, cfg.tolerance)
        records.extend(cell)
        wins = sum(
            1
            for r in cell
            if r.fe_to_target is not None
            or r.best_exact_energy <= model.ground + cfg.tolerance
        )
        successes[setting.algorithm] = wins
        passed[setting.algorithm] = wins >= 1
    return Phase1Report(cfg, _sorted_records(records), passed, successes)


def run_phase2(cfg: PhaseConfig) -> Phase2Table:
    """Mean evaluations-to-target across qubit counts; None marks failure."""
    records: list[RunRecord] = []
    cells: dict[tuple[str, int], float | None] = {}
    for n_qubits in cfg.qubits:
        model = build_model("ising", n_qubits=n_qubits)
        for setting in cfg.optimizers:
            cell = _seeded_runs(setting, model, cfg, cfg.shots, cfg.tolerance)
            records.extend(cell)
            fes = [r.fe_to_target for r in cell]
            cells[(setting.algorithm, n_qubits)] = (
                float(np.mean(fes)) if all(f is not None for f in fes) else None
            )
    return Phase2Table(cfg, _sorted_records(records), cells)


def checkpoint_grid(budget: int) -> tuple[int, ...]:
    """Geometric FE checkpoints 1, 2, 4, ... capped by the budget."""
    grid = []
    c = 1
    while c < budget:
        grid.append(c)
        c *= 2
    grid.append(budget)
    return tuple(grid)


def run_phase3(cfg: PhaseConfig) -> Phase3Dataset:
    """Convergence curves on the Hubbard objective for each shot setting."""
    model = build_model(
        "hubbard", hubbard=cfg.hubbard, layers=cfg.layers, with_ground=False
    )
    checkpoints = checkpoint_grid(cfg.budget)
    records: list[RunRecord] = []
    mean_curves: dict[tuple[str, int], list[float]] = {}
    run_curves: dict[tuple[str, int], list[list[float]]] = {}
    for shots in cfg.shots_list:
        for setting in cfg.optimizers:
            cell = _seeded_runs(setting, model, cfg, shots, tolerance=None)
            records.extend(cell)
            per_run = [
                [record.best_at(c) for c in checkpoints] for record in cell
            ]
            columns = list(map(list, zip(*per_run)))
            run_curves[(setting.algorithm, shots)] = columns
            mean_curves[(setting.algorithm, shots)] = [
                float(np.mean(col)) for col in columns
            ]
    return Phase3Dataset(
        cfg, _sorted_records(records), checkpoints, mean_curves, run_curves
    )


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------

def _record_to_json(record: RunRecord) -> str:
    payload = {
        "optimizer": record.optimizer,
        "model": record.model_id,
        "shots": record.shots,
        "run": record.run_index,
        "seed": record.seed,
        "fe_to_target": record.fe_to_target,
        "best_exact_energy": record.best_exact_energy,
        "termination": record.termination,
        "fe_used": record.fe_used,
        "trace": [[fe, value] for fe, value in record.trace],
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"failed writing {path}: {exc}") from exc


def write_runs_jsonl(records: Sequence[RunRecord], out_dir: Path) -> Path:
    """Canonical per-run records, one JSON object per line, cell-sorted.

    Wall times are volatile and therefore live in ``timings.csv`` instead,
    keeping this file byte-stable for identical configurations.
    """
    path = Path(out_dir) / "runs.jsonl"
    lines = [_record_to_json(r) for r in _sorted_records(records)]
    _write_text(path, "".join(line + "\n" for line in lines))
    timing_rows = ["optimizer,model,shots,run,wall_time_s"]
    for r in _sorted_records(records):
        timing_rows.append(
            f"{r.optimizer},{r.model_id},{r.shots},{r.run_index},{r.wall_time:.3f}"
        )
    _write_text(Path(out_dir) / "timings.csv", "\n".join(timing_rows) + "\n")
    return path


def write_hamiltonians(cfg: PhaseConfig, out_dir: str | Path) -> list[Path]:
    """Serialize each benchmark observable in textual Pauli notation,
    one ``coefficient*LABELS`` entry per line (qubit 0 rightmost)."""
    out = Path(out_dir)
    models = []
    if cfg.phase in (1, 2):
        for n in cfg.qubits:
            models.append((f"ising{n}", ising_hamiltonian(n)))
    else:
        models.append(
            (f"hubbard{cfg.hubbard.sites}", hubbard_hamiltonian(cfg.hubbard))
        )
    paths = []
    for model_id, ham in models:
        path = out / f"hamiltonian_{model_id}.txt"
        _write_text(path, "\n".join(format_pauli_sum(ham)) + "\n")
        paths.append(path)
    return paths


def export_phase1(report: Phase1Report, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    write_runs_jsonl(report.records, out)
    rows = ["optimizer,passed,successes,runs"]
    for name in sorted(report.passed):
        rows.append(
            f"{name},{str(report.passed[name]).lower()},"
            f"{report.successes[name]},{report.config.runs_per_cell}"
        )
    summary = out / "summary.csv"
    _write_text(summary, "\n".join(rows) + "\n")
    return [out / "runs.jsonl", summary]


def _format_cell(value: float | None) -> str:
    return MISSING_CELL if value is None else f"{value:.1f}"


def export_phase2(table: Phase2Table, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    write_runs_jsonl(table.records, out)
    qubits = sorted({q for (_, q) in table.cells})
    names = sorted({name for (name, _) in table.cells})
    rows = ["optimizer," + ",".join(f"{q}Q" for q in qubits)]
    for name in names:
        cells = [_format_cell(table.cells.get((name, q))) for q in qubits]
        rows.append(name + "," + ",".join(cells))
    summary = out / "summary.csv"
    _write_text(summary, "\n".join(rows) + "\n")
    return [out / "runs.jsonl", summary]


def export_phase3(data: Phase3Dataset, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    write_runs_jsonl(data.records, out)
    n_runs = data.config.runs_per_cell
    header = "optimizer,shots,fe_checkpoint,mean_best," + ",".join(
        f"run{i}" for i in range(n_runs)
    )
    rows = [header]
    for (name, shots) in sorted(data.mean_curves):
        means = data.mean_curves[(name, shots)]
        runs = data.run_curves[(name, shots)]
        for c_idx, checkpoint in enumerate(data.checkpoints):
            run_vals = ",".join(repr(v) for v in runs[c_idx])
            rows.append(
                f"{name},{shots},{checkpoint},{repr(means[c_idx])},{run_vals}"
            )
    curves = out / "curves.csv"
    _write_text(curves, "\n".join(rows) + "\n")
    rows = ["optimizer,shots,final_mean_best,mean_best_exact_energy"]
    for (name, shots) in sorted(data.mean_curves):
        finals = data.mean_curves[(name, shots)][-1]
        exacts = [
            r.best_exact_energy
            for r in data.records
            if r.optimizer == name and r.shots == shots
        ]
        rows.append(f"{name},{shots},{repr(finals)},{repr(float(np.mean(exacts)))}")
    summary = out / "summary.csv"
    _write_text(summary, "\n".join(rows) + "\n")
    return [out / "runs.jsonl", summary, curves]


# ---------------------------------------------------------------------------
# Configuration files and profiles
# ---------------------------------------------------------------------------

_COMMON_KEYS = {
    "phase",
    "optimizers",
    "runs_per_cell",
    "tolerance",
    "shots",
    "seed_base",
    "budget",
    "output_dir",
    "stagnation",
    "model",
    "ising",
    "hubbard",
    "qubits",
    "layers",
    "shots_list",
}

_HUBBARD_KEYS = {"sites", "t", "U", "periodic"}
_ISING_KEYS = {"n_qubits"}

DEFAULT_OPTIMIZERS = ("cmaes", "cmaes_ft", "de_best1bin", "sa_cauchy", "hs")


def _parse_optimizers(raw) -> tuple[OptimizerSetting, ...]:
    if not isinstance(raw, (list, tuple)) or not raw:
        raise ConfigError("optimizers must be a non-empty list")
    settings = []
    for entry in raw:
        if isinstance(entry, str):
            settings.append(OptimizerSetting(entry))
        elif isinstance(entry, dict):
            unknown = set(entry) - {"algorithm", "hyperparams"}
            if unknown:
                raise ConfigError(f"unknown optimizer keys: {sorted(unknown)}")
            if "algorithm" not in entry:
                raise ConfigError("optimizer entry needs an 'algorithm'")
            settings.append(
                OptimizerSetting(
                    entry["algorithm"], dict(entry.get("hyperparams", {}))
                )
            )
        else:
            raise ConfigError(f"bad optimizer entry: {entry!r}")
    return tuple(settings)


def _parse_shots(raw) -> int | str:
    if raw == EXACT:
        return EXACT
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ConfigError(f"shots must be an integer or {EXACT!r}, got {raw!r}")
    return raw


def default_config(phase: int) -> PhaseConfig:
    """Full-scale defaults for each phase (what the ``paper`` profile keeps)."""
    optimizers = tuple(OptimizerSetting(n) for n in DEFAULT_OPTIMIZERS)
    if phase == 1:
        return PhaseConfig(phase=1, optimizers=optimizers, qubits=(5,))
    if phase == 2:
        return PhaseConfig(phase=2, optimizers=optimizers, qubits=PHASE2_QUBITS)
    if phase == 3:
        return PhaseConfig(
            phase=3,
            optimizers=optimizers,
            budget=100_000,
            qubits=(12,),
            shots_list=PHASE3_SHOTS,
        )
    raise ConfigError(f"phase must be 1, 2 or 3, got {phase}")


def apply_profile(cfg: PhaseConfig, profile: str) -> PhaseConfig:
    """``quick`` shrinks cells for CI-scale runs; ``paper`` is a no-op."""
    if profile == "paper":
        return cfg
    if profile == "quick":
        updates = {"runs_per_cell": 3, "budget": 30_000}
        if cfg.phase == 2:
            updates["qubits"] = tuple(q for q in cfg.qubits if q <= 6) or (3, 4, 5, 6)
        return replace(cfg, **updates)
    raise ConfigError(f"unknown profile {profile!r}")


def load_config(
    payload: dict, phase: int, base: PhaseConfig | None = None
) -> PhaseConfig:
    """Validate a JSON config document against the phase schema.

    Unknown keys anywhere are rejected so typos fail fast.  ``base``
    supplies the starting values (defaults, possibly profile-adjusted);
    file entries override it.
    """
    if not isinstance(payload, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = set(payload) - _COMMON_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "phase" in payload and payload["phase"] != phase:
        raise ConfigError(
            f"config file is for phase {payload['phase']}, command is phase {phase}"
        )
    cfg = base if base is not None else default_config(phase)
    updates: dict = {}
    if "optimizers" in payload:
        updates["optimizers"] = _parse_optimizers(payload["optimizers"])
    for key in ("runs_per_cell", "budget", "seed_base"):
        if key in payload:
            if isinstance(payload[key], bool) or not isinstance(payload[key], int):
                raise ConfigError(f"{key} must be an integer")
            updates[key] = payload[key]
    if "tolerance" in payload:
        updates["tolerance"] = float(payload["tolerance"])
    if "stagnation" in payload:
        if not isinstance(payload["stagnation"], bool):
            raise ConfigError("stagnation must be a boolean")
        updates["stagnation"] = payload["stagnation"]
    if "output_dir" in payload:
        updates["output_dir"] = str(payload["output_dir"])
    if "shots" in payload:
        updates["shots"] = _parse_shots(payload["shots"])
    if "shots_list" in payload:
        raw = payload["shots_list"]
        if not isinstance(raw, list) or not raw:
            raise ConfigError("shots_list must be a non-empty list")
        updates["shots_list"] = tuple(_parse_shots(s) for s in raw)
    if "layers" in payload:
        if isinstance(payload["layers"], bool) or not isinstance(payload["layers"], int):
            raise ConfigError("layers must be an integer")
        updates["layers"] = payload["layers"]
    if "qubits" in payload:
        raw = payload["qubits"]
        if isinstance(raw, int):
            raw = [raw]
        if not isinstance(raw, list) or not all(isinstance(q, int) for q in raw):
            raise ConfigError("qubits must be an integer or list of integers")
        updates["qubits"] = tuple(raw)
    model_kind = payload.get("model")
    if model_kind is not None and model_kind not in ("ising", "hubbard"):
        raise ConfigError(f"model must be 'ising' or 'hubbard', got {model_kind!r}")
    if "ising" in payload:
        section = payload["ising"]
        unknown = set(section) - _ISING_KEYS
        if unknown:
            raise ConfigError(f"unknown ising keys: {sorted(unknown)}")
        if "n_qubits" in section:
            updates["qubits"] = (int(section["n_qubits"]),)
    if "hubbard" in payload:
        section = payload["hubbard"]
        unknown = set(section) - _HUBBARD_KEYS
        if unknown:
            raise ConfigError(f"unknown hubbard keys: {sorted(unknown)}")
        updates["hubbard"] = HubbardSpec(
            sites=int(section.get("sites", 6)),
            t=float(section.get("t", 1.0)),
            U=float(section.get("U", 1.0)),
            periodic=bool(section.get("periodic", True)),
        )
    try:
        return replace(cfg, **updates)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
