"""Energy objective: exact and shot-sampled Pauli-sum expectations.

Measurement follows the diagonalize-and-sample scheme: the observable is
partitioned into qubit-wise commuting groups, each group is rotated into
the computational basis (H for X positions, S-dagger then H for Y
positions), and bitstrings are drawn from the rotated state's outcome
distribution.  Every group receives the full shot budget and the random
stream is consumed in deterministic group order.

Randomness comes from the counter-based Philox generator keyed by
``(seed, evaluation index)``, so evaluation sequences are reproducible
across platforms and independent runs can use disjoint substreams without
coordination.  One :class:`EnergyObjective` instance is single-consumer:
``evaluate`` advances its evaluation counter.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .pauli import PauliSum, pauli_action, qubitwise_commuting_groups
from .simulator import (
    Circuit,
    Statevector,
    apply_h,
    apply_sdg,
    run_circuit,
)

__all__ = [
    "EXACT",
    "ShotConfig",
    "EnergyObjective",
    "exact_expectation",
    "sampled_expectation",
]

EXACT = "exact"
MAX_SHOTS = 10**9
_IMAG_TOL = 1e-10
_SEED_BITS = 64


@dataclass(frozen=True)
class ShotConfig:
    """Shot budget (or the ``"exact"`` sentinel) plus the base RNG seed."""

    shots: int | str
    seed: int = 0

    def __post_init__(self) -> None:
        if self.shots != EXACT:
            if not isinstance(self.shots, (int, np.integer)) or isinstance(
                self.shots, bool
            ):
                raise ValueError(f"shots must be an integer or {EXACT!r}")
            if not 1 <= int(self.shots) <= MAX_SHOTS:
                raise ValueError(f"shots out of range: {self.shots}")
        if not 0 <= int(self.seed) < (1 << _SEED_BITS):
            raise ValueError("seed must fit in 64 unsigned bits")

    @property
    def is_exact(self) -> bool:
        return self.shots == EXACT


def exact_expectation(state: Statevector, h: PauliSum) -> float:
    """``sum_k w_k <psi|P_k|psi>`` without sampling.

    The imaginary residue must stay below 1e-10 (it is zero in exact
    arithmetic for Hermitian sums) and is discarded after the check.
    """
    psi = state.amplitudes
    if psi.size != (1 << h.n_qubits):
        raise ValueError(
            f"state on {state.n_qubits} qubits, observable on {h.n_qubits}"
        )
    acc = 0.0 + 0.0j
    index = np.arange(psi.size)
    for term in h.terms:
        flip, phases = pauli_action(term.string)
        if flip == 0:
            val = np.vdot(psi, phases * psi)
        else:
            val = np.vdot(psi, (phases * psi)[index ^ flip])
        acc += complex(term.coefficient) * val
    if abs(acc.imag) > _IMAG_TOL:
        raise FloatingPointError(
            f"expectation has imaginary residue {acc.imag:.3e}"
        )
    return float(acc.real)


class _MeasuredGroup:
    """Precompiled measurement data for one qubit-wise commuting group."""

    __slots__ = ("basis_ops", "weights", "sign_table")

    def __init__(self, group: PauliSum):
        n = group.n_qubits
        profile = ["I"] * n
        for term in group.terms:
            for q, c in enumerate(term.string.labels):
                if c != "I":
                    profile[q] = c
        # (qubit, needs_sdg) pairs; S-dagger precedes H for Y positions.
        self.basis_ops = tuple(
            (q, c == "Y") for q, c in enumerate(profile) if c in ("X", "Y")
        )
        weights = []
        tables = []
        x = np.arange(1 << n, dtype=np.int64)
        for term in group.terms:
            coef = complex(term.coefficient)
            if abs(coef.imag) > _IMAG_TOL:
                raise ValueError("sampled estimation needs real coefficients")
            weights.append(coef.real)
            mask = 0
            for q in term.string.support:
                mask |= 1 << q
            parity = np.bitwise_count(np.bitwise_and(x, mask)) & 1
            tables.append((1 - 2 * parity).astype(np.int8))
        self.weights = np.array(weights, dtype=float)
        self.sign_table = np.vstack(tables)

    def rotated_probabilities(self, state: Statevector) -> np.ndarray:
        amps = state.amplitudes.copy()
        for q, needs_sdg in self.basis_ops:
            if needs_sdg:
                apply_sdg(amps, q)
            apply_h(amps, q)
        probs = amps.real * amps.real + amps.imag * amps.imag
        total = probs.sum()
        if not np.isfinite(total) or total <= 0:
            raise FloatingPointError("degenerate outcome distribution")
        return probs / total

    def estimate(
        self, state: Statevector, shots: int, rng: np.random.Generator
    ) -> tuple[float, float]:
        """Sampled group energy and its squared standard error."""
        probs = self.rotated_probabilities(state)
        samples = rng.choice(probs.size, size=shots, p=probs)
        per_shot = self.weights @ self.sign_table[:, samples]
        value = float(per_shot.mean())
        if shots > 1:
            var = float(per_shot.var(ddof=1)) / shots
        else:
            var = 0.0
        return value, var


class _MeasurementPlan:
    """Grouped, basis-rotated measurement layout for one observable."""

    def __init__(self, h: PauliSum):
        self.n_qubits = h.n_qubits
        self.constant = 0.0
        self.groups: list[_MeasuredGroup] = []
        for group in qubitwise_commuting_groups(h):
            if group.is_constant:
                for term in group.terms:
                    self.constant += complex(term.coefficient).real
            else:
                self.groups.append(_MeasuredGroup(group))

    def sample(
        self, state: Statevector, shots: int, rng: np.random.Generator
    ) -> tuple[float, float]:
        value = self.constant
        var = 0.0
        for group in self.groups:
            v, g_var = group.estimate(state, shots, rng)
            value += v
            var += g_var
        return value, float(np.sqrt(var))


@lru_cache(maxsize=64)
def _plan_for(h: PauliSum) -> _MeasurementPlan:
    return _MeasurementPlan(h)


def sampled_expectation(
    state: Statevector,
    h: PauliSum,
    cfg: ShotConfig,
    rng: np.random.Generator | None = None,
) -> float:
    """Shot-noise estimate of the expectation value.

    With ``cfg.shots == "exact"`` this falls through to
    :func:`exact_expectation` (bit-identical).  Otherwise each commuting
    group is measured with the full shot budget; passing an explicit
    ``rng`` overrides the default Philox stream keyed by ``cfg.seed``.
    """
    if cfg.is_exact:
        return exact_expectation(state, h)
    if state.amplitudes.size != (1 << h.n_qubits):
        raise ValueError(
            f"state on {state.n_qubits} qubits, observable on {h.n_qubits}"
        )
    if rng is None:
        rng = np.random.Generator(np.random.Philox(key=int(cfg.seed)))
    value, _ = _plan_for(h).sample(state, int(cfg.shots), rng)
    return value


class EnergyObjective:
    """Circuit + observable + shot config with evaluation accounting.

    Each :meth:`evaluate` call counts as exactly one function evaluation
    regardless of shots or group count, and consumes a dedicated Philox
    substream keyed by ``(seed, fe_count)`` so the value sequence is
    reproducible.  :meth:`exact_energy` is the noise-free side channel
    used by success confirmation; it touches neither the counter nor the
    random stream.
    """

    def __init__(
        self,
        circuit: Circuit,
        hamiltonian: PauliSum,
        shot_config: ShotConfig,
    ):
        if circuit.n_qubits != hamiltonian.n_qubits:
            raise ValueError(
                f"circuit on {circuit.n_qubits} qubits, observable on "
                f"{hamiltonian.n_qubits}"
            )
        self.circuit = circuit
        self.hamiltonian = hamiltonian
        self.shot_config = shot_config
        self.fe_count = 0
        self.exact_eval_count = 0
        self.last_stderr: float | None = None
        self._plan = None if shot_config.is_exact else _plan_for(hamiltonian)

    @property
    def n_params(self) -> int:
        return self.circuit.n_params

    def _substream(self, index: int) -> np.random.Generator:
        key = (int(self.shot_config.seed) << _SEED_BITS) + index
        return np.random.Generator(np.random.Philox(key=key))

    def evaluate(self, theta: Sequence[float]) -> float:
        state = run_circuit(self.circuit, theta)
        if self.shot_config.is_exact:
            value = exact_expectation(state, self.hamiltonian)
            self.last_stderr = 0.0
        else:
            rng = self._substream(self.fe_count)
            value, stderr = self._plan.sample(
                state, int(self.shot_config.shots), rng
            )
            self.last_stderr = stderr
        self.fe_count += 1
        return value

    __call__ = evaluate

    def exact_energy(self, theta: Sequence[float]) -> float:
        """Noise-free energy of the circuit state; not counted as an FE."""
        self.exact_eval_count += 1
        state = run_circuit(self.circuit, theta)
        return exact_expectation(state, self.hamiltonian)
