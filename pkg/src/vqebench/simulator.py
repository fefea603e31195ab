"""Dense statevector simulation of parameterized circuits.

Gates are applied in list order to ``|0...0>``.  Qubit 0 is the
least-significant bit of the amplitude index.  Circuits are immutable
after construction; :func:`run_circuit` allocates its own state, so
concurrent invocations on a shared circuit need no coordination.

Two ansatz builders cover the benchmark models: a rotation/entanglement
ladder over single-qubit RY/RZ layers with linear CZ coupling (used for
the transverse-field-free Ising chain), and a Hamiltonian-fragment
exponential ansatz for the Hubbard model built from hopping-bond and
on-site interaction strings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from ._kernels import apply_pauli_exp_kernel, apply_single_qubit_kernel
from .pauli import (
    PauliString,
    pauli_action,
    single_qubit_matrix,
    string_bit_masks,
)

__all__ = [
    "Gate",
    "Circuit",
    "Statevector",
    "as_parameter_vector",
    "run_circuit",
    "gate_unitary",
    "build_ising_ansatz",
    "build_hubbard_hva",
    "dump_circuit",
]

NORM_TOL = 1e-10

_SINGLE_QUBIT_KINDS = frozenset({"RY", "RZ", "H", "SDG", "X"})
_ROTATION_KINDS = frozenset({"RY", "RZ", "PAULI_EXP"})
_ALL_KINDS = _SINGLE_QUBIT_KINDS | {"CZ", "PAULI_EXP"}


@dataclass(frozen=True)
class Gate:
    """One circuit element.

    Rotation gates (RY, RZ, PAULI_EXP) carry either a fixed ``angle`` in
    radians or a parameter ``slot`` index, never both.  ``PAULI_EXP``
    applies ``exp(-i * angle * P)`` for its Pauli string ``P``; its targets
    must equal the non-identity support of that string.
    """

    kind: str
    targets: tuple[int, ...]
    slot: int | None = None
    angle: float | None = None
    pauli: PauliString | None = None

    def __post_init__(self) -> None:
        if self.kind not in _ALL_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind in _SINGLE_QUBIT_KINDS and len(self.targets) != 1:
            raise ValueError(f"{self.kind} takes exactly one target")
        if self.kind == "CZ":
            if len(self.targets) != 2 or self.targets[0] == self.targets[1]:
                raise ValueError("CZ takes two distinct targets")
        if self.kind in _ROTATION_KINDS:
            if (self.slot is None) == (self.angle is None):
                raise ValueError(
                    f"{self.kind} needs exactly one of slot or angle"
                )
        elif self.slot is not None or self.angle is not None:
            raise ValueError(f"{self.kind} takes no angle source")
        if self.kind == "PAULI_EXP":
            if self.pauli is None:
                raise ValueError("PAULI_EXP needs a Pauli string")
            if tuple(self.pauli.support) != tuple(sorted(self.targets)):
                raise ValueError(
                    "PAULI_EXP targets must equal the string's non-identity support"
                )
        elif self.pauli is not None:
            raise ValueError(f"{self.kind} takes no Pauli string")

    @property
    def is_parameterized(self) -> bool:
        return self.slot is not None


@dataclass(frozen=True)
class Circuit:
    """An ordered gate list on a fixed register with ``n_params`` slots."""

    n_qubits: int
    gates: tuple[Gate, ...]
    n_params: int

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        if self.n_params < 0:
            raise ValueError("n_params must be nonnegative")
        used = set()
        for g in self.gates:
            if any(t < 0 or t >= self.n_qubits for t in g.targets):
                raise ValueError(f"gate target out of range: {g}")
            if g.slot is not None:
                if not 0 <= g.slot < self.n_params:
                    raise ValueError(f"parameter slot out of range: {g}")
                used.add(g.slot)
        missing = set(range(self.n_params)) - used
        if missing:
            raise ValueError(f"unreferenced parameter slots: {sorted(missing)}")

    def concatenated(self, other: "Circuit") -> "Circuit":
        """Append ``other``'s gates, shifting its slots past this circuit's."""
        if other.n_qubits != self.n_qubits:
            raise ValueError("qubit count mismatch")
        shift = self.n_params
        shifted = tuple(
            Gate(
                g.kind,
                g.targets,
                slot=None if g.slot is None else g.slot + shift,
                angle=g.angle,
                pauli=g.pauli,
            )
            for g in other.gates
        )
        return Circuit(
            self.n_qubits, self.gates + shifted, self.n_params + other.n_params
        )


class Statevector:
    """A 2^n vector of complex amplitudes, qubit 0 least significant."""

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes: np.ndarray):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        if amplitudes.ndim != 1 or amplitudes.size & (amplitudes.size - 1):
            raise ValueError("amplitudes must be a 1-D array of length 2^n")
        self.amplitudes = amplitudes

    @property
    def n_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))

    def probabilities(self) -> np.ndarray:
        a = self.amplitudes
        return (a.real * a.real + a.imag * a.imag).astype(float)

    @classmethod
    def zero_state(cls, n_qubits: int) -> "Statevector":
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(amps)

    def copy(self) -> "Statevector":
        return Statevector(self.amplitudes.copy())


def as_parameter_vector(values: Sequence[float], n_params: int) -> np.ndarray:
    """Validate and convert a parameter assignment to a float array."""
    theta = np.asarray(values, dtype=float)
    if theta.shape != (n_params,):
        raise ValueError(
            f"expected {n_params} parameters, got shape {theta.shape}"
        )
    if not np.all(np.isfinite(theta)):
        raise ValueError("parameters must be finite")
    return theta


# ---------------------------------------------------------------------------
# Gate kernels (in-place on the amplitude array)
# ---------------------------------------------------------------------------

_H_MATRIX = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)
_SDG_MATRIX = np.diag([1.0, -1j]).astype(complex)
_X_MATRIX = np.array([[0, 1], [1, 0]], dtype=complex)


def _ry_matrix(angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz_matrix(angle: float) -> np.ndarray:
    return np.array(
        [
            [complex(math.cos(angle / 2), -math.sin(angle / 2)), 0.0],
            [0.0, complex(math.cos(angle / 2), math.sin(angle / 2))],
        ]
    )


def apply_h(amps: np.ndarray, qubit: int) -> None:
    apply_single_qubit_kernel(amps, qubit, _H_MATRIX)


def apply_sdg(amps: np.ndarray, qubit: int) -> None:
    apply_single_qubit_kernel(amps, qubit, _SDG_MATRIX)


@lru_cache(maxsize=256)
def _cz_indices(n_qubits: int, q0: int, q1: int) -> np.ndarray:
    x = np.arange(1 << n_qubits)
    mask = (1 << q0) | (1 << q1)
    idx = np.flatnonzero((x & mask) == mask)
    idx.setflags(write=False)
    return idx


def _apply_cz(amps: np.ndarray, n_qubits: int, q0: int, q1: int) -> None:
    amps[_cz_indices(n_qubits, q0, q1)] *= -1.0


def _apply_pauli_exp(
    amps: np.ndarray,
    pauli: PauliString,
    angle: float,
    scratch: np.ndarray | None = None,
) -> None:
    """In-place ``amps <- cos(angle) amps - i sin(angle) P amps``."""
    flip, phases = pauli_action(pauli)
    apply_pauli_exp_kernel(
        amps,
        flip,
        phases,
        math.cos(angle),
        math.sin(angle),
        scratch,
        masks=string_bit_masks(pauli.labels),
    )


def apply_gate(
    amps: np.ndarray,
    n_qubits: int,
    gate: Gate,
    angle: float | None,
    scratch: np.ndarray | None = None,
) -> None:
    """Apply one gate in place; ``angle`` resolves a parameterized slot."""
    kind = gate.kind
    if kind == "RY":
        apply_single_qubit_kernel(amps, gate.targets[0], _ry_matrix(angle))
    elif kind == "RZ":
        apply_single_qubit_kernel(amps, gate.targets[0], _rz_matrix(angle))
    elif kind == "H":
        apply_h(amps, gate.targets[0])
    elif kind == "SDG":
        apply_sdg(amps, gate.targets[0])
    elif kind == "X":
        apply_single_qubit_kernel(amps, gate.targets[0], _X_MATRIX)
    elif kind == "CZ":
        _apply_cz(amps, n_qubits, gate.targets[0], gate.targets[1])
    elif kind == "PAULI_EXP":
        _apply_pauli_exp(amps, gate.pauli, angle, scratch)  # type: ignore[arg-type]
    else:  # pragma: no cover - kinds validated at construction
        raise ValueError(f"unknown gate kind {kind!r}")


def run_circuit(circuit: Circuit, theta: Sequence[float]) -> Statevector:
    """Evolve ``|0...0>`` through the circuit at the given parameters.

    Raises:
        ValueError: if ``theta`` does not match ``circuit.n_params``.
    """
    theta = as_parameter_vector(theta, circuit.n_params)
    state = Statevector.zero_state(circuit.n_qubits)
    amps = state.amplitudes
    scratch = np.empty_like(amps) if circuit.n_qubits > 1 else None
    for g in circuit.gates:
        angle = g.angle if g.slot is None else float(theta[g.slot])
        apply_gate(amps, circuit.n_qubits, g, angle, scratch)
    norm = state.norm()
    if abs(norm - 1.0) > NORM_TOL:
        raise FloatingPointError(f"state norm drifted to {norm!r}")
    return state


def gate_unitary(gate: Gate, angle: float | None = None) -> np.ndarray:
    """Dense unitary of one gate on its targets.

    For multi-target gates the first listed target is the least-significant
    axis of the returned matrix.  ``angle`` resolves a parameterized slot
    and is ignored for non-rotation gates.
    """
    kind = gate.kind
    if kind in _ROTATION_KINDS:
        if angle is None:
            angle = gate.angle
        if angle is None or not math.isfinite(angle):
            raise ValueError("rotation gates need a finite angle")
    if kind == "RY":
        c, s = math.cos(angle / 2), math.sin(angle / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == "RZ":
        return np.diag(
            [np.exp(-0.5j * angle), np.exp(0.5j * angle)]
        ).astype(complex)
    if kind == "H":
        return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)
    if kind == "SDG":
        return np.diag([1.0, -1j]).astype(complex)
    if kind == "X":
        return single_qubit_matrix("X")
    if kind == "CZ":
        return np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
    if kind == "PAULI_EXP":
        support = gate.pauli.support  # type: ignore[union-attr]
        mat = np.eye(1, dtype=complex)
        # First target = least-significant axis, matching amplitude order.
        for q in support:
            mat = np.kron(single_qubit_matrix(gate.pauli.labels[q]), mat)
        dim = mat.shape[0]
        return math.cos(angle) * np.eye(dim, dtype=complex) - 1j * math.sin(
            angle
        ) * mat
    raise ValueError(f"unknown gate kind {kind!r}")  # pragma: no cover


# ---------------------------------------------------------------------------
# Ansatz builders
# ---------------------------------------------------------------------------

def build_ising_ansatz(n_qubits: int) -> Circuit:
    """Rotation/entanglement ansatz for the Ising chain objective.

    Layer order: a fixed RY(pi/4) on every qubit, a parameterized RY then
    RZ layer, CZ gates on adjacent pairs, and a final parameterized RY/RZ
    layer.  Total parameter count is ``4 * n_qubits``.
    """
    if n_qubits < 2:
        raise ValueError("the chain ansatz needs at least 2 qubits")
    n = n_qubits
    gates: list[Gate] = []
    for q in range(n):
        gates.append(Gate("RY", (q,), angle=math.pi / 4))
    for q in range(n):
        gates.append(Gate("RY", (q,), slot=q))
    for q in range(n):
        gates.append(Gate("RZ", (q,), slot=n + q))
    for q in range(n - 1):
        gates.append(Gate("CZ", (q, q + 1)))
    for q in range(n):
        gates.append(Gate("RY", (q,), slot=2 * n + q))
    for q in range(n):
        gates.append(Gate("RZ", (q,), slot=3 * n + q))
    return Circuit(n, tuple(gates), 4 * n)


def _bond_strings(a: int, b: int, n_qubits: int) -> tuple[PauliString, PauliString]:
    """The two hopping strings for qubits ``a < b``: X..Z..X and Y..Z..Y."""
    lo, hi = min(a, b), max(a, b)
    xx = ["I"] * n_qubits
    yy = ["I"] * n_qubits
    for q in range(lo + 1, hi):
        xx[q] = "Z"
        yy[q] = "Z"
    xx[lo] = xx[hi] = "X"
    yy[lo] = yy[hi] = "Y"
    return PauliString(tuple(xx)), PauliString(tuple(yy))


def build_hubbard_hva(sites: int, layers: int, periodic: bool = True) -> Circuit:
    """Hamiltonian-fragment exponential ansatz for the Hubbard objective.

    The register holds ``2 * sites`` qubits in a blocked layout (spin-up on
    qubits ``0..sites-1``, spin-down above).  An initial parameterized RY on
    every qubit stands in for the parameterized reference state; each layer
    then applies one exponential per hopping bond per spin sector (the two
    Pauli strings of a bond commute and share one angle, realized as two
    sequential exponentials on the same slot) and one exponential per site
    for the on-site ZZ interaction string.  Parameter count is
    ``2*sites + layers * 3*sites``.
    """
    if sites < 2:
        raise ValueError("need at least 2 sites")
    if layers < 0:
        raise ValueError("layers must be nonnegative")
    n = 2 * sites
    bonds = [(i, i + 1) for i in range(sites - 1)]
    if periodic:
        bonds.append((sites - 1, 0))
    gates: list[Gate] = []
    for q in range(n):
        gates.append(Gate("RY", (q,), slot=q))
    slot = n
    for _ in range(layers):
        for offset in (0, sites):
            for (i, j) in bonds:
                xx, yy = _bond_strings(offset + i, offset + j, n)
                gates.append(
                    Gate("PAULI_EXP", xx.support, slot=slot, pauli=xx)
                )
                gates.append(
                    Gate("PAULI_EXP", yy.support, slot=slot, pauli=yy)
                )
                slot += 1
        for i in range(sites):
            labels = ["I"] * n
            labels[i] = "Z"
            labels[sites + i] = "Z"
            zz = PauliString(tuple(labels))
            gates.append(Gate("PAULI_EXP", zz.support, slot=slot, pauli=zz))
            slot += 1
    return Circuit(n, tuple(gates), slot)


def dump_circuit(circuit: Circuit) -> str:
    """One gate per line, e.g. ``RY q0 slot=3`` or ``EXP ZZ q0 q1 slot=17``.

    Fixed angles print with 10 decimals; parameterized gates print their
    slot.  Used by golden-file tests and debug output.
    """
    lines = []
    for g in circuit.gates:
        if g.kind == "PAULI_EXP":
            support = sorted(g.targets)
            word = "".join(g.pauli.labels[q] for q in support)
            head = f"EXP {word} " + " ".join(f"q{q}" for q in support)
        else:
            head = f"{g.kind} " + " ".join(f"q{q}" for q in g.targets)
        if g.slot is not None:
            lines.append(f"{head} slot={g.slot}")
        elif g.angle is not None:
            lines.append(f"{head} fixed={g.angle:.10f}")
        else:
            lines.append(head)
    return "\n".join(lines)
