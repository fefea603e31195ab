"""Pauli-string algebra and sparse Pauli-sum observables.

A Pauli string is a tensor product of single-qubit operators from
``{I, X, Y, Z}``, one per qubit.  Qubit 0 is the least-significant bit of
the computational-basis index, so in the textual form (``"ZZIII"``) the
rightmost character is qubit 0.  A :class:`PauliSum` is a weighted list of
strings and is the Hamiltonian representation used throughout the package.

All values are immutable after construction; the module-level operations
are pure functions and safe to share across threads.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "PauliString",
    "PauliTerm",
    "PauliSum",
    "compose",
    "simplify",
    "qubitwise_commuting_groups",
    "dense_matrix",
    "pauli_action",
    "string_bit_masks",
    "parse_pauli_sum",
    "format_pauli_sum",
]

_LABELS = frozenset("IXYZ")

# Single-qubit products: (a, b) -> (phase, product).  Phases are exact
# fourth roots of unity, e.g. X*Y = iZ, Y*X = -iZ.
_MUL_TABLE = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}

_SINGLE_QUBIT_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

DENSE_QUBIT_LIMIT = 14
HERMITICITY_TOL = 1e-12
DEFAULT_DROP_TOL = 1e-12


@dataclass(frozen=True, order=True)
class PauliString:
    """A fixed-length word over {I, X, Y, Z}, one label per qubit.

    ``labels[q]`` is the operator acting on qubit ``q``.  The all-identity
    string is a valid value.
    """

    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.labels:
            raise ValueError("PauliString needs at least one qubit")
        bad = set(self.labels) - _LABELS
        if bad:
            raise ValueError(f"invalid Pauli labels: {sorted(bad)}")

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    @property
    def is_identity(self) -> bool:
        return all(c == "I" for c in self.labels)

    @property
    def support(self) -> tuple[int, ...]:
        """Qubit indices with a non-identity label, ascending."""
        return tuple(q for q, c in enumerate(self.labels) if c != "I")

    @classmethod
    def from_label(cls, text: str) -> "PauliString":
        """Build from textual form, rightmost character = qubit 0."""
        return cls(tuple(reversed(text)))

    def to_label(self) -> str:
        return "".join(reversed(self.labels))

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(("I",) * n_qubits)

    @classmethod
    def single(cls, n_qubits: int, qubit: int, label: str) -> "PauliString":
        """A single non-identity label on one qubit."""
        labels = ["I"] * n_qubits
        labels[qubit] = label
        return cls(tuple(labels))

    def __str__(self) -> str:
        return self.to_label()


def compose(a: PauliString, b: PauliString) -> tuple[complex, PauliString]:
    """Multiply two Pauli strings.

    Returns ``(phase, product)`` with ``phase`` one of ``{1, i, -1, -i}``
    such that ``matrix(a) @ matrix(b) == phase * matrix(product)``.

    Raises:
        ValueError: if the strings act on different qubit counts.
    """
    if a.n_qubits != b.n_qubits:
        raise ValueError(
            f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}"
        )
    phase: complex = 1
    out = []
    for ca, cb in zip(a.labels, b.labels):
        p, c = _MUL_TABLE[(ca, cb)]
        phase *= p
        out.append(c)
    return phase, PauliString(tuple(out))


@dataclass(frozen=True)
class PauliTerm:
    """A complex coefficient attached to a Pauli string."""

    coefficient: complex
    string: PauliString

    def __post_init__(self) -> None:
        if not cmath.isfinite(complex(self.coefficient)):
            raise ValueError(f"non-finite coefficient: {self.coefficient!r}")

    @property
    def n_qubits(self) -> int:
        return self.string.n_qubits


@dataclass(frozen=True)
class PauliSum:
    """An ordered list of Pauli terms on a common qubit register.

    A sum tagged ``"hamiltonian"`` must have coefficients real within
    ``1e-12`` (Hermiticity); untagged sums may carry complex coefficients,
    which keeps the algebra closed under intermediate products such as the
    Jordan-Wigner expansion.
    """

    terms: tuple[PauliTerm, ...]
    n_qubits: int
    tag: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        for t in self.terms:
            if t.n_qubits != self.n_qubits:
                raise ValueError(
                    f"term on {t.n_qubits} qubits in a {self.n_qubits}-qubit sum"
                )
        if self.tag == "hamiltonian":
            worst = max(
                (abs(complex(t.coefficient).imag) for t in self.terms),
                default=0.0,
            )
            if worst > HERMITICITY_TOL:
                raise ValueError(
                    f"hamiltonian coefficients must be real, worst imag {worst:.3e}"
                )

    @classmethod
    def from_terms(
        cls,
        terms: Iterable[tuple[complex, PauliString]],
        n_qubits: int,
        tag: str | None = None,
    ) -> "PauliSum":
        return cls(
            tuple(PauliTerm(c, s) for c, s in terms), n_qubits, tag
        )

    @classmethod
    def from_labels(
        cls,
        entries: Iterable[tuple[complex, str]],
        tag: str | None = None,
    ) -> "PauliSum":
        """Build from (coefficient, textual label) pairs."""
        terms = [
            PauliTerm(c, PauliString.from_label(lbl)) for c, lbl in entries
        ]
        if not terms:
            raise ValueError("cannot infer qubit count from an empty list")
        return cls(tuple(terms), terms[0].n_qubits, tag)

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    @property
    def is_constant(self) -> bool:
        """True for a sum whose every term is the identity string."""
        return all(t.string.is_identity for t in self.terms)

    def coefficient_of(self, string: PauliString) -> complex:
        for t in self.terms:
            if t.string == string:
                return t.coefficient
        return 0.0

    def abs_coefficient_sum(self) -> float:
        return float(sum(abs(complex(t.coefficient)) for t in self.terms))

    def tagged(self, tag: str) -> "PauliSum":
        return PauliSum(self.terms, self.n_qubits, tag)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if other.n_qubits != self.n_qubits:
            raise ValueError("qubit count mismatch in sum")
        return PauliSum(self.terms + other.terms, self.n_qubits)

    def __mul__(self, scalar: complex) -> "PauliSum":
        return PauliSum(
            tuple(PauliTerm(t.coefficient * scalar, t.string) for t in self.terms),
            self.n_qubits,
        )

    __rmul__ = __mul__


def simplify(s: PauliSum, drop_tol: float = DEFAULT_DROP_TOL) -> PauliSum:
    """Merge duplicate strings and drop negligible coefficients.

    Coefficients of equal strings are added; terms with
    ``|coefficient| <= drop_tol`` are removed; the surviving terms are
    sorted lexicographically by label sequence so downstream grouping and
    serialization are deterministic.
    """
    if drop_tol < 0:
        raise ValueError("drop_tol must be >= 0")
    merged: dict[tuple[str, ...], complex] = {}
    for t in s.terms:
        merged[t.string.labels] = merged.get(t.string.labels, 0.0) + complex(
            t.coefficient
        )
    kept = [
        PauliTerm(c, PauliString(lbls))
        for lbls, c in merged.items()
        if abs(c) > drop_tol
    ]
    kept.sort(key=lambda t: t.string.labels)
    return PauliSum(tuple(kept), s.n_qubits, s.tag)


def _qw_compatible(profile: list[str], labels: Sequence[str]) -> bool:
    return all(
        p == "I" or c == "I" or p == c for p, c in zip(profile, labels)
    )


def qubitwise_commuting_groups(s: PauliSum) -> list[PauliSum]:
    """Greedy first-fit partition into qubit-wise commuting groups.

    Within a group every qubit position carries at most one non-identity
    label across all member strings, so one basis-rotated circuit measures
    the whole group.  The identity term, when present, always forms its own
    single-term group (the constant contribution needs no measurement).
    The union of the groups is exactly the input term list.
    """
    if not s.terms:
        raise ValueError("cannot group an empty PauliSum")
    groups: list[list[PauliTerm]] = []
    profiles: list[list[str] | None] = []  # None marks the constant group
    for term in s.terms:
        if term.string.is_identity:
            groups.append([term])
            profiles.append(None)
            continue
        placed = False
        for grp, prof in zip(groups, profiles):
            if prof is None:
                continue
            if _qw_compatible(prof, term.string.labels):
                grp.append(term)
                for q, c in enumerate(term.string.labels):
                    if c != "I":
                        prof[q] = c
                placed = True
                break
        if not placed:
            groups.append(list([term]))
            profiles.append(list(term.string.labels))
    return [PauliSum(tuple(g), s.n_qubits, s.tag) for g in groups]


@lru_cache(maxsize=1024)
def string_bit_masks(labels: tuple[str, ...]) -> tuple[int, int, int]:
    """Bit-mask form of a Pauli string's basis action.

    Returns ``(flip, sign_mask, n_y)``: ``P|x> = i^n_y *
    (-1)^popcount(x & sign_mask) |x ^ flip>`` with ``flip`` collecting the
    X/Y positions and ``sign_mask`` the Y/Z positions.
    """
    flip = 0
    sign_mask = 0
    n_y = 0
    for q, c in enumerate(labels):
        if c in ("X", "Y"):
            flip |= 1 << q
        if c in ("Z", "Y"):
            sign_mask |= 1 << q
        if c == "Y":
            n_y += 1
    return flip, sign_mask, n_y


@lru_cache(maxsize=512)
def _cached_action(labels: tuple[str, ...]) -> tuple[int, np.ndarray]:
    flip, sign_mask, n_y = string_bit_masks(labels)
    x = np.arange(1 << len(labels), dtype=np.int64)
    parity = np.bitwise_count(np.bitwise_and(x, sign_mask)) & 1
    signs = 1.0 - 2.0 * parity.astype(np.float64)
    global_phase = 1j ** n_y
    if n_y % 2 == 0:
        phases = signs * global_phase.real
    else:
        phases = signs * global_phase
    phases.setflags(write=False)
    return flip, phases


def pauli_action(string: PauliString) -> tuple[int, np.ndarray]:
    """Scatter form of a Pauli string: ``P|x> = phases[x] |x ^ flip>``.

    ``flip`` is the XOR mask of the X/Y positions; ``phases`` has length
    ``2**n`` and is real for strings with an even number of Y labels.
    Results are cached per label sequence since the same strings are
    applied many times during simulation.
    """
    return _cached_action(string.labels)


def dense_matrix(s: PauliSum) -> np.ndarray:
    """Dense matrix of the sum, ``sum_k w_k * kron(labels_k)``.

    Exact to floating point; intended as the oracle behind exact
    diagonalization and small-system checks.

    Raises:
        ValueError: beyond 14 qubits (the dense form would exceed memory).
    """
    if s.n_qubits > DENSE_QUBIT_LIMIT:
        raise ValueError(
            f"dense matrix limited to {DENSE_QUBIT_LIMIT} qubits, got {s.n_qubits}"
        )
    dim = 1 << s.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    cols = np.arange(dim)
    for t in s.terms:
        flip, phases = pauli_action(t.string)
        out[cols ^ flip, cols] += complex(t.coefficient) * phases
    return out


def _format_coefficient(c: complex) -> str:
    c = complex(c)
    if abs(c.imag) > HERMITICITY_TOL:
        raise ValueError(
            f"textual form only covers real coefficients, got {c!r}"
        )
    return repr(float(c.real))


def format_pauli_sum(s: PauliSum) -> list[str]:
    """Textual form, one ``"<coefficient>*<labels>"`` entry per term.

    Qubit 0 is the rightmost label character, e.g. ``"-1.0*ZZIII"``.
    """
    return [
        f"{_format_coefficient(t.coefficient)}*{t.string.to_label()}"
        for t in s.terms
    ]


def parse_pauli_sum(entries: Sequence[str], tag: str | None = None) -> PauliSum:
    """Inverse of :func:`format_pauli_sum`."""
    if not entries:
        raise ValueError("empty Pauli sum text")
    pairs = []
    for raw in entries:
        coef_text, _, label = raw.partition("*")
        if not label:
            raise ValueError(f"malformed Pauli entry: {raw!r}")
        pairs.append((float(coef_text), label.strip()))
    return PauliSum.from_labels(pairs, tag=tag)


def single_qubit_matrix(label: str) -> np.ndarray:
    """The 2x2 matrix of one Pauli label."""
    return _SINGLE_QUBIT_MATRICES[label].copy()
