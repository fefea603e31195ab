import numpy as np
import pytest

from vqebench.pauli import PauliString, single_qubit_matrix


def kron_from_label(label: str) -> np.ndarray:
    """Dense matrix of a Pauli label text (rightmost char = qubit 0)."""
    matrix = np.eye(1, dtype=complex)
    for ch in label:
        matrix = np.kron(matrix, single_qubit_matrix(ch))
    return matrix


def dense_sum(pairs, n_qubits):
    """Independent dense oracle: sum of coefficient * kron(label)."""
    dim = 1 << n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for coefficient, label in pairs:
        out += coefficient * kron_from_label(label)
    return out


def embed_unitary(u: np.ndarray, targets, n_qubits: int) -> np.ndarray:
    """Expand a unitary on ``targets`` (first target = least-significant
    axis of ``u``) to the full register, matching amplitude bit order."""
    dim = 1 << n_qubits
    k = len(targets)
    full = np.zeros((dim, dim), dtype=complex)
    rest = [q for q in range(n_qubits) if q not in targets]
    for col in range(dim):
        small_col = 0
        for pos, q in enumerate(targets):
            if col >> q & 1:
                small_col |= 1 << pos
        base = sum(((col >> q & 1) << q) for q in rest)
        for small_row in range(1 << k):
            amp = u[small_row, small_col]
            if amp == 0:
                continue
            row = base
            for pos, q in enumerate(targets):
                if small_row >> pos & 1:
                    row |= 1 << q
            full[row, col] += amp
    return full


def random_pauli_string(rng, n_qubits) -> PauliString:
    return PauliString(tuple(rng.choice(list("IXYZ")) for _ in range(n_qubits)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
