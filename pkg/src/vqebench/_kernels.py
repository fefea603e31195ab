"""Hot numeric kernels with optional JIT acceleration.

The statevector update rules live here in two interchangeable forms: a
pure-numpy implementation (always available) and a numba-compiled one
used automatically when numba is importable.  Both compute the same
elementwise updates; the JIT path exploits that a Pauli string's
bit-flip mask is an involution, updating amplitude pairs in place.

``USE_JIT`` reports which path is active; tests assert the two agree.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    USE_JIT = True
except ImportError:  # pragma: no cover - exercised only without numba
    USE_JIT = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


# ---------------------------------------------------------------------------
# exp(-i * angle * P) with P|x> = phases[x] |x ^ flip>
# ---------------------------------------------------------------------------

def pauli_exp_numpy(
    amps: np.ndarray,
    flip: int,
    phases: np.ndarray,
    cos_a: float,
    sin_a: float,
    scratch: np.ndarray | None = None,
) -> None:
    if flip == 0:
        factor = phases * (-1j * sin_a)
        factor += cos_a
        amps *= factor
        return
    idx = np.arange(amps.size) ^ flip
    if scratch is None:
        scratch = np.empty_like(amps)
    np.take(amps, idx, out=scratch)
    scratch *= phases[idx]
    scratch *= -1j * sin_a
    amps *= cos_a
    amps += scratch


@njit(cache=True)
def _pauli_exp_jit(amps, flip, phases, cos_a, sin_a):  # pragma: no cover - jit
    if flip == 0:
        for y in range(amps.size):
            amps[y] = amps[y] * (cos_a - 1j * sin_a * phases[y])
        return
    for y in range(amps.size):
        partner = y ^ flip
        if y < partner:
            a = amps[y]
            b = amps[partner]
            amps[y] = cos_a * a - 1j * sin_a * phases[partner] * b
            amps[partner] = cos_a * b - 1j * sin_a * phases[y] * a


@njit(cache=True, inline="always")
def _parity(v):  # pragma: no cover - jit
    v ^= v >> 32
    v ^= v >> 16
    v ^= v >> 8
    v ^= v >> 4
    v ^= v >> 2
    v ^= v >> 1
    return v & 1


@njit(cache=True, fastmath=True)
def _pauli_exp_parity_jit(
    amps, flip, sign_mask, gsign, cos_a, sin_a
):  # pragma: no cover - jit
    """Even-Y fast path: the basis phase is gsign * (-1)^parity(x & mask),
    computed in-register instead of streaming a phase table."""
    if flip == 0:
        for y in range(amps.size):
            sy = gsign * (1.0 - 2.0 * _parity(y & sign_mask))
            amps[y] = amps[y] * (cos_a - 1j * sin_a * sy)
        return
    # Flipping the X/Y bits offsets the parity by a constant, and pairs
    # (y, y^flip) split at the highest flip bit, so iterate blocks of the
    # low half only.
    pair_factor = 1.0 - 2.0 * _parity(flip & sign_mask)
    half = 1
    f = flip
    while f > 1:
        f >>= 1
        half <<= 1
    m = -1j * sin_a
    for base in range(0, amps.size, half << 1):
        for y in range(base, base + half):
            partner = y ^ flip
            sy = gsign * (1.0 - 2.0 * _parity(y & sign_mask))
            a = amps[y]
            b = amps[partner]
            amps[y] = cos_a * a + m * (sy * pair_factor) * b
            amps[partner] = cos_a * b + m * sy * a


def apply_pauli_exp_kernel(
    amps: np.ndarray,
    flip: int,
    phases: np.ndarray,
    cos_a: float,
    sin_a: float,
    scratch: np.ndarray | None = None,
    masks: tuple[int, int, int] | None = None,
) -> None:
    """In-place ``amps <- cos*amps - i*sin*(P amps)``.

    ``masks = (flip, sign_mask, n_y)`` enables the parity fast path for
    strings with an even Y count; otherwise the phase table is used.
    """
    if USE_JIT:
        if masks is not None and masks[2] % 2 == 0:
            gsign = 1.0 if masks[2] % 4 == 0 else -1.0
            _pauli_exp_parity_jit(amps, masks[0], masks[1], gsign, cos_a, sin_a)
        else:
            _pauli_exp_jit(amps, flip, phases, cos_a, sin_a)
    else:
        pauli_exp_numpy(amps, flip, phases, cos_a, sin_a, scratch)


# ---------------------------------------------------------------------------
# Single-qubit gates on a contiguous statevector, qubit q = bit q
# ---------------------------------------------------------------------------

def single_qubit_numpy(amps: np.ndarray, qubit: int, matrix: np.ndarray) -> None:
    view = amps.reshape(-1, 2, 1 << qubit)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = matrix[0, 0] * a0 + matrix[0, 1] * a1
    view[:, 1, :] = matrix[1, 0] * a0 + matrix[1, 1] * a1


@njit(cache=True, fastmath=True)
def _single_qubit_jit(amps, qubit, m00, m01, m10, m11):  # pragma: no cover - jit
    stride = 1 << qubit
    block = stride << 1
    for base in range(0, amps.size, block):
        for offset in range(base, base + stride):
            a0 = amps[offset]
            a1 = amps[offset + stride]
            amps[offset] = m00 * a0 + m01 * a1
            amps[offset + stride] = m10 * a0 + m11 * a1


def apply_single_qubit_kernel(
    amps: np.ndarray, qubit: int, matrix: np.ndarray
) -> None:
    """In-place 2x2 gate application on one qubit."""
    if USE_JIT:
        _single_qubit_jit(
            amps,
            qubit,
            complex(matrix[0, 0]),
            complex(matrix[0, 1]),
            complex(matrix[1, 0]),
            complex(matrix[1, 1]),
        )
    else:
        single_qubit_numpy(amps, qubit, matrix)


def warmup() -> None:
    """Trigger JIT compilation outside timed sections."""
    amps = np.zeros(4, dtype=complex)
    amps[0] = 1.0
    phases = np.ones(4)
    apply_pauli_exp_kernel(amps, 3, phases, 1.0, 0.0)
    apply_pauli_exp_kernel(amps, 0, phases, 1.0, 0.0)
    eye = np.eye(2, dtype=complex)
    apply_single_qubit_kernel(amps, 0, eye)
