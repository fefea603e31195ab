"""Fast invariant suite behind ``vqebench validate``.

Each check is a small self-contained property probe (algebra identities,
Hermiticity, norm preservation, estimator sanity, determinism).  The
suite is a smoke screen for installations, not a replacement for the
full test suite.
"""

from __future__ import annotations

import numpy as np

from .estimator import EXACT, EnergyObjective, ShotConfig, exact_expectation, sampled_expectation
from .models import exact_spectrum, hubbard_hamiltonian, HubbardSpec, ising_hamiltonian
from .optim import OptimizerSpec, minimize
from .pauli import (
    PauliString,
    PauliSum,
    compose,
    dense_matrix,
    qubitwise_commuting_groups,
)
from .simulator import Statevector, build_ising_ansatz, run_circuit

__all__ = ["run_all_checks"]

_LABELS = "IXYZ"


def _random_string(rng, n):
    return PauliString(tuple(rng.choice(list(_LABELS)) for _ in range(n)))


def _check_compose_associative():
    rng = np.random.default_rng(7)
    for _ in range(50):
        n = int(rng.integers(1, 7))
        a, b, c = (_random_string(rng, n) for _ in range(3))
        p1, ab = compose(a, b)
        p2, ab_c = compose(ab, c)
        q1, bc = compose(b, c)
        q2, a_bc = compose(a, bc)
        if ab_c != a_bc or abs(p1 * p2 - q1 * q2) > 1e-12:
            return False, f"associativity broke on {a}, {b}, {c}"
    return True, "50 random triples associative"


def _check_hermitian():
    for ham in (ising_hamiltonian(5), hubbard_hamiltonian(HubbardSpec(sites=3))):
        m = dense_matrix(ham)
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            return False, "dense matrix is not Hermitian"
    return True, "Ising and Hubbard matrices Hermitian"


def _check_grouping_partition():
    ham = hubbard_hamiltonian(HubbardSpec(sites=3))
    groups = qubitwise_commuting_groups(ham)
    regrouped = sorted(t.string.labels for g in groups for t in g.terms)
    original = sorted(t.string.labels for t in ham.terms)
    ok = regrouped == original
    return ok, f"{len(groups)} groups cover {ham.n_terms} terms"


def _check_norm_preservation():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = int(rng.integers(2, 7))
        circuit = build_ising_ansatz(n)
        theta = rng.uniform(-np.pi, np.pi, circuit.n_params)
        state = run_circuit(circuit, theta)
        if abs(state.norm() - 1.0) > 1e-10:
            return False, f"norm drifted on {n} qubits"
    return True, "20 random circuits norm-preserving"


def _check_exact_vs_dense():
    rng = np.random.default_rng(13)
    n = 4
    amps = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    amps /= np.linalg.norm(amps)
    state = Statevector(amps)
    terms = [(rng.standard_normal(), _random_string(rng, n)) for _ in range(6)]
    ham = PauliSum.from_terms(terms, n)
    direct = exact_expectation(state, ham)
    dense = float(np.real(amps.conj() @ dense_matrix(ham) @ amps))
    ok = abs(direct - dense) < 1e-9
    return ok, f"direct {direct:.6f} vs dense {dense:.6f}"


def _check_point_mass_sampling():
    state = Statevector.zero_state(1)
    z = PauliSum.from_labels([(1.0, "Z")])
    value = sampled_expectation(state, z, ShotConfig(64, seed=5))
    return value == 1.0, f"<Z> on |0> sampled as {value}"


def _check_fe_accounting():
    objective = EnergyObjective(
        build_ising_ansatz(3), ising_hamiltonian(3), ShotConfig(64, seed=3)
    )
    for _ in range(10):
        objective.evaluate(np.zeros(objective.n_params))
    return objective.fe_count == 10, f"fe_count={objective.fe_count}"


def _check_ising_ground():
    for n in range(2, 8):
        spectrum = exact_spectrum(ising_hamiltonian(n), 3)
        if spectrum.ground != -(n - 1):
            return False, f"ground at {n} qubits is {spectrum.ground}"
        if spectrum.eigenvalues[1] != spectrum.ground:
            return False, f"ground not doubly degenerate at {n} qubits"
    return True, "grounds -(n-1), degeneracy 2 for n=2..7"


def _check_variational_floor():
    rng = np.random.default_rng(17)
    ham = ising_hamiltonian(3)
    floor = exact_spectrum(ham, 1).ground
    circuit = build_ising_ansatz(3)
    for _ in range(100):
        theta = rng.uniform(-2 * np.pi, 2 * np.pi, circuit.n_params)
        energy = exact_expectation(run_circuit(circuit, theta), ham)
        if energy < floor - 1e-9:
            return False, f"energy {energy} undercuts floor {floor}"
    return True, "100 random parameter draws stay above the floor"


def _check_seed_determinism():
    def sphere(x):
        return float(np.sum(x * x))

    spec = OptimizerSpec(
        algorithm="cmaes",
        bounds=tuple((-5.0, 5.0) for _ in range(4)),
        budget=400,
        seed=23,
    )
    a = minimize(spec, sphere)
    b = minimize(spec, sphere)
    ok = a.trace.points == b.trace.points
    return ok, f"{len(a.trace.points)} trace points reproduced"


CHECKS = [
    ("compose-associativity", _check_compose_associative),
    ("hamiltonian-hermiticity", _check_hermitian),
    ("grouping-partition", _check_grouping_partition),
    ("norm-preservation", _check_norm_preservation),
    ("exact-vs-dense-expectation", _check_exact_vs_dense),
    ("point-mass-sampling", _check_point_mass_sampling),
    ("fe-accounting", _check_fe_accounting),
    ("ising-ground-energies", _check_ising_ground),
    ("variational-floor", _check_variational_floor),
    ("seed-determinism", _check_seed_determinism),
]


def run_all_checks() -> list[tuple[str, bool, str]]:
    results = []
    for name, check in CHECKS:
        try:
            ok, detail = check()
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append((name, ok, detail))
    return results
