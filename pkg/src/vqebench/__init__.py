"""Shot-noise VQE benchmarking toolkit.

Simulates Ising and Hubbard cost functions with sampled measurement
noise and drives a suite of derivative-free optimizers through a
three-phase benchmark protocol, emitting function-evaluation tables,
convergence curves, and rendered figures.
"""

from .pauli import (
    PauliString,
    PauliSum,
    PauliTerm,
    compose,
    dense_matrix,
    qubitwise_commuting_groups,
    simplify,
)
from .simulator import (
    Circuit,
    Gate,
    Statevector,
    build_hubbard_hva,
    build_ising_ansatz,
    dump_circuit,
    gate_unitary,
    run_circuit,
)
from .models import (
    EXTENDED_MODEL_EIGENVALUES,
    HubbardSpec,
    Spectrum,
    exact_spectrum,
    ground_energy,
    hubbard_hamiltonian,
    ising_hamiltonian,
    jw_hopping_term,
)
from .estimator import (
    EXACT,
    EnergyObjective,
    ShotConfig,
    exact_expectation,
    sampled_expectation,
)

__version__ = "0.1.0"

__all__ = [
    "PauliString",
    "PauliSum",
    "PauliTerm",
    "compose",
    "simplify",
    "qubitwise_commuting_groups",
    "dense_matrix",
    "Gate",
    "Circuit",
    "Statevector",
    "run_circuit",
    "gate_unitary",
    "build_ising_ansatz",
    "build_hubbard_hva",
    "dump_circuit",
    "HubbardSpec",
    "Spectrum",
    "ising_hamiltonian",
    "jw_hopping_term",
    "hubbard_hamiltonian",
    "exact_spectrum",
    "ground_energy",
    "EXTENDED_MODEL_EIGENVALUES",
    "EXACT",
    "ShotConfig",
    "EnergyObjective",
    "exact_expectation",
    "sampled_expectation",
    "__version__",
]
