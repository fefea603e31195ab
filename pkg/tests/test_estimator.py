import math

import numpy as np
import pytest

from vqebench.estimator import (
    EXACT,
    EnergyObjective,
    ShotConfig,
    exact_expectation,
    sampled_expectation,
)
from vqebench.models import ising_hamiltonian
from vqebench.pauli import PauliSum
from vqebench.simulator import (
    Circuit,
    Gate,
    Statevector,
    build_ising_ansatz,
    run_circuit,
)

from conftest import dense_sum, random_pauli_string


def random_state(rng, n):
    amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    return Statevector(amps / np.linalg.norm(amps))


def plus_state(n):
    return Statevector(np.full(1 << n, 1 / math.sqrt(1 << n), dtype=complex))


class TestShotConfig:
    def test_exact_sentinel(self):
        assert ShotConfig(EXACT).is_exact
        assert not ShotConfig(64).is_exact

    def test_bounds(self):
        with pytest.raises(ValueError):
            ShotConfig(0)
        with pytest.raises(ValueError):
            ShotConfig(10**9 + 1)
        with pytest.raises(ValueError):
            ShotConfig(1.5)
        with pytest.raises(ValueError):
            ShotConfig(64, seed=-1)


class TestExactExpectation:
    def test_z_on_zero_state(self):
        state = Statevector.zero_state(1)
        assert exact_expectation(state, PauliSum.from_labels([(1.0, "Z")])) == 1.0

    def test_plus_states_zero_out_zz(self):
        # each ZZ term has zero expectation in X eigenstates
        value = exact_expectation(plus_state(5), ising_hamiltonian(5))
        assert value == pytest.approx(0.0, abs=1e-12)

    def test_random_sum_matches_dense_oracle(self, rng):
        state = random_state(rng, 6)
        pairs = [
            (float(rng.standard_normal()), random_pauli_string(rng, 6).to_label())
            for _ in range(8)
        ]
        h = PauliSum.from_labels(pairs)
        dense = dense_sum(pairs, 6)
        expected = float(np.real(state.amplitudes.conj() @ dense @ state.amplitudes))
        assert exact_expectation(state, h) == pytest.approx(expected, abs=1e-9)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            exact_expectation(
                Statevector.zero_state(2), PauliSum.from_labels([(1.0, "Z")])
            )


class TestSampledExpectation:
    def test_point_mass_is_exact(self):
        state = Statevector.zero_state(1)
        h = PauliSum.from_labels([(1.0, "Z")])
        for shots in (1, 64, 5120):
            assert sampled_expectation(state, h, ShotConfig(shots, seed=7)) == 1.0

    def test_diagonal_hamiltonian_on_basis_state(self):
        state = Statevector.zero_state(5)
        value = sampled_expectation(
            state, ising_hamiltonian(5), ShotConfig(64, seed=3)
        )
        assert value == -4.0

    def test_plus_state_mean_within_binomial_error(self):
        # <Z> on |+> estimated from 64 shots x 1000 seeds; the mean must
        # sit within 3 binomial standard errors of zero.
        state = plus_state(1)
        h = PauliSum.from_labels([(1.0, "Z")])
        values = [
            sampled_expectation(state, h, ShotConfig(64, seed=s))
            for s in range(1000)
        ]
        standard_error = 1.0 / math.sqrt(64 * 1000)
        assert abs(np.mean(values)) <= 3 * standard_error

    def test_identity_contributes_exactly(self):
        state = random_state(np.random.default_rng(0), 3)
        h = PauliSum.from_labels([(2.5, "III"), (1.0, "ZZZ")])
        value = sampled_expectation(state, h, ShotConfig(4, seed=1))
        possible = {2.5 + (k - (4 - k)) / 4 for k in range(5)}
        # estimate = 2.5 exactly plus a 4-shot average of +-1 outcomes
        assert any(value == pytest.approx(p, abs=1e-12) for p in possible)

    def test_exact_sentinel_bit_equality(self, rng):
        state = random_state(rng, 4)
        pairs = [
            (float(rng.standard_normal()), random_pauli_string(rng, 4).to_label())
            for _ in range(5)
        ]
        h = PauliSum.from_labels(pairs)
        assert sampled_expectation(state, h, ShotConfig(EXACT)) == exact_expectation(
            state, h
        )

    def test_seeded_reproducibility(self, rng):
        state = random_state(rng, 4)
        h = ising_hamiltonian(4)
        a = sampled_expectation(state, h, ShotConfig(64, seed=11))
        b = sampled_expectation(state, h, ShotConfig(64, seed=11))
        c = sampled_expectation(state, h, ShotConfig(64, seed=12))
        assert a == b
        assert a != c


class TestEnergyObjective:
    def build(self, shots, seed=0, n=3):
        return EnergyObjective(
            build_ising_ansatz(n), ising_hamiltonian(n), ShotConfig(shots, seed)
        )

    def test_exact_energy_of_initial_layer(self):
        # theta = 0 leaves only the fixed pi/4 layer: <ZZ> = cos^2(pi/4)
        # per bond, so 3 qubits give -(0.5 + 0.5) = -1.0.
        objective = self.build(EXACT)
        assert objective.evaluate(np.zeros(12)) == pytest.approx(-1.0, abs=1e-12)

    def test_fe_count_increments_once_per_call(self):
        objective = self.build(64)
        for _ in range(100):
            objective.evaluate(np.zeros(12))
        assert objective.fe_count == 100

    def test_sequential_calls_advance_the_stream(self):
        objective = self.build(64, seed=5)
        theta = np.full(12, 0.3)
        first = objective.evaluate(theta)
        second = objective.evaluate(theta)
        assert first != second  # substream is keyed by evaluation index

    def test_identical_objectives_reproduce_sequences(self):
        theta = np.linspace(-1, 1, 12)
        obj_a = self.build(64, seed=9)
        obj_b = self.build(64, seed=9)
        seq_a = [obj_a.evaluate(theta + 0.01 * i) for i in range(20)]
        seq_b = [obj_b.evaluate(theta + 0.01 * i) for i in range(20)]
        assert seq_a == seq_b

    def test_exact_mode_matches_exact_expectation_bitwise(self):
        objective = self.build(EXACT)
        theta = np.linspace(-2, 2, 12)
        value = objective.evaluate(theta)
        state = run_circuit(objective.circuit, theta)
        assert value == exact_expectation(state, objective.hamiltonian)

    def test_exact_energy_side_channel_not_counted(self):
        objective = self.build(64)
        objective.evaluate(np.zeros(12))
        objective.exact_energy(np.zeros(12))
        assert objective.fe_count == 1
        assert objective.exact_eval_count == 1

    def test_stderr_tracks_shot_noise(self):
        objective = self.build(64, seed=2)
        objective.evaluate(np.full(12, 0.4))
        noisy = objective.last_stderr
        assert noisy > 0
        exact_obj = self.build(EXACT)
        exact_obj.evaluate(np.full(12, 0.4))
        assert exact_obj.last_stderr == 0.0

    def test_qubit_mismatch_rejected(self):
        with pytest.raises(ValueError):
            EnergyObjective(
                build_ising_ansatz(3), ising_hamiltonian(4), ShotConfig(64)
            )


class TestStatistics:
    """Light versions of the acceptance statistics for fast feedback."""

    def setup_method(self):
        rng = np.random.default_rng(21)
        self.state = random_state(rng, 5)
        self.h = ising_hamiltonian(5)
        self.exact = exact_expectation(self.state, self.h)

    def test_unbiased_within_three_standard_errors(self):
        values = np.array(
            [
                sampled_expectation(self.state, self.h, ShotConfig(64, seed=s))
                for s in range(400)
            ]
        )
        stderr = values.std(ddof=1) / math.sqrt(values.size)
        assert abs(values.mean() - self.exact) <= 3 * stderr

    def test_variance_scales_inversely_with_shots(self):
        lo = np.array(
            [
                sampled_expectation(self.state, self.h, ShotConfig(64, seed=s))
                for s in range(400)
            ]
        )
        hi = np.array(
            [
                sampled_expectation(self.state, self.h, ShotConfig(5120, seed=s))
                for s in range(400)
            ]
        )
        ratio = lo.var(ddof=1) / hi.var(ddof=1)
        assert 40 <= ratio <= 160  # loose band for the 400-seed version
