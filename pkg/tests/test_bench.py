import json
import math
from dataclasses import replace

import numpy as np
import pytest

from vqebench.bench import (
    ConfigError,
    OptimizerSetting,
    PhaseConfig,
    apply_profile,
    build_model,
    checkpoint_grid,
    default_config,
    export_phase1,
    export_phase2,
    export_phase3,
    load_config,
    run_phase1,
    run_phase2,
    run_phase3,
    stable_seed,
    success_check,
    write_runs_jsonl,
    Phase2Table,
    Phase3Dataset,
)
from vqebench.estimator import EXACT, EnergyObjective, ShotConfig
from vqebench.models import HubbardSpec
from vqebench.optim import OptimizerConfigError
from vqebench.optim.base import Algorithm, register, _REGISTRY


@pytest.fixture(scope="module")
def ising3():
    return build_model("ising", n_qubits=3)


@pytest.fixture(scope="module")
def ising5():
    return build_model("ising", n_qubits=5)


@pytest.fixture
def stub_optimizer():
    """A deliberately immobile optimizer, registered for one test."""

    def drive(run, rng, lo, hi, params):
        x = rng.uniform(lo, hi)
        while True:
            run.eval(x)

    register(Algorithm("stub_fixed", drive, lambda dim: {}, lambda p, d: 1))
    yield "stub_fixed"
    _REGISTRY.pop("stub_fixed", None)


def tiny_phase1_config(optimizers, **kw):
    defaults = dict(
        phase=1,
        optimizers=tuple(OptimizerSetting(o) for o in optimizers),
        runs_per_cell=2,
        tolerance=0.1,
        shots=64,
        seed_base=5,
        budget=800,
        qubits=(3,),
    )
    defaults.update(kw)
    return PhaseConfig(**defaults)


class TestSuccessCheck:
    def params_with_bond_expectation(self, model, cos_target):
        # Rotate the last-layer RY of qubit 0 so that the first chain bond
        # contributes -cos(alpha) while the rest stay at -1.
        n = model.circuit.n_qubits // 1
        theta = np.zeros(model.n_params)
        qubits = model.hamiltonian.n_qubits
        theta[:qubits] = -math.pi / 4  # undo the fixed initial layer
        theta[2 * qubits] = math.acos(cos_target)
        return theta

    def test_boundary_is_inclusive(self, ising5):
        # Exact ground state: an empty circuit leaves |00000> bit-exactly,
        # so the energy is -4.0 with no rounding and tol=0 must pass.
        from vqebench.bench import ModelInstance
        from vqebench.simulator import Circuit

        basis_model = ModelInstance(
            "ising5-basis", Circuit(5, (), 0), ising5.hamiltonian, ising5.ground
        )
        assert success_check(np.zeros(0), basis_model, tolerance=0.0)

    def test_near_miss_and_hit(self, ising5):
        close = self.params_with_bond_expectation(ising5, 0.95)  # energy -3.95
        far = self.params_with_bond_expectation(ising5, 0.85)  # energy -3.85
        assert success_check(close, ising5, tolerance=0.1)
        assert not success_check(far, ising5, tolerance=0.1)

    def test_uses_exactly_one_exact_evaluation(self, ising5):
        objective = EnergyObjective(
            ising5.circuit, ising5.hamiltonian, ShotConfig(64, seed=1)
        )
        theta = self.params_with_bond_expectation(ising5, 0.95)
        before_fe = objective.fe_count
        success_check(theta, ising5, 0.1, objective=objective)
        assert objective.exact_eval_count == 1
        assert objective.fe_count == before_fe


class TestSeedScheme:
    def test_stable_and_distinct(self):
        a = stable_seed(0, "cmaes", "ising5", 0)
        assert a == stable_seed(0, "cmaes", "ising5", 0)
        others = {
            stable_seed(0, "cmaes", "ising5", 1),
            stable_seed(0, "pso", "ising5", 0),
            stable_seed(1, "cmaes", "ising5", 0),
            stable_seed(0, "cmaes", "ising3", 0),
        }
        assert a not in others
        assert 0 <= a < 2**64

    def test_rerunning_a_cell_reproduces_records(self, tmp_path):
        cfg = tiny_phase1_config(["sa_cauchy"])
        first = run_phase1(cfg)
        second = run_phase1(cfg)
        strip = lambda r: replace(r, wall_time=0.0)
        assert [strip(r) for r in first.records] == [
            strip(r) for r in second.records
        ]
        dir_a, dir_b = tmp_path / "a", tmp_path / "b"
        export_phase1(first, dir_a)
        export_phase1(second, dir_b)
        assert (dir_a / "runs.jsonl").read_bytes() == (
            dir_b / "runs.jsonl"
        ).read_bytes()
        assert (dir_a / "summary.csv").read_bytes() == (
            dir_b / "summary.csv"
        ).read_bytes()


class TestPhase1:
    def test_stub_never_passes_and_real_optimizer_does(self, stub_optimizer):
        cfg = tiny_phase1_config(["cmaes", stub_optimizer], budget=3000)
        report = run_phase1(cfg)
        assert report.passed["cmaes"]
        assert not report.passed[stub_optimizer]

    def test_pass_equals_or_of_success_checks(self, stub_optimizer, ising3):
        cfg = tiny_phase1_config([stub_optimizer])
        report = run_phase1(cfg)
        for name, flag in report.passed.items():
            cell = [r for r in report.records if r.optimizer == name]
            recomputed = any(
                r.fe_to_target is not None
                or r.best_exact_energy <= ising3.ground + cfg.tolerance
                for r in cell
            )
            assert flag == recomputed

    def test_bad_config_fails_before_any_run(self):
        with pytest.raises(ConfigError):
            tiny_phase1_config(["cmaes"], runs_per_cell=0)
        with pytest.raises(ConfigError):
            tiny_phase1_config(["cmaes"], tolerance=-1.0)

    def test_budget_smaller_than_population_is_config_error(self):
        cfg = tiny_phase1_config(["sos"], budget=10)  # sos pop is 50
        with pytest.raises(OptimizerConfigError):
            run_phase1(cfg)


class TestPhase2:
    def test_cell_mean_recomputable_from_records(self):
        cfg = PhaseConfig(
            phase=2,
            optimizers=(OptimizerSetting("cmaes"),),
            runs_per_cell=2,
            tolerance=0.1,
            shots=64,
            seed_base=3,
            budget=4000,
            qubits=(3,),
        )
        table = run_phase2(cfg)
        cell = table.cells[("cmaes", 3)]
        fes = [r.fe_to_target for r in table.records]
        if all(f is not None for f in fes):
            assert cell == pytest.approx(float(np.mean(fes)))
        else:
            assert cell is None

    def test_any_failed_run_yields_missing_cell(self, stub_optimizer):
        cfg = PhaseConfig(
            phase=2,
            optimizers=(OptimizerSetting(stub_optimizer),),
            runs_per_cell=2,
            tolerance=0.1,
            shots=64,
            seed_base=3,
            budget=500,
            qubits=(3,),
        )
        table = run_phase2(cfg)
        assert table.cells[(stub_optimizer, 3)] is None

    def test_summary_recomputable_from_jsonl(self, tmp_path):
        cfg = PhaseConfig(
            phase=2,
            optimizers=(OptimizerSetting("cmaes"), OptimizerSetting("hs")),
            runs_per_cell=2,
            tolerance=0.1,
            shots=64,
            seed_base=8,
            budget=3000,
            qubits=(3,),
        )
        table = run_phase2(cfg)
        export_phase2(table, tmp_path)
        payloads = [
            json.loads(line)
            for line in (tmp_path / "runs.jsonl").read_text().splitlines()
        ]
        summary_lines = (tmp_path / "summary.csv").read_text().splitlines()
        header = summary_lines[0].split(",")
        for row in summary_lines[1:]:
            cells = row.split(",")
            name = cells[0]
            for col, cell in zip(header[1:], cells[1:]):
                qubits = int(col[:-1])
                fes = [
                    p["fe_to_target"]
                    for p in payloads
                    if p["optimizer"] == name and p["model"] == f"ising{qubits}"
                ]
                if any(f is None for f in fes):
                    assert cell == "---"
                else:
                    assert cell == f"{float(np.mean(fes)):.1f}"

    def test_export_renders_missing_as_dashes(self, tmp_path):
        cfg = default_config(2)
        table = Phase2Table(
            cfg,
            [],
            {("alpha", 3): 120.0, ("alpha", 4): None, ("beta", 3): 80.5, ("beta", 4): 90.0},
        )
        export_phase2(table, tmp_path)
        text = (tmp_path / "summary.csv").read_text()
        assert text.splitlines()[0] == "optimizer,3Q,4Q"
        assert "alpha,120.0,---" in text
        assert "beta,80.5,90.0" in text


class TestPhase3:
    def test_checkpoint_grid_doubles_then_caps(self):
        grid = checkpoint_grid(100_000)
        assert grid[:5] == (1, 2, 4, 8, 16)
        assert grid[-2:] == (65536, 100_000)
        assert checkpoint_grid(8) == (1, 2, 4, 8)

    def test_curves_recomputable_from_traces(self):
        cfg = PhaseConfig(
            phase=3,
            optimizers=(OptimizerSetting("hs"),),
            runs_per_cell=2,
            seed_base=1,
            budget=300,
            shots_list=(64,),
            hubbard=HubbardSpec(sites=2),
            layers=1,
        )
        data = run_phase3(cfg)
        key = ("hs", 64)
        for c_idx, checkpoint in enumerate(data.checkpoints):
            per_run = [r.best_at(checkpoint) for r in data.records]
            assert data.mean_curves[key][c_idx] == pytest.approx(
                float(np.mean(per_run))
            )
            assert data.run_curves[key][c_idx] == per_run

    def test_budget_respected_on_traces(self):
        cfg = PhaseConfig(
            phase=3,
            optimizers=(OptimizerSetting("pso"),),
            runs_per_cell=1,
            seed_base=2,
            budget=120,
            shots_list=(64,),
            hubbard=HubbardSpec(sites=2),
            layers=1,
        )
        data = run_phase3(cfg)
        for record in data.records:
            assert record.fe_used <= cfg.budget
            assert all(fe <= cfg.budget for fe, _ in record.trace)


class TestExport:
    def test_empty_records_give_headers_only(self, tmp_path):
        write_runs_jsonl([], tmp_path)
        assert (tmp_path / "runs.jsonl").read_text() == ""
        cfg = default_config(3)
        data = Phase3Dataset(cfg, [], checkpoint_grid(8), {}, {})
        export_phase3(data, tmp_path)
        curves = (tmp_path / "curves.csv").read_text().splitlines()
        assert curves == [
            "optimizer,shots,fe_checkpoint,mean_best,"
            + ",".join(f"run{i}" for i in range(cfg.runs_per_cell))
        ]
        summary = (tmp_path / "summary.csv").read_text().splitlines()
        assert summary == ["optimizer,shots,final_mean_best,mean_best_exact_energy"]

    def test_reexport_is_byte_identical(self, tmp_path):
        cfg = tiny_phase1_config(["hs"])
        report = run_phase1(cfg)
        dir_a, dir_b = tmp_path / "x", tmp_path / "y"
        export_phase1(report, dir_a)
        export_phase1(report, dir_b)
        for name in ("runs.jsonl", "summary.csv"):
            assert (dir_a / name).read_bytes() == (dir_b / name).read_bytes()

    def test_jsonl_is_sorted_and_parseable(self, tmp_path):
        cfg = tiny_phase1_config(["hs", "cmaes"])
        report = run_phase1(cfg)
        write_runs_jsonl(report.records, tmp_path)
        lines = (tmp_path / "runs.jsonl").read_text().splitlines()
        payloads = [json.loads(line) for line in lines]
        keys = [(p["model"], str(p["shots"]), p["optimizer"], p["run"]) for p in payloads]
        assert keys == sorted(keys)
        assert all("wall_time" not in p for p in payloads)
        for p in payloads:
            assert p["fe_used"] <= cfg.budget


class TestHamiltonianSerialization:
    def test_phase_configs_serialize_their_models(self, tmp_path):
        from vqebench.bench import write_hamiltonians
        from vqebench.pauli import parse_pauli_sum, simplify
        from vqebench.models import ising_hamiltonian

        cfg = tiny_phase1_config(["hs"])
        (path,) = write_hamiltonians(cfg, tmp_path)
        assert path.name == "hamiltonian_ising3.txt"
        entries = path.read_text().splitlines()
        assert entries == ["-1.0*ZZI", "-1.0*IZZ"]
        back = simplify(parse_pauli_sum(entries))
        assert back.terms == ising_hamiltonian(3).terms

    def test_phase3_serializes_hubbard(self, tmp_path):
        from vqebench.bench import write_hamiltonians

        cfg = PhaseConfig(
            phase=3,
            optimizers=(OptimizerSetting("pso"),),
            runs_per_cell=1,
            budget=100,
            hubbard=HubbardSpec(sites=2, periodic=False),
            layers=1,
            shots_list=(64,),
        )
        (path,) = write_hamiltonians(cfg, tmp_path)
        text = path.read_text()
        assert "0.5*IIII" in text  # identity carries 2*U/4
        assert "-0.5*IIXX" in text


class TestConfigFiles:
    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigError):
            load_config({"optimisers": ["cmaes"]}, 1)
        with pytest.raises(ConfigError):
            load_config({"hubbard": {"sites": 6, "frobnicate": 1}}, 3)
        with pytest.raises(ConfigError):
            load_config({"ising": {"qubits": 5}}, 1)

    def test_phase_mismatch_rejected(self):
        with pytest.raises(ConfigError):
            load_config({"phase": 2}, 1)

    def test_model_keys(self):
        cfg = load_config(
            {"model": "ising", "ising": {"n_qubits": 7}, "shots": "exact"}, 1
        )
        assert cfg.qubits == (7,)
        assert cfg.shots == EXACT
        cfg3 = load_config(
            {
                "model": "hubbard",
                "hubbard": {"sites": 4, "t": 0.5, "U": 2.0, "periodic": False},
                "shots_list": [64],
            },
            3,
        )
        assert cfg3.hubbard == HubbardSpec(sites=4, t=0.5, U=2.0, periodic=False)
        assert cfg3.shots_list == (64,)

    def test_optimizer_entries_with_overrides(self):
        cfg = load_config(
            {
                "optimizers": [
                    "cmaes",
                    {"algorithm": "pso", "hyperparams": {"inertia": 0.6}},
                ]
            },
            1,
        )
        assert cfg.optimizers[1].hyperparams == {"inertia": 0.6}
        with pytest.raises(ConfigError):
            load_config({"optimizers": [{"hyperparams": {}}]}, 1)
        with pytest.raises(ConfigError):
            load_config({"optimizers": []}, 1)

    def test_bad_scalar_types(self):
        with pytest.raises(ConfigError):
            load_config({"budget": "lots"}, 1)
        with pytest.raises(ConfigError):
            load_config({"shots": 12.5}, 1)
        with pytest.raises(ConfigError):
            load_config({"stagnation": "yes"}, 1)

    def test_profiles(self):
        quick = apply_profile(default_config(2), "quick")
        assert quick.runs_per_cell == 3
        assert quick.budget == 30_000
        assert quick.qubits == (3, 4, 5, 6)
        paper = apply_profile(default_config(2), "paper")
        assert paper.qubits == (3, 4, 5, 6, 7, 8, 9)
        with pytest.raises(ConfigError):
            apply_profile(default_config(1), "fast")
