"""Command-line interface.

Subcommands::

    vqebench phase1|phase2|phase3 --config FILE --out DIR
             [--profile quick|paper] [--optimizers a,b,c] [--seed N]
             [--no-figures] [--quiet]
    vqebench spectrum --model FILE [--k N]
    vqebench validate

Exit codes: 0 success, 2 configuration error, 3 runtime failure.
Precedence for phase settings: built-in defaults, then profile, then the
config file, then explicit flags.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import bench
from .bench import ConfigError, OptimizerSetting
from .estimator import EXACT
from .models import (
    EXTENDED_MODEL_EIGENVALUES,
    HubbardSpec,
    exact_spectrum,
    hubbard_hamiltonian,
    ising_hamiltonian,
)
from .optim import OptimizerConfigError, UnsupportedAlgorithmError
from .validate import run_all_checks

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

log = logging.getLogger("vqebench")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vqebench",
        description="Shot-noise VQE optimizer benchmark",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for phase in (1, 2, 3):
        p = sub.add_parser(f"phase{phase}", help=f"run benchmark phase {phase}")
        p.add_argument("--config", type=Path, help="JSON config file")
        p.add_argument("--out", type=Path, help="output directory")
        p.add_argument(
            "--profile",
            choices=("quick", "paper"),
            default="paper",
            help="quick shrinks runs/budget for CI-scale execution",
        )
        p.add_argument(
            "--optimizers",
            help="comma-separated algorithm identifiers (overrides config)",
        )
        p.add_argument("--seed", type=int, help="override the base seed")
        p.add_argument(
            "--no-figures",
            action="store_true",
            help="skip rendering PNG figures next to the CSV output",
        )
        p.add_argument("--quiet", action="store_true", help="suppress progress")
        p.set_defaults(phase=phase)
    spectrum = sub.add_parser("spectrum", help="print exact eigenvalues")
    spectrum.add_argument("--model", type=Path, required=True, help="model JSON file")
    spectrum.add_argument("--k", type=int, default=10, help="eigenvalue count")
    sub.add_parser("validate", help="run the fast invariant suite")
    return parser


def _read_json(path: Path) -> dict:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc


def _phase_config(args) -> bench.PhaseConfig:
    cfg = bench.default_config(args.phase)
    cfg = bench.apply_profile(cfg, args.profile)
    if args.config is not None:
        cfg = bench.load_config(_read_json(args.config), args.phase, base=cfg)
    if args.optimizers:
        names = [n.strip() for n in args.optimizers.split(",") if n.strip()]
        if not names:
            raise ConfigError("--optimizers must name at least one algorithm")
        cfg = replace(cfg, optimizers=tuple(OptimizerSetting(n) for n in names))
    if args.seed is not None:
        cfg = replace(cfg, seed_base=args.seed)
    if args.out is not None:
        cfg = replace(cfg, output_dir=str(args.out))
    if cfg.output_dir is None:
        cfg = replace(cfg, output_dir=f"results/phase{args.phase}")
    return cfg


def _run_phase(args) -> int:
    cfg = _phase_config(args)
    out_dir = Path(cfg.output_dir)
    bench.write_hamiltonians(cfg, out_dir)
    if args.phase == 1:
        report = bench.run_phase1(cfg)
        files = bench.export_phase1(report, out_dir)
        for name in sorted(report.passed):
            log.info(
                "phase1 %s: %s (%d/%d runs hit the floor)",
                name,
                "PASS" if report.passed[name] else "FAIL",
                report.successes[name],
                cfg.runs_per_cell,
            )
        if not args.no_figures:
            from .plots import render_phase1

            files += render_phase1(report, out_dir)
    elif args.phase == 2:
        table = bench.run_phase2(cfg)
        files = bench.export_phase2(table, out_dir)
        if not args.no_figures:
            from .plots import render_phase2

            files += render_phase2(table, out_dir)
    else:
        data = bench.run_phase3(cfg)
        files = bench.export_phase3(data, out_dir)
        if not args.no_figures:
            from .plots import render_phase3

            files += render_phase3(data, out_dir)
    for path in files:
        log.info("wrote %s", path)
    return EXIT_OK


def _run_spectrum(args) -> int:
    payload = _read_json(args.model)
    known = {"model", "ising", "hubbard"}
    unknown = set(payload) - known
    if unknown:
        raise ConfigError(f"unknown model keys: {sorted(unknown)}")
    kind = payload.get("model")
    if kind == "ising":
        section = payload.get("ising", {})
        unknown = set(section) - {"n_qubits"}
        if unknown:
            raise ConfigError(f"unknown ising keys: {sorted(unknown)}")
        n_qubits = int(section.get("n_qubits", 5))
        ham = ising_hamiltonian(n_qubits)
        spectrum = exact_spectrum(ham, args.k)
        print(f"# ising chain, {n_qubits} qubits, lowest {args.k} eigenvalues")
        for value in spectrum.eigenvalues:
            print(f"{value:+.10f}")
        return EXIT_OK
    if kind == "hubbard":
        section = payload.get("hubbard", {})
        unknown = set(section) - {"sites", "t", "U", "periodic"}
        if unknown:
            raise ConfigError(f"unknown hubbard keys: {sorted(unknown)}")
        spec = HubbardSpec(
            sites=int(section.get("sites", 6)),
            t=float(section.get("t", 1.0)),
            U=float(section.get("U", 1.0)),
            periodic=bool(section.get("periodic", True)),
        )
        ham = hubbard_hamiltonian(spec)
        spectrum = exact_spectrum(ham, args.k)
        print(
            f"# hubbard chain, {spec.sites} sites (t={spec.t}, U={spec.U}, "
            f"periodic={spec.periodic}), lowest {args.k} eigenvalues"
        )
        print("# textbook model vs. quoted extended-model values "
              "(extension undefined; agreement not expected)")
        reference = EXTENDED_MODEL_EIGENVALUES
        for idx, value in enumerate(spectrum.eigenvalues):
            ref = f"{reference[idx]:+.1f}" if idx < len(reference) else "n/a"
            print(f"{value:+.10f}  {ref}")
        return EXIT_OK
    raise ConfigError("model file must set model to 'ising' or 'hubbard'")


def _run_validate() -> int:
    results = run_all_checks()
    failed = 0
    for name, ok, detail in results:
        status = "PASS" if ok else "FAIL"
        print(f"{status:4s} {name}: {detail}")
        failed += 0 if ok else 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_RUNTIME


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    level = logging.WARNING if getattr(args, "quiet", False) else logging.INFO
    logging.basicConfig(level=level, format="%(message)s")
    try:
        if args.command == "validate":
            return _run_validate()
        if args.command == "spectrum":
            return _run_spectrum(args)
        return _run_phase(args)
    except (ConfigError, OptimizerConfigError, UnsupportedAlgorithmError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
