"""Figure rendering for benchmark reports.

Every phase export can drop PNG figures next to the delimited output:
per-run outcome markers for the screening phase, the evaluations-versus-
qubits comparison for the sweep phase, and mean convergence curves per
shot setting for the Hubbard phase.  Figures are presentation artifacts;
the CSV/JSONL files remain the canonical, byte-stable outputs.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .bench import Phase1Report, Phase2Table, Phase3Dataset

__all__ = ["render_phase1", "render_phase2", "render_phase3"]

_SAVE_KW = {"dpi": 130, "bbox_inches": "tight", "metadata": {"Software": None}}


def render_phase1(report: Phase1Report, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    names = sorted(report.passed)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for i, name in enumerate(names):
        cell = [r for r in report.records if r.optimizer == name]
        energies = [r.best_exact_energy for r in cell]
        color = "tab:green" if report.passed[name] else "tab:red"
        ax.scatter([i] * len(energies), energies, color=color, s=28, zorder=3)
    model = report.records[0].model_id if report.records else "model"
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=45, ha="right")
    ax.set_ylabel("best exact energy per run")
    ax.set_title(f"Screening on {model} (green = passed)")
    ax.grid(True, alpha=0.3)
    path = out / "phase1_screening.png"
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
    return [path]


def render_phase2(table: Phase2Table, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    qubits = sorted({q for (_, q) in table.cells})
    names = sorted({name for (name, _) in table.cells})
    fig, ax = plt.subplots(figsize=(8, 5))
    for name in names:
        xs = [q for q in qubits if table.cells.get((name, q)) is not None]
        ys = [table.cells[(name, q)] for q in xs]
        if xs:
            ax.plot(xs, ys, marker="o", label=name)
    ax.set_yscale("log")
    ax.set_xlabel("qubits")
    ax.set_ylabel("mean evaluations to target")
    ax.set_title("Evaluations to reach the ground energy (tolerance band)")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    path = out / "phase2_evaluations.png"
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
    return [path]


def render_phase3(data: Phase3Dataset, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    paths = []
    shots_values = sorted({shots for (_, shots) in data.mean_curves})
    for shots in shots_values:
        fig, ax = plt.subplots(figsize=(8, 5))
        for (name, s), curve in sorted(data.mean_curves.items()):
            if s != shots:
                continue
            ax.plot(data.checkpoints, curve, marker=".", label=name)
        ax.set_xscale("log")
        ax.set_xlabel("function evaluations")
        ax.set_ylabel("mean best energy")
        ax.set_title(f"Hubbard convergence, {shots} shots")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize=8)
        path = out / f"phase3_convergence_{shots}.png"
        fig.savefig(path, **_SAVE_KW)
        plt.close(fig)
        paths.append(path)
    return paths
