"""
SVG figures rendered from the metrics directory.

Kinds:
    anytime   - mean hypervolume against evaluations, one line per variant
    eaf_diff  - signed EAF difference with the grand best/worst surfaces, in raw
                objective units when the normalization frame is stored
    ci        - confidence intervals of the median paired HV difference

Plots only read metric files, never run files, and are written to
<root>/plots/<kind>/. SVG output is deterministic (fixed hash salt, no
date metadata).
"""

from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from core.exceptions import AnalysisError, ConfigurationError  # noqa: E402
from logging_config import get_logger  # noqa: E402
from models.indicators import NormalizationFrame  # noqa: E402
from modules.eaf import read_eaf_csv  # noqa: E402
from services.experiment_service import ExperimentService  # noqa: E402
from services.results_store import ResultsStore  # noqa: E402

logger = get_logger(__name__)

PLOT_KINDS = ("anytime", "eaf_diff", "ci")

plt.rcParams["svg.hashsalt"] = "moead_ps"


def _save(fig: plt.Figure, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None}, bbox_inches="tight")
    plt.close(fig)
    return path


def _plot_anytime(store: ResultsStore) -> List[Path]:
    service = ExperimentService(store)
    manifest = service.analysis_manifest()
    trajectories = service.load_trajectories(manifest)
    written = []
    for problem in manifest.problems:
        fig, ax = plt.subplots(figsize=(6, 4))
        for label in manifest.labels:
            series = trajectories[(problem, label)]
            grid = np.unique(np.concatenate([t.evals for t in series]))
            grid = grid[grid >= max(int(t.evals[0]) for t in series)]
            values = np.array([[t.value_at(int(e)) for t in series] for e in grid])
            mean, sd = values.mean(axis=1), values.std(axis=1)
            line, = ax.step(grid, mean, where="post", label=label)
            ax.fill_between(grid, mean - sd, mean + sd, step="post", alpha=0.2, color=line.get_color())
        ax.set_xlim(0, manifest.budget)
        ax.set_xlabel("Evaluations")
        ax.set_ylabel("Hypervolume (higher is better)")
        ax.set_title(problem)
        ax.legend()
        written.append(_save(fig, store.plots_dir / "anytime" / f"{problem}.svg"))
    return written


def _stored_frame(store: ResultsStore, problem: str) -> Optional[NormalizationFrame]:
    """The problem's normalization frame, or None when absent or degenerate."""
    path = store.metrics_dir / "normalization" / f"{problem}.json"
    if not path.exists():
        return None
    frame = NormalizationFrame.from_dict(store.read_json(path))
    return frame if np.all(frame.hi > frame.lo) else None


def _plot_eaf_diff(store: ResultsStore) -> List[Path]:
    eaf_dir = store.metrics_dir / "eaf"
    grids = sorted(p for p in eaf_dir.glob("*.csv") if not p.name.endswith("__surfaces.csv")) \
        if eaf_dir.exists() else []
    if not grids:
        raise AnalysisError(f"No EAF tables in {eaf_dir}; run the metrics command first")

    written = []
    for path in grids:
        problem, a, b = path.stem.split("__")
        grid = read_eaf_csv(path)
        frame = _stored_frame(store, problem)
        suffix = "" if frame is not None else " (normalized)"
        if frame is None:
            frame = NormalizationFrame(lo=np.zeros(2), hi=np.ones(2))
        x_breaks, y_breaks = (frame.lo[k] + breaks * (frame.hi[k] - frame.lo[k])
                              for k, breaks in enumerate((grid.x_breaks, grid.y_breaks)))
        surfaces = {}
        surfaces_path = path.with_name(f"{path.stem}__surfaces.csv")
        if surfaces_path.exists():
            _, rows = store.read_csv(surfaces_path)
            for name in ("best", "worst"):
                surfaces[name] = frame.denormalize(
                    np.array([[float(r[1]), float(r[2])] for r in rows if r[0] == name]).reshape(-1, 2))

        # left panel: where a attains more often; right panel: where b does
        fig, axes = plt.subplots(1, 2, figsize=(10, 5), sharey=True)
        for ax, sign, winner in ((axes[0], 1.0, a), (axes[1], -1.0, b)):
            mesh = ax.pcolormesh(x_breaks, y_breaks, np.clip(sign * grid.levels.T, 0.0, 1.0),
                                 cmap="Reds", vmin=0.0, vmax=1.0, shading="nearest")
            for name, style in (("best", "k-"), ("worst", "k--")):
                points = surfaces.get(name)
                if points is not None and len(points):
                    ax.step(points[:, 0], points[:, 1], style, where="post", linewidth=0.8,
                            label=f"grand {name}")
            ax.set_xlabel(f"f1{suffix}")
            ax.set_title(f"{winner} better")
        axes[0].set_ylabel(f"f2{suffix}")
        if surfaces:
            axes[1].legend(loc="upper right")
        fig.colorbar(mesh, ax=axes, label="EAF difference")
        fig.suptitle(f"{problem}: {a} vs {b}")
        written.append(_save(fig, store.plots_dir / "eaf_diff" / f"{path.stem}.svg"))
    return written


def _plot_ci(store: ResultsStore) -> List[Path]:
    path = store.metrics_dir / "ci.csv"
    if not path.exists():
        raise AnalysisError(f"No {path.name} in {store.metrics_dir}; run the stats command first")
    _, rows = store.read_csv(path)
    if not rows:
        raise AnalysisError("Confidence-interval table is empty")

    by_budget: Dict[int, List[List[str]]] = {}
    for row in rows:
        by_budget.setdefault(int(row[3]), []).append(row)

    written = []
    for budget, entries in sorted(by_budget.items()):
        fig, ax = plt.subplots(figsize=(6, 0.6 * len(entries) + 1.5))
        for k, (pair, _, _, _, low, high, estimate) in enumerate(entries):
            low, high, estimate = float(low), float(high), float(estimate)
            color = "tab:red" if low > 0.0 or high < 0.0 else "black"
            ax.plot([low, high], [k, k], "-", color=color)
            ax.plot([estimate], [k], "o", color=color)
        ax.axvline(0.0, color="grey", linestyle=":")
        ax.set_yticks(range(len(entries)))
        ax.set_yticklabels([e[0] for e in entries])
        ax.set_xlabel("Median HV difference (column - row)")
        ax.set_title(f"{budget} evaluations")
        written.append(_save(fig, store.plots_dir / "ci" / f"ci_{budget}.svg"))
    return written


_RENDERERS = {
    "anytime": _plot_anytime,
    "eaf_diff": _plot_eaf_diff,
    "ci": _plot_ci,
}


def render_plots(store: ResultsStore, kind: str) -> List[Path]:
    """
    Render every figure of one kind.

    Raises:
        ConfigurationError: For an unknown kind
        AnalysisError: If the metric files the kind needs are absent
    """
    if kind not in _RENDERERS:
        raise ConfigurationError(f"Unknown plot kind {kind}", parameter="kind", value=kind,
                                 details={"kinds": list(PLOT_KINDS)})
    written = _RENDERERS[kind](store)
    logger.info(f"Rendered {len(written)} {kind} plot(s) into {store.plots_dir / kind}")
    return written
