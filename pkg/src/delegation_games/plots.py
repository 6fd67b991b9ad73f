"""Figure rendering for the sweep and estimator-error reports.

Figures are a convenience companion to the CSV outputs: the CSV stays the
interchange format, the PNG next to it is for eyeballing a run.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .inference import MaeRow
from .sweep import SweepRow

_MEASURE_LABELS = {
    "ia": "individual alignment",
    "ic": "individual capability",
    "ca": "collective alignment",
    "cc": "collective capability",
}


def render_sweep_figure(rows: Sequence[SweepRow], path: str) -> None:
    """Welfare and bound curves against the varied measure, as in the sweep CSV."""
    by_value: dict[float, list[SweepRow]] = defaultdict(list)
    for row in rows:
        by_value[row.value].append(row)
    values = sorted(by_value)
    mean_w = np.array([np.mean([r.mean_principal_welfare_norm for r in by_value[v]]) for v in values])
    ci_lo = np.array([by_value[v][0].ci_lo for v in values])
    ci_hi = np.array([by_value[v][0].ci_hi for v in values])
    w_star = np.array([np.mean([r.w_hat_star_norm for r in by_value[v]]) for v in values])
    w_bullet = np.array([np.mean([r.w_hat_bullet_norm for r in by_value[v]]) for v in values])
    thm1 = np.array([np.mean([r.thm1_bound_norm for r in by_value[v]]) for v in values])
    prop4 = np.array([np.mean([r.prop4_bound_norm for r in by_value[v]]) for v in values])

    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.plot(values, mean_w, color="tab:red", label="mean principal welfare")
    ax.fill_between(values, ci_lo, ci_hi, color="tab:red", alpha=0.2)
    ax.plot(values, w_star, color="tab:green", label="max/min achievable")
    ax.plot(values, w_bullet, color="tab:green", linestyle="--")
    ax.plot(values, np.clip(w_star - thm1, 0.0, None), color="tab:orange",
            label="capability-bound welfare floor")
    ax.plot(values, np.clip(1.0 - prop4, 0.0, None), color="tab:blue",
            label="ideal-gap floor on max welfare")
    measure = rows[0].varied_measure if rows else "measure"
    ax.set_xlabel(_MEASURE_LABELS.get(measure, measure))
    ax.set_ylabel("principal welfare (normalised)")
    ax.set_ylim(-0.05, 1.1)
    ax.legend(fontsize=7, loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_mae_figure(rows: Sequence[MaeRow], path: str) -> None:
    """Estimator mean absolute error against sample size, one line per measure."""
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    for measure in ("ia", "ic", "ca", "cc"):
        series = sorted((r for r in rows if r.measure == measure), key=lambda r: r.sample_size)
        if not series:
            continue
        sizes = [r.sample_size for r in series]
        ax.plot(sizes, [r.mae for r in series], marker="o", label=_MEASURE_LABELS[measure])
        ax.fill_between(sizes, [r.ci_lo for r in series], [r.ci_hi for r in series], alpha=0.2)
    ax.set_xscale("log")
    ax.set_xlabel("observations")
    ax.set_ylabel("mean absolute error")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
