"""Render sweep tables to PNG: total cost and mean error against the swept
parameter, one line per strategy."""
from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .experiments import SweepRow  # noqa: E402

STYLE = {
    "TL": dict(color="0.4", marker="s", ls="--"),
    "TO": dict(color="tab:red", marker="^", ls="--"),
    "BO": dict(color="tab:blue", marker="o", ls="-"),
    "PO": dict(color="tab:green", marker="D", ls="-"),
    "PO_SPECIAL": dict(color="tab:purple", marker="v", ls="-."),
}
AXIS_LABEL = {
    "gamma": r"scale coefficient $\gamma$",
    "beta": r"offloading ratio $\beta$",
    "F": "MES CPU frequency $F$ (GHz)",
    "n": "number of UAVs $n$",
    "eta": r"bad-frame probability $\eta$",
    "eps_T": r"error threshold $\epsilon_T$",
    "theta": r"delay weight $\theta$",
}


def _series(rows: Sequence[SweepRow]) -> Dict[str, List[SweepRow]]:
    out: Dict[str, List[SweepRow]] = {}
    for r in rows:
        if r.ok:
            out.setdefault(r.strategy, []).append(r)
    return out


def plot_sweep(rows: Sequence[SweepRow], param: str, path: Path, title: str = "") -> Path:
    """Save a two-panel figure next to the sweep CSV and return its path."""
    scale = 1e-9 if param == "F" else 1.0
    fig, (ax_c, ax_e) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    for strategy, pts in _series(rows).items():
        x = [r.param_value * scale for r in pts]
        kw = STYLE.get(strategy, {})
        ax_c.plot(x, [r.total_cost for r in pts], label=strategy, ms=4, **kw)
        ax_e.plot(x, [r.mean_error for r in pts], label=strategy, ms=4, **kw)
    for ax, ylab in ((ax_c, "total weighted-sum cost"), (ax_e, "mean inference error")):
        ax.set_xlabel(AXIS_LABEL.get(param, param))
        ax.set_ylabel(ylab)
        ax.grid(alpha=0.3)
    ax_c.legend(fontsize=8, loc="best")
    if title:
        fig.suptitle(title, fontsize=10)
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    # no Software/date metadata so reruns give identical files
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path
