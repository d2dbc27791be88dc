"""Render log-log convergence figures from sweep CSVs.

One panel per requested method, one curve per epsilon (descending, labeled
with its value), and a black solid guide line of the requested order
anchored at the smallest-step datum of the largest-epsilon curve.  Output
is deterministic for identical input and request: fixed figure geometry,
fixed ordering, no timestamps.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

# Contract with the sweep harness; files with any other header are rejected.
CSV_HEADER = ("method,model,epsilon,tau,n_modes,t_final,"
              "l2_error,h1_error,mass_drift,wall_time_s")

_FIG_HEIGHT = 4.2
_PANEL_WIDTH = 4.8
_DPI = 150


class PlotDataError(ValueError):
    """The input CSV is missing, malformed, or has no usable rows."""


@dataclass(frozen=True)
class PlotRequest:
    input_csv: str
    methods: tuple[str, ...]
    orders: tuple[int, ...]
    output: str

    def order_for_panel(self, index: int) -> int:
        if len(self.orders) == 1:
            return self.orders[0]
        if len(self.orders) == len(self.methods):
            return self.orders[index]
        raise PlotDataError(
            f"cannot match {len(self.orders)} guide orders to "
            f"{len(self.methods)} methods"
        )


@dataclass
class CurveData:
    epsilon: float
    taus: list[float] = field(default_factory=list)
    errors: list[float] = field(default_factory=list)


@dataclass
class PanelData:
    method: str
    curves: list[CurveData]
    guide_taus: list[float]
    guide_errors: list[float]
    order: int


def _read_rows(path: str) -> list[dict]:
    if not os.path.exists(path):
        raise PlotDataError(f"input CSV not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != CSV_HEADER:
            raise PlotDataError(
                f"unexpected CSV header in {path}: {header!r}"
            )
        reader = csv.DictReader(fh, fieldnames=CSV_HEADER.split(","))
        rows = []
        for raw in reader:
            try:
                rows.append({
                    "method": raw["method"],
                    "epsilon": float(raw["epsilon"]),
                    "tau": float(raw["tau"]),
                    "l2_error": float(raw["l2_error"]),
                })
            except (TypeError, ValueError, KeyError) as exc:
                raise PlotDataError(f"malformed row in {path}: {raw!r}") from exc
    return rows


def _collect_panel(rows: list[dict], method: str, order: int) -> PanelData:
    by_eps: dict[float, CurveData] = {}
    for row in rows:
        if row["method"] != method:
            continue
        err = row["l2_error"]
        # flagged rows carry nan; zero/negative cannot live on a log axis
        if not math.isfinite(err) or err <= 0.0:
            continue
        curve = by_eps.setdefault(row["epsilon"], CurveData(row["epsilon"]))
        curve.taus.append(row["tau"])
        curve.errors.append(row["l2_error"])

    curves = []
    for eps in sorted(by_eps, reverse=True):
        curve = by_eps[eps]
        order_idx = sorted(range(len(curve.taus)), key=lambda i: curve.taus[i])
        curve.taus = [curve.taus[i] for i in order_idx]
        curve.errors = [curve.errors[i] for i in order_idx]
        curves.append(curve)
    curves = [c for c in curves if len(c.taus) >= 2]
    if not curves:
        raise PlotDataError(
            f"no plottable rows for method {method!r} "
            "(need >= 2 step sizes with finite positive errors)"
        )

    anchor = curves[0]                    # largest epsilon
    tau0, err0 = anchor.taus[0], anchor.errors[0]
    all_taus = sorted({t for c in curves for t in c.taus})
    guide = [err0 * (t / tau0) ** order for t in all_taus]
    return PanelData(method=method, curves=curves, guide_taus=all_taus,
                     guide_errors=guide, order=order)


def render_convergence(request: PlotRequest) -> list[PanelData]:
    """Write the figure for the request; returns the plotted panel data.

    Raises PlotDataError (and writes nothing) when the CSV is missing or
    malformed, or when no rows survive the method/error filters.
    """
    rows = _read_rows(request.input_csv)
    panels = [
        _collect_panel(rows, method, request.order_for_panel(i))
        for i, method in enumerate(request.methods)
    ]

    fig, axes = plt.subplots(
        1, len(panels),
        figsize=(_PANEL_WIDTH * len(panels), _FIG_HEIGHT),
        squeeze=False,
    )
    for ax, panel in zip(axes[0], panels):
        for curve in panel.curves:
            ax.loglog(curve.taus, curve.errors, marker="o",
                      label=f"eps = {curve.epsilon:g}")
        ax.loglog(panel.guide_taus, panel.guide_errors, "k-",
                  label=f"order {panel.order}")
        ax.set_title(panel.method)
        ax.set_xlabel("step size")
        ax.set_ylabel("L2 error")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend()
    fig.tight_layout()
    metadata = {"Date": None} if request.output.endswith(".svg") else None
    fig.savefig(request.output, dpi=_DPI, metadata=metadata)
    plt.close(fig)
    return panels
