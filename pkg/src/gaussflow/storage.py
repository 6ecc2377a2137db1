"""Series CSV and snapshot files.

Both formats are plain text with full double precision (17 significant
digits), so files are diffable, reload bit-for-bit, and identical configs
produce byte-identical outputs.

Snapshot layout: a header line '# n N t', then one 'theta rho' pair per
line. Series layout: one CSV header naming the diagnostics columns, one
row per record.
"""

from __future__ import annotations

from pathlib import Path
from types import SimpleNamespace

import numpy as np

from .geometry import RadialGraph


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def series_columns(n: int) -> list:
    a_cols = [f"A_{k}" if k >= 0 else "A_minus1" for k in range(-1, n + 1)]
    return (
        ["t", "volume"]
        + a_cols
        + ["Kbar", "osc_K_L1", "kappa_min", "K_max", "b_max",
           "r_fit", "hausdorff_proxy", "osc_rho", "dA_pred"]
    )


def record_row(rec) -> list:
    return (
        [rec.t, rec.volume]
        + [rec.A[i] for i in range(rec.n + 2)]
        + [rec.Kbar, rec.osc_K_L1, rec.kappa_min, rec.K_max, rec.b_max,
           rec.r_fit, rec.hausdorff_proxy, rec.osc_rho, rec.dA_pred]
    )


def write_series(path, records) -> None:
    if not records:
        raise ValueError("no records to write")
    n = records[0].n
    lines = [",".join(series_columns(n))]
    for rec in records:
        lines.append(",".join(_fmt(v) for v in record_row(rec)))
    Path(path).write_text("\n".join(lines) + "\n")


def read_series(path) -> list:
    """Rows as attribute bags keyed by column name (floats)."""
    text = Path(path).read_text().strip().splitlines()
    header = text[0].split(",")
    rows = []
    for line in text[1:]:
        vals = [float(v) for v in line.split(",")]
        rows.append(SimpleNamespace(**dict(zip(header, vals))))
    return rows


def write_snapshot(path, graph: RadialGraph, t: float) -> None:
    lines = [f"# {graph.n} {graph.N} {_fmt(t)}"]
    for th, r in zip(graph.theta, graph.rho):
        lines.append(f"{_fmt(th)} {_fmt(r)}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_snapshot(path) -> tuple[RadialGraph, float]:
    lines = Path(path).read_text().strip().splitlines()
    head = lines[0].lstrip("#").split()
    n, N, t = int(head[0]), int(head[1]), float(head[2])
    theta = np.empty(N)
    rho = np.empty(N)
    for i, line in enumerate(lines[1 : N + 1]):
        a, b = line.split()
        theta[i] = float(a)
        rho[i] = float(b)
    return RadialGraph(n=n, theta=theta, rho=rho), t
