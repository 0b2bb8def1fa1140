"""Density-matrix files, sweep CSV/JSON output and companion plot scripts."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .optimizer import SweepRow
from .quantum import TwoQubitState

SIG_DIGITS = 12


def fmt(x: float) -> str:
    return f"{x:.{SIG_DIGITS}g}"


def round_sig(x: float) -> float:
    return float(fmt(x))


def load_state_file(path: str | Path) -> TwoQubitState:
    """Read {"rho": 4x4 array of [re, im] pairs}, basis |00>,|01>,|10>,|11>."""
    data = json.loads(Path(path).read_text())
    try:
        arr = np.asarray(data["rho"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: expected key 'rho' holding a 4x4 array of [re, im] pairs") from exc
    if arr.shape != (4, 4, 2):
        raise ValueError(f"{path}: 'rho' has shape {arr.shape}, expected (4, 4, 2)")
    return TwoQubitState(arr[..., 0] + 1j * arr[..., 1])


def dump_state_file(state: TwoQubitState, path: str | Path) -> None:
    rho = state.rho
    pairs = [[[round_sig(v.real), round_sig(v.imag)] for v in row] for row in rho]
    Path(path).write_text(json.dumps({"rho": pairs}, indent=1))


def write_sweep_csv(rows: Sequence[SweepRow], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SweepRow.COLUMNS)
        for r in rows:
            writer.writerow([fmt(r.param), fmt(r.s_opt), *(fmt(v) for v in r.scenario), str(r.converged).lower()])


def read_sweep_csv(path: str | Path) -> list[SweepRow]:
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            scen = tuple(float(rec[k]) for k in SweepRow.COLUMNS[2:14])
            rows.append(SweepRow(float(rec["param"]), float(rec["s_opt"]), scen, rec["converged"] == "true"))
    return rows


def write_sweep_json(rows: Sequence[SweepRow], path: str | Path, family: str) -> None:
    recs = [
        {"param": round_sig(r.param), "s_opt": round_sig(r.s_opt),
         "scenario": [round_sig(v) for v in r.scenario], "converged": r.converged}
        for r in rows
    ]
    Path(path).write_text(json.dumps({"family": family, "rows": recs}, indent=1))


_PLOT_TEMPLATE = '''"""Plot s_opt against the {label} from {csv_name}."""

import csv
import math
from pathlib import Path

import matplotlib.pyplot as plt

here = Path(__file__).resolve().parent
with open(here / "{csv_name}", newline="") as fh:
    rows = list(csv.DictReader(fh))
x = [float(r["param"]) for r in rows]
y = [float(r["s_opt"]) for r in rows]

fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(x, y, "o-", ms=3, label="optimal S")
ax.axhline(2.0, color="k", ls="--", lw=1, label="LHS bound 2")
ax.axhline(2 * math.sqrt(2), color="grey", ls=":", lw=1, label="2*sqrt(2)")
ax.set_xlabel("{xlabel}")
ax.set_ylabel("optimal S")
ax.legend()
fig.tight_layout()
fig.savefig(here / "{png_name}", dpi=150)
'''


def write_plot_script(csv_path: str | Path, family: str) -> Path:
    """Emit a standalone matplotlib script next to ``csv_path``."""
    csv_path = Path(csv_path)
    label, xlabel = {
        "pure": ("Schmidt coefficient", "a  (state a|00> + b|11>)"),
        "werner": ("Werner weight", "w  (Werner state)"),
    }[family]
    script = csv_path.with_name(csv_path.stem + "_plot.py")
    script.write_text(
        _PLOT_TEMPLATE.format(
            label=label, xlabel=xlabel, csv_name=csv_path.name, png_name=csv_path.stem + ".png"
        )
    )
    return script
