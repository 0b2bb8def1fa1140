"""Freeze reference values for the pure-state sweep using the grid oracle.

Writes tests/data/fig1_oracle.json; run once, then commit the output.
"""

import json
import sys
import time
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from oracles import oracle_s_opt  # noqa: E402

from chsh_steering.quantum import pure_schmidt_state  # noqa: E402


def main(points=101, step_deg=15.0):
    rows = []
    for a in np.linspace(0.0, 1.0, points):
        t0 = time.time()
        best, coarse = oracle_s_opt(pure_schmidt_state(a).rho, step_deg=step_deg)
        rows.append({"a": float(a), "s_opt": best, "grid_max": coarse})
        print(f"a={a:.2f} s_opt={best:.12f} grid={coarse:.12f} ({time.time() - t0:.1f}s)", flush=True)
    out = ROOT / "tests" / "data" / "fig1_oracle.json"
    out.write_text(json.dumps({"step_deg": step_deg, "refinement": "compass search, step 1e-10", "rows": rows}, indent=1))
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
