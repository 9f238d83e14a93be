"""
Running a sweep from a config file
==================================

Same as ``quasifeynman sweep --config configs/example_sweep.yaml`` but
from Python, with the fitted orders printed per method.
"""

from pathlib import Path

from quasifeynman import load_config, run_sweep

config = Path(__file__).resolve().parents[1] / "configs" / "example_sweep.yaml"
report = run_sweep(load_config(config), write_csv=False)

for row in report.rows:
    print(f"{row.method:12s} n={row.n:5d}  error={row.oracle_error:.3e}  drift={row.norm_drift:.1e}")
print()
for method, order in report.fitted_order.items():
    print(f"{method:12s} fitted order {order}")
