"""Run the desk-scale double slit and print the screen-line fringe profile.

Writes density snapshots plus the observable series under demos/out/, ready
for the frontend renderer:

    python demos/double_slit_quick.py
    cd frontend && npm run build
    node dist/cli.js render --kind density_xy --out ds.png \
        ../demos/out/double_slit/density_xy_*.wgn4
"""

import numpy as np

from wigner4d import builtin, run

config = builtin("double_slit", desk=True)
result = run(config, out_dir="demos/out/double_slit")
print(f"steps: {result.summary['steps']}, "
      f"wall: {result.summary['wall_time_s']:.1f} s, "
      f"mass drift: {result.summary['mass_drift_rel']:.2e}")

from wigner4d import build_grid, read_payload
from wigner4d.scenario import _grid_spec

grid = build_grid(_grid_spec(config))
header, values = read_payload(
    sorted(__import__("pathlib").Path("demos/out/double_slit").glob(
        "density_xy_*.wgn4"))[-1])
iy = int(np.argmin(np.abs(grid.y - config["output"]["screen_y"])))
trace = values[:, iy, 0, 0]
top = trace.max()
print(f"\nscreen trace at y = {grid.y[iy]:.1f} nm "
      f"(column height ~ density):")
for j in range(0, grid.spec.n_x, 2):
    bar = "#" * int(round(30 * trace[j] / top))
    print(f"  x = {grid.x[j]:7.2f}  {bar}")
