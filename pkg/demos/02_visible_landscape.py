#!/usr/bin/env python3
"""Minimal-entropy landscape of the visible-only model over the (r, phi) disk.

Sweeps a reduced grid (the full 21 x 121 CLI default takes about half a
minute; this one runs in seconds), writes the table to CSV and, when
matplotlib is importable, renders a polar heatmap next to the analytic
baselines on the r = 1 rim and the phi = 3pi/4 ray.
"""

import os

import numpy as np

from qbm import analysis, bfgs, model

OUT = os.path.join(os.path.dirname(__file__), "demo_output")
os.makedirs(OUT, exist_ok=True)

grid = analysis.SweepGrid(r_values=np.linspace(0.0, 1.0, 11),
                          phi_values=np.linspace(0.0, 2.0, 41) * np.pi)
print(f"sweeping {grid.shape[0]} x {grid.shape[1]} grid ...")
# a wider parameter box lets the zero-temperature ray be followed further,
# which sharpens the quadrant structure near the region edges
table = analysis.sweep(model.visible_model_2q(), grid,
                       bfgs.BfgsOptions(param_cap=60.0, max_iter=600),
                       bfgs.MultiStartOptions.constant(0.0))

csv_path = os.path.join(OUT, "visible_landscape.csv")
with open(csv_path, "w", newline="") as fh:
    fh.write("r,phi,s_min_bits,converged\n")
    for i, r in enumerate(grid.r_values):
        for j, phi in enumerate(grid.phi_values):
            fh.write(f"{r:.17g},{phi:.17g},{table.s_min[i, j]:.17g},"
                     f"{str(bool(table.converged[i, j])).lower()}\n")
print("wrote", csv_path)

# quadrant structure: zero in the first/third quadrants, positive elsewhere
# (cells hugging the quadrant edges would need an ever larger parameter
# norm, so the interior is what shows the clean dichotomy)
q1 = [table.s_min[i, j]
      for i, r in enumerate(grid.r_values) if 0.25 < r < 0.95
      for j, phi in enumerate(grid.phi_values) if 0.2 < phi < np.pi / 2 - 0.2]
q2 = [table.s_min[i, j]
      for i, r in enumerate(grid.r_values) if 0.25 < r < 0.95
      for j, phi in enumerate(grid.phi_values)
      if np.pi / 2 + 0.2 < phi < np.pi - 0.2]
print(f"first-quadrant interior: max s_min = {max(q1):.2e} bits")
print(f"second-quadrant interior: min s_min = {min(q2):.3f} bits")

# rim against the analytic baseline
rim_err = max(abs(table.s_min[-1, j] - analysis.baseline_r1(phi))
              for j, phi in enumerate(grid.phi_values))
print(f"r = 1 rim vs analytic baseline: max deviation {rim_err:.2e} bits")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not available; skipping the figure")
else:
    fig = plt.figure(figsize=(12, 4.5))
    ax = fig.add_subplot(1, 3, 1, projection="polar")
    pp, rr = np.meshgrid(grid.phi_values, grid.r_values)
    pc = ax.pcolormesh(pp, rr, table.s_min, shading="auto", cmap="viridis")
    fig.colorbar(pc, ax=ax, label="minimal relative entropy [bits]")
    ax.set_title("trained landscape")

    ax2 = fig.add_subplot(1, 3, 2)
    phis = np.linspace(0, 2 * np.pi, 200)
    ax2.plot(phis, [analysis.baseline_r1(p) for p in phis], "-",
             label="analytic")
    ax2.plot(grid.phi_values, table.s_min[-1], "x", label="trained")
    ax2.set_xlabel("phi")
    ax2.set_ylabel("bits")
    ax2.set_title("r = 1 rim")
    ax2.legend()

    ax3 = fig.add_subplot(1, 3, 3)
    rs = np.linspace(0, 1, 200)
    ax3.plot(rs, [analysis.baseline_phi_3pi4(r) for r in rs], "-",
             label="analytic")
    j34 = int(np.argmin(np.abs(grid.phi_values - 3 * np.pi / 4)))
    ax3.plot(grid.r_values, table.s_min[:, j34], "x", label="trained")
    ax3.set_xlabel("r")
    ax3.set_title("phi = 3pi/4 ray")
    ax3.legend()

    fig.tight_layout()
    png_path = os.path.join(OUT, "visible_landscape.png")
    fig.savefig(png_path, dpi=130)
    print("wrote", png_path)
