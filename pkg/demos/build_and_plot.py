"""Build a wavelet system for a determinant-two matrix and plot the pair.

Usage:  python demos/build_and_plot.py [a b c d] [outdir]

Defaults to the quincunx-type matrix [[0,2],[1,0]] and writes
phi/psi heat maps plus a cross-section into ./demo_out.
"""

import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from framelet2d import SynthesisParams, build_system

args = sys.argv[1:]
if len(args) >= 4:
    a0 = np.array([[int(args[0]), int(args[1])], [int(args[2]), int(args[3])]])
    rest = args[4:]
else:
    a0 = np.array([[0, 2], [1, 0]])
    rest = args
outdir = Path(rest[0]) if rest else Path("demo_out")
outdir.mkdir(parents=True, exist_ok=True)

print(f"matrix A0 = {a0.tolist()}")
system = build_system(a0, n0=1, synth_params=SynthesisParams(j=20, grid_n=512))
print(f"canonical index {system.index}, conjugator S = {system.reduction.s.tolist()}")
print(f"filter taps: {dict(system.h.coeffs)}")
print(f"int phi  = {system.phi.integral().real:.6f}   (target 1)")
print(f"int psi  = {system.psi_c.integral().real:+.2e} (target 0)")
print(f"|phi|^2  = {system.phi.norm2()**2:.4f}")
print(f"|psi|^2  = {system.psi.norm2()**2:.4f}")

for name in ("phi", "psi"):
    fld = getattr(system, name)
    v = np.real(fld.values)
    lim = np.max(np.abs(v))
    x0, x1 = fld.origin[0], fld.origin[0] + fld.step * (v.shape[0] - 1)
    y0, y1 = fld.origin[1], fld.origin[1] + fld.step * (v.shape[1] - 1)
    fig, ax = plt.subplots(figsize=(5, 5))
    im = ax.imshow(v.T, origin="lower", extent=(x0, x1, y0, y1),
                   cmap="RdBu_r", vmin=-lim, vmax=lim)
    ax.set_xlim(-3, 4)
    ax.set_ylim(-3, 4)
    ax.set_title(f"{name}, A0={a0.tolist()}")
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.savefig(outdir / f"{name}.png", dpi=130, bbox_inches="tight")
    plt.close(fig)
    print(f"wrote {outdir / f'{name}.png'}")

# cross-section along x through the phi support
phi = system.phi
row = np.argmin(np.abs(phi.axis(1) - 0.25))
fig, ax = plt.subplots(figsize=(6, 3))
ax.plot(phi.axis(0), np.real(phi.values[:, row]), lw=1)
ax.set_xlim(-2, 3)
ax.set_title("phi cross-section at y = 0.25")
fig.savefig(outdir / "phi_section.png", dpi=130, bbox_inches="tight")
plt.close(fig)
print(f"wrote {outdir / 'phi_section.png'}")
