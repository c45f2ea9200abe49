"""Watch the frame energy fill in level by level.

For a fixed test function f this prints the scaling-level energies
L_J = sum_l |<f, D^J T_l phi>|^2 together with the per-level wavelet
energies F_J = sum_l |<f, D^J T_l psi>|^2, and checks the staircase
L_{J+1} = L_J + F_J numerically.  L_J should climb from ~0 toward
|f|^2 as J grows; the final column shows the running wavelet total.
"""

import numpy as np

from framelet2d import (SynthesisParams, build_system, gaussian_bump,
                        haar_pair, l_j)


def main():
    a0 = np.array([[1, 1], [1, -1]])
    system = build_system(a0, n0=1, h=haar_pair(1),
                          synth_params=SynthesisParams(j=20, grid_n=512))
    f = gaussian_bump()
    n2 = f.norm2() ** 2
    print(f"|f|^2 = {n2:.6f}  (gaussian, sigma=0.33)")
    print(f"{'J':>3} {'L_J':>10} {'F_J':>10} {'L_J+F_J':>10} "
          f"{'L_{J+1}':>10} {'running':>10}")

    js = list(range(-6, 5))
    lvals = {j: l_j(f, system.phi, a0, j) for j in js + [js[-1] + 1]}
    running = lvals[js[0]]
    for j in js:
        fj = l_j(f, system.psi_c, a0, j)
        running += fj
        print(f"{j:>3} {lvals[j]:>10.6f} {fj:>10.6f} "
              f"{lvals[j] + fj:>10.6f} {lvals[j + 1]:>10.6f} {running:>10.6f}")

    print(f"\nstaircase defect max: "
          f"{max(abs(lvals[j] + l_j(f, system.psi_c, a0, j) - lvals[j + 1]) for j in js):.2e}")
    print(f"L_{js[-1] + 1} / |f|^2 = {lvals[js[-1] + 1] / n2:.5f}  (climbs toward 1)")


if __name__ == "__main__":
    main()
