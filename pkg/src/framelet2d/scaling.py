"""Scaling-function synthesis from the truncated infinite filter product.

ghat_J(xi) = (1/2pi) * prod_{j=1..J} m0((A^T)^{-j} xi) is sampled on a
frequency box [-R, R)^2 and inverted with the symmetric 1/(2pi) transform
convention, so that integral(phi) = 2pi * ghat(0) = 1 holds on the grid by
construction.  R is chosen as a multiple of pi, which makes the spatial step
pi/R an exact negative power of two: every later affine lookup on the phi
grid then lands on exact nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, GridTooCoarse
from .fields import SampledField, bilinear
from .filters import FilterEvaluator, eval_m0_grid
from .lattice import adjugate, as_int_matrix, det
from .lawton import SQRT2, FilterCoeffs

__all__ = [
    "SynthesisParams",
    "ghat_grid",
    "ghat_truncated",
    "refinement_residual",
    "support_radius",
    "synthesize_phi",
]


@dataclass(frozen=True)
class SynthesisParams:
    """Truncation depth and frequency-grid geometry.

    grid_extent is the half-width R of the frequency box; the dual spatial
    step is pi/R and the spatial box is [-N*pi/(2R), N*pi/(2R)).
    """

    j: int = 20
    grid_n: int = 1024
    grid_extent: float = 32 * np.pi
    max_step: float = 1 / 8

    def __post_init__(self):
        if self.j < 1:
            raise ValueError(f"product depth must be >= 1, got {self.j}")
        n = self.grid_n
        if n < 2 or (n & (n - 1)) != 0:
            raise ValueError(f"grid_n must be a power of two, got {n}")

    @property
    def freq_step(self) -> float:
        return 2 * self.grid_extent / self.grid_n

    @property
    def space_step(self) -> float:
        return np.pi / self.grid_extent

    @property
    def space_half_width(self) -> float:
        return self.grid_n * self.space_step / 2


def _inv_at(c) -> np.ndarray:
    """(A^T)^{-1} as an exact-dyadic float matrix (adjugate over det)."""
    at = as_int_matrix(c).T
    return adjugate(at).astype(float) / det(at)


def ghat_truncated(ev: FilterEvaluator, c, xi, j: int) -> complex:
    """(1/2pi) * prod_{k=1..j} m0((A^T)^{-k} xi) at a single frequency."""
    return complex(ghat_grid(ev, c, np.asarray(xi, dtype=float), j))


def ghat_grid(ev: FilterEvaluator, c, xi: np.ndarray, j: int) -> np.ndarray:
    """Truncated product over an array of frequencies, shape (..., 2)."""
    if j < 1:
        raise ValueError(f"product depth must be >= 1, got {j}")
    minv = _inv_at(c)
    arg = np.asarray(xi, dtype=float)
    out = None
    for _ in range(j):
        arg = arg @ minv.T
        factor = eval_m0_grid(ev, arg)
        out = factor if out is None else out * factor
    return out / (2 * np.pi)


def support_radius(n0: int, c) -> float:
    """Radius B of a closed ball certain to contain supp(phi).

    Iterating the refinement equation traps supp(phi) inside
    sum_{j>=1} A^{-j} K with K the tap support box, bounded term-by-term
    through B = B0 * s/(1-s) with the (deliberately conservative)
    constant B0 = 4*sqrt(2)*n0 and s = ||(A^T)^{-1}||_2 when s < 1.
    Two of the six canonical forms have s >= 1 even though their inverse
    iterates contract, so the sum is then taken over the actual iterate
    norms ||(A^T)^{-j}||_2, which decay geometrically in the long run
    and give a finite (larger) B.
    """
    b0 = 4 * SQRT2 * n0
    minv = _inv_at(c)

    def spectral_norm(m):
        g = m.T @ m
        tr = g[0, 0] + g[1, 1]
        dd = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
        return float(np.sqrt((tr + np.sqrt(max(tr * tr - 4 * dd, 0.0))) / 2))

    s = spectral_norm(minv)
    if s < 1:
        return b0 * s / (1 - s)
    total = 0.0
    power = np.eye(2)
    for _ in range(200):
        power = power @ minv
        term = spectral_norm(power)
        total += term
        if term < 1e-16 * total:
            break
    return b0 * total


def synthesize_phi(ev: FilterEvaluator, c, params: SynthesisParams | None = None,
                   label: str = "phi") -> SampledField:
    """Sample ghat_J on the frequency box and invert to the spatial grid.

    The row and column at index -N/2 have no Hermitian partner on the DFT
    grid and are zeroed before inversion; otherwise a real tap family would
    pick up a spurious imaginary part at the 1e-8 level.  For real taps the
    imaginary part of the result is checked against that same bound.
    """
    p = params or SynthesisParams()
    n = p.grid_n
    h = p.space_step
    if h > p.max_step:
        raise GridTooCoarse(
            f"spatial step {h:g} exceeds {p.max_step:g}; widen the frequency box")
    k = np.arange(-n // 2, n // 2)
    xi_ax = k * p.freq_step
    xi = np.stack(np.meshgrid(xi_ax, xi_ax, indexing="ij"), axis=-1)
    g = ghat_grid(ev, c, xi, p.j)
    g[0, :] = 0.0
    g[:, 0] = 0.0
    spatial = np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(g)))
    spatial *= n * n * p.freq_step ** 2 / (2 * np.pi)
    real_taps = all(v.imag == 0 for _, v in ev.h.items_sorted())
    if real_taps:
        peak = float(np.max(np.abs(spatial)))
        worst_imag = float(np.max(np.abs(spatial.imag)))
        if peak > 0 and worst_imag > 1e-8 * peak:
            raise DegenerateInput(
                f"imaginary residue {worst_imag:.3e} exceeds 1e-8 of peak {peak:.3e}")
    half = p.space_half_width
    b = support_radius(ev.h.n0, c)
    return SampledField(
        origin=(-half, -half), step=h, values=spatial, label=label,
        support_box=((-b, b), (-b, b)),
        meta={"n0": ev.h.n0, "j": p.j, "support_radius": b},
    )


def refinement_residual(phi: SampledField, h: FilterCoeffs, c) -> float:
    """max |phi(t) - sqrt(2) sum_n h_n phi(A t - n)| over interior nodes.

    Interior means every shifted argument A t - n stays on the sampled box,
    so zero extension never fakes agreement.  Arguments land on exact nodes
    for the dyadic grids this package produces, making the right-hand side
    an exact gather.
    """
    a = as_int_matrix(c).astype(float)
    nx, ny = phi.values.shape
    tx = phi.origin[0] + phi.step * np.arange(nx)
    ty = phi.origin[1] + phi.step * np.arange(ny)
    t = np.stack(np.meshgrid(tx, ty, indexing="ij"), axis=-1)
    at = t @ a.T
    (x0, x1), (y0, y1) = phi.box()
    rhs = np.zeros((nx, ny), dtype=complex)
    interior = np.ones((nx, ny), dtype=bool)
    for nvec, coeff in h.items_sorted():
        pts = at - np.asarray(nvec, dtype=float)
        inside = ((pts[..., 0] >= x0) & (pts[..., 0] <= x1)
                  & (pts[..., 1] >= y0) & (pts[..., 1] <= y1))
        interior &= inside
        rhs += coeff * bilinear(phi, pts)
    diff = np.abs(phi.values - SQRT2 * rhs)
    if not interior.any():
        raise DegenerateInput("no interior nodes; field box too small")
    return float(diff[interior].max())
