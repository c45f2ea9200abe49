"""The low-pass symbol m0 of a tap family, and its quadrature-mirror check.

m0(t) = (1/sqrt(2)) * sum_n h_n exp(-i n.t) is a 2pi-periodic trigonometric
polynomial.  Taps are summed in (i, j)-lexicographic order with compensated
(Kahan) accumulation so results are identical no matter how the coefficient
map was built.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import LatticeData
from .lawton import SQRT2, FilterCoeffs

__all__ = ["FilterEvaluator", "eval_m0", "eval_m0_grid", "max_abs_m0", "qmf_residual"]


@dataclass(frozen=True, eq=False)
class FilterEvaluator:
    """Taps plus the parity vector q needed for the mirror argument t + pi*q."""

    h: FilterCoeffs
    q: tuple[int, int]

    @classmethod
    def from_lattice(cls, h: FilterCoeffs, ld: LatticeData) -> "FilterEvaluator":
        return cls(h=h, q=ld.q)


def _kahan_sum(terms):
    """Compensated sum of an iterable of ndarray (or scalar) terms."""
    total = None
    carry = None
    for term in terms:
        if total is None:
            total = np.array(term, dtype=complex)
            carry = np.zeros_like(total)
            continue
        y = term - carry
        t = total + y
        carry = (t - total) - y
        total = t
    return total


def eval_m0(ev: FilterEvaluator, t) -> complex:
    """m0 at a single point t in R^2."""
    return complex(eval_m0_grid(ev, np.asarray(t, dtype=float)))


def eval_m0_grid(ev: FilterEvaluator, t: np.ndarray) -> np.ndarray:
    """m0 at an array of points, shape (..., 2); vectorized over the grid.

    One complex exponential per tap, accumulated in lexicographic tap order
    with Kahan compensation.
    """
    t = np.asarray(t, dtype=float)
    tx, ty = t[..., 0], t[..., 1]
    terms = (v * np.exp(-1j * (n[0] * tx + n[1] * ty))
             for n, v in ev.h.items_sorted())
    total = _kahan_sum(terms)
    if total is None:
        total = np.zeros(np.broadcast(tx, ty).shape, dtype=complex)
    return total / SQRT2


def qmf_residual(ev: FilterEvaluator, grid_n: int = 256) -> float:
    """max over a grid_n^2 uniform grid on [-pi, pi)^2 of
    | |m0(t)|^2 + |m0(t + pi*q)|^2 - 1 |."""
    if grid_n < 2:
        raise ValueError(f"grid_n must be >= 2, got {grid_n}")
    ax = -np.pi + 2 * np.pi * np.arange(grid_n) / grid_n
    t = np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1)
    a = np.abs(eval_m0_grid(ev, t)) ** 2
    b = np.abs(eval_m0_grid(ev, t + np.pi * np.asarray(ev.q, dtype=float))) ** 2
    return float(np.max(np.abs(a + b - 1.0)))


def max_abs_m0(ev: FilterEvaluator, grid_n: int = 256) -> float:
    ax = -np.pi + 2 * np.pi * np.arange(grid_n) / grid_n
    t = np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1)
    return float(np.max(np.abs(eval_m0_grid(ev, t))))
