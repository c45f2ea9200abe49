"""Wavelet assembly: the alternating-sign tap mirror, and coordinate pull-back.

psi(t) = sqrt(2) * sum_n (-1)^{sigma(n)} conj(h_{ell-n}) phi(A t - n), with n
over ell - [-N0, N0]^2 (everywhere else the coefficient vanishes).  For a
dilation A0 that is merely conjugate to a canonical form C = S A0 S^{-1},
the wavelet for A0 is the canonical one composed with S: psi(t) = psi_c(S t),
with no amplitude factor because |det S| = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MismatchedFilter
from .fields import SampledField, bilinear
from .filters import FilterEvaluator
from .lattice import (LatticeData, Reduction, adjugate, as_int_matrix, det,
                      reduce_to_canonical, sigma, special_vectors)
from .lawton import SQRT2, FilterCoeffs, SolverOptions, solve
from .scaling import SynthesisParams, synthesize_phi

__all__ = [
    "WaveletSystem",
    "build_system",
    "highpass_taps",
    "pull_back",
    "synthesize_psi",
]


def highpass_taps(h: FilterCoeffs, c, ld: LatticeData) -> dict[tuple[int, int], complex]:
    """g_n = (-1)^{sigma(n)} * conj(h_{ell - n}) on its finite support."""
    ex, ey = ld.ell
    out = {}
    for (i, j), v in h.items_sorted():
        n = (ex - i, ey - j)
        out[n] = (-1) ** sigma(c, n) * v.conjugate()
    return dict(sorted(out.items()))


def synthesize_psi(phi: SampledField, h: FilterCoeffs, c,
                   ld: LatticeData, label: str = "psi_c") -> SampledField:
    """Evaluate the two-scale sum for psi at phi's step on psi's own box.

    The output grid covers the bounding box of A^{-1}(supp phi + n) over the
    tap offsets n, node-aligned with phi; that box is not contained in phi's
    for every dilation, since an expansive matrix can still contract some
    directions.
    """
    if phi.meta is not None and phi.meta.get("n0") not in (None, h.n0):
        raise MismatchedFilter(
            f"filter N0={h.n0} but field was synthesized with N0={phi.meta['n0']}")
    a = as_int_matrix(c).astype(float)
    taps = highpass_taps(h, c, ld)
    support = _psi_support_box(phi, taps, c)
    step = phi.step
    i0 = int(np.floor(support[0][0] / step))
    i1 = int(np.ceil(support[0][1] / step))
    j0 = int(np.floor(support[1][0] / step))
    j1 = int(np.ceil(support[1][1] / step))
    tx = step * np.arange(i0, i1 + 1)
    ty = step * np.arange(j0, j1 + 1)
    t = np.stack(np.meshgrid(tx, ty, indexing="ij"), axis=-1)
    at = t @ a.T
    acc = np.zeros((len(tx), len(ty)), dtype=complex)
    for n, g in taps.items():
        acc += g * bilinear(phi, at - np.asarray(n, dtype=float))
    values = SQRT2 * acc
    meta = dict(phi.meta or {})
    meta["kind"] = "psi"
    return SampledField(origin=(tx[0], ty[0]), step=step, values=values,
                        label=label, support_box=support, meta=meta)


def _psi_support_box(phi: SampledField, taps, c):
    """Bounding box of A^{-1}(supp phi + n) over the tap offsets n."""
    if phi.support_box is None:
        (x0, x1), (y0, y1) = phi.box()
    else:
        (x0, x1), (y0, y1) = phi.support_box
    xs = [n[0] for n in taps]
    ys = [n[1] for n in taps]
    shifted = [(x0 + min(xs), x1 + max(xs)), (y0 + min(ys), y1 + max(ys))]
    ainv = adjugate(c).astype(float) / det(c)
    corners = [(x, y) for x in shifted[0] for y in shifted[1]]
    img = np.array(corners) @ ainv.T
    return ((float(img[:, 0].min()), float(img[:, 0].max())),
            (float(img[:, 1].min()), float(img[:, 1].max())))


def pull_back(psi_c: SampledField, s, label: str = "psi") -> SampledField:
    """The field t -> psi_c(S t) on an axis-aligned grid.

    The output grid is node-aligned with psi_c's step and covers the
    S^{-1}-image of psi_c's support box; S t lands on exact nodes of psi_c,
    so values transfer without interpolation error.
    """
    sm = as_int_matrix(s)
    if abs(det(sm)) != 1:
        raise ValueError(f"pull-back needs |det S| = 1, got {det(sm)}")
    sinv = adjugate(sm).astype(float) / det(sm)
    if psi_c.support_box is None:
        box = psi_c.box()
    else:
        box = psi_c.support_box
    corners = np.array([(x, y) for x in box[0] for y in box[1]])
    img = corners @ sinv.T
    h = psi_c.step
    i0 = int(np.floor(img[:, 0].min() / h))
    i1 = int(np.ceil(img[:, 0].max() / h))
    j0 = int(np.floor(img[:, 1].min() / h))
    j1 = int(np.ceil(img[:, 1].max() / h))
    tx = h * np.arange(i0, i1 + 1)
    ty = h * np.arange(j0, j1 + 1)
    t = np.stack(np.meshgrid(tx, ty, indexing="ij"), axis=-1)
    values = bilinear(psi_c, t @ sm.T.astype(float))
    support = ((float(img[:, 0].min()), float(img[:, 0].max())),
               (float(img[:, 1].min()), float(img[:, 1].max())))
    meta = dict(psi_c.meta or {})
    return SampledField(origin=(tx[0], ty[0]), step=h, values=values,
                        label=label, support_box=support, meta=meta)


@dataclass(frozen=True, eq=False)
class WaveletSystem:
    """Everything the pipeline produces for one dilation matrix."""

    a0: np.ndarray
    reduction: Reduction
    ld: LatticeData
    h: FilterCoeffs
    phi: SampledField
    psi_c: SampledField
    psi: SampledField
    params: SynthesisParams

    @property
    def canonical(self) -> np.ndarray:
        return self.reduction.canonical

    @property
    def index(self) -> int:
        return self.reduction.index

    @property
    def evaluator(self) -> FilterEvaluator:
        return FilterEvaluator(h=self.h, q=self.ld.q)


def build_system(a0, n0: int, solver_opts: SolverOptions | None = None,
                 synth_params: SynthesisParams | None = None,
                 h: FilterCoeffs | None = None) -> WaveletSystem:
    """Full pipeline: reduce, solve (unless taps are supplied), synthesize.

    Raises NotReducible / NoConvergence / GridTooCoarse from the stages.
    """
    red = reduce_to_canonical(a0)
    ld = special_vectors(red.index)
    c = red.canonical
    if h is None:
        h = solve(c, n0, solver_opts)
    ev = FilterEvaluator(h=h, q=ld.q)
    params = synth_params or SynthesisParams()
    phi = synthesize_phi(ev, c, params)
    psi_c = synthesize_psi(phi, h, c, ld)
    psi = pull_back(psi_c, red.s)
    return WaveletSystem(a0=as_int_matrix(a0), reduction=red, ld=ld, h=h,
                         phi=phi, psi_c=psi_c, psi=psi, params=params)
