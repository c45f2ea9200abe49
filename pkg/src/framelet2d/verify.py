"""Numerical certificates for the frame identities of a built system.

Inner products <f, D^j T_l atom> are Riemann sums on the test function's own
grid: f contributes its exact stored samples, and the atom is read off by
bilinear interpolation at A^j t - l.  Integer translates shift atom node
indices by exact integers, so the fractional interpolation weights are
computed once per level and shared across every l.

A second, independent quadrature (`_level_uspace`) integrates in atom
coordinates instead — exact atom samples, f evaluated analytically, all
translates strided out of one FFT cross-correlation.  It exists so the test
suite can check the production route against a structurally different one.

Everything downstream (frame ratio, the L_J energies, telescoping fields,
and the split-integral identity) is assembled from those coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.signal import fftconvolve

from .errors import DegenerateInput
from .fields import SampledField, bilinear, gather4, index_frac
from .filters import FilterEvaluator, eval_m0_grid, max_abs_m0, qmf_residual
from .lattice import adjugate, as_int_matrix, det
from .lawton import residuals
from .scaling import ghat_truncated, refinement_residual, support_radius
from .wavelet import WaveletSystem

__all__ = [
    "TestFunction",
    "VerificationReport",
    "click_residual",
    "coefficient",
    "frame_ratio",
    "from_field",
    "gaussian_bump",
    "indicator_box",
    "level_coefficients",
    "l_j",
    "make_report",
    "plancherel_mismatch",
    "standard_suite",
    "telescoping_residual",
    "trig_windowed",
]


# ---------------------------------------------------------------------------
# test functions


@dataclass(frozen=True, eq=False)
class TestFunction:
    """A compactly supported f with both analytic and sampled realizations."""

    __test__ = False  # not a pytest class, despite the name

    kind: str
    params: dict
    fn: object  # callable (..., 2) -> values
    field: SampledField

    def norm2(self) -> float:
        return self.field.norm2()


def _realize(kind, params, fn, step, half_width) -> TestFunction:
    n = int(round(2 * half_width / step))
    ax = -half_width + step * np.arange(n)
    t = np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1)
    values = np.asarray(fn(t), dtype=complex)
    fld = SampledField(origin=(ax[0], ax[0]), step=step, values=values,
                       label=f"f_{kind}")
    return TestFunction(kind=kind, params=params, fn=fn, field=fld)


def gaussian_bump(center=(0.11, -0.07), sigma=0.33, step=1 / 32,
                  half_width=2.5) -> TestFunction:
    cx, cy = center

    def fn(t):
        t = np.asarray(t, dtype=float)
        r2 = (t[..., 0] - cx) ** 2 + (t[..., 1] - cy) ** 2
        return np.exp(-r2 / (2 * sigma * sigma))

    return _realize("gaussian_bump", {"center": center, "sigma": sigma},
                    fn, step, half_width)


def indicator_box(center=(1 / 64, 1 / 64), side=1.25, step=1 / 32,
                  half_width=2.5) -> TestFunction:
    """Axis-aligned indicator; default edges fall midway between grid nodes,
    making every grid sum over it exact."""
    cx, cy = center
    half = side / 2

    def fn(t):
        t = np.asarray(t, dtype=float)
        inside = ((np.abs(t[..., 0] - cx) < half)
                  & (np.abs(t[..., 1] - cy) < half))
        return inside.astype(float)

    return _realize("indicator_box", {"center": center, "side": side},
                    fn, step, half_width)


def trig_windowed(center=(-0.05, 0.08), freq=(1.7, 2.3), radius=1.9,
                  step=1 / 32, half_width=2.5) -> TestFunction:
    """cos(freq . t) under a raised-cosine window, nearly zero-mean."""
    cx, cy = center
    wx, wy = freq

    def fn(t):
        t = np.asarray(t, dtype=float)
        r = np.sqrt((t[..., 0] - cx) ** 2 + (t[..., 1] - cy) ** 2) / radius
        window = np.where(r < 1, np.cos(np.pi * np.minimum(r, 1.0) / 2) ** 2, 0.0)
        return np.cos(wx * t[..., 0] + wy * t[..., 1]) * window

    return _realize("trig_windowed",
                    {"center": center, "freq": freq, "radius": radius},
                    fn, step, half_width)


def standard_suite(step=1 / 32) -> list[TestFunction]:
    """The three fixed test functions used by every report."""
    return [gaussian_bump(step=step), indicator_box(step=step),
            trig_windowed(step=step)]


def from_field(fld: SampledField, kind: str = "field") -> TestFunction:
    """Wrap an existing sampled field as a test function; the analytic
    callable falls back to bilinear interpolation of the samples."""
    return TestFunction(kind=kind, params={"label": fld.label},
                        fn=lambda pts: bilinear(fld, pts), field=fld)


# ---------------------------------------------------------------------------
# coefficients


def _int_inv_power(a, j: int) -> np.ndarray:
    """A^{-j} as an exact-dyadic float matrix, j >= 0."""
    am = as_int_matrix(a)
    d = det(am)
    adj_pow = np.linalg.matrix_power(adjugate(am), j)
    return adj_pow.astype(float) / float(d) ** j


def _node_index(x: float, h: float) -> int:
    return int(round(x / h))


def _power(a, j: int) -> np.ndarray:
    """A^j as an exact float matrix for either sign of j."""
    if j >= 0:
        return np.linalg.matrix_power(as_int_matrix(a), j).astype(float)
    return _int_inv_power(a, -j)


def level_coefficients(f: TestFunction, atom: SampledField, a, j: int):
    """All <f, D^j T_l atom> with support overlap at one level j.

    Returns (ells, coeffs): integer translate pairs, shape (M, 2), and the
    matching complex coefficients, shape (M,).  Quadrature is the Riemann
    sum on the test function's own grid; the atom is read by bilinear
    interpolation, with fractional weights shared across all translates.
    """
    return _level_tspace(f, atom, a, j)


def _level_uspace(f: TestFunction, atom: SampledField, a, j: int):
    """Oracle route for j >= 0: change variables to atom coordinates and
    take every translate out of one FFT cross-correlation.

    Integrates on the atom's grid (f evaluated analytically), so it is an
    independent quadrature against which the production route is checked.
    """
    am = as_int_matrix(a)
    h = atom.step
    stride = _node_index(1.0, h)
    if not math.isclose(stride * h, 1.0):
        raise ValueError(f"atom step {h} does not divide 1; translates miss nodes")
    # bounding box of A^j supp(f), node aligned
    apow = np.linalg.matrix_power(am, j)
    (fx0, fx1), (fy0, fy1) = f.field.box()
    corners = np.array([(x, y) for x in (fx0, fx1) for y in (fy0, fy1)])
    img = corners @ apow.T.astype(float)
    wi0 = int(np.floor(img[:, 0].min() / h)) - 1
    wi1 = int(np.ceil(img[:, 0].max() / h)) + 1
    wj0 = int(np.floor(img[:, 1].min() / h)) - 1
    wj1 = int(np.ceil(img[:, 1].max() / h)) + 1
    vx = h * np.arange(wi0, wi1 + 1)
    vy = h * np.arange(wj0, wj1 + 1)
    v = np.stack(np.meshgrid(vx, vy, indexing="ij"), axis=-1)
    w = np.asarray(f.fn(v @ _int_inv_power(am, j).T), dtype=complex)

    # cross-correlation X[d] = sum_u W[u + d] conj(atom[u]) via convolution
    # with the doubly reversed conjugate kernel
    kern = np.conj(atom.values)[::-1, ::-1]
    x = fftconvolve(w, kern, mode="full")
    # output index 0 corresponds to node offset (W start) - (atom end)
    pi0 = _node_index(atom.origin[0], h)
    pj0 = _node_index(atom.origin[1], h)
    pi1 = pi0 + atom.values.shape[0] - 1
    pj1 = pj0 + atom.values.shape[1] - 1
    d0x = wi0 - pi1
    d0y = wj0 - pj1
    # translates l = d * h with d a multiple of the stride
    lx0 = -(-d0x // stride)          # ceil division
    lx1 = (wi1 - pi0) // stride
    ly0 = -(-d0y // stride)
    ly1 = (wj1 - pj0) // stride
    if lx1 < lx0 or ly1 < ly0:
        return np.empty((0, 2), dtype=np.int64), np.empty(0, dtype=complex)
    sx0, sx1 = lx0 * stride - d0x, lx1 * stride - d0x
    sy0, sy1 = ly0 * stride - d0y, ly1 * stride - d0y
    sel = x[sx0:sx1 + 1:stride, sy0:sy1 + 1:stride]
    scale = 2.0 ** (-j / 2) * h * h
    ex, ey = np.meshgrid(np.arange(lx0, lx1 + 1), np.arange(ly0, ly1 + 1),
                         indexing="ij")
    ells = np.column_stack([ex.ravel(), ey.ravel()]).astype(np.int64)
    return ells, (scale * sel).ravel()


def _level_tspace(f: TestFunction, atom: SampledField, a, j: int):
    """Production route, valid for any j: integrate on f's grid with
    node-shift sharing across translates."""
    h = atom.step
    stride = _node_index(1.0, h)
    apow = _power(a, j)
    p = _grid_points(f.field) @ apow.T
    i0, j0, fx, fy = index_frac(atom, p)
    # translate range: l in A^j supp(f) - supp(atom), node aligned
    (fx0, fx1), (fy0, fy1) = f.field.box()
    corners = np.array([(x, y) for x in (fx0, fx1) for y in (fy0, fy1)])
    img = corners @ apow.T
    (ax0, ax1), (ay0, ay1) = atom.box()
    lx0 = int(np.floor(img[:, 0].min() - ax1)) - 1
    lx1 = int(np.ceil(img[:, 0].max() - ax0)) + 1
    ly0 = int(np.floor(img[:, 1].min() - ay1)) - 1
    ly1 = int(np.ceil(img[:, 1].max() - ay0)) + 1
    fvals = np.conj(f.field.values)  # conj(f) once; result conjugated back
    scale = 2.0 ** (j / 2) * f.field.step ** 2
    ells, coeffs = [], []
    for ex in range(lx0, lx1 + 1):
        ii = i0 - ex * stride
        for ey in range(ly0, ly1 + 1):
            jj = j0 - ey * stride
            vals = gather4(atom.values, ii, jj, fx, fy)
            acc = np.sum(fvals * vals)
            ells.append((ex, ey))
            coeffs.append(scale * np.conj(acc))
    return (np.asarray(ells, dtype=np.int64),
            np.asarray(coeffs, dtype=complex))


def _grid_points(fld: SampledField) -> np.ndarray:
    nx, ny = fld.values.shape
    tx = fld.origin[0] + fld.step * np.arange(nx)
    ty = fld.origin[1] + fld.step * np.arange(ny)
    return np.stack(np.meshgrid(tx, ty, indexing="ij"), axis=-1)


def coefficient(f: TestFunction, atom: SampledField, a, j: int, ell) -> complex:
    """Single <f, D^j T_ell atom> by the same quadrature as the bulk route."""
    ex, ey = int(ell[0]), int(ell[1])
    p = _grid_points(f.field) @ _power(a, j).T
    i0, j0, fx, fy = index_frac(atom, p)
    stride = _node_index(1.0, atom.step)
    vals = gather4(atom.values, i0 - ex * stride, j0 - ey * stride, fx, fy)
    s = np.sum(f.field.values * np.conj(vals))
    return complex(2.0 ** (j / 2) * f.field.step ** 2 * s)


# ---------------------------------------------------------------------------
# aggregates


def l_j(f: TestFunction, phi: SampledField, a, j: int) -> float:
    """L_j(f) = sum_l |<f, D^j T_l phi>|^2 over overlapping translates."""
    _, coeffs = level_coefficients(f, phi, a, j)
    return float(np.sum(np.abs(coeffs) ** 2))


def frame_ratio(f: TestFunction, psi: SampledField, a,
                j_range: tuple[int, int] = (-6, 6)) -> float:
    """(sum_{j, l} |<f, D^j T_l psi>|^2) / ||f||^2 over the level window."""
    n2 = f.norm2() ** 2
    if n2 == 0:
        raise DegenerateInput("test function has zero grid norm")
    total = 0.0
    for j in range(j_range[0], j_range[1] + 1):
        _, coeffs = level_coefficients(f, psi, a, j)
        total += float(np.sum(np.abs(coeffs) ** 2))
    return total / n2


def _reconstruction_field(f: TestFunction, atom: SampledField, a, j: int
                          ) -> np.ndarray:
    """sum_l <f, D^j T_l atom> (D^j T_l atom)(t) sampled on f's grid."""
    ells, coeffs = level_coefficients(f, atom, a, j)
    p = _grid_points(f.field) @ _power(a, j).T
    i0, j0, fx, fy = index_frac(atom, p)
    stride = _node_index(1.0, atom.step)
    amp = 2.0 ** (j / 2)
    out = np.zeros(f.field.values.shape, dtype=complex)
    for (ex, ey), c in zip(ells, coeffs):
        if c == 0:
            continue
        vals = gather4(atom.values, i0 - int(ex) * stride, j0 - int(ey) * stride,
                       fx, fy)
        out += (amp * c) * vals
    return out


def telescoping_residual(f: TestFunction, system: WaveletSystem, j: int) -> float:
    """|| I_{j+1} - I_j - F_j ||_grid / ||f||_grid with the three
    reconstruction fields assembled on f's grid."""
    c = system.canonical
    n = f.norm2()
    if n == 0:
        return 0.0  # every coefficient vanishes with f
    i_next = _reconstruction_field(f, system.phi, c, j + 1)
    i_cur = _reconstruction_field(f, system.phi, c, j)
    f_cur = _reconstruction_field(f, system.psi_c, c, j)
    diff = i_next - i_cur - f_cur
    return float(np.sqrt(np.sum(np.abs(diff) ** 2)) * f.field.step / n)


def plancherel_mismatch(f: TestFunction) -> float:
    """Relative gap between time- and frequency-domain grid norms."""
    v = f.field.values
    n = v.shape[0]
    vhat = np.fft.fft2(v) / n  # unitary scaling for a square grid
    t_norm = np.sqrt(np.sum(np.abs(v) ** 2))
    f_norm = np.sqrt(np.sum(np.abs(vhat) ** 2))
    if t_norm == 0:
        raise DegenerateInput("test function has zero grid norm")
    return float(abs(t_norm - f_norm) / t_norm)


# ---------------------------------------------------------------------------
# the split-integral identity


def click_residual(c, q, trig_poly, quad_n: int = 512) -> float:
    """| int_{A^T G} h - int_G h - int_{G + pi q} h | for G = [-pi, pi]^2.

    The parallelogram integral maps through A^T with Jacobian |det| = 2.
    Midpoint quadrature; exact for Fourier modes of order below quad_n.
    """
    if quad_n < 64:
        raise ValueError(f"quad_n must be >= 64, got {quad_n}")
    at = as_int_matrix(c).T.astype(float)
    ax = -np.pi + (np.arange(quad_n) + 0.5) * (2 * np.pi / quad_n)
    x = np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1)
    helper = _as_callable(trig_poly)
    cell = (2 * np.pi / quad_n) ** 2
    i_par = 2.0 * np.sum(helper(x @ at.T)) * cell
    i_sq = np.sum(helper(x)) * cell
    i_shift = np.sum(helper(x + np.pi * np.asarray(q, dtype=float))) * cell
    return float(abs(i_par - i_sq - i_shift))


def _as_callable(trig_poly):
    if callable(trig_poly):
        return trig_poly
    modes = sorted((tuple(int(c) for c in k), complex(v))
                   for k, v in dict(trig_poly).items())

    def fn(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1], dtype=complex)
        for (k1, k2), v in modes:
            out += v * np.exp(1j * (k1 * x[..., 0] + k2 * x[..., 1]))
        return out

    return fn


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True, eq=False)
class VerificationReport:
    checks: dict = dc_field(default_factory=dict)
    metadata: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks.values())

    def to_json_dict(self) -> dict:
        return {"checks": self.checks, "metadata": self.metadata,
                "passed": self.passed}


def _check(value, threshold, kind="max"):
    value = float(value)
    if kind == "max":
        ok = value <= threshold
    elif kind == "min":
        ok = value >= threshold
    else:
        raise ValueError(kind)
    return {"value": value, "threshold": float(threshold), "kind": kind,
            "pass": bool(ok)}


def make_report(system: WaveletSystem, tfs=None,
                levels: tuple[int, int] = (-6, 6)) -> VerificationReport:
    """Run every certified identity on one system and collect pass flags."""
    c = system.canonical
    ev = system.evaluator
    tfs = standard_suite() if tfs is None else tfs
    checks = {}

    r = residuals(system.h, c)
    checks["lawton_max_abs"] = _check(r.max_abs, 1e-12)
    m0_0 = complex(eval_m0_grid(ev, np.zeros(2)))
    checks["m0_at_zero_err"] = _check(abs(m0_0 - 1.0), 1e-12)
    checks["qmf_residual"] = _check(qmf_residual(ev, 256), 1e-10)
    checks["max_abs_m0_excess"] = _check(max(0.0, max_abs_m0(ev, 256) - 1.0), 1e-10)

    ghat0 = ghat_truncated(ev, c, (0.0, 0.0), system.params.j)
    checks["ghat0_err"] = _check(abs(ghat0 - 1 / (2 * np.pi)), 1e-14)
    checks["phi_integral_err"] = _check(abs(system.phi.integral() - 1.0), 1e-2)
    peak = float(np.max(np.abs(system.phi.values)))
    imag_ratio = float(np.max(np.abs(system.phi.values.imag)) / peak) if peak else 0.0
    checks["phi_imag_ratio"] = _check(imag_ratio, 1e-8)

    b = support_radius(system.h.n0, c)
    pts = _grid_points(system.phi)
    outside = np.hypot(pts[..., 0], pts[..., 1]) > b
    total_mass = float(np.sum(np.abs(system.phi.values) ** 2))
    tail = float(np.sum(np.abs(system.phi.values[outside]) ** 2) / total_mass) \
        if total_mass else 0.0
    checks["phi_tail_mass"] = _check(tail, 1e-3)

    checks["refinement_residual"] = _check(
        refinement_residual(system.phi, system.h, c), 5e-2)
    checks["psi_integral"] = _check(abs(system.psi_c.integral()), 1e-2)

    norm_c = system.psi_c.norm2()
    norm_p = system.psi.norm2()
    checks["pull_back_l2_err"] = _check(
        abs(norm_p - norm_c) / norm_c if norm_c else 0.0, 1e-2)

    for f in tfs:
        checks[f"plancherel_{f.kind}"] = _check(plancherel_mismatch(f), 1e-6)
        ratio = frame_ratio(f, system.psi_c, c, levels)
        entry = _check(ratio, 0.95, kind="min")
        entry["pass"] = bool(0.95 <= ratio <= 1.0 + 1e-3)
        entry["upper"] = 1.0 + 1e-3
        checks[f"frame_ratio_{f.kind}"] = entry

    f0 = tfs[0]
    for j in (-1, 0, 1):
        checks[f"telescoping_j{j}"] = _check(
            telescoping_residual(f0, system, j), 5e-2)
    lj_cache = {j: l_j(f0, system.phi, c, j) for j in (-8, 0, 1, 6)}
    _, psi_coeffs = level_coefficients(f0, system.psi_c, c, 0)
    fsum = float(np.sum(np.abs(psi_coeffs) ** 2))
    n2 = f0.norm2() ** 2
    checks["scalar_telescoping_j0"] = _check(
        abs(lj_cache[1] - lj_cache[0] - fsum) / n2, 5e-2)
    checks["l_minus8_ratio"] = _check(lj_cache[-8] / n2, 0.01)
    checks["l_6_ratio"] = _check(lj_cache[6] / n2, 0.95, kind="min")
    phi_n2 = system.phi.norm2() ** 2
    bound = (2 * b + 1) ** 2 * phi_n2 * n2
    worst = max(v / bound for v in lj_cache.values())
    checks["lemma_bound_ratio"] = _check(worst, 1.0 + 1e-2)

    q = system.ld.q
    checks["click_const"] = _check(click_residual(c, q, {(0, 0): 1.0}), 1e-6)
    checks["click_cos_x1"] = _check(
        click_residual(c, q, {(1, 0): 0.5, (-1, 0): 0.5}), 1e-6)
    checks["click_m0_sq"] = _check(
        click_residual(c, q, lambda x: np.abs(eval_m0_grid(ev, x)) ** 2), 1e-6)

    meta = {
        "levels": list(levels),
        "grid_n": system.params.grid_n,
        "product_depth": system.params.j,
        "freq_half_width": system.params.grid_extent,
        "support_radius": b,
        "canonical_index": system.index,
    }
    return VerificationReport(checks=checks, metadata=meta)
