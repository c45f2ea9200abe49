"""Quadratic tap equations for |det| = 2 dilations, and a small LM solver.

A finitely supported family {h_n} on the square [-N0, N0]^2 generates a
tight frame when the correlations along the dilated lattice vanish,

    sum_n h_n * conj(h_{n+k}) = delta_{0k}   for k in A^T Z^2,

and the taps sum to sqrt(2).  Only finitely many k can overlap the support,
so the system is finite and dense.  The solver is damped Gauss-Newton
(Levenberg-Marquardt via MINPACK) with an analytic Jacobian, a deterministic
Haar-pair start, and seeded random multi-starts tried in order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import least_squares

from .errors import InvalidN0, MismatchedFilter, NoConvergence
from .lattice import as_int_matrix, in_lattice, special_vectors

__all__ = [
    "FilterCoeffs",
    "LawtonResidual",
    "SolverOptions",
    "filter_from_json_dict",
    "filter_to_json_dict",
    "haar_pair",
    "lawton_index_set",
    "residuals",
    "solve",
    "validate",
]

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class FilterCoeffs:
    """Finitely supported taps h_n, n in [-n0, n0]^2; absent keys are zero."""

    n0: int
    coeffs: dict[tuple[int, int], complex] = field(default_factory=dict)
    validated: bool = False

    def __post_init__(self):
        if self.n0 < 1:
            raise InvalidN0(f"support half-width must be >= 1, got {self.n0}")
        for n in self.coeffs:
            if max(abs(n[0]), abs(n[1])) > self.n0:
                raise ValueError(f"tap index {n} outside [-{self.n0}, {self.n0}]^2")

    def __getitem__(self, n: tuple[int, int]) -> complex:
        return self.coeffs.get((int(n[0]), int(n[1])), 0.0 + 0.0j)

    def items_sorted(self):
        """Taps in (i, j)-lexicographic index order."""
        return sorted(self.coeffs.items())

    def tap_sum(self) -> complex:
        return sum(v for _, v in self.items_sorted())


@dataclass(frozen=True, eq=False)
class LawtonResidual:
    """Orthogonality residuals r_k over the active set K, plus the sum residual."""

    orth: dict[tuple[int, int], complex]
    sum: complex
    max_abs: float


def lawton_index_set(c, n0: int) -> list[tuple[int, int]]:
    """K = (C^T Z^2) intersect [-2*n0, 2*n0]^2, sorted lexicographically.

    Only these k can produce nonzero overlap between h and its k-shift.
    """
    ct = as_int_matrix(c).T
    out = []
    for i in range(-2 * n0, 2 * n0 + 1):
        for j in range(-2 * n0, 2 * n0 + 1):
            if in_lattice(ct, (i, j)):
                out.append((i, j))
    return out


def residuals(h: FilterCoeffs, c) -> LawtonResidual:
    """Evaluate every active constraint of the tap system exactly.

    r_k = sum_n h_n conj(h_{n+k}) - delta_{0k} for k in K, and the
    normalization residual sum_n h_n - sqrt(2).
    """
    ks = lawton_index_set(c, h.n0)
    items = h.items_sorted()
    orth: dict[tuple[int, int], complex] = {}
    for k in ks:
        acc = 0.0 + 0.0j
        for n, v in items:
            w = h[(n[0] + k[0], n[1] + k[1])]
            if w != 0:
                acc += v * w.conjugate()
        if k == (0, 0):
            acc -= 1.0
        orth[k] = acc
    s = h.tap_sum() - SQRT2
    worst = max([abs(s)] + [abs(v) for v in orth.values()])
    return LawtonResidual(orth=orth, sum=s, max_abs=worst)


def validate(h: FilterCoeffs, c, tol: float = 1e-12) -> tuple[bool, LawtonResidual]:
    r = residuals(h, c)
    return r.max_abs <= tol, r


def haar_pair(index: int, n0: int = 1) -> FilterCoeffs:
    """The two-tap solution h_0 = h_ell = 1/sqrt(2) for canonical ``index``."""
    ell = special_vectors(index).ell
    return FilterCoeffs(n0=n0, coeffs={(0, 0): 1 / SQRT2 + 0j, ell: 1 / SQRT2 + 0j})


@dataclass(frozen=True)
class SolverOptions:
    seed: int = 0
    starts: int = 16
    max_iter: int = 200
    tol: float = 1e-12
    complex_coeffs: bool = False
    haar_start: bool = True


def _support(n0: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(-n0, n0 + 1) for j in range(-n0, n0 + 1)]


def _assemble(ks, supp, n0):
    """Precompute overlap index tables for residual and Jacobian assembly.

    For each k, pairs[(k)] lists (a, b) with supp[b] = supp[a] + k; for the
    Jacobian, left[(k)][m] = index of m + k (or -1) and right[(k)][m] = index
    of m - k (or -1).
    """
    pos = {n: i for i, n in enumerate(supp)}
    pair_tab, left_tab, right_tab = [], [], []
    for k in ks:
        pairs = []
        left = np.full(len(supp), -1, dtype=np.int64)
        right = np.full(len(supp), -1, dtype=np.int64)
        for a, n in enumerate(supp):
            shifted = (n[0] + k[0], n[1] + k[1])
            if shifted in pos:
                pairs.append((a, pos[shifted]))
                left[a] = pos[shifted]
            back = (n[0] - k[0], n[1] - k[1])
            if back in pos:
                right[a] = pos[back]
        pair_tab.append(np.array(pairs, dtype=np.int64).reshape(-1, 2))
        left_tab.append(left)
        right_tab.append(right)
    return pair_tab, left_tab, right_tab


def _real_system(ks, pair_tab, left_tab, right_tab, m):
    k0 = ks.index((0, 0))

    def fun(x):
        out = np.empty(len(ks) + 1)
        for i, pairs in enumerate(pair_tab):
            out[i] = float(np.dot(x[pairs[:, 0]], x[pairs[:, 1]])) if len(pairs) else 0.0
        out[k0] -= 1.0
        out[-1] = float(np.sum(x)) - SQRT2
        return out

    def jac(x):
        j = np.zeros((len(ks) + 1, m))
        xz = np.append(x, 0.0)  # index -1 lands on the zero pad
        for i in range(len(ks)):
            j[i, :] = xz[left_tab[i]] + xz[right_tab[i]]
        j[-1, :] = 1.0
        return j

    return fun, jac


def _complex_system(ks, pair_tab, left_tab, right_tab, m):
    """Unknowns stacked as [Re h; Im h]; each r_k contributes Re and Im rows."""
    k0 = ks.index((0, 0))
    nk = len(ks)

    def corr(x):
        z = x[:m] + 1j * x[m:]
        r = np.empty(nk, dtype=complex)
        for i, pairs in enumerate(pair_tab):
            r[i] = np.dot(z[pairs[:, 0]], np.conj(z[pairs[:, 1]])) if len(pairs) else 0.0
        r[k0] -= 1.0
        return r, z

    def fun(x):
        r, z = corr(x)
        s = np.sum(z) - SQRT2
        return np.concatenate([r.real, r.imag, [s.real, s.imag]])

    def jac(x):
        z = x[:m] + 1j * x[m:]
        zz = np.append(z, 0.0)
        j = np.zeros((2 * nk + 2, 2 * m))
        for i in range(nk):
            # d r_k / d Re h_m and / d Im h_m
            dre = np.conj(zz[left_tab[i]]) + zz[right_tab[i]]
            dim = 1j * np.conj(zz[left_tab[i]]) - 1j * zz[right_tab[i]]
            j[i, :m], j[i, m:] = dre.real, dim.real
            j[nk + i, :m], j[nk + i, m:] = dre.imag, dim.imag
        j[2 * nk, :m] = 1.0
        j[2 * nk + 1, m:] = 1.0
        return j

    return fun, jac


def _coeffs_from_vector(x, supp, n0, m, complex_coeffs):
    if complex_coeffs:
        z = x[:m] + 1j * x[m:]
    else:
        z = x.astype(complex)
    coeffs = {n: complex(z[i]) for i, n in enumerate(supp) if z[i] != 0}
    return FilterCoeffs(n0=n0, coeffs=coeffs)


def solve(c, n0: int, options: SolverOptions | None = None) -> FilterCoeffs:
    """Solve the tap system on [-n0, n0]^2 for dilation matrix ``c``.

    Tries the Haar-pair start first (when enabled and it fits the support),
    then ``options.starts`` seeded random starts in order; the first start
    whose polished result has max residual <= options.tol wins.  Raises
    NoConvergence with the best residual seen if none succeeds.
    """
    opts = options or SolverOptions()
    if n0 < 1:
        raise InvalidN0(f"support half-width must be >= 1, got {n0}")
    cm = as_int_matrix(c)
    ks = lawton_index_set(cm, n0)
    supp = _support(n0)
    m = len(supp)
    pair_tab, left_tab, right_tab = _assemble(ks, supp, n0)
    if opts.complex_coeffs:
        fun, jac = _complex_system(ks, pair_tab, left_tab, right_tab, m)
        nvar = 2 * m
    else:
        fun, jac = _real_system(ks, pair_tab, left_tab, right_tab, m)
        nvar = m

    starts: list[np.ndarray] = []
    if opts.haar_start:
        ell = None
        for cand in ((1, 0), (0, 1), (1, 1)):
            if not in_lattice(cm.T, cand):
                ell = cand
                break
        if ell is not None:
            x0 = np.zeros(nvar)
            x0[supp.index((0, 0))] = 1 / SQRT2
            x0[supp.index(ell)] = 1 / SQRT2
            starts.append(x0)
    rng = np.random.default_rng(opts.seed)
    for _ in range(opts.starts):
        starts.append(rng.normal(loc=0.0, scale=0.5, size=nvar))

    best = math.inf
    for x0 in starts:
        # a start that is already a solution is returned untouched, so the
        # exact Haar taps survive bit-for-bit
        h0 = _coeffs_from_vector(x0, supp, n0, m, opts.complex_coeffs)
        r0 = residuals(h0, cm)
        if r0.max_abs <= opts.tol:
            return replace(h0, validated=True)
        try:
            sol = least_squares(fun, x0, jac=jac, method="lm",
                                xtol=1e-15, ftol=1e-15, gtol=1e-15,
                                max_nfev=opts.max_iter * len(x0))
        except Exception:
            continue
        h = _coeffs_from_vector(sol.x, supp, n0, m, opts.complex_coeffs)
        r = residuals(h, cm)
        best = min(best, r.max_abs)
        if r.max_abs <= opts.tol:
            return replace(h, validated=True)
    raise NoConvergence(
        f"no start reached max residual <= {opts.tol:g}; best was {best:.3e}")


def filter_to_json_dict(h: FilterCoeffs, matrix) -> dict:
    """Serializable form: {"matrix": [[..]], "N0": k, "coeffs": [...]}."""
    mm = as_int_matrix(matrix)
    return {
        "matrix": [[int(mm[0, 0]), int(mm[0, 1])], [int(mm[1, 0]), int(mm[1, 1])]],
        "N0": h.n0,
        "coeffs": [
            {"n": [n[0], n[1]], "re": v.real, "im": v.imag}
            for n, v in h.items_sorted()
        ],
    }


def filter_from_json_dict(doc: dict) -> tuple[FilterCoeffs, np.ndarray]:
    try:
        matrix = as_int_matrix(doc["matrix"])
        n0 = int(doc["N0"])
        coeffs = {
            (int(e["n"][0]), int(e["n"][1])): complex(float(e["re"]), float(e["im"]))
            for e in doc["coeffs"]
        }
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise MismatchedFilter(f"malformed filter record: {exc}") from exc
    return FilterCoeffs(n0=n0, coeffs=coeffs), matrix


def load_filter(path) -> tuple[FilterCoeffs, np.ndarray]:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MismatchedFilter(f"not valid JSON: {exc}") from exc
    return filter_from_json_dict(doc)
