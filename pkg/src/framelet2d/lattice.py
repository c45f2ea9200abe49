"""Integer 2x2 dilation matrices and the lattice geometry they induce.

Everything in this module is exact integer arithmetic: expansiveness is
decided from the characteristic polynomial, lattice membership through the
adjugate, and canonical-form reduction by finite search over unimodular
conjugators.  The six canonical dilations (|det| = 2) and their special
vectors (coset representative ``ell``, parity vector ``q``, coset generators
mod 2) are hard-coded and cross-checked by generic constructions in the test
suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import NotReducible

__all__ = [
    "CANONICAL_FORMS",
    "LatticeData",
    "Reduction",
    "adjugate",
    "as_int_matrix",
    "as_int_vector",
    "coset_rep",
    "in_lattice",
    "is_expansive",
    "parity_vector",
    "reduce_to_canonical",
    "sigma",
    "special_vectors",
]


def as_int_matrix(m) -> np.ndarray:
    """Coerce to a 2x2 int64 array, rejecting non-integer entries."""
    a = np.asarray(m)
    if a.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {a.shape}")
    if not np.issubdtype(a.dtype, np.integer):
        r = np.rint(a)
        if not np.array_equal(r, a):
            raise ValueError("matrix entries must be integers")
        a = r
    return a.astype(np.int64)


def as_int_vector(v) -> np.ndarray:
    a = np.asarray(v)
    if a.shape != (2,):
        raise ValueError(f"expected an integer pair, got shape {a.shape}")
    if not np.issubdtype(a.dtype, np.integer):
        r = np.rint(a)
        if not np.array_equal(r, a):
            raise ValueError("vector entries must be integers")
        a = r
    return a.astype(np.int64)


#: The six canonical dilations, indexed 1..6.
CANONICAL_FORMS: dict[int, np.ndarray] = {
    1: np.array([[1, 1], [1, -1]], dtype=np.int64),
    2: np.array([[1, -3], [1, -1]], dtype=np.int64),
    3: np.array([[1, 1], [-1, 1]], dtype=np.int64),
    4: np.array([[-1, -1], [1, -1]], dtype=np.int64),
    5: np.array([[-1, 2], [-2, 2]], dtype=np.int64),
    6: np.array([[1, -2], [2, -2]], dtype=np.int64),
}


def det(m) -> int:
    a = as_int_matrix(m)
    return int(a[0, 0]) * int(a[1, 1]) - int(a[0, 1]) * int(a[1, 0])


def adjugate(m) -> np.ndarray:
    """adj(M) with M @ adj(M) == det(M) * I, exactly."""
    a = as_int_matrix(m)
    return np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]], dtype=np.int64)


def is_expansive(m) -> bool:
    """Both eigenvalues strictly outside the closed unit disk.

    Decided without floating point.  With char poly t^2 - tr*t + det:
    a complex pair has |lambda|^2 = det, and for real roots the sign
    pattern of p(1), p(-1) together with the vertex location separates
    "both outside" from every other configuration.
    """
    a = as_int_matrix(m)
    tr = int(a[0, 0] + a[1, 1])
    d = det(a)
    disc = tr * tr - 4 * d
    if disc < 0:
        return d > 1
    p_plus = 1 - tr + d   # p(1)
    p_minus = 1 + tr + d  # p(-1)
    if p_plus == 0 or p_minus == 0:
        return False  # eigenvalue at +-1
    if p_plus < 0 and p_minus < 0:
        return True   # roots straddle [-1, 1]
    # both roots on one side of the interval
    if p_plus > 0 and tr > 2:
        return True
    if p_minus > 0 and tr < -2:
        return True
    return False


def in_lattice(m, v) -> bool:
    """Is the integer vector ``v`` in m @ Z^2?  Exact adjugate test."""
    mm = as_int_matrix(m)
    vv = as_int_vector(v)
    d = det(mm)
    if d == 0:
        raise ValueError("singular matrix has no full-rank lattice")
    w = adjugate(mm) @ vv
    return int(w[0]) % d == 0 and int(w[1]) % d == 0


def sigma(c, n) -> int:
    """Coset indicator: 0 if n is in c @ Z^2, else 1."""
    return 0 if in_lattice(c, n) else 1


@dataclass(frozen=True, eq=False)
class Reduction:
    """Result of a canonical reduction: S @ A0 @ S^-1 == canonical."""

    s: np.ndarray
    index: int

    @property
    def canonical(self) -> np.ndarray:
        return CANONICAL_FORMS[self.index].copy()


@dataclass(frozen=True)
class LatticeData:
    """Special vectors attached to a canonical dilation C.

    ``ell`` generates the nontrivial coset: Z^2 = C^T Z^2 (+) (ell + C^T Z^2).
    ``q`` is the parity vector: n . q is odd exactly on the ell-coset.
    ``atq`` is C^T q, always in (2Z)^2.
    ``coset_generators`` are representatives of C^T Z^2 mod (2Z)^2.
    """

    index: int
    ell: tuple[int, int]
    q: tuple[int, int]
    atq: tuple[int, int]
    coset_generators: tuple[tuple[int, int], tuple[int, int]]


_SPECIAL = {
    1: LatticeData(1, (1, 0), (1, 1), (2, 0), ((0, 0), (1, 1))),
    2: LatticeData(2, (1, 0), (1, 1), (2, -4), ((0, 0), (1, 1))),
    3: LatticeData(3, (1, 0), (1, 1), (0, 2), ((0, 0), (1, 1))),
    4: LatticeData(4, (1, 0), (1, 1), (0, -2), ((0, 0), (1, 1))),
    5: LatticeData(5, (0, 1), (0, 1), (-2, 2), ((0, 0), (1, 0))),
    6: LatticeData(6, (0, 1), (0, 1), (2, -2), ((0, 0), (1, 0))),
}


def special_vectors(index: int) -> LatticeData:
    """Fixed table of (ell, q, coset generators) for canonical index 1..6."""
    if index not in _SPECIAL:
        raise ValueError(f"canonical index must be 1..6, got {index!r}")
    return _SPECIAL[index]


def coset_rep(at) -> tuple[int, int]:
    """Smallest representative of the nontrivial coset of at @ Z^2 in Z^2.

    Tries (1,0), (0,1), (1,1) in that order; for |det| = 2 exactly one of
    the first candidates not in the sublattice works.
    """
    for cand in ((1, 0), (0, 1), (1, 1)):
        if not in_lattice(at, cand):
            return cand
    raise ValueError("matrix does not induce an index-2 sublattice")


def parity_vector(at, ell=None) -> tuple[int, int]:
    """q in {0,1}^2 with n . q odd exactly when n lies off at @ Z^2."""
    atm = as_int_matrix(at)
    if abs(det(atm)) != 2:
        raise ValueError("parity vector requires |det| = 2")
    if ell is None:
        ell = coset_rep(atm)
    cols = [atm[:, 0], atm[:, 1]]
    for q in ((0, 1), (1, 0), (1, 1)):
        if all((int(c[0]) * q[0] + int(c[1]) * q[1]) % 2 == 0 for c in cols) \
                and (ell[0] * q[0] + ell[1] * q[1]) % 2 == 1:
            return q
    raise ValueError("no parity vector exists; lattice is not index 2")


def reduce_to_canonical(a0, max_bound: int = 8) -> Reduction:
    """Find a unimodular S with S @ A0 @ S^-1 equal to a canonical form.

    The search enumerates integer S with |entries| <= b for b = 1..max_bound
    (each round visits only matrices whose largest entry magnitude equals b),
    in lexicographic entry order, and returns the first S with |det S| = 1
    satisfying S @ A0 == C @ S for a canonical C.  The (trace, det) pair is
    a conjugation invariant and distinguishes the six canonical forms, so at
    most one target can ever match.
    """
    a = as_int_matrix(a0)
    if abs(det(a)) != 2:
        raise NotReducible(f"|det| must be 2, got det = {det(a)}")
    if not is_expansive(a):
        raise NotReducible("matrix is not expansive")
    for idx, c in CANONICAL_FORMS.items():
        if np.array_equal(a, c):
            return Reduction(s=np.eye(2, dtype=np.int64), index=idx)
    tr = int(a[0, 0] + a[1, 1])
    targets = [i for i, c in CANONICAL_FORMS.items()
               if int(c[0, 0] + c[1, 1]) == tr and det(c) == det(a)]
    if not targets:
        raise NotReducible(
            f"no canonical form shares trace {tr} and det {det(a)}")
    for bound in range(1, max_bound + 1):
        for entries in product(range(-bound, bound + 1), repeat=4):
            if max(abs(e) for e in entries) != bound:
                continue
            s00, s01, s10, s11 = entries
            if abs(s00 * s11 - s01 * s10) != 1:
                continue
            s = np.array([[s00, s01], [s10, s11]], dtype=np.int64)
            sa = s @ a
            for idx in targets:
                if np.array_equal(sa, CANONICAL_FORMS[idx] @ s):
                    return Reduction(s=s, index=idx)
    raise NotReducible(
        f"no unimodular conjugator with entries within +-{max_bound}")
