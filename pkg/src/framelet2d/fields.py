"""Uniform complex sample grids with bilinear lookup and CSV persistence.

A SampledField stores values[i, j] = F(origin + step*(i, j)) for a function
F on an axis-aligned box.  Off-grid evaluation is bilinear with zero
extension outside the box.  Grid steps in this package are negative powers
of two, so affine arguments like A@t - n with integer A, n land exactly on
nodes and the bilinear weights collapse to 0/1 — lookups are then bit-exact
gathers, with no interpolation error at all.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import MismatchedFilter

__all__ = ["SampledField", "bilinear", "csv_text", "from_csv", "gather4",
           "index_frac", "to_csv"]


@dataclass(frozen=True, eq=False)
class SampledField:
    origin: tuple[float, float]
    step: float
    values: np.ndarray  # complex, shape (nx, ny)
    label: str = ""
    support_box: tuple[tuple[float, float], tuple[float, float]] | None = None
    meta: dict | None = None

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim != 2:
            raise ValueError(f"field values must be 2-D, got shape {v.shape}")

    @property
    def dims(self) -> tuple[int, int]:
        return self.values.shape

    def box(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """((xmin, xmax), (ymin, ymax)) spanned by the sample nodes."""
        nx, ny = self.values.shape
        x0, y0 = self.origin
        return ((x0, x0 + self.step * (nx - 1)),
                (y0, y0 + self.step * (ny - 1)))

    def axis(self, k: int) -> np.ndarray:
        return self.origin[k] + self.step * np.arange(self.values.shape[k])

    def integral(self) -> complex:
        return complex(self.values.sum() * self.step ** 2)

    def norm2(self) -> float:
        """Grid L2 norm sqrt(sum |v|^2 step^2)."""
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2)) * self.step)

    def at(self, points) -> np.ndarray:
        return bilinear(self, points)


def index_frac(field: SampledField, points):
    """Split points into integer base node indices and fractional parts."""
    p = np.asarray(points, dtype=float)
    gx = (p[..., 0] - field.origin[0]) / field.step
    gy = (p[..., 1] - field.origin[1]) / field.step
    i0 = np.floor(gx).astype(np.int64)
    j0 = np.floor(gy).astype(np.int64)
    return i0, j0, gx - i0, gy - j0


def gather4(values: np.ndarray, i0, j0, fx, fy) -> np.ndarray:
    """Weighted 4-neighbor gather; out-of-range neighbors contribute zero.

    Zero weights are skipped, so points on exact nodes read back the stored
    value bit-for-bit.
    """
    nx, ny = values.shape
    out = np.zeros(np.asarray(i0).shape, dtype=complex)
    for di, dj in ((0, 0), (0, 1), (1, 0), (1, 1)):
        w = (fx if di else 1.0 - fx) * (fy if dj else 1.0 - fy)
        ii = i0 + di
        jj = j0 + dj
        ok = (w != 0) & (ii >= 0) & (ii < nx) & (jj >= 0) & (jj < ny)
        if np.any(ok):
            out[ok] += w[ok] * values[ii[ok], jj[ok]]
    return out


def bilinear(field: SampledField, points) -> np.ndarray:
    """Bilinear interpolation at points[..., 2]; zero outside the box."""
    p = np.asarray(points, dtype=float)
    scalar = p.ndim == 1
    p = np.atleast_2d(p)
    i0, j0, fx, fy = index_frac(field, p)
    out = gather4(field.values, i0, j0, fx, fy)
    return out[0] if scalar else out


def csv_text(field: SampledField) -> str:
    """Text form: four header lines, then one i,j,re,im row per sample."""
    nx, ny = field.values.shape
    buf = io.StringIO()
    buf.write(f"# label: {field.label}\n")
    buf.write(f"# origin: {field.origin[0]:.17g},{field.origin[1]:.17g}\n")
    buf.write(f"# step: {field.step:.17g}\n")
    buf.write(f"# dims: {nx},{ny}\n")
    buf.write("i,j,re,im\n")
    ii, jj = np.meshgrid(np.arange(nx), np.arange(ny), indexing="ij")
    flat = np.column_stack([ii.ravel(), jj.ravel(),
                            field.values.real.ravel(), field.values.imag.ravel()])
    np.savetxt(buf, flat, fmt="%d,%d,%.17g,%.17g", newline="\n")
    return buf.getvalue()


def to_csv(field: SampledField, path) -> None:
    """Persist the csv_text form to ``path`` with LF endings."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(csv_text(field))


def from_csv(path) -> SampledField:
    meta = {}
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    try:
        for line in lines[:4]:
            key, _, val = line.lstrip("# ").partition(": ")
            meta[key] = val
        label = meta["label"]
        ox, oy = (float(s) for s in meta["origin"].split(","))
        step = float(meta["step"])
        nx, ny = (int(s) for s in meta["dims"].split(","))
        if lines[4] != "i,j,re,im":
            raise ValueError(f"unexpected column header {lines[4]!r}")
        data = np.loadtxt(io.StringIO("\n".join(lines[5:])), delimiter=",")
        data = np.atleast_2d(data)
        values = np.zeros((nx, ny), dtype=complex)
        ii = data[:, 0].astype(np.int64)
        jj = data[:, 1].astype(np.int64)
        values[ii, jj] = data[:, 2] + 1j * data[:, 3]
    except (KeyError, ValueError, IndexError) as exc:
        raise MismatchedFilter(f"malformed field file {path}: {exc}") from exc
    return SampledField(origin=(ox, oy), step=step, values=values, label=label)
