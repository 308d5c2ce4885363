"""Dense linear algebra and vector geometry used by every other module.

Everything operates on plain float64 numpy arrays: matrices are 2-D
row-major, vectors are 1-D. No function mutates its inputs, so all of
them are safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, InvalidMatrix, ShapeError, ZeroVector


def default_rcond(shape: tuple[int, ...]) -> float:
    """Relative singular-value cutoff used when the caller gives none."""
    return 1e-10 * max(shape)


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Validate and convert to a non-empty, finite, 2-D float64 array."""
    arr = np.asarray(m, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise InvalidMatrix(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidMatrix(f"{name} contains non-finite entries")
    return arr


def as_vector(v, name: str = "vector") -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ShapeError(f"{name} must be a non-empty 1-D array, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD truncated at the relative tolerance ``rcond``.

    ``u`` is rows x rank, ``sigma`` holds the kept singular values in
    descending order (all > rcond * sigma_max), ``vt`` is rank x cols.
    """

    u: np.ndarray
    sigma: np.ndarray
    vt: np.ndarray
    rcond: float

    @property
    def rank(self) -> int:
        return int(self.sigma.shape[0])

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.sigma) @ self.vt


def svd(m, rcond: float | None = None) -> SvdResult:
    """Truncated singular value decomposition of a dense matrix.

    Singular values at or below ``rcond * max(sigma)`` are dropped along
    with their singular vectors, so the factors reconstruct the matrix up
    to that truncation.
    """
    arr = as_matrix(m)
    if rcond is None:
        rcond = default_rcond(arr.shape)
    u, s, vt = np.linalg.svd(arr, full_matrices=False)
    # Descending order makes the keep set a prefix.
    k = int(np.count_nonzero(s > rcond * s[0])) if s.size and s[0] > 0.0 else 0
    return SvdResult(
        u=np.ascontiguousarray(u[:, :k]),
        sigma=s[:k].copy(),
        vt=np.ascontiguousarray(vt[:k, :]),
        rcond=float(rcond),
    )


def pseudoinverse(w, rcond: float | None = None) -> np.ndarray:
    """Moore-Penrose pseudoinverse via the truncated SVD.

    For w of shape (r, c) returns the (c, r) matrix satisfying the four
    Moore-Penrose conditions up to the truncation tolerance.
    """
    arr = as_matrix(w)
    f = svd(arr, rcond)
    if f.rank == 0:
        return np.zeros((arr.shape[1], arr.shape[0]))
    return f.vt.T @ ((1.0 / f.sigma)[:, None] * f.u.T)


def cosine(u, v) -> float:
    """cos(u, v) = <u, v> / (|u| |v|), in [-1, 1]."""
    uu = as_vector(u, "u")
    vv = as_vector(v, "v")
    if uu.shape != vv.shape:
        raise ShapeError(f"cosine needs equal lengths, got {uu.shape[0]} and {vv.shape[0]}")
    nu = float(np.linalg.norm(uu))
    nv = float(np.linalg.norm(vv))
    if nu == 0.0 or nv == 0.0:
        raise ZeroVector("cosine is undefined for a zero vector")
    return float(np.dot(uu, vv) / (nu * nv))


def project(r, s) -> np.ndarray:
    """Vector projection of r onto s: (<r, s> / <s, s>) * s."""
    rr = as_vector(r, "r")
    ss = as_vector(s, "s")
    if rr.shape != ss.shape:
        raise ShapeError(f"project needs equal lengths, got {rr.shape[0]} and {ss.shape[0]}")
    denom = float(np.dot(ss, ss))
    if denom == 0.0:
        raise ZeroVector("cannot project onto the zero vector")
    return (float(np.dot(rr, ss)) / denom) * ss


def row_cosines(h: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Row-wise cosines between two (n, d) arrays; rows with a zero side give nan."""
    hn = np.linalg.norm(h, axis=1)
    gn = np.linalg.norm(g, axis=1)
    dots = np.einsum("ij,ij->i", h, g)
    with np.errstate(invalid="ignore", divide="ignore"):
        return dots / (hn * gn)


def linear_cka(x, y) -> float:
    """Linear centered kernel alignment between two sample-by-feature matrices.

    Columns are centered, then
        cka = |Yc^T Xc|_F^2 / (|Xc^T Xc|_F * |Yc^T Yc|_F)
    which is invariant to orthogonal transforms and isotropic scaling of
    either argument and lies in [0, 1].
    """
    xa = as_matrix(x, "x")
    ya = as_matrix(y, "y")
    if xa.shape[0] != ya.shape[0]:
        raise ShapeError(f"sample counts differ: {xa.shape[0]} vs {ya.shape[0]}")
    if xa.shape[0] < 2:
        raise DegenerateInput("linear_cka needs at least 2 samples")
    xc = xa - xa.mean(axis=0)
    yc = ya - ya.mean(axis=0)
    x_self = float(np.linalg.norm(xc.T @ xc))
    y_self = float(np.linalg.norm(yc.T @ yc))
    if x_self == 0.0 or y_self == 0.0:
        raise DegenerateInput("linear_cka is undefined for zero-variance input")
    cross = float(np.linalg.norm(yc.T @ xc))
    return cross * cross / (x_self * y_self)
