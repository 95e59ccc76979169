"""Dense complex matrix substrate: norms, kernels, column spaces, and
inverses of operators restricted to subspaces.

Every operator in this package is an explicit complex ndarray.  Inverses on a
subspace are materialized as full-size matrices that vanish on the orthogonal
complement, so that all later identity checks reduce to plain matrix algebra.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    NonFiniteMatrixError,
    SingularRestrictionError,
    SubspaceLeakError,
)

#: Absolute residual floor used when every operator norm involved vanishes.
ABS_FLOOR = 1e-12


@dataclass(frozen=True)
class Tolerances:
    """Shared numerical policy.

    rank_rel     relative singular-value cutoff for rank decisions
    residual_rel relative residual acceptance for identity checks
    neumann_tol  truncation threshold for geometric series terms
    """

    rank_rel: float = 1e-10
    residual_rel: float = 1e-9
    neumann_tol: float = 1e-12

    def __post_init__(self):
        for name in ("rank_rel", "residual_rel", "neumann_tol"):
            value = getattr(self, name)
            if not (value > 0):
                raise ValueError(f"{name} must be strictly positive, got {value}")


DEFAULT_TOL = Tolerances()


def as_matrix(M) -> np.ndarray:
    """Coerce to a 2-d complex array, rejecting NaN/Inf entries."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-d array, got ndim={A.ndim}")
    if A.size and not np.all(np.isfinite(A)):
        raise NonFiniteMatrixError("matrix contains NaN or Inf entries")
    return A


def op_norm(M) -> float:
    """Operator (spectral) norm: the largest singular value."""
    A = np.asarray(M, dtype=complex)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def smallest_sv(M) -> float:
    """Smallest singular value of a (possibly rectangular) matrix."""
    A = np.asarray(M, dtype=complex)
    if A.size == 0:
        return 0.0
    return float(np.linalg.svd(A, compute_uv=False)[-1])


def rel_threshold(tol: Tolerances, *norms: float) -> float:
    """Residual acceptance relative to the factor norms, with absolute floor."""
    scale = 1.0
    for n in norms:
        scale *= n
    if scale <= 0.0:
        return ABS_FLOOR
    return max(tol.residual_rel * scale, ABS_FLOOR)


@dataclass(frozen=True)
class Subspace:
    """A subspace of C^n given by an orthonormal column basis (n x k)."""

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        B = self.basis
        if B.ndim != 2 or B.shape[0] != self.ambient_dim:
            raise DimensionMismatchError(
                f"basis shape {B.shape} incompatible with ambient dim {self.ambient_dim}"
            )
        k = B.shape[1]
        if k:
            gram = B.conj().T @ B
            if op_norm(gram - np.eye(k)) > 1e-8:
                raise ValueError("basis columns are not orthonormal")

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def contains(self, vectors: np.ndarray, tol: float = 1e-8) -> bool:
        """True if every column of `vectors` lies in the subspace."""
        v = np.atleast_2d(np.asarray(vectors, dtype=complex))
        if v.shape[0] != self.ambient_dim:
            v = v.T
        residual = v - self.projector() @ v
        return op_norm(residual) <= tol * max(op_norm(v), 1.0)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, np.eye(n, dtype=complex))

    @classmethod
    def empty(cls, n: int) -> "Subspace":
        return cls(n, np.zeros((n, 0), dtype=complex))


def _fix_gauge(cols: np.ndarray) -> np.ndarray:
    """Make the first significant entry of each column real positive.

    Fixes the phase ambiguity of SVD bases so reports are reproducible.
    """
    cols = np.array(cols, dtype=complex)
    for j in range(cols.shape[1]):
        col = cols[:, j]
        mags = np.abs(col)
        top = mags.max()
        if top == 0.0:
            continue
        idx = int(np.argmax(mags > 1e-12 * top))
        pivot = col[idx]
        if pivot != 0:
            cols[:, j] = col * (abs(pivot) / pivot)
    return cols


def _rank_cutoff(s: np.ndarray, shape: tuple, tol: Tolerances) -> float:
    smax = s.max() if s.size else 0.0
    return tol.rank_rel * smax * max(shape)


def numerical_rank(M, tol: Tolerances = DEFAULT_TOL) -> int:
    A = as_matrix(M)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(s > _rank_cutoff(s, A.shape, tol)))


def kernel_basis(M, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the numerical null space of M."""
    A = as_matrix(M)
    rows, cols = A.shape
    if rows == 0 or cols == 0:
        return Subspace(cols, np.eye(cols, dtype=complex))
    _, s, vh = np.linalg.svd(A)
    cutoff = _rank_cutoff(s, A.shape, tol)
    rank = int(np.sum(s > cutoff))
    null = vh[rank:].conj().T  # cols - rank columns, padded rows of vh included
    return Subspace(cols, _fix_gauge(null))


def column_space(M, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the numerical column space of M."""
    A = as_matrix(M)
    rows, cols = A.shape
    if rows == 0 or cols == 0:
        return Subspace.empty(rows)
    u, s, _ = np.linalg.svd(A)
    cutoff = _rank_cutoff(s, A.shape, tol)
    rank = int(np.sum(s > cutoff))
    return Subspace(rows, _fix_gauge(u[:, :rank]))


def restricted_map(A, V: Subspace, tol: Tolerances = DEFAULT_TOL):
    """Coordinate representation of A on the subspace V.

    Returns (coords, leak): coords = B^H A B with B the basis of V, and
    leak = ||(1 - B B^H) A B||, the extent to which A fails to map V into V.
    """
    A = as_matrix(A)
    if A.shape[0] != A.shape[1] or A.shape[0] != V.ambient_dim:
        raise DimensionMismatchError(
            f"operator shape {A.shape} does not match ambient dim {V.ambient_dim}"
        )
    B = V.basis
    AB = A @ B
    coords = B.conj().T @ AB
    leak = op_norm(AB - B @ coords)
    return coords, leak


def restricted_inverse(A, V: Subspace, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Inverse of A restricted to V, extended by zero off V.

    Requires A to map V into V (small leak) and the compression B^H A B to be
    numerically invertible.  The result G satisfies G A v = A G v = v for
    v in V and G w = 0 for w orthogonal to V.
    """
    coords, leak = restricted_map(A, V, tol)
    threshold = rel_threshold(tol, op_norm(A))
    if leak > threshold:
        raise SubspaceLeakError(leak, threshold)
    B = V.basis
    k = V.dim
    if k == 0:
        return np.zeros((V.ambient_dim, V.ambient_dim), dtype=complex)
    s = np.linalg.svd(coords, compute_uv=False)
    cutoff = _rank_cutoff(s, coords.shape, tol)
    if s[-1] <= cutoff or s[-1] == 0.0:
        raise SingularRestrictionError(
            f"compression singular on the subspace: smallest sv {s[-1]:.3e} <= cutoff {cutoff:.3e}"
        )
    inv_coords = np.linalg.solve(coords, np.eye(k, dtype=complex))
    return B @ inv_coords @ B.conj().T
