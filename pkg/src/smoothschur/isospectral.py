"""Isospectrality of the map: inverse formulas, kernel correspondence,
spectral scans, and iterated dimension reduction.

H is (numerically) invertible exactly when the effective operator F is
invertible on an admissible subspace V; the two inverses determine each
other by explicit formulas, and chi / Q are mutually inverse isomorphisms
between ker H and ker F restricted to ran(chi).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    EffectiveOperatorSingularError,
    EmptyGridError,
    OperatorSingularError,
    ReductionStageError,
    SingularRestrictionError,
    SmoothSchurError,
    SubspaceLeakError,
)
from .operator_core import (
    DEFAULT_TOL,
    Subspace,
    Tolerances,
    as_matrix,
    column_space,
    kernel_basis,
    op_norm,
    rel_threshold,
    restricted_inverse,
    restricted_map,
    smallest_sv,
)
from .pairs import FeshbachData, FeshbachPair, build_pair, feshbach_map
from .partition import Partition, make_sharp
from .report import ResidualReport


def admissible_subspace_check(
    pair: FeshbachPair, V: Subspace, tol: Tolerances = DEFAULT_TOL
) -> ResidualReport:
    """Check the subspace conditions: ran(chi) inside V, T maps V into V,
    and chibar T^-1 chibar maps V into V.

    V = full space and V = ran(chi) always satisfy these for a valid pair.
    """
    report = ResidualReport()
    chi = pair.chi
    P = V.projector()
    eye = np.eye(pair.dim)

    containment = op_norm((eye - P) @ chi) / (1.0 + op_norm(chi))
    report.add("subspace/contains_ran_chi", containment, tol.residual_rel)

    _, t_leak = restricted_map(pair.T, V, tol)
    report.add("subspace/T_invariant", t_leak, rel_threshold(tol, op_norm(pair.T)))

    Tb = pair.chibar @ pair.T_inv_bar @ pair.chibar
    _, tb_leak = restricted_map(Tb, V, tol)
    report.add("subspace/T_inv_bar_invariant", tb_leak, rel_threshold(tol, op_norm(Tb)))
    return report


def invert_H_via_F(
    pair: FeshbachPair, data: FeshbachData, V: Subspace, tol: Tolerances = DEFAULT_TOL
) -> np.ndarray:
    """Reconstruct H^{-1} from the inverse of F on V:

        H^{-1} = Q F^{-1} Q_sharp + chibar H_chibar^{-1} chibar.

    Raises EffectiveOperatorSingularError when F is not invertible on V,
    which certifies that H itself is singular.
    """
    try:
        F_inv_V = restricted_inverse(data.F, V, tol)
    except (SubspaceLeakError, SingularRestrictionError) as exc:
        raise EffectiveOperatorSingularError(
            f"effective operator not invertible on V: {exc}"
        ) from exc
    chibar = pair.chibar
    return data.Q @ F_inv_V @ data.Q_sharp + chibar @ pair.H_chibar_inv @ chibar


def invert_F_via_H(
    pair: FeshbachPair, data: FeshbachData, V: Subspace, tol: Tolerances = DEFAULT_TOL
) -> np.ndarray:
    """Reconstruct the inverse of F on V from H^{-1}:

        F^{-1} = chi H^{-1} chi + chibar T^{-1} chibar.

    Raises OperatorSingularError when H is numerically singular.
    """
    H = pair.H
    s = np.linalg.svd(H, compute_uv=False)
    cutoff = tol.rank_rel * s[0] * pair.dim if s.size else 0.0
    if s.size == 0 or s[-1] <= cutoff:
        raise OperatorSingularError(
            f"H numerically singular: smallest sv {s[-1]:.3e} <= cutoff {cutoff:.3e}"
        )
    H_inv = np.linalg.inv(H)
    chi, chibar = pair.chi, pair.chibar
    return chi @ H_inv @ chi + chibar @ pair.T_inv_bar @ chibar


@dataclass(frozen=True)
class KernelCorrespondence:
    """Comparison of ker H with ker F intersected with ran(chi)."""

    dim_ker_H: int
    dim_ker_F: int
    chi_maps_residual: float
    q_maps_residual: float
    roundtrip_residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.dim_ker_H == self.dim_ker_F and all(
            r <= self.threshold
            for r in (self.chi_maps_residual, self.q_maps_residual, self.roundtrip_residual)
        )

    def to_dict(self) -> dict:
        return {
            "dim_ker_H": self.dim_ker_H,
            "dim_ker_F": self.dim_ker_F,
            "chi_maps_residual": self.chi_maps_residual,
            "q_maps_residual": self.q_maps_residual,
            "roundtrip_residual": self.roundtrip_residual,
            "threshold": self.threshold,
            "pass": self.passed,
        }


def kernel_correspondence(
    pair: FeshbachPair,
    data: FeshbachData,
    tol: Tolerances = DEFAULT_TOL,
    threshold: float = 1e-8,
) -> KernelCorrespondence:
    """Verify that chi maps ker H onto ker F (within ran chi) and Q maps it back.

    ker F is computed inside ran(chi): vectors v = B c with F B c = 0, B an
    orthonormal basis of ran(chi).
    """
    chi, Q = pair.chi, data.Q
    ker_H = kernel_basis(pair.H, tol)

    B = column_space(chi, tol).basis
    coeffs = kernel_basis(data.F @ B, tol)
    ker_F_basis = B @ coeffs.basis  # orthonormal: B has orthonormal columns
    dim_ker_F = ker_F_basis.shape[1]

    chi_res = 0.0
    roundtrip = 0.0
    if ker_F_basis.shape[1]:
        P_F = ker_F_basis @ ker_F_basis.conj().T
    else:
        P_F = np.zeros((pair.dim, pair.dim), dtype=complex)
    if ker_H.dim:
        P_H = ker_H.basis @ ker_H.basis.conj().T
    else:
        P_H = np.zeros((pair.dim, pair.dim), dtype=complex)

    for j in range(ker_H.dim):
        v = ker_H.basis[:, j]
        cv = chi @ v
        chi_res = max(chi_res, float(np.linalg.norm(cv - P_F @ cv)))
        roundtrip = max(roundtrip, float(np.linalg.norm(Q @ cv - v)))

    q_res = 0.0
    for j in range(dim_ker_F):
        w = ker_F_basis[:, j]
        qw = Q @ w
        q_res = max(q_res, float(np.linalg.norm(qw - P_H @ qw)))
        roundtrip = max(roundtrip, float(np.linalg.norm(chi @ qw - w)))

    return KernelCorrespondence(
        dim_ker_H=ker_H.dim,
        dim_ker_F=dim_ker_F,
        chi_maps_residual=chi_res,
        q_maps_residual=q_res,
        roundtrip_residual=roundtrip,
        threshold=threshold,
    )


@dataclass
class ScanResult:
    """Grid scan of the smallest singular value of F compressed to ran(chi)."""

    grid: list
    f_smallest_sv: list
    pair_valid: list
    flagged_eigenvalues: list
    reference_eigenvalues: list

    def to_dict(self) -> dict:
        return {
            "grid": [[z.real, z.imag] for z in self.grid],
            "f_smallest_sv": self.f_smallest_sv,
            "pair_valid": self.pair_valid,
            "flagged_eigenvalues": [[z.real, z.imag] for z in self.flagged_eigenvalues],
            "reference_eigenvalues": [[z.real, z.imag] for z in self.reference_eigenvalues],
        }


def _grid_resolution(grid) -> float:
    if len(grid) < 2:
        return 1.0
    gaps = [abs(grid[i + 1] - grid[i]) for i in range(len(grid) - 1)]
    gaps = [g for g in gaps if g > 0]
    return min(gaps) if gaps else 1.0


def spectral_scan(
    H,
    T,
    partition: Partition,
    grid,
    tol: Tolerances = DEFAULT_TOL,
    flag_scale: float = 10.0,
) -> ScanResult:
    """Scan shifts lambda: wherever (H - lambda, T - lambda) is a valid pair,
    record the smallest singular value of F compressed to ran(chi).

    Eigenvalue candidates are grid points whose singular value dips below
    flag_scale * resolution * (1 + ||H||); local minima of the dip are
    flagged.  Points where the shifted pair fails validation are recorded as
    gaps (pair_valid False), not errors.
    """
    H = as_matrix(H)
    T = as_matrix(T)
    grid = [complex(z) for z in grid]
    if not grid:
        raise EmptyGridError("spectral scan requires a nonempty grid")
    n = H.shape[0]
    eye = np.eye(n)
    V = column_space(partition.chi, tol)

    svs: list[float] = []
    valid: list[bool] = []
    for lam in grid:
        try:
            pair = build_pair(H - lam * eye, T - lam * eye, partition, tol)
            data = feshbach_map(pair)
            coords, _ = restricted_map(data.F, V, tol)
            svs.append(smallest_sv(coords) if coords.size else 0.0)
            valid.append(True)
        except SmoothSchurError:
            svs.append(float("nan"))
            valid.append(False)

    resolution = _grid_resolution(grid)
    cut = flag_scale * resolution * (1.0 + op_norm(H))
    flagged = []
    for i, lam in enumerate(grid):
        if not valid[i] or not (svs[i] <= cut):
            continue
        left = svs[i - 1] if i > 0 and valid[i - 1] else None
        right = svs[i + 1] if i + 1 < len(grid) and valid[i + 1] else None
        # local minimum of the dip; strict on the left to break plateau ties
        if left is not None and not svs[i] < left:
            continue
        if right is not None and not svs[i] <= right:
            continue
        # the dip must be genuine: well below the larger finite neighbor
        finite = [x for x in (left, right) if x is not None]
        if finite and svs[i] > 0.5 * max(finite):
            continue
        flagged.append(lam)

    reference = [complex(z) for z in np.linalg.eigvals(H)]
    return ScanResult(
        grid=grid,
        f_smallest_sv=svs,
        pair_valid=valid,
        flagged_eigenvalues=flagged,
        reference_eigenvalues=reference,
    )


def iterated_reduction(H, T, partitions, tol: Tolerances = DEFAULT_TOL):
    """Iteratively compress the problem: at each stage, form the pair for the
    stage partition, apply the map, and restrict F to ran(chi).

    T is carried along by compression.  Each partition's ran(chi) must be a
    proper subspace, so dimensions strictly decrease.  Returns a list of
    (effective_operator, subspace_dim) per stage, innermost last.
    """
    H_k = as_matrix(H)
    T_k = as_matrix(T)
    stages = []
    for k, partition in enumerate(partitions):
        if partition.dim != H_k.shape[0]:
            raise ReductionStageError(
                k,
                SmoothSchurError(
                    f"partition dim {partition.dim} != operator dim {H_k.shape[0]}"
                ),
            )
        V = column_space(partition.chi, tol)
        if V.dim >= H_k.shape[0] or V.dim == 0:
            raise ReductionStageError(
                k, SmoothSchurError(f"ran(chi) dim {V.dim} is not a proper subspace")
            )
        try:
            pair = build_pair(H_k, T_k, partition, tol)
        except SmoothSchurError as exc:
            raise ReductionStageError(k, exc) from exc
        data = feshbach_map(pair)
        B = V.basis
        H_k = B.conj().T @ data.F @ B
        T_k = B.conj().T @ pair.T @ B
        stages.append((H_k, V.dim))
    return stages


def halving_projection(n: int) -> np.ndarray:
    """Coordinate projection onto the first ceil(n/2) axes; reduction helper."""
    r = (n + 1) // 2
    P = np.zeros((n, n), dtype=complex)
    P[:r, :r] = np.eye(r)
    return P


def halving_partitions(n: int, stages: int, tol: Tolerances = DEFAULT_TOL):
    """Sharp coordinate partitions that halve the dimension `stages` times."""
    parts = []
    dim = n
    for _ in range(stages):
        if dim < 2:
            break
        parts.append(make_sharp(halving_projection(dim), tol))
        dim = (dim + 1) // 2
    return parts
