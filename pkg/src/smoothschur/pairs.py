"""Feshbach pairs and the smooth Feshbach map.

A pair (H, T) for a partition (chi, chibar) must satisfy:
  (a) T commutes with chi and chibar,
  (b) T and H_chibar = T + chibar*W*chibar are invertible on ran(chibar),
  (c) chibar * H_chibar^{-1} * chibar * W * chi is bounded (automatic in
      finite dimension; its norm is recorded).

Given a valid pair, the map and its auxiliary operators are

  F       = H_chi - chi W chibar H_chibar^{-1} chibar W chi
  Q       = chi - chibar H_chibar^{-1} chibar W chi
  Q_sharp = chi - chi W chibar H_chibar^{-1} chibar

with H_chi = T + chi*W*chi.  All inverses on ran(chibar) are materialized
as full matrices vanishing off the subspace.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BlockInvertibilityError,
    CommutationError,
    ContractionError,
    DimensionMismatchError,
    SingularRestrictionError,
    SubspaceLeakError,
)
from .operator_core import (
    DEFAULT_TOL,
    Subspace,
    Tolerances,
    as_matrix,
    column_space,
    op_norm,
    rel_threshold,
    restricted_inverse,
)
from .partition import Partition
from .report import ResidualReport


@dataclass(frozen=True)
class FeshbachPair:
    """A validated pair (H, T) for a partition, with derived operators."""

    H: np.ndarray
    T: np.ndarray
    partition: Partition
    W: np.ndarray
    W_chi: np.ndarray
    W_chibar: np.ndarray
    H_chi: np.ndarray
    H_chibar: np.ndarray
    ran_chibar: Subspace
    H_chibar_inv: np.ndarray
    T_inv_bar: np.ndarray
    evidence: ResidualReport

    @property
    def dim(self) -> int:
        return self.H.shape[0]

    @property
    def chi(self) -> np.ndarray:
        return self.partition.chi

    @property
    def chibar(self) -> np.ndarray:
        return self.partition.chibar


@dataclass(frozen=True)
class FeshbachData:
    """The map F and its auxiliary operators Q and Q_sharp."""

    F: np.ndarray
    Q: np.ndarray
    Q_sharp: np.ndarray


def build_pair(H, T, partition: Partition, tol: Tolerances = DEFAULT_TOL) -> FeshbachPair:
    """Assemble and validate a pair (H, T) for the given partition."""
    H = as_matrix(H)
    T = as_matrix(T)
    n = partition.dim
    if H.shape != (n, n) or T.shape != (n, n):
        raise DimensionMismatchError(
            f"H {H.shape} / T {T.shape} incompatible with partition dim {n}"
        )
    chi, chibar = partition.chi, partition.chibar

    evidence = ResidualReport()
    evidence.extend(partition.evidence)

    # condition (a): T commutes with chi and chibar
    nT = op_norm(T)
    for label, c in (("chi", chi), ("chibar", chibar)):
        residual = op_norm(c @ T - T @ c)
        threshold = rel_threshold(tol, op_norm(c), nT)
        entry = evidence.add(f"pair/commutation_{label}_T", residual, threshold)
        if not entry.passed:
            raise CommutationError(
                f"{label} does not commute with T: residual {residual:.3e} > {threshold:.3e}"
            )

    W = H - T
    W_chi = chi @ W @ chi
    W_chibar = chibar @ W @ chibar
    H_chi = T + W_chi
    H_chibar = T + W_chibar
    ran_chibar = column_space(chibar, tol)

    # condition (b): T and H_chibar invertible on ran(chibar)
    try:
        T_inv_bar = restricted_inverse(T, ran_chibar, tol)
    except (SubspaceLeakError, SingularRestrictionError) as exc:
        raise BlockInvertibilityError(f"T not invertible on ran(chibar): {exc}") from exc
    try:
        H_chibar_inv = restricted_inverse(H_chibar, ran_chibar, tol)
    except (SubspaceLeakError, SingularRestrictionError) as exc:
        raise BlockInvertibilityError(
            f"H_chibar not invertible on ran(chibar): {exc}"
        ) from exc
    evidence.add("pair/T_invertible_on_ran_chibar", 0.0, 1.0, note="restricted inverse built")
    evidence.add("pair/H_chibar_invertible_on_ran_chibar", 0.0, 1.0, note="restricted inverse built")

    # condition (c): always finite here; record the coupling norm
    coupling = op_norm(chibar @ H_chibar_inv @ chibar @ W @ chi)
    evidence.add("pair/coupling_norm", 0.0, 1.0, note=f"automatic, norm={coupling:.6e}")

    return FeshbachPair(
        H=H,
        T=T,
        partition=partition,
        W=W,
        W_chi=W_chi,
        W_chibar=W_chibar,
        H_chi=H_chi,
        H_chibar=H_chibar,
        ran_chibar=ran_chibar,
        H_chibar_inv=H_chibar_inv,
        T_inv_bar=T_inv_bar,
        evidence=evidence,
    )


def feshbach_map(pair: FeshbachPair) -> FeshbachData:
    """Compute F, Q, and Q_sharp for a validated pair.

    The chibar factors around the zero-extended inverse are kept literal even
    though chibar*H_chibar_inv*chibar equals H_chibar_inv up to the
    zero-extension convention.
    """
    chi, chibar, W = pair.chi, pair.chibar, pair.W
    G = pair.H_chibar_inv
    cross = chibar @ G @ chibar @ W @ chi
    F = pair.H_chi - chi @ W @ cross
    Q = chi - cross
    Q_sharp = chi - chi @ W @ chibar @ G @ chibar
    return FeshbachData(F=F, Q=Q, Q_sharp=Q_sharp)


def sufficient_conditions(pair: FeshbachPair, tol: Tolerances = DEFAULT_TOL) -> ResidualReport:
    """Report the checkable sufficient conditions for pair validity.

    Commutation residuals are re-reported, and the two coupling norms
    ||T^{-1} chibar W chibar|| and ||chibar W T^{-1} chibar|| are checked
    against 1.  These conditions are sufficient, not necessary: a pair that
    passed direct validation may still fail them.
    """
    chi, chibar, T, W = pair.chi, pair.chibar, pair.T, pair.W
    report = ResidualReport()
    nT = op_norm(T)
    for label, c in (("chi", chi), ("chibar", chibar)):
        residual = op_norm(c @ T - T @ c)
        report.add(f"sufficient/commutation_{label}_T", residual, rel_threshold(tol, op_norm(c), nT))

    Tib = pair.T_inv_bar
    left = op_norm(Tib @ chibar @ W @ chibar)
    right = op_norm(chibar @ W @ Tib @ chibar)
    report.add("sufficient/contraction_left", left, 1.0, note="||T^-1 chibar W chibar|| < 1")
    report.add("sufficient/contraction_right", right, 1.0, note="||chibar W T^-1 chibar|| < 1")
    return report


@dataclass(frozen=True)
class NeumannResult:
    approx_inv: np.ndarray
    terms_used: int
    residual: float
    truncated: bool


def neumann_inverse(
    pair: FeshbachPair, max_terms: int = 200, tol: Tolerances = DEFAULT_TOL
) -> NeumannResult:
    """Invert H_chibar on ran(chibar) by the geometric series.

    Uses the factorization H_chibar = (1 + chibar W T^{-1} chibar) T on
    ran(chibar):  the approximate inverse is
    T^{-1} * sum_n (-chibar W T^{-1} chibar)^n, truncated once the term norm
    falls below neumann_tol or after max_terms terms (then flagged truncated).
    Raises ContractionError when the coupling norm is >= 1.
    """
    chibar, W = pair.chibar, pair.W
    Tib = pair.T_inv_bar
    n = pair.dim
    K = chibar @ W @ Tib @ chibar
    q = op_norm(K)
    if q >= 1.0:
        raise ContractionError(q)

    total = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    terms_used = 1
    truncated = False
    while True:
        nxt = -K @ term
        if op_norm(nxt) <= tol.neumann_tol:
            break
        if terms_used >= max_terms:
            truncated = True
            break
        total = total + nxt
        term = nxt
        terms_used += 1
    approx_inv = Tib @ total
    B = pair.ran_chibar.basis
    residual = op_norm(approx_inv @ pair.H_chibar @ B - B)
    return NeumannResult(approx_inv=approx_inv, terms_used=terms_used, residual=residual, truncated=truncated)
