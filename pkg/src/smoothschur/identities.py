"""Numerical verification of the algebraic identities of the map.

The six basic identities relate H, F, Q, Q_sharp and the zero-extended
inverses; they hold for every valid pair, Hermitian partition or not.  Each
residual is normalized by 1 + the product of the factor norms so reports are
comparable across wildly scaled instances.
"""
from __future__ import annotations

import numpy as np

from .operator_core import DEFAULT_TOL, Tolerances, op_norm
from .pairs import FeshbachData, FeshbachPair
from .report import ResidualReport


def _rel_residual(lhs, rhs, *factors) -> float:
    scale = 1.0
    for f in factors:
        scale *= op_norm(f)
    return op_norm(lhs - rhs) / (1.0 + scale)


def verify_basics(
    pair: FeshbachPair, data: FeshbachData, tol: Tolerances = DEFAULT_TOL
) -> ResidualReport:
    """Check the six basic identities.

      left_annihilator   (chibar Hbar^-1 chibar) H  = 1 - Q chi
      right_annihilator  H (chibar Hbar^-1 chibar)  = 1 - chi Q_sharp
      left_effective     (chibar T^-1 chibar) F     = 1 - chi Q
      right_effective    F (chibar T^-1 chibar)     = 1 - Q_sharp chi
      intertwine_left    H Q                        = chi F
      intertwine_right   Q_sharp H                  = F chi
    """
    H, chi, chibar = pair.H, pair.chi, pair.chibar
    G = chibar @ pair.H_chibar_inv @ chibar
    Tb = chibar @ pair.T_inv_bar @ chibar
    F, Q, Qs = data.F, data.Q, data.Q_sharp
    eye = np.eye(pair.dim)

    report = ResidualReport()
    checks = [
        ("basics/left_annihilator", G @ H, eye - Q @ chi, (G, H)),
        ("basics/right_annihilator", H @ G, eye - chi @ Qs, (H, G)),
        ("basics/left_effective", Tb @ F, eye - chi @ Q, (Tb, F)),
        ("basics/right_effective", F @ Tb, eye - Qs @ chi, (F, Tb)),
        ("basics/intertwine_left", H @ Q, chi @ F, (H, Q)),
        ("basics/intertwine_right", Qs @ H, F @ chi, (Qs, H)),
    ]
    for label, lhs, rhs, factors in checks:
        report.add(label, _rel_residual(lhs, rhs, *factors), tol.residual_rel)
    return report


def verify_resolvent(pair: FeshbachPair, tol: Tolerances = DEFAULT_TOL) -> ResidualReport:
    """Check chibar (T^-1 - Hbar^-1) chibar = chibar T^-1 W_chibar Hbar^-1 chibar."""
    chibar = pair.chibar
    lhs = chibar @ (pair.T_inv_bar - pair.H_chibar_inv) @ chibar
    rhs = chibar @ pair.T_inv_bar @ pair.W_chibar @ pair.H_chibar_inv @ chibar
    residual = _rel_residual(lhs, rhs, pair.T_inv_bar, pair.W_chibar, pair.H_chibar_inv)
    report = ResidualReport()
    report.add("resolvent/identity", residual, tol.residual_rel)
    return report


def verify_alt_remark(
    pair: FeshbachPair, data: FeshbachData, tol: Tolerances = DEFAULT_TOL
) -> ResidualReport:
    """Check chibar^2 F = T (1 - chi Q) and that ran(1 - chi Q) lies in ran(chibar)."""
    chi, chibar, T = pair.chi, pair.chibar, pair.T
    F, Q = data.F, data.Q
    eye = np.eye(pair.dim)
    M = eye - chi @ Q

    report = ResidualReport()
    residual = _rel_residual(chibar @ chibar @ F, T @ M, chibar, chibar, F)
    report.add("alt/effective_factorization", residual, tol.residual_rel)

    P = pair.ran_chibar.projector()
    containment = op_norm((eye - P) @ M) / (1.0 + op_norm(M))
    report.add("alt/range_containment", containment, tol.residual_rel)
    return report
