"""Walk through the effective-operator construction on a 2x2 example.

We split C^2 with the sharp partition chi = diag(1, 0), take the reference
operator T = diag(2, 3), and the full operator

    H = [[2, 1],
         [1, 3]]  (so the perturbation W = H - T is the off-diagonal coupling).

Everything below is small enough to check by hand.
"""
import numpy as np

from smoothschur import (
    Subspace,
    build_pair,
    feshbach_map,
    invert_H_via_F,
    verify_basics,
    worked_2x2,
)

np.set_printoptions(precision=6, suppress=True)

inst = worked_2x2()
print("H =\n", inst.H.real)
print("T =\n", inst.T.real)
print("chi =\n", inst.partition.chi.real)

pair = build_pair(inst.H, inst.T, inst.partition)
data = feshbach_map(pair)

# The dressed complement operator is H restricted to the chibar block:
# H_chibar = T + chibar W chibar = diag(2, 3) here, since W is purely
# off-diagonal. The effective operator on the chi block is then the
# Schur complement 2 - 1 * (1/3) * 1 = 5/3.
print("\nEffective operator F =\n", data.F.real)
print("Expected diag(5/3, 3):", np.allclose(data.F, np.diag([5 / 3, 3])))

# The auxiliary operators intertwine H and F: H Q = chi F and Q# H = F chi.
report = verify_basics(pair, data)
print("\nIdentity residuals:")
print(report.pretty())

# H is invertible, and its inverse can be rebuilt from F restricted to the
# chi block plus the complement-block inverse.
R = invert_H_via_F(pair, data, Subspace.full(2))
print("\nReconstructed H^-1 =\n", R.real)
print("H @ H^-1 =\n", (pair.H @ R).real)
