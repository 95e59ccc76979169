"""Shrink an eigenproblem in stages while preserving invertibility.

Each stage compresses the current effective operator onto the range of its
chi factor, halving the dimension. Because every stage preserves
invertibility (and kernels map isomorphically), the final small operator is
singular exactly when the original H is.

We run the chain twice on 8x8 operators: once with an invertible H, once
with a one-dimensional kernel planted in H. The reference operator is the
diagonal part of H, which commutes with every coordinate projection, so the
commutation requirement holds at every stage.
"""
import numpy as np

from smoothschur import halving_partitions, iterated_reduction, numerical_rank

rng = np.random.default_rng(11)
n = 8


def run_chain(H, label):
    T = np.diag(np.diag(H))
    parts = halving_partitions(n, 2)
    chain = iterated_reduction(H, T, parts)
    ops = [op for op, _ in chain]
    dims = [n] + [op.shape[0] for op in ops]
    print(f"{label}: dimension chain {dims}")
    final = ops[-1]
    print(f"  rank of original H: {numerical_rank(H)}/{n}")
    print(f"  rank of final {final.shape[0]}x{final.shape[0]} operator:"
          f" {numerical_rank(final)}/{final.shape[0]}")
    print(f"  smallest sv along the chain:"
          f" {[f'{np.linalg.svd(op, compute_uv=False)[-1]:.3e}' for op in ops]}")


H = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)) + 4 * np.eye(n)
run_chain(H, "invertible H")

# Plant a kernel vector supported on the coordinates every stage keeps.
v = np.zeros(n)
v[0] = 1.0
H_sing = H @ (np.eye(n) - np.outer(v, v))
run_chain(H_sing, "singular H ")
