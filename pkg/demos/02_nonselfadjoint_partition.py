"""Build a non-selfadjoint partition pair and verify the operator identities.

A partition pair only needs chi^2 + chibar^2 = 1 and [chi, chibar] = 0 --
neither factor has to be Hermitian, or even normal. Here we take a
diagonalizable non-normal generator A, pick an affine angle function
theta(z), and set

    chi = sin(theta(A)),   chibar = cos(theta(A))

via functional calculus. The Pythagorean identity then holds exactly as an
operator equation, and both factors commute because they are functions of
the same generator.
"""
import numpy as np

from smoothschur import (
    build_pair,
    feshbach_map,
    make_nonselfadjoint,
    validate_partition,
    verify_basics,
    verify_resolvent,
)
from smoothschur.instances import InstanceSpec, generate

np.set_printoptions(precision=4, suppress=True)

rng = np.random.default_rng(7)
n = 5

# A diagonalizable but non-normal generator: complex spectrum, skewed
# eigenvectors.
eigvals = rng.uniform(0.3, 1.2, n) + 0.1j * rng.uniform(-1, 1, n)
V = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))[0]
V = V @ (np.eye(n) + 0.3 * rng.normal(size=(n, n)))
A = V @ np.diag(eigvals) @ np.linalg.inv(V)

part = make_nonselfadjoint(A, lambda z: 0.9 * z + 0.3)
print("chi Hermitian? ", np.allclose(part.chi, part.chi.conj().T))
print("partition evidence:")
print(validate_partition(part.chi, part.chibar).evidence.pretty())

# Generated instances exercise the same construction end to end.
inst = generate(InstanceSpec(dim=8, partition_kind="nonselfadjoint",
                             perturbation_scale=0.2, seed=42))
pair = build_pair(inst.H, inst.T, inst.partition)
data = feshbach_map(pair)

print("\nIdentity residuals on a random 8x8 non-selfadjoint instance:")
print(verify_basics(pair, data).pretty())
print(verify_resolvent(pair).pretty())
