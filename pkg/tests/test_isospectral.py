import numpy as np
import pytest

from smoothschur import (
    EffectiveOperatorSingularError,
    EmptyGridError,
    OperatorSingularError,
    ReductionStageError,
    Subspace,
    admissible_subspace_check,
    build_pair,
    column_space,
    feshbach_map,
    halving_partitions,
    invert_F_via_H,
    invert_H_via_F,
    iterated_reduction,
    kernel_correspondence,
    make_sharp,
    numerical_rank,
    op_norm,
    spectral_scan,
    validate_partition,
    worked_2x2,
)
from smoothschur.instances import InstanceSpec, derived_seed, generate, generate_singular

from conftest import crandn

KINDS = ("sharp", "smooth", "nonselfadjoint")


def _pair_and_data(i, base_seed=61, scale=0.3, dim=None):
    spec = InstanceSpec(
        dim=dim or (3 + i % 10),
        partition_kind=KINDS[i % 3],
        perturbation_scale=scale,
        seed=derived_seed(base_seed, i),
    )
    inst = generate(spec)
    pair = build_pair(inst.H, inst.T, inst.partition)
    return pair, feshbach_map(pair)


class TestAdmissibleSubspace:
    def test_full_space(self):
        pair, _ = _pair_and_data(0)
        rep = admissible_subspace_check(pair, Subspace.full(pair.dim))
        assert rep.passed
        assert rep.max_residual <= 1e-12

    def test_ran_chi_always_admissible(self):
        for i in range(9):
            pair, _ = _pair_and_data(i)
            rep = admissible_subspace_check(pair, column_space(pair.chi))
            assert rep.passed, rep.pretty()

    def test_bad_subspace(self):
        inst = worked_2x2()
        pair = build_pair(inst.H, inst.T, inst.partition)
        V = Subspace(2, np.array([[0.0], [1.0]], dtype=complex))
        rep = admissible_subspace_check(pair, V)
        assert rep["subspace/contains_ran_chi"].residual == pytest.approx(0.5)
        assert not rep.passed


class TestInverseFormulas:
    def test_zero_w_collapses_to_T_inverse(self):
        part = make_sharp(np.diag([1.0, 0.0]))
        T = np.diag([2.0, 3.0]).astype(complex)
        pair = build_pair(T, T, part)
        data = feshbach_map(pair)
        R = invert_H_via_F(pair, data, Subspace.full(2))
        assert np.allclose(R @ T, np.eye(2))

    def test_worked_2x2_inverse(self):
        inst = worked_2x2()
        pair = build_pair(inst.H, inst.T, inst.partition)
        data = feshbach_map(pair)
        R = invert_H_via_F(pair, data, Subspace.full(2))
        assert np.allclose(R, np.array([[3.0, -1.0], [-1.0, 2.0]]) / 5.0)

    def test_singular_H_detected_via_F(self):
        part = make_sharp(np.diag([1.0, 0.0]))
        H = np.ones((2, 2), dtype=complex)
        pair = build_pair(H, np.eye(2), part)
        data = feshbach_map(pair)
        with pytest.raises(EffectiveOperatorSingularError):
            invert_H_via_F(pair, data, column_space(pair.chi))

    def test_worked_2x2_effective_inverse(self):
        inst = worked_2x2()
        pair = build_pair(inst.H, inst.T, inst.partition)
        data = feshbach_map(pair)
        V = column_space(pair.chi)
        S = invert_F_via_H(pair, data, V)
        assert S[0, 0] == pytest.approx(3.0 / 5.0)  # = (5/3)^{-1}
        assert np.allclose(S @ data.F @ V.basis, V.basis)

    def test_singular_H_raises(self):
        part = make_sharp(np.diag([1.0, 0.0]))
        H = np.ones((2, 2), dtype=complex)
        pair = build_pair(H, np.eye(2), part)
        data = feshbach_map(pair)
        with pytest.raises(OperatorSingularError):
            invert_F_via_H(pair, data, column_space(pair.chi))

    def test_random_duality(self):
        for i in range(18):
            pair, data = _pair_and_data(i, base_seed=67)
            n = pair.dim
            for V in (Subspace.full(n), column_space(pair.chi)):
                R = invert_H_via_F(pair, data, V)
                assert op_norm(R @ pair.H - np.eye(n)) <= 1e-9 * (
                    1 + op_norm(R) * op_norm(pair.H)
                )
                assert op_norm(pair.H @ R - np.eye(n)) <= 1e-9 * (
                    1 + op_norm(R) * op_norm(pair.H)
                )
                S = invert_F_via_H(pair, data, V)
                B = V.basis
                assert op_norm(S @ data.F @ B - B) <= 1e-9 * (1 + op_norm(S) * op_norm(data.F))
                assert op_norm(B.conj().T @ data.F @ S @ B - np.eye(V.dim)) <= 1e-9 * (
                    1 + op_norm(S) * op_norm(data.F)
                )
                # S maps V into V
                leak = op_norm((np.eye(n) - V.projector()) @ S @ B)
                assert leak <= 1e-9 * (1 + op_norm(S))


class TestKernelCorrespondence:
    def test_invertible_H(self):
        pair, data = _pair_and_data(1, base_seed=71)
        kc = kernel_correspondence(pair, data)
        assert kc.dim_ker_H == 0 and kc.dim_ker_F == 0
        assert kc.passed

    def test_hand_computed_rank_one(self):
        part = make_sharp(np.diag([1.0, 0.0]))
        H = np.ones((2, 2), dtype=complex)
        pair = build_pair(H, np.eye(2), part)
        data = feshbach_map(pair)
        assert np.allclose(data.F, np.diag([0.0, 1.0]))
        assert np.allclose(data.Q, [[1.0, 0.0], [-1.0, 0.0]])
        kc = kernel_correspondence(pair, data)
        assert kc.dim_ker_H == 1 and kc.dim_ker_F == 1
        assert kc.roundtrip_residual <= 1e-14
        assert kc.passed

    def test_constructed_kernels(self):
        for i in range(20):
            kd = 1 + i % 3
            spec = InstanceSpec(
                dim=5 + i % 8,
                partition_kind=KINDS[i % 3],
                perturbation_scale=0.2,
                seed=derived_seed(73, i),
            )
            inst = generate_singular(spec, kd)
            pair = build_pair(inst.H, inst.T, inst.partition)
            data = feshbach_map(pair)
            kc = kernel_correspondence(pair, data)
            assert kc.dim_ker_H == kc.dim_ker_F == kd
            assert kc.roundtrip_residual <= 1e-8
            assert kc.passed


class TestSpectralScan:
    def test_diagonal_flags_and_gap(self):
        part = validate_partition(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
        T = np.diag([1.0, 2.0]).astype(complex)
        grid = np.linspace(0.0, 3.0, 61)  # step 0.05, contains 1.0 and 2.0
        result = spectral_scan(T, T, part, grid)
        flagged = sorted(z.real for z in result.flagged_eigenvalues)
        assert flagged == pytest.approx([1.0])  # 2.0 sits in the invalid-pair gap
        idx_gap = int(np.argmin(np.abs(np.asarray(grid) - 2.0)))
        assert not result.pair_valid[idx_gap]

    def test_worked_2x2_eigenvalues(self):
        inst = worked_2x2()
        grid = np.arange(0.0, 5.0, 0.01)
        result = spectral_scan(inst.H, inst.T, inst.partition, grid)
        eigs = sorted(z.real for z in result.reference_eigenvalues)
        assert eigs == pytest.approx([(5 - np.sqrt(5)) / 2, (5 + np.sqrt(5)) / 2])
        for e in eigs:
            assert min(abs(z - e) for z in result.flagged_eigenvalues) <= 0.01

    def test_empty_grid(self):
        inst = worked_2x2()
        with pytest.raises(EmptyGridError):
            spectral_scan(inst.H, inst.T, inst.partition, [])


class TestIteratedReduction:
    @staticmethod
    def _diag_dominant(rng, n):
        H = 6.0 * np.diag(rng.uniform(1.0, 2.0, n)).astype(complex) + crandn(rng, n, n)
        return H

    def test_single_sharp_stage_is_schur(self):
        rng = np.random.default_rng(79)
        H = self._diag_dominant(rng, 4)
        T = np.diag(np.diagonal(H))
        parts = halving_partitions(4, 1)
        stages = iterated_reduction(H, T, parts)
        assert len(stages) == 1
        eff, dim = stages[0]
        assert dim == 2
        # oracle: classic block Schur complement (T diagonal makes the
        # chibar-dressed block equal the plain lower-right block of H)
        schur = H[:2, :2] - H[:2, 2:] @ np.linalg.solve(H[2:, 2:], H[2:, :2])
        assert op_norm(eff - schur) <= 1e-10 * (1 + op_norm(schur))

    def test_two_stage_chain_preserves_invertibility(self):
        rng = np.random.default_rng(83)
        H = self._diag_dominant(rng, 8)
        T = np.diag(np.diagonal(H))
        stages = iterated_reduction(H, T, halving_partitions(8, 2))
        dims = [d for _, d in stages]
        assert dims == [4, 2]
        final, fdim = stages[-1]
        assert numerical_rank(H) == 8
        assert numerical_rank(final) == fdim  # invertible chain

    def test_singular_chain_detected(self):
        rng = np.random.default_rng(89)
        H = self._diag_dominant(rng, 8)
        T = np.diag(np.diagonal(H))
        v = np.zeros(8, dtype=complex)
        v[0] = 1.0
        # plant ker H = span(e_0); the kernel direction stays inside the kept
        # block at every halving stage, so the final operator must be singular
        H = H @ (np.eye(8) - np.outer(v, v.conj()))
        assert numerical_rank(H) < 8
        # T stays diagonal (commutes with every coordinate projection) and
        # invertible; only H carries the kernel
        stages = iterated_reduction(H, T, halving_partitions(8, 2))
        final, fdim = stages[-1]
        assert numerical_rank(final) < fdim

    def test_singular_T_stage_invalid(self):
        H = np.diag([1.0, 1.0, 0.0, 1.0]).astype(complex) + 0.1
        T = np.diag([1.0, 1.0, 0.0, 1.0]).astype(complex)  # singular on ran(chibar)
        with pytest.raises(ReductionStageError) as err:
            iterated_reduction(H, T, halving_partitions(4, 1))
        assert err.value.stage == 0

    def test_non_proper_subspace_rejected(self):
        part = validate_partition(np.eye(2), np.zeros((2, 2)) + np.diag([1e-6, 1e-6]))
        # chi = identity: ran(chi) is the full space, not a proper subspace
        H = np.diag([1.0, 2.0]).astype(complex)
        with pytest.raises(ReductionStageError):
            iterated_reduction(H, H, [part])
