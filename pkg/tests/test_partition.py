import numpy as np
import pytest

from smoothschur import (
    NotDiagonalizableError,
    NotIdempotentError,
    PartitionError,
    make_commuting_T,
    make_nonselfadjoint,
    make_sharp,
    make_smooth_selfadjoint,
    matrix_function,
    op_norm,
    smoothstep,
    validate_partition,
)

from conftest import crandn


class TestValidatePartition:
    def test_projection_pair(self):
        p = validate_partition(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
        assert p.evidence.passed

    def test_complex_diagonal_identity(self):
        # 2^2 + (i sqrt(3))^2 = 1 and 0 + 1 = 1; diagonals commute
        chi = np.diag([2.0, 0.0]).astype(complex)
        chibar = np.diag([1j * np.sqrt(3), 1.0])
        p = validate_partition(chi, chibar)
        assert p.evidence.passed

    def test_unity_violation(self):
        with pytest.raises(PartitionError, match="unity"):
            validate_partition(np.diag([1.0, 0.0]), np.diag([1.0, 1.0]))

    def test_zero_chi_rejected(self):
        with pytest.raises(PartitionError, match="zero"):
            validate_partition(np.zeros((2, 2)), np.eye(2))

    def test_noncommuting_rejected(self):
        chi = np.array([[0.5, 0.5], [0.5, 0.5]])
        chibar_good = np.eye(2) - chi
        bad = chibar_good + 1e-3 * np.array([[0.0, 1.0], [-1.0, 0.0]])
        with pytest.raises(PartitionError):
            validate_partition(chi, bad)


class TestMakeSharp:
    def test_diagonal_projection(self):
        p = make_sharp(np.diag([1.0, 1.0, 0.0]))
        assert np.allclose(p.chibar, np.diag([0.0, 0.0, 1.0]))

    def test_rank_one_projector(self):
        P = 0.5 * np.ones((2, 2))
        assert op_norm(P @ P - P) < 1e-15  # idempotent by direct arithmetic
        p = make_sharp(P)
        assert np.allclose(p.chibar, 0.5 * np.array([[1.0, -1.0], [-1.0, 1.0]]))

    def test_not_idempotent(self):
        with pytest.raises(NotIdempotentError):
            make_sharp(np.diag([1.0, 0.5]))

    def test_sharp_extras(self):
        rng = np.random.default_rng(5)
        Q, _ = np.linalg.qr(crandn(rng, 5, 5))
        P = Q[:, :2] @ Q[:, :2].conj().T
        p = make_sharp(P)
        assert op_norm(p.chi @ p.chi - p.chi) < 1e-12
        assert op_norm(p.chi @ p.chibar) < 1e-12


class TestMakeSmooth:
    def test_endpoint_values(self):
        f = lambda w: smoothstep(np.real(w))
        p = make_smooth_selfadjoint(np.diag([0.0, 1.0]), f)
        assert np.allclose(p.chi, np.diag([1.0, 0.0]), atol=1e-14)
        assert np.allclose(p.chibar, np.diag([0.0, 1.0]), atol=1e-14)

    def test_pythagorean_scalar(self):
        p = make_smooth_selfadjoint(np.array([[0.5]]), lambda w: 0.6 * np.ones_like(np.real(w)))
        assert p.chi == pytest.approx(np.array([[0.6]]))
        assert p.chibar == pytest.approx(np.array([[0.8]]))

    def test_degenerate_eigenvalue(self):
        # oracle: full eigen-decomposition functional calculus
        rng = np.random.default_rng(7)
        Q, _ = np.linalg.qr(crandn(rng, 4, 4))
        lam = np.array([0.3, 0.3, 0.3, 0.8])
        Hf = (Q * lam) @ Q.conj().T
        Hf = (Hf + Hf.conj().T) / 2
        f = lambda w: smoothstep(np.real(w))
        p = make_smooth_selfadjoint(Hf, f)
        w, v = np.linalg.eigh(Hf)
        oracle = (v * f(w)) @ v.conj().T
        assert op_norm(p.chi - oracle) < 1e-12

    def test_hermitian_and_bounded(self):
        rng = np.random.default_rng(11)
        Q, _ = np.linalg.qr(crandn(rng, 6, 6))
        Hf = (Q * rng.uniform(0, 1, 6)) @ Q.conj().T
        Hf = (Hf + Hf.conj().T) / 2
        p = make_smooth_selfadjoint(Hf, lambda w: smoothstep(np.real(w)))
        assert op_norm(p.chi - p.chi.conj().T) < 1e-12
        evals = np.linalg.eigvalsh(p.chi)
        assert evals.min() >= -1e-12 and evals.max() <= 1 + 1e-12


class TestMakeNonselfadjoint:
    def test_zero_chi_rejected(self):
        with pytest.raises(PartitionError):
            make_nonselfadjoint(np.diag([0.0, 0.0]), lambda w: w)

    def test_hyperbolic_values(self):
        a, b = 0.7, -0.4
        p = make_nonselfadjoint(np.diag([a, b]), lambda w: 1j * w)
        expected_chi = np.diag([1j * np.sinh(a), 1j * np.sinh(b)])
        assert np.allclose(p.chi, expected_chi)
        assert op_norm(p.chi - p.chi.conj().T) > 0.1  # genuinely non-Hermitian

    def test_triangular_generator(self):
        A = np.array([[1.0, 1.0], [0.0, 2.0]])
        p = make_nonselfadjoint(A, lambda w: w)
        assert abs(p.chi[1, 0]) < 1e-12 and abs(p.chibar[1, 0]) < 1e-12
        unity = p.chi @ p.chi + p.chibar @ p.chibar - np.eye(2)
        assert op_norm(unity) < 1e-12

    def test_jordan_block_rejected(self):
        A = np.array([[1.0, 1.0], [0.0, 1.0]])  # defective
        with pytest.raises(NotDiagonalizableError):
            make_nonselfadjoint(A, lambda w: w + 0.5)


class TestMakeCommutingT:
    def test_identity_function(self):
        T = make_commuting_T(np.diag([0.0, 1.0]), lambda w: w)
        assert np.allclose(T, np.diag([0.0, 1.0]))

    def test_shift(self):
        gen = np.diag([0.2, 0.9])
        T = make_commuting_T(gen, lambda w: w - 0.5)
        assert np.allclose(T, gen - 0.5 * np.eye(2))

    def test_polynomial_commutes_with_partition(self):
        rng = np.random.default_rng(13)
        Q, _ = np.linalg.qr(crandn(rng, 5, 5))
        V = Q @ (np.eye(5) + 0.3 * crandn(rng, 5, 5) / 5)
        a = rng.uniform(0.3, 1.0, 5) + 0.05j * rng.uniform(-1, 1, 5)
        A = (V * a) @ np.linalg.inv(V)
        p = make_nonselfadjoint(A, lambda w: w)
        T = make_commuting_T(A, lambda w: w**2 + 1)
        # oracle: polynomial evaluated directly on the matrix
        assert op_norm(T - (A @ A + np.eye(5))) < 1e-9 * op_norm(T)
        for c in (p.chi, p.chibar):
            assert op_norm(c @ T - T @ c) <= 1e-9 * op_norm(c) * op_norm(T)


def test_matrix_function_hermitian_route():
    rng = np.random.default_rng(17)
    Q, _ = np.linalg.qr(crandn(rng, 4, 4))
    H = (Q * np.array([1.0, 2.0, 3.0, 4.0])) @ Q.conj().T
    H = (H + H.conj().T) / 2
    S = matrix_function(H, np.sqrt)
    assert op_norm(S @ S - H) < 1e-12 * op_norm(H)


def test_smoothstep_shape():
    assert smoothstep(-1.0) == 1.0
    assert smoothstep(0.0) == 1.0
    assert smoothstep(1.0) == 0.0
    assert smoothstep(2.0) == 0.0
    assert smoothstep(0.5) == pytest.approx(0.5)
