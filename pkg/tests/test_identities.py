import numpy as np
import pytest

from smoothschur import (
    build_pair,
    feshbach_map,
    make_sharp,
    validate_partition,
    verify_alt_remark,
    verify_basics,
    verify_resolvent,
    worked_2x2,
)
from smoothschur.instances import InstanceSpec, derived_seed, generate

KINDS = ("sharp", "smooth", "nonselfadjoint")


def _random_pair(i, base_seed=41, scale=0.3):
    spec = InstanceSpec(
        dim=2 + i % 19,
        partition_kind=KINDS[i % 3],
        perturbation_scale=scale,
        seed=derived_seed(base_seed, i),
    )
    inst = generate(spec)
    return build_pair(inst.H, inst.T, inst.partition)


def test_zero_w_all_residuals_vanish():
    part = make_sharp(np.diag([1.0, 0.0, 0.0]))
    T = np.diag([1.0, 2.0, -1.5]).astype(complex)
    pair = build_pair(T, T, part)
    data = feshbach_map(pair)
    for rep in (verify_basics(pair, data), verify_resolvent(pair), verify_alt_remark(pair, data)):
        assert rep.max_residual <= 1e-14


def test_worked_2x2_hand_check():
    inst = worked_2x2()
    pair = build_pair(inst.H, inst.T, inst.partition)
    data = feshbach_map(pair)
    # hand check of the intertwining: H Q = [[5/3,0],[0,0]] = chi F
    assert np.allclose(pair.H @ data.Q, [[5.0 / 3.0, 0.0], [0.0, 0.0]])
    assert np.allclose(pair.chi @ data.F, [[5.0 / 3.0, 0.0], [0.0, 0.0]])
    rep = verify_basics(pair, data)
    assert rep.max_residual <= 1e-14


def test_resolvent_zero_when_w_chibar_zero():
    inst = worked_2x2()
    pair = build_pair(inst.H, inst.T, inst.partition)
    assert np.count_nonzero(pair.W) > 0
    assert np.allclose(pair.W_chibar, np.zeros((2, 2)))
    rep = verify_resolvent(pair)
    assert rep.max_residual <= 1e-15


def test_randomized_all_kinds():
    for i in range(150):
        pair = _random_pair(i)
        data = feshbach_map(pair)
        assert verify_basics(pair, data).passed
        assert verify_resolvent(pair).passed
        assert verify_alt_remark(pair, data).passed


def test_alt_range_containment_sharp():
    for i in range(10):
        spec = InstanceSpec(dim=5, partition_kind="sharp", perturbation_scale=0.3,
                            seed=derived_seed(43, i))
        inst = generate(spec)
        pair = build_pair(inst.H, inst.T, inst.partition)
        data = feshbach_map(pair)
        rep = verify_alt_remark(pair, data)
        assert rep["alt/range_containment"].residual <= 1e-12


def test_scaling_invariance():
    base = _random_pair(3)
    base_data = feshbach_map(base)
    base_residuals = {e.label: e.residual for e in verify_basics(base, base_data)}
    part = validate_partition(base.chi, base.chibar)
    for c in (10.0, 1e-3, 1j):
        pair = build_pair(c * base.H, c * base.T, part)
        data = feshbach_map(pair)
        rep = verify_basics(pair, data)
        for entry in rep:
            assert entry.passed
            assert abs(entry.residual - base_residuals[entry.label]) <= 1e-12


def test_adjoint_symmetry():
    # adjoint system swaps left and right identities
    mirror = {
        "basics/left_annihilator": "basics/right_annihilator",
        "basics/right_annihilator": "basics/left_annihilator",
        "basics/left_effective": "basics/right_effective",
        "basics/right_effective": "basics/left_effective",
        "basics/intertwine_left": "basics/intertwine_right",
        "basics/intertwine_right": "basics/intertwine_left",
    }
    for i in range(12):
        pair = _random_pair(i, base_seed=47)
        data = feshbach_map(pair)
        residuals = {e.label: e.residual for e in verify_basics(pair, data)}

        part_adj = validate_partition(pair.chi.conj().T, pair.chibar.conj().T)
        pair_adj = build_pair(pair.H.conj().T, pair.T.conj().T, part_adj)
        data_adj = feshbach_map(pair_adj)
        rep_adj = verify_basics(pair_adj, data_adj)
        for entry in rep_adj:
            assert entry.passed
            assert abs(entry.residual - residuals[mirror[entry.label]]) <= 1e-12


def test_basics_pass_whenever_pair_builds():
    # the identities are exact algebra: any pair that validates must pass
    failures = []
    for i in range(60):
        pair = _random_pair(i, base_seed=53, scale=0.45)
        data = feshbach_map(pair)
        if not verify_basics(pair, data).passed:
            failures.append(i)
    assert not failures
