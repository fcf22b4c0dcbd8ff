import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sympsig.groups import (
    ClosureOverflow,
    CosetElement,
    abelian_invariants,
    abelianization,
    center_indices,
    closure,
    complement_exists_g1,
    conjugation_matches_orthogonal_action,
    contains_minus_identity,
    derived_subgroup,
    element_orders,
    enumerate_H,
    enumerate_psp_mod4,
    enumerate_sp_f2,
    enumerate_sp_mod4,
    exceptional_isomorphism_report,
    h_kernel_indices,
    is_normal_subgroup,
    kernel_is_elementary_abelian,
    nonsplit_involution_check,
    projective_image_matches_H,
    q_z_stabilizer,
    sp_order,
    unitary_closure_E,
    unitary_closure_Htilde,
)
from sympsig.sampling import random_symplectic
from sympsig.symplectic import reduce_mod


def test_closure_of_identity():
    t = closure([np.eye(4, dtype=np.int64)], "matrix-mod-2")
    assert t.order == 1
    assert t.identity_index() == 0


def test_closure_cyclic():
    x = np.array([[1, 1], [0, 1]])
    assert closure([x], "matrix-mod-4").order == 4
    assert closure([x], "matrix-mod-2").order == 2


def test_closure_rejects_unknown_operation():
    with pytest.raises(ValueError):
        closure([np.eye(2, dtype=np.int64)], "matrix-mod-3")


def test_closure_overflow():
    with pytest.raises(ClosureOverflow) as info:
        enumerate_sp_f2.__wrapped__(2, element_bound=100)
    assert info.value.bound == 100
    assert info.value.reached > 100


def test_env_bound_is_honoured():
    code = (
        "from sympsig.groups import enumerate_sp_f2, ClosureOverflow\n"
        "try:\n    enumerate_sp_f2(2)\nexcept ClosureOverflow as e:\n    print('overflow', e.bound)\n"
    )
    out = subprocess.run(
        [sys.executable, "-c", code],
        env={"SYMPSIG_MAX_ELEMENTS": "50", "PATH": ""},
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "overflow 50"


@pytest.mark.parametrize("g, order", [(1, 6), (2, 720)])
def test_sp_f2_orders(g, order):
    assert enumerate_sp_f2(g).order == order == sp_order(g)


def test_sp_order_formula():
    assert sp_order(3) == 1451520
    assert sp_order(4) == 47377612800


@pytest.mark.parametrize("g", [1, 2])
def test_mod4_orders(g):
    sp4 = enumerate_sp_mod4(g)
    assert sp4.order == sp_order(g) * 2 ** (g * (2 * g + 1))
    assert enumerate_psp_mod4(g).order == sp4.order // 2
    assert enumerate_H(g).order == sp_order(g) * 2 ** (2 * g + 1)


@pytest.mark.parametrize(
    "g, expected",
    [(1, {"sp2": [2], "sp4": [4], "psp4": [2], "H": [4]}), (2, {"sp2": [2], "sp4": [2], "psp4": [2], "H": [2]})],
)
def test_abelianizations(g, expected):
    assert abelianization(enumerate_sp_f2(g)) == expected["sp2"]
    assert abelianization(enumerate_sp_mod4(g)) == expected["sp4"]
    assert abelianization(enumerate_psp_mod4(g)) == expected["psp4"]
    assert abelianization(enumerate_H(g)) == expected["H"]


def _orders_of(invariants):
    """Element orders of Z/n_1 x ... x Z/n_r."""
    grids = np.meshgrid(*[np.arange(n) for n in invariants], indexing="ij")
    out = np.ones(grids[0].shape, dtype=np.int64)
    for x, n in zip(grids, invariants):
        o = n // np.gcd(x, n)
        out = np.lcm(out, o)
    return out.ravel().tolist()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([2, 3, 4, 6, 8, 9, 12]), min_size=1, max_size=3))
def test_abelian_invariants_recovers_group(factors):
    got = abelian_invariants(_orders_of(factors))
    assert int(np.prod(got)) == int(np.prod(factors))
    assert sorted(_orders_of(got)) == sorted(_orders_of(factors))
    assert all(b % a == 0 for a, b in zip(got, got[1:]))


def test_abelian_invariants_trivial():
    assert abelian_invariants([1]) == []


@pytest.mark.parametrize("g", [1, 2])
def test_h_kernel(g):
    order, elementary = kernel_is_elementary_abelian(enumerate_H(g))
    assert order == 2 ** (2 * g + 1)
    assert elementary


@pytest.mark.parametrize("g", [1, 2])
def test_nonsplit(g):
    assert nonsplit_involution_check(g)


def test_nonsplit_argument_checks():
    # the identity's lifts include the identity of H, so this split trivially
    assert not nonsplit_involution_check(1, s=np.eye(2, dtype=np.int64))
    with pytest.raises(ValueError):
        nonsplit_involution_check(1, s=np.array([[1, 1], [0, 1]]) @ np.array([[1, 0], [1, 1]]))
    with pytest.raises(ValueError):
        nonsplit_involution_check(1, s=np.array([[1, 1], [1, 1]]))
    with pytest.raises(ValueError):
        nonsplit_involution_check(3)


def test_no_complement_g1():
    assert not complement_exists_g1()


@pytest.mark.parametrize("g", [1, 2])
def test_conjugation_action(g):
    H = enumerate_H(g)
    sample = np.random.default_rng(g).choice(H.order, size=40, replace=False)
    assert conjugation_matches_orthogonal_action(H, sample)


@pytest.mark.parametrize("g", [1, 2])
def test_exceptional_isomorphism(g):
    rep = exceptional_isomorphism_report(g)
    assert rep.ok
    assert len(q_z_stabilizer(g)) == sp_order(g)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_coset_elements_multiply_as_cosets(seed):
    rng = np.random.default_rng(seed)
    g = int(rng.integers(1, 3))
    X, Y = random_symplectic(g, rng, 5), random_symplectic(g, rng, 5)
    x4, y4 = reduce_mod(X, 4), reduce_mod(Y, 4)
    assert CosetElement(x4) @ CosetElement(y4) == CosetElement(reduce_mod(X @ Y, 4))
    H = enumerate_H(g)
    assert H.contains(CosetElement(x4).rep.entries[None])[0]


def test_coset_element_rejects_wrong_modulus():
    with pytest.raises(ValueError):
        CosetElement(reduce_mod(random_symplectic(1, np.random.default_rng(0)), 2))


@pytest.mark.parametrize("g, order", [(1, 16), (2, 64)])
def test_E(g, order):
    E = unitary_closure_E(g)
    assert E.order == order
    assert contains_minus_identity(E)
    center = center_indices(E)
    assert len(center) == 4
    assert max(element_orders(E, center)) == 4
    assert derived_subgroup(E).order == 2


def test_E_rank_limit():
    with pytest.raises(ValueError):
        unitary_closure_E(4)


def test_Htilde_g1():
    Ht = unitary_closure_Htilde(1)
    assert Ht.order == 2 * enumerate_H(1).order
    assert contains_minus_identity(Ht)
    assert is_normal_subgroup(Ht, unitary_closure_E(1))
    with pytest.raises(ValueError):
        unitary_closure_Htilde(3)


@pytest.mark.parametrize("g", [1, 2])
def test_projective_image(g):
    assert projective_image_matches_H(g)


def test_h_kernel_indices_are_in_kernel():
    H = enumerate_H(1)
    idx = h_kernel_indices(H)
    assert np.all(H.elements[idx] % 2 == np.eye(2, dtype=np.uint8))
