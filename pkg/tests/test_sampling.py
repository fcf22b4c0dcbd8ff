import numpy as np
import pytest

from sympsig.sampling import (
    random_gamma2_not_k,
    random_k_member,
    random_mixed,
    random_remark3_member,
    random_remark3_monodromy,
    random_symplectic,
    random_theta_member,
    random_theta_monodromy,
    rng_from,
    rotate_handles,
    trivial_monodromy,
)
from sympsig.symplectic import gamma_member, k_member, remark3_member, theta_member
from sympsig.theta import validate_monodromy


def test_seed_reproducibility():
    a = random_symplectic(3, rng_from(5))
    b = random_symplectic(3, rng_from(5))
    assert a == b
    assert rng_from(None).integers(10**9) == rng_from(None).integers(10**9)


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_samplers_land_in_their_subgroups(g, rng):
    for _ in range(20):
        assert theta_member(random_theta_member(g, rng))
        assert k_member(random_k_member(g, rng))
        X = random_gamma2_not_k(g, rng)
        assert gamma_member(X, 2) and not k_member(X)
        assert remark3_member(random_remark3_member(g, rng))
        random_mixed(g, rng)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_monodromies_satisfy_relation(g, rng):
    for _ in range(5):
        for m in (random_theta_monodromy(g, rng), random_remark3_monodromy(g, rng)):
            validate_monodromy(m)
            assert all(theta_member(a) and theta_member(b) for a, b in m) or all(
                remark3_member(a) and remark3_member(b) for a, b in m
            )


def test_handle_count_and_rotation(rng):
    m = random_theta_monodromy(2, rng, handles=4)
    assert len(m) == 4
    r = rotate_handles(m, 5)
    assert r[0] is m[1]
    validate_monodromy(r)
    assert len(trivial_monodromy(3, 2)) == 2
