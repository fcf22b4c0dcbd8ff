import numpy as np
import pytest

from sympsig.gf2 import NotSymplecticError, b_form, project_to_Z
from sympsig.groups import enumerate_sp_mod4, h_kernel_indices
from sympsig.sampling import (
    random_gamma2_not_k,
    random_k_member,
    random_symplectic,
    random_word,
)
from sympsig.symplectic import (
    DA,
    UB,
    DomainError,
    GeneratorWord,
    JGen,
    ModularSymplecticMatrix,
    SymplecticIntegerMatrix,
    TokenError,
    decompose,
    evaluate_word,
    gamma_member,
    igusa_member,
    k_member,
    lie_part,
    make_DA,
    make_J,
    make_LB,
    make_UB,
    q_frak,
    reduce_mod,
    remark3_member,
    theta_member,
)


def I(g):
    return SymplecticIntegerMatrix.identity(g)


def test_constructors():
    assert make_UB(np.zeros((2, 2), int)).is_identity()
    assert make_DA(np.eye(3, dtype=int)).is_identity()
    assert make_J(1).to_list() == [[0, 1], [-1, 0]]
    with pytest.raises(TokenError):
        make_UB([[0, 1], [0, 0]])
    with pytest.raises(TokenError):
        make_DA([[2, 0], [0, 1]])


def test_construction_checks_symplectic():
    with pytest.raises(NotSymplecticError):
        SymplecticIntegerMatrix([[1, 1], [1, 1]])
    with pytest.raises(NotSymplecticError):
        ModularSymplecticMatrix([[1, 1], [1, 1]], 4)


def test_big_integer_entries_stay_exact():
    X = make_UB([[10**30]]) @ make_J(1) @ make_UB([[10**30]])
    assert X.inverse() @ X == I(1)
    assert int(X.entries[0, 0]) == -(10**30)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_gamma_member(g):
    assert gamma_member(I(g), 5)
    U = make_UB(2 * np.eye(g, dtype=int))
    assert gamma_member(U, 2)
    assert not gamma_member(U, 4)
    assert not gamma_member(make_J(g), 2)
    with pytest.raises(ValueError):
        gamma_member(U, 0)


def test_igusa_and_theta():
    for N in (1, 2, 4):
        assert igusa_member(I(2), N)
    assert not theta_member(make_UB([[1, 0], [0, 0]]))
    assert igusa_member(make_UB(2 * np.array([[2, 1], [1, 0]])), 2)
    assert not igusa_member(make_UB(2 * np.array([[1, 0], [0, 0]])), 2)
    with pytest.raises(DomainError):
        igusa_member(make_J(2), 2)
    # J has A B^t = C D^t = 0, so it lies in the theta subgroup
    assert theta_member(make_J(2))


def test_k_member_examples():
    assert k_member(SymplecticIntegerMatrix([[1, 4], [0, 1]]))
    assert not k_member(SymplecticIntegerMatrix([[1, 2], [0, 1]]))
    assert not k_member(make_J(2))
    assert k_member(make_UB(4 * np.eye(3, dtype=int)) @ make_LB(4 * np.eye(3, dtype=int)))


def test_q_frak_examples():
    assert q_frak(SymplecticIntegerMatrix([[3, 4], [2, 3]])) == 1
    assert q_frak(make_UB(4 * np.eye(2, dtype=int))) == 0
    with pytest.raises(DomainError):
        q_frak(make_J(1))


@pytest.mark.parametrize("g", [1, 2, 3])
def test_q_frak_polarization(g, rng):
    for _ in range(40):
        X1, X2 = random_gamma2_not_k(g, rng), random_gamma2_not_k(g, rng)
        want = (q_frak(X1) + q_frak(X2) + b_form(lie_part(X1), lie_part(X2))) % 2
        assert q_frak(X1 @ X2) == want


@pytest.mark.parametrize("g", [1, 2, 3])
def test_q_frak_depends_on_mod4_class(g, rng):
    for _ in range(20):
        X = random_gamma2_not_k(g, rng)
        k = make_UB(4 * np.eye(g, dtype=int)) @ make_LB(4 * np.eye(g, dtype=int))
        assert q_frak(X @ k) == q_frak(X)


def test_remark3_examples():
    assert remark3_member(make_UB([[3, 1], [1, 0]]))
    assert not remark3_member(make_J(2))
    assert not remark3_member(make_LB(2 * np.eye(2, dtype=int)))
    assert remark3_member(make_LB(np.array([[4, 2], [2, 4]])))


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_k_is_normal_and_closed(g, rng):
    for _ in range(15):
        k1, k2 = random_k_member(g, rng), random_k_member(g, rng)
        P = random_symplectic(g, rng, 5)
        assert k_member(k1 @ k2)
        assert k_member(k1.inverse())
        assert k_member(P @ k1 @ P.inverse())


@pytest.mark.parametrize("g", [1, 2, 3])
def test_subgroup_chain(g, rng):
    samples = [random_k_member(g, rng) for _ in range(15)] + [random_gamma2_not_k(g, rng) for _ in range(15)]
    samples.append(make_UB(4 * np.eye(g, dtype=int)))
    for X in samples:
        if gamma_member(X, 4):
            assert k_member(X)
        if k_member(X):
            assert igusa_member(X, 2)
        if igusa_member(X, 2):
            assert gamma_member(X, 2)


@pytest.mark.parametrize("g", [1, 2])
def test_index_of_K_in_gamma2(g):
    # Gamma(2g,2)/Gamma(2g,4) is the kernel of Sp(2g,Z/4) -> Sp(2g,2)
    table = enumerate_sp_mod4(g)
    kernel = table.elements[h_kernel_indices(table)]
    assert len(kernel) == 2 ** (g * (2 * g + 1))
    fibres = {}
    for X in kernel:
        Y = SymplecticIntegerMatrix(X.astype(np.int64), g, check=False)
        z = tuple(project_to_Z(lie_part(Y)).as_vector().tolist())
        fibres[z] = fibres.get(z, 0) + 1
        assert (sum(z) == 0) == k_member(Y)
    assert len(fibres) == 2 ** (2 * g + 1)
    assert set(fibres.values()) == {len(kernel) // 2 ** (2 * g + 1)}


def test_evaluate_word_examples():
    assert evaluate_word(GeneratorWord(2)).is_identity()
    assert evaluate_word(GeneratorWord(2, (JGen(2), JGen(2)))) == -I(2)
    assert evaluate_word(GeneratorWord(2, (JGen(2),) * 4)).is_identity()
    with pytest.raises(TokenError):
        GeneratorWord(2, (JGen(1),))
    with pytest.raises(TokenError):
        DA([[2, 0], [0, 1]])
    with pytest.raises(TokenError):
        UB([[0, 1], [2, 0]])


def test_decompose_examples():
    assert len(decompose(I(3))) == 0
    B = np.array([[1, 2], [2, -3]])
    assert evaluate_word(decompose(make_UB(B))) == make_UB(B)


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_decompose_roundtrip(g, rng):
    for _ in range(50):
        X = evaluate_word(random_word(g, int(rng.integers(1, 25)), rng))
        assert evaluate_word(decompose(X)) == X


def test_decompose_large_entries():
    X = make_UB([[7, 3], [3, 5]]) @ make_J(2) @ make_DA([[5, 2], [2, 1]]) @ make_LB([[11, -4], [-4, 9]])
    for _ in range(4):
        X = X @ X
    assert max(abs(int(x)) for x in X.entries.ravel()) > 2**63
    assert evaluate_word(decompose(X)) == X


def test_reduce_mod_examples():
    assert reduce_mod(I(2), 2) == ModularSymplecticMatrix(np.eye(4, dtype=int), 2)
    Jm = reduce_mod(make_J(2), 2).entries
    assert Jm.tolist() == [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]
    assert reduce_mod(SymplecticIntegerMatrix([[3, 4], [2, 3]]), 4).entries.tolist() == [[3, 0], [2, 3]]
    with pytest.raises(ValueError):
        reduce_mod(I(1), 6)


def test_rank_zero_rejected():
    with pytest.raises(ValueError):
        SymplecticIntegerMatrix(np.zeros((0, 0), dtype=int))
