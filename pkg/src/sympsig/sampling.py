"""Seeded random elements of Sp(2g, Z) and of its subgroups, and random monodromies.

Uniform sampling of an infinite group is not possible, so everything here is a
bounded-length random word; the seed makes every sample reproducible.
"""
from __future__ import annotations

import numpy as np

from .symplectic import (
    DA,
    UB,
    GeneratorWord,
    JGen,
    SymplecticIntegerMatrix,
    Token,
    evaluate_word,
    gamma2_generators,
    make_DA,
    make_LB,
    make_UB,
)

Monodromy = list[tuple[SymplecticIntegerMatrix, SymplecticIntegerMatrix]]

DEFAULT_SEED = 20240607


def rng_from(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(DEFAULT_SEED if seed is None else seed)


def _random_symmetric(g: int, rng: np.random.Generator, lo: int = -2, hi: int = 2) -> np.ndarray:
    m = rng.integers(lo, hi + 1, size=(g, g))
    return np.triu(m) + np.triu(m, 1).T


def _random_unimodular(g: int, rng: np.random.Generator, steps: int = 3) -> np.ndarray:
    A = np.eye(g, dtype=np.int64)
    for _ in range(steps):
        kind = rng.integers(3)
        if kind == 0 and g >= 2:
            i, j = rng.choice(g, size=2, replace=False)
            E = np.eye(g, dtype=np.int64)
            E[i, j] = rng.choice([-1, 1])
            A = A @ E
        elif kind == 1 and g >= 2:
            p = rng.permutation(g)
            A = A[p]
        else:
            i = rng.integers(g)
            A[i] = -A[i]
    return A


def random_token(g: int, rng: np.random.Generator, even_diagonal: bool = False) -> Token:
    kind = rng.integers(3)
    if kind == 0:
        B = _random_symmetric(g, rng)
        if even_diagonal:
            B[np.diag_indices(g)] *= 2
        return UB(B)
    if kind == 1:
        return DA(_random_unimodular(g, rng))
    return JGen(g)


def random_word(g: int, length: int, rng, even_diagonal: bool = False) -> GeneratorWord:
    rng = rng_from(rng)
    return GeneratorWord(g, tuple(random_token(g, rng, even_diagonal) for _ in range(length)))


def random_symplectic(g: int, rng, length: int = 8) -> SymplecticIntegerMatrix:
    return evaluate_word(random_word(g, length, rng))


def random_theta_member(g: int, rng, length: int = 6) -> SymplecticIntegerMatrix:
    """Word in UB (even diagonal), DA and J; each token lies in the theta subgroup."""
    return evaluate_word(random_word(g, length, rng, even_diagonal=True))


def _k_seed(g: int, rng: np.random.Generator) -> SymplecticIntegerMatrix:
    kind = rng.integers(4)
    if kind == 0:
        S = _random_symmetric(g, rng)
        S[np.diag_indices(g)] *= 2
        return make_UB(2 * S)
    if kind == 1:
        S = _random_symmetric(g, rng)
        S[np.diag_indices(g)] *= 2
        return make_LB(2 * S)
    if kind == 2 and g >= 2:
        i, j = rng.choice(g, size=2, replace=False)
        A = np.eye(g, dtype=np.int64)
        A[i, j] = 2 * int(rng.choice([-1, 1]))
        return make_DA(A)
    # a pair of sign flips has even trace part
    A = np.eye(g, dtype=np.int64)
    if g >= 2:
        i, j = rng.choice(g, size=2, replace=False)
        A[i, i] = A[j, j] = -1
    else:
        return make_UB(np.array([[4]]))
    return make_DA(A)


def random_k_member(g: int, rng, length: int = 2, conj_length: int = 3) -> SymplecticIntegerMatrix:
    """Product of conjugates of simple elements of the kernel subgroup (it is normal)."""
    rng = rng_from(rng)
    out = SymplecticIntegerMatrix.identity(g)
    for _ in range(length):
        P = random_symplectic(g, rng, conj_length)
        out = out @ P @ _k_seed(g, rng) @ P.inverse()
    return out


def random_gamma2_not_k(g: int, rng, conj_length: int = 3) -> SymplecticIntegerMatrix:
    """An element of Gamma(2g, 2) outside the kernel subgroup.

    The generators of ``gamma2_generators`` map to a basis of the quotient, so a
    product over a nonempty subset is never in the kernel; conjugation keeps it out.
    """
    rng = rng_from(rng)
    gens = gamma2_generators(g)
    mask = rng.integers(2, size=len(gens))
    if not mask.any():
        mask[rng.integers(len(gens))] = 1
    out = SymplecticIntegerMatrix.identity(g)
    for keep, X in zip(mask, gens):
        if keep:
            out = out @ X
    out = out @ random_k_member(g, rng, length=1, conj_length=2)
    P = random_symplectic(g, rng, conj_length)
    return P @ out @ P.inverse()


def _random_unimodular_mod2_identity(g: int, rng: np.random.Generator, steps: int = 3) -> np.ndarray:
    A = np.eye(g, dtype=np.int64)
    for _ in range(steps):
        if g >= 2 and rng.integers(2):
            i, j = rng.choice(g, size=2, replace=False)
            E = np.eye(g, dtype=np.int64)
            E[i, j] = 2 * int(rng.choice([-1, 1]))
            A = A @ E
        else:
            A[rng.integers(g)] *= -1
    return A


def random_remark3_member(g: int, rng, length: int = 5) -> SymplecticIntegerMatrix:
    """Element of the subgroup {A = I mod 2, C = 0 mod 2, Diag(C) = 0 mod 4}.

    The set cut out by the two conditions on C alone is not closed under
    products once g >= 2, so samples come from this subgroup inside it; for
    g = 1 the subgroup is all of Gamma_0(4).  Words use UB(B), DA(A) with
    A = I mod 2 and LB(S) with S even and Diag(S) divisible by 4.
    """
    rng = rng_from(rng)
    out = SymplecticIntegerMatrix.identity(g)
    for _ in range(length):
        kind = rng.integers(3)
        if kind == 0:
            X = make_UB(_random_symmetric(g, rng))
        elif kind == 1:
            X = make_DA(_random_unimodular_mod2_identity(g, rng))
        else:
            S = _random_symmetric(g, rng, -1, 1)
            S[np.diag_indices(g)] *= 2
            X = make_LB(2 * S)
        out = out @ X
    return out


def random_mixed(g: int, rng) -> SymplecticIntegerMatrix:
    """Equal mix of kernel members, Gamma(2g,2) non-members and random words."""
    rng = rng_from(rng)
    kind = rng.integers(3)
    if kind == 0:
        return random_k_member(g, rng)
    if kind == 1:
        return random_gamma2_not_k(g, rng)
    return random_symplectic(g, rng)


# -- monodromies ---------------------------------------------------------------------


def _commuting_pair(sample, rng: np.random.Generator):
    X = sample()
    if rng.integers(2):
        return X, X @ X
    return X, X.inverse() @ X.inverse() @ X.inverse()


def random_monodromy(g: int, rng, sample, handles: int | None = None) -> Monodromy:
    """Monodromy whose matrices all come from ``sample()`` (plus products/inverses).

    Built from commuting pairs ``(a, a^k)`` and handle blocks ``(a, b), (b, a)``,
    both of which satisfy the surface relation exactly; the whole list is then
    conjugated by one more sampled element.
    """
    rng = rng_from(rng)
    h_target = int(rng.integers(1, 4)) if handles is None else handles
    pairs: Monodromy = []
    while len(pairs) < h_target:
        if h_target - len(pairs) >= 2 and rng.integers(2):
            a, b = sample(), sample()
            pairs += [(a, b), (b, a)]
        else:
            pairs.append(_commuting_pair(sample, rng))
    P = sample()
    Pinv = P.inverse()
    return [(P @ a @ Pinv, P @ b @ Pinv) for a, b in pairs]


def random_theta_monodromy(g: int, rng, handles: int | None = None) -> Monodromy:
    rng = rng_from(rng)
    return random_monodromy(g, rng, lambda: random_theta_member(g, rng, 4), handles)


def random_remark3_monodromy(g: int, rng, handles: int | None = None) -> Monodromy:
    rng = rng_from(rng)
    return random_monodromy(g, rng, lambda: random_remark3_member(g, rng, 4), handles)


def trivial_monodromy(g: int, handles: int = 1) -> Monodromy:
    I = SymplecticIntegerMatrix.identity(g)
    return [(I, I)] * handles


def conjugate_monodromy(monodromy: Monodromy, P: SymplecticIntegerMatrix) -> Monodromy:
    Pinv = P.inverse()
    return [(P @ a @ Pinv, P @ b @ Pinv) for a, b in monodromy]


def rotate_handles(monodromy: Monodromy, k: int = 1) -> Monodromy:
    """Cyclic shift of the handle pairs; the relation is preserved by conjugation."""
    k %= len(monodromy)
    return list(monodromy[k:]) + list(monodromy[:k])
