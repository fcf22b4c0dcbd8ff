"""The projective representation sigma of Sp(2g, Z) on C^(2^g) and the signature mod 8."""
from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from .dyadic import DyadicGaussianScalar, ProjectiveUnitaryMatrix, UnitaryMatrix
from .symplectic import (
    DA,
    UB,
    GeneratorWord,
    JGen,
    SymplecticIntegerMatrix,
    Token,
    TokenError,
    as_symplectic,
    decompose,
    determinant,
    inverse_unimodular,
    k_member,
)


class SurfaceRelationError(ValueError):
    """The monodromy does not satisfy the surface-group relation."""


class InvariantViolation(RuntimeError):
    """An internal invariant failed (e.g. a commutator product that is not +-I)."""


_I_POWERS = ((1, 0), (0, 1), (-1, 0), (0, -1))


def _bits(n: int, g: int) -> np.ndarray:
    return np.array([(n >> j) & 1 for j in range(g)], dtype=object)


def sigma_UB(B) -> UnitaryMatrix:
    """Diagonal ``e_w -> i^(w^t B w) e_w``."""
    B = np.array([[int(x) for x in row] for row in B], dtype=object)
    if B.shape[0] != B.shape[1] or not np.array_equal(B, B.T):
        raise TokenError("B must be square and symmetric")
    g = B.shape[0]
    dim = 1 << g
    re = np.zeros((dim, dim), dtype=np.int64)
    im = np.zeros((dim, dim), dtype=np.int64)
    for n in range(dim):
        w = _bits(n, g)
        re[n, n], im[n, n] = _I_POWERS[int(w @ B @ w) % 4]
    return UnitaryMatrix(g, re, im, 0)


def sigma_DA(A) -> UnitaryMatrix:
    """``e_w -> sqrt(det A) e_{(A^t)^-1 w}`` with ``sqrt(1) = 1`` and ``sqrt(-1) = i``."""
    A = np.array([[int(x) for x in row] for row in A], dtype=object)
    det = determinant(A)
    if det not in (1, -1):
        raise TokenError("A must have determinant +-1")
    g = A.shape[0]
    dim = 1 << g
    target = inverse_unimodular(A).T
    re = np.zeros((dim, dim), dtype=np.int64)
    im = np.zeros((dim, dim), dtype=np.int64)
    for n in range(dim):
        image = target @ _bits(n, g)
        m = sum((int(x) % 2) << j for j, x in enumerate(image))
        if det == 1:
            re[m, n] = 1
        else:
            im[m, n] = 1
    return UnitaryMatrix(g, re, im, 0)


@lru_cache(maxsize=None)
def sigma_J(g: int) -> UnitaryMatrix:
    """``e_w -> (1 - i)^-g sum_w' (-1)^(w.w') e_w'``; note ``(1 - i)^-1 = (1 + i)/2``."""
    if g < 1:
        raise ValueError("g must be positive")
    dim = 1 << g
    a, b = 1, 0
    for _ in range(g):
        a, b = a - b, a + b
    signs = np.empty((dim, dim), dtype=np.int64)
    for r in range(dim):
        for c in range(dim):
            signs[r, c] = -1 if bin(r & c).count("1") % 2 else 1
    return UnitaryMatrix(g, signs * a, signs * b, g)


@lru_cache(maxsize=4096)
def sigma_token(token: Token) -> UnitaryMatrix:
    if isinstance(token, UB):
        return sigma_UB(token.B)
    if isinstance(token, DA):
        return sigma_DA(token.A)
    if isinstance(token, JGen):
        return sigma_J(token.g)
    raise TokenError(f"unknown token {token!r}")


def sigma_word(word: GeneratorWord) -> UnitaryMatrix:
    """One lift of ``sigma`` of the word's product (the sign depends on the word)."""
    out = UnitaryMatrix.identity(word.g)
    for t in word.tokens:
        out = out @ sigma_token(t)
    return out


def sigma_lift(X) -> UnitaryMatrix:
    """A unitary matrix representing ``sigma(X)``; only defined up to sign."""
    return sigma_word(decompose(as_symplectic(X)))


def sigma(X) -> ProjectiveUnitaryMatrix:
    return ProjectiveUnitaryMatrix(sigma_lift(X))


def kernel_check(X) -> bool:
    """Whether ``sigma(X)`` is trivial in U(2^g)/{+-I}."""
    return sigma(X).is_identity()


def kernel_agrees(X) -> bool:
    return kernel_check(X) == k_member(as_symplectic(X))


def group_commutator(U: UnitaryMatrix, V: UnitaryMatrix) -> UnitaryMatrix:
    return U @ V @ U.inverse() @ V.inverse()


def commutator_product(pairs: Sequence[tuple[UnitaryMatrix, UnitaryMatrix]]) -> UnitaryMatrix:
    """``prod [U_i, V_i]``; flipping the sign of any input leaves it unchanged."""
    if not pairs:
        raise ValueError("need at least one pair")
    g = pairs[0][0].g
    out = UnitaryMatrix.identity(g)
    for U, V in pairs:
        if U.g != g or V.g != g:
            raise ValueError("dimension mismatch")
        out = out @ group_commutator(U, V)
    return out


def _symplectic_commutator(a: SymplecticIntegerMatrix, b: SymplecticIntegerMatrix) -> SymplecticIntegerMatrix:
    return a @ b @ a.inverse() @ b.inverse()


def validate_monodromy(pairs) -> list[tuple[SymplecticIntegerMatrix, SymplecticIntegerMatrix]]:
    out = [(as_symplectic(a), as_symplectic(b)) for a, b in pairs]
    if not out:
        raise SurfaceRelationError("monodromy needs at least one handle")
    g = out[0][0].g
    if any(a.g != g or b.g != g for a, b in out):
        raise ValueError("all monodromy matrices must have the same rank")
    total = SymplecticIntegerMatrix.identity(g)
    for a, b in out:
        total = total @ _symplectic_commutator(a, b)
    if not total.is_identity():
        raise SurfaceRelationError("product of commutators is not the identity; not a surface-bundle monodromy")
    return out


def signature_mod8(monodromy) -> int:
    """Signature mod 8 (0 or 4) of a surface bundle from its symplectic monodromy.

    ``monodromy`` is a list of pairs ``(a_i, b_i)`` with ``prod [a_i, b_i] = I``
    holding exactly in Sp(2g, Z).  Each matrix is lifted through ``sigma`` with
    an arbitrary sign; the product of commutators is then ``+I`` (residue 0)
    or ``-I`` (residue 4).
    """
    pairs = validate_monodromy(monodromy)
    lifted = [(sigma_lift(a), sigma_lift(b)) for a, b in pairs]
    product = commutator_product(lifted)
    if product.is_identity():
        return 0
    if (-product).is_identity():
        return 4
    raise InvariantViolation("commutator product of the lifted monodromy is not +-I")


def scalar_i() -> DyadicGaussianScalar:
    return DyadicGaussianScalar(0, 1)
