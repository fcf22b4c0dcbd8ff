"""Symplectic matrices over Z and Z/2^n, subgroup membership, and generator words.

Integer matrices are numpy object arrays of Python ints, so arithmetic is exact
at any size.  A matrix is written in g x g blocks ``[[A, B], [C, D]]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from .gf2 import BitMatrixF2, NotSymplecticError, SpLieElementF2, q_form


class TokenError(ValueError):
    pass


class DomainError(ValueError):
    """Input lies outside the subgroup on which an operation is defined."""


def _check_rank(g: int) -> None:
    if not isinstance(g, (int, np.integer)) or g < 1:
        raise ValueError(f"rank g must be a positive integer, got {g!r}")


def _as_int_array(rows) -> np.ndarray:
    arr = np.array(rows, dtype=object)
    if arr.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return np.vectorize(int, otypes=[object])(arr) if arr.size else arr


def identity_int(n: int) -> np.ndarray:
    return _as_int_array(np.eye(n, dtype=np.int64))


def j_int(g: int) -> np.ndarray:
    out = np.zeros((2 * g, 2 * g), dtype=np.int64)
    out[:g, g:] = np.eye(g, dtype=np.int64)
    out[g:, :g] = -np.eye(g, dtype=np.int64)
    return _as_int_array(out)


def determinant(M) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [[int(x) for x in row] for row in np.asarray(M, dtype=object)]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse_unimodular(M) -> np.ndarray:
    """Exact inverse of an integer matrix with determinant +-1."""
    a = [[Fraction(int(x)) for x in row] for row in np.asarray(M, dtype=object)]
    n = len(a)
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        p = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[p] = aug[p], aug[col]
        piv = aug[col][col]
        aug[col] = [x / piv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    out = [[aug[i][n + j] for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return _as_int_array([[int(x) for x in row] for row in out])


class SymplecticIntegerMatrix:
    """Element of Sp(2g, Z); ``X^t J X = J`` is checked on construction."""

    __slots__ = ("g", "entries", "_key")

    def __init__(self, entries, g: int | None = None, *, check: bool = True):
        arr = _as_int_array(entries)
        n = arr.shape[0]
        if arr.shape != (n, n) or n % 2:
            raise ValueError("expected a square matrix of even size")
        if g is None:
            g = n // 2
        _check_rank(g)
        if n != 2 * g:
            raise ValueError(f"expected a {2 * g}x{2 * g} matrix")
        arr.setflags(write=False)
        self.g = g
        self.entries = arr
        self._key = None
        if check and not self._is_symplectic():
            raise NotSymplecticError("matrix does not satisfy X^t J X = J")

    def _is_symplectic(self) -> bool:
        J = j_int(self.g)
        return bool(np.array_equal(self.entries.T @ J @ self.entries, J))

    @classmethod
    def identity(cls, g: int) -> SymplecticIntegerMatrix:
        return cls(identity_int(2 * g), g, check=False)

    @property
    def A(self) -> np.ndarray:
        return self.entries[: self.g, : self.g]

    @property
    def B(self) -> np.ndarray:
        return self.entries[: self.g, self.g :]

    @property
    def C(self) -> np.ndarray:
        return self.entries[self.g :, : self.g]

    @property
    def D(self) -> np.ndarray:
        return self.entries[self.g :, self.g :]

    def __matmul__(self, other: SymplecticIntegerMatrix) -> SymplecticIntegerMatrix:
        if self.g != other.g:
            raise ValueError("rank mismatch")
        return SymplecticIntegerMatrix(self.entries @ other.entries, self.g, check=False)

    def __neg__(self) -> SymplecticIntegerMatrix:
        return SymplecticIntegerMatrix(-self.entries, self.g, check=False)

    def inverse(self) -> SymplecticIntegerMatrix:
        J = j_int(self.g)
        return SymplecticIntegerMatrix(-(J @ self.entries.T @ J), self.g, check=False)

    def __pow__(self, n: int) -> SymplecticIntegerMatrix:
        base = self if n >= 0 else self.inverse()
        out = SymplecticIntegerMatrix.identity(self.g)
        for _ in range(abs(n)):
            out = out @ base
        return out

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.entries, identity_int(2 * self.g)))

    def to_list(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.entries]

    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.g, tuple(int(x) for x in self.entries.ravel()))
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymplecticIntegerMatrix):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"SymplecticIntegerMatrix(g={self.g}, {self.to_list()})"


class ModularSymplecticMatrix:
    """Element of Sp(2g, Z/m) for a power of two ``m``; entries are residues 0..m-1."""

    __slots__ = ("g", "modulus", "entries")

    def __init__(self, entries, modulus: int, g: int | None = None, *, check: bool = True):
        if modulus < 2 or modulus & (modulus - 1):
            raise ValueError("modulus must be 2^n with n >= 1")
        arr = np.array(entries, dtype=np.int64) % modulus
        n = arr.shape[0]
        if arr.shape != (n, n) or n % 2:
            raise ValueError("expected a square matrix of even size")
        g = n // 2 if g is None else g
        _check_rank(g)
        arr.setflags(write=False)
        self.g = g
        self.modulus = modulus
        self.entries = arr
        if check:
            J = np.array(j_int(g), dtype=np.int64)
            if not np.array_equal((arr.T @ J @ arr - J) % modulus, np.zeros_like(arr)):
                raise NotSymplecticError(f"matrix is not symplectic modulo {modulus}")

    def __matmul__(self, other: ModularSymplecticMatrix) -> ModularSymplecticMatrix:
        if (self.g, self.modulus) != (other.g, other.modulus):
            raise ValueError("rank or modulus mismatch")
        return ModularSymplecticMatrix(self.entries @ other.entries, self.modulus, self.g, check=False)

    def to_f2(self) -> BitMatrixF2:
        return BitMatrixF2.from_array(self.entries % 2)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModularSymplecticMatrix):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.modulus, self.entries.tobytes()))

    def __repr__(self) -> str:
        return f"ModularSymplecticMatrix(mod {self.modulus}, {self.entries.tolist()})"


# -- generators ----------------------------------------------------------------


def _square(m, name: str) -> np.ndarray:
    arr = _as_int_array(m)
    if arr.shape[0] != arr.shape[1]:
        raise TokenError(f"{name} must be square")
    return arr


def make_UB(B) -> SymplecticIntegerMatrix:
    B = _square(B, "B")
    if not np.array_equal(B, B.T):
        raise TokenError("B must be symmetric")
    g = B.shape[0]
    X = identity_int(2 * g)
    X[:g, g:] = B
    return SymplecticIntegerMatrix(X, g, check=False)


def make_LB(S) -> SymplecticIntegerMatrix:
    """Lower unipotent ``[[I, 0], [S, I]]`` (equal to ``J^-1 UB(-S) J``)."""
    S = _square(S, "S")
    if not np.array_equal(S, S.T):
        raise TokenError("S must be symmetric")
    g = S.shape[0]
    X = identity_int(2 * g)
    X[g:, :g] = S
    return SymplecticIntegerMatrix(X, g, check=False)


def make_DA(A) -> SymplecticIntegerMatrix:
    A = _square(A, "A")
    if determinant(A) not in (1, -1):
        raise TokenError("A must have determinant +-1")
    g = A.shape[0]
    X = identity_int(2 * g)
    X[:g, :g] = A
    X[g:, g:] = inverse_unimodular(A).T
    return SymplecticIntegerMatrix(X, g, check=False)


def make_J(g: int) -> SymplecticIntegerMatrix:
    _check_rank(g)
    return SymplecticIntegerMatrix(j_int(g), g, check=False)


def _freeze(m) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in np.asarray(m, dtype=object))


@dataclass(frozen=True)
class UB:
    B: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "B", _freeze(self.B))
        if self.B != tuple(zip(*self.B)):
            raise TokenError("UB token needs a symmetric matrix")

    @property
    def g(self) -> int:
        return len(self.B)

    def matrix(self) -> SymplecticIntegerMatrix:
        return make_UB(self.B)

    def __str__(self) -> str:
        return "UB " + ";".join(",".join(str(x) for x in row) for row in self.B)


@dataclass(frozen=True)
class DA:
    A: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "A", _freeze(self.A))
        if determinant(self.A) not in (1, -1):
            raise TokenError("DA token needs a matrix of determinant +-1")

    @property
    def g(self) -> int:
        return len(self.A)

    def matrix(self) -> SymplecticIntegerMatrix:
        return make_DA(self.A)

    def __str__(self) -> str:
        return "DA " + ";".join(",".join(str(x) for x in row) for row in self.A)


@dataclass(frozen=True)
class JGen:
    g: int

    def matrix(self) -> SymplecticIntegerMatrix:
        return make_J(self.g)

    def __str__(self) -> str:
        return "J"


Token = Union[UB, DA, JGen]


@dataclass(frozen=True)
class GeneratorWord:
    g: int
    tokens: tuple[Token, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        for t in self.tokens:
            if not isinstance(t, (UB, DA, JGen)):
                raise TokenError(f"unknown token {t!r}")
            if t.g != self.g:
                raise TokenError("token rank does not match word rank")

    def __len__(self) -> int:
        return len(self.tokens)

    def __add__(self, other: GeneratorWord) -> GeneratorWord:
        return GeneratorWord(self.g, self.tokens + other.tokens)

    def __str__(self) -> str:
        return "\n".join(str(t) for t in self.tokens)


def evaluate_word(word: GeneratorWord) -> SymplecticIntegerMatrix:
    """Exact left-to-right product of the tokens."""
    out = identity_int(2 * word.g)
    for t in word.tokens:
        out = out @ t.matrix().entries
    return SymplecticIntegerMatrix(out, word.g, check=False)


def _unit(g: int, i: int, j: int | None = None, value: int = 1) -> np.ndarray:
    m = np.zeros((g, g), dtype=np.int64)
    m[i, i if j is None else j] = value
    return m


def decompose(X: SymplecticIntegerMatrix) -> GeneratorWord:
    """Write ``X`` as a word in UB / DA / J tokens by symplectic elimination.

    Column k is driven to e_k (Euclid between x_k-type and y_k-type entries,
    then unimodular row moves), column g+k to f_k; after that the remaining
    block acts on the symplectic complement and the same step repeats.
    Every left multiplication ``L`` is recorded by the word for ``L^-1``.
    """
    g = X.g
    M = np.array(X.entries, dtype=object)
    inverse_words: list[list[Token]] = []
    neg_id = tuple(tuple(-int(i == j) for j in range(g)) for i in range(g))
    J = JGen(g)

    def ub(S: np.ndarray) -> None:
        S = _as_int_array(S)
        M[:g] += S @ M[g:]
        inverse_words.append([UB(-S)])

    def lb(S: np.ndarray) -> None:
        S = _as_int_array(S)
        M[g:] += S @ M[:g]
        # LB(S)^-1 = LB(-S) = J^-1 UB(S) J, and J^-1 = DA(-I) J
        inverse_words.append([DA(neg_id), J, UB(S), J])

    def da(A: np.ndarray) -> None:
        A = _as_int_array(A)
        Ainv = inverse_unimodular(A)
        M[:g] = A @ M[:g]
        M[g:] = Ainv.T @ M[g:]
        inverse_words.append([DA(Ainv)])

    for k in range(g):
        active = range(k, g)
        # Euclid inside each (x_i, y_i) pair of column k
        for i in active:
            while M[g + i, k] != 0:
                q = M[i, k] // M[g + i, k]
                if q:
                    ub(_unit(g, i, value=-q))
                if M[i, k] == 0:
                    ub(_unit(g, i))
                    lb(_unit(g, i, value=-1))
                    break
                q = M[g + i, k] // M[i, k]
                lb(_unit(g, i, value=-q))
        # Euclid among the x entries with elementary unimodular moves
        while True:
            nz = [i for i in active if M[i, k] != 0]
            if len(nz) <= 1:
                break
            p = min(nz, key=lambda i: abs(M[i, k]))
            for i in nz:
                if i != p:
                    q = M[i, k] // M[p, k]
                    if q:
                        E = np.eye(g, dtype=np.int64)
                        E[i, p] = -q
                        da(E)
        nz = [i for i in active if M[i, k] != 0]
        if len(nz) != 1 or abs(M[nz[0], k]) != 1:
            raise NotSymplecticError("column is not primitive; input is not symplectic")
        p = nz[0]
        if p != k:
            P = np.eye(g, dtype=np.int64)
            P[[k, p]] = P[[p, k]]
            da(P)
        if M[k, k] == -1:
            da(np.diag([-1 if i == k else 1 for i in range(g)]))
        # column g+k: first clear the x part with UB(S), then the y part with DA
        x = np.array(M[:g, g + k], dtype=object)
        y = np.array(M[g:, g + k], dtype=object)
        if any(x):
            xy = int(sum(x[i] * y[i] for i in range(g)))
            S = np.zeros((g, g), dtype=object)
            S[:, k] -= x
            S[k, :] -= x
            S[k, k] += xy
            ub(S)
        y = np.array(M[g:, g + k], dtype=object)
        if any(y[i] for i in range(g) if i != k):
            A = identity_int(g)
            for j in range(g):
                if j != k:
                    A[k, j] = y[j]
            da(A)
    if not np.array_equal(M, identity_int(2 * g)):
        raise NotSymplecticError("elimination did not reach the identity; input is not symplectic")
    tokens: list[Token] = []
    for w in inverse_words:
        tokens.extend(w)
    return GeneratorWord(g, tuple(tokens))


# -- reduction and membership ----------------------------------------------------


def reduce_mod(X: SymplecticIntegerMatrix, modulus: int) -> ModularSymplecticMatrix:
    if modulus < 2 or modulus & (modulus - 1):
        raise ValueError("modulus must be 2^n with n >= 1")
    arr = np.array([[int(x) % modulus for x in row] for row in X.entries], dtype=np.int64)
    return ModularSymplecticMatrix(arr, modulus, X.g, check=False)


def gamma_member(X: SymplecticIntegerMatrix, N: int) -> bool:
    """Principal congruence subgroup Gamma(2g, N): ``X = I mod N``."""
    if N < 1:
        raise ValueError("N must be a positive integer")
    d = X.entries - identity_int(2 * X.g)
    return all(int(x) % N == 0 for x in d.ravel())


def _diag_products(X: SymplecticIntegerMatrix) -> tuple[list[int], list[int]]:
    ab = X.A @ X.B.T
    cd = X.C @ X.D.T
    return [int(ab[i, i]) for i in range(X.g)], [int(cd[i, i]) for i in range(X.g)]


def igusa_member(X: SymplecticIntegerMatrix, N: int) -> bool:
    """Igusa subgroup Gamma(2g, N, 2N); ``X`` must already lie in Gamma(2g, N)."""
    if not gamma_member(X, N):
        raise DomainError(f"matrix is not in Gamma(2g, {N})")
    ab, cd = _diag_products(X)
    return all(v % (2 * N) == 0 for v in ab + cd)


def theta_member(X: SymplecticIntegerMatrix) -> bool:
    """Theta subgroup: ``Diag(A B^t)`` and ``Diag(C D^t)`` even."""
    ab, cd = _diag_products(X)
    return all(v % 2 == 0 for v in ab + cd)


def lie_part(X: SymplecticIntegerMatrix) -> SpLieElementF2:
    """For ``X = I + 2Y`` in Gamma(2g, 2), the reduction of ``Y`` mod 2."""
    if not gamma_member(X, 2):
        raise DomainError("matrix is not in Gamma(2g, 2)")
    Y = (X.entries - identity_int(2 * X.g)) // 2
    return SpLieElementF2.from_matrix(BitMatrixF2.from_array(np.array(Y % 2, dtype=np.int64)), X.g)


def k_member(X: SymplecticIntegerMatrix) -> bool:
    """Membership in the kernel subgroup: ``X = I + 2Y`` with Diag(b), Diag(c), Tr(a) even."""
    if not gamma_member(X, 2):
        return False
    Y = lie_part(X)
    return not Y.b.diag().any() and not Y.c.diag().any() and Y.a.trace() == 0


def q_frak(X: SymplecticIntegerMatrix) -> int:
    """The invariant quadratic form on Gamma(2g, 2): ``Tr(a) + <Diag b, Diag c>`` mod 2."""
    return q_form(lie_part(X))


def remark3_member(X: SymplecticIntegerMatrix) -> bool:
    """Lower-left block even, with diagonal divisible by four."""
    C = X.C
    g = X.g
    return all(int(x) % 2 == 0 for x in C.ravel()) and all(int(C[i, i]) % 4 == 0 for i in range(g))


# -- standard generating sets ------------------------------------------------------


def sp_generators(g: int) -> list[SymplecticIntegerMatrix]:
    """A generating set of Sp(2g, Z) built from UB, DA and J.

    GL(g, Z) is generated by a transposition, a g-cycle, ``diag(-1, 1, ..)`` and
    ``I + E_12``; conjugating ``UB(E_11)`` by these gives every UB(B), and J
    supplies the lower unipotents.
    """
    _check_rank(g)
    gens = [make_UB(_unit(g, 0)), make_DA(np.diag([-1] + [1] * (g - 1)))]
    if g >= 2:
        E = np.eye(g, dtype=np.int64)
        E[0, 1] = 1
        gens.append(make_DA(E))
        P = np.eye(g, dtype=np.int64)[[1, 0] + list(range(2, g))]
        gens.append(make_DA(P))
    if g >= 3:
        gens.append(make_DA(np.roll(np.eye(g, dtype=np.int64), 1, axis=0)))
    gens.append(make_J(g))
    return gens


def sp_generators_f2(g: int) -> list[BitMatrixF2]:
    """Reductions mod 2 of ``sp_generators``, dropping those that become trivial."""
    out = []
    for X in sp_generators(g):
        M = reduce_mod(X, 2).to_f2()
        if M != BitMatrixF2.identity(2 * g) and M not in out:
            out.append(M)
    return out


def sp_generators_mod(g: int, modulus: int) -> list[ModularSymplecticMatrix]:
    return [reduce_mod(X, modulus) for X in sp_generators(g)]


def gamma2_generators(g: int) -> list[SymplecticIntegerMatrix]:
    """Elements of Gamma(2g, 2) whose images span Gamma(2g, 2) / K = F2^(2g+1)."""
    _check_rank(g)
    gens = [make_UB(_unit(g, i, value=2)) for i in range(g)]
    gens += [make_LB(_unit(g, i, value=2)) for i in range(g)]
    gens.append(make_DA(np.diag([-1] + [1] * (g - 1))))
    return gens


def commutator(a: SymplecticIntegerMatrix, b: SymplecticIntegerMatrix) -> SymplecticIntegerMatrix:
    return a @ b @ a.inverse() @ b.inverse()


def surface_relation_holds(pairs: Sequence[tuple[SymplecticIntegerMatrix, SymplecticIntegerMatrix]]) -> bool:
    if not pairs:
        return True
    g = pairs[0][0].g
    out = SymplecticIntegerMatrix.identity(g)
    for a, b in pairs:
        out = out @ commutator(a, b)
    return out.is_identity()


def as_symplectic(M, g: int | None = None) -> SymplecticIntegerMatrix:
    if isinstance(M, SymplecticIntegerMatrix):
        return M
    return SymplecticIntegerMatrix(M, g)


def word_from_tokens(g: int, tokens: Iterable[Token]) -> GeneratorWord:
    return GeneratorWord(g, tuple(tokens))
