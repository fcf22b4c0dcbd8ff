"""Linear algebra over F2 and the symplectic Lie algebra sp(2g, 2).

Coordinates of the natural module U = V + W are ordered v_1..v_g, w_1..w_g,
matching the block form of ``J = [[0, I], [-I, 0]]``.  An element of
sp(2g, 2) is a block matrix ``[[a, b], [c, a^t]]`` with ``b``, ``c``
symmetric; the quotient Z = sp / Y carries coordinates ``(Diag b, Diag c, Tr a)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels

WORD = kernels.WORD


class DimensionError(ValueError):
    pass


class NotSymplecticError(ValueError):
    pass


def _check_rank(g: int) -> None:
    if not isinstance(g, (int, np.integer)) or g < 1:
        raise ValueError(f"rank g must be a positive integer, got {g!r}")


def _nwords(cols: int) -> int:
    return max(1, (cols + WORD - 1) // WORD)


def _pack(bits: np.ndarray) -> np.ndarray:
    rows, cols = bits.shape
    nw = _nwords(cols)
    padded = np.zeros((rows, nw * WORD), dtype=np.uint8)
    padded[:, :cols] = bits & 1
    packed = np.packbits(padded, axis=1, bitorder="little")
    return packed.view("<u8").astype(np.uint64).reshape(rows, nw)


def _unpack(words: np.ndarray, cols: int) -> np.ndarray:
    rows = words.shape[0]
    raw = np.ascontiguousarray(words.astype("<u8")).view(np.uint8).reshape(rows, -1)
    return np.unpackbits(raw, axis=1, bitorder="little")[:, :cols]


class BitMatrixF2:
    """Immutable matrix over F2 stored as bit-packed row words (little-endian within a word)."""

    __slots__ = ("rows", "cols", "words", "_hash")

    def __init__(self, rows: int, cols: int, words: np.ndarray):
        words = np.array(words, dtype=np.uint64).reshape(rows, _nwords(cols))
        tail = cols % WORD
        if tail and rows and np.any(words[:, -1] >> np.uint64(tail)):
            raise ValueError("bits set beyond the column count")
        if cols == 0 and rows and np.any(words):
            raise ValueError("bits set beyond the column count")
        words.setflags(write=False)
        self.rows = rows
        self.cols = cols
        self.words = words
        self._hash = None

    @classmethod
    def from_array(cls, arr) -> BitMatrixF2:
        a = np.asarray(arr)
        if a.ndim != 2:
            raise DimensionError("expected a 2-d array")
        a = (a.astype(np.int64) % 2).astype(np.uint8)
        return cls(a.shape[0], a.shape[1], _pack(a))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrixF2:
        return cls(rows, cols, np.zeros((rows, _nwords(cols)), dtype=np.uint64))

    @classmethod
    def identity(cls, n: int) -> BitMatrixF2:
        return cls.from_array(np.eye(n, dtype=np.uint8))

    def to_array(self) -> np.ndarray:
        return _unpack(self.words, self.cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return int((self.words[i, j // WORD] >> np.uint64(j % WORD)) & np.uint64(1))

    def __add__(self, other: BitMatrixF2) -> BitMatrixF2:
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return BitMatrixF2(self.rows, self.cols, self.words ^ other.words)

    __sub__ = __add__

    def __matmul__(self, other: BitMatrixF2) -> BitMatrixF2:
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        return BitMatrixF2(self.rows, other.cols, kernels.gf2_matmul(self.words, other.words, self.cols))

    def apply(self, vec) -> np.ndarray:
        """Matrix times a column bit vector."""
        v = np.asarray(vec, dtype=np.int64) % 2
        if v.shape != (self.cols,):
            raise DimensionError("vector length does not match column count")
        return ((self.to_array().astype(np.int64) @ v) % 2).astype(np.uint8)

    @property
    def T(self) -> BitMatrixF2:
        return BitMatrixF2.from_array(self.to_array().T)

    def rank(self) -> int:
        return kernels.gf2_rank(self.words, self.cols)

    def inverse(self) -> BitMatrixF2:
        if self.rows != self.cols:
            raise DimensionError("only square matrices are invertible")
        n = self.rows
        work = np.concatenate([self.to_array(), np.eye(n, dtype=np.uint8)], axis=1)
        for col in range(n):
            hits = np.nonzero(work[col:, col])[0]
            if hits.size == 0:
                raise ZeroDivisionError("matrix is singular over F2")
            p = col + hits[0]
            work[[col, p]] = work[[p, col]]
            others = np.nonzero(work[:, col])[0]
            others = others[others != col]
            work[others] ^= work[col]
        return BitMatrixF2.from_array(work[:, n:])

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and self == self.T

    def trace(self) -> int:
        return int(np.trace(self.to_array()) % 2)

    def diag(self) -> np.ndarray:
        return np.diagonal(self.to_array()).astype(np.uint8).copy()

    def block(self, r0: int, r1: int, c0: int, c1: int) -> BitMatrixF2:
        return BitMatrixF2.from_array(self.to_array()[r0:r1, c0:c1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrixF2):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.words, other.words)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.words.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join("".join(str(b) for b in row) for row in self.to_array())
        return f"BitMatrixF2({self.rows}x{self.cols}: {body})"


def j_matrix_f2(g: int) -> BitMatrixF2:
    _check_rank(g)
    z = np.zeros((2 * g, 2 * g), dtype=np.uint8)
    z[:g, g:] = np.eye(g, dtype=np.uint8)
    z[g:, :g] = np.eye(g, dtype=np.uint8)
    return BitMatrixF2.from_array(z)


def is_symplectic_f2(X: BitMatrixF2, g: int) -> bool:
    _check_rank(g)
    if X.shape != (2 * g, 2 * g):
        raise DimensionError(f"expected a {2 * g}x{2 * g} matrix, got {X.shape}")
    J = j_matrix_f2(g)
    return X.T @ J @ X == J


def symplectic_inverse_f2(X: BitMatrixF2, g: int) -> BitMatrixF2:
    J = j_matrix_f2(g)
    return J @ X.T @ J


def symplectic_pairing(u, x) -> int:
    """``<(v, w), (v', w')> = w'(v) - w(v')`` reduced mod 2."""
    u = np.asarray(u, dtype=np.int64)
    x = np.asarray(x, dtype=np.int64)
    g = u.shape[0] // 2
    return int((u[:g] @ x[g:] + u[g:] @ x[:g]) % 2)


# -- the Lie algebra -----------------------------------------------------------


@dataclass(frozen=True)
class SpLieElementF2:
    g: int
    a: BitMatrixF2
    b: BitMatrixF2
    c: BitMatrixF2

    def __post_init__(self):
        _check_rank(self.g)
        for name in ("a", "b", "c"):
            if getattr(self, name).shape != (self.g, self.g):
                raise DimensionError(f"block {name} must be {self.g}x{self.g}")
        if not self.b.is_symmetric() or not self.c.is_symmetric():
            raise ValueError("blocks b and c must be symmetric")

    @classmethod
    def zero(cls, g: int) -> SpLieElementF2:
        z = BitMatrixF2.zeros(g, g)
        return cls(g, z, z, z)

    @classmethod
    def from_blocks(cls, a, b, c) -> SpLieElementF2:
        a, b, c = (BitMatrixF2.from_array(m) for m in (a, b, c))
        return cls(a.rows, a, b, c)

    @classmethod
    def from_matrix(cls, M: BitMatrixF2, g: int) -> SpLieElementF2:
        """Read a 2g x 2g matrix satisfying ``JY + Y^t J = 0`` as a Lie element."""
        if M.shape != (2 * g, 2 * g):
            raise DimensionError(f"expected a {2 * g}x{2 * g} matrix")
        arr = M.to_array()
        a, b, c, d = arr[:g, :g], arr[:g, g:], arr[g:, :g], arr[g:, g:]
        if not np.array_equal(d, a.T):
            raise ValueError("lower-right block must equal the transpose of the upper-left block")
        return cls.from_blocks(a, b, c)

    def to_matrix(self) -> BitMatrixF2:
        a = self.a.to_array()
        top = np.concatenate([a, self.b.to_array()], axis=1)
        bottom = np.concatenate([self.c.to_array(), a.T], axis=1)
        return BitMatrixF2.from_array(np.concatenate([top, bottom], axis=0))

    def __add__(self, other: SpLieElementF2) -> SpLieElementF2:
        if self.g != other.g:
            raise DimensionError("rank mismatch")
        return SpLieElementF2(self.g, self.a + other.a, self.b + other.b, self.c + other.c)

    def is_zero(self) -> bool:
        return not (np.any(self.a.words) or np.any(self.b.words) or np.any(self.c.words))

    def coordinates(self) -> np.ndarray:
        """Flat F2 vector of length g(2g+1): a row-major, then upper triangles of b and c."""
        iu = np.triu_indices(self.g)
        return np.concatenate(
            [self.a.to_array().ravel(), self.b.to_array()[iu], self.c.to_array()[iu]]
        ).astype(np.uint8)

    @classmethod
    def from_coordinates(cls, g: int, vec) -> SpLieElementF2:
        v = np.asarray(vec, dtype=np.uint8) % 2
        if v.shape != (g * (2 * g + 1),):
            raise DimensionError("coordinate vector has the wrong length")
        gg = g * g
        tri = g * (g + 1) // 2
        a = v[:gg].reshape(g, g)
        iu = np.triu_indices(g)
        b = np.zeros((g, g), dtype=np.uint8)
        c = np.zeros((g, g), dtype=np.uint8)
        b[iu] = v[gg : gg + tri]
        c[iu] = v[gg + tri :]
        b = b | b.T
        c = c | c.T
        return cls.from_blocks(a, b, c)


@dataclass(frozen=True)
class OrthVector:
    g: int
    db: tuple[int, ...]
    dc: tuple[int, ...]
    t: int

    def __post_init__(self):
        if len(self.db) != self.g or len(self.dc) != self.g:
            raise DimensionError("db and dc must have length g")

    @classmethod
    def from_vector(cls, g: int, vec) -> OrthVector:
        v = [int(x) % 2 for x in vec]
        if len(v) != 2 * g + 1:
            raise DimensionError("expected a vector of length 2g+1")
        return cls(g, tuple(v[:g]), tuple(v[g : 2 * g]), v[2 * g])

    def as_vector(self) -> np.ndarray:
        return np.array(self.db + self.dc + (self.t,), dtype=np.uint8)

    def __add__(self, other: OrthVector) -> OrthVector:
        if self.g != other.g:
            raise DimensionError("rank mismatch")
        return OrthVector.from_vector(self.g, self.as_vector() ^ other.as_vector())


def _dot(x: Sequence[int], y: Sequence[int]) -> int:
    return sum(int(p) & int(q) for p, q in zip(x, y)) & 1


def q_form(Y: SpLieElementF2) -> int:
    """``Tr(a) + <Diag b, Diag c>`` over F2."""
    return (Y.a.trace() + _dot(Y.b.diag(), Y.c.diag())) & 1


def b_form(Y1: SpLieElementF2, Y2: SpLieElementF2) -> int:
    if Y1.g != Y2.g:
        raise DimensionError("rank mismatch")
    return (_dot(Y1.b.diag(), Y2.c.diag()) + _dot(Y2.b.diag(), Y1.c.diag())) & 1


def in_Y(Y: SpLieElementF2) -> bool:
    return not Y.b.diag().any() and not Y.c.diag().any() and Y.a.trace() == 0


def project_to_Z(Y: SpLieElementF2) -> OrthVector:
    return OrthVector(Y.g, tuple(int(x) for x in Y.b.diag()), tuple(int(x) for x in Y.c.diag()), Y.a.trace())


def q_Z(z: OrthVector) -> int:
    return (z.t + _dot(z.db, z.dc)) & 1


def b_Z(z1: OrthVector, z2: OrthVector) -> int:
    if z1.g != z2.g:
        raise DimensionError("rank mismatch")
    return (_dot(z1.db, z2.dc) + _dot(z2.db, z1.dc)) & 1


def adjoint_action(X: BitMatrixF2, Y: SpLieElementF2, check: bool = True) -> SpLieElementF2:
    """Conjugate ``Y`` by the symplectic matrix ``X``: returns ``X Y X^-1``."""
    g = Y.g
    if check and not is_symplectic_f2(X, g):
        raise NotSymplecticError("X is not in Sp(2g, 2)")
    return SpLieElementF2.from_matrix(X @ Y.to_matrix() @ symplectic_inverse_f2(X, g), g)


def _unit(n: int, i: int) -> np.ndarray:
    e = np.zeros((n, n), dtype=np.uint8)
    e[i, i] = 1
    return e


def z_basis_preimages(g: int) -> list[SpLieElementF2]:
    """Lie elements projecting onto the standard basis of Z, in (db, dc, t) order."""
    zero = np.zeros((g, g), dtype=np.uint8)
    out = [SpLieElementF2.from_blocks(zero, _unit(g, i), zero) for i in range(g)]
    out += [SpLieElementF2.from_blocks(zero, zero, _unit(g, i)) for i in range(g)]
    out.append(SpLieElementF2.from_blocks(_unit(g, 0), zero, zero))
    return out


def sp_to_orth(X: BitMatrixF2, g: int | None = None) -> BitMatrixF2:
    """Matrix of the conjugation action of ``X`` on Z, size (2g+1) x (2g+1)."""
    if g is None:
        g = X.rows // 2
    if not is_symplectic_f2(X, g):
        raise NotSymplecticError("X is not in Sp(2g, 2)")
    cols = [project_to_Z(adjoint_action(X, Y, check=False)).as_vector() for Y in z_basis_preimages(g)]
    return BitMatrixF2.from_array(np.stack(cols, axis=1))


# -- tensors in D^2(U) ---------------------------------------------------------


def square_tensor(u) -> SpLieElementF2:
    """``u (x) u`` as the endomorphism ``x -> <u, x> u``."""
    u = np.asarray(u, dtype=np.int64) % 2
    g = u.shape[0] // 2
    J = j_matrix_f2(g).to_array().astype(np.int64)
    return SpLieElementF2.from_matrix(BitMatrixF2.from_array(np.outer(u, u) @ J), g)


def symmetric_tensor(u, u2) -> SpLieElementF2:
    """``u (x) u' + u' (x) u`` as ``x -> <u, x> u' + <u', x> u``."""
    u = np.asarray(u, dtype=np.int64) % 2
    u2 = np.asarray(u2, dtype=np.int64) % 2
    g = u.shape[0] // 2
    J = j_matrix_f2(g).to_array().astype(np.int64)
    m = (np.outer(u2, u) + np.outer(u, u2)) @ J
    return SpLieElementF2.from_matrix(BitMatrixF2.from_array(m), g)


def solve_f2(columns: Sequence[np.ndarray], target) -> np.ndarray | None:
    """Coefficients ``x`` with ``sum x_i columns[i] = target`` over F2, or None."""
    cols = [np.asarray(c, dtype=np.uint8) % 2 for c in columns]
    t = np.asarray(target, dtype=np.uint8) % 2
    k = len(cols)
    aug = np.concatenate([np.stack(cols, axis=1), t[:, None]], axis=1) if k else t[:, None].copy()
    rows = aug.shape[0]
    pivots = []
    r = 0
    for col in range(k):
        hits = np.nonzero(aug[r:, col])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        aug[[r, p]] = aug[[p, r]]
        others = np.nonzero(aug[:, col])[0]
        others = others[others != r]
        aug[others] ^= aug[r]
        pivots.append(col)
        r += 1
        if r == rows:
            break
    if aug[r:, k].any():
        return None
    x = np.zeros(k, dtype=np.uint8)
    for i, col in enumerate(pivots):
        x[col] = aug[i, k]
    return x


def _unit_vector(n: int, i: int) -> np.ndarray:
    e = np.zeros(n, dtype=np.uint8)
    e[i] = 1
    return e


def lambda2_tensor_basis(g: int) -> list[tuple[int, int, SpLieElementF2]]:
    """Basis ``u_p (x) u_q + u_q (x) u_p`` (p < q) of Lambda^2(U) over the standard basis of U."""
    n = 2 * g
    out = []
    for p in range(n):
        for q in range(p + 1, n):
            out.append((p, q, symmetric_tensor(_unit_vector(n, p), _unit_vector(n, q))))
    return out


def lambda2_form_map(Y: SpLieElementF2) -> int:
    """The map Lambda^2(U) -> F2 sending ``u (x) u' + u' (x) u`` to ``<u, u'>``.

    Evaluated by expanding ``Y`` in the tensor basis; raises if ``Y`` is not in Lambda^2(U).
    """
    g = Y.g
    basis = lambda2_tensor_basis(g)
    coeffs = solve_f2([t.coordinates() for _, _, t in basis], Y.coordinates())
    if coeffs is None:
        raise ValueError("element does not lie in Lambda^2(U)")
    n = 2 * g
    total = 0
    for x, (p, q, _) in zip(coeffs, basis):
        if x:
            total ^= symplectic_pairing(_unit_vector(n, p), _unit_vector(n, q))
    return total


def lambda2_composite_value(g: int) -> int:
    """Image of 1 under ``F2 -> Lambda^2(U) -> F2``, i.e. of ``sum_i (v_i w_i + w_i v_i)``."""
    _check_rank(g)
    n = 2 * g
    total = SpLieElementF2.zero(g)
    for i in range(g):
        total = total + symmetric_tensor(_unit_vector(n, i), _unit_vector(n, g + i))
    return lambda2_form_map(total)


# -- modules and coinvariants --------------------------------------------------

MODULE_NAMES = ("U", "Lambda2U", "Y", "Z", "spLie")


def expected_dimension(name: str, g: int) -> int:
    return {
        "U": 2 * g,
        "Lambda2U": g * (2 * g - 1),
        "Y": g * (2 * g - 1) - 1,
        "Z": 2 * g + 1,
        "spLie": g * (2 * g + 1),
    }[name]


def _lambda2_basis(g: int) -> list[SpLieElementF2]:
    zero = np.zeros((g, g), dtype=np.uint8)
    out = []
    for i in range(g):
        for j in range(g):
            e = np.zeros((g, g), dtype=np.uint8)
            e[i, j] = 1
            out.append(SpLieElementF2.from_blocks(e, zero, zero))
    for i in range(g):
        for j in range(i + 1, g):
            s = np.zeros((g, g), dtype=np.uint8)
            s[i, j] = s[j, i] = 1
            out.append(SpLieElementF2.from_blocks(zero, s, zero))
            out.append(SpLieElementF2.from_blocks(zero, zero, s))
    return out


def _y_basis(g: int) -> list[SpLieElementF2]:
    zero = np.zeros((g, g), dtype=np.uint8)
    out = []
    for i in range(g):
        for j in range(g):
            if i != j:
                e = np.zeros((g, g), dtype=np.uint8)
                e[i, j] = 1
                out.append(SpLieElementF2.from_blocks(e, zero, zero))
    for i in range(g - 1):
        e = _unit(g, i) | _unit(g, g - 1)
        out.append(SpLieElementF2.from_blocks(e, zero, zero))
    for i in range(g):
        for j in range(i + 1, g):
            s = np.zeros((g, g), dtype=np.uint8)
            s[i, j] = s[j, i] = 1
            out.append(SpLieElementF2.from_blocks(zero, s, zero))
            out.append(SpLieElementF2.from_blocks(zero, zero, s))
    return out


def y_basis(g: int) -> list[SpLieElementF2]:
    """Basis of the submodule Y (kernel of Lambda^2(U) -> F2); empty for g = 1."""
    _check_rank(g)
    return _y_basis(g)


def _sp_basis(g: int) -> list[SpLieElementF2]:
    n = g * (2 * g + 1)
    return [SpLieElementF2.from_coordinates(g, _unit_vector(n, i)) for i in range(n)]


@dataclass(frozen=True)
class ModuleSpec:
    """An F2 Sp(2g,2)-module given by a basis and a list of acting generators."""

    name: str
    g: int
    dimension: int
    basis: tuple
    action: tuple[BitMatrixF2, ...]

    def __post_init__(self):
        if self.name not in MODULE_NAMES:
            raise ValueError(f"unknown module {self.name!r}")
        if len(self.basis) != self.dimension:
            raise DimensionError("basis size does not match dimension")

    def act(self, X: BitMatrixF2, m):
        if self.name == "U":
            return X.apply(m)
        if self.name == "Z":
            return sp_to_orth(X, self.g).apply(m)
        return adjoint_action(X, m, check=False)

    def vector(self, m) -> np.ndarray:
        """Ambient coordinates of a module element (for rank computations)."""
        if isinstance(m, SpLieElementF2):
            return m.coordinates()
        return np.asarray(m, dtype=np.uint8) % 2


def module_spec(name: str, g: int, generators: Iterable[BitMatrixF2] | None = None) -> ModuleSpec:
    _check_rank(g)
    if generators is None:
        from .symplectic import sp_generators_f2

        generators = sp_generators_f2(g)
    generators = tuple(generators)
    for X in generators:
        if not is_symplectic_f2(X, g):
            raise NotSymplecticError("module generators must lie in Sp(2g, 2)")
    if name == "U":
        basis = tuple(_unit_vector(2 * g, i) for i in range(2 * g))
    elif name == "Z":
        basis = tuple(_unit_vector(2 * g + 1, i) for i in range(2 * g + 1))
    elif name == "Lambda2U":
        basis = tuple(_lambda2_basis(g))
    elif name == "Y":
        basis = tuple(_y_basis(g))
    elif name == "spLie":
        basis = tuple(_sp_basis(g))
    else:
        raise ValueError(f"unknown module {name!r}")
    return ModuleSpec(name, g, len(basis), basis, generators)


def span_rank(vectors: Sequence[np.ndarray], length: int) -> int:
    if not len(vectors) or not length:
        return 0
    return BitMatrixF2.from_array(np.stack([np.asarray(v) % 2 for v in vectors])).rank()


def coinvariants_dimension(M: ModuleSpec) -> int:
    """dim M / span{x m - m}; right exactness lets generators stand in for the group."""
    if M.dimension == 0:
        return 0
    width = len(M.vector(M.basis[0]))
    moved = []
    for X in M.action:
        for m in M.basis:
            moved.append(M.vector(M.act(X, m)) ^ M.vector(m))
    if span_rank([M.vector(m) for m in M.basis], width) != M.dimension:
        raise DimensionError("module basis is not linearly independent")
    return M.dimension - span_rank(moved, width)


def is_submodule(M: ModuleSpec) -> bool:
    """Whether every generator maps the span of the basis into itself."""
    base = [M.vector(m) for m in M.basis]
    width = len(base[0]) if base else 0
    r = span_rank(base, width)
    for X in M.action:
        for m in M.basis:
            if span_rank(base + [M.vector(M.act(X, m))], width) != r:
                return False
    return True

