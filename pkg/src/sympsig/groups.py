"""Enumeration of the finite groups Sp(2g,2), Sp(2g,Z/4), H = Sp(2g,Z/4)/Y and the
unitary images, plus the structural checks run on them.

Matrix groups are enumerated frontier by frontier: a whole BFS layer is
multiplied by each generator in one kernel call and deduplicated on exact
integer encodings, so no hash collision can merge distinct elements.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .dyadic import ProjectiveUnitaryMatrix, UnitaryMatrix
from .gf2 import (
    BitMatrixF2,
    OrthVector,
    SpLieElementF2,
    is_symplectic_f2,
    project_to_Z,
    q_Z,
    sp_to_orth,
    y_basis,
)
from .symplectic import (
    ModularSymplecticMatrix,
    gamma2_generators,
    j_int,
    reduce_mod,
    sp_generators,
    sp_generators_mod,
)
from .theta import sigma_lift

DEFAULT_MAX_ELEMENTS = 5_000_000
_FRONTIER_CHUNK = 1 << 15


class ClosureOverflow(RuntimeError):
    """The generated group has more elements than the configured bound."""

    def __init__(self, bound: int, reached: int):
        super().__init__(f"closure exceeded {bound} elements (reached {reached})")
        self.bound = bound
        self.reached = reached


def max_elements() -> int:
    raw = os.environ.get("SYMPSIG_MAX_ELEMENTS")
    return int(raw) if raw else DEFAULT_MAX_ELEMENTS


# -- group operations ---------------------------------------------------------------


class MatrixModOperation:
    """Multiplication of d x d matrices mod 2 or 4, optionally modulo the Y-cosets.

    Batches are int64 arrays of shape ``(n, d, d)``.
    """

    def __init__(self, d: int, modulus: int, ybasis: np.ndarray | None = None, projective: bool = False):
        if modulus not in (2, 4):
            raise ValueError("matrix groups are enumerated mod 2 or mod 4")
        self.d = d
        self.modulus = modulus
        self.ybasis = None if ybasis is None else np.asarray(ybasis, dtype=np.int64)
        if self.ybasis is not None and (modulus != 4 or projective):
            raise ValueError("coset mode needs modulus 4 and no sign quotient")
        self.projective = projective
        self.bits = 1 if modulus == 2 else 2
        self.tag = "coset" if self.ybasis is not None else f"matrix-mod-{modulus}"
        if projective:
            self.tag += "-projective"
        g = d // 2
        self._J = np.array(j_int(g), dtype=np.int64) % modulus
        self._Jinv = (-self._J) % modulus

    def canonicalize(self, batch: np.ndarray) -> np.ndarray:
        batch = np.asarray(batch, dtype=np.int64) % self.modulus
        if self.ybasis is not None:
            batch = kernels.coset_canon(batch, self.ybasis)
        elif self.projective:
            # the lexicographically smaller of X and -X represents {X, -X}
            neg = (-batch) % self.modulus
            flip = kernels.encode_keys(neg, self.bits) < kernels.encode_keys(batch, self.bits)
            batch = np.where(flip[:, None, None], neg, batch)
        # residues fit in a byte; keeps million-element tables small
        return batch.astype(np.uint8)

    def stack(self, items: Iterable) -> np.ndarray:
        arrs = []
        for x in items:
            if isinstance(x, (ModularSymplecticMatrix, CosetElement)):
                x = x.entries if isinstance(x, ModularSymplecticMatrix) else x.rep.entries
            elif isinstance(x, BitMatrixF2):
                x = x.to_array()
            arrs.append(np.asarray(x, dtype=np.int64))
        if not arrs:
            return np.zeros((0, self.d, self.d), dtype=np.uint8)
        return self.canonicalize(np.stack(arrs))

    def identity(self) -> np.ndarray:
        return np.eye(self.d, dtype=np.uint8)[None]

    def mul(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return self.canonicalize(kernels.matmul_mod(xs, ys, self.modulus))

    def inverse(self, xs: np.ndarray) -> np.ndarray:
        # X^-1 = J^-1 X^t J for symplectic X
        xt = np.ascontiguousarray(np.transpose(xs, (0, 2, 1)))
        return self.canonicalize(kernels.matmul_mod(kernels.matmul_mod(self._Jinv, xt, self.modulus), self._J, self.modulus))

    def keys(self, xs: np.ndarray) -> np.ndarray:
        if self.d * self.d * self.bits <= 63:
            return kernels.encode_keys(xs, self.bits)
        return np.array([x.tobytes() for x in np.ascontiguousarray(xs, dtype=np.int64)], dtype=object)

    def size(self, xs) -> int:
        return len(xs)

    def take(self, xs: np.ndarray, idx) -> np.ndarray:
        return xs[np.asarray(idx, dtype=np.int64)]

    def concat(self, parts: Sequence[np.ndarray]) -> np.ndarray:
        return np.concatenate(parts) if parts else np.zeros((0, self.d, self.d), dtype=np.uint8)

    def repeat(self, x: np.ndarray, n: int) -> np.ndarray:
        return np.broadcast_to(x, (n,) + x.shape[1:])


class UnitaryOperation:
    """Exact multiplication of ``UnitaryMatrix`` values; batches are lists."""

    tag = "exact-unitary"

    def __init__(self, g: int, projective: bool = False):
        self.g = g
        self.projective = projective
        if projective:
            self.tag = "exact-unitary-projective"

    def _canon(self, U: UnitaryMatrix) -> UnitaryMatrix:
        return ProjectiveUnitaryMatrix(U).rep if self.projective else U

    def canonicalize(self, batch):
        return [self._canon(U) for U in batch]

    def stack(self, items: Iterable) -> list:
        return [self._canon(U.rep if isinstance(U, ProjectiveUnitaryMatrix) else U) for U in items]

    def identity(self) -> list:
        return [UnitaryMatrix.identity(self.g)]

    def mul(self, xs, ys) -> list:
        return [self._canon(x @ y) for x, y in zip(xs, ys)]

    def inverse(self, xs) -> list:
        return [self._canon(x.inverse()) for x in xs]

    def keys(self, xs) -> np.ndarray:
        out = np.empty(len(xs), dtype=object)
        for i, x in enumerate(xs):
            out[i] = x.key()
        return out

    def size(self, xs) -> int:
        return len(xs)

    def take(self, xs, idx) -> list:
        return [xs[int(i)] for i in np.atleast_1d(idx)]

    def concat(self, parts) -> list:
        return [x for p in parts for x in p]

    def repeat(self, x, n: int) -> list:
        return [x[0]] * n


# -- tables and closure -------------------------------------------------------------


@dataclass
class FiniteGroupTable:
    elements: object
    keys: np.ndarray
    generators: object
    operation: object
    _index: dict | None = field(default=None, repr=False)
    _sorted: np.ndarray | None = field(default=None, repr=False)
    _perm: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.keys.dtype == object:
            self._index = {k: i for i, k in enumerate(self.keys.tolist())}
        else:
            self._perm = np.argsort(self.keys, kind="stable")
            self._sorted = self.keys[self._perm]

    @property
    def order(self) -> int:
        return len(self.keys)

    def __len__(self) -> int:
        return self.order

    @property
    def tag(self) -> str:
        return self.operation.tag

    def element(self, i: int):
        e = self.operation.take(self.elements, [i])
        return e[0]

    def lookup(self, batch) -> np.ndarray:
        """Indices of the (already canonical) elements of ``batch``; -1 when absent."""
        ks = self.operation.keys(batch)
        if self._index is not None:
            return np.array([self._index.get(k, -1) for k in ks.tolist()], dtype=np.int64)
        pos = np.searchsorted(self._sorted, ks)
        pos = np.minimum(pos, len(self._sorted) - 1)
        hit = self._sorted[pos] == ks
        return np.where(hit, self._perm[pos], -1).astype(np.int64)

    def contains(self, batch) -> np.ndarray:
        return self.lookup(batch) >= 0

    def identity_index(self) -> int:
        return int(self.lookup(self.operation.identity())[0])


def _resolve_operation(generators, operation):
    if not isinstance(operation, str):
        return operation
    gens = list(generators)
    if operation == "exact-unitary":
        return UnitaryOperation(gens[0].g)
    sample = gens[0]
    if isinstance(sample, CosetElement):
        d = 2 * sample.g
    elif isinstance(sample, ModularSymplecticMatrix):
        d = 2 * sample.g
    elif isinstance(sample, BitMatrixF2):
        d = sample.rows
    else:
        d = np.asarray(sample).shape[0]
    if operation == "matrix-mod-2":
        return MatrixModOperation(d, 2)
    if operation == "matrix-mod-4":
        return MatrixModOperation(d, 4)
    if operation == "coset":
        return MatrixModOperation(d, 4, y_basis_arrays(d // 2))
    raise ValueError(f"unknown group operation {operation!r}")


def closure(generators, operation="matrix-mod-2", element_bound: int | None = None) -> FiniteGroupTable:
    """Breadth-first product closure of ``generators``.

    Raises ``ClosureOverflow`` rather than returning a truncated table.
    """
    gens_list = list(generators)
    op = _resolve_operation(gens_list, operation)
    bound = max_elements() if element_bound is None else element_bound
    gens = op.stack(gens_list)
    start = op.concat([op.identity(), gens])
    start_keys = op.keys(start)
    _, first = np.unique(start_keys, return_index=True) if start_keys.dtype != object else _unique_obj(start_keys)
    first = np.sort(first)
    elements = [op.take(start, first)]
    key_parts = [start_keys[first]]
    seen = set(key_parts[0].tolist())
    frontier = elements[0]
    n_gens = op.size(gens)
    total = len(seen)
    if total > bound:
        raise ClosureOverflow(bound, total)
    while op.size(frontier):
        layer = []
        for start_i in range(0, op.size(frontier), _FRONTIER_CHUNK):
            chunk = op.take(frontier, range(start_i, min(start_i + _FRONTIER_CHUNK, op.size(frontier))))
            m = op.size(chunk)
            products = op.concat([op.mul(chunk, op.repeat(op.take(gens, [j]), m)) for j in range(n_gens)])
            pkeys = op.keys(products)
            keep = []
            for i, k in enumerate(pkeys.tolist()):
                if k not in seen:
                    seen.add(k)
                    keep.append(i)
            total = len(seen)
            if total > bound:
                raise ClosureOverflow(bound, total)
            if keep:
                layer.append(op.take(products, keep))
                key_parts.append(pkeys[np.asarray(keep, dtype=np.int64)])
        frontier = op.concat(layer)
        if layer:
            elements.append(frontier)
    all_keys = np.concatenate(key_parts)
    return FiniteGroupTable(op.concat(elements), all_keys, gens, op)


def _unique_obj(keys: np.ndarray):
    seen = {}
    for i, k in enumerate(keys.tolist()):
        seen.setdefault(k, i)
    return None, np.array(sorted(seen.values()), dtype=np.int64)


# -- cosets of Y -------------------------------------------------------------------


@lru_cache(maxsize=None)
def _y_basis_arrays_cached(g: int) -> bytes:
    mats = [Y.to_matrix().to_array().astype(np.int64) for Y in y_basis(g)]
    arr = np.stack(mats) if mats else np.zeros((0, 2 * g, 2 * g), dtype=np.int64)
    return arr.tobytes()


def y_basis_arrays(g: int) -> np.ndarray:
    k = len(y_basis(g))
    return np.frombuffer(_y_basis_arrays_cached(g), dtype=np.int64).reshape(k, 2 * g, 2 * g).copy()


class CosetElement:
    """An element of H = Sp(2g, Z/4)/Y, stored as the lexicographically least
    matrix (row-major, residues 0..3) of its coset ``X (I + 2Y)``."""

    __slots__ = ("g", "rep")

    def __init__(self, X, g: int | None = None):
        if isinstance(X, CosetElement):
            X = X.rep
        if isinstance(X, ModularSymplecticMatrix):
            if X.modulus != 4:
                raise ValueError("coset elements need a matrix mod 4")
            g, arr = X.g, X.entries
        else:
            arr = np.asarray(X, dtype=np.int64) % 4
            g = arr.shape[0] // 2 if g is None else g
            ModularSymplecticMatrix(arr, 4, g)
        canon = kernels.coset_canon(np.asarray(arr, dtype=np.int64)[None], y_basis_arrays(g))[0]
        self.g = g
        self.rep = ModularSymplecticMatrix(canon, 4, g, check=False)

    def __matmul__(self, other: CosetElement) -> CosetElement:
        return CosetElement(self.rep @ other.rep)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CosetElement):
            return NotImplemented
        return self.rep == other.rep

    def __hash__(self) -> int:
        return hash(self.rep)

    def __repr__(self) -> str:
        return f"CosetElement(g={self.g}, {self.rep.entries.tolist()})"


# -- specific groups -------------------------------------------------------------------


@lru_cache(maxsize=None)
def enumerate_sp_f2(g: int, element_bound: int | None = None) -> FiniteGroupTable:
    gens = [reduce_mod(X, 2).entries for X in sp_generators(g)]
    return closure(gens, MatrixModOperation(2 * g, 2), element_bound)


@lru_cache(maxsize=None)
def enumerate_sp_mod4(g: int, element_bound: int | None = None) -> FiniteGroupTable:
    gens = [X.entries for X in sp_generators_mod(g, 4)]
    return closure(gens, MatrixModOperation(2 * g, 4), element_bound)


@lru_cache(maxsize=None)
def enumerate_psp_mod4(g: int, element_bound: int | None = None) -> FiniteGroupTable:
    """Sp(2g, Z/4) / {+-I}."""
    gens = [X.entries for X in sp_generators_mod(g, 4)]
    return closure(gens, MatrixModOperation(2 * g, 4, projective=True), element_bound)


@lru_cache(maxsize=None)
def enumerate_H(g: int, element_bound: int | None = None) -> FiniteGroupTable:
    """All cosets of Y in Sp(2g, Z/4); full enumeration only for g in {1, 2}."""
    if g not in (1, 2):
        raise ValueError("full enumeration of H is limited to g = 1, 2")
    gens = [X.entries for X in sp_generators_mod(g, 4)]
    return closure(gens, MatrixModOperation(2 * g, 4, y_basis_arrays(g)), element_bound)


def sp_order(g: int) -> int:
    out = 2 ** (g * g)
    for i in range(1, g + 1):
        out *= 4**i - 1
    return out


def h_kernel_indices(table: FiniteGroupTable) -> np.ndarray:
    """Elements of H lying over the identity of Sp(2g, 2)."""
    d = table.operation.d
    low = table.elements % 2
    return np.nonzero(np.all(low == np.eye(d, dtype=np.int64)[None], axis=(1, 2)))[0]


def kernel_coordinates(rep: np.ndarray) -> OrthVector:
    """Z-coordinates of a kernel element ``I + 2Y`` of H."""
    d = rep.shape[0]
    g = d // 2
    Y = ((np.asarray(rep, dtype=np.int64) - np.eye(d, dtype=np.int64)) // 2) % 2
    return project_to_Z(SpLieElementF2.from_matrix(BitMatrixF2.from_array(Y), g))


def is_elementary_abelian(table: FiniteGroupTable, idx: np.ndarray) -> bool:
    op = table.operation
    xs = op.take(table.elements, idx)
    if op.size(xs) == 0:
        return True
    ident = table.identity_index()
    squares = table.lookup(op.mul(xs, xs))
    if np.any(squares != ident):
        return False
    n = op.size(xs)
    for i in range(n):
        xi = op.repeat(op.take(xs, [i]), n)
        if np.any(table.lookup(op.mul(xi, xs)) != table.lookup(op.mul(xs, xi))):
            return False
    return True


# -- derived subgroup and abelianization -------------------------------------------------


def _commutators(op, xs, ys):
    return op.mul(op.mul(xs, ys), op.mul(op.inverse(xs), op.inverse(ys)))


def _pairwise(op, gens):
    n = op.size(gens)
    left = [i for i in range(n) for j in range(n) if i < j]
    right = [j for i in range(n) for j in range(n) if i < j]
    return op.take(gens, left), op.take(gens, right)


def normal_closure(table: FiniteGroupTable, seeds) -> FiniteGroupTable:
    """Smallest normal subgroup of ``table`` containing the batch ``seeds``."""
    op = table.operation
    sub_gens = seeds
    while True:
        sub = closure(op.take(sub_gens, range(op.size(sub_gens))) if op.size(sub_gens) else op.identity(), op)
        sub = _as_batch_table(sub, op)
        conj = []
        gens = table.generators
        for j in range(op.size(gens)):
            s = op.repeat(op.take(gens, [j]), op.size(sub_gens))
            sinv = op.inverse(s)
            conj.append(op.mul(op.mul(s, sub_gens), sinv))
        conj = op.concat(conj)
        missing = np.nonzero(~sub.contains(conj))[0] if op.size(conj) else np.array([], dtype=np.int64)
        if missing.size == 0:
            return sub
        sub_gens = op.concat([sub_gens, op.take(conj, missing)])


def _as_batch_table(t: FiniteGroupTable, op) -> FiniteGroupTable:
    return t


def derived_subgroup(table: FiniteGroupTable) -> FiniteGroupTable:
    op = table.operation
    gens = table.generators
    if op.size(gens) < 2:
        return closure(op.identity(), op)
    xs, ys = _pairwise(op, gens)
    return normal_closure(table, _commutators(op, xs, ys))


def coset_labels(table: FiniteGroupTable, sub: FiniteGroupTable) -> tuple[np.ndarray, list[int]]:
    """Label each element by its left coset ``x N`` of the subgroup ``sub``."""
    op = table.operation
    labels = np.full(table.order, -1, dtype=np.int64)
    reps = []
    m = sub.order
    for i in range(table.order):
        if labels[i] >= 0:
            continue
        x = op.repeat(op.take(table.elements, [i]), m)
        idx = table.lookup(op.mul(x, sub.elements))
        if np.any(idx < 0):
            raise ValueError("subgroup is not contained in the table")
        labels[idx] = len(reps)
        reps.append(i)
    return labels, reps


def quotient_orders(table: FiniteGroupTable, sub: FiniteGroupTable, reps: Sequence[int]) -> list[int]:
    """Order of ``x N`` for each coset representative ``x`` (``N`` normal)."""
    op = table.operation
    out = []
    for i in reps:
        x = op.take(table.elements, [i])
        power = x
        n = 1
        while not sub.contains(power)[0]:
            power = op.mul(power, x)
            n += 1
        out.append(n)
    return out


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def abelian_invariants(orders: Sequence[int]) -> list[int]:
    """Invariant factors ``d_1 | d_2 | ...`` of a finite abelian group from the
    orders of all of its elements.

    For each prime p, ``#{x : x^(p^k) = 1} = p^(sum_i min(e_i, k))`` recovers the
    exponents ``e_i`` of the p-primary part.
    """
    n = len(orders)
    if n == 0:
        raise ValueError("empty group")
    primary: dict[int, list[int]] = {}
    for p in _prime_factors(n):
        s_prev = 0
        ge = []
        k = 1
        while True:
            count = sum(1 for o in orders if (p**k) % o == 0)
            s = round(math.log(count, p))
            if p**s != count:
                raise ValueError("order statistics are not those of an abelian group")
            ge.append(s - s_prev)
            if s == s_prev:
                break
            s_prev = s
            k += 1
        # ge[k-1] = number of cyclic factors with exponent >= k
        exps = []
        for k in range(1, len(ge) + 1):
            at_least = ge[k - 1]
            more = ge[k] if k < len(ge) else 0
            exps += [k] * (at_least - more)
        primary[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in primary.values()), default=0)
    factors = []
    for i in range(width):
        d = 1
        for p, exps in primary.items():
            if i < len(exps):
                d *= p ** exps[i]
        factors.append(d)
    factors = sorted(factors)
    if math.prod(factors) != n:
        raise ValueError("order statistics are not those of an abelian group")
    return factors


def abelianization(table: FiniteGroupTable) -> list[int]:
    """Cyclic orders of ``G / [G, G]`` as invariant factors (``[]`` if perfect)."""
    derived = derived_subgroup(table)
    if table.order % derived.order:
        raise ValueError("derived subgroup order does not divide the group order")
    _, reps = coset_labels(table, derived)
    return abelian_invariants(quotient_orders(table, derived, reps))


def center_indices(table: FiniteGroupTable) -> np.ndarray:
    op = table.operation
    n = table.order
    central = np.ones(n, dtype=bool)
    for j in range(op.size(table.generators)):
        s = op.repeat(op.take(table.generators, [j]), n)
        central &= table.lookup(op.mul(s, table.elements)) == table.lookup(op.mul(table.elements, s))
    return np.nonzero(central)[0]


def element_orders(table: FiniteGroupTable, idx: Iterable[int] | None = None) -> list[int]:
    op = table.operation
    ident = table.identity_index()
    out = []
    for i in range(table.order) if idx is None else idx:
        x = op.take(table.elements, [i])
        p, n = x, 1
        while table.lookup(p)[0] != ident:
            p = op.mul(p, x)
            n += 1
        out.append(n)
    return out


# -- structural checks ---------------------------------------------------------------------


def default_involution(g: int) -> np.ndarray:
    """The element of Sp(2g, 2) swapping v_1 and w_1 and fixing the other basis vectors."""
    s = np.eye(2 * g, dtype=np.int64)
    s[[0, g]] = s[[g, 0]]
    return s


def nonsplit_involution_check(g: int, s=None, table: FiniteGroupTable | None = None) -> bool:
    """True iff no preimage of the involution ``s`` in H has order two."""
    if g not in (1, 2):
        raise ValueError("the involution check enumerates H and is limited to g = 1, 2")
    s = default_involution(g) if s is None else np.asarray(s.to_array() if isinstance(s, BitMatrixF2) else s) % 2
    S = BitMatrixF2.from_array(s)
    if not is_symplectic_f2(S, g):
        raise ValueError("s is not in Sp(2g, 2)")
    if S @ S != BitMatrixF2.identity(2 * g):
        raise ValueError("s is not an involution")
    table = enumerate_H(g) if table is None else table
    lifts = involution_lifts(table, s)
    if len(lifts) != 2 ** (2 * g + 1):
        raise RuntimeError("unexpected number of preimages")
    op = table.operation
    xs = op.take(table.elements, lifts)
    squares = table.lookup(op.mul(xs, xs))
    return bool(np.all(squares != table.identity_index()))


def involution_lifts(table: FiniteGroupTable, s: np.ndarray) -> np.ndarray:
    low = table.elements % 2
    return np.nonzero(np.all(low == np.asarray(s)[None] % 2, axis=(1, 2)))[0]


def complement_exists_g1() -> bool:
    """Brute-force search for a subgroup of H (g = 1) mapping isomorphically onto Sp(2, 2)."""
    table = enumerate_H(1)
    op = table.operation
    inv = default_involution(1)
    rot = np.array([[0, 1], [1, 1]], dtype=np.int64)  # order 3 in Sp(2, 2)
    for i in involution_lifts(table, inv):
        for j in involution_lifts(table, rot):
            gens = op.take(table.elements, [i, j])
            try:
                sub = closure(gens, op, element_bound=6)
            except ClosureOverflow:
                continue
            if sub.order == 6 and len({(x % 2).tobytes() for x in sub.elements}) == 6:
                return True
    return False


def kernel_is_elementary_abelian(table: FiniteGroupTable) -> tuple[int, bool]:
    idx = h_kernel_indices(table)
    return len(idx), is_elementary_abelian(table, idx)


def conjugation_matches_orthogonal_action(table: FiniteGroupTable, sample: Iterable[int]) -> bool:
    """Conjugation on the kernel of H -> Sp(2g,2) agrees with ``sp_to_orth``."""
    op = table.operation
    g = op.d // 2
    kernel = h_kernel_indices(table)
    ks = op.take(table.elements, kernel)
    coords = np.stack([kernel_coordinates(k).as_vector() for k in ks])
    for i in sample:
        x = op.take(table.elements, [int(i)])
        M = sp_to_orth(BitMatrixF2.from_array(x[0] % 2), g).to_array().astype(np.int64)
        n = len(kernel)
        xs = op.repeat(x, n)
        conj = op.mul(op.mul(xs, ks), op.inverse(xs))
        got = np.stack([kernel_coordinates(c).as_vector() for c in conj]).astype(np.int64)
        want = (coords.astype(np.int64) @ M.T) % 2
        if not np.array_equal(got, want):
            return False
    return True


def _q_int(v: int, g: int) -> int:
    db = v & ((1 << g) - 1)
    dc = (v >> g) & ((1 << g) - 1)
    t = (v >> (2 * g)) & 1
    return (t + bin(db & dc).count("1")) & 1


def _b_int(u: int, v: int, g: int) -> int:
    mask = (1 << g) - 1
    return (bin((u & mask) & ((v >> g) & mask)).count("1") + bin((v & mask) & ((u >> g) & mask)).count("1")) & 1


def q_z_stabilizer(g: int) -> list[np.ndarray]:
    """All invertible (2g+1)x(2g+1) F2 matrices preserving ``q_Z``, by backtracking.

    A linear map preserves ``q`` iff it preserves ``q`` on a basis and the polar
    form ``b`` on pairs of basis vectors.  Vectors are ints with bit j = coordinate j.
    """
    n = 2 * g + 1
    basis = [1 << j for j in range(n)]
    qb = [_q_int(e, g) for e in basis]
    bb = [[_b_int(e, f, g) for f in basis] for e in basis]
    candidates = [[v for v in range(1, 1 << n) if _q_int(v, g) == qb[j]] for j in range(n)]
    out: list[np.ndarray] = []

    def span_add(span: set[int], v: int) -> set[int] | None:
        if v in span:
            return None
        return span | {s ^ v for s in span}

    def rec(j: int, images: list[int], span: set[int]) -> None:
        if j == n:
            M = np.array([[(images[c] >> r) & 1 for c in range(n)] for r in range(n)], dtype=np.uint8)
            out.append(M)
            return
        for v in candidates[j]:
            if any(_b_int(images[i], v, g) != bb[i][j] for i in range(j)):
                continue
            new_span = span_add(span, v)
            if new_span is None:
                continue
            images.append(v)
            rec(j + 1, images, new_span)
            images.pop()

    rec(0, [], {0})
    return out


def preserves_q_Z(M: BitMatrixF2, g: int) -> bool:
    arr = M.to_array().astype(np.int64)
    n = 2 * g + 1
    for v in range(1 << n):
        z = np.array([(v >> j) & 1 for j in range(n)], dtype=np.int64)
        img = (arr @ z) % 2
        if q_Z(OrthVector.from_vector(g, img)) != q_Z(OrthVector.from_vector(g, z)):
            return False
    return True


@dataclass(frozen=True)
class IsomorphismReport:
    g: int
    sp_order: int
    image_order: int
    stabilizer_order: int
    injective: bool
    preserves_form: bool
    image_equals_stabilizer: bool

    @property
    def ok(self) -> bool:
        return (
            self.injective
            and self.preserves_form
            and self.image_equals_stabilizer
            and self.image_order == self.sp_order == self.stabilizer_order
        )


def exceptional_isomorphism_report(g: int) -> IsomorphismReport:
    if g not in (1, 2):
        raise ValueError("the exceptional isomorphism check enumerates Sp(2g,2) for g = 1, 2")
    sp = enumerate_sp_f2(g)
    images = {}
    for x in sp.elements:
        M = sp_to_orth(BitMatrixF2.from_array(x), g)
        images.setdefault(M, 0)
        images[M] += 1
    preserves = all(preserves_q_Z(M, g) for M in images)
    stab = {BitMatrixF2.from_array(M) for M in q_z_stabilizer(g)}
    return IsomorphismReport(
        g=g,
        sp_order=sp.order,
        image_order=len(images),
        stabilizer_order=len(stab),
        injective=len(images) == sp.order,
        preserves_form=preserves,
        image_equals_stabilizer=set(images) == stab,
    )


def exceptional_isomorphism_check(g: int) -> bool:
    return exceptional_isomorphism_report(g).ok


# -- unitary images ---------------------------------------------------------------------------


def unitary_closure_E(g: int, element_bound: int | None = None) -> FiniteGroupTable:
    """Group generated by lifts of sigma on generators of Gamma(2g,2) (signs kept)."""
    if g > 3:
        raise ValueError("E is enumerated for g <= 3")
    gens = [sigma_lift(X) for X in gamma2_generators(g)]
    return closure(gens, UnitaryOperation(g), element_bound)


def unitary_closure_Htilde(g: int = 1, allow_large: bool = False, element_bound: int | None = None) -> FiniteGroupTable:
    """Group generated by lifts of sigma on generators of Sp(2g, Z) (signs kept)."""
    if g != 1 and not (g == 2 and allow_large):
        raise ValueError("the double cover is enumerated for g = 1 (g = 2 with allow_large)")
    gens = [sigma_lift(X) for X in sp_generators(g)]
    return closure(gens, UnitaryOperation(g), element_bound)


def projective_image_matches_H(g: int, H: FiniteGroupTable | None = None) -> bool:
    """Build the map H -> U/{+-I} generator by generator and check it is a well-defined bijection."""
    H = enumerate_H(g) if H is None else H
    op = H.operation
    proj = UnitaryOperation(g, projective=True)
    gen_mats = [X.entries for X in sp_generators_mod(g, 4)]
    gen_h = op.stack(gen_mats)
    gen_u = proj.stack(sigma_lift(X) for X in sp_generators(g))
    image = {H.identity_index(): proj.identity()[0]}
    frontier = [H.identity_index()]
    while frontier:
        nxt = []
        for i in frontier:
            x = op.take(H.elements, [i])
            for j in range(op.size(gen_h)):
                y = int(H.lookup(op.mul(x, op.take(gen_h, [j])))[0])
                u = proj.mul([image[i]], [gen_u[j]])[0]
                if y in image:
                    if image[y] != u:
                        return False
                else:
                    image[y] = u
                    nxt.append(y)
        frontier = nxt
    return len(image) == H.order and len({u.key() for u in image.values()}) == H.order


def contains_minus_identity(table: FiniteGroupTable) -> bool:
    g = table.operation.g
    return bool(table.contains([-UnitaryMatrix.identity(g)])[0])


def is_normal_subgroup(big: FiniteGroupTable, small: FiniteGroupTable) -> bool:
    op = big.operation
    sg = small.generators
    n = op.size(sg)
    if not np.all(big.contains(small.elements)):
        return False
    for j in range(op.size(big.generators)):
        s = op.repeat(op.take(big.generators, [j]), n)
        if not np.all(small.contains(op.mul(op.mul(s, sg), op.inverse(s)))):
            return False
    return True
