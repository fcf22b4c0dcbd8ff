"""Exact numbers ``(re + im*i) / 2^k`` and matrices over them."""
from __future__ import annotations

import numpy as np

# headroom for int64 products of two matrices before switching to Python ints
_INT64_SAFE = 1 << 61


def _trailing_zeros(v: int) -> int:
    return (v & -v).bit_length() - 1


class DyadicGaussianScalar:
    """Normalized: ``k == 0`` or ``re``, ``im`` not both even."""

    __slots__ = ("re", "im", "k")

    def __init__(self, re: int, im: int = 0, k: int = 0):
        re, im, k = int(re), int(im), int(k)
        if k < 0:
            re <<= -k
            im <<= -k
            k = 0
        if re == 0 and im == 0:
            k = 0
        elif k:
            t = min(k, _trailing_zeros(re | im) if (re | im) else k)
            re >>= t
            im >>= t
            k -= t
        self.re = re
        self.im = im
        self.k = k

    def _aligned(self, other: DyadicGaussianScalar) -> tuple[int, int, int, int, int]:
        k = max(self.k, other.k)
        s, o = k - self.k, k - other.k
        return self.re << s, self.im << s, other.re << o, other.im << o, k

    def __add__(self, other):
        other = _coerce(other)
        a, b, c, d, k = self._aligned(other)
        return DyadicGaussianScalar(a + c, b + d, k)

    __radd__ = __add__

    def __neg__(self):
        return DyadicGaussianScalar(-self.re, -self.im, self.k)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        return DyadicGaussianScalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
            self.k + other.k,
        )

    __rmul__ = __mul__

    def conjugate(self) -> DyadicGaussianScalar:
        return DyadicGaussianScalar(self.re, -self.im, self.k)

    def norm(self) -> DyadicGaussianScalar:
        """``z * conj(z)``, a non-negative dyadic rational."""
        return DyadicGaussianScalar(self.re * self.re + self.im * self.im, 0, 2 * self.k)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_positive_sign(self) -> bool:
        """Sign convention for canonicalization: ``re > 0`` or ``re == 0 and im > 0``."""
        return self.re > 0 or (self.re == 0 and self.im > 0)

    def as_triple(self) -> tuple[int, int, int]:
        return (self.re, self.im, self.k)

    def __complex__(self) -> complex:
        return complex(self.re, self.im) / (1 << self.k)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = DyadicGaussianScalar(other)
        if not isinstance(other, DyadicGaussianScalar):
            return NotImplemented
        return self.as_triple() == other.as_triple()

    def __hash__(self) -> int:
        return hash(self.as_triple())

    def __repr__(self) -> str:
        return f"DyadicGaussianScalar({self.re}, {self.im}, k={self.k})"


def _coerce(x) -> DyadicGaussianScalar:
    if isinstance(x, DyadicGaussianScalar):
        return x
    if isinstance(x, (int, np.integer)):
        return DyadicGaussianScalar(int(x))
    raise TypeError(f"cannot treat {type(x).__name__} as a dyadic Gaussian number")


I_UNIT = DyadicGaussianScalar(0, 1)


class UnitaryMatrix:
    """Square matrix ``(re + i*im) / 2^k`` with a shared, normalized exponent.

    Rows and columns are indexed by ``w in {0,1}^g`` read little-endian:
    index ``n`` corresponds to ``w_j = (n >> j) & 1`` with ``w_1`` the lowest bit.
    Unitarity is not re-checked on construction; see ``is_unitary``.
    """

    __slots__ = ("g", "re", "im", "k", "_key")

    def __init__(self, g: int, re, im, k: int = 0):
        re = np.asarray(re)
        im = np.asarray(im)
        dim = 1 << g
        if re.shape != (dim, dim) or im.shape != (dim, dim):
            raise ValueError(f"expected {dim}x{dim} arrays")
        re, im, k = _normalize(re, im, int(k))
        re.setflags(write=False)
        im.setflags(write=False)
        self.g = g
        self.re = re
        self.im = im
        self.k = k
        self._key = None

    @property
    def dim(self) -> int:
        return 1 << self.g

    @classmethod
    def identity(cls, g: int) -> UnitaryMatrix:
        dim = 1 << g
        return cls(g, np.eye(dim, dtype=np.int64), np.zeros((dim, dim), dtype=np.int64), 0)

    @classmethod
    def from_entries(cls, g: int, entries) -> UnitaryMatrix:
        """Build from a grid of ``DyadicGaussianScalar`` (or ints)."""
        grid = [[_coerce(x) for x in row] for row in entries]
        k = max((x.k for row in grid for x in row), default=0)
        re = [[x.re << (k - x.k) for x in row] for row in grid]
        im = [[x.im << (k - x.k) for x in row] for row in grid]
        return cls(g, _compact(np.array(re, dtype=object)), _compact(np.array(im, dtype=object)), k)

    def entry(self, r: int, c: int) -> DyadicGaussianScalar:
        return DyadicGaussianScalar(int(self.re[r, c]), int(self.im[r, c]), self.k)

    def entries(self) -> list[list[DyadicGaussianScalar]]:
        return [[self.entry(r, c) for c in range(self.dim)] for r in range(self.dim)]

    def __matmul__(self, other: UnitaryMatrix) -> UnitaryMatrix:
        if self.g != other.g:
            raise ValueError("dimension mismatch")
        a, b, c, d = self.re, self.im, other.re, other.im
        bound = max(_absmax(a), _absmax(b)) * max(_absmax(c), _absmax(d)) * 2 * self.dim
        if bound >= _INT64_SAFE:
            a, b, c, d = (x.astype(object) for x in (a, b, c, d))
        return UnitaryMatrix(self.g, a @ c - b @ d, a @ d + b @ c, self.k + other.k)

    def __neg__(self) -> UnitaryMatrix:
        return UnitaryMatrix(self.g, -self.re, -self.im, self.k)

    def scale(self, z: DyadicGaussianScalar) -> UnitaryMatrix:
        z = _coerce(z)
        return UnitaryMatrix(
            self.g, self.re * z.re - self.im * z.im, self.re * z.im + self.im * z.re, self.k + z.k
        )

    def dagger(self) -> UnitaryMatrix:
        return UnitaryMatrix(self.g, self.re.T, -self.im.T, self.k)

    def inverse(self) -> UnitaryMatrix:
        """Inverse of a unitary matrix, i.e. its conjugate transpose."""
        return self.dagger()

    def is_unitary(self) -> bool:
        return (self @ self.dagger()).is_identity()

    def is_identity(self) -> bool:
        return self.k == 0 and not self.im.any() and np.array_equal(self.re, np.eye(self.dim, dtype=np.int64))

    def is_scalar(self) -> bool:
        off = ~np.eye(self.dim, dtype=bool)
        return (
            not self.re[off].any()
            and not self.im[off].any()
            and len(set(self.re.diagonal().tolist())) == 1
            and len(set(self.im.diagonal().tolist())) == 1
        )

    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.g, self.k, tuple(self.re.ravel().tolist()), tuple(self.im.ravel().tolist()))
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, UnitaryMatrix):
            return NotImplemented
        return (
            self.g == other.g
            and self.k == other.k
            and np.array_equal(self.re, other.re)
            and np.array_equal(self.im, other.im)
        )

    def __hash__(self) -> int:
        return hash(self.key())

    def triples(self) -> list[tuple[int, int, int]]:
        """Row-major ``(re, im, k)`` of every entry, each normalized on its own."""
        return [self.entry(r, c).as_triple() for r in range(self.dim) for c in range(self.dim)]

    def to_complex(self) -> np.ndarray:
        return (self.re.astype(float) + 1j * self.im.astype(float)) / float(1 << self.k)

    def __repr__(self) -> str:
        return f"UnitaryMatrix(g={self.g}, k={self.k}, re={self.re.tolist()}, im={self.im.tolist()})"


def _absmax(a: np.ndarray) -> int:
    return int(np.abs(a).max()) if a.size else 0


def _compact(a: np.ndarray) -> np.ndarray:
    """Use int64 storage when every entry fits, otherwise keep Python ints."""
    if a.dtype == object:
        if a.size == 0 or max(abs(int(x)) for x in a.ravel()) < (1 << 62):
            return a.astype(np.int64)
        return a
    return a.astype(np.int64)


def _normalize(re: np.ndarray, im: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray, int]:
    re = _compact(re)
    im = _compact(im)
    if k < 0:
        re = re * (1 << -k)
        im = im * (1 << -k)
        k = 0
    if k == 0:
        return re, im, 0
    acc = 0
    for x in np.concatenate([re.ravel(), im.ravel()]).tolist():
        acc |= int(x)
        if acc & 1:
            return re, im, k
    if acc == 0:
        return re, im, 0
    t = min(k, _trailing_zeros(acc))
    if t:
        re = re // (1 << t)
        im = im // (1 << t)
    return _compact(re), _compact(im), k - t


class ProjectiveUnitaryMatrix:
    """A unitary matrix modulo ``{+I, -I}``, stored via a sign-canonical representative.

    The representative has its first nonzero entry (row-major) with ``re > 0``,
    or ``re == 0`` and ``im > 0``.  The rule is arbitrary but deterministic.
    """

    __slots__ = ("rep",)

    def __init__(self, U: UnitaryMatrix):
        self.rep = canonical_sign(U)

    @property
    def g(self) -> int:
        return self.rep.g

    def is_identity(self) -> bool:
        return self.rep.is_identity()

    def __matmul__(self, other: ProjectiveUnitaryMatrix) -> ProjectiveUnitaryMatrix:
        return ProjectiveUnitaryMatrix(self.rep @ other.rep)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjectiveUnitaryMatrix):
            return NotImplemented
        return self.rep == other.rep

    def __hash__(self) -> int:
        return hash(self.rep)

    def __repr__(self) -> str:
        return f"ProjectiveUnitaryMatrix({self.rep!r})"


def canonical_sign(U: UnitaryMatrix) -> UnitaryMatrix:
    """Representative of ``{U, -U}`` whose first nonzero entry is positive."""
    for r in range(U.dim):
        for c in range(U.dim):
            re, im = int(U.re[r, c]), int(U.im[r, c])
            if re or im:
                return U if (re > 0 or (re == 0 and im > 0)) else -U
    return U
