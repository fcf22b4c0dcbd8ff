"""Plain-text matrix and monodromy files.

Matrix file::

    g 2 mod 0
    1 0 0 0
    0 1 0 0
    0 0 1 0
    0 0 0 1

``mod 0`` means integer entries; any other modulus must be a power of two.
Monodromy file: header ``g <rank> h <handles>`` followed by 2h matrix bodies in
the order a_1, b_1, ..., a_h, b_h.  Blank lines and ``#`` comments are ignored.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

from .gf2 import NotSymplecticError
from .symplectic import ModularSymplecticMatrix, SymplecticIntegerMatrix
from .theta import SurfaceRelationError, validate_monodromy


class ParseError(ValueError):
    """Malformed input; ``line`` and ``column`` are 1-based."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int


def _lines(text: str) -> Iterator[tuple[int, list[_Token]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = []
        pos = 0
        for part in body.split():
            col = body.index(part, pos)
            pos = col + len(part)
            toks.append(_Token(part, lineno, col + 1))
        if toks:
            yield lineno, toks


def _int(tok: _Token) -> int:
    try:
        return int(tok.text)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok.text!r}", tok.line, tok.column) from None


def _header(it, keys: tuple[str, str], last_line: int) -> tuple[int, int, int]:
    try:
        lineno, toks = next(it)
    except StopIteration:
        raise ParseError("missing header", last_line + 1) from None
    if len(toks) != 4 or toks[0].text != keys[0] or toks[2].text != keys[1]:
        col = toks[0].column
        raise ParseError(f"expected header '{keys[0]} <int> {keys[1]} <int>'", lineno, col)
    return lineno, _int(toks[1]), _int(toks[3])


def _body(it, g: int, header_line: int, what: str) -> tuple[list[list[int]], int]:
    n = 2 * g
    rows = []
    first = None
    lineno = header_line
    for _ in range(n):
        try:
            lineno, toks = next(it)
        except StopIteration:
            raise ParseError(f"{what}: expected {n} rows, found {len(rows)}", lineno + 1) from None
        if first is None:
            first = lineno
        if len(toks) != n:
            col = toks[n].column if len(toks) > n else toks[-1].column + len(toks[-1].text)
            raise ParseError(f"{what}: expected {n} entries, found {len(toks)}", lineno, col)
        rows.append([_int(t) for t in toks])
    return rows, first


def _check_rank(g: int, line: int) -> None:
    if g < 1:
        raise ParseError("rank g must be at least 1", line, 3)


def _build(rows, g: int, modulus: int, line: int):
    try:
        if modulus == 0:
            return SymplecticIntegerMatrix(rows, g)
        return ModularSymplecticMatrix(rows, modulus, g)
    except NotSymplecticError as exc:
        raise ParseError(str(exc), line) from None


def _trailing(it) -> None:
    for lineno, toks in it:
        raise ParseError("unexpected trailing content", lineno, toks[0].column)


def parse_matrix(text: str):
    """Parse a matrix file; returns a ``SymplecticIntegerMatrix`` for ``mod 0``."""
    it = _lines(text)
    line, g, modulus = _header(it, ("g", "mod"), 0)
    _check_rank(g, line)
    if modulus < 0 or (modulus and (modulus < 2 or modulus & (modulus - 1))):
        raise ParseError("modulus must be 0 or a power of two", line, 7)
    rows, first = _body(it, g, line, "matrix")
    _trailing(it)
    return _build(rows, g, modulus, first)


def parse_monodromy(text: str) -> list[tuple[SymplecticIntegerMatrix, SymplecticIntegerMatrix]]:
    """Parse a monodromy file and check the surface relation exactly."""
    it = _lines(text)
    line, g, h = _header(it, ("g", "h"), 0)
    _check_rank(g, line)
    if h < 1:
        raise ParseError("need at least one handle", line, 7)
    mats = []
    last = line
    for k in range(2 * h):
        name = f"{'ab'[k % 2]}_{k // 2 + 1}"
        rows, first = _body(it, g, last, name)
        last = first + 2 * g - 1
        mats.append(_build(rows, g, 0, first))
    _trailing(it)
    pairs = list(zip(mats[0::2], mats[1::2]))
    return validate_monodromy(pairs)


def _entries(X) -> list[list[int]]:
    if isinstance(X, (SymplecticIntegerMatrix, ModularSymplecticMatrix)):
        X = X.entries
    return [[int(x) for x in row] for row in X]


def format_body(X) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in _entries(X)) + "\n"


def format_matrix(X, modulus: int | None = None) -> str:
    if modulus is None:
        modulus = X.modulus if isinstance(X, ModularSymplecticMatrix) else 0
    rows = _entries(X)
    return f"g {len(rows) // 2} mod {modulus}\n" + format_body(rows)


def format_monodromy(pairs: Sequence[tuple]) -> str:
    g = len(_entries(pairs[0][0])) // 2
    out = [f"g {g} h {len(pairs)}\n"]
    for a, b in pairs:
        out.append(format_body(a))
        out.append(format_body(b))
    return "".join(out)


def read_matrix_file(path) -> object:
    return parse_matrix(Path(path).read_text(encoding="utf-8"))


def write_matrix_file(path, X, modulus: int | None = None) -> None:
    Path(path).write_text(format_matrix(X, modulus), encoding="utf-8")


def read_monodromy_file(path):
    return parse_monodromy(Path(path).read_text(encoding="utf-8"))


def write_monodromy_file(path, pairs) -> None:
    Path(path).write_text(format_monodromy(pairs), encoding="utf-8")


__all__ = [
    "ParseError",
    "SurfaceRelationError",
    "format_matrix",
    "format_monodromy",
    "parse_matrix",
    "parse_monodromy",
    "read_matrix_file",
    "read_monodromy_file",
    "write_matrix_file",
    "write_monodromy_file",
]
