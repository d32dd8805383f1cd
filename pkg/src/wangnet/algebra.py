"""Wang algebra kernel.

Polynomials here have coefficients in {0, 1} and obey the two rules

    x + x = 0        x * x = 0

Both rules are enforced structurally: a monomial is a *set* of symbols
(stored as a bitmask over interned symbol ids, so a repeated symbol cannot
be represented) and a polynomial is a *set* of monomials (adding a monomial
that is already present removes it).

The number of terms of a product can grow combinatorially with the number
of factors; no degree cap is imposed.
"""
from __future__ import annotations

import math
import threading
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union


class MissingAssignmentError(KeyError):
    """A polynomial was evaluated without a value for one of its symbols."""


@dataclass(frozen=True, order=True)
class Symbol:
    id: int
    name: str

    def __str__(self) -> str:
        return self.name


_lock = threading.Lock()
_by_name: dict[str, Symbol] = {}
_by_id: list[Symbol] = []


def intern_symbol(name: str) -> Symbol:
    """Return the unique :class:`Symbol` for ``name``, creating it on first use."""
    if not isinstance(name, str) or not name:
        raise ValueError("symbol name must be a non-empty string")
    sym = _by_name.get(name)
    if sym is not None:
        return sym
    with _lock:
        sym = _by_name.get(name)
        if sym is None:
            sym = Symbol(len(_by_id), name)
            _by_id.append(sym)
            _by_name[name] = sym
    return sym


def symbol_from_id(sid: int) -> Symbol:
    return _by_id[sid]


def symbols(names: str) -> tuple[Symbol, ...]:
    """Intern several whitespace-separated names at once: ``symbols("a b c")``."""
    return tuple(intern_symbol(n) for n in names.split())


SymbolLike = Union[Symbol, str]


def _as_symbol(x: SymbolLike) -> Symbol:
    return x if isinstance(x, Symbol) else intern_symbol(x)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def monomial_ids(mask: int) -> tuple[int, ...]:
    """Strictly increasing symbol ids of a monomial bitmask."""
    return tuple(_bits(mask))


class WangPoly:
    """An element of the Wang algebra: a set of squarefree monomials.

    Instances are immutable and hashable.  ``WangPoly()`` is 0 and
    ``WangPoly.one()`` is 1 (the polynomial holding the empty monomial).
    """

    __slots__ = ("_terms", "_rows")

    def __init__(self, terms: Iterable[int] = ()):
        self._terms = frozenset(terms)
        self._rows = None

    # construction -------------------------------------------------------
    @classmethod
    def one(cls) -> "WangPoly":
        return cls((0,))

    @classmethod
    def symbol(cls, sym: SymbolLike) -> "WangPoly":
        return cls((1 << _as_symbol(sym).id,))

    @classmethod
    def linear(cls, syms: Iterable[SymbolLike]) -> "WangPoly":
        """Sum of the given symbols (repeats cancel in pairs)."""
        out: set[int] = set()
        for s in syms:
            out ^= {1 << _as_symbol(s).id}
        return cls(out)

    @classmethod
    def from_monomials(cls, monomials: Iterable[Iterable[SymbolLike]]) -> "WangPoly":
        """Build from symbol groups; a group with a repeated symbol is 0."""
        out: set[int] = set()
        for group in monomials:
            mask = 0
            for s in group:
                bit = 1 << _as_symbol(s).id
                if mask & bit:
                    break
                mask |= bit
            else:
                out ^= {mask}
        return cls(out)

    # inspection ---------------------------------------------------------
    @property
    def masks(self) -> frozenset[int]:
        return self._terms

    def monomials(self) -> list[tuple[Symbol, ...]]:
        """Terms in printing order, each as a name-sorted tuple of symbols."""
        rows = [
            tuple(sorted((_by_id[i] for i in _bits(m)), key=lambda s: s.name))
            for m in self._terms
        ]
        rows.sort(key=lambda t: [s.name for s in t])
        return rows

    def symbols(self) -> set[Symbol]:
        mask = 0
        for m in self._terms:
            mask |= m
        return {_by_id[i] for i in _bits(mask)}

    def degrees(self) -> set[int]:
        return {bin(m).count("1") for m in self._terms}

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self.monomials())

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, WangPoly):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        if other == 1:
            return self._terms == {0}
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono in self.monomials():
            parts.append("".join(s.name for s in mono) if mono else "1")
        return "+".join(parts)

    def __repr__(self) -> str:
        return f"WangPoly({str(self)!r})"

    # arithmetic ---------------------------------------------------------
    def __add__(self, other: "WangPoly") -> "WangPoly":
        if not isinstance(other, WangPoly):
            return NotImplemented
        return WangPoly(self._terms ^ other._terms)

    __sub__ = __add__

    def __mul__(self, other: "WangPoly") -> "WangPoly":
        if not isinstance(other, WangPoly):
            return NotImplemented
        out: set[int] = set()
        for p in self._terms:
            for q in other._terms:
                if p & q:
                    continue
                m = p | q
                if m in out:
                    out.remove(m)
                else:
                    out.add(m)
        return WangPoly(out)

    # numeric substitution ----------------------------------------------
    def _index_rows(self) -> list[tuple[int, ...]]:
        if self._rows is None:
            self._rows = [tuple(_bits(m)) for m in self._terms]
        return self._rows

    def evaluate(self, assignment: Mapping[SymbolLike, complex]):
        """Substitute numbers for symbols and sum with ordinary arithmetic.

        Integer inputs give an exact integer result.
        """
        values: dict[int, object] = {}
        for key, val in assignment.items():
            values[_as_symbol(key).id] = val
        total = 0
        for row in self._index_rows():
            try:
                total += math.prod(values[i] for i in row)
            except KeyError as exc:
                raise MissingAssignmentError(
                    f"no value assigned to symbol {_by_id[exc.args[0]].name!r}"
                ) from None
        return total


ZERO = WangPoly()
ONE = WangPoly.one()


def add(p: WangPoly, q: WangPoly) -> WangPoly:
    return p + q


def mul(p: WangPoly, q: WangPoly) -> WangPoly:
    return p * q


def wang_product(forms: Sequence[WangPoly]) -> WangPoly:
    """Left fold of :func:`mul` over ``forms``; the empty product is 1."""
    acc = ONE
    for f in forms:
        acc = acc * f
        if not acc:
            break
    return acc


def evaluate(p: WangPoly, assignment: Mapping[SymbolLike, complex]):
    return p.evaluate(assignment)


def ordinary_expansion(forms: Sequence[WangPoly]) -> Counter:
    """Expand a product of linear forms with ordinary commutative rules.

    Returns a Counter keyed by sorted symbol-id tuples (repeats allowed,
    so ``b*b`` is kept as ``(b, b)``).  The total count is the number of
    raw products before Wang's rules remove anything.
    """
    acc: Counter = Counter({(): 1})
    for f in forms:
        nxt: Counter = Counter()
        for mono, k in acc.items():
            for q in f.masks:
                nxt[tuple(sorted(mono + monomial_ids(q)))] += k
        acc = nxt
    return acc


def reduce_ordinary(expansion: Counter) -> WangPoly:
    """Apply x*x = 0 and x + x = 0 to an ordinary expansion."""
    out: set[int] = set()
    for mono, k in expansion.items():
        if len(set(mono)) != len(mono) or k % 2 == 0:
            continue
        mask = 0
        for i in mono:
            mask |= 1 << i
        out ^= {mask}
    return WangPoly(out)
