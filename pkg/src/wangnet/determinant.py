"""Determinants of structured symmetric matrices.

A structured symmetric matrix has off-diagonal entries ``-x_ij`` and diagonal
entries ``x'_ii + sum_j x_ij``.  Its determinant equals the Wang product of
the row forms ``x'_ii + sum_j x_ij``; a Leibniz expansion and a fraction-free
elimination are provided as independent numeric checks.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .algebra import ZERO, Symbol, SymbolLike, WangPoly, wang_product

LEIBNIZ_MAX_N = 9


@dataclass(frozen=True)
class StructuredSymMatrix:
    """Symmetric symbolic matrix kept in row-form representation.

    ``offdiag`` maps ``(i, j)`` with ``i < j`` to the polynomial ``x_ij``; the
    numeric entry at ``(i, j)`` and ``(j, i)`` is ``-x_ij``.  ``diag_extra``
    maps ``i`` to ``x'_ii``.  Missing keys are zero.
    """

    n: int
    offdiag: Mapping[tuple[int, int], WangPoly] = field(default_factory=dict)
    diag_extra: Mapping[int, WangPoly] = field(default_factory=dict)
    labels: tuple = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("dimension must be non-negative")
        clean = {}
        for (i, j), p in self.offdiag.items():
            if i == j:
                raise ValueError(f"off-diagonal key ({i}, {j}) lies on the diagonal")
            if i > j:
                i, j = j, i
            self._check(i)
            self._check(j)
            clean[(i, j)] = clean.get((i, j), ZERO) + p
        for i in self.diag_extra:
            self._check(i)
        object.__setattr__(self, "offdiag", clean)
        object.__setattr__(self, "diag_extra", dict(self.diag_extra))
        if self.labels and len(self.labels) != self.n:
            raise ValueError("labels must match the dimension")

    def _check(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise IndexError(f"index {i} out of range for dimension {self.n}")

    @classmethod
    def build(
        cls,
        n: int,
        offdiag: Mapping[tuple[int, int], SymbolLike] | None = None,
        diag_extra: Mapping[int, SymbolLike] | None = None,
    ) -> "StructuredSymMatrix":
        """Builder taking one symbol per entry."""
        return cls(
            n,
            {k: WangPoly.symbol(v) for k, v in (offdiag or {}).items()},
            {k: WangPoly.symbol(v) for k, v in (diag_extra or {}).items()},
        )

    def off(self, i: int, j: int) -> WangPoly:
        if i > j:
            i, j = j, i
        return self.offdiag.get((i, j), ZERO)

    def row_sum(self, i: int) -> WangPoly:
        self._check(i)
        acc = self.diag_extra.get(i, ZERO)
        for (p, q), poly in self.offdiag.items():
            if p == i or q == i:
                acc = acc + poly
        return acc

    def rows(self) -> list[WangPoly]:
        return [self.row_sum(i) for i in range(self.n)]

    def symbols(self) -> set[Symbol]:
        out: set[Symbol] = set()
        for p in itertools.chain(self.offdiag.values(), self.diag_extra.values()):
            out |= p.symbols()
        return out

    def without(self, drop: Iterable[int]) -> "StructuredSymMatrix":
        """Delete rows/columns; couplings to deleted indices fold into the diagonal.

        This is the matrix obtained when the deleted nodes (or loops) are
        tied to the reference, e.g. the ``S_1`` minor of a node system.
        """
        drop = set(drop)
        keep = [i for i in range(self.n) if i not in drop]
        pos = {old: new for new, old in enumerate(keep)}
        off: dict[tuple[int, int], WangPoly] = {}
        diag = {pos[i]: p for i, p in self.diag_extra.items() if i in pos}
        for (i, j), p in self.offdiag.items():
            if i in pos and j in pos:
                off[(pos[i], pos[j])] = p
            elif i in pos:
                diag[pos[i]] = diag.get(pos[i], ZERO) + p
            elif j in pos:
                diag[pos[j]] = diag.get(pos[j], ZERO) + p
        labels = tuple(self.labels[i] for i in keep) if self.labels else ()
        return StructuredSymMatrix(len(keep), off, diag, labels)

    def instantiate(self, assignment: Mapping[SymbolLike, complex]) -> list[list]:
        """Dense numeric matrix after substituting values for every symbol."""
        n = self.n
        rows = [[0] * n for _ in range(n)]
        for i, p in self.diag_extra.items():
            rows[i][i] += p.evaluate(assignment)
        for (i, j), p in self.offdiag.items():
            v = p.evaluate(assignment)
            rows[i][j] -= v
            rows[j][i] -= v
            rows[i][i] += v
            rows[j][j] += v
        return rows


def row_sum(m: StructuredSymMatrix, i: int) -> WangPoly:
    return m.row_sum(i)


def wang_det(m: StructuredSymMatrix) -> WangPoly:
    """Determinant as the Wang product of the row forms."""
    return wang_product(m.rows())


def _parity(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leibniz_det(a: Sequence[Sequence]) -> complex:
    """Signed permutation expansion; exact for integer entries.

    Refuses ``n > 9`` (the expansion has ``n!`` terms).
    """
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    if n > LEIBNIZ_MAX_N:
        raise ValueError(f"leibniz_det refuses n={n} > {LEIBNIZ_MAX_N}")
    total = 0
    for perm in itertools.permutations(range(n)):
        prod = 1
        for i, j in enumerate(perm):
            prod *= a[i][j]
            if prod == 0:
                break
        else:
            total += _parity(perm) * prod
    return total


def bareiss_det(a: Sequence[Sequence]):
    """Fraction-free Gaussian elimination; exact for integer entries."""
    m = [list(row) for row in a]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                if isinstance(num, int) and isinstance(prev, int):
                    m[i][j] = num // prev
                else:
                    m[i][j] = num / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def numeric_det_via_wang(m: StructuredSymMatrix, assignment: Mapping[SymbolLike, complex]):
    return wang_det(m).evaluate(assignment)


def expansion_size(m: StructuredSymMatrix) -> int:
    """Number of raw products in the ordinary expansion of the row forms."""
    return math.prod(len(r) for r in m.rows())
