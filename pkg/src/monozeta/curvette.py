"""Curvette multiplicity matrices.

Row ``i`` of the matrix holds the multiplicities ``a[i][j]`` of the
exceptional components ``E_j`` in the pullback of the image of a curvette
(or, in higher dimension, a generic hypersurface) of ``E_i``. In dimension 2
the matrix is the inverse of minus the intersection matrix; in higher
dimension it is completed column by column from the centres' incidence sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

IntMatrix = tuple[tuple[int, ...], ...]


class CurvetteError(ValueError):
    pass


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Integer determinant by fraction-free elimination."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact: Bareiss guarantees divisibility
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def exact_inverse(rows: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(rows)
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise CurvetteError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def is_symmetric(a: Sequence[Sequence[int]]) -> bool:
    return all(a[i][j] == a[j][i] for i in range(len(a)) for j in range(i))


def column_gcds(a: Sequence[Sequence[int]]) -> list[int]:
    return [math.gcd(*col) for col in zip(*a)] if a else []


@dataclass(frozen=True)
class TheoremReport:
    det: int
    column_gcds: tuple[int, ...]
    symmetric: bool
    positive: bool
    dim: int

    @property
    def passed(self) -> bool:
        ok = self.det == 1 and all(g == 1 for g in self.column_gcds) and self.positive
        return ok and (self.symmetric or self.dim != 2)

    def to_json(self) -> dict:
        return {
            "det": self.det,
            "column_gcds": list(self.column_gcds),
            "symmetric": self.symmetric,
            "positive": self.positive,
            "passed": self.passed,
        }


def check_theorems(a: Sequence[Sequence[int]], dim: int) -> TheoremReport:
    return TheoremReport(
        det=bareiss_det(a),
        column_gcds=tuple(column_gcds(a)),
        symmetric=is_symmetric(a),
        positive=all(x >= 1 for r in a for x in r),
        dim=dim,
    )


def curvette_matrix_2d(intersection: Sequence[Sequence[int]]) -> IntMatrix:
    """``a = (-M)^-1`` for the intersection matrix ``M`` of a point blow-up
    sequence on a surface."""
    neg = [[-x for x in r] for r in intersection]
    if bareiss_det(neg) != 1:
        raise CurvetteError("non-unimodular intersection matrix")
    inv = exact_inverse(neg)
    if any(x.denominator != 1 for r in inv for x in r):
        raise CurvetteError("internal consistency error: non-integer inverse")
    a = tuple(tuple(int(x) for x in r) for r in inv)
    report = check_theorems(a, 2)
    if not report.passed:
        raise CurvetteError(f"internal consistency error: curvette matrix fails {report.to_json()}")
    return a


def curvette_matrix_hd(j_sets: Sequence[Sequence[int]], lower_rows: Sequence[Sequence[int]]) -> IntMatrix:
    """Complete the curvette matrix of a blow-up sequence in any dimension.

    ``j_sets[k]`` lists the (0-based) earlier components containing the
    k-th centre; ``lower_rows[k]`` gives ``a[k][j]`` for ``j < k``. Above the
    diagonal each new column is the sum of the columns in its incidence set,
    and ``a[k][k] = sum(a[k][j] for j in J_k) + 1``.
    """
    n = len(j_sets)
    if len(lower_rows) != n:
        raise CurvetteError("need one lower row per centre")
    a = [[0] * n for _ in range(n)]
    for k in range(n):
        js = list(j_sets[k])
        if any(j < 0 or j >= k for j in js):
            raise CurvetteError(f"centre {k + 1} lies on a component not yet created")
        row = list(lower_rows[k])
        if len(row) != k:
            raise CurvetteError(f"lower row {k + 1} needs {k} entries, got {len(row)}")
        a[k][:k] = row
        for i in range(k):
            a[i][k] = sum(a[i][j] for j in js)
        a[k][k] = sum(a[k][j] for j in js) + 1
    out = tuple(tuple(r) for r in a)
    if bareiss_det(out) != 1 or any(x < 1 for r in out for x in r):
        raise CurvetteError("inconsistent lower-row data")
    return out
