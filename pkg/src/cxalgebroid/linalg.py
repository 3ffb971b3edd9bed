"""Exact linear algebra over Q, Q(i) and the rational-function field.

Entries only need field arithmetic and truthiness (nonzero test), so the
same code serves ``Fraction``, ``GaussianRational`` and ``RationalExpr``.
Elimination is fraction-free (Bareiss): each update divides exactly by the
previous pivot, which keeps polynomial matrices polynomial.
"""
from __future__ import annotations

from itertools import combinations, permutations
from typing import Any, Sequence

Matrix = list[list[Any]]


def _pivot_key(v):
    return str(v)


def echelon(rows: Sequence[Sequence[Any]], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Fraction-free row echelon form and the pivot columns.

    Pivot columns are chosen left to right; among candidate rows the one
    whose pivot entry has the lexicographically smallest canonical string
    wins, so results do not depend on input row order ties.
    """
    M = [list(r) for r in rows]
    m = len(M)
    n = ncols if ncols is not None else (len(M[0]) if M else 0)
    prev = None
    pr = 0
    pivots: list[int] = []
    for c in range(n):
        if pr >= m:
            break
        cands = [r for r in range(pr, m) if M[r][c]]
        if not cands:
            continue
        p = min(cands, key=lambda r: (_pivot_key(M[r][c]), r))
        if p != pr:
            M[pr], M[p] = M[p], M[pr]
        piv = M[pr][c]
        for r in range(pr + 1, m):
            a = M[r][c]
            row = M[r]
            prow = M[pr]
            for k in range(c + 1, n):
                v = piv * row[k] - a * prow[k]
                if prev is not None:
                    v = v / prev
                row[k] = v
            row[c] = row[c] * 0
        prev = piv
        pivots.append(c)
        pr += 1
    return M, pivots


def rank(rows: Sequence[Sequence[Any]], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(echelon(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence[Any]], ncols: int, zero, one) -> list[list[Any]]:
    """Basis of {v : rows . v = 0}; one vector per free column, that entry 1."""
    if not rows:
        return [[one if k == j else zero for k in range(ncols)] for j in range(ncols)]
    E, pivots = echelon(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            s = zero
            for k in range(c + 1, ncols):
                if E[r][k] and v[k]:
                    s = s + E[r][k] * v[k]
            v[c] = -s / E[r][c]
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence[Any]], rhs: Sequence[Any], zero, one) -> list[Any] | None:
    """One solution x of rows . x = rhs (free variables set to zero), or None."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    E, pivots = echelon(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [zero] * ncols
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        s = E[r][ncols]
        for k in range(c + 1, ncols):
            if E[r][k] and x[k]:
                s = s - E[r][k] * x[k]
        x[c] = s / E[r][c]
    return x


def transpose(rows: Sequence[Sequence[Any]], nrows_if_empty: int = 0) -> Matrix:
    if not rows:
        return [[] for _ in range(nrows_if_empty)]
    return [list(col) for col in zip(*rows)]


def matvec(rows: Sequence[Sequence[Any]], v: Sequence[Any], zero) -> list[Any]:
    out = []
    for r in rows:
        s = zero
        for a, b in zip(r, v):
            if a and b:
                s = s + a * b
        out.append(s)
    return out


def independent_subset(vectors: Sequence[Sequence[Any]]) -> list[list[Any]]:
    """Greedy maximal linearly independent sublist, preserving order.

    With the vectors as columns, the pivot columns of one echelon pass are
    exactly the greedy choice.
    """
    vs = [list(v) for v in vectors]
    if not vs:
        return []
    _, pivots = echelon(transpose(vs), len(vs))
    return [vs[c] for c in pivots]


def span_contains(basis: Sequence[Sequence[Any]], vectors: Sequence[Sequence[Any]]) -> bool:
    r = rank(list(basis)) if basis else 0
    return rank(list(basis) + list(vectors)) == r if (basis or vectors) else True


def same_span(a: Sequence[Sequence[Any]], b: Sequence[Sequence[Any]]) -> bool:
    ra = rank(list(a)) if a else 0
    rb = rank(list(b)) if b else 0
    if ra != rb:
        return False
    if not a and not b:
        return True
    return rank(list(a) + list(b)) == ra


# ---------------------------------------------------------------------------
# independent oracle


def det_leibniz(M: Sequence[Sequence[Any]], zero, one):
    """Determinant by the permutation expansion; no elimination involved."""
    n = len(M)
    total = zero
    for perm in permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = one
        for row, col in enumerate(perm):
            term = term * M[row][col]
            if not term:
                break
        if not term:
            continue
        total = total - term if inversions % 2 else total + term
    return total


def rank_by_minors(M: Sequence[Sequence[Any]], zero, one) -> int:
    """Largest k with a nonzero k x k minor, by exhaustive search."""
    m = len(M)
    n = len(M[0]) if m else 0
    for k in range(min(m, n), 0, -1):
        for rs in combinations(range(m), k):
            for cs in combinations(range(n), k):
                sub = [[M[r][c] for c in cs] for r in rs]
                if det_leibniz(sub, zero, one):
                    return k
    return 0
