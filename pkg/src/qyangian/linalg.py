"""Exact linear algebra over Q (Gauss-Jordan on Fraction lists)."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Sequence


class SingularMatrix(ArithmeticError):
    pass


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def inverse(mat: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    n = len(mat)
    a = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise SingularMatrix(f"singular at column {c}")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


def matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))] for i in range(len(a))]


def vectorize(items: Sequence[Dict[Hashable, Fraction]]):
    """Turn sparse dict-vectors into dense rows over a shared sorted key set."""
    keys = sorted({k for it in items for k in it})
    index = {k: i for i, k in enumerate(keys)}
    rows = []
    for it in items:
        row = [Fraction(0)] * len(keys)
        for k, c in it.items():
            row[index[k]] = c
        rows.append(row)
    return keys, rows


def _entries(x) -> Dict[Hashable, Fraction]:
    return x.entries if hasattr(x, "entries") else x


def solve_in_span(target, basis) -> Optional[List[Fraction]]:
    """Exact coordinates of ``target`` in the span of ``basis``.

    Vectors are dicts or objects exposing such a dict as ``.entries``.
    """
    keys, rows = vectorize([_entries(b) for b in basis] + [_entries(target)])
    if not keys:
        return [Fraction(0)] * len(basis)
    nb = len(basis)
    # columns = basis vectors, augmented by target
    aug = [[rows[j][r] for j in range(nb)] + [rows[nb][r]] for r in range(len(keys))]
    m = aug
    piv_cols = []
    r = 0
    for c in range(nb):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    if any(m[i][nb] != 0 for i in range(r, len(m))):
        return None
    coords = [Fraction(0)] * nb
    for i, c in enumerate(piv_cols):
        coords[c] = m[i][nb]
    return coords
