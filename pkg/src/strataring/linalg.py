"""Exact rank computations for small integer matrices.

Rank decisions drive dimension formulas and emptiness checks, so no floating
point is allowed anywhere.  Matrices here are tiny (rows = residue conditions
plus one residue-theorem row per vertex), so plain fraction-free elimination
is more than fast enough.
"""

from __future__ import annotations


def rank(rows):
    """Rank of an integer matrix, given as a list of equal-length rows.

    Fraction-free Gaussian elimination (division-free row combination):

        >>> rank([[1, 1, 0, 1], [1, 0, 1, 0], [0, 0, 1, 1]])
        3
        >>> rank([[1, 1], [1, 1]])
        1
        >>> rank([])
        0
    """
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][col]
        for i in range(r + 1, len(m)):
            if m[i][col] != 0:
                f = m[i][col]
                m[i] = [pv * a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def in_row_span(row, rows):
    """True iff ``row`` lies in the row span of ``rows`` (over the rationals)."""
    base = [list(r) for r in rows]
    return rank(base + [list(row)]) == rank(base)
