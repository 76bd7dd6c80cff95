"""Small GF(2) linear algebra helpers using int bitsets.

Rows are integers whose bit j is the entry in column j.
"""

from __future__ import annotations


def rref(rows: list[int], n_cols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    work = [r for r in rows if r]
    pivots: list[int] = []
    ri = 0
    for col in range(n_cols):
        piv = None
        for r in range(ri, len(work)):
            if (work[r] >> col) & 1:
                piv = r
                break
        if piv is None:
            continue
        work[ri], work[piv] = work[piv], work[ri]
        for r in range(len(work)):
            if r != ri and ((work[r] >> col) & 1):
                work[r] ^= work[ri]
        pivots.append(col)
        ri += 1
        if ri == len(work):
            break
    return work[:ri], pivots


def rank(rows: list[int], n_cols: int) -> int:
    return len(rref(rows, n_cols)[0])


def in_rowspan(vec: int, rows: list[int], n_cols: int) -> bool:
    reduced, pivots = rref(rows, n_cols)
    for row, col in zip(reduced, pivots):
        if (vec >> col) & 1:
            vec ^= row
    return vec == 0


def kernel_basis(rows: list[int], n_cols: int) -> list[int]:
    """Basis of {v : M v = 0} where row i of M is rows[i] over n_cols columns."""
    reduced, pivots = rref(rows, n_cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(n_cols):
        if free in pivot_set:
            continue
        v = 1 << free
        for row, col in zip(reduced, pivots):
            if (row >> free) & 1:
                v |= 1 << col
        basis.append(v)
    return basis
