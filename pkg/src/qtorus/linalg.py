"""Exact linear algebra over the cyclotomic field.

Plain Gauss-Jordan elimination on matrices of CycloElement entries; every
pivot uses the exact field inverse, so ranks and kernels are certificates,
not numerics.
"""

from __future__ import annotations

from .cyclotomic import CycloContext, CycloElement


def nullspace(ctx: CycloContext, rows: list[list[CycloElement]],
              ncols: int) -> tuple[int, list[list[CycloElement]]]:
    """(rank, kernel basis) of the linear map given by a list of rows.

    Each row has ncols entries; kernel vectors are returned as coefficient
    lists of length ncols with a unit leading free coordinate.
    """
    mat = [list(row) for row in rows]
    nrows = len(mat)
    pivots: list[tuple[int, int]] = []   # (row, col)
    prow = 0
    for col in range(ncols):
        sel = None
        for i in range(prow, nrows):
            if not mat[i][col].is_zero:
                sel = i
                break
        if sel is None:
            continue
        mat[prow], mat[sel] = mat[sel], mat[prow]
        inv = mat[prow][col].inverse()
        mat[prow] = [e * inv for e in mat[prow]]
        for i in range(nrows):
            if i != prow and not mat[i][col].is_zero:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[prow])]
        pivots.append((prow, col))
        prow += 1
        if prow == nrows:
            break
    pivot_cols = {c for _, c in pivots}
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    basis = []
    for fc in free_cols:
        vec = [ctx.zero] * ncols
        vec[fc] = ctx.one
        for row, col in pivots:
            vec[col] = -mat[row][fc]
        basis.append(vec)
    return len(pivots), basis
