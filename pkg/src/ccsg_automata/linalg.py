"""Dense GF(2) linear algebra on numpy uint8 arrays."""

import numpy as np
from numpy.typing import ArrayLike, NDArray


def gf2_reduce(matrix: ArrayLike) -> tuple[NDArray[np.uint8], list[int]]:
    """Reduced row-echelon form over GF(2).

    Returns:
        (R, pivot_cols): the reduced matrix and its pivot columns (length = rank)
    """
    r = (np.asarray(matrix, dtype=np.uint8) & 1).copy()
    rows, cols = r.shape
    pivot_cols: list[int] = []
    pivot_row = 0
    for col in range(cols):
        if pivot_row == rows:
            break
        candidates = np.flatnonzero(r[pivot_row:, col])
        if candidates.size == 0:
            continue
        found = pivot_row + int(candidates[0])
        if found != pivot_row:
            r[[pivot_row, found]] = r[[found, pivot_row]]
        mask = r[:, col].copy()
        mask[pivot_row] = 0
        r ^= np.outer(mask, r[pivot_row]).astype(np.uint8)
        pivot_cols.append(col)
        pivot_row += 1
    return r, pivot_cols


def gf2_rank(matrix: ArrayLike) -> int:
    return len(gf2_reduce(matrix)[1])


def gf2_solve(a: ArrayLike, b: ArrayLike) -> tuple[NDArray[np.uint8] | None, int]:
    """Solve ``a @ x = b`` over GF(2).

    Free variables are set to zero, so the returned solution is deterministic.

    Returns:
        (x, rank): x is None when the system is inconsistent
    """
    a = np.asarray(a, dtype=np.uint8) & 1
    b = np.asarray(b, dtype=np.uint8).reshape(-1, 1) & 1
    rows, cols = a.shape
    reduced, pivots = gf2_reduce(np.hstack([a, b]))
    # a pivot in the augmented column means 0 = 1
    if pivots and pivots[-1] == cols:
        return None, len(pivots) - 1
    x = np.zeros(cols, dtype=np.uint8)
    for row, col in enumerate(pivots):
        x[col] = reduced[row, cols]
    return x, len(pivots)


def gf2_express(reduced: NDArray[np.uint8], pivots: list[int], vector: ArrayLike) -> int | None:
    """Value of ``vector @ x``, shared by every solution x of a reduced augmented system.

    ``reduced`` and ``pivots`` come from :func:`gf2_reduce` on ``[a | b]`` of a
    consistent system. Returns None when ``vector`` is outside the row space
    of ``a``, i.e. when the solutions disagree on it.
    """
    acc = (np.asarray(vector, dtype=np.uint8) & 1).copy()
    n = acc.shape[0]
    value = 0
    for row, col in enumerate(pivots):
        if col >= n:
            break
        if acc[col]:
            acc ^= reduced[row, :n]
            value ^= int(reduced[row, n])
    return None if acc.any() else value
