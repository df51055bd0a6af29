"""Dense exact linear algebra over F_p on top of numpy int64 arrays.

Matrices are numpy arrays with entries in {0, ..., p-1}.  Everything here is
plain row reduction; sizes stay in the low thousands.
"""

from __future__ import annotations

import numpy as np


def rref(mat: np.ndarray, p: int):
    """Reduced row echelon form mod p.  Returns (rref_matrix, pivot_columns)."""
    m = np.array(mat, dtype=np.int64) % p
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            m[[r, i]] = m[[i, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        mask = np.nonzero(col)[0]
        if mask.size:
            m[mask] = (m[mask] - np.outer(col[mask], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(mat: np.ndarray, p: int) -> int:
    if mat.size == 0:
        return 0
    return rref(mat, p)[0].shape[0]


def nullspace(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right nullspace, rows = basis vectors."""
    rows, cols = mat.shape
    red, pivots = rref(mat, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-red[i, fc]) % p
    return basis


class RowReducer:
    """Reduction against a fixed relation space, with a preferred column order.

    Columns listed first in ``order`` are eliminated first, so vectors reduce
    onto the span of the trailing columns whenever the relations allow it.
    """

    def __init__(self, relations: np.ndarray, ncols: int, order: list[int], p: int):
        self.p = p
        self.ncols = ncols
        self.order = list(order)
        self.inv_order = [0] * ncols
        for pos, c in enumerate(self.order):
            self.inv_order[c] = pos
        if relations.size:
            perm = relations[:, self.order] % p
            self.red, self.pivots = rref(perm, p)
        else:
            self.red = np.zeros((0, ncols), dtype=np.int64)
            self.pivots = []
        self.pivot_set = set(self.pivots)

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        """Return vec mod the relation space, in original column numbering."""
        v = np.array(vec, dtype=np.int64)[self.order] % self.p
        for i, pc in enumerate(self.pivots):
            if v[pc]:
                v = (v - v[pc] * self.red[i]) % self.p
        out = np.zeros(self.ncols, dtype=np.int64)
        out[self.order] = v
        return out

    def reduced_dim(self) -> int:
        return self.ncols - len(self.pivots)
