"""Small dense linear algebra over Z/p used by the field layer."""

from __future__ import annotations

import numpy as np


def matmod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Return ``a @ b mod p`` for non-negative integer arrays with entries < p."""
    inner = a.shape[-1]
    if inner * (p - 1) ** 2 < 2**52:
        out = np.matmul(a.astype(np.float64), b.astype(np.float64))
        return np.rint(out).astype(np.int64) % p
    return np.matmul(a.astype(object), b.astype(object)).astype(np.int64) % p


def row_reduce(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``mat`` over Z/p and its pivot columns."""
    m = np.array(mat, dtype=np.int64) % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        others = np.nonzero(m[:, c])[0]
        for i in others:
            if i != r:
                m[i] = (m[i] - m[i, c] * m[r]) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(mat: np.ndarray, p: int) -> int:
    if np.size(mat) == 0:
        return 0
    return len(row_reduce(mat, p)[1])


def left_nullspace(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of ``{x : x @ mat = 0 (mod p)}``."""
    mat = np.asarray(mat, dtype=np.int64)
    return nullspace(mat.T, p)


def nullspace(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of ``{x : mat @ x = 0 (mod p)}``."""
    mat = np.asarray(mat, dtype=np.int64)
    cols = mat.shape[1]
    red, pivots = row_reduce(mat, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = (-red[r, f]) % p
    return basis


def span(basis: np.ndarray, p: int) -> np.ndarray:
    """All ``p**k`` Z/p-combinations of the ``k`` basis rows."""
    basis = np.asarray(basis, dtype=np.int64)
    k = basis.shape[0]
    if k == 0:
        return np.zeros((1, basis.shape[1]), dtype=np.int64)
    combos = (np.arange(p**k)[:, None] // (p ** np.arange(k))[None, :]) % p
    return matmod(combos, basis, p)
