"""Small dense linear algebra with an explicit pivot threshold."""

import numpy as np

PIVOT_TOL = 1e-10


def rref(a, tol: float = PIVOT_TOL):
    """Reduced row echelon form by Gauss-Jordan elimination with partial pivoting."""
    m = np.array(a, dtype=np.float64, copy=True)
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(m[r:, c])))
        if abs(m[p, c]) <= tol:
            m[r:, c] = 0.0
            continue
        m[[r, p]] = m[[p, r]]
        m[r] /= m[r, c]
        for i in range(rows):
            if i != r:
                m[i] -= m[i, c] * m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a, tol: float = PIVOT_TOL) -> int:
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    if a.size == 0:
        return 0
    return len(rref(a, tol)[1])


def _orthonormalize(basis):
    if basis.shape[1] == 0:
        return basis
    q, _ = np.linalg.qr(basis)
    q = q[:, : basis.shape[1]]
    for j in range(q.shape[1]):
        col = q[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-14)
        if nz.size and col[nz[0]] < 0:
            q[:, j] = -col
    q[np.abs(q) < 1e-15] = 0.0
    return q


def null_space(a, tol: float = PIVOT_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of ``{v : a v = 0}``."""
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    n = a.shape[1]
    r, pivots = rref(a, tol)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((n, len(free)))
    for j, c in enumerate(free):
        basis[c, j] = 1.0
        for i, p in enumerate(pivots):
            basis[p, j] = -r[i, c]
    return _orthonormalize(basis)


def orthogonal_complement(basis: np.ndarray, n: int) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of ``span(basis)`` in ``R^n``."""
    if basis.shape[1] == 0:
        return np.eye(n)
    return null_space(basis.T)
