"""Vectors and matrices whose entries are expressions in the base variable."""

from __future__ import annotations

import numpy as np

from . import expr as E
from .expr import SmoothExpr

ExprVec = tuple[SmoothExpr, ...]
ExprMat = tuple[tuple[SmoothExpr, ...], ...]


def as_vec(values) -> ExprVec:
    return tuple(E.as_expr(v) for v in values)


def as_mat(rows) -> ExprMat:
    return tuple(tuple(E.as_expr(v) for v in row) for row in rows)


def const_mat(a) -> ExprMat:
    return as_mat(np.atleast_2d(np.asarray(a, dtype=np.float64)).tolist())


def zeros(k: int, m: int | None = None) -> ExprMat:
    return tuple((E.ZERO,) * (k if m is None else m) for _ in range(k))


def identity(k: int) -> ExprMat:
    return tuple(tuple(E.ONE if i == j else E.ZERO for j in range(k)) for i in range(k))


def mat_vec(m: ExprMat, v: ExprVec) -> ExprVec:
    return tuple(E.total(E.mul(a, b) for a, b in zip(row, v)) for row in m)


def const_mat_vec(m: np.ndarray, v: ExprVec) -> ExprVec:
    """``m @ v`` for a numeric matrix; coefficients near 0 or +-1 are snapped."""
    return tuple(E.linear_combination(row, v) for row in np.atleast_2d(m))


def vec_add(a: ExprVec, b: ExprVec) -> ExprVec:
    return tuple(E.add(x, y) for x, y in zip(a, b))


def vec_sub(a: ExprVec, b: ExprVec) -> ExprVec:
    return tuple(E.sub(x, y) for x, y in zip(a, b))


def vec_scale(h: SmoothExpr, v: ExprVec) -> ExprVec:
    return tuple(E.mul(h, x) for x in v)


def vec_diff(v: ExprVec) -> ExprVec:
    return tuple(E.differentiate(x) for x in v)


def vec_compose(v: ExprVec, inner: SmoothExpr) -> ExprVec:
    return tuple(E.compose(x, inner) for x in v)


def dot(a: ExprVec, b: ExprVec) -> SmoothExpr:
    return E.total(E.mul(x, y) for x, y in zip(a, b))


def mat_add(a: ExprMat, b: ExprMat) -> ExprMat:
    return tuple(tuple(E.add(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_mul(a: ExprMat, b: ExprMat) -> ExprMat:
    cols = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in cols) for row in a)


def transpose(a: ExprMat) -> ExprMat:
    return tuple(zip(*a))


def kron(a: ExprMat, b: ExprMat) -> ExprMat:
    return tuple(tuple(E.mul(x, y) for x in ra for y in rb) for ra in a for rb in b)


def kron_vec(a: ExprVec, b: ExprVec) -> ExprVec:
    return tuple(E.mul(x, y) for x in a for y in b)


def block_diag(a: ExprMat, b: ExprMat) -> ExprMat:
    ka, kb = len(a), len(b)
    rows = [tuple(r) + (E.ZERO,) * kb for r in a]
    rows += [(E.ZERO,) * ka + tuple(r) for r in b]
    return tuple(rows)


def evaluate_vec(v: ExprVec, x: float) -> np.ndarray:
    return np.array([E.evaluate(e, x) for e in v], dtype=np.float64)


def evaluate_mat(m: ExprMat, x: float) -> np.ndarray:
    return np.array([[E.evaluate(e, x) for e in row] for row in m], dtype=np.float64).reshape(len(m), -1)


def evaluate_vec_many(v: ExprVec, xs) -> np.ndarray:
    """Shape ``(len(xs), k)``."""
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    if not v:
        return np.zeros((len(xs), 0))
    return np.stack([E.evaluate_many(e, xs) for e in v], axis=1)


def evaluate_mat_many(m: ExprMat, xs) -> np.ndarray:
    """Shape ``(len(xs), rows, cols)``."""
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    return np.stack([evaluate_vec_many(row, xs) for row in m], axis=1)


def det(m: ExprMat) -> SmoothExpr:
    """Laplace expansion along the first row (fibres here have rank <= 4)."""
    k = len(m)
    if k == 1:
        return m[0][0]
    terms = []
    for j in range(k):
        minor = tuple(row[:j] + row[j + 1:] for row in m[1:])
        t = E.mul(m[0][j], det(minor))
        terms.append(t if j % 2 == 0 else E.neg(t))
    return E.total(terms)


def inverse(m: ExprMat) -> ExprMat:
    """Adjugate over determinant; the caller checks the determinant stays away from 0."""
    k = len(m)
    if any(len(row) != k for row in m):
        raise ValueError("inverse of a non-square matrix")
    d = det(m)
    inv_d = E.recip(d)
    if k == 1:
        return ((inv_d,),)
    out = []
    for i in range(k):
        row = []
        for j in range(k):
            minor = tuple(r[:i] + r[i + 1:] for n, r in enumerate(m) if n != j)
            c = det(minor)
            row.append(E.mul(c if (i + j) % 2 == 0 else E.neg(c), inv_d))
        out.append(tuple(row))
    return tuple(out)


def vec_text(v: ExprVec) -> str:
    return "(" + ", ".join(E.to_text(e) for e in v) + ")"


def mat_text(m: ExprMat) -> str:
    return "[" + "; ".join(", ".join(E.to_text(e) for e in row) for row in m) + "]"
