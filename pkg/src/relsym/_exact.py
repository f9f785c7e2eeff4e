"""Exact rational matrices.

Matrices are numpy object arrays whose entries are elements of sympy's
``QQ`` domain (gmpy2 ``mpq`` when available).  Row reduction, nullspaces and
inverses are delegated to :class:`sympy.polys.matrices.DomainMatrix`.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

Q = QQ.dtype
ZERO = QQ(0)
ONE = QQ(1)


def q(x) -> Q:
    """Convert an int, Fraction, rational string or QQ element to QQ."""
    if isinstance(x, Q):
        return x
    if isinstance(x, str):
        x = Fraction(x.strip())
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    if isinstance(x, (int, np.integer)):
        return QQ(int(x))
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; use Fraction or a 'p/q' string")
    return QQ.convert(x)


def qarray(rows, shape: tuple[int, ...] | None = None) -> np.ndarray:
    """Build an object array of QQ entries from nested sequences."""
    if isinstance(rows, np.ndarray) and rows.dtype == object and shape is None:
        out = np.empty(rows.shape, dtype=object)
        for idx, v in np.ndenumerate(rows):
            out[idx] = q(v)
        return out
    arr = np.array(rows, dtype=object)
    if shape is not None:
        arr = arr.reshape(shape)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = q(v)
    return out


def zeros(m: int, n: int) -> np.ndarray:
    out = np.empty((m, n), dtype=object)
    out.fill(ZERO)
    return out


def eye(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = ONE
    return out


def block_diag(*blocks: np.ndarray) -> np.ndarray:
    m = sum(b.shape[0] for b in blocks)
    n = sum(b.shape[1] for b in blocks)
    out = zeros(m, n)
    i = j = 0
    for b in blocks:
        out[i:i + b.shape[0], j:j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


def hstack(blocks: Sequence[np.ndarray], rows: int | None = None) -> np.ndarray:
    blocks = [b for b in blocks]
    if not blocks:
        return zeros(rows or 0, 0)
    return np.concatenate(blocks, axis=1)


def vstack(blocks: Sequence[np.ndarray], cols: int | None = None) -> np.ndarray:
    blocks = [b for b in blocks]
    if not blocks:
        return zeros(0, cols or 0)
    return np.concatenate(blocks, axis=0)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return a @ b


def to_domain(a: np.ndarray) -> DomainMatrix:
    m, n = a.shape
    if m == 0 or n == 0:
        return DomainMatrix.zeros((m, n), QQ).to_dense()
    return DomainMatrix([[q(v) for v in row] for row in a], (m, n), QQ)


def from_domain(d: DomainMatrix) -> np.ndarray:
    m, n = d.shape
    out = zeros(m, n)
    if m and n:
        for i, row in enumerate(d.to_dense().to_list()):
            out[i, :] = row
    return out


def rref(a: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    m, n = a.shape
    if m == 0 or n == 0:
        return zeros(m, n), ()
    r, piv = to_domain(a).rref()
    return from_domain(r), tuple(piv)


def rank(a: np.ndarray) -> int:
    return len(rref(a)[1])


def nullspace(a: np.ndarray) -> np.ndarray:
    """Columns spanning {x : a x = 0}, in reduced form."""
    m, n = a.shape
    if n == 0:
        return zeros(0, 0)
    if m == 0:
        return eye(n)
    r, piv = rref(a)
    free = [j for j in range(n) if j not in piv]
    out = zeros(n, len(free))
    for c, f in enumerate(free):
        out[f, c] = ONE
        for row, p in enumerate(piv):
            out[p, c] = -r[row, f]
    return out


def column_echelon(b: np.ndarray) -> np.ndarray:
    """Canonical basis (reduced column echelon form) of the column span of b."""
    d = b.shape[0]
    if b.shape[1] == 0 or d == 0:
        return zeros(d, 0)
    r, piv = rref(b.T)
    return r[:len(piv), :].T.copy()


def inverse(a: np.ndarray) -> np.ndarray:
    n, m = a.shape
    if n != m:
        raise ValueError("inverse of a non-square matrix")
    if n == 0:
        return zeros(0, 0)
    try:
        return from_domain(to_domain(a).inv())
    except DMNonInvertibleMatrixError:
        raise ValueError("matrix is singular") from None


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One exact solution x of a x = b (b may have several columns), or None."""
    m, n = a.shape
    k = b.shape[1]
    if m == 0:
        return zeros(n, k)
    aug = hstack([a, b])
    r, piv = rref(aug)
    if any(p >= n for p in piv):
        return None
    x = zeros(n, k)
    for row, p in enumerate(piv):
        x[p, :] = r[row, n:]
    return x


def is_zero(a: np.ndarray) -> bool:
    return all(v == 0 for v in a.flat)


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def neg(a: np.ndarray) -> np.ndarray:
    return qarray(-a) if a.size else a.copy()


def to_strings(a: np.ndarray) -> list:
    """Nested lists of rational strings ("3/4", "-2")."""
    if a.ndim == 1:
        return [str(q(v)) for v in a]
    return [to_strings(row) for row in a]


def from_strings(rows: Iterable, ncols: int | None = None) -> np.ndarray:
    rows = list(rows)
    if not rows:
        return zeros(0, ncols or 0)
    return qarray([[q(v) for v in row] for row in rows])
