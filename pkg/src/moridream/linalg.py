"""Exact integer and rational linear algebra.

Matrices are plain sequences of rows. Every function returns fresh lists of
``int`` or ``Fraction`` and never mutates its arguments, so values can be
shared freely between threads.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .errors import DimensionMismatch, RankDeficient

Matrix = Sequence[Sequence[int]]


def _shape(A) -> tuple[int, int]:
    rows = len(A)
    cols = len(A[0]) if rows else 0
    for row in A:
        if len(row) != cols:
            raise DimensionMismatch("ragged matrix")
    return rows, cols


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A) -> list[list]:
    rows, cols = _shape(A)
    return [[A[i][j] for i in range(rows)] for j in range(cols)]


def matmul(A, B) -> list[list]:
    ra, ca = _shape(A)
    rb, cb = _shape(B)
    if ca != rb:
        raise DimensionMismatch(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    Bt = transpose(B) if rb else [[] for _ in range(cb)]
    return [[sum(x * y for x, y in zip(row, col)) for col in Bt] for row in A]


def matvec(A, v) -> list:
    rows, cols = _shape(A)
    if rows and cols != len(v):
        raise DimensionMismatch(f"matrix has {cols} columns, vector has {len(v)} entries")
    return [sum(x * y for x, y in zip(row, v)) for row in A]


def dot(u, v):
    if len(u) != len(v):
        raise DimensionMismatch(f"dot of vectors of length {len(u)} and {len(v)}")
    return sum(x * y for x, y in zip(u, v))


def determinant(A) -> int:
    """Fraction-free Bareiss determinant of a square integer matrix."""
    n, m = _shape(A)
    if n != m:
        raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return 1
    M = [list(row) for row in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rref(A) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    rows, cols = _shape(A)
    M = [[Fraction(x) for x in row] for row in A]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M[:r], pivots


def rank(A) -> int:
    if not A:
        return 0
    return len(rref(A)[1])


def primitive(v) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integral vector on its ray.

    The zero vector is returned unchanged.
    """
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def hermite_normal_form(A) -> tuple[list[list[int]], list[list[int]]]:
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ A == H``. ``H`` is in
    row echelon form, pivots are positive and entries above a pivot lie in
    ``[0, pivot)``. The rank of ``A`` is the number of nonzero rows of ``H``.
    """
    rows, cols = _shape(A)
    H = [[int(x) for x in row] for row in A]
    U = identity(rows)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if H[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(H[i][c]), i))
            H[r], H[p] = H[p], H[r]
            U[r], U[p] = U[p], U[r]
            done = True
            for i in range(r + 1, rows):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                    if H[i][c]:
                        done = False
            if done:
                break
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return H, U


def hnf_rows(A) -> list[list[int]]:
    """Nonzero rows of the Hermite normal form: a canonical lattice basis."""
    H, _ = hermite_normal_form(A)
    return [row for row in H if any(row)]


def lattice_kernel(A, ncols: Optional[int] = None) -> list[list[int]]:
    """Saturated lattice basis of {v in Z^n : A v = 0}, in Hermite normal form.

    Works for any rank. ``ncols`` is required when ``A`` has no rows.
    """
    if not A:
        if ncols is None:
            raise DimensionMismatch("column count unknown for an empty matrix")
        return identity(ncols)
    _, n = _shape(A)
    H, U = hermite_normal_form(transpose(A))
    basis = [U[i] for i in range(n) if not any(H[i])]
    return hnf_rows(basis) if basis else []


def integer_kernel_basis(A) -> list[list[int]]:
    """Lattice basis of the integer kernel of a full-row-rank matrix."""
    rows, _ = _shape(A)
    if rank(A) < rows:
        raise RankDeficient(f"matrix has row rank {rank(A)} < {rows}")
    return lattice_kernel(A)


def rational_solve(A, b) -> Optional[list[Fraction]]:
    """Some rational solution of ``A x = b``, or ``None`` if inconsistent."""
    rows, cols = _shape(A)
    if len(b) != rows:
        raise DimensionMismatch(f"matrix has {rows} rows, right-hand side has {len(b)}")
    aug = [list(row) + [b[i]] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for row, p in zip(R, pivots):
        x[p] = row[cols]
    return x


def integer_solve(A, b) -> Optional[list[int]]:
    """Some integer solution of ``A x = b``, or ``None`` if there is none."""
    rows, cols = _shape(A)
    if len(b) != rows:
        raise DimensionMismatch(f"matrix has {rows} rows, right-hand side has {len(b)}")
    bf = [Fraction(x) for x in b]
    if any(x.denominator != 1 for x in bf):
        return None
    target = [int(x) for x in bf]
    # U A^T = H, so A U^T = H^T and x = U^T y solves A x = b whenever H^T y = b.
    H, U = hermite_normal_form(transpose(A))
    y = [0] * cols
    resid = list(target)
    for k in range(cols):
        row = H[k]
        p = next((j for j, x in enumerate(row) if x), None)
        if p is None:
            break
        if resid[p] % row[p]:
            return None
        y[k] = resid[p] // row[p]
        resid = [r - y[k] * h for r, h in zip(resid, row)]
    if any(resid):
        return None
    return [sum(U[k][j] * y[k] for k in range(cols)) for j in range(cols)]


def saturated_quotient(vectors, dim: int) -> list[list[int]]:
    """Surjection Z^dim -> Z^(dim - s) whose kernel is span(vectors) ∩ Z^dim.

    Rows are a Hermite-normalized basis of the integer vectors orthogonal to
    the span, so the map is ``x -> q @ x``.
    """
    vecs = [list(primitive(v)) for v in vectors if any(v)]
    for v in vecs:
        if len(v) != dim:
            raise DimensionMismatch(f"vector of length {len(v)} in dimension {dim}")
    return lattice_kernel(vecs, ncols=dim)


def orthogonal_complement(vectors, dim: int) -> list[list[int]]:
    """Integer basis (HNF) of the orthogonal complement of span(vectors)."""
    return saturated_quotient(vectors, dim)
