"""Exact integer and rational linear algebra.

Matrices are plain row-major tuples of tuples of Python ints (or ``Fraction``
for the rational helpers), so every determinant, minor, Smith form and matrix
power is computed with arbitrary precision.  Index sets are 0-based tuples of
strictly increasing row/column positions.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, SingularMatrixError

Matrix = tuple[tuple[int, ...], ...]

INFINITE = math.inf


def as_matrix(rows: Sequence[Sequence[int]], cols: int | None = None) -> Matrix:
    """Validate and freeze a rectangular integer matrix."""
    out = tuple(tuple(int(x) for x in row) for row in rows)
    widths = {len(r) for r in out}
    if cols is not None:
        widths.add(cols)
    if len(widths) > 1:
        raise DimensionMismatchError(f"ragged matrix: row lengths {sorted(widths)}")
    return out


def shape(A: Sequence[Sequence]) -> tuple[int, int]:
    return len(A), (len(A[0]) if A else 0)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(A: Sequence[Sequence]) -> tuple:
    return tuple(zip(*A))


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> tuple:
    Bt = transpose(B)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def matvec(A: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def mat_pow(A: Sequence[Sequence[int]], e: int) -> Matrix:
    """Exact power by repeated squaring (e >= 0)."""
    result = identity(len(A))
    base = as_matrix(A)
    while e:
        if e & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        e >>= 1
    return result


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = math.gcd(*v)
    return tuple(v) if g in (0, 1) else tuple(x // g for x in v)


def det(A: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    if any(len(r) != n for r in M):
        raise DimensionMismatchError("determinant of a non-square matrix")
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
        pivot = M[k][k]
        for i in range(k + 1, n):
            Mi, Mk = M[i], M[k]
            for j in range(k + 1, n):
                Mi[j] = (pivot * Mi[j] - Mi[k] * Mk[j]) // prev
        prev = pivot
    return sign * M[-1][-1]


def rank(A: Sequence[Sequence]) -> int:
    return len(_rref(A)[1])


def _rref(A: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    M = [[Fraction(x) for x in row] for row in A]
    rows, cols = shape(M)
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
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def solve_rational(A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """Unique solution of the square system A x = b, or None if A is singular."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return None
        M[c], M[p] = M[p], M[c]
        pivot_row = M[c]
        inv = 1 / pivot_row[c]
        for i in range(c + 1, n):
            f = M[i][c]
            if f:
                f *= inv
                Mi = M[i]
                for j in range(c, n + 1):
                    Mi[j] -= f * pivot_row[j]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = M[i][n] - sum(M[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / M[i][i]
    return tuple(x)


def inverse(A: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], ...]:
    """Exact rational inverse; raises SingularMatrixError."""
    n = len(A)
    aug = [list(row) + list(e) for row, e in zip(A, identity(n))]
    M, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return tuple(tuple(row[n:]) for row in M)


def smith_normal_form(A: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U*A*V == D, U and V unimodular.

    D is diagonal with nonnegative entries d_0 | d_1 | ... ; zero entries
    come last.
    """
    D = [list(map(int, r)) for r in A]
    m, n = shape(D)
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        for M in (D, U):
            M[dst] = [a + q * b for a, b in zip(M[dst], M[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for M in (D, V):
            for row in M:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            if best[0] != t:
                swap_rows(t, best[0])
            if best[1] != t:
                swap_cols(t, best[1])
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    clean = clean and D[i][t] == 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    clean = clean and D[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return as_matrix(U), as_matrix(D), as_matrix(V)


def snf_diagonal(A: Sequence[Sequence[int]]) -> list[int]:
    _, D, _ = smith_normal_form(A)
    return [D[i][i] for i in range(min(shape(D)))]


def integer_kernel(A: Sequence[Sequence[int]], n: int | None = None) -> list[tuple[int, ...]]:
    """Lattice basis of {x in Z^n : A x = 0}, read off the Smith form."""
    A = [tuple(r) for r in A]
    if n is None:
        n = len(A[0])
    if not A:
        return [tuple(r) for r in identity(n)]
    _, D, V = smith_normal_form(A)
    r = sum(1 for i in range(min(len(A), n)) if D[i][i])
    return [tuple(V[i][j] for i in range(n)) for j in range(r, n)]


def saturated_basis(gens: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Lattice basis of span_R(gens) intersected with Z^n."""
    return integer_kernel(integer_kernel(gens, n), n)


def lattice_index_sum(gens_a: Sequence[Sequence[int]], gens_b: Sequence[Sequence[int]], n: int):
    """[Z^n : span_Z(gens_a + gens_b)]; ``INFINITE`` when the span is not full rank."""
    vecs = [tuple(v) for v in list(gens_a) + list(gens_b)]
    if any(len(v) != n for v in vecs):
        raise DimensionMismatchError(f"expected vectors of length {n}")
    if len(vecs) < n:
        return INFINITE
    diag = snf_diagonal(transpose(vecs))
    if len(diag) < n or not all(diag[:n]):
        return INFINITE
    return math.prod(diag[:n])


def complement(index_set: Sequence[int], n: int) -> tuple[int, ...]:
    s = set(index_set)
    return tuple(i for i in range(n) if i not in s)


def minor(A: Sequence[Sequence[int]], rows: Sequence[int], cols: Sequence[int]) -> int:
    if len(rows) != len(cols):
        raise DimensionMismatchError(f"minor needs |rows| == |cols|, got {len(rows)} and {len(cols)}")
    return det([[A[i][j] for j in cols] for i in rows])


def compound_matrix(A: Sequence[Sequence[int]], k: int) -> Matrix:
    """k-th compound: all k x k minors, index sets in lexicographic order."""
    n = len(A)
    if not 0 <= k <= n:
        raise ValueError(f"k={k} out of range 0..{n}")
    subsets = list(combinations(range(n), k))
    return tuple(tuple(minor(A, R, S) for S in subsets) for R in subsets)


def complementary_minor(A: Sequence[Sequence[int]], alpha: Sequence[int],
                        beta: Sequence[int]) -> tuple[Fraction, Fraction]:
    """Both sides of |det A * det(A^-1[alpha, beta])| = |det A[beta', alpha']|.

    The left side goes through the exact rational inverse, the right side
    through an integer minor; callers compare them.
    """
    if len(alpha) != len(beta):
        raise DimensionMismatchError("alpha and beta must have equal size")
    n = len(A)
    d = det(A)
    if d == 0:
        raise SingularMatrixError("complementary minors need det != 0")
    inv = inverse(A)
    sub = [[inv[i][j] for j in beta] for i in alpha]
    lhs = abs(d * _det_fraction(sub))
    rhs = Fraction(abs(minor(A, complement(beta, n), complement(alpha, n))))
    return lhs, rhs


def _det_fraction(M: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(M)
    if n == 0:
        return Fraction(1)
    M = [list(r) for r in M]
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            result = -result
        result *= M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return result


def char_poly(A: Sequence[Sequence[int]]) -> list[int]:
    """Coefficients of det(xI - A), highest degree first (monic).

    Faddeev-LeVerrier recursion; every division is exact over Z.
    """
    n = len(A)
    coeffs = [1]
    M = [[0] * n for _ in range(n)]
    c = 1
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        M = [list(r) for r in matmul(A, M)]
        for i in range(n):
            M[i][i] += c
        AM = matmul(A, M)
        tr = sum(AM[i][i] for i in range(n))
        assert tr % k == 0
        c = -tr // k
        coeffs.append(c)
    return coeffs


def _horner(coeffs: Sequence, z: complex) -> tuple[complex, complex]:
    p, dp = 0j, 0j
    for a in coeffs:
        dp = dp * z + p
        p = p * z + a
    return p, dp


def _polished_roots(coeffs: Sequence[int]) -> list[complex]:
    roots = [complex(r) for r in np.roots([float(c) for c in coeffs])] if len(coeffs) > 1 else []
    out = []
    for z in roots:
        for _ in range(8):
            p, dp = _horner(coeffs, z)
            if dp == 0:
                break
            step = p / dp
            z_new = z - step
            if abs(_horner(coeffs, z_new)[0]) >= abs(p):
                break
            z = z_new
            if abs(step) <= 1e-17 * max(1.0, abs(z)):
                break
        out.append(z)
    return out


def eigenvalue_moduli(A: Sequence[Sequence[int]]) -> tuple[float, ...]:
    """Moduli |mu_1| >= ... >= |mu_n| of the eigenvalues, with multiplicity.

    The characteristic polynomial is split into square-free parts exactly so
    the numerical root finder only ever sees simple roots.
    """
    import sympy

    coeffs = char_poly(A)
    x = sympy.Symbol("x")
    _, factors = sympy.Poly(coeffs, x).sqf_list()
    moduli: list[float] = []
    for factor, mult in factors:
        part = [int(c) for c in factor.all_coeffs()]
        for z in _polished_roots(part):
            moduli.extend([abs(z)] * mult)
    return tuple(sorted(moduli, reverse=True))


def max_abs(A: Sequence[Sequence[int]]) -> int:
    return max((abs(x) for row in A for x in row), default=0)


def norm_growth_sequence(A: Sequence[Sequence[int]], k: int, lmax: int) -> list[float]:
    """[||C^l||^(1/l) for l = 1..lmax] with C the k-th compound, max-entry norm."""
    if det(A) == 0:
        raise SingularMatrixError("norm growth requires det != 0")
    C = compound_matrix(A, k)
    P = C
    out = []
    for ell in range(1, lmax + 1):
        if ell > 1:
            P = matmul(P, C)
        out.append(math.exp(math.log(max_abs(P)) / ell))
    return out
