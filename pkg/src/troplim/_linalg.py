"""Exact linear algebra over the rationals.

Small dense routines on tuples: row reduction, rank, kernels, determinants,
affine solves.  Everything is exact (int / fractions.Fraction); no floats.
Matrices are sequences of rows; rows are sequences of int or Fraction.
Sizes are desk scale (rank <= 6 after homogenization), so clarity beats
asymptotics throughout.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]
IVec = tuple[int, ...]


def dot(u: Sequence, v: Sequence) -> Fraction | int:
    """Exact inner product."""
    if len(u) != len(v):
        raise ValueError(f"length mismatch {len(u)} vs {len(v)}")
    return sum(a * b for a, b in zip(u, v))


def vec_add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(u: Sequence, s) -> tuple:
    return tuple(a * s for a in u)


def is_zero_vec(u: Sequence) -> bool:
    return all(a == 0 for a in u)


def primitivize(v: Sequence) -> IVec:
    """Scale a rational vector to a primitive integer vector (same direction).

    Zero vectors pass through unchanged.
    """
    if all(isinstance(a, int) for a in v):
        g = 0
        for a in v:
            g = gcd(g, a)
        if g == 0:
            return tuple(v)
        return tuple(a // g for a in v)
    fracs = [Fraction(a) for a in v]
    if all(a == 0 for a in fracs):
        return tuple(0 for _ in fracs)
    denom_lcm = 1
    for a in fracs:
        denom_lcm = denom_lcm * a.denominator // gcd(denom_lcm, a.denominator)
    ints = [int(a * denom_lcm) for a in fracs]
    g = 0
    for a in ints:
        g = gcd(g, a)
    return tuple(a // g for a in ints)


def rref(rows: Iterable[Sequence]) -> tuple[list[Vec], list[int]]:
    """Reduced row echelon form over Q.  Returns (nonzero rows, pivot columns)."""
    work = [tuple(Fraction(a) for a in row) for row in rows]
    if not work:
        return [], []
    ncols = len(work[0])
    out: list[list[Fraction]] = []
    pivots: list[int] = []
    rows_left = [list(r) for r in work]
    col = 0
    while rows_left and col < ncols:
        pivot_row = None
        for r in rows_left:
            if r[col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            col += 1
            continue
        rows_left.remove(pivot_row)
        inv = pivot_row[col]
        pivot_row = [a / inv for a in pivot_row]
        for r in rows_left:
            if r[col] != 0:
                f = r[col]
                for j in range(col, ncols):
                    r[j] -= f * pivot_row[j]
        for r in out:
            if r[col] != 0:
                f = r[col]
                for j in range(col, ncols):
                    r[j] -= f * pivot_row[j]
        out.append(pivot_row)
        pivots.append(col)
        col += 1
    return [tuple(r) for r in out], pivots


def mat_rank(rows: Iterable[Sequence]) -> int:
    return len(rref(rows)[0])


def kernel_basis(rows: Iterable[Sequence], ncols: int) -> list[IVec]:
    """Primitive integer basis of the right kernel {x : A x = 0}."""
    red, pivots = rref(rows)
    free_cols = [j for j in range(ncols) if j not in pivots]
    basis = []
    for fc in free_cols:
        x = [Fraction(0)] * ncols
        x[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            x[pc] = -row[fc]
        basis.append(primitivize(x))
    return basis


def _det_int(rows: Sequence[Sequence[int]]) -> int:
    """Integer determinant: direct formulas up to 3x3, Bareiss above."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for col in range(n - 1):
        if m[col][col] == 0:
            piv = next((i for i in range(col + 1, n) if m[i][col] != 0), None)
            if piv is None:
                return 0
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        for i in range(col + 1, n):
            for j in range(col + 1, n):
                m[i][j] = (m[i][j] * m[col][col] - m[i][col] * m[col][j]) // prev
            m[i][col] = 0
        prev = m[col][col]
    return sign * m[n - 1][n - 1]


def det(rows: Sequence[Sequence]) -> Fraction | int:
    """Exact determinant; integer fast path, else elimination over Q."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of non-square matrix")
    if all(isinstance(a, int) for row in rows for a in row):
        return _det_int(rows)
    m = [[Fraction(a) for a in row] for row in rows]
    sign = 1
    for col in range(n):
        pivot = None
        for i in range(col, n):
            if m[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        for i in range(col + 1, n):
            if m[i][col] != 0:
                f = m[i][col] / m[col][col]
                for j in range(col, n):
                    m[i][j] -= f * m[col][j]
    result = Fraction(sign)
    for i in range(n):
        result *= m[i][i]
    return result


def signed_minor_kernel(rows: Sequence[Sequence]) -> IVec | None:
    """Kernel direction of a (k-1) x k matrix via signed maximal minors.

    Returns a primitive integer kernel vector, or None when the rows have
    rank below k-1 (all minors vanish).  This is the hot path of facet and
    extreme-ray enumeration.
    """
    k = len(rows[0]) if rows else 0
    if len(rows) != k - 1:
        raise ValueError("signed_minor_kernel expects k-1 rows of length k")
    if k == 2:
        (a, b), = rows
        minors: Sequence = (b, -a)
    elif k == 3:
        (a0, a1, a2), (b0, b1, b2) = rows
        minors = (a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0)
    else:
        minors = [
            (-1) ** drop * det([[row[j] for j in range(k) if j != drop]
                                for row in rows])
            for drop in range(k)
        ]
    if all(m == 0 for m in minors):
        return None
    return primitivize(minors)


def solve_affine(rows: Sequence[Sequence], rhs: Sequence) -> Vec | None:
    """One exact solution of A x = b, or None when inconsistent."""
    if not rows:
        return None
    ncols = len(rows[0])
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    for row, pc in zip(red, pivots):
        if pc == ncols:
            return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return tuple(x)


def canonical_subspace_basis(rows: Iterable[Sequence]) -> tuple[IVec, ...]:
    """Canonical primitive-integer basis of the row span (RREF scaled)."""
    red, _ = rref(rows)
    out = []
    for row in red:
        p = primitivize(row)
        for a in p:
            if a != 0:
                if a < 0:
                    p = tuple(-x for x in p)
                break
        out.append(p)
    return tuple(out)


def reduce_mod_span(v: Sequence, span_rows: Sequence[Sequence]) -> Vec:
    """Canonical representative of v modulo the span of the given rows.

    Reduces against the RREF of the span: the result has zero entries in
    every pivot column, and depends only on the coset of v.
    """
    return reduce_prepared(v, *rref(span_rows))


def reduce_prepared(v: Sequence, red: Sequence[Vec], pivots: Sequence[int]
                    ) -> Vec:
    """reduce_mod_span against a precomputed RREF (hot-loop variant)."""
    x = [Fraction(a) for a in v]
    for row, pc in zip(red, pivots):
        if x[pc] != 0:
            f = x[pc]
            for j in range(len(x)):
                x[j] -= f * row[j]
    return tuple(x)


def identity_rows(n: int) -> list[IVec]:
    return [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]


def mat_mul_vec(rows: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in rows)


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple[tuple, ...]:
    bt = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in bt) for row in a)
