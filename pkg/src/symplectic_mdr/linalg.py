"""Dense exact-rational matrices as tuples of tuples of Fractions."""

from __future__ import annotations

from fractions import Fraction

Matrix = tuple  # tuple[tuple[Fraction, ...], ...]


def mat(rows) -> Matrix:
    rows = tuple(tuple(Fraction(x) for x in row) for row in rows)
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    return rows


def shape(a: Matrix) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def zeros(n: int, m: int | None = None) -> Matrix:
    return tuple((Fraction(0),) * (n if m is None else m) for _ in range(n))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt) for row in a)


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(a: Matrix, c) -> Matrix:
    c = Fraction(c)
    return tuple(tuple(c * x for x in row) for row in a)


def neg(a: Matrix) -> Matrix:
    return scale(a, -1)


def is_square(a: Matrix) -> bool:
    n, m = shape(a)
    return n == m


def is_symmetric(a: Matrix) -> bool:
    return a == transpose(a)


def is_antisymmetric(a: Matrix) -> bool:
    return a == neg(transpose(a))


def det(a: Matrix) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    m = [list(r) for r in a]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return d


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    m = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(tuple(r[n:]) for r in m)


def leading_minors(a: Matrix) -> list[Fraction]:
    return [det(tuple(row[:k] for row in a[:k])) for k in range(1, len(a) + 1)]


def charpoly(a: Matrix) -> list[Fraction]:
    """Characteristic polynomial ``det(x I - A)``, coefficients lowest degree first.

    Faddeev-LeVerrier recursion; exact over the rationals.
    """
    n = len(a)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = zeros(n)
    for k in range(1, n + 1):
        m = add(matmul(a, m), scale(identity(n), coeffs[n - k + 1]))
        am = matmul(a, m)
        coeffs[n - k] = -sum((am[i][i] for i in range(n)), Fraction(0)) / k
    return coeffs


def signed_permutation(perm, signs) -> Matrix:
    """Orthogonal matrix sending basis vector ``j`` to ``signs[j] * e[perm[j]]``."""
    n = len(perm)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for j, (i, s) in enumerate(zip(perm, signs)):
        rows[i][j] = Fraction(s)
    return tuple(tuple(r) for r in rows)


def block_diag(*blocks: Matrix) -> Matrix:
    n = sum(len(b) for b in blocks)
    rows = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, r in enumerate(b):
            for j, x in enumerate(r):
                rows[off + i][off + j] = x
        off += len(b)
    return tuple(tuple(r) for r in rows)


def to_strings(a: Matrix) -> list[list[str]]:
    return [[f"{x.numerator}/{x.denominator}" for x in row] for row in a]
