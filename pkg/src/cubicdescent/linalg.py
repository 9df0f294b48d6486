"""Small exact linear algebra over Q and over F_p.

Matrices are lists of rows.  Everything here is sized for 3x3 to a few
hundred rows, so plain Gaussian elimination is enough.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def vecmat(v: Sequence, m: Sequence[Sequence]) -> list:
    """Row vector times matrix."""
    return [sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0]))]


def matvec(m: Sequence[Sequence], v: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, v)) for row in m]


def det(m: Sequence[Sequence]) -> Fraction:
    a = [[Fraction(v) for v in row] for row in m]
    n = len(a)
    sign = 1
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        p = a[col][col]
        result *= p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f:
                for k in range(col, n):
                    a[r][k] -= f * a[col][k]
    return sign * result


def inverse(m: Sequence[Sequence]) -> Matrix:
    n = len(m)
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def solve(m: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Solve m x = rhs for square invertible m."""
    return matvec(inverse(m), rhs)


def nullspace(m: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of {x : m x = 0} over Q."""
    a = [[Fraction(v) for v in row] for row in m]
    rows, cols = len(a), len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [v / p for v in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fc]
        basis.append(v)
    return basis


# ---------------------------------------------------------------- over F_p


def rank_mod(m: Sequence[Sequence[int]], p: int) -> int:
    return len(m[0]) - len(nullspace_mod(m, p)) if m and m[0] else 0


def nullspace_mod(m: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    """Basis of the right kernel of an integer matrix over F_p."""
    a = [[v % p for v in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [v * inv % p for v in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    basis = []
    for fc in (c for c in range(cols) if c not in pivots):
        v = [0] * cols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fc] % p
        basis.append(v)
    return basis


def kernel_dim_mod(m: Sequence[Sequence[int]], ncols: int, p: int) -> int:
    """dim ker of an (possibly zero-row) matrix with `ncols` columns over F_p."""
    if ncols == 0:
        return 0
    if not m:
        return ncols
    return len(nullspace_mod(m, p))


# ---------------------------------------------------------------- over Z


def lll_gram(gram: Sequence[Sequence], delta: Fraction = Fraction(3, 4)) -> list[list[int]]:
    """LLL-reduce a lattice given by its (positive definite) Gram matrix.

    Returns a unimodular integer matrix T whose rows express the reduced basis
    in terms of the original one.  Exact rational arithmetic; meant for small
    dimensions.
    """
    n = len(gram)
    g = [[Fraction(v) for v in row] for row in gram]
    t = [[int(i == j) for j in range(n)] for i in range(n)]

    def inner(i, j):
        return sum(t[i][a] * g[a][b] * t[j][b] for a in range(n) for b in range(n))

    def gso():
        mu = [[Fraction(0)] * n for _ in range(n)]
        bstar = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                mu[i][j] = (inner(i, j) - sum(mu[j][k] * mu[i][k] * bstar[k] for k in range(j))) / bstar[j]
            bstar[i] = inner(i, i) - sum(mu[i][k] ** 2 * bstar[k] for k in range(i))
        return mu, bstar

    k = 1
    while k < n:
        mu, bstar = gso()
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                t[k] = [a - q * b for a, b in zip(t[k], t[j])]
                mu, bstar = gso()
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            t[k], t[k - 1] = t[k - 1], t[k]
            k = max(k - 1, 1)
    return t


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


class ModularHNF:
    """Row Hermite normal form of a full-rank lattice L with D*Z^n inside L.

    Rows are inserted one at a time; entries are kept reduced modulo D,
    which is valid because D*e_i lies in the lattice.
    """

    def __init__(self, n: int, modulus: int):
        self.n = n
        self.D = abs(modulus)
        self.rows: dict[int, list[int]] = {i: [self.D * int(i == j) for j in range(n)] for i in range(n)}

    def insert(self, v: Sequence[int]) -> None:
        v = [x % self.D for x in v]
        for c in range(self.n):
            if v[c] == 0:
                continue
            b = self.rows[c]
            g, s, u = _xgcd(b[c], v[c])
            new_b = [(s * x + u * y) for x, y in zip(b, v)]
            v = [(b[c] // g) * y - (v[c] // g) * x for x, y in zip(b, v)]
            self.rows[c] = self._reduce_row(new_b, c)
            v = [x % self.D for x in v]
        # v reduced to zero

    def _reduce_row(self, r: list[int], c: int) -> list[int]:
        r = [x % self.D if j > c else x for j, x in enumerate(r)]
        if r[c] < 0:
            r = [-x for x in r]
        return r

    def matrix(self) -> list[list[int]]:
        """Upper triangular basis with positive diagonal, off-diagonal entries reduced."""
        rows = [list(self.rows[i]) for i in range(self.n)]
        # the diagonal divides D, so entries to the right can be reduced by lower rows
        for i in range(self.n - 1, -1, -1):
            for j in range(i + 1, self.n):
                q = rows[i][j] // rows[j][j]
                if q:
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[j])]
        return rows

    def determinant(self) -> int:
        d = 1
        for i in range(self.n):
            d *= self.rows[i][i]
        return d


def smith_form(h: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]]]:
    """Smith normal form of a square nonsingular integer matrix acting on rows.

    Returns (d, V) with d the elementary divisors d_1 | d_2 | ... and V a
    unimodular matrix such that the row lattice of h times V is spanned by
    d_i e_i.  Hence x -> (x V)_i mod d_i identifies Z^n / rowspan(h) with
    the product of the cyclic groups Z/d_i.
    """
    n = len(h)
    a = [list(map(int, row)) for row in h]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_op(j1, j2, p, q, r, s):
        # (col j1, col j2) <- (p*c1 + q*c2, r*c1 + s*c2) on both a and v
        for m in (a, v):
            for row in m:
                x, y = row[j1], row[j2]
                row[j1], row[j2] = p * x + q * y, r * x + s * y

    for k in range(n):
        while True:
            # pivot: smallest nonzero entry of the remaining block
            entries = [(abs(a[i][j]), i, j) for i in range(k, n) for j in range(k, n) if a[i][j]]
            _, pi, pj = min(entries)
            a[k], a[pi] = a[pi], a[k]
            if pj != k:
                col_op(k, pj, 0, 1, 1, 0)
            done = True
            for j in range(k + 1, n):
                if a[k][j] and a[k][j] % a[k][k] == 0:
                    col_op(k, j, 1, 0, -(a[k][j] // a[k][k]), 1)
                elif a[k][j]:
                    g, s, u = _xgcd(a[k][k], a[k][j])
                    p, q = a[k][k] // g, a[k][j] // g
                    col_op(k, j, s, u, -q, p)
            for i in range(k + 1, n):
                if a[i][k] and a[i][k] % a[k][k] == 0:
                    q = a[i][k] // a[k][k]
                    a[i] = [y - q * x for x, y in zip(a[k], a[i])]
                elif a[i][k]:
                    g, s, u = _xgcd(a[k][k], a[i][k])
                    p, q = a[k][k] // g, a[i][k] // g
                    rk, ri = a[k], a[i]
                    a[k] = [s * x + u * y for x, y in zip(rk, ri)]
                    a[i] = [-q * x + p * y for x, y in zip(rk, ri)]
            if any(a[k][j] for j in range(k + 1, n)) or any(a[i][k] for i in range(k + 1, n)):
                done = False
            if done:
                bad = next(((i, j) for i in range(k + 1, n) for j in range(k + 1, n) if a[i][j] % a[k][k]), None)
                if bad is None:
                    break
                # fold the offending row into row k to enforce divisibility
                a[k] = [x + y for x, y in zip(a[k], a[bad[0]])]
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
    return [a[i][i] for i in range(n)], v
