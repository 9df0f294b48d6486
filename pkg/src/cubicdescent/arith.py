"""Exact integer and rational kernel.

Factorization, p-adic valuations, cube classes in Q_p and Q, cubic residue
characters and p-adic root finding for small integer polynomials.  Rationals
are :class:`fractions.Fraction` throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]

INF = math.inf  # nu_p(0); compares greater than every int

TRIAL_BOUND = 10**6
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def to_rational(x: RationalLike) -> Fraction:
    """Coerce an int, Fraction or 'num/den' string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


def format_rational(q: Fraction) -> str:
    """Serialize as 'num/den' (den always present)."""
    q = to_rational(q)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------- primes


@lru_cache(maxsize=None)
def _sieve(n: int) -> tuple[int, ...]:
    flags = bytearray([1]) * (n + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(n) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return tuple(i for i, f in enumerate(flags) if f)


def primes_up_to(n: int) -> tuple[int, ...]:
    """All primes <= n.  The table up to 10^6 is built once and shared."""
    if n <= TRIAL_BOUND:
        table = _sieve(TRIAL_BOUND)
        import bisect

        return table[: bisect.bisect_right(table, n)]
    return _sieve(n)


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24, which covers this package's inputs."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite n (Brent's cycle variant)."""
    for c in range(1, 200):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"Pollard rho failed on {n}")


@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple[tuple[int, int], ...]  # sorted (prime, exponent) pairs

    def value(self) -> int:
        v = self.sign
        for p, e in self.factors:
            v *= p**e
        return v

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def __str__(self) -> str:
        body = "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)
        return ("-" if self.sign < 0 else "") + (body or "1")


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split(r, out)
        _split(r, out)
        return
    d = _pollard_brent(n)
    _split(d, out)
    _split(n // d, out)


@lru_cache(maxsize=65536)
def factor(n: int) -> Factorization:
    """Complete prime factorization of a nonzero integer."""
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    out: dict[int, int] = {}
    for p in primes_up_to(TRIAL_BOUND):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1:
        _split(n, out)
    return Factorization(sign, tuple(sorted(out.items())))


def factor_rational(q: RationalLike) -> dict[int, int]:
    """Prime exponents of a nonzero rational (negative for the denominator)."""
    q = to_rational(q)
    if q == 0:
        raise ValueError("cannot factor 0")
    out = factor(q.numerator).as_dict()
    for p, e in factor(q.denominator).factors:
        out[p] = -e
    return out


def prime_support(*values: RationalLike) -> list[int]:
    """Sorted primes dividing the numerator or denominator of any nonzero value."""
    ps: set[int] = set()
    for v in values:
        v = to_rational(v)
        if v != 0:
            ps.update(factor_rational(v))
    return sorted(ps)


# ------------------------------------------------------------ valuations


def _int_val(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(q: RationalLike, p: int) -> Union[int, float]:
    """nu_p(q), with nu_p(0) = +inf."""
    q = to_rational(q)
    if q == 0:
        return INF
    return _int_val(q.numerator, p) - _int_val(q.denominator, p)


def unit_part(q: RationalLike, p: int) -> Fraction:
    """q * p^(-nu_p(q))."""
    q = to_rational(q)
    if q == 0:
        raise ValueError("0 has no unit part")
    v = valuation(q, p)
    return q / Fraction(p) ** v


def residue(q: RationalLike, modulus: int) -> int:
    """Image of a rational whose denominator is prime to `modulus`."""
    q = to_rational(q)
    return q.numerator * pow(q.denominator, -1, modulus) % modulus


def is_cube_in_Qp(d: RationalLike, p: int) -> bool:
    """Decide d in (Q_p^*)^3."""
    d = to_rational(d)
    if d == 0:
        raise ValueError("0 is excluded")
    if valuation(d, p) % 3:
        return False
    u = unit_part(d, p)
    if p == 3:
        return residue(u, 9) in (1, 8)
    if p % 3 == 1:
        return cubic_character(u, p) == 0
    return True


# ------------------------------------------------------------ characters


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Smallest primitive root modulo the prime p."""
    if p == 2:
        return 1
    qs = factor(p - 1).primes
    g = 2
    while any(pow(g, (p - 1) // q, p) == 1 for q in qs):
        g += 1
    return g


def cubic_character(u: RationalLike, p: int) -> int:
    """Class of the p-unit u in F_p^*/F_p^*3, as 0, 1 or 2.

    The labelling is fixed by the smallest primitive root g: u maps to k when
    u^((p-1)/3) = g^(k(p-1)/3).
    """
    if p % 3 != 1:
        raise ValueError(f"{p} is not 1 mod 3")
    a = residue(to_rational(u), p)
    if a == 0:
        raise ValueError(f"{u} is not a unit at {p}")
    e = (p - 1) // 3
    w = pow(a, e, p)
    if w == 1:
        return 0
    return 1 if w == pow(primitive_root(p), e, p) else 2


def mod9_class(u: RationalLike) -> int:
    """Class of a 3-adic unit in Z_3^*/Z_3^*3 = (Z/9)^*/{+-1}, labelled by powers of 2."""
    a = residue(to_rational(u), 9)
    return {1: 0, 8: 0, 2: 1, 7: 1, 4: 2, 5: 2}[a]


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, by Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


# ------------------------------------------------------------ cube classes


@dataclass(frozen=True)
class CubeClass:
    """Element of Q^*/Q^*3, stored as a cube-free positive integer's factorization.

    The sign is dropped since -1 is a cube.
    """

    exponents: tuple[tuple[int, int], ...] = ()

    @classmethod
    def of(cls, q: RationalLike) -> "CubeClass":
        exps = {p: e % 3 for p, e in factor_rational(q).items()}
        return cls(tuple(sorted((p, e) for p, e in exps.items() if e)))

    def __mul__(self, other: "CubeClass") -> "CubeClass":
        d = dict(self.exponents)
        for p, e in other.exponents:
            d[p] = (d.get(p, 0) + e) % 3
        return CubeClass(tuple(sorted((p, e) for p, e in d.items() if e)))

    def inverse(self) -> "CubeClass":
        return CubeClass(tuple((p, (-e) % 3) for p, e in self.exponents))

    def __pow__(self, k: int) -> "CubeClass":
        return CubeClass(tuple(sorted((p, e * k % 3) for p, e in self.exponents if e * k % 3)))

    @property
    def is_trivial(self) -> bool:
        return not self.exponents

    def representative(self) -> int:
        r = 1
        for p, e in self.exponents:
            r *= p**e
        return r

    def vector(self, primes: Sequence[int]) -> list[int]:
        """Exponent vector over F_3 with respect to `primes` (must cover the support)."""
        d = dict(self.exponents)
        if set(d) - set(primes):
            raise ValueError("class has support outside the given primes")
        return [d.get(p, 0) for p in primes]


def is_rational_cube(q: RationalLike) -> bool:
    return CubeClass.of(to_rational(q)).is_trivial


def icbrt(n: int) -> int:
    """Floor of the real cube root of an integer."""
    if n < 0:
        return -icbrt(-n - 1) - 1
    r = int(round(n ** (1 / 3))) if n < 2**60 else 1 << ((n.bit_length() + 2) // 3)
    while r**3 > n:
        r = (2 * r + n // (r * r)) // 3 if r > 0 else 0
    while (r + 1) ** 3 <= n:
        r += 1
    return r


# ------------------------------------------------------------ polynomials mod p
# Polynomials are coefficient lists, lowest degree first.


def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_eval(f: Sequence, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def _pmod(f: Sequence[int], p: int) -> list[int]:
    return _trim([c % p for c in f])


def _pdivmod(f: list[int], g: list[int], p: int) -> tuple[list[int], list[int]]:
    f = _pmod(f, p)
    g = _pmod(g, p)
    if not g:
        raise ZeroDivisionError
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g) and f:
        k = len(f) - len(g)
        c = f[-1] * inv % p
        q[k] = c
        for i, gc in enumerate(g):
            f[i + k] = (f[i + k] - c * gc) % p
        _trim(f)
    return q, f


def _pgcd(f: list[int], g: list[int], p: int) -> list[int]:
    f, g = _pmod(f, p), _pmod(g, p)
    while g:
        f, g = g, _pdivmod(f, g, p)[1]
    if f:
        inv = pow(f[-1], -1, p)
        f = [c * inv % p for c in f]
    return f


def _pmul(f: list[int], g: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = (out[i + j] + a * b) % p
    return _trim(out)


def _ppowmod(base: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _pdivmod(base, m, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, p), m, p)[1]
        base = _pdivmod(_pmul(base, base, p), m, p)[1]
        e >>= 1
    return result


def _split_roots(f: list[int], p: int, seed: int = 1) -> list[int]:
    """Roots of a monic squarefree f mod p that splits into distinct linear factors."""
    if len(f) <= 1:
        return []
    if len(f) == 2:
        return [(-f[0]) * pow(f[1], -1, p) % p]
    a = seed
    while True:
        a += 1
        h = _ppowmod([a % p, 1], (p - 1) // 2, f, p) or [0]
        h[0] = (h[0] - 1) % p
        d = _pgcd(f, _trim(h), p)
        if 1 < len(d) < len(f):
            return _split_roots(d, p, a) + _split_roots(_pdivmod(f, d, p)[0], p, a)


def roots_mod_p(f: Sequence[int], p: int) -> list[int]:
    """Sorted distinct roots of f modulo p."""
    g = _pmod(list(f), p)
    if not g:
        raise ValueError("polynomial vanishes identically mod p")
    if p < 5000:
        return [x for x in range(p) if poly_eval(g, x) % p == 0]
    xp = _ppowmod([0, 1], p, g, p)
    xp = xp + [0] * max(0, 2 - len(xp))
    xp[1] = (xp[1] - 1) % p
    d = _pgcd(g, _trim(xp), p)
    return sorted(_split_roots(d, p))


def _derivative(f: Sequence[int]) -> list[int]:
    return [i * c for i, c in enumerate(f)][1:]


def _shift_scale(f: Sequence[int], r: int, p: int) -> list[int]:
    """Coefficients of f(r + p*x), with the common power of p removed."""
    out = []
    deriv = list(f)
    for k in range(len(f)):
        # Taylor coefficient f^(k)(r)/k!, exact for integer polynomials
        out.append(poly_eval(deriv, r) // math.factorial(k) * p**k)
        deriv = _derivative(deriv)
    v = min((_int_val(c, p) for c in out if c), default=0)
    return [c // p**v for c in out]


def has_zp_root(f: Sequence[int], p: int) -> bool:
    """Whether the squarefree integer polynomial f has a root in Z_p."""
    f = list(f)
    if not _pmod(f, p):
        v = min(_int_val(c, p) for c in f if c)
        f = [c // p**v for c in f]
    fp = _derivative(f)
    for r in roots_mod_p(f, p):
        if poly_eval(fp, r) % p:
            return True
        if has_zp_root(_shift_scale(f, r, p), p):
            return True
    return False


def zp_roots(f: Sequence[int], p: int, prec: int) -> list[int]:
    """Roots of the squarefree integer polynomial f in Z_p, modulo p^prec."""
    f = list(f)
    if prec <= 0:
        return [0]
    if not _pmod(f, p):
        v = min(_int_val(c, p) for c in f if c)
        f = [c // p**v for c in f]
    fp = _derivative(f)
    mod = p**prec
    out = []
    for r in roots_mod_p(f, p):
        if poly_eval(fp, r) % p:
            x = r
            k = 1
            while k < prec:
                k = min(2 * k, prec)
                m = p**k
                x = (x - poly_eval(f, x) * pow(poly_eval(fp, x), -1, m)) % m
            out.append(x % mod)
        else:
            for s in zp_roots(_shift_scale(f, r, p), p, prec - 1):
                out.append((r + p * s) % mod)
    return sorted(set(out))


def crt_pairs(pairs: Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Chinese remainder: combine (residue, modulus) pairs with coprime moduli."""
    x, m = 0, 1
    for r, n in pairs:
        t = (r - x) * pow(m, -1, n) % n
        x, m = x + m * t, m * n
    return x % m, m
