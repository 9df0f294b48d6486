"""The simplest cubic fields K_t = Q[x]/(g), g = x^3 + t x^2 - (t+3) x + 1.

Elements are stored in the power basis {1, alpha, alpha^2}.  The generator of
Gal(K/Q) is fixed as sigma(alpha) = 1/(1 - alpha).

Local norms are decided through a Z/3-valued symbol h_p on Q_p^* whose kernel
is the local norm group N(K_P^*).  At split primes the symbol vanishes, at
inert primes it is nu_p mod 3, and at ramified primes it combines the
valuation (measured against a known global norm of valuation prime to 3) with
the class of the unit part in U/N(U), which is F_p^*/F_p^*3 in the tame case
and (Z/9)^*/{+-1} in the wild case.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence, Union

import mpmath
import numpy as np

from . import arith
from .arith import RationalLike, to_rational, valuation
from .errors import Reducible
from .linalg import det, solve


class SplittingType(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED_TAME = "ramified_tame"
    RAMIFIED_WILD = "ramified_wild"

    @property
    def ramified(self) -> bool:
        return self in (SplittingType.RAMIFIED_TAME, SplittingType.RAMIFIED_WILD)


Scalar = Union[int, Fraction]


class FieldElement:
    """c0 + c1*alpha + c2*alpha^2 in K_t."""

    __slots__ = ("field", "c")

    def __init__(self, field: "CubicField", coords: Sequence[RationalLike]):
        self.field = field
        self.c = tuple(to_rational(v) for v in coords)
        if len(self.c) != 3:
            raise ValueError("an element needs three coordinates")

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field.t != self.field.t:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, (other, 0, 0))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, [a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.c])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, [a - b for a, b in zip(self.c, o.c)])

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a * other for a in self.c])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field._mul(self.c, o.c))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of 0 in K")
        return FieldElement(self.field, solve(self.matrix(), [1, 0, 0]))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a / other for a in self.c])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.c == (Fraction(other), 0, 0)
        if isinstance(other, FieldElement):
            return self.field.t == other.field.t and self.c == other.c
        return NotImplemented

    def __hash__(self):
        return hash((self.field.t, self.c))

    def __repr__(self):
        return f"FieldElement(t={self.field.t}, {[str(v) for v in self.c]})"

    # -- structure -------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return self.c[1] == 0 and self.c[2] == 0

    def matrix(self) -> list[list[Fraction]]:
        """Multiplication-by-self matrix acting on coordinate columns."""
        f = self.field
        cols = [self.c, f._mul(self.c, f._alpha), f._mul(self.c, f._alpha2)]
        return [[cols[j][i] for j in range(3)] for i in range(3)]

    def norm(self) -> Fraction:
        return det(self.matrix())

    def trace(self) -> Fraction:
        m = self.matrix()
        return m[0][0] + m[1][1] + m[2][2]

    def sigma(self, k: int = 1) -> "FieldElement":
        """Apply sigma^k."""
        k %= 3
        out = self
        for _ in range(k):
            s, s2 = out.field._sigma_alpha, out.field._sigma_alpha2
            c = out.c
            out = FieldElement(out.field, [c[0] + c[1] * s[0] + c[2] * s2[0], c[1] * s[1] + c[2] * s2[1], c[1] * s[2] + c[2] * s2[2]])
        return out

    def conjugates_numeric(self, dps: int = 30) -> list:
        """Values under the three real embeddings, ordered along the sigma-orbit."""
        return [poly3(self.c, r) for r in self.field.real_roots(dps)]


def poly3(c: Sequence, x):
    return c[0] + c[1] * x + c[2] * x * x


@dataclass(frozen=True)
class Conductor:
    exponents: tuple[tuple[int, int], ...]

    @property
    def value(self) -> int:
        f = 1
        for p, n in self.exponents:
            f *= p**n
        return f

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.exponents)


class CubicField:
    """K_t with its Galois action, conductor and local norm machinery."""

    def __init__(self, t: RationalLike):
        self.t = to_rational(t)
        t = self.t
        self.delta_g = t * t + 3 * t + 9
        # alpha^3 = -t alpha^2 + (t+3) alpha - 1 and alpha^4 in the basis
        self._a3 = (Fraction(-1), t + 3, -t)
        self._a4 = (t, -t * (t + 3) - 1, t * t + t + 3)
        self._alpha = (Fraction(0), Fraction(1), Fraction(0))
        self._alpha2 = (Fraction(0), Fraction(0), Fraction(1))
        self._sigma_alpha: tuple = ()
        self._sigma_alpha2: tuple = ()

    # -- construction helpers ----------------------------------------
    def _mul(self, p: Sequence[Fraction], q: Sequence[Fraction]) -> list[Fraction]:
        r = [Fraction(0)] * 5
        for i in range(3):
            if p[i]:
                for j in range(3):
                    r[i + j] += p[i] * q[j]
        out = [r[0], r[1], r[2]]
        for k in range(3):
            out[k] += r[3] * self._a3[k] + r[4] * self._a4[k]
        return out

    def __repr__(self):
        return f"CubicField(t={self.t})"

    def __eq__(self, other):
        return isinstance(other, CubicField) and other.t == self.t

    def __hash__(self):
        return hash(("CubicField", self.t))

    def element(self, coords: Sequence[RationalLike]) -> FieldElement:
        return FieldElement(self, coords)

    def __call__(self, *coords: RationalLike) -> FieldElement:
        if len(coords) == 1:
            return FieldElement(self, (coords[0], 0, 0))
        return FieldElement(self, coords)

    @cached_property
    def one(self) -> FieldElement:
        return FieldElement(self, (1, 0, 0))

    @cached_property
    def alpha(self) -> FieldElement:
        return FieldElement(self, (0, 1, 0))

    def g(self, x):
        """The defining polynomial evaluated at a scalar or element."""
        t = self.t
        return x * x * x + t * x * x - (t + 3) * x + 1

    @cached_property
    def denominator(self) -> int:
        return self.t.denominator

    def integral_poly(self) -> list[int]:
        """h(x) = d^3 g(x/d), monic with integer coefficients (low degree first)."""
        a, d = self.t.numerator, self.t.denominator
        return [d**3, -(a + 3 * d) * d, a, 1]

    @cached_property
    def beta(self) -> FieldElement:
        """The integral generator d*alpha, a root of integral_poly."""
        return self.alpha * self.denominator

    # -- Galois ----------------------------------------------------------
    def sigma_alpha(self) -> FieldElement:
        return FieldElement(self, self._sigma_alpha)

    @cached_property
    def norm_form(self) -> dict[tuple[int, int, int], Fraction]:
        """Coefficients of N(x + y*alpha + z*alpha^2) as a ternary cubic form."""
        return ternary_norm_form(self, self.one, self.alpha, self.alpha * self.alpha)

    @cached_property
    def delta_power_basis(self) -> Fraction:
        """N(alpha - sigma(alpha)), equal to the Vandermonde determinant of the power basis."""
        return (self.alpha - self.sigma_alpha()).norm()

    def real_roots(self, dps: int = 30) -> list:
        """The three real roots r, sigma(r), sigma^2(r) with r the smallest root."""
        with mpmath.workdps(dps + 10):
            t = mpmath.mpf(self.t.numerator) / self.t.denominator
            roots = sorted(mpmath.re(r) for r in mpmath.polyroots([1, t, -(t + 3), 1], maxsteps=200, extraprec=4 * dps))
            r0 = roots[0]
            r1 = 1 / (1 - r0)
            r2 = 1 / (1 - r1)
            return [r0, r1, r2]

    # -- arithmetic invariants ------------------------------------------
    @cached_property
    def conductor(self) -> Conductor:
        exps = []
        for p, v in sorted(arith.factor_rational(self.delta_g).items()):
            if v <= 0:
                continue
            if v % 3:
                exps.append((p, 2 if p == 3 else 1))
            elif p == 3 and arith.is_cube_in_Qp(self.delta_g, 3):
                exps.append((3, 2))
        return Conductor(tuple(exps))

    @property
    def conductor_value(self) -> int:
        return self.conductor.value

    @property
    def ramified_primes(self) -> tuple[int, ...]:
        return self.conductor.primes

    def splitting_type(self, p: int) -> SplittingType:
        if p in self.ramified_primes:
            return SplittingType.RAMIFIED_WILD if p == 3 else SplittingType.RAMIFIED_TAME
        if valuation(self.t, p) < 0:
            # h = x^3 + a x^2 + O(p) has the simple root -a mod p
            return SplittingType.SPLIT
        if arith.has_zp_root(self.integral_poly(), p):
            return SplittingType.SPLIT
        return SplittingType.INERT

    # -- local and global norms -------------------------------------------
    def _reference_norm(self, p: int) -> Fraction:
        """A global norm whose p-adic valuation is prime to 3 (p ramified)."""
        if valuation(self.delta_g, p) % 3:
            return self.delta_g
        # N(x - y*alpha) = G(x, y), the homogenized defining polynomial
        t = self.t
        for bound in range(1, 200):
            for x in range(-bound, bound + 1):
                for y in range(0, bound + 1):
                    if max(abs(x), y) != bound or math.gcd(x, y) != 1:
                        continue
                    val = x**3 + t * x * x * y - (t + 3) * x * y * y + y**3
                    if val and valuation(val, p) % 3:
                        return val
        for x, y, z in itertools.product(range(-12, 13), repeat=3):
            val = self.element((x, y, z)).norm()
            if val and valuation(val, p) % 3:
                return val
        raise ArithmeticError(f"no norm of valuation prime to 3 found at {p}")

    def _unit_class(self, u: Fraction, p: int) -> int:
        """Image of a p-unit in U/N(U) for ramified p, as an element of Z/3."""
        return arith.mod9_class(u) if p == 3 else arith.cubic_character(u, p)

    def local_norm_symbol(self, d: RationalLike, p: int) -> int:
        """h_p(d) in Z/3; zero exactly on N(K_P^*)."""
        d = to_rational(d)
        if d == 0:
            raise ValueError("0 is not in Q_p^*")
        kind = self.splitting_type(p)
        if kind is SplittingType.SPLIT:
            return 0
        k = valuation(d, p)
        if kind is SplittingType.INERT:
            return k % 3
        ref = self._ref_cache(p)
        e = valuation(ref, p)
        j = (k * e) % 3  # e^-1 = e mod 3
        ud = arith.unit_part(d, p)
        ur = arith.unit_part(ref, p)
        return (self._unit_class(ud, p) - j * self._unit_class(ur, p)) % 3

    def _ref_cache(self, p: int) -> Fraction:
        cache = self.__dict__.setdefault("_refs", {})
        if p not in cache:
            cache[p] = self._reference_norm(p)
        return cache[p]

    def is_local_norm(self, d: RationalLike, p: int) -> bool:
        return self.local_norm_symbol(d, p) == 0

    def is_global_norm(self, d: RationalLike) -> bool:
        d = to_rational(d)
        if d == 0:
            raise ValueError("0 is not a norm from K^*")
        primes = set(arith.prime_support(d)) | set(self.ramified_primes)
        return all(self.is_local_norm(d, p) for p in primes)

    # -- residue enumeration -------------------------------------------
    def norm_form_values(self, p: int, m: int) -> "NormResidues":
        return norm_form_values(self, p, m)


def ternary_norm_form(field: CubicField, e0: FieldElement, e1: FieldElement, e2: FieldElement) -> dict[tuple[int, int, int], Fraction]:
    """Coefficients of N(x e0 + y e1 + z e2), keyed by exponent triples (i, j, k).

    Recovered exactly by evaluating the norm on a unisolvent set of ten
    integer triples and solving the interpolation system.
    """
    monos = [m for m in itertools.product(range(4), repeat=3) if sum(m) == 3]
    pts = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, -1, 0), (1, 0, 1), (1, 0, -1), (0, 1, 1), (0, 1, -1), (1, 1, 1)]
    rows = [[Fraction(x**i * y**j * z**k) for (i, j, k) in monos] for (x, y, z) in pts]
    vals = [(e0 * x + e1 * y + e2 * z).norm() for (x, y, z) in pts]
    coeffs = solve(rows, vals)
    return {m: c for m, c in zip(monos, coeffs) if c}


def eval_form(form: dict[tuple[int, int, int], Fraction], x, y, z):
    return sum(c * x**i * y**j * z**k for (i, j, k), c in form.items())


def make_field(t: RationalLike) -> CubicField:
    """Validate t (g must be irreducible) and build K_t with its Galois data."""
    t = to_rational(t)
    root = rational_root(t)
    if root is not None:
        raise Reducible(f"g(x; {t}) has the rational root {root}")
    field = CubicField(t)
    s = (field.one - field.alpha).inverse()
    field._sigma_alpha = s.c
    field._sigma_alpha2 = (s * s).c
    return field


def rational_root(t: Fraction) -> Optional[Fraction]:
    """A rational root of g(x; t), if any.

    Roots of the integral rescaling h(x) = d^3 g(x/d) are integers; they sit
    next to the real roots, which are located numerically and then checked
    exactly.
    """
    a, d = t.numerator, t.denominator
    h = [d**3, -(a + 3 * d) * d, a, 1]
    digits = max(len(str(abs(c))) for c in h)
    with mpmath.workdps(digits + 30):
        for r in mpmath.polyroots(h[::-1], maxsteps=500, extraprec=8 * digits + 60):
            base = int(mpmath.floor(mpmath.re(r)))
            for cand in (base - 1, base, base + 1, base + 2):
                if arith.poly_eval(h, cand) == 0:
                    return Fraction(cand, d)
    return None


# ---------------------------------------------------------------- residues


@dataclass(frozen=True)
class NormResidues:
    """Units mod p^m attained as norms of p-units of Z[beta].

    The attained set is a subgroup containing all cubes, and every class of
    (Z/p^m)^*/cubes is visible modulo `base` (p, or 9 when p = 3), so the set
    is the full preimage of `base_residues`.
    """

    p: int
    m: int
    base: int
    base_residues: frozenset[int]

    @property
    def modulus(self) -> int:
        return self.p**self.m

    def __contains__(self, u) -> bool:
        u = to_rational(u)
        if valuation(u, self.p) != 0:
            return False
        return arith.residue(u, self.base) in self.base_residues

    @property
    def index(self) -> int:
        units = sum(1 for r in range(self.base) if math.gcd(r, self.p) == 1)
        return units // len(self.base_residues)

    def residues(self) -> list[int]:
        """All attained residues mod p^m (materialized, so keep p^m moderate)."""
        mod = self.modulus
        return [r for r in range(mod) if r % self.p and r % self.base in self.base_residues]


def _integral_norm_form(field: CubicField) -> dict[tuple[int, int, int], int]:
    b = field.beta
    form = ternary_norm_form(field, field.one, b, b * b)
    out = {}
    for m, c in form.items():
        if c.denominator != 1:
            raise AssertionError("norm form of Z[beta] must be integral")
        out[m] = c.numerator
    return out


def _form_values(form: dict[tuple[int, int, int], int], x, y, z, modulus: int):
    total = np.zeros_like(x)
    for (i, j, k), c in form.items():
        term = (c % modulus) * (x**i % modulus) % modulus
        term = term * (y**j % modulus) % modulus
        term = term * (z**k % modulus) % modulus
        total = (total + term) % modulus
    return total


def enumerate_norm_residues(field: CubicField, modulus: int, p: int) -> set[int]:
    """Residues mod `modulus` of N(x0 + x1 beta + x2 beta^2) over all triples, p-units only.

    For a prime modulus the form is homogeneous of degree 3, so the values
    are the values on projective points times the nonzero cubes; otherwise
    every triple is enumerated.
    """
    form = _integral_norm_form(field)
    dtype = object if modulus > 2**20 else np.int64
    if modulus == p and p > 3:
        r = np.arange(p, dtype=dtype)
        y, z = np.meshgrid(r, r, indexing="ij")
        one = np.ones(1, dtype=dtype)
        zero = np.zeros(1, dtype=dtype)
        charts = [(np.ones_like(y), y, z), (zero, one, r), (zero, zero, one)]
        vals = set()
        for x0, y0, z0 in charts:
            vals |= {int(v) for v in np.unique(_form_values(form, x0, y0, z0, p)) if int(v)}
        cubes = {pow(c, 3, p) for c in range(1, p)}
        return {v * c % p for v in vals for c in cubes}
    r = np.arange(modulus, dtype=dtype)
    x, y, z = np.meshgrid(r, r, r, indexing="ij")
    vals = np.unique(_form_values(form, x, y, z, modulus))
    return {int(v) for v in vals if int(v) % p}


def norm_form_values(field: CubicField, p: int, m: int) -> NormResidues:
    """Attained unit norm classes modulo p^m.

    Enumerates residues modulo p (or 9 when p = 3 and m >= 2) exactly and
    lifts; see NormResidues for why the lift is exact.
    """
    if m < 1:
        raise ValueError("m must be positive")
    base = 9 if (p == 3 and m >= 2) else p
    return NormResidues(p, m, base, frozenset(enumerate_norm_residues(field, base, p)))
