"""Weierstrass models of the plane sections, their group law, the dual curve, and the explicit maps.

Every non-tangent section X_H is isomorphic to y^2 + a delta(X) x y + N(gamma) y = x^3,
with O going to the point at infinity and (0, 0) a rational point of order 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from . import arith
from .arith import RationalLike, to_rational
from .cubicfield import CubicField, FieldElement
from .errors import DegeneratePoint, Tangent
from .linalg import det, inverse, matmul
from .surface import Basis, Hyperplane, SurfacePoint, gamma, is_tangent, o_prime

Value = Union[Fraction, FieldElement]


# ------------------------------------------------------------------ points


def _simplify(v):
    if v is None:
        return None
    if isinstance(v, FieldElement):
        return v.c[0] if v.is_rational() else v
    return to_rational(v)


def _key(v):
    return v if isinstance(v, Fraction) else v.c


def _sig(v, k):
    return v.sigma(k) if isinstance(v, FieldElement) else v


class CurvePoint:
    """The point at infinity or an affine point (x, y) with rational or K coordinates."""

    __slots__ = ("x", "y")

    def __init__(self, x: Optional[Value] = None, y: Optional[Value] = None):
        if (x is None) != (y is None):
            raise ValueError("give both coordinates or neither")
        self.x = _simplify(x)
        self.y = _simplify(y)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    @property
    def is_rational(self) -> bool:
        return self.is_infinity or (isinstance(self.x, Fraction) and isinstance(self.y, Fraction))

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        if self.is_infinity:
            return hash(None)
        return hash((_key(self.x), _key(self.y)))

    def __repr__(self):
        if self.is_infinity:
            return "CurvePoint(infinity)"
        return f"CurvePoint({self.x}, {self.y})"

    def sigma(self, k: int = 1) -> "CurvePoint":
        if self.is_rational:
            return self
        return CurvePoint(_sig(self.x, k), _sig(self.y, k))

    def as_pair(self) -> Optional[tuple]:
        return None if self.is_infinity else (self.x, self.y)


INFINITY = CurvePoint()


# ------------------------------------------------------------------ curves


@dataclass(frozen=True)
class Provenance:
    """Where a model came from: the field, the section and the quantities entering its coefficients."""

    t: Fraction
    hyperplane: Hyperplane
    basis_matrix: tuple
    delta: Fraction
    gamma: tuple
    norm_gamma: Fraction


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q."""

    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    a6: Fraction
    provenance: Optional[Provenance] = dc_field(default=None, compare=False)

    @classmethod
    def of(cls, a1=0, a2=0, a3=0, a4=0, a6=0, provenance=None) -> "WeierstrassCurve":
        return cls(*(to_rational(v) for v in (a1, a2, a3, a4, a6)), provenance=provenance)

    @property
    def coefficients(self) -> tuple:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b2(self):
        return self.a1**2 + 4 * self.a2

    @property
    def b4(self):
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self):
        return self.a3**2 + 4 * self.a6

    @property
    def b8(self):
        a1, a2, a3, a4, a6 = self.coefficients
        return a1**2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3**2 - a4**2

    @property
    def c4(self):
        return self.b2**2 - 24 * self.b4

    @property
    def c6(self):
        return -self.b2**3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def discriminant(self) -> Fraction:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -(b2**2) * b8 - 8 * b4**3 - 27 * b6**2 + 9 * b2 * b4 * b6

    @property
    def is_singular(self) -> bool:
        return self.discriminant == 0

    @property
    def j_invariant(self) -> Fraction:
        if self.is_singular:
            raise ValueError("the j-invariant of a singular cubic is undefined")
        return self.c4**3 / self.discriminant

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.coefficients) + "]"

    # -- points -----------------------------------------------------------
    def contains(self, P: CurvePoint) -> bool:
        if P.is_infinity:
            return True
        x, y = P.x, P.y
        a1, a2, a3, a4, a6 = self.coefficients
        return y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6) == 0

    def point(self, x: Value, y: Value) -> CurvePoint:
        P = CurvePoint(x, y)
        if not self.contains(P):
            raise ValueError(f"{P} is not on {self}")
        return P

    def negate(self, P: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return P
        return CurvePoint(P.x, -P.y - self.a1 * P.x - self.a3)

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        a1, a2, a3, a4, a6 = self.coefficients
        if P.x == Q.x:
            if P.y + Q.y + a1 * Q.x + a3 == 0:
                return INFINITY
            lam = (3 * P.x * P.x + 2 * a2 * P.x + a4 - a1 * P.y) / (2 * P.y + a1 * P.x + a3)
            nu = (-P.x * P.x * P.x + a4 * P.x + 2 * a6 - a3 * P.y) / (2 * P.y + a1 * P.x + a3)
        else:
            lam = (Q.y - P.y) / (Q.x - P.x)
            nu = (P.y * Q.x - Q.y * P.x) / (Q.x - P.x)
        x3 = lam * lam + a1 * lam - a2 - P.x - Q.x
        y3 = -(lam + a1) * x3 - nu - a3
        return CurvePoint(x3, y3)

    def subtract(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        return self.add(P, self.negate(Q))

    def multiply(self, n: int, P: CurvePoint) -> CurvePoint:
        if n < 0:
            return self.multiply(-n, self.negate(P))
        result, base = INFINITY, P
        while n:
            if n & 1:
                result = self.add(result, base)
            base = self.add(base, base)
            n >>= 1
        return result

    def order(self, P: CurvePoint, limit: int = 12) -> Optional[int]:
        """The order of P when it is at most ``limit``, else None."""
        Q = P
        for n in range(1, limit + 1):
            if Q.is_infinity:
                return n
            Q = self.add(Q, P)
        return None

    def scaled(self, u: RationalLike) -> "WeierstrassCurve":
        """The model reached by (x, y) -> (u^2 x, u^3 y)."""
        u = to_rational(u)
        a1, a2, a3, a4, a6 = self.coefficients
        return WeierstrassCurve.of(u * a1, u**2 * a2, u**3 * a3, u**4 * a4, u**6 * a6)

    def is_isomorphic(self, other: "WeierstrassCurve") -> bool:
        """Q-isomorphism of nonsingular curves: c4' = u^4 c4 and c6' = u^6 c6 for a rational u."""
        if self.is_singular or other.is_singular:
            raise ValueError("isomorphism test needs nonsingular curves")
        c4, c6, d4, d6 = self.c4, self.c6, other.c4, other.c6
        if (c4 == 0) != (d4 == 0) or (c6 == 0) != (d6 == 0):
            return False
        if c4 == 0:
            return _is_power(d6 / c6, 6)
        if c6 == 0:
            return _is_power(d4 / c4, 4)
        u2 = (d6 / c6) / (d4 / c4)
        return _is_power(u2, 2) and u2 * u2 == d4 / c4

    # -- the 3-isogeny --------------------------------------------------
    def velu_quotient(self, T: Optional[CurvePoint] = None) -> "WeierstrassCurve":
        """The quotient by the subgroup generated by a rational point T of order 3 (default (0, 0))."""
        T = T if T is not None else CurvePoint(Fraction(0), Fraction(0))
        if not self.contains(T) or self.order(T, 3) != 3:
            raise ValueError("the kernel generator must be a point of order 3")
        a1, a2, a3, a4, a6 = self.coefficients
        gx = 3 * T.x**2 + 2 * a2 * T.x + a4 - a1 * T.y
        gy = -2 * T.y - a1 * T.x - a3
        v = 2 * gx - a1 * gy
        w = gy * gy + T.x * v
        return WeierstrassCurve.of(a1, a2, a3, a4 - 5 * v, a6 - (a1 * a1 + 4 * a2) * v - 7 * w)

    # -- search ---------------------------------------------------------
    def search_points(self, height_bound: int) -> list[CurvePoint]:
        """Rational points with x = m/e^2, |m| <= height_bound and e^2 <= height_bound.

        For a model with non-integral coefficients the bound applies to the
        smallest integral rescaling (x -> u^2 x). The point at infinity is listed first; the rest are sorted by (e, |m|, m, y).
        """
        return [INFINITY] + _search(self, height_bound)


def _is_power(q: Fraction, k: int) -> bool:
    if q <= 0 and k % 2 == 0:
        return False
    return all(_int_root(abs(v), k) is not None for v in (q.numerator, q.denominator))


def _int_root(n: int, k: int) -> Optional[int]:
    r = round(n ** (1.0 / k)) if n < 2**1000 else None
    if r is None:
        lo, hi = 0, 1 << (n.bit_length() // k + 1)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid**k < n:
                lo = mid + 1
            else:
                hi = mid
        r = lo
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**k == n:
            return c
    return None


def _integral_scale(W: WeierstrassCurve) -> int:
    """The least u > 0 with u^k a_k integral for k = 1, 2, 3, 4, 6."""
    u = 1
    dens = [c.denominator for c in W.coefficients]
    for p in arith.prime_support(math.lcm(*dens)):
        u *= p ** max(-(-arith.valuation(d, p) // k) for d, k in zip(dens, (1, 2, 3, 4, 6)))
    return u


def _search(W: WeierstrassCurve, bound: int) -> list[CurvePoint]:
    # rescale to the smallest integral model so that y = n/e^3 with n an integer;
    # the height bound applies to x-coordinates of that model
    u = _integral_scale(W)
    V = W.scaled(u)
    a1, a2, a3, a4, a6 = (int(c) for c in V.coefficients)
    found = []
    emax = math.isqrt(max(bound, 1))
    ms = np.arange(-bound, bound + 1, dtype=object)
    for e in range(1, emax + 1):
        e2, e3 = e * e, e * e * e
        ok = np.array([math.gcd(int(m), e) == 1 for m in ms]) if e > 1 else np.ones(len(ms), dtype=bool)
        mm = ms[ok]
        # n^2 + (a1 m e + a3 e^3) n - (m^3 + a2 m^2 e^2 + a4 m e^4 + a6 e^6) = 0
        lin = a1 * mm * e + a3 * e3
        rhs = mm**3 + a2 * mm**2 * e2 + a4 * mm * e2 * e2 + a6 * e3 * e3
        disc = lin * lin + 4 * rhs
        for m, l, d in zip(mm, lin, disc):
            if d < 0:
                continue
            r = math.isqrt(int(d))
            if r * r != d:
                continue
            for s in {r, -r}:
                n = -l + s
                if n % 2 == 0:
                    x = Fraction(int(m), e2) / u**2
                    y = Fraction(int(n) // 2, e3) / u**3
                    found.append((e, abs(int(m)), int(m), y, CurvePoint(x, y)))
    found.sort(key=lambda r: r[:4])
    return [r[4] for r in found]


# ------------------------------------------------------------------ models of sections


def weierstrass_model(H: Hyperplane, basis: Basis) -> WeierstrassCurve:
    """y^2 + a delta(X) x y + N(gamma(X_H)) y = x^3 for a non-tangent section."""
    if is_tangent(H, basis):
        raise Tangent(f"the hyperplane {H} is tangent to the surface", parametrization=_parametrization_hint(H, basis))
    g = gamma(H, basis)
    n = g.norm()
    prov = Provenance(basis.field.t, H, tuple(map(tuple, basis.matrix)), basis.delta, g.c, n)
    return WeierstrassCurve.of(H.a * basis.delta, 0, n, 0, 0, provenance=prov)


def _parametrization_hint(H: Hyperplane, basis: Basis) -> Optional[dict]:
    """A description of the rational parametrization of a tangent section, when it is known."""
    a, b, c = skew_hyperplane(H, basis)
    t = basis.field.t
    if a == 0 or a * t + 3 * c != 0 or a * t + 3 * b != 0:
        return None
    Mi = inverse(skew_matrix(basis))
    samples = []
    for u, v in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)]:
        try:
            P = rational_parametrization(t, u, v)
        except DegeneratePoint:
            continue
        x, y, z, w = P.coords
        samples.append({"uv": [u, v], "point": SurfacePoint(_apply([x, y, z], Mi) + [w])})
    return {
        "map": "[u, v] -> [x, y, z, w] in the basis {1, alpha, 1/(1 - alpha)}",
        "formula": [
            "D = G(2v - u, u + v) with G(U, V) = U^3 + t U^2 V - (t + 3) U V^2 + V^3",
            "x = 1 - 3 t (u^3 + v^3) / D",
            "y = -9 u (u^2 - u v + v^2) / D",
            "z = -9 v (u^2 - u v + v^2) / D",
            "w = 1",
        ],
        "inverse": "[x, y, z, w] -> [y, z]",
        "samples": samples,
    }


def tangency_model_sign(W: WeierstrassCurve) -> tuple[Fraction, Fraction]:
    """(a delta, N(gamma)) read back from a model of section type."""
    return W.a1, W.a3


def closed_form_invariants(a_delta: RationalLike, n: RationalLike) -> tuple[Fraction, Optional[Fraction]]:
    """Discriminant and j-invariant of y^2 + A x y + N y = x^3 in closed form."""
    A3, n = to_rational(a_delta) ** 3, to_rational(n)
    disc = n**3 * (A3 - 27 * n)
    j = None if disc == 0 else A3 * (A3 - 24 * n) ** 3 / (n**3 * (A3 - 27 * n))
    return disc, j


def invariants(W: WeierstrassCurve) -> tuple[Fraction, Fraction]:
    return W.discriminant, W.j_invariant


def dual_curve(W: WeierstrassCurve) -> WeierstrassCurve:
    """y^2 + A x y - 9 N y = x^3 - N (A^3 + 27 N), isomorphic to the quotient by (0, 0)."""
    if W.a2 or W.a4 or W.a6:
        raise ValueError("the dual is defined for models y^2 + A x y + N y = x^3")
    if W.is_singular:
        raise ValueError("the curve is singular")
    A, n = W.a1, W.a3
    return WeierstrassCurve.of(A, 0, -9 * n, 0, -n * (A**3 + 27 * n))


def velu_quotient(W: WeierstrassCurve) -> WeierstrassCurve:
    return W.velu_quotient()


# ------------------------------------------------------------------ explicit maps


def skew_matrix(basis: Basis) -> list[list[Fraction]]:
    """The matrix M^t sending coordinates in ``basis`` to coordinates in {1, alpha, 1/(1 - alpha)}."""
    return matmul(basis.matrix, Basis.skew(basis.field).inverse)


def skew_hyperplane(H: Hyperplane, basis: Basis) -> tuple[Fraction, Fraction, Fraction]:
    """The coefficients (a, b', c') of H after the change of coordinates to {1, alpha, 1/(1 - alpha)}.

    They are not rescaled: the first coefficient stays a, which keeps the
    Weierstrass coefficients of the two sections related by |M| alone.
    """
    Mt = skew_matrix(basis)
    # a point X of H goes to X Mt, so the coefficient column becomes Mt^-1 (a, b, c)^t
    Mi = inverse(Mt)
    new = tuple(sum(Mi[i][j] * v for j, v in enumerate((H.a, H.b, H.c))) for i in range(3))
    assert new[0] == H.a
    return new


def _apply(coords, m):
    """Row vector (x, y, z) times the 3x3 matrix m, for rational or K entries."""
    return [sum((coords[i] * m[i][j] for i in range(3)), Fraction(0)) for j in range(3)]


def _homog_g(t: Fraction, u, v):
    """v^3 g(u / v) for g = x^3 + t x^2 - (t + 3) x + 1."""
    return u**3 + t * u * u * v - (t + 3) * u * v * v + v**3


@dataclass(frozen=True)
class MapConstants:
    """The constants of the explicit map from a plane section of X^0 to its Weierstrass model."""

    case: str  # "embed1", "embed2" or "embed3"
    t: Fraction
    a: Fraction
    A: Fraction
    B: Optional[Fraction]
    c: tuple  # c0 .. c7
    u0: Fraction
    u1: Fraction
    delta_g: Fraction
    norm_gamma: Fraction

    @property
    def shift(self) -> Fraction:
        c = self.c
        return (3 * self.A**2 * self.delta_g + c[7]) / c[1]

    def g3(self, X):
        c, d, A = self.c, self.delta_g, self.A
        return c[1] * d * X**3 + 3 * c[2] * d * X**2 + 3 * A * c[3] * d * X + c[4]

    def g2(self, X):
        c, d, A = self.c, self.delta_g, self.A
        lead = 6 * (self.B**2 + self.B + 1) if self.case == "embed1" else Fraction(6)
        return lead * d * X**2 + 3 * (c[5] / c[1]) * d * X + 3 * A * (c[6] / c[1]) * d + 3


def map_constants(H0: Sequence[RationalLike], field: CubicField) -> MapConstants:
    """Constants for a hyperplane H0 given in the basis {1, alpha, 1/(1 - alpha)}."""
    t = field.t
    a, b, c = (to_rational(v) for v in H0)
    d = t * t + 3 * t + 9
    ng = gamma(H0, Basis.skew(field)).norm()
    s_c, s_b = a * t + 3 * c, a * t + 3 * b
    if s_c != 0:
        A, B = a / s_c, s_b / s_c
        q = B * B + B + 1
        c1 = _homog_g(t, 1 - B, B + 2)
        c0 = 3 * q / c1
        c2 = A * (B * B * (2 * t + 3) + 2 * B * (t + 6) - t + 3) - q
        c3 = A * (B * (2 * t + 3) + t + 6) - 2 * B - 1
        c4 = _homog_g(t, 1 - A * t, 3 * A)
        c5 = A * (4 * B**4 * (2 * t + 3) + B**3 * (16 * t + 51) + 3 * B * B * (7 * t + 24) + B * (13 * t + 87) - 4 * t + 21) - 6 * q * q
        c6 = A * (2 * B**3 * (2 * t + 3) + 3 * B * B * (2 * t + 3) + 6 * B * (2 * t + 3) + 5 * t + 21) - 3 * ((B + 1) ** 3 + B**3)
        c7 = A * (B * B * (2 * t + 3) + 2 * B * (t + 6) - t + 3) - 2 * q
        u1 = s_c / 18
        case = "embed1"
    elif s_b != 0:
        A, B = a / s_b, None
        c1 = -2 * t - 3
        c0 = 3 / c1
        c2 = -A * (t + 6) - 1
        c3 = A * (t - 3) - 1
        c4 = _homog_g(t, 1 - A * t, 3 * A)
        c5 = -A * (4 * t + 33) - 6
        c6 = A * (5 * t - 6) - 3
        c7 = -A * (t + 6) - 2
        u1 = s_b / 18
        case = "embed2"
    else:
        return MapConstants("embed3", t, a, Fraction(0), None, (), Fraction(0), Fraction(0), d, ng)
    u0 = -12 * d * c1
    return MapConstants(case, t, a, A, B, (c0, c1, c2, c3, c4, c5, c6, c7), u0, u1, d, ng)


class SectionMap:
    """The isomorphism from X_H (in any basis) to its Weierstrass model, sending O to infinity.

    It is the change of basis to {1, alpha, 1/(1 - alpha)}, followed by the explicit
    plane-cubic map there, the reflection y -> -y, the scaling by |M|, and finally a
    sign chosen so that the image of O'^sigma - O' is exactly (0, 0).
    """

    def __init__(self, H: Hyperplane, basis: Basis):
        if is_tangent(H, basis):
            raise Tangent(f"the hyperplane {H} is tangent to the surface", parametrization=_parametrization_hint(H, basis))
        self.H, self.basis, self.field = H, basis, basis.field
        self.curve = weierstrass_model(H, basis)
        self.Mt = skew_matrix(basis)
        self.Mt_inv = inverse(self.Mt)
        self.scale = det(self.Mt)
        self.H0 = skew_hyperplane(H, basis)
        self.k = map_constants(self.H0, self.field)
        self.sign = 1
        self.sign = self._normalizing_sign()

    # -- the composite map ------------------------------------------------
    def forward(self, P: SurfacePoint) -> CurvePoint:
        x, y, z, w = P.coords
        if not _on_hyperplane(self.H, P):
            raise ValueError("the point is not on the hyperplane")
        x0, y0, z0 = _apply([x, y, z], self.Mt)
        Q = self._theta(x0, y0, z0, w)
        if Q.is_infinity:
            return Q
        u = self.scale
        Q = CurvePoint(u * u * Q.x, -(u**3) * Q.y)
        return Q if self.sign == 1 else self.curve.negate(Q)

    def inverse(self, Q: CurvePoint) -> SurfacePoint:
        if not self.curve.contains(Q):
            raise ValueError("the point is not on the model")
        if Q.is_infinity:
            return SurfacePoint([1, 0, 0, 1])
        if self.sign == -1:
            Q = self.curve.negate(Q)
        u = self.scale
        x0, y0, z0, w = self._theta_inverse(Q.x / (u * u), -Q.y / u**3)
        x, y, z = _apply([x0, y0, z0], self.Mt_inv)
        return SurfacePoint([x, y, z, w], self.field if not all(isinstance(v, Fraction) for v in (x, y, z, w)) else None)

    # -- pieces -----------------------------------------------------------
    def _free_and_dependent(self):
        return (1, 2) if self.k.case == "embed1" else (2, 1)

    def _dependent(self, xi, v, wi):
        k = self.k
        if k.case == "embed1":
            return -k.A * (xi - wi) - k.B * v
        return -k.A * (xi - wi)

    def _theta(self, x, y, z, w) -> CurvePoint:
        """The explicit map on X^0_H, landing on y^2 + a delta(g) x y - N y = x^3."""
        k = self.k
        t = k.t
        if y == 0 and z == 0 and x == w:
            return INFINITY
        xi = 3 * x - t * y - t * z
        wi = 3 * w
        v = y if k.case == "embed1" else z
        c0 = k.c[0]
        if w == 0:
            X = v / xi
            Y = -k.g2(X)
        elif xi == wi:
            # the residual point of the tangent at O: its image is the tangent direction there
            X = self._tangent_slope()
            Y = k.g2(X)
        else:
            X = (v - c0 * wi) / (xi - wi)
            Y = 2 * k.g3(X) * (xi / wi - 1) + k.g2(X)
        lx = k.u0 * k.u1**2 * (X + k.shift)
        ly = k.u0 * k.u1**3 * Y - (k.a * k.delta_g * lx - k.norm_gamma) / 2
        return CurvePoint(lx, ly)

    def _theta_inverse(self, lx, ly):
        k = self.k
        t = k.t
        X = lx / (k.u0 * k.u1**2) - k.shift
        Y = (ly + (k.a * k.delta_g * lx - k.norm_gamma) / 2) / (k.u0 * k.u1**3)
        g3, g2 = k.g3(X), k.g2(X)
        if g3 != 0:
            s = (Y - g2) / (2 * g3)
            xi, v, wi = s + 1, s * X + k.c[0], Fraction(1)
        elif Y == -g2:
            xi, v, wi = Fraction(1), X, Fraction(0)
        else:
            raise DegeneratePoint("the inverse map has a vanishing denominator at this point")
        dep = self._dependent(xi, v, wi)
        yi, zi = (v, dep) if k.case == "embed1" else (dep, v)
        return (xi + t * yi + t * zi) / 3, yi, zi, wi / 3

    def _plane_cubic(self, xa, va):
        """The section of X^0 in the affine coordinates (x_i / w_i, v / w_i) of the plane."""
        k = self.k
        t = k.t
        dep = self._dependent(xa, va, 1)
        yi, zi = (va, dep) if k.case == "embed1" else (dep, va)
        x0, y0, z0, w0 = (xa + t * yi + t * zi) / 3, yi, zi, Fraction(1, 3)
        sk = Basis.skew(self.field)
        from .cubicfield import eval_form

        return eval_form(sk.norm_form, x0, y0, z0) - w0**3

    def _tangent_slope(self) -> Fraction:
        c0 = self.k.c[0]
        # a cubic in s along each axis; its derivative at 0 from four exact samples
        def deriv(dx, dv):
            f = [self._plane_cubic(1 + s * dx, c0 + s * dv) for s in range(4)]
            return (-11 * f[0] + 18 * f[1] - 9 * f[2] + 2 * f[3]) / 6

        gx, gv = deriv(1, 0), deriv(0, 1)
        if gv == 0:
            raise DegeneratePoint("vertical tangent at the residual point")
        return -gx / gv

    def _normalizing_sign(self) -> int:
        T = self.torsion_image()
        if T == CurvePoint(Fraction(0), Fraction(0)):
            return 1
        if T == self.curve.negate(CurvePoint(Fraction(0), Fraction(0))):
            return -1
        raise AssertionError(f"O'^sigma - O' maps to {T}, not to a generator of the rational 3-torsion")

    def torsion_image(self) -> CurvePoint:
        """The image of O'^sigma - O' under the current map."""
        Op = o_prime(self.H, self.basis)
        W = self.curve
        return W.subtract(self.forward(Op.sigma()), self.forward(Op))

    @property
    def sign_flipped(self) -> bool:
        return self.sign == -1


def _on_hyperplane(H: Hyperplane, P: SurfacePoint) -> bool:
    x, y, z, w = P.coords
    return (x - w) * H.a + y * H.b + z * H.c == 0


def vartheta(P: SurfacePoint, H: Hyperplane, basis: Basis) -> CurvePoint:
    return SectionMap(H, basis).forward(P)


# ------------------------------------------------------------------ the tangent case


def rational_parametrization(t: RationalLike, u: RationalLike, v: RationalLike) -> SurfacePoint:
    """The point of X^0_H, H = 3(x - w) - t y - t z, with [y, z] = [u, v] (basis {1, alpha, 1/(1 - alpha)})."""
    t, u, v = to_rational(t), to_rational(u), to_rational(v)
    s = u + v
    if s == 0:
        raise DegeneratePoint("the parametrization has a pole at [1, -1]")
    den = _homog_g(t, 2 * v - u, s)
    if den == 0:
        raise DegeneratePoint("the parametrization has a pole here")
    q = u * u - u * v + v * v
    return SurfacePoint([-3 * t * (u**3 + v**3) / den + 1, -9 * u * q / den, -9 * v * q / den, 1])


def parametrize_inverse(P: SurfacePoint) -> tuple[Fraction, Fraction]:
    """[x, y, z, w] -> [y, z]."""
    _, y, z, _ = P.coords
    return y, z
