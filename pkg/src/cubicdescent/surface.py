"""The norm-form cubic surface, its plane sections through O = [1, 0, 0, 1], and eta.

The surface X in P^3 is N(x + y a1 + z a2) = w^3 for a basis {1, a1, a2} of K.
Points with w != 0 form a group (the kernel of the norm), and a hyperplane
a(x - w) + by + cz = 0 through O cuts out a plane cubic X_H.  Its points with
w = 0 are the three conjugates of O', the zero of iota = x + y a1 + z a2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence, Union

from .arith import RationalLike, to_rational
from .cubicfield import CubicField, FieldElement, eval_form, ternary_norm_form
from .linalg import det, inverse, matvec


# ------------------------------------------------------------------ hyperplanes


@dataclass(frozen=True)
class Hyperplane:
    """a(x - w) + by + cz = 0 with (a, b, c) a primitive integer triple, first nonzero entry positive."""

    a: int
    b: int
    c: int

    @classmethod
    def of(cls, a: RationalLike, b: RationalLike, c: RationalLike) -> "Hyperplane":
        q = [to_rational(v) for v in (a, b, c)]
        if not any(q):
            raise ValueError("the zero triple does not define a hyperplane")
        den = math.lcm(*(v.denominator for v in q))
        ints = [int(v * den) for v in q]
        g = math.gcd(*ints)
        ints = [v // g for v in ints]
        first = next(v for v in ints if v)
        if first < 0:
            ints = [-v for v in ints]
        return cls(*ints)

    @classmethod
    def parse(cls, text: str) -> "Hyperplane":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected a,b,c but got {text!r}")
        return cls.of(*parts)

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def contains(self, P: "SurfacePoint") -> bool:
        x, y, z, w = P.coords
        return (x - w) * self.a + y * self.b + z * self.c == 0

    def __str__(self):
        return f"{self.a},{self.b},{self.c}"


# ------------------------------------------------------------------ bases


class Basis:
    """A basis {1, a1, a2} of K; rows of ``matrix`` are power-basis coordinates."""

    def __init__(self, field: CubicField, matrix: Optional[Sequence[Sequence[RationalLike]]] = None):
        self.field = field
        m = matrix if matrix is not None else [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        self.matrix = [[to_rational(v) for v in row] for row in m]
        if len(self.matrix) != 3 or any(len(r) != 3 for r in self.matrix):
            raise ValueError("basis matrix must be 3x3")
        if det(self.matrix) == 0:
            raise ValueError("basis matrix is singular")
        if self.matrix[0] != [1, 0, 0]:
            raise ValueError("the first basis element must be 1")
        self.inverse = inverse(self.matrix)

    @classmethod
    def power(cls, field: CubicField) -> "Basis":
        return cls(field)

    @classmethod
    def skew(cls, field: CubicField) -> "Basis":
        """{1, alpha, 1/(1 - alpha)}, the basis in which the explicit maps are written."""
        s = field.sigma_alpha()
        return cls(field, [[1, 0, 0], [0, 1, 0], list(s.c)])

    @classmethod
    def from_flat(cls, field: CubicField, values: Sequence[RationalLike]) -> "Basis":
        if len(values) != 9:
            raise ValueError("a basis needs 9 rationals")
        return cls(field, [values[0:3], values[3:6], values[6:9]])

    def __eq__(self, other):
        return isinstance(other, Basis) and other.field == self.field and other.matrix == self.matrix

    def __hash__(self):
        return hash((self.field, tuple(map(tuple, self.matrix))))

    @property
    def determinant(self) -> Fraction:
        return det(self.matrix)

    @cached_property
    def elements(self) -> tuple[FieldElement, FieldElement, FieldElement]:
        return tuple(self.field.element(row) for row in self.matrix)

    @property
    def a1(self) -> FieldElement:
        return self.elements[1]

    @property
    def a2(self) -> FieldElement:
        return self.elements[2]

    def coordinates(self, xi: FieldElement) -> list[Fraction]:
        """(x, y, z) with xi = x + y a1 + z a2."""
        return [sum(xi.c[i] * self.inverse[i][j] for i in range(3)) for j in range(3)]

    def combine(self, x, y, z, sigma_power: int = 0):
        """iota^(sigma^k)(x, y, z) = x + y sigma^k(a1) + z sigma^k(a2) for rational or K coordinates."""
        e = [v.sigma(sigma_power) for v in self.elements]
        return _scale(e[0], x) + _scale(e[1], y) + _scale(e[2], z)

    @cached_property
    def norm_form(self) -> dict:
        return ternary_norm_form(self.field, *self.elements)

    @cached_property
    def delta(self) -> Fraction:
        """delta(X): the determinant with rows (1, s^k a1, s^k a2), k = 0, 1, 2."""
        rows = [[v.sigma(k) for v in self.elements] for k in range(3)]
        d = _det3(rows)
        assert d.is_rational()
        return d.c[0]


def _scale(e: FieldElement, v):
    if isinstance(v, FieldElement):
        return e * v
    return e * to_rational(v)


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


# ------------------------------------------------------------------ points

Coord = Union[Fraction, FieldElement]


class SurfacePoint:
    """A projective point [x, y, z, w] with rational or K coordinates."""

    def __init__(self, coords: Sequence, field: Optional[CubicField] = None):
        if len(coords) != 4:
            raise ValueError("surface points have four coordinates")
        if any(isinstance(c, FieldElement) for c in coords):
            field = field or next(c.field for c in coords if isinstance(c, FieldElement))
        if field is not None and all(isinstance(c, FieldElement) for c in coords) and all(c.is_rational() for c in coords):
            coords = [c.c[0] for c in coords]
            field = None
        if field is None:
            coords = [to_rational(c) for c in coords]
        else:
            coords = [c if isinstance(c, FieldElement) else field.element((c, 0, 0)) for c in coords]
        if all(_is_zero(c) for c in coords):
            raise ValueError("[0, 0, 0, 0] is not a projective point")
        self.field = field
        self.coords = tuple(self._normalize(coords))

    @property
    def is_rational(self) -> bool:
        return self.field is None

    def _normalize(self, coords):
        if self.field is None:
            den = math.lcm(*(c.denominator for c in coords))
            ints = [int(c * den) for c in coords]
            g = math.gcd(*ints)
            ints = [v // g for v in ints]
            if next(v for v in ints if v) < 0:
                ints = [-v for v in ints]
            return [Fraction(v) for v in ints]
        lead = next(c for c in coords if not c.is_zero())
        return [c / lead for c in coords]

    def __eq__(self, other):
        if not isinstance(other, SurfacePoint):
            return NotImplemented
        if self.is_rational != other.is_rational:
            return False
        return self.coords == other.coords

    def __hash__(self):
        return hash(tuple(c if isinstance(c, Fraction) else tuple(c.c) for c in self.coords))

    def __repr__(self):
        return f"SurfacePoint({list(self.coords)})"

    @property
    def w(self):
        return self.coords[3]

    def sigma(self, k: int = 1) -> "SurfacePoint":
        """Galois conjugate of a K-point (coordinates conjugated)."""
        if self.is_rational:
            return self
        return SurfacePoint([c.sigma(k) for c in self.coords], self.field)

    def in_field(self, field: CubicField) -> list[FieldElement]:
        if self.is_rational:
            return [field.element((c, 0, 0)) for c in self.coords]
        return list(self.coords)


def _is_zero(c) -> bool:
    return c.is_zero() if isinstance(c, FieldElement) else c == 0


O = SurfacePoint([1, 0, 0, 1])


def iota(P: SurfacePoint, basis: Basis, sigma_power: int = 0):
    """x + y s^k(a1) + z s^k(a2) at P, with the normalized coordinates of P."""
    x, y, z, _ = P.coords
    return basis.combine(x, y, z, sigma_power)


def surface_contains(P: SurfacePoint, basis: Basis) -> bool:
    """Whether N(x + y a1 + z a2) - w^3 vanishes at P."""
    x, y, z, w = P.in_field(basis.field) if not P.is_rational else P.coords
    val = eval_form(basis.norm_form, x, y, z) - w * w * w
    return val.is_zero() if isinstance(val, FieldElement) else val == 0


def unit_to_point(xi: FieldElement, basis: Basis) -> SurfacePoint:
    """The point [x, y, z, 1] with x + y a1 + z a2 = xi, for N(xi) = 1."""
    if xi.norm() != 1:
        raise ValueError("only elements of norm 1 give points with w = 1")
    x, y, z = basis.coordinates(xi)
    return SurfacePoint([x, y, z, 1])


def point_to_unit(P: SurfacePoint, basis: Basis) -> FieldElement:
    """iota(P)/w for a rational point with w != 0."""
    if not P.is_rational:
        raise ValueError("point_to_unit takes rational points")
    x, y, z, w = P.coords
    if w == 0:
        raise ValueError("points with w = 0 do not correspond to norm-one elements")
    return basis.combine(x / w, y / w, z / w)


def multiply_points(P: SurfacePoint, Q: SurfacePoint, basis: Basis) -> SurfacePoint:
    """The group law of the norm-one torus on rational points with w != 0."""
    return unit_to_point(point_to_unit(P, basis) * point_to_unit(Q, basis), basis)


def translate_hyperplane(P: SurfacePoint, H: Hyperplane, basis: Basis) -> Hyperplane:
    """The hyperplane H0 = P^-1 * H; it passes through O and X_H0 is isomorphic to X_H.

    Multiplication by iota(P)^-1 sends row coordinates X to X R, R the matrix of
    multiplication by iota(P)^-1.  Points of H satisfy X (a, b, c)^T = a w, so
    their images satisfy Y R^-1 (a, b, c)^T = a w.  Since P lies on H, O lies on
    the image, which forces the new first coefficient to equal a.
    """
    if not P.is_rational or P.w == 0:
        raise ValueError("translation needs a rational point with w != 0")
    if not H.contains(P):
        raise ValueError("the point does not lie on the hyperplane")
    mu = point_to_unit(P, basis)  # multiplication by mu is R^-1
    rows = [basis.coordinates(mu * e) for e in basis.elements]
    new = matvec(rows, [H.a, H.b, H.c])
    assert new[0] == H.a
    return Hyperplane.of(*new)


# ------------------------------------------------------------------ invariants of a section


def gamma(H, basis: Basis) -> FieldElement:
    """The determinant with rows (1, a1, a2), (1, s(a1), s(a2)), (a, b, c).

    H may be a Hyperplane or any rational triple (a, b, c).
    """
    e = basis.elements
    s = [v.sigma() for v in e]
    K = basis.field
    rows = [list(e), s, [K.element((to_rational(v), 0, 0)) for v in H]]
    return _det3(rows)


def norm_gamma(H: Hyperplane, basis: Basis) -> Fraction:
    return gamma(H, basis).norm()


def tangency_value(H: Hyperplane, basis: Basis) -> Fraction:
    """a^3 delta^3 - 27 N(gamma); the section is singular iff this or N(gamma) vanishes."""
    return H.a**3 * basis.delta**3 - 27 * norm_gamma(H, basis)


def is_tangent(H: Hyperplane, basis: Basis) -> bool:
    return norm_gamma(H, basis) == 0 or tangency_value(H, basis) == 0


def o_prime(H: Hyperplane, basis: Basis) -> SurfacePoint:
    """O' = [c a1 - b a2, a a2 - c, -a a1 + b, 0], the zero of iota on X_H."""
    a1, a2 = basis.a1, basis.a2
    a, b, c = H.a, H.b, H.c
    coords = [a1 * c - a2 * b, a2 * a - c, -(a1 * a) + b, basis.field.element((0, 0, 0))]
    return SurfacePoint(coords, basis.field)


def eta(P: SurfacePoint, basis: Basis) -> FieldElement:
    """iota^sigma / iota at P."""
    K = basis.field
    x, y, z, _ = P.in_field(K)
    den = basis.combine(x, y, z, 0)
    num = basis.combine(x, y, z, 1)
    if isinstance(den, FieldElement) and den.is_zero():
        raise ZeroDivisionError("eta has a pole at this point (iota vanishes)")
    if isinstance(num, FieldElement) and num.is_zero():
        raise ZeroDivisionError("eta has a zero at this point (iota^sigma vanishes)")
    return num / den
