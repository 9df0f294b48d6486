"""Class groups, units and the norm-restricted 3-torsion of K_t at desk scale.

Prime ideals are handled without an integral basis of the maximal order.  A
prime P above a split p corresponds to a root r of h(x) = d^3 g(x/d) in Z_p,
and v_P(xi) is the p-adic valuation of xi evaluated at r.  Above inert and
ramified p there is a single prime and v_P is read off the norm.

Relations come from elements of a coefficient box in an LLL-reduced basis of
Z[d*alpha].  Units come from elements of norm +-1 and from quotients of two
box elements with the same valuation vector, which finds units of the maximal
order even when Z[d*alpha] is smaller.

Certification compares the computed h*R with the analytic class number
formula hR = |sum_a chi(a) log|1 - zeta_f^a||^2 / 4 for the cubic character
chi of K.  A relation sublattice can only inflate h and a unit subgroup can
only inflate R, so agreement certifies both.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import numpy as np

from . import arith
from .cubicfield import CubicField, FieldElement, SplittingType, ternary_norm_form
from .errors import EffortExceeded
from .linalg import ModularHNF, det, inverse, lll_gram, nullspace_mod, smith_form

LOG_DPS = 60


# ------------------------------------------------------------------ effort


@dataclass(frozen=True)
class Effort:
    """Search budgets for relation and unit searches."""

    box_start: int = 8
    box_max: int = 32
    unit_box: int = 6
    conductor_ceiling: int = 10**4

    @classmethod
    def named(cls, level: Optional[str] = None) -> "Effort":
        level = os.environ.get("DESCENT_EFFORT", level or "default")
        table = {
            "low": cls(box_start=4, box_max=16, unit_box=4),
            "default": cls(),
            "high": cls(box_start=8, box_max=64, unit_box=10, conductor_ceiling=10**5),
        }
        if level not in table:
            raise ValueError(f"unknown effort level {level!r}")
        return table[level]


# ------------------------------------------------------------------ data


@dataclass(frozen=True)
class PrimeIdeal:
    """A prime of K above p.

    For split p, ``root`` is a root of h(x) = d^3 g(x/d) modulo p**precision
    that tells the three primes apart; for inert and ramified p it is None.
    """

    p: int
    kind: SplittingType
    root: Optional[int] = None
    precision: int = 1

    @property
    def residue_degree(self) -> int:
        return 3 if self.kind is SplittingType.INERT else 1

    @property
    def norm(self) -> int:
        return self.p**self.residue_degree

    def as_pair(self) -> tuple[int, Optional[int]]:
        return (self.p, self.root)


@dataclass
class UnitData:
    fundamental_units: tuple[FieldElement, FieldElement]
    regulator: float
    regulator_proxy: Fraction
    certified: bool
    sigma_matrix: tuple[tuple[int, int], tuple[int, int]] = ((1, 0), (0, 1))


@dataclass
class IdealClassData:
    class_number: int
    elementary_divisors: tuple[int, ...]
    three_rank: int
    generators: tuple[tuple[int, Optional[int]], ...]
    certified: bool
    source: str = "computed"
    stable: bool = False
    g_invariant: Optional[bool] = None
    structure: Optional["ClassGroupStructure"] = dc_field(default=None, repr=False, compare=False)
    units: Optional[UnitData] = dc_field(default=None, repr=False, compare=False)

    def to_json(self, t: Fraction) -> dict:
        return {
            "t": arith.format_rational(t),
            "class_number": self.class_number,
            "elementary_divisors": list(self.elementary_divisors),
            "source": self.source,
            "certified": self.certified,
            "stable": self.stable,
            "g_invariant": self.g_invariant,
        }


@dataclass
class ClassGroupStructure:
    """Cl = Z^n / L with coordinates x -> (x V)_i mod d_i."""

    factor_base: list[PrimeIdeal]
    divisors: list[int]
    V: list[list[int]]
    V_inv: list[list[int]]
    sigma_perm: list[int]

    def coordinates(self, x: Sequence[int]) -> list[int]:
        n = len(self.factor_base)
        return [sum(x[k] * self.V[k][i] for k in range(n)) % self.divisors[i] for i in range(n)]

    def ideal_vector(self, coords: Sequence[int]) -> list[int]:
        n = len(self.factor_base)
        return [sum(coords[i] * self.V_inv[i][k] for i in range(n)) for k in range(n)]

    def apply_sigma(self, x: Sequence[int]) -> list[int]:
        out = [0] * len(x)
        for j, e in enumerate(x):
            out[self.sigma_perm[j]] += e
        return out


# ------------------------------------------------------------------ bounds


def minkowski_bound(field: CubicField) -> Fraction:
    """(3!/3^3) sqrt(disc K) = (2/9) f for a cyclic cubic field of conductor f."""
    return Fraction(2, 9) * field.conductor_value


# ------------------------------------------------------------------ primes


def _beta_coords(xi: FieldElement) -> tuple[list[int], int]:
    """Integral coordinates of L*xi in the basis 1, beta, beta^2, and L."""
    d = xi.field.denominator
    e = [xi.c[k] / d**k for k in range(3)]
    L = 1
    for v in e:
        L = L * v.denominator // math.gcd(L, v.denominator)
    return [int(v * L) for v in e], L


class PrimeData:
    """Primes of K above one rational prime and their valuation functions."""

    def __init__(self, field: CubicField, p: int):
        self.field = field
        self.p = p
        self.kind = field.splitting_type(p)
        self.h = field.integral_poly()
        self.ideals: list[PrimeIdeal] = []
        if self.kind is SplittingType.SPLIT:
            k = 1
            while True:
                roots = arith.zp_roots(self.h, p, k)
                if len(roots) == 3:
                    break
                k += 1
            self._k0 = k
            self._roots = {k: roots}
            self.ideals = [PrimeIdeal(p, self.kind, r, k) for r in roots]
        else:
            self.ideals = [PrimeIdeal(p, self.kind)]

    def _roots_at(self, prec: int) -> list[int]:
        prec = max(prec, self._k0)
        if prec not in self._roots:
            lifted = arith.zp_roots(self.h, self.p, prec)
            base = self._roots[self._k0]
            mod0 = self.p**self._k0
            self._roots[prec] = [next(r for r in lifted if r % mod0 == b) for b in base]
        return self._roots[prec]

    def valuations(self, xi: FieldElement, norm: Optional[Fraction] = None) -> list[int]:
        """v_P(xi) for each prime P above p, in the order of ``ideals``."""
        n = xi.norm() if norm is None else norm
        if n == 0:
            raise ValueError("valuation of zero")
        vn = arith.valuation(n, self.p)
        if self.kind is SplittingType.INERT:
            return [vn // 3]
        if self.kind.ramified:
            return [vn]
        coords, L = _beta_coords(xi)
        vL = arith.valuation(L, self.p)
        prec = vn + 3 * vL + 1
        mod = self.p**prec
        out = []
        for r in self._roots_at(prec):
            val = (coords[0] + coords[1] * r + coords[2] * r * r) % mod
            out.append(arith.valuation(val, self.p) - vL)
        assert sum(out) == vn, "valuations of a split prime must add up to the norm valuation"
        return out

    def sigma_images(self) -> list[int]:
        """Index j with sigma(P_i) = P_j for each prime P_i above p."""
        if self.kind is not SplittingType.SPLIT:
            return [0]
        prec = self._k0 + 6
        images = []
        for r in self._roots_at(prec):
            eta = self.field.beta - r
            vals = self.valuations(eta.sigma())
            images.append(max(range(3), key=lambda j: vals[j]))
        assert sorted(images) == [0, 1, 2]
        return images


# ------------------------------------------------------------------ search


class BoxSearch:
    """Elements sum x_i b_i of an LLL-reduced basis b of Z[d*alpha]."""

    def __init__(self, field: CubicField):
        self.field = field
        b = field.beta
        power = [field.one, b, b * b]
        gram = [[(u * v).trace() for v in power] for u in power]
        T = lll_gram(gram)
        self.basis = [sum((power[j] * T[i][j] for j in range(3)), field.element((0, 0, 0))) for i in range(3)]
        form = ternary_norm_form(field, *self.basis)
        self.form = {m: int(c) for m, c in form.items()}
        assert all(Fraction(c) == form[m] for m, c in self.form.items())

    def element(self, x: Sequence[int]) -> FieldElement:
        return self.basis[0] * int(x[0]) + self.basis[1] * int(x[1]) + self.basis[2] * int(x[2])

    def shell(self, inner: int, outer: int) -> np.ndarray:
        """Primitive vectors with inner < max|x_i| <= outer and first nonzero entry positive."""
        r = np.arange(-outer, outer + 1, dtype=np.int64)
        X, Y, Z = np.meshgrid(r, r, r, indexing="ij")
        pts = np.stack([X.ravel(), Y.ravel(), Z.ravel()], axis=1)
        m = np.abs(pts).max(axis=1)
        pts = pts[(m > inner)]
        g = np.gcd.reduce(np.abs(pts), axis=1)
        pts = pts[g == 1]
        first = np.where(pts[:, 0] != 0, pts[:, 0], np.where(pts[:, 1] != 0, pts[:, 1], pts[:, 2]))
        return pts[first > 0]

    def norms(self, pts: np.ndarray) -> list[int]:
        bound = sum(abs(c) for c in self.form.values()) * float(np.abs(pts).max(initial=1)) ** 3
        if bound < 2**62:
            out = np.zeros(len(pts), dtype=np.int64)
            for (i, j, k), c in self.form.items():
                out += c * pts[:, 0] ** i * pts[:, 1] ** j * pts[:, 2] ** k
            return out
        obj = pts.astype(object)
        out = np.zeros(len(pts), dtype=object)
        for (i, j, k), c in self.form.items():
            out = out + c * obj[:, 0] ** i * obj[:, 1] ** j * obj[:, 2] ** k
        return out


def _smooth_mask(norms, primes: Sequence[int]) -> np.ndarray:
    rem = np.abs(np.asarray(norms))
    for p in primes:
        while True:
            hit = (rem % p) == 0
            hit &= rem != 0
            if not hit.any():
                break
            rem = np.where(hit, rem // p, rem)
    return rem == 1


# ------------------------------------------------------------------ units


def _log_vector(xi: FieldElement) -> tuple:
    with mpmath.workdps(LOG_DPS):
        conj = xi.conjugates_numeric(LOG_DPS)
        return tuple(mpmath.log(abs(c)) for c in conj[:2])


class UnitLattice:
    """Incrementally maintained basis of the subgroup generated by units mod +-1."""

    def __init__(self):
        self.basis: list[tuple[FieldElement, tuple]] = []

    def add(self, u: FieldElement) -> bool:
        """Insert a unit; returns True when the lattice grew."""
        lu = _log_vector(u)
        with mpmath.workdps(LOG_DPS):
            if max(abs(v) for v in lu) < mpmath.mpf(10) ** (-20):
                return False  # torsion
            if not self.basis:
                self.basis.append((u, lu))
                return True
            if len(self.basis) == 1:
                e1, l1 = self.basis[0]
                cross = l1[0] * lu[1] - l1[1] * lu[0]
                if abs(cross) > mpmath.mpf(10) ** (-20):
                    self.basis.append((u, lu))
                    self._reduce()
                    return True
                x = _rationalize(lu[0] / l1[0] if abs(l1[0]) > abs(l1[1]) else lu[1] / l1[1])
                g, s, v = _xgcd(x.denominator, x.numerator)
                if x.denominator == 1:
                    return False
                new = e1**s * u**v
                self.basis[0] = (new, _log_vector(new))
                return True
            (e1, l1), (e2, l2) = self.basis
            dt = l1[0] * l2[1] - l1[1] * l2[0]
            x1 = _rationalize((lu[0] * l2[1] - lu[1] * l2[0]) / dt)
            x2 = _rationalize((l1[0] * lu[1] - l1[1] * lu[0]) / dt)
        q = math.lcm(x1.denominator, x2.denominator)
        if q == 1:
            return False
        rows = [[q, 0, 1, 0, 0], [0, q, 0, 1, 0], [int(x1 * q), int(x2 * q), 0, 0, 1]]
        ech = _echelon2(rows)
        gens = []
        for row in ech[:2]:
            a, b, c = row[2:]
            gens.append(e1**a * e2**b * u**c)
        self.basis = [(g, _log_vector(g)) for g in gens]
        self._reduce()
        return True

    def _reduce(self) -> None:
        """Lagrange-Gauss reduction of the two log vectors."""
        (e1, l1), (e2, l2) = self.basis
        with mpmath.workdps(LOG_DPS):
            while True:
                n1 = l1[0] ** 2 + l1[1] ** 2
                n2 = l2[0] ** 2 + l2[1] ** 2
                if n2 < n1:
                    e1, l1, e2, l2 = e2, l2, e1, l1
                    n1, n2 = n2, n1
                k = int(mpmath.nint((l1[0] * l2[0] + l1[1] * l2[1]) / n1))
                if k == 0:
                    break
                e2 = e2 * e1 ** (-k)
                l2 = _log_vector(e2)
        self.basis = [(e1, l1), (e2, l2)]

    def regulator(self) -> float:
        (_, l1), (_, l2) = self.basis
        with mpmath.workdps(LOG_DPS):
            return abs(l1[0] * l2[1] - l1[1] * l2[0])


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _echelon2(rows: list[list[int]]) -> list[list[int]]:
    """Row echelon form on the first two columns, carrying the remaining columns along."""
    rows = [list(r) for r in rows]
    for c in range(2):
        piv = c
        for i in range(c + 1, len(rows)):
            if rows[i][c] == 0:
                continue
            if rows[piv][c] == 0:
                rows[piv], rows[i] = rows[i], rows[piv]
                continue
            g, s, u = _xgcd(rows[piv][c], rows[i][c])
            a, b = rows[piv][c] // g, rows[i][c] // g
            rp, ri = rows[piv], rows[i]
            rows[piv] = [s * x + u * y for x, y in zip(rp, ri)]
            rows[i] = [-b * x + a * y for x, y in zip(rp, ri)]
    return rows


def _rationalize(x) -> Fraction:
    q = Fraction(mpmath.nstr(x, LOG_DPS - 10, strip_zeros=False)).limit_denominator(10**6)
    with mpmath.workdps(LOG_DPS):
        if abs(x - mpmath.mpf(q.numerator) / q.denominator) > mpmath.mpf(10) ** (-25):
            raise ArithmeticError("unit logarithms are not rationally related; precision too low")
    return q


def _sigma_matrix(units: Sequence[FieldElement]) -> tuple[tuple[int, int], tuple[int, int]]:
    """Integers (r, s), (r', s') with sigma(e_i) = +-e1^r e2^s (rows)."""
    l1, l2 = _log_vector(units[0]), _log_vector(units[1])
    rows = []
    with mpmath.workdps(LOG_DPS):
        dt = l1[0] * l2[1] - l1[1] * l2[0]
        for u in units:
            ls = _log_vector(u.sigma())
            r = _rationalize((ls[0] * l2[1] - ls[1] * l2[0]) / dt)
            s = _rationalize((l1[0] * ls[1] - l1[1] * ls[0]) / dt)
            if r.denominator != 1 or s.denominator != 1:
                raise ArithmeticError("sigma does not preserve the unit lattice; units are not fundamental")
            rows.append((int(r), int(s)))
    return tuple(rows)


def fundamental_units(field: CubicField, height_bound: int = 6) -> UnitData:
    """Two independent units generating the units found in a coefficient box, modulo +-1.

    ``certified`` means that doubling the box did not change the lattice;
    compute_class_group replaces this with the analytic h*R check.
    """
    lattice, regs = _unit_search(field, [height_bound, 2 * height_bound])
    if len(lattice.basis) < 2:
        raise EffortExceeded(f"fewer than two independent units within box {2 * height_bound}")
    return _unit_data(lattice, certified=abs(regs[-1] - regs[-2]) < 1e-20 if len(regs) > 1 else False)


def _unit_data(lattice: UnitLattice, certified: bool) -> UnitData:
    units = tuple(u for u, _ in lattice.basis)
    reg = lattice.regulator()
    return UnitData(
        fundamental_units=units,
        regulator=float(reg),
        regulator_proxy=Fraction(mpmath.nstr(reg, 30)),
        certified=certified,
        sigma_matrix=_sigma_matrix(units),
    )


def _unit_search(field: CubicField, boxes: Sequence[int], relation_pool=None) -> tuple[UnitLattice, list]:
    lattice = UnitLattice()
    if field.t.denominator == 1:
        lattice.add(field.alpha)
        lattice.add(field.sigma_alpha())
    search = BoxSearch(field)
    regs = []
    inner = 0
    for B in boxes:
        pts = search.shell(inner, B)
        inner = B
        norms = np.asarray(search.norms(pts))
        for x in pts[np.abs(norms) == 1]:
            lattice.add(search.element(x))
        regs.append(lattice.regulator() if len(lattice.basis) == 2 else None)
    if relation_pool:
        for u in relation_pool:
            lattice.add(u)
        regs.append(lattice.regulator() if len(lattice.basis) == 2 else None)
    return lattice, regs


# ------------------------------------------------------------------ analytic


def cubic_character(field: CubicField):
    """Exponent function a -> k in Z/3 with chi(a) = omega^k, for the character of K."""
    f = field.conductor_value
    primes = list(field.ramified_primes)

    def component(q, a):
        return arith.mod9_class(a) if q == 3 else arith.cubic_character(a, q)

    candidates = []
    for exps in itertools.product([1, 2], repeat=len(primes)):
        if exps and exps[0] != 1:
            continue  # chi and its conjugate define the same field
        candidates.append(exps)
    ell = 2
    while len(candidates) > 1:
        ell += 1
        if not arith.is_prime(ell) or f % ell == 0:
            continue
        split = field.splitting_type(ell) is SplittingType.SPLIT
        candidates = [
            e for e in candidates if (sum(k * component(q, ell) for k, q in zip(e, primes)) % 3 == 0) == split
        ]
    (exps,) = candidates

    def chi(a: int) -> int:
        return sum(k * component(q, a) for k, q in zip(exps, primes)) % 3

    return chi


def analytic_hR(field: CubicField, dps: int = 40):
    """h*R from the analytic class number formula."""
    f = field.conductor_value
    chi = cubic_character(field)
    with mpmath.workdps(dps):
        S = [mpmath.mpf(0)] * 3
        for a in range(1, f):
            if math.gcd(a, f) == 1:
                S[chi(a)] += mpmath.log(abs(2 * mpmath.sin(mpmath.pi * a / f)))
        mod2 = S[0] ** 2 + S[1] ** 2 + S[2] ** 2 - S[0] * S[1] - S[1] * S[2] - S[0] * S[2]
        return mod2 / 4


# ------------------------------------------------------------------ class group


def _factor_base_primes(field: CubicField) -> list[int]:
    M = minkowski_bound(field)
    primes = [p for p in arith.primes_up_to(int(M)) if p <= M]
    # primes dividing the index of Z[d*alpha] in the maximal order
    d = field.denominator
    index_sq = Fraction(d**6) * field.delta_g**2 / field.conductor_value**2
    extra = [p for p in arith.prime_support(index_sq) if p not in primes]
    return sorted(set(primes) | set(extra))


def compute_class_group(field: CubicField, effort: Optional[Effort] = None) -> IdealClassData:
    """Cl_K from box relations over the prime ideals of norm below the Minkowski bound."""
    effort = effort or Effort.named()
    if field.conductor_value > effort.conductor_ceiling:
        raise EffortExceeded(f"conductor {field.conductor_value} above the ceiling {effort.conductor_ceiling}")
    primes = _factor_base_primes(field)
    pdata = {p: PrimeData(field, p) for p in primes}
    base: list[PrimeIdeal] = []
    slots: dict[int, list[int]] = {}
    for p in primes:
        pd = pdata[p]
        if pd.kind is SplittingType.INERT:
            continue  # (p) is principal
        slots[p] = list(range(len(base), len(base) + len(pd.ideals)))
        base.extend(pd.ideals)
    n = len(base)
    sigma_perm = list(range(n))
    for p, idx in slots.items():
        for i, j in enumerate(pdata[p].sigma_images()):
            sigma_perm[idx[i]] = idx[j]

    def relation(xi: FieldElement, nx: Optional[int] = None) -> tuple[list[int], tuple]:
        vec = [0] * n
        inert = []
        nx = xi.norm() if nx is None else Fraction(int(nx))
        for p in primes:
            divides = arith.valuation(nx, p) != 0
            if p in slots:
                if divides:
                    for k, v in zip(slots[p], pdata[p].valuations(xi, nx)):
                        vec[k] = v
            else:
                inert.append(pdata[p].valuations(xi, nx)[0] if divides else 0)
        return vec, tuple(inert)

    search = BoxSearch(field)
    relations: list[list[int]] = []
    by_vector: dict[tuple, FieldElement] = {}
    unit_pool: list[FieldElement] = []
    for p in primes:
        relations.append(relation(field.one * p)[0])

    def harvest(pts):
        norms = search.norms(pts)
        mask = _smooth_mask(norms, primes)
        for x, nx in zip(pts[mask], np.asarray(norms)[mask]):
            xi = search.element(x)
            vec, inert = relation(xi, nx)
            key = (tuple(vec), inert)
            if key in by_vector:
                unit_pool.append(xi / by_vector[key])
            else:
                by_vector[key] = xi
            relations.append(vec)

    hnf: Optional[ModularHNF] = None
    history: list[int] = []
    inner = 0
    B = effort.box_start
    while True:
        harvest(search.shell(inner, B))
        inner = B
        if n == 0:
            history.append(1)
        else:
            if hnf is None:
                D = _full_rank_determinant(relations, n)
                if D is not None:
                    hnf = ModularHNF(n, D)
                    for r in relations:
                        hnf.insert(r)
                    inserted = len(relations)
            else:
                for r in relations[inserted:]:
                    hnf.insert(r)
                inserted = len(relations)
            history.append(hnf.determinant() if hnf else 0)
        stable = len(history) >= 3 and history[-1] == history[-2] == history[-3] and history[-1] > 0
        if stable or 2 * B > effort.box_max:
            break
        B *= 2
    if history[-1] == 0:
        raise EffortExceeded(f"relation lattice not of full rank within box {B}")

    if n:
        H = hnf.matrix()
        divisors, V = smith_form(H)
    else:
        divisors, V = [], []
    V_inv = [[int(v) for v in row] for row in inverse(V)] if n else []
    h = math.prod(divisors) if divisors else 1
    structure = ClassGroupStructure(base, divisors, V, V_inv, sigma_perm)

    lattice, _ = _unit_search(field, [effort.unit_box], relation_pool=unit_pool)
    units = None
    analytic_ok = False
    if len(lattice.basis) == 2:
        reg = lattice.regulator()
        hR = analytic_hR(field)
        with mpmath.workdps(LOG_DPS):
            analytic_ok = abs(h * reg - hR) < mpmath.mpf(10) ** (-15) * max(1, abs(hR))
        units = _unit_data(lattice, certified=analytic_ok)
    stable = len(history) >= 3 and history[-1] == history[-2] == history[-3]
    nontrivial = [d for d in divisors if d > 1]
    data = IdealClassData(
        class_number=h,
        elementary_divisors=tuple(nontrivial),
        three_rank=sum(1 for d in nontrivial if d % 3 == 0),
        generators=tuple(P.as_pair() for P in base),
        certified=bool(analytic_ok),
        stable=bool(stable),
        structure=structure,
        units=units,
    )
    data.g_invariant = _is_g_invariant(structure)
    return data


def _full_rank_determinant(relations: list[list[int]], n: int) -> Optional[int]:
    """|det| of n independent relations, or None when the rank is deficient."""
    chosen: list[list[int]] = []
    echelon: list[list[Fraction]] = []
    pivots: list[int] = []
    for r in relations:
        v = [Fraction(x) for x in r]
        for row, pc in zip(echelon, pivots):
            if v[pc]:
                f = v[pc] / row[pc]
                v = [a - f * b for a, b in zip(v, row)]
        pc = next((i for i, a in enumerate(v) if a), None)
        if pc is None:
            continue
        echelon.append(v)
        pivots.append(pc)
        chosen.append(r)
        if len(chosen) == n:
            return abs(int(det(chosen)))
    return None


def _is_g_invariant(s: ClassGroupStructure) -> bool:
    n = len(s.factor_base)
    for k in range(n):
        e = [int(i == k) for i in range(n)]
        if s.coordinates(s.apply_sigma(e)) != s.coordinates(e):
            return False
    return True


# ------------------------------------------------------------------ G-action and norm restriction


def g_invariant_unit_classes(field: CubicField, units: Optional[UnitData] = None) -> tuple[int, int]:
    """(dim (O_K^*/O_K^*3)^G, dim of the classes eps^(sigma-1)) over F_3."""
    units = units or fundamental_units(field)
    (r, s), (r2, s2) = units.sigma_matrix
    # sigma acts on exponent row vectors (a, b) by (a, b) -> a*(r, s) + b*(r2, s2)
    m = [[(r - 1) % 3, r2 % 3], [s % 3, (s2 - 1) % 3]]
    fixed = len(nullspace_mod(m, 3))
    image = 2 - fixed
    return fixed, image


def n_cl_g3_direct(field: CubicField, effort: Optional[Effort] = None, data: Optional[IdealClassData] = None) -> int:
    """dim over F_3 of the sigma-fixed classes [A] of order 3 with A^3 = (a), N(a) = 1.

    A class of order dividing 3 lies in the norm-restricted subgroup exactly
    when the ideal norm N(A) is a norm from K^*: if A^3 = (a) then
    N(a) = +-N(A)^3, and a may be changed by units (norm +-1) and by cubes.
    By the Hasse norm theorem this is decided by the local symbols at the
    ramified primes, which makes the condition F_3-linear on Cl[3].
    """
    data = data or compute_class_group(field, effort)
    if not data.certified:
        raise EffortExceeded("class group not certified")
    s = data.structure
    if s is None:
        raise ValueError("class group structure unavailable (external data)")
    tors = [i for i, d in enumerate(s.divisors) if d % 3 == 0]
    if not tors:
        return 0
    ram = list(field.ramified_primes)
    rows_sigma = []
    rows_norm = []
    for i in tors:
        coords = [0] * len(s.divisors)
        coords[i] = s.divisors[i] // 3
        x = s.ideal_vector(coords)
        img = s.coordinates(s.apply_sigma(x))
        col = []
        for k in tors:
            q = s.divisors[k] // 3
            assert img[k] % q == 0
            col.append((img[k] // q - int(k == i)) % 3)
        rows_sigma.append(col)
        nA = Fraction(1)
        for P, e in zip(s.factor_base, x):
            nA *= Fraction(P.norm) ** e
        rows_norm.append([field.local_norm_symbol(nA, p) for p in ram])
    # columns of the constraint matrix are indexed by the torsion basis
    constraint = [[rows_sigma[j][k] for j in range(len(tors))] for k in range(len(tors))]
    constraint += [[rows_norm[j][k] for j in range(len(tors))] for k in range(len(ram))]
    return len(nullspace_mod(constraint, 3))


# ------------------------------------------------------------------ external data


def load_class_group_json(path: str, field: Optional[CubicField] = None) -> IdealClassData:
    """Read {"t", "class_number", "elementary_divisors", "source", "g_invariant"} from a file.

    Only "t" and "class_number" are required.  "g_invariant" states whether
    sigma acts trivially on the class group.
    """
    with open(path) as fh:
        doc = json.load(fh)
    h = int(doc["class_number"])
    divs = tuple(int(d) for d in doc.get("elementary_divisors", []) if int(d) > 1)
    if math.prod(divs) != h:
        raise ValueError("elementary divisors do not multiply to the class number")
    if field is not None and arith.to_rational(doc["t"]) != field.t:
        raise ValueError(f"class group file is for t = {doc['t']}, not {field.t}")
    return IdealClassData(
        class_number=h,
        elementary_divisors=divs,
        three_rank=sum(1 for d in divs if d % 3 == 0),
        generators=(),
        certified=False,
        source=str(doc.get("source", "external")),
        g_invariant=doc.get("g_invariant") if h % 3 == 0 else True,
    )
