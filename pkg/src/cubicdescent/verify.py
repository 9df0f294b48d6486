"""Seeded property suites behind `cubicdescent verify`.

Each suite draws its samples from `random.Random(seed)` and returns a
SuiteResult; a non-empty `failures` list holds counterexamples.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable

from . import arith
from .classgroup import Effort, compute_class_group
from .cubicfield import make_field, norm_form_values
from .curve import INFINITY, CurvePoint, SectionMap, WeierstrassCurve
from .descent import full_report
from .errors import DegeneratePoint
from .surface import Basis, Hyperplane, SurfacePoint, is_tangent, o_prime, surface_contains


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list = dc_field(default_factory=list)
    counters: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, **where) -> None:
        self.failures.append(where)

    def count(self, key: str, n: int = 1) -> None:
        self.counters[key] = self.counters.get(key, 0) + n


# ------------------------------------------------------------------ samplers


def random_hyperplane(rng: random.Random, bound: int = 6) -> Hyperplane:
    while True:
        a, b, c = (rng.randint(-bound, bound) for _ in range(3))
        if (a, b, c) != (0, 0, 0):
            return Hyperplane.of(a, b, c)


def random_model(rng: random.Random, t_range: int = 50, bound: int = 6) -> tuple[Fraction, Hyperplane, Basis]:
    """A non-tangent (t, H, basis) with integral t and a small primitive H."""
    while True:
        t = rng.randint(-t_range, t_range)
        K = make_field(t)
        basis = rng.choice([Basis.skew, Basis.power])(K)
        H = random_hyperplane(rng, bound)
        if not is_tangent(H, basis):
            return K.t, H, basis


def embed2_model(rng: random.Random, t_range: int = 50) -> tuple[Fraction, Hyperplane, Basis]:
    """A non-tangent section of the skew-basis surface with a t + 3c = 0."""
    while True:
        t = rng.randint(-t_range, t_range)
        K = make_field(t)
        b = rng.randint(-20, 20)
        H = Hyperplane.of(3, b, -t)
        basis = Basis.skew(K)
        if b != -t and not is_tangent(H, basis):
            return K.t, H, basis


def curve_points(W: WeierstrassCurve, bound: int, limit: int) -> list[CurvePoint]:
    """Rational points of W: the 3-torsion, small search hits, and a few sums."""
    T = CurvePoint(Fraction(0), Fraction(0))
    pts = [INFINITY, T, W.negate(T)]
    found = [P for P in W.search_points(bound) if not P.is_infinity and P not in pts]
    extra = []
    for P in found[:3]:
        extra += [W.add(P, T), W.multiply(2, P), W.negate(P)]
    for P in found + extra:
        if P not in pts and len(pts) < limit:
            pts.append(P)
    return pts


# ------------------------------------------------------------------ suites


def suite_maps(samples: int, seed: int) -> SuiteResult:
    """Round trips of the section map in both explicit cases; O goes to infinity."""
    res = SuiteResult("maps")
    rng = random.Random(seed)
    for i in range(samples):
        t, H, basis = embed2_model(rng) if i % 2 else random_model(rng)
        sm = SectionMap(H, basis)
        res.count(sm.k.case + "_models")
        if not sm.forward(SurfacePoint([1, 0, 0, 1])).is_infinity:
            res.fail(t=t, H=str(H), point="O", reason="O does not map to infinity")
        for Q in curve_points(sm.curve, 12, 8):
            res.checked += 1
            try:
                P = sm.inverse(Q)
            except DegeneratePoint:
                res.count("degenerate")
                continue
            if not (surface_contains(P, basis) and H.contains(P)):
                res.fail(t=t, H=str(H), point=str(Q), reason="inverse image off the section")
            elif sm.forward(P) != Q or (not Q.is_infinity and sm.inverse(sm.forward(P)) != P):
                res.fail(t=t, H=str(H), point=str(Q), reason="round trip differs")
            else:
                res.count(sm.k.case + "_points")
    return res


def suite_torsion(samples: int, seed: int) -> SuiteResult:
    """[3](0, 0) = infinity, -(0, 0) = (0, -N), and the image of O'^sigma - O' is (0, 0) or its negative."""
    res = SuiteResult("torsion")
    rng = random.Random(seed)
    for _ in range(samples):
        t, H, basis = random_model(rng)
        sm = SectionMap(H, basis)
        W = sm.curve
        T = CurvePoint(Fraction(0), Fraction(0))
        minus = CurvePoint(Fraction(0), -W.a3)
        res.checked += 1
        if not W.multiply(3, T).is_infinity:
            res.fail(t=t, H=str(H), point="(0,0)", reason="[3](0,0) is not infinity")
        if W.negate(T) != minus:
            res.fail(t=t, H=str(H), point="(0,0)", reason="-(0,0) is not (0,-N)")
        Op = o_prime(H, basis)
        img = W.subtract(sm.forward(Op.sigma()), sm.forward(Op))
        if img not in (T, minus):
            res.fail(t=t, H=str(H), point=str(img), reason="O'^sigma - O' is not a generator of the 3-torsion")
    return res


def suite_norms(samples: int, seed: int) -> SuiteResult:
    """is_local_norm agrees with the norm-form residues mod p^m <= 10^6 at ramified primes; the unit index is 3."""
    res = SuiteResult("norms")
    rng = random.Random(seed)
    for _ in range(samples):
        K = make_field(rng.randint(-30, 30))
        for p in K.ramified_primes:
            if p > 2000:
                res.count("skipped_large_p")
                continue
            m = 1
            while p ** (m + 1) <= 10**6:
                m += 1
            # units mod 3 are +-1, all cubes: the 3-adic level starts at 9
            for k in range(2 if p == 3 else 1, m + 1):
                nf = norm_form_values(K, p, k)
                res.checked += 1
                if nf.index != 3:
                    res.fail(t=K.t, p=p, reason=f"unit index {nf.index} mod {p}^{k}")
                for _ in range(30):
                    u = rng.randrange(1, nf.modulus)
                    if u % p and K.is_local_norm(u, p) != (u in nf):
                        res.fail(t=K.t, p=p, point=u, reason="local norm test disagrees with the residues")
    return res


def suite_conductor(samples: int, seed: int) -> SuiteResult:
    """f^2 divides disc(Z[d alpha]) with a square cofactor, and f is built from the ramified primes."""
    res = SuiteResult("conductor")
    rng = random.Random(seed)
    for i in range(samples):
        if i % 3 == 2:
            t = Fraction(rng.randint(-60, 60), rng.choice([2, 4, 8, 27, 5]))
        else:
            t = Fraction(rng.randint(-300, 300))
        try:
            K = make_field(t)
        except Exception:
            continue
        res.checked += 1
        d = K.denominator
        disc = (d**6) * K.delta_g**2  # disc of d^3 g(x/d), the order Z[d alpha]
        f = K.conductor_value
        q = disc / (f * f)
        if q.denominator != 1 or math.isqrt(q.numerator) ** 2 != q.numerator:
            res.fail(t=t, reason=f"disc {disc} is not f^2 times a square (f = {f})")
        if set(arith.prime_support(f)) != set(K.ramified_primes):
            res.fail(t=t, reason="ramified primes differ from the primes of f")
        if any(f % p**2 == 0 for p in K.ramified_primes if p != 3) or f % 27 == 0:
            res.fail(t=t, reason="conductor exponent out of range")
    return res


def suite_duality(samples: int, seed: int) -> SuiteResult:
    """dim S^(phi) = dim S^(phi-hat) + d_plus - d_minus + d_inf on hypothesis-holding H = [0,0,1] reports."""
    res = SuiteResult("duality")
    rng = random.Random(seed)
    H = Hyperplane.of(0, 0, 1)
    for _ in range(samples):
        t = rng.randint(-200, 200)
        r = full_report(t, H, search_bound=0)
        res.checked += 1
        if r.dim_selmer_phi_hat > r.dim_n_phi:
            res.fail(t=t, H=str(H), reason="S^(phi-hat) exceeds nPhi")
        if r.selmer_exact:
            res.count("exact")
            if not r.duality_consistent:
                res.fail(t=t, H=str(H), reason="duality bookkeeping fails")
            if r.rank_lower != 1:
                res.fail(t=t, H=str(H), reason="rank lower bound is not 1")
    return res


def suite_classgroup_slow(samples: int, seed: int) -> SuiteResult:
    """Class groups certify and the norm-restricted invariant 3-torsion has dimension dim nPhi - 1."""
    res = SuiteResult("classgroup-slow")
    rng = random.Random(seed)
    H = Hyperplane.of(0, 0, 1)
    ts = [-27] + [rng.randint(-40, 40) for _ in range(max(samples - 1, 0))]
    for t in ts:
        K = make_field(t)
        data = compute_class_group(K, Effort.named())
        res.checked += 1
        if not data.certified:
            res.fail(t=t, reason="class group not certified")
            continue
        r = full_report(t, H, class_group=data, search_bound=0)
        if r.selmer_exact and r.n_cl_g3_agrees is False:
            res.fail(t=t, reason=f"direct {r.dim_n_cl_g3_direct} vs {r.dim_n_cl_g3}")
    return res


SUITES: dict[str, Callable[[int, int], SuiteResult]] = {
    "maps": suite_maps,
    "torsion": suite_torsion,
    "norms": suite_norms,
    "conductor": suite_conductor,
    "duality": suite_duality,
    "classgroup-slow": suite_classgroup_slow,
}


def run_suite(name: str, samples: int, seed: int) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name](samples, seed)
