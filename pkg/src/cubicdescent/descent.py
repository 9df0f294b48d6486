"""3-isogeny descent on the sections W of the norm-form surface.

The default basis of K is {1, alpha, 1/(1 - alpha)}.

Cube classes in Q^*/Q^*3 are `arith.CubeClass` values.  The curve W carries
the rational 3-torsion point (0, 0); the map delta-hat sends a rational point
of W to the class of its y-coordinate, and the Selmer group S^(phi-hat) is
bounded by the group of global norms supported on the set S.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

from . import arith
from .arith import CubeClass, RationalLike, valuation
from .classgroup import Effort, IdealClassData, compute_class_group, n_cl_g3_direct
from .cubicfield import CubicField, FieldElement, SplittingType, make_field
from .curve import (
    INFINITY,
    CurvePoint,
    WeierstrassCurve,
    dual_curve,
    weierstrass_model,
)
from .errors import DescentError, EffortExceeded, HypothesesNotMet, UnhandledCase
from .linalg import kernel_dim_mod, rank_mod
from .surface import Basis, Hyperplane, SurfacePoint, eta, gamma, norm_gamma, o_prime

DEFAULT_SEARCH_BOUND = 500


# ------------------------------------------------------------------ S-sets


@dataclass(frozen=True)
class SSets:
    """S: primes with a possibly non-unit local image; S_prime: the split ones; R: ramified primes."""

    S: frozenset
    S_prime: frozenset
    R: frozenset

    def sorted(self, which: str = "S") -> list[int]:
        return sorted(getattr(self, which))


def _section_data(H: Hyperplane, basis: Basis) -> tuple[Fraction, Fraction]:
    """(a delta(X), N(gamma)) of the section."""
    return H.a * basis.delta, norm_gamma(H, basis)


def valuation_table(H: Hyperplane, basis: Basis) -> dict[int, int]:
    """v_p = nu_p(N(gamma)) at every prime where it is nonzero."""
    _, n = _section_data(H, basis)
    return {p: e for p, e in sorted(arith.factor_rational(n).items())}


def compute_s_sets(H: Hyperplane, field: CubicField, basis: Optional[Basis] = None) -> SSets:
    """S = {p : 3 nu_p(a delta) < nu_p(N) or 3 does not divide nu_p(N)}, nu_p(0) = infinity."""
    basis = basis or Basis.skew(field)
    ad, n = _section_data(H, basis)
    if n == 0:
        raise DescentError("N(gamma) = 0: the section is singular")
    candidates = set(arith.prime_support(n)) | (set(arith.prime_support(ad)) if ad else set())
    S = set()
    for p in candidates:
        vn = valuation(n, p)
        va = valuation(ad, p)
        if vn % 3 or 3 * va < vn:
            S.add(p)
    split = {p for p in S if field.splitting_type(p) is SplittingType.SPLIT}
    return SSets(frozenset(S), frozenset(split), frozenset(field.ramified_primes))


# ------------------------------------------------------------------ local images


class ImageKind(enum.Enum):
    UNIT_CLASSES = "UnitClasses"
    NORM_CLASSES = "NormClasses"
    FULL_CLASSES = "FullClasses"
    TRIVIAL_CLASS = "TrivialClass"


@dataclass(frozen=True)
class LocalImage:
    """Local image of delta-hat at p, with the facts used to decide it."""

    kind: ImageKind
    p: int
    evidence: dict = dc_field(default_factory=dict, compare=False)
    consistent: bool = True


def d_prime_symbol(n: RationalLike) -> tuple[int, int]:
    """(D', Legendre symbol (D'/3)) for D' = u (u + (u - k^3)/3), u the 3-unit part of n mod 9, k = +-1 = u mod 3.

    The symbol differs from 1 exactly when n is not a cube in Q_3 (given 3 | nu_3(n)).
    """
    u = arith.residue(arith.unit_part(n, 3), 9)
    k = 1 if u % 3 == 1 else -1
    d = u * (u + (u - k**3) // 3)
    return d, arith.legendre(d, 3)


def local_image(p: int, H: Hyperplane, field: CubicField, basis: Optional[Basis] = None, k_valued: bool = False) -> LocalImage:
    """The local image at p for the configurations that are decided by the local chart."""
    basis = basis or Basis.skew(field)
    kind = field.splitting_type(p)
    _, n = _section_data(H, basis)
    v = valuation(n, p)
    ev = {"v_p": v, "splitting": kind.name}
    if k_valued:
        if kind is SplittingType.RAMIFIED_TAME:
            return LocalImage(ImageKind.TRIVIAL_CLASS, p, ev)
        raise UnhandledCase(f"K-valued local image at {p} ({kind.name}) is not determined")
    S = compute_s_sets(H, field, basis).S
    if p not in S and p != 3:
        return LocalImage(ImageKind.UNIT_CLASSES, p, ev)
    if v % 3 and kind.ramified:
        if p == 3 and v % 3 == 1:
            ev["note"] = "v_3 = 1 mod 3 at a wildly ramified prime should not occur"
            return LocalImage(ImageKind.NORM_CLASSES, p, ev, consistent=False)
        return LocalImage(ImageKind.NORM_CLASSES, p, ev)
    if p == 3 and v % 3 == 0:
        d, symbol = d_prime_symbol(n)
        ev.update({"D_prime": d, "legendre": symbol, "n_cube_at_3": arith.is_cube_in_Qp(n, 3)})
        if symbol != 1 and kind is not SplittingType.RAMIFIED_WILD:
            return LocalImage(ImageKind.FULL_CLASSES, p, ev)
    raise UnhandledCase(f"local image at p = {p} (v_p = {v}, {kind.name}) is outside the decided cases")


# ------------------------------------------------------------------ delta-hat


def delta_hat_class(P: CurvePoint, W: WeierstrassCurve) -> CubeClass:
    """Class of y(P) in Q^*/Q^*3; N^-1 at (0, 0) and trivial at infinity.

    W must have the shape y^2 + A x y + N y = x^3.
    """
    if P.is_infinity:
        return CubeClass()
    if not P.is_rational:
        raise ValueError("delta-hat is defined on rational points")
    if P.x == 0 and P.y == 0:
        return CubeClass.of(W.a3).inverse()
    if P.y == 0:
        raise ValueError("y vanishes only at (0, 0) on this model")
    return CubeClass.of(P.y)


def delta_hat_K_class(P: SurfacePoint, H: Hyperplane, basis: Basis) -> FieldElement:
    """A representative in K^* of the K-valued descent class of a point of X_H.

    This is eta = iota^sigma / iota away from O' and T'; at those two points
    the closed values gamma^(sigma^2)/gamma and gamma/gamma^sigma are used.
    """
    g = gamma(H, basis)
    Op = o_prime(H, basis)
    if P == Op:
        return g.sigma(2) / g
    if P == t_prime(H, basis):
        return g / g.sigma()
    return eta(P, basis)


def t_prime(H: Hyperplane, basis: Basis) -> SurfacePoint:
    """The conjugate of O' at which iota^sigma vanishes."""
    Op = o_prime(H, basis)
    K = basis.field
    for k in (1, 2):
        Q = Op.sigma(k)
        x, y, z, _ = Q.in_field(K)
        if basis.combine(x, y, z, 1).is_zero():
            return Q
    raise AssertionError("no conjugate of O' is a zero of iota^sigma")


def selmer_span(classes: Sequence[CubeClass]) -> int:
    """F_3-dimension of the group generated by the given classes."""
    primes = sorted({p for c in classes for p, _ in c.exponents})
    if not primes:
        return 0
    return rank_mod([c.vector(primes) for c in classes], 3)


# ------------------------------------------------------------------ the norm group nPhi


def n_phi_matrix(S: Sequence[int], field: CubicField) -> list[list[int]]:
    """Local norm symbols h_q(p): rows q over the ramified primes and S, columns p over S."""
    S = sorted(S)
    rows_at = sorted(set(field.ramified_primes) | set(S))
    return [[field.local_norm_symbol(p, q) for p in S] for q in rows_at]


def n_phi_dimension(S: Sequence[int], field: CubicField) -> int:
    """dim over F_3 of {d in <S> mod cubes : d is a norm from K^*}."""
    S = sorted(S)
    if not S:
        return 0
    return kernel_dim_mod(n_phi_matrix(S, field), len(S), 3)


def is_in_n_phi(c: CubeClass, S: Sequence[int], field: CubicField) -> bool:
    """Membership of a cube class in the group of global norms supported on S."""
    if any(p not in S for p, _ in c.exponents):
        return False
    return field.is_global_norm(c.representative())


# ------------------------------------------------------------------ duality terms


@dataclass(frozen=True)
class CasselsTerms:
    d_plus: int
    d_minus: int
    d_inf: int
    r: int = 0

    @property
    def difference(self) -> int:
        """dim S^(phi) - dim S^(phi-hat)."""
        return self.d_plus - self.d_minus + self.d_inf - self.r


def cassels_terms(H: Hyperplane, field: CubicField, basis: Optional[Basis] = None) -> CasselsTerms:
    """(d_plus, d_minus, d_inf) for a section with a = 0."""
    if H.a != 0:
        raise ValueError("the duality terms are only available for hyperplanes with a = 0")
    basis = basis or Basis.skew(field)
    _, n = _section_data(H, basis)
    table = valuation_table(H, basis)
    d_plus = int(arith.is_cube_in_Qp(n, 3))
    d_minus = sum(1 for p, v in table.items() if v % 3 and (p == 3 or p % 3 != 1))
    d_inf = int(table.get(3, 0) % 3 == 2)
    return CasselsTerms(d_plus, d_minus, d_inf)


# ------------------------------------------------------------------ hypotheses and Selmer dimensions


def hypothesis_flags(H: Hyperplane, field: CubicField, basis: Basis) -> dict[str, bool]:
    """The conditions under which the Selmer groups equal nPhi and rank >= 1."""
    t = field.t
    table = valuation_table(H, basis)
    _, n = _section_data(H, basis)
    ram = set(field.ramified_primes)
    v3 = table.get(3, 0)
    flags = {
        "t_denominator_cubic": all(valuation(t, p) % 3 == 0 for p in arith.prime_support(t.denominator)),
        "norm_gamma_is_delta": abs(n) == field.delta_g,
        "hyperplane_z": tuple(H) == (0, 0, 1),
        "delta_not_cube_at_3": not arith.is_cube_in_Qp(field.delta_g, 3),
        "odd_valuations_ramified": all(p in ram for p, v in table.items() if v % 3),
        "three_condition": v3 % 3 != 0 or (3 not in ram and not arith.is_cube_in_Qp(n, 3)),
    }
    return flags


@dataclass
class SelmerBounds:
    """Selmer dimensions (exact when `exact`, otherwise upper bounds) and rank bounds."""

    dim_selmer_phi: int
    dim_selmer_phi_hat: int
    rank_lower: int
    rank_upper: int
    exact: bool
    dim_n_cl_g3: Optional[int] = None
    notes: list = dc_field(default_factory=list)


def fallback_dimension(S0: Sequence[int]) -> int:
    """m = #{p in S0 : p = 1 mod 3} + [3 in S0], the F_3-rank of the cubic characters unramified outside S0."""
    return sum(1 for p in S0 if p % 3 == 1) + int(3 in S0)


def bad_primes(W: WeierstrassCurve) -> list[int]:
    """{3} together with the primes of the discriminant and of the coefficient denominators."""
    s = {3} | set(arith.prime_support(W.discriminant))
    for c in W.coefficients:
        s |= set(arith.prime_support(Fraction(c).denominator))
    return sorted(s)


def selmer_dims(H: Hyperplane, field: CubicField, n_phi: int, basis: Optional[Basis] = None) -> SelmerBounds:
    """Exact Selmer dimensions and rank bounds when the hypotheses hold.

    Otherwise HypothesesNotMet is raised; its `report` is a SelmerBounds of
    upper bounds.
    """
    basis = basis or Basis.skew(field)
    flags = hypothesis_flags(H, field, basis)
    if all(flags.values()):
        return SelmerBounds(n_phi, n_phi, 1, 2 * n_phi - 1, True, dim_n_cl_g3=n_phi - 1)
    W = weierstrass_model(H, basis)
    notes = [f"hypothesis failed: {k}" for k, ok in flags.items() if not ok]
    m = fallback_dimension(bad_primes(W))
    hat = n_phi
    phi = m
    if H.a == 0:
        phi = min(phi, n_phi + cassels_terms(H, field, basis).difference)
    bounds = SelmerBounds(phi, hat, 0, max(phi + hat - 1, 0), False, notes=notes)
    raise HypothesesNotMet("; ".join(notes), report=bounds)


# ------------------------------------------------------------------ counting cyclic cubic fields


@dataclass(frozen=True)
class C3Count:
    """Cyclic cubic fields unramified outside S0, counted with Q itself."""

    count: int
    conductors: tuple[int, ...]  # one entry per field, sorted
    restricted: Optional[int] = None
    identity_holds: Optional[bool] = None


def count_c3_fields(S0: Sequence[int], dim_selmer_phi: Optional[int] = None) -> C3Count:
    """Enumerate cubic characters of (Z/f)^* unramified outside S0, pair chi with chi^2, read off the conductors.

    The components are the primes p = 1 mod 3 of S0, and 9 when 3 is in S0.
    When dim S^(phi) is given, the restricted count (3^dim + 1)/2 is checked
    against the total.
    """
    comps = sorted(p for p in set(S0) if p % 3 == 1)
    if 3 in S0:
        comps.append(9)
    comps.sort()
    conductors = []
    seen = set()
    for exps in itertools.product(range(3), repeat=len(comps)):
        if not any(exps) or exps in seen:
            continue
        seen.add(exps)
        seen.add(tuple((2 * e) % 3 for e in exps))
        f = 1
        for m, e in zip(comps, exps):
            if e:
                f *= m
        conductors.append(f)
    conductors.sort()
    count = len(conductors) + 1
    if dim_selmer_phi is None:
        return C3Count(count, tuple(conductors))
    restricted = (3**dim_selmer_phi + 1) // 2
    return C3Count(count, tuple(conductors), restricted, 2 * restricted - 1 == 3**dim_selmer_phi and restricted <= count)


# ------------------------------------------------------------------ the report


@dataclass
class DescentReport:
    t: Fraction
    hyperplane: Hyperplane
    basis: Basis
    curve: WeierstrassCurve
    dual: WeierstrassCurve
    discriminant: Fraction
    j_invariant: Optional[Fraction]
    norm_gamma: Fraction
    s_sets: SSets
    valuations: dict
    local_images: dict
    cassels: Optional[CasselsTerms]
    dim_n_phi: int
    dim_selmer_phi: int
    dim_selmer_phi_hat: int
    selmer_exact: bool
    dim_selmer_phi_hat_lower: int
    duality_consistent: Optional[bool]
    dim_n_cl_g3: Optional[int]
    dim_n_cl_g3_direct: Optional[int]
    n_cl_g3_agrees: Optional[bool]
    bound_chain_holds: Optional[bool]
    rank_lower: int
    rank_upper: int
    sha_phi_hat_dim: Optional[int]
    hypotheses: dict
    witnesses: list
    c3: C3Count
    class_group: Optional[IdealClassData]
    notes: list

    @property
    def hypotheses_hold(self) -> bool:
        return self.selmer_exact


def _local_images(H: Hyperplane, field: CubicField, basis: Basis, primes) -> dict:
    out = {}
    for p in primes:
        try:
            img = local_image(p, H, field, basis)
            out[p] = img.kind.value if img.consistent else img.kind.value + " (inconsistent)"
        except UnhandledCase as exc:
            out[p] = f"unhandled: {exc}"
    return out


def full_report(
    t: RationalLike,
    H: Hyperplane,
    basis: Optional[Basis] = None,
    class_group: Optional[IdealClassData] = None,
    compute_classgroup: bool = False,
    effort: Optional[Effort] = None,
    search_bound: int = DEFAULT_SEARCH_BOUND,
) -> DescentReport:
    """Run the whole pipeline for one (t, H).

    Raises Tangent for a singular section.  When the equality hypotheses fail
    the report carries upper bounds and `selmer_exact` is False.
    """
    field = make_field(t)
    basis = basis or Basis.skew(field)
    W = weierstrass_model(H, basis)
    notes: list[str] = []
    sets = compute_s_sets(H, field, basis)
    table = valuation_table(H, basis)
    d = n_phi_dimension(sets.sorted(), field)
    terms = cassels_terms(H, field, basis) if H.a == 0 else None

    try:
        sb = selmer_dims(H, field, d, basis)
    except HypothesesNotMet as exc:
        sb = exc.report
        notes.extend(sb.notes)

    # rational points: delta-hat images give a lower bound for S^(phi-hat)
    points = W.search_points(search_bound) if search_bound > 0 else [INFINITY]
    T = CurvePoint(Fraction(0), Fraction(0))
    classes = [delta_hat_class(T, W)]
    witnesses = []
    for P in points:
        if P.is_infinity:
            continue
        classes.append(delta_hat_class(P, W))
        if W.order(P) is None:
            witnesses.append(P)
    lower_hat = selmer_span(classes)
    for c in classes:
        if not is_in_n_phi(c, sets.sorted(), field):
            raise AssertionError(f"delta-hat class {c.representative()} lies outside nPhi")
    rank_lower = sb.rank_lower
    if witnesses:
        rank_lower = max(rank_lower, 1)
    rank_upper = sb.rank_upper
    if rank_upper < rank_lower:
        raise AssertionError("rank bounds are inconsistent")

    duality_ok = None
    if terms is not None and sb.exact:
        duality_ok = sb.dim_selmer_phi == sb.dim_selmer_phi_hat + terms.difference

    # class group cross-validation
    if class_group is None and compute_classgroup:
        try:
            class_group = compute_class_group(field, effort)
        except EffortExceeded as exc:
            notes.append(f"class group not computed: {exc}")
    direct = None
    if class_group is not None:
        if class_group.three_rank == 0:
            direct = 0
        elif class_group.structure is not None and class_group.certified:
            direct = n_cl_g3_direct(field, effort, class_group)
    agrees = None if direct is None or sb.dim_n_cl_g3 is None else direct == sb.dim_n_cl_g3
    chain = None if direct is None or not sb.exact else d <= 1 + direct

    sha = None
    if rank_lower == rank_upper:
        sha = 0
    elif sb.exact and class_group is not None and class_group.g_invariant:
        sha = sb.dim_n_cl_g3

    S0 = bad_primes(W)
    c3 = count_c3_fields(S0, sb.dim_selmer_phi if sb.exact else None)

    disc = W.discriminant
    return DescentReport(
        t=field.t,
        hyperplane=H,
        basis=basis,
        curve=W,
        dual=dual_curve(W),
        discriminant=disc,
        j_invariant=W.j_invariant if disc != 0 else None,
        norm_gamma=norm_gamma(H, basis),
        s_sets=sets,
        valuations=table,
        local_images=_local_images(H, field, basis, sorted(sets.S | sets.R | {3})),
        cassels=terms,
        dim_n_phi=d,
        dim_selmer_phi=sb.dim_selmer_phi,
        dim_selmer_phi_hat=sb.dim_selmer_phi_hat,
        selmer_exact=sb.exact,
        dim_selmer_phi_hat_lower=lower_hat,
        duality_consistent=duality_ok,
        dim_n_cl_g3=sb.dim_n_cl_g3,
        dim_n_cl_g3_direct=direct,
        n_cl_g3_agrees=agrees,
        bound_chain_holds=chain,
        rank_lower=rank_lower,
        rank_upper=rank_upper,
        sha_phi_hat_dim=sha,
        hypotheses=hypothesis_flags(H, field, basis),
        witnesses=witnesses[:4],
        c3=c3,
        class_group=class_group,
        notes=notes,
    )
