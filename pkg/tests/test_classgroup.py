import json
import math
from fractions import Fraction

import mpmath
import pytest
import sympy

from cubicdescent import make_field
from cubicdescent.classgroup import (
    Effort,
    PrimeData,
    compute_class_group,
    fundamental_units,
    g_invariant_unit_classes,
    load_class_group_json,
    minkowski_bound,
    n_cl_g3_direct,
)
from cubicdescent.cubicfield import SplittingType
from cubicdescent.errors import EffortExceeded


def test_minkowski_bound_examples():
    assert minkowski_bound(make_field(-27)) == 146
    assert minkowski_bound(make_field(1)) == Fraction(26, 9)
    assert math.floor(minkowski_bound(make_field(1))) == 2
    assert minkowski_bound(make_field(0)) == 2


@pytest.mark.parametrize("t", [0, 1])
def test_class_number_one_examples(t):
    data = compute_class_group(make_field(t))
    assert data.class_number == 1 and data.certified
    assert data.elementary_divisors == () and data.three_rank == 0


def test_worked_example_class_group():
    data = compute_class_group(make_field(-27))
    assert data.class_number == 9
    assert data.elementary_divisors == (3, 3) and data.three_rank == 2
    assert data.certified


def _oracle_character_sum(f: int) -> list:
    """All cubic characters of conductor f as exponent tables, built from sympy discrete logs."""
    primes = sympy.factorint(f)
    comps = []
    for q, e in primes.items():
        m = q**e
        g = sympy.primitive_root(m)
        comps.append((m, lambda a, m=m, g=g: sympy.discrete_log(m, a % m, g) % 3))
    tables = []
    for exps in sympy.utilities.iterables.cartes(*[[1, 2]] * len(comps)):
        tables.append(lambda a, exps=exps: sum(k * c(a) for k, (_, c) in zip(exps, comps)) % 3)
    return tables


def _oracle_class_number(t: int) -> int:
    K = make_field(t)
    f = K.conductor_value
    r = sorted(sympy.Poly(sympy.Symbol("x") ** 3 + t * sympy.Symbol("x") ** 2 - (t + 3) * sympy.Symbol("x") + 1).nroots(n=50))
    with mpmath.workdps(50):
        r0 = mpmath.mpf(str(r[0]))
        r1 = 1 / (1 - r0)
        r2 = 1 / (1 - r1)
        # regulator of <alpha, sigma(alpha)>, fundamental when Z[alpha] is the maximal order
        R = abs(mpmath.log(abs(r0)) * mpmath.log(abs(r2)) - mpmath.log(abs(r1)) ** 2)
        # the character of K is the one whose kernel contains the split primes
        chosen = None
        for chi in _oracle_character_sum(f):
            ok = True
            for ell in sympy.primerange(2, 400):
                if f % ell == 0:
                    continue
                splits = len(sympy.Poly(sympy.Symbol("x") ** 3 + t * sympy.Symbol("x") ** 2 - (t + 3) * sympy.Symbol("x") + 1, modulus=ell).ground_roots()) == 3
                if (chi(ell) == 0) != splits:
                    ok = False
                    break
            if ok:
                chosen = chi
                break
        total = mpmath.mpc(0)
        w = mpmath.exp(2j * mpmath.pi / 3)
        for a in range(1, f):
            if math.gcd(a, f) == 1:
                total += w ** chosen(a) * mpmath.log(abs(1 - mpmath.exp(2j * mpmath.pi * a / f)))
        hR = abs(total) ** 2 / 4
        return int(mpmath.nint(hR / R))


@pytest.mark.parametrize("t", [2, 4, 6, 7, 8, 11, 13, 14, 17, 24, 33, 38])
def test_class_number_against_analytic_oracle(t):
    K = make_field(t)
    assert K.delta_g == K.conductor_value, "oracle needs Z[alpha] maximal"
    data = compute_class_group(K)
    assert data.certified
    assert data.class_number == _oracle_class_number(t)


def test_known_class_numbers_and_genus_theory():
    assert compute_class_group(make_field(11)).class_number == 4  # conductor 163
    for t in [14, 30, -35]:
        K = make_field(t)
        data = compute_class_group(K)
        k = len(K.ramified_primes)
        assert data.class_number % 3 ** (k - 1) == 0
        assert data.three_rank >= k - 1


def test_relations_and_sigma_action():
    K = make_field(-27)
    data = compute_class_group(K)
    s = data.structure
    perm = s.sigma_perm
    assert sorted(perm) == list(range(len(perm)))
    assert all(perm[perm[perm[i]]] == i for i in range(len(perm)))
    # sigma is an automorphism of Cl of order dividing 3
    for k in range(len(perm)):
        e = [int(i == k) for i in range(len(perm))]
        assert s.coordinates(s.apply_sigma(s.apply_sigma(s.apply_sigma(e)))) == s.coordinates(e)
    # principal ideals have trivial class: the relation of alpha - 5
    xi = K.alpha - 5
    vec = [0] * len(s.factor_base)
    for p in sorted({P.p for P in s.factor_base}):
        pd = PrimeData(K, p)
        idx = [i for i, P in enumerate(s.factor_base) if P.p == p]
        for i, v in zip(idx, pd.valuations(xi)):
            vec[i] = v
    n = xi.norm()
    assert abs(n) == math.prod(P.p ** v for P, v in zip(s.factor_base, vec)) * math.prod(
        p ** e for p, e in sympy.factorint(abs(int(n))).items() if p not in {P.p for P in s.factor_base}
    )
    if all(p in {P.p for P in s.factor_base} for p in sympy.factorint(abs(int(n)))):
        assert s.coordinates(vec) == [0] * len(vec)


def test_valuations_against_membership():
    """v_P(xi) > 0 exactly when xi(r) = 0 mod p for the root r defining P."""
    K = make_field(-27)
    for p in [7, 11, 31, 41]:
        pd = PrimeData(K, p)
        if pd.kind is not SplittingType.SPLIT:
            continue
        for coeffs in [(1, 2, 0), (3, -1, 1), (-5, 0, 2), (p, p, 1)]:
            xi = K.element(coeffs)
            vals = pd.valuations(xi)
            for P, v in zip(pd.ideals, vals):
                at_root = (coeffs[0] + coeffs[1] * P.root + coeffs[2] * P.root**2) % p
                assert (v > 0) == (at_root == 0)


def test_fundamental_units_examples():
    K = make_field(0)
    units = fundamental_units(K, 5)
    assert all(abs(u.norm()) == 1 for u in units.fundamental_units)
    a = K.alpha
    assert abs((a * a - 2).norm()) == 1
    # alpha and alpha^2 - 2 lie in the unit lattice that was found
    R = units.regulator
    with mpmath.workdps(40):
        r = K.real_roots(40)
        la = [mpmath.log(abs(x)) for x in r[:2]]
        lb = [mpmath.log(abs(x * x - 2)) for x in r[:2]]
        sub = abs(la[0] * lb[1] - la[1] * lb[0])
    assert abs(sub / R - round(sub / R)) < 1e-20
    K1 = make_field(1)
    assert K1.alpha.norm() == -1 and K1.alpha.sigma().norm() == -1


@pytest.mark.parametrize("t", [-27, 1, 2, 5, 30])
def test_units_independent_and_g_invariants(t):
    K = make_field(t)
    data = compute_class_group(K)
    e1, e2 = data.units.fundamental_units
    assert abs(e1.norm()) == 1 and abs(e2.norm()) == 1
    one = K.one
    for a in range(-20, 21):
        for b in range(-20, 21):
            if (a, b) != (0, 0):
                x = e1**a * e2**b
                assert x != one and x != -one
    assert g_invariant_unit_classes(K, data.units) == (1, 1)
    (r, s), (r2, s2) = data.units.sigma_matrix
    # sigma^3 = 1 on the exponent lattice
    M = sympy.Matrix([[r, s], [r2, s2]])
    assert M**3 == sympy.eye(2)
    # the two polynomial identities satisfied by the exponents
    assert r * (r * r + r2 * s) + s * r2 * (r + s2) == 1
    assert s * (r * r + r2 * s) + s * s2 * (r + s2) == 0


def test_norm_restricted_three_torsion():
    assert n_cl_g3_direct(make_field(-27)) == 1
    assert n_cl_g3_direct(make_field(1)) == 0
    assert n_cl_g3_direct(make_field(11)) == 0  # h = 4 is prime to 3


def test_external_json(tmp_path):
    path = tmp_path / "cl.json"
    path.write_text(json.dumps({"t": "-27", "class_number": 9, "elementary_divisors": [3, 3], "source": "external"}))
    data = load_class_group_json(str(path), make_field(-27))
    assert data.class_number == 9 and data.three_rank == 2 and data.source == "external"
    with pytest.raises(ValueError):
        load_class_group_json(str(path), make_field(1))
    path.write_text(json.dumps({"t": "1", "class_number": 4, "elementary_divisors": [3]}))
    with pytest.raises(ValueError):
        load_class_group_json(str(path))


def test_effort_ceiling():
    K = make_field(-27)
    with pytest.raises(EffortExceeded):
        compute_class_group(K, Effort(conductor_ceiling=100))
    assert Effort.named("low").box_max < Effort.named("high").box_max
    with pytest.raises(ValueError):
        Effort.named("extreme")
