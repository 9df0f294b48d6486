import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from cubicdescent import arith
from cubicdescent.arith import (
    INF,
    CubeClass,
    cubic_character,
    factor,
    has_zp_root,
    is_cube_in_Qp,
    legendre,
    roots_mod_p,
    valuation,
    zp_roots,
)

SMALL_PRIMES = [p for p in range(2, 101) if sympy.isprime(p)]
nonzero_rationals = st.builds(
    Fraction,
    st.integers(-10**6, 10**6).filter(lambda n: n != 0),
    st.integers(1, 10**6),
)


def test_factor_examples():
    assert factor(657).as_dict() == {3: 2, 73: 1}
    f1 = factor(1)
    assert f1.factors == () and f1.sign == 1
    assert factor(28561).as_dict() == {13: 4}
    assert factor(-360).sign == -1
    with pytest.raises(ValueError):
        factor(0)


def test_factor_against_sympy():
    rng = random.Random(11)
    cases = [rng.randrange(2, 10**12) for _ in range(60)]
    cases += [sympy.prime(rng.randrange(10**5, 10**6)) * sympy.prime(rng.randrange(10**5, 10**6)) for _ in range(10)]
    cases += [(2**31 - 1) * (10**9 + 7), 2**61 - 1, 3**40, 600851475143]
    for n in cases:
        f = factor(n)
        assert f.as_dict() == {int(p): e for p, e in sympy.factorint(n).items()}
        assert f.value() == n


@given(st.integers(-10**15, 10**15).filter(bool))
@settings(max_examples=200, deadline=None)
def test_factor_reconstructs(n):
    f = factor(n)
    assert f.value() == n
    assert all(sympy.isprime(p) for p in f.primes)


def test_valuation_examples():
    assert valuation(657, 3) == 2
    assert valuation(0, 5) == INF
    assert valuation(Fraction(13, 9), 3) == -2
    assert INF > 10**100


@given(nonzero_rationals, nonzero_rationals, st.sampled_from(SMALL_PRIMES))
@settings(max_examples=300, deadline=None)
def test_valuation_additive(a, b, p):
    assert valuation(a * b, p) == valuation(a, p) + valuation(b, p)


@given(st.integers(-10**6, 10**6).filter(bool), st.integers(1, 10**6), st.integers(1, 50))
def test_rational_reduction_invariant(n, d, k):
    assert Fraction(k * n, k * d) == Fraction(n, d)
    q = Fraction(k * n, k * d)
    assert math.gcd(q.numerator, q.denominator) == 1 and q.denominator > 0


def test_is_cube_examples():
    assert not is_cube_in_Qp(657, 3)
    assert is_cube_in_Qp(8, 2)
    assert not is_cube_in_Qp(13, 3)
    with pytest.raises(ValueError):
        is_cube_in_Qp(0, 5)


def _cube_oracle(d: Fraction, p: int) -> bool:
    v = valuation(d, p)
    if v % 3:
        return False
    k = 2 + valuation(27, p)
    mod = p**k
    u = arith.unit_part(d, p)
    cubes = {pow(x, 3, mod) for x in range(mod) if x % p}
    return arith.residue(u, mod) in cubes


def test_is_cube_against_bruteforce():
    primes = [p for p in SMALL_PRIMES if p <= 50]
    rng = random.Random(5)
    for p in primes:
        for _ in range(60):
            d = Fraction(rng.choice([-1, 1]) * rng.randint(1, 200), rng.randint(1, 200))
            assert is_cube_in_Qp(d, p) == _cube_oracle(d, p), (d, p)


def test_cubic_character_examples():
    assert cubic_character(3, 73) == 0
    assert cubic_character(1, 7) == 0
    assert cubic_character(2, 7) != 0
    with pytest.raises(ValueError):
        cubic_character(7, 7)


@given(st.sampled_from([7, 13, 19, 31, 37, 43, 61, 67, 73, 79, 97]), st.integers(1, 10**6), st.integers(1, 10**6))
def test_cubic_character_homomorphism(p, u, v):
    if u % p == 0 or v % p == 0:
        return
    assert cubic_character(u * v, p) == (cubic_character(u, p) + cubic_character(v, p)) % 3


def test_legendre():
    assert legendre(1, 7) == 1
    assert legendre(0, 7) == 0
    assert legendre(3, 7) == -1
    for p in [3, 5, 11, 101]:
        for a in range(1, 40):
            expected = sympy.legendre_symbol(a % p, p) if a % p else 0
            assert legendre(a, p) == expected


def test_cube_classes():
    c = CubeClass.of(Fraction(-657, 8))
    assert c.representative() == 657
    assert (c * c * c).is_trivial
    assert (c * c.inverse()).is_trivial
    assert CubeClass.of(Fraction(1, 3)) == CubeClass.of(9)
    assert arith.is_rational_cube(Fraction(-27, 64))


def test_roots_mod_p_large_prime():
    p = 1000003
    f = [-6, 11, -6, 1]  # (x-1)(x-2)(x-3)
    assert roots_mod_p(f, p) == [1, 2, 3]


def test_roots_mod_p_matches_bruteforce():
    rng = random.Random(3)
    for _ in range(30):
        p = sympy.prime(rng.randrange(700, 900))
        f = [rng.randrange(p) for _ in range(3)] + [1]
        assert roots_mod_p(f, p) == [x for x in range(p) if arith.poly_eval(f, x) % p == 0]


def test_zp_roots_and_existence():
    roots = zp_roots([-2, 0, 1], 7, 6)
    assert len(roots) == 2 and all((r * r - 2) % 7**6 == 0 for r in roots)
    assert not has_zp_root([-2, 0, 0, 1], 7)
    assert has_zp_root([-6, 0, 0, 1], 5)  # every unit is a cube in Z_5
    assert not has_zp_root([-54, 0, 0, 1], 3)
    # two roots congruent mod 3^4 force the recursive branch
    f = sympy.Poly(sympy.expand((sympy.Symbol("x") - 3) * (sympy.Symbol("x") - 84) * (sympy.Symbol("x") ** 2 + 1)))
    coeffs = [int(c) for c in reversed(f.all_coeffs())]
    assert has_zp_root(coeffs, 3)
    assert sorted(zp_roots(coeffs, 3, 8)) == sorted({3, 84})


def test_crt():
    x, m = arith.crt_pairs([(2, 3), (3, 5), (2, 7)])
    assert (x, m) == (23, 105)


def test_icbrt():
    for n in [0, 1, 7, 8, 26, 27, 10**30, 10**30 + 1, -8, -9]:
        r = arith.icbrt(n)
        assert r**3 <= n < (r + 1) ** 3
