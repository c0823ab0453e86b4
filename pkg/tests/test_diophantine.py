import math
import random
from fractions import Fraction

import pytest

from plrot.diophantine import (
    CFExpansion,
    QuadraticSurd,
    SurdError,
    _canonicalize,
    apply_psl2,
    brute_force_witness,
    cf_expand,
    convergents,
    diophantine_witness,
    is_bounded_type,
    surd_of,
    tails_equal,
)
from plrot.exactfield import FieldElem, make_alpha


def golden_surd():
    return QuadraticSurd(1, 2, 5)


def test_surd_validation():
    with pytest.raises(SurdError):
        QuadraticSurd(0, 0, 5)
    with pytest.raises(SurdError):
        QuadraticSurd(0, 1, 4)  # perfect square
    with pytest.raises(SurdError):
        QuadraticSurd(1, 3, 5)  # 3 does not divide 5 - 1


def test_surd_of_field_elements():
    spec = make_alpha(1, 1)
    alpha = FieldElem.alpha(spec)
    s = surd_of(alpha)
    assert (s.P, s.Q, s.D) == (1, 2, 5)
    s2 = surd_of(alpha - 1)
    assert (s2.P, s2.Q, s2.D) == (-1, 2, 5)
    with pytest.raises(SurdError):
        surd_of(FieldElem.of(spec, 3))


def test_surd_bounds_and_float():
    s = golden_surd()
    lo, hi = s.bounds()
    assert lo < hi
    assert float(lo) <= float(s) <= float(hi)
    assert hi - lo < Fraction(1, 2**120)


def test_cf_known_expansions():
    assert cf_expand(golden_surd()) == CFExpansion((1,), (1,))
    assert cf_expand(QuadraticSurd(1, 1, 2)) == CFExpansion((2,), (2,))
    # beta = (3 - sqrt(5))/2 = (-3 + sqrt(5))/(-2)
    beta = _canonicalize(-3, -2, 5)
    assert cf_expand(beta) == CFExpansion((0, 2), (1,))
    # sqrt(2) and sqrt(3)
    assert cf_expand(QuadraticSurd(0, 1, 2)) == CFExpansion((1,), (2,))
    assert cf_expand(QuadraticSurd(0, 1, 3)) == CFExpansion((1,), (1, 2))


def test_cf_against_numeric_oracle():
    """Digits agree with a high-precision rational CF of the value."""
    rng = random.Random(14)
    for _ in range(30):
        while True:
            D = rng.randrange(2, 2000)
            if math.isqrt(D) ** 2 != D:
                break
        s = _canonicalize(rng.randrange(-20, 21), rng.choice([1, -1, 2, 3]), D)
        digits = cf_expand(s).digits(10)
        lo, hi = s.bounds(192)
        x = (lo + hi) / 2
        for d in digits:
            assert math.floor(x) == d
            x = 1 / (x - d)


def test_cf_digits_and_stream():
    cf = CFExpansion((0, 2), (1,))
    assert cf.digits(5) == [0, 2, 1, 1, 1]
    it = cf.digit_stream()
    assert [next(it) for _ in range(4)] == [0, 2, 1, 1]


def test_bounded_type():
    assert is_bounded_type(cf_expand(golden_surd())) == (True, 1)
    assert is_bounded_type(cf_expand(QuadraticSurd(1, 1, 2))) == (True, 2)


def test_convergents_golden_are_fibonacci():
    cf = cf_expand(golden_surd())
    cs = convergents(cf, 100)
    fib = [1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233]
    for i, (p, q) in enumerate(cs):
        assert (p, q) == (fib[i + 1], fib[i])


def test_convergents_bracket_value():
    s = QuadraticSurd(0, 1, 7)
    cf = cf_expand(s)
    lo, hi = s.bounds()
    for p, q in convergents(cf, 500):
        assert abs(Fraction(p, q) - (lo + hi) / 2) < Fraction(1, q * q)


def test_diophantine_witness_golden():
    w = diophantine_witness(golden_surd(), Fraction(0), 100)
    assert Fraction(44, 100) < w < Fraction(45, 100)
    assert w == brute_force_witness(golden_surd(), Fraction(0), 100)
    # monotone in delta
    w1 = diophantine_witness(golden_surd(), Fraction(1), 100)
    assert w1 >= w
    # nonincreasing in q_max
    assert diophantine_witness(golden_surd(), Fraction(0), 50) >= w
    with pytest.raises(SurdError):
        diophantine_witness(golden_surd(), Fraction(0), 1)
    with pytest.raises(SurdError):
        diophantine_witness(golden_surd(), Fraction(-1), 10)


def test_tails_equal():
    g = cf_expand(golden_surd())
    beta = cf_expand(_canonicalize(-3, -2, 5))
    assert tails_equal(g, beta)
    assert tails_equal(g, g)
    assert not tails_equal(g, cf_expand(QuadraticSurd(1, 1, 2)))


def test_apply_psl2():
    s = golden_surd()
    assert apply_psl2(s, (1, 0, 0, 1)).same_value(s)
    # (0,1;1,1): x -> 1/(x+1) sends golden alpha to beta
    image = apply_psl2(s, (0, 1, 1, 1))
    assert image.same_value(_canonicalize(-3, -2, 5))
    with pytest.raises(SurdError):
        apply_psl2(s, (2, 0, 0, 1))  # determinant 2


def test_psl2_preserves_tails_random():
    rng = random.Random(15)
    gens = [(1, 1, 0, 1), (1, 0, 1, 1), (0, -1, 1, 0)]
    checked = 0
    while checked < 25:
        while True:
            D = rng.randrange(2, 300)
            if math.isqrt(D) ** 2 != D:
                break
        s = _canonicalize(rng.randrange(-8, 9), rng.choice([1, 2, -1]), D)
        m = (1, 0, 0, 1)
        for _ in range(rng.randrange(1, 5)):
            a, b, c, d = m
            e, f, g, h = rng.choice(gens)
            m = (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
        try:
            image = apply_psl2(s, m)
        except SurdError:
            continue
        assert tails_equal(cf_expand(s), cf_expand(image))
        checked += 1


def test_canonicalize_preserves_value():
    rng = random.Random(16)
    for _ in range(50):
        while True:
            D = rng.randrange(2, 500)
            if math.isqrt(D) ** 2 != D:
                break
        P = rng.randrange(-30, 31)
        Q = rng.choice([q for q in range(-12, 13) if q != 0])
        s = _canonicalize(P, Q, D)
        assert abs(float(s) - (P + math.sqrt(D)) / Q) < 1e-9
