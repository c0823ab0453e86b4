import random
from fractions import Fraction

import pytest

from plrot import localrotation
from plrot.circledyn import (
    CircleError,
    CircleLift,
    class_P_certificate,
    rotation_number_cf,
    rotation_number_orbit,
    seam_jump_exponent,
)
from plrot.exactfield import FieldElem, make_alpha, power_alpha
from plrot.plmap import Piece, PLMap


def golden():
    return make_alpha(1, 1)


def rigid(spec, angle):
    return CircleLift.rotation(spec, angle)


def seamed_lift(spec):
    """Two-piece degree-one lift with slopes alpha, 1/alpha."""
    zero = FieldElem.of(spec, 0)
    one = FieldElem.of(spec, 1)
    s = power_alpha(spec, -2)
    base = PLMap(
        spec,
        [Piece(zero, 1, zero), Piece(s, -1, power_alpha(spec, -1) - power_alpha(spec, -3))],
        one,
    )
    return CircleLift(base)


def test_wrap_validation():
    spec = golden()
    zero = FieldElem.of(spec, 0)
    one = FieldElem.of(spec, 1)
    with pytest.raises(CircleError):
        CircleLift(PLMap(spec, [Piece(zero, 1, zero)], one))  # F(1) != F(0) + 1
    with pytest.raises(CircleError):
        CircleLift(PLMap.identity(spec, zero, FieldElem.of(spec, 2)))


def test_evaluate_on_reals():
    spec = golden()
    beta = FieldElem.of(spec, 2, -1)
    F = rigid(spec, beta)
    t = FieldElem.of(spec, -3, 1)  # alpha - 3, negative
    assert F.evaluate(t) == t + beta
    assert F.evaluate(t + 5) == t + beta + 5


def test_compose_and_iterate_rigid():
    spec = golden()
    beta = FieldElem.of(spec, 2, -1)
    F = rigid(spec, beta)
    assert F.compose(F) == rigid(spec, beta * 2)
    assert F.iterate(7) == rigid(spec, beta * 7)


def test_compose_pointwise_oracle():
    spec = golden()
    F = seamed_lift(spec)
    G = rigid(spec, FieldElem.of(spec, 2, -1))
    H = G.compose(F)
    rng = random.Random(11)
    for _ in range(40):
        t = FieldElem.of(spec, Fraction(rng.randrange(-200, 301), 100))
        assert H.evaluate(t) == G.evaluate(F.evaluate(t))
    # degree-one equivariance
    t = FieldElem.of(spec, Fraction(1, 4))
    assert H.evaluate(t + 3) == H.evaluate(t) + 3


def test_invert():
    spec = golden()
    for F in (seamed_lift(spec), rigid(spec, FieldElem.of(spec, 2, -1))):
        G = F.invert()
        rng = random.Random(12)
        for _ in range(30):
            t = FieldElem.of(spec, Fraction(rng.randrange(-100, 201), 100))
            assert G.evaluate(F.evaluate(t)) == t


def test_compare_rotation_rational():
    spec = golden()
    half = FieldElem.of(spec, Fraction(1, 2))
    F = rigid(spec, half)
    rel, wit = F.compare_rotation(1, 2)
    assert rel == "equal" and wit is not None
    assert F.iterate(2).evaluate(wit) == wit + 1
    assert F.compare_rotation(1, 3)[0] == "greater"
    assert F.compare_rotation(2, 3)[0] == "less"


def test_rotation_number_cf_irrational():
    spec = golden()
    beta = FieldElem.of(spec, 2, -1)  # 2 - alpha ~ 0.382
    F = rigid(spec, beta)
    res = rotation_number_cf(F, depth=10)
    assert res.kind == "irrational_enclosure"
    assert res.digits == [0, 2] + [1] * 8
    lo, hi = res.bracket
    assert lo < Fraction(38196601, 10**8) < hi or float(lo) < float(beta) < float(hi)


def test_rotation_number_cf_rational():
    spec = golden()
    F = rigid(spec, FieldElem.of(spec, Fraction(2, 5)))
    res = rotation_number_cf(F, depth=10)
    assert res.kind == "rational"
    assert res.value == Fraction(2, 5)


def test_rotation_number_cf_integer_translation():
    spec = golden()
    F = rigid(spec, FieldElem.of(spec, 0))
    res = rotation_number_cf(F)
    assert res.kind == "rational" and res.value == 0


def test_rotation_number_orbit():
    spec = golden()
    beta = FieldElem.of(spec, 2, -1)
    F = rigid(spec, beta)
    est, err = rotation_number_orbit(F, 2000, FieldElem.of(spec, 0))
    assert err == 1 / 2000
    assert abs(est - float(beta)) < err


def test_class_P_and_seam():
    spec = golden()
    F = seamed_lift(spec)
    ok, var = class_P_certificate(F)
    assert ok
    assert var == 2 + 2  # interior jump 2, seam jump 2
    assert seam_jump_exponent(F) == 2
    assert seam_jump_exponent(rigid(spec, FieldElem.of(spec, 2, -1))) == 0


def test_local_rotation_pipeline_rotation_number():
    """Induced lift of the golden local rotation has rot = beta."""
    spec = golden()
    L = localrotation.construct(spec)
    T = localrotation.induced_iet(L)
    res = rotation_number_cf(T, depth=8)
    assert res.kind == "irrational_enclosure"
    assert res.digits[:4] == [0, 2, 1, 1]
