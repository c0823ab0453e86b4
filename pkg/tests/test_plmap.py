import random
from fractions import Fraction

import pytest

from plrot.exactfield import FieldElem, make_alpha, power_alpha
from plrot.plmap import Piece, PLMap, PLMapError


def golden():
    return make_alpha(1, 1)


def two_piece(spec):
    """Slope alpha on [0, 1/alpha^2], slope 1/alpha after; maps [0,1] to [0,1]... not
    quite -- build an exact two-piece bump [0, L] -> [0, L]."""
    zero = FieldElem.of(spec, 0)
    s = power_alpha(spec, -2)
    u = s + power_alpha(spec, -1)
    # slope alpha on [0, s] then slope 1/alpha on [s, u]: image [0, alpha*s] + ...
    return PLMap(
        spec,
        [Piece(zero, 1, zero), Piece(s, -1, power_alpha(spec, 1) * s - power_alpha(spec, -1) * s)],
        u,
    )


def test_validation_errors():
    spec = golden()
    zero = FieldElem.of(spec, 0)
    one = FieldElem.of(spec, 1)
    with pytest.raises(PLMapError):
        PLMap(spec, [], one)
    with pytest.raises(PLMapError):
        # discontinuity: slope alpha then identity with b = 0
        PLMap(spec, [Piece(zero, 1, zero), Piece(power_alpha(spec, -1), 0, zero)], one)
    with pytest.raises(PLMapError):
        PLMap(spec, [Piece(one, 0, zero)], one)  # zero-length final piece


def test_identity_and_translation():
    spec = golden()
    zero = FieldElem.of(spec, 0)
    one = FieldElem.of(spec, 1)
    ident = PLMap.identity(spec, zero, one)
    t = FieldElem.of(spec, Fraction(1, 2))
    assert ident.evaluate(t) == t
    tr = PLMap.translation(spec, zero, one, t)
    assert tr.evaluate(zero) == t
    assert tr.image() == (t, one + t)


def test_evaluate_preimage_inverse():
    spec = golden()
    f = two_piece(spec)
    rng = random.Random(4)
    lo, hi = f.domain
    inv = f.invert()
    for _ in range(50):
        t = lo + (hi - lo) * Fraction(rng.randrange(0, 101), 100)
        y = f.evaluate(t)
        assert f.preimage(y) == t
        assert inv.evaluate(y) == t
    assert inv.image() == f.domain


def test_compose_pointwise_and_associative():
    spec = golden()
    f = two_piece(spec)
    lo, hi = f.domain
    g = f.invert()  # domain = image of f = [0, hi]? image of bump is its own domain
    c = f.compose(f)
    rng = random.Random(5)
    for _ in range(40):
        t = lo + (hi - lo) * Fraction(rng.randrange(0, 101), 100)
        assert c.evaluate(t) == f.evaluate(f.evaluate(t))
    left = f.compose(f).compose(f)
    right = f.compose(f.compose(f))
    assert left == right
    assert f.compose(g) == PLMap.identity(spec, lo, hi)


def test_compose_domain_mismatch():
    spec = golden()
    zero = FieldElem.of(spec, 0)
    one = FieldElem.of(spec, 1)
    f = PLMap.identity(spec, zero, one)
    g = PLMap.translation(spec, zero, one, one)
    with pytest.raises(PLMapError):
        f.compose(g)


def test_restrict():
    spec = golden()
    f = two_piece(spec)
    lo, hi = f.domain
    mid = (lo + hi) / 2
    r = f.restrict(lo, mid)
    assert r.domain == (lo, mid)
    assert r.evaluate(mid) == f.evaluate(mid)
    with pytest.raises(PLMapError):
        f.restrict(mid, mid)


def test_one_sided_derivatives_and_variation():
    spec = golden()
    f = two_piece(spec)
    s = f.pieces[1].left
    jv = f.one_sided_derivatives(s)
    assert jv.left_exponent == 1 and jv.right_exponent == -1
    assert jv.sigma_exponent == -2
    assert jv.is_break()
    assert f.variation_log_slope() == 2
    boundary = f.one_sided_derivatives(f.left)
    assert boundary.at_boundary
    with pytest.raises(PLMapError):
        boundary.sigma_exponent


def test_is_in_F_alpha():
    spec = golden()
    zero = FieldElem.of(spec, 0)
    one = FieldElem.of(spec, 1)
    assert PLMap.identity(spec, zero, one).is_in_F_alpha()
    # breakpoint 1/3 is outside Z[alpha]
    third = FieldElem.of(spec, Fraction(1, 3))
    bad = PLMap(spec, [Piece(zero, 0, zero), Piece(third, 0, zero)], one)
    # normalization merges equal pieces; build a genuine break instead
    alpha = FieldElem.alpha(spec)
    b2 = third - alpha * third
    bad = PLMap(spec, [Piece(zero, 0, zero), Piece(third, 1, b2)], alpha - third * (alpha - 1))
    assert not bad.is_in_F_alpha()
    assert not PLMap.translation(spec, zero, one, one).is_in_F_alpha()


def test_fixed_points_identity_and_scaling():
    spec = golden()
    zero = FieldElem.of(spec, 0)
    one = FieldElem.of(spec, 1)
    ident = PLMap.identity(spec, zero, one)
    points, intervals = ident.fixed_points()
    assert points == [] and intervals == [(zero, one)]
    scaling = PLMap(spec, [Piece(zero, 1, zero)], one)  # x -> alpha x
    points, intervals = scaling.fixed_points()
    assert intervals == []
    assert len(points) == 1 and points[0][0] == zero


def test_commutes_with_on():
    spec = golden()
    f = two_piece(spec)
    lo, hi = f.domain
    assert f.commutes_with_on(f, lo, hi)


def test_json_round_trip():
    spec = golden()
    f = two_piece(spec)
    assert PLMap.from_json(f.to_json()) == f
