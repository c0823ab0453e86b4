"""Decision procedure and constructive realizer for PL maps between boxes.

Given intervals [a, c] and [a', c'] with endpoints in the ring A, a PL
homeomorphism with slopes in <alpha> mapping one onto the other exists iff
the lengths are congruent modulo the ideal (alpha - 1)A (the Bieri-Strebel
criterion).  ``realize`` produces an explicit such map: the length defect is
decomposed into elementary moves +-(alpha-1)*alpha^m, each applied as an
expansion (slope alpha on a subinterval of length alpha^m) or a contraction
(slope 1/alpha on a subinterval of length alpha^(m+1)); moves too large for
the interval are rewritten downward via alpha^m = p*alpha^(m-1) + q*alpha^(m-2)
and the elementary maps are composed sequentially, so the accumulated map can
reach any target length.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from .exactfield import (
    FieldElem,
    FieldError,
    SlopeSpec,
    congruent_mod_ideal,
    ideal_witness,
    in_ring_A,
    power_alpha,
)
from .plmap import Piece, PLMap, PLMapError


class RealizeError(ValueError):
    """The requested box map cannot be realized."""


DEFAULT_EXPONENT_FLOOR = -64


@dataclass
class RealizationPlan:
    """Record of how a box map was realized."""

    defect: FieldElem
    witness: Optional[FieldElem]
    moves: List[Tuple[int, int]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "defect": self.defect.to_json(),
            "witness": self.witness.to_json() if self.witness is not None else None,
            "moves": [{"exponent": m, "count": n} for m, n in self.moves],
        }


def _validate_box(a: FieldElem, c: FieldElem, name: str) -> None:
    if not a < c:
        raise RealizeError(f"degenerate box {name}")
    if not (in_ring_A(a) and in_ring_A(c)):
        raise RealizeError(f"box {name} endpoints must lie in the ring A")


def check(a: FieldElem, c: FieldElem, a2: FieldElem, c2: FieldElem) -> bool:
    """Whether a PL map [a,c] -> [a2,c2] with slopes in <alpha> exists."""
    _validate_box(a, c, "[a,c]")
    _validate_box(a2, c2, "[a',c']")
    try:
        return congruent_mod_ideal(c2 - a2, c - a)
    except FieldError:
        # non-unit q with gcd(q, p+q-1) > 1: fall back to the search oracle
        from .exactfield import brute_force_in_ideal

        return brute_force_in_ideal((c2 - a2) - (c - a))


def _witness_laurent(e: FieldElem, depth: int = 64) -> Tuple[int, int, int]:
    """Write e = alpha^(-t) * (U + V*alpha) with integer U, V; smallest t."""
    alpha = FieldElem.alpha(e.spec)
    c = e
    for t in range(depth + 1):
        if c.a.denominator == 1 and c.b.denominator == 1:
            return t, int(c.a), int(c.b)
        c = c * alpha
    raise RealizeError("witness has no integral alpha-power shift (non-unit case)")


def _moves_fit(moves: dict, cap: FieldElem) -> Optional[int]:
    """Largest exponent whose move exceeds the capacity, or None if all fit."""
    worst = None
    for m, n in moves.items():
        if n == 0:
            continue
        need = power_alpha(cap.spec, m if n > 0 else m + 1)
        if need > cap and (worst is None or m > worst):
            worst = m
    return worst


def _moves_sum(moves: dict, spec: SlopeSpec) -> FieldElem:
    am1 = FieldElem.of(spec, -1, 1)
    total = FieldElem.of(spec, 0)
    for m, n in moves.items():
        total = total + am1 * power_alpha(spec, m) * n
    return total


def _elementary_expand(spec: SlopeSpec, length: FieldElem, m: int) -> PLMap:
    """[0, length] -> [0, length + (alpha-1)alpha^m], slope alpha on [0, alpha^m]."""
    zero = FieldElem.of(spec, 0)
    src = power_alpha(spec, m)
    gain = FieldElem.of(spec, -1, 1) * src
    if src == length:
        return PLMap(spec, [Piece(zero, 1, zero)], length)
    return PLMap(spec, [Piece(zero, 1, zero), Piece(src, 0, gain)], length)


def _elementary_contract(spec: SlopeSpec, length: FieldElem, m: int) -> PLMap:
    """[0, length] -> [0, length - (alpha-1)alpha^m], slope 1/alpha on [0, alpha^(m+1)]."""
    zero = FieldElem.of(spec, 0)
    src = power_alpha(spec, m + 1)
    loss = FieldElem.of(spec, -1, 1) * power_alpha(spec, m)
    if src == length:
        return PLMap(spec, [Piece(zero, -1, zero)], length)
    return PLMap(spec, [Piece(zero, -1, zero), Piece(src, 0, -loss)], length)


def _shift(f: PLMap, domain_shift: FieldElem, image_shift: FieldElem) -> PLMap:
    """x -> f(x - domain_shift) + image_shift."""
    spec = f.spec
    pieces = [
        Piece(
            pc.left + domain_shift,
            pc.k,
            pc.b + image_shift - power_alpha(spec, pc.k) * domain_shift,
        )
        for pc in f.pieces
    ]
    return PLMap(spec, pieces, f.right + domain_shift)


_CORE_CACHE: dict = {}


def realize(
    a: FieldElem,
    c: FieldElem,
    a2: FieldElem,
    c2: FieldElem,
    exponent_floor: int = DEFAULT_EXPONENT_FLOOR,
) -> Tuple[PLMap, RealizationPlan]:
    """Exact PL homeomorphism [a,c] -> [a2,c2] with slopes in <alpha> and
    breakpoints/intercepts in A.  Post-verified before returning.

    The map is built on [0, c-a] -> [0, c2-a2] and shifted; the core build
    is memoized on the length pair (realization is translation-covariant).
    """
    if not check(a, c, a2, c2):
        raise RealizeError("boxes fail the length congruence; no PL map exists")
    spec = a.spec
    length0, length1 = c - a, c2 - a2
    key = (spec.p, spec.q, length0, length1, exponent_floor)
    cached = _CORE_CACHE.get(key)
    if cached is None:
        cached = _realize_core(spec, length0, length1, exponent_floor)
        _CORE_CACHE[key] = cached
    core, plan = cached
    f = _shift(core, a, a2)
    _post_verify(f, a, c, a2, c2)
    return f, plan


def _realize_core(
    spec: SlopeSpec,
    length0: FieldElem,
    length1: FieldElem,
    exponent_floor: int,
) -> Tuple[PLMap, RealizationPlan]:
    """Realize [0, length0] -> [0, length1]."""
    zero = FieldElem.of(spec, 0)
    d = length1 - length0
    plan = RealizationPlan(defect=d, witness=None)
    if d.is_zero():
        return PLMap.identity(spec, zero, length0), plan

    e = ideal_witness(d, height=10**9, depth=64)
    if e is None:
        raise RealizeError("no ideal witness found for the defect")
    plan.witness = e
    t, u, v = _witness_laurent(e)
    moves = {}
    for m, n in ((-t, u), (-t + 1, v)):
        if n:
            moves[m] = moves.get(m, 0) + n

    cap = length0 if length0 < length1 else length1

    # push oversized moves down: alpha^m = p*alpha^(m-1) + q*alpha^(m-2)
    while True:
        worst = _moves_fit(moves, cap)
        if worst is None:
            break
        if worst - 2 < exponent_floor:
            raise RealizeError(
                f"rewrite loop hit the exponent floor {exponent_floor}"
            )
        step = 1 if moves[worst] > 0 else -1
        moves[worst] -= step
        moves[worst - 1] = moves.get(worst - 1, 0) + step * spec.p
        moves[worst - 2] = moves.get(worst - 2, 0) + step * spec.q
        moves = {m: n for m, n in moves.items() if n != 0}

    assert _moves_sum(moves, spec) == d
    plan.moves = sorted(moves.items())

    # apply: expansions first (running length only grows), then contractions
    # (running length shrinks monotonically toward the target, staying >= cap)
    cur = PLMap.identity(spec, zero, length0)
    run = length0
    ordered = []
    for m, n in sorted(moves.items(), reverse=True):
        if n > 0:
            ordered.extend([(m, 1)] * n)
    for m, n in sorted(moves.items(), reverse=True):
        if n < 0:
            ordered.extend([(m, -1)] * (-n))
    for m, s in ordered:
        if s > 0:
            elem = _elementary_expand(spec, run, m)
        else:
            elem = _elementary_contract(spec, run, m)
        run = elem.evaluate(run)
        cur = elem.compose(cur)

    assert run == length1
    return cur, plan


def _post_verify(f: PLMap, a, c, a2, c2) -> None:
    if f.evaluate(a) != a2 or f.evaluate(c) != c2:
        raise RealizeError("post-verification failed: endpoint images")
    if not all(in_ring_A(t) for t in f.breakpoints()):
        raise RealizeError("post-verification failed: breakpoint outside A")
    if not all(in_ring_A(pc.b) for pc in f.pieces):
        raise RealizeError("post-verification failed: intercept outside A")


GlueSegment = Tuple[Tuple[FieldElem, FieldElem], Union[PLMap, FieldElem]]


def glue(segments: List[GlueSegment]) -> PLMap:
    """Concatenate maps/translations on adjacent intervals into one PL map.

    Each segment is ((lo, hi), PLMap) with the map's domain equal to the
    interval, or ((lo, hi), FieldElem) meaning translation by that amount.
    Segments must tile an interval and agree exactly at the junctions.
    """
    if not segments:
        raise PLMapError("nothing to glue")
    pieces = []
    prev_hi = None
    prev_val = None
    spec = None
    for (lo, hi), item in segments:
        if not lo < hi:
            raise PLMapError("degenerate glue segment")
        if isinstance(item, PLMap):
            seg = item
            if seg.left != lo or seg.right != hi:
                raise PLMapError("segment map domain does not match its interval")
        else:
            spec0 = lo.spec
            seg = PLMap.translation(spec0, lo, hi, item)
        spec = seg.spec
        if prev_hi is not None:
            if prev_hi != lo:
                raise PLMapError("glue segments must tile without gaps or overlaps")
            if seg.evaluate(lo) != prev_val:
                raise PLMapError(f"value mismatch at junction {float(lo):.6g}")
        pieces.extend(seg.pieces)
        prev_hi = hi
        prev_val = seg.evaluate(hi)
    return PLMap(spec, pieces, prev_hi)
