"""Continued fractions of quadratic surds and Diophantine certificates.

Surds are stored as (P + sqrt(D))/Q with integer data, canonicalized so that
Q divides D - P^2; the CF step then stays in integers and the (P, Q) state
sequence is eventually periodic, which detects the period exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, List, Tuple

from .exactfield import FieldElem


class SurdError(ValueError):
    pass


def _square_free_split(d: int) -> Tuple[int, int]:
    """d = s^2 * d0 with d0 squarefree; returns (s, d0)."""
    s = 1
    d0 = d
    f = 2
    while f * f <= d0:
        while d0 % (f * f) == 0:
            d0 //= f * f
            s *= f
        f += 1
    return s, d0


@dataclass(frozen=True)
class QuadraticSurd:
    """The irrational number (P + sqrt(D))/Q, with Q | D - P^2."""

    P: int
    Q: int
    D: int

    def __post_init__(self):
        if self.Q == 0:
            raise SurdError("Q must be nonzero")
        if self.D <= 0 or math.isqrt(self.D) ** 2 == self.D:
            raise SurdError("D must be a positive nonsquare (irrational value)")
        if (self.D - self.P * self.P) % self.Q != 0:
            raise SurdError("not canonical: Q must divide D - P^2")

    def __float__(self) -> float:
        return (self.P + math.sqrt(self.D)) / self.Q

    def canonical_value(self) -> Tuple[Fraction, Fraction, int]:
        """(rational part, sqrt coefficient, squarefree radicand)."""
        s, d0 = _square_free_split(self.D)
        return Fraction(self.P, self.Q), Fraction(s, self.Q), d0

    def same_value(self, other: "QuadraticSurd") -> bool:
        return self.canonical_value() == other.canonical_value()

    def bounds(self, prec_bits: int = 128) -> Tuple[Fraction, Fraction]:
        """Rational bracket of the value, width < 2^(1-prec_bits)-ish."""
        scale = 1 << prec_bits
        r = math.isqrt(self.D * scale * scale)
        lo_sqrt = Fraction(r, scale)
        hi_sqrt = Fraction(r + 1, scale)
        if self.Q > 0:
            return (self.P + lo_sqrt) / self.Q, (self.P + hi_sqrt) / self.Q
        return (self.P + hi_sqrt) / self.Q, (self.P + lo_sqrt) / self.Q


def _canonicalize(P: int, Q: int, D: int) -> QuadraticSurd:
    if (D - P * P) % Q != 0:
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    # strip a common factor g with g | P, g | Q, g^2 | D when canonical form survives
    g0 = gcd(abs(P), abs(Q))
    for g in range(g0, 1, -1):
        if g0 % g:
            continue
        if D % (g * g) == 0 and ((D // (g * g) - (P // g) ** 2) % (Q // g)) == 0:
            return QuadraticSurd(P // g, Q // g, D // (g * g))
    return QuadraticSurd(P, Q, D)


def surd_from_rational_pair(r: Fraction, c: Fraction, d0: int) -> QuadraticSurd:
    """The value r + c*sqrt(d0) as a canonical surd; requires c != 0."""
    if c == 0:
        raise SurdError("rational value is not a surd")
    den = (r.denominator * c.denominator) // gcd(r.denominator, c.denominator)
    P = r.numerator * (den // r.denominator)
    B = c.numerator * (den // c.denominator)
    Q = den
    if B < 0:
        P, B, Q = -P, -B, -Q
    return _canonicalize(P, Q, d0 * B * B)


def surd_of(x: FieldElem) -> QuadraticSurd:
    """Exact surd representation of an irrational field element."""
    if x.b == 0:
        raise SurdError("rational input has no surd representation")
    spec = x.spec
    disc = spec.discriminant
    # x = a + b*(p + sqrt(disc))/2
    r = x.a + x.b * Fraction(spec.p, 2)
    c = x.b / 2
    s, d0 = _square_free_split(disc)
    return surd_from_rational_pair(r, c * s, d0)


@dataclass(frozen=True)
class CFExpansion:
    preperiod: Tuple[int, ...]
    period: Tuple[int, ...]

    def digits(self, n: int) -> List[int]:
        """First n partial quotients."""
        out = list(self.preperiod)
        while len(out) < n:
            out.extend(self.period)
        return out[:n]

    def digit_stream(self) -> Iterator[int]:
        yield from self.preperiod
        while True:
            yield from self.period

    def to_json(self) -> dict:
        return {"preperiod": list(self.preperiod), "period": list(self.period)}


def _floor_surd(P: int, Q: int, r: int) -> int:
    """floor((P + sqrt(D))/Q) given r = isqrt(D) (D nonsquare)."""
    if Q > 0:
        return (P + r) // Q
    return (-P - r - 1) // (-Q)


def cf_expand(s: QuadraticSurd, max_steps: int = 10**6) -> CFExpansion:
    """Eventually-periodic CF expansion, period found by (P, Q)-state repetition.

    a0 always goes to the preperiod; state tracking starts from the first
    partial quotient after it.
    """
    P, Q, D = s.P, s.Q, s.D
    r = math.isqrt(D)
    digits: List[int] = []
    seen = {}
    for step in range(max_steps):
        a = _floor_surd(P, Q, r)
        if step >= 1:
            state = (P, Q)
            if state in seen:
                start = seen[state]
                return CFExpansion(
                    preperiod=tuple(digits[:start]), period=tuple(digits[start:])
                )
            seen[state] = step
        digits.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
        if Q == 0:
            raise SurdError("rational value slipped through (Q became 0)")
    raise SurdError("no period found within the step budget")


def is_bounded_type(cf: CFExpansion) -> Tuple[bool, int]:
    """Surd expansions are always bounded; returns the max partial quotient."""
    return True, max(list(cf.preperiod) + list(cf.period))


def convergents(cf: CFExpansion, q_max: int) -> List[Tuple[int, int]]:
    """All convergents p/q with q <= q_max."""
    out = []
    p_prev, q_prev = 1, 0
    p_cur, q_cur = None, None
    for a in cf.digit_stream():
        if p_cur is None:
            p_cur, q_cur = a, 1
        else:
            p_cur, p_prev = a * p_cur + p_prev, p_cur
            q_cur, q_prev = a * q_cur + q_prev, q_cur
        if q_cur > q_max:
            break
        out.append((p_cur, q_cur))
    return out


def _qpow_lower(q: int, delta: Fraction, prec_bits: int = 64) -> Fraction:
    """Rational lower bound of q^delta (q >= 1, delta >= 0)."""
    if delta == 0:
        return Fraction(1)
    num, den = delta.numerator, delta.denominator
    target = q**num << (den * prec_bits)
    root = _int_nth_root(target, den)
    return Fraction(root, 1 << prec_bits)


def _int_nth_root(n: int, k: int) -> int:
    """floor(n^(1/k)) by Newton iteration on integers."""
    if n < 2:
        return n
    x = 1 << (-(-n.bit_length() // k))
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    return x


def _floor_of_multiple(s: QuadraticSurd, q: int) -> int:
    """Exact floor(q * value): q*s = (qP + sqrt(q^2 D)) / Q."""
    return _floor_surd(q * s.P, s.Q, math.isqrt(q * q * s.D))


def diophantine_witness(
    s: QuadraticSurd, delta: Fraction, q_max: int, prec_bits: int = 128
) -> Fraction:
    """Exact rational lower bound of min over 1 <= q <= q_max of
    q^(1+delta) * {q*value}, where {.} is the fractional part (one-sided
    approximation from below, p = floor(q*value)).

    The certificate covers only this finite range; bounded type implies a
    positive infimum over all q.  The floor is computed with exact integer
    surd arithmetic; the fractional part is bounded below rationally.
    """
    if q_max < 2:
        raise SurdError("q_max must be at least 2")
    if delta < 0:
        raise SurdError("delta must be nonnegative")
    lo, _hi = s.bounds(prec_bits)
    best = None
    for q in range(1, q_max + 1):
        p = _floor_of_multiple(s, q)
        frac_lo = q * lo - p
        if frac_lo < 0:
            frac_lo = Fraction(0)
        t = q * _qpow_lower(q, delta) * frac_lo
        if best is None or t < best:
            best = t
    return best


def brute_force_witness(
    s: QuadraticSurd, delta: Fraction, q_max: int, prec_bits: int = 128
) -> Fraction:
    """Oracle for diophantine_witness: same minimum, with the floor taken
    from a rational bracket instead of integer surd arithmetic."""
    lo, hi = s.bounds(prec_bits)
    best = None
    for q in range(1, q_max + 1):
        p_lo, p_hi = math.floor(q * lo), math.floor(q * hi)
        if p_lo != p_hi:
            raise SurdError(f"bracket too wide to determine floor({q} * value)")
        frac_lo = max(q * lo - p_lo, Fraction(0))
        t = q * _qpow_lower(q, delta) * frac_lo
        if best is None or t < best:
            best = t
    return best


def _primitive(word: Tuple[int, ...]) -> Tuple[int, ...]:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word == word[:d] * (n // d):
            return word[:d]
    return word


def _min_rotation(word: Tuple[int, ...]) -> Tuple[int, ...]:
    return min(tuple(word[i:] + word[:i]) for i in range(len(word)))


def tails_equal(c1: CFExpansion, c2: CFExpansion) -> bool:
    """Whether the eventually-periodic digit tails coincide up to a finite shift.

    Two periodic tails share a common tail iff their primitive periods are
    rotations of each other.
    """
    return _min_rotation(_primitive(c1.period)) == _min_rotation(_primitive(c2.period))


def apply_psl2(s: QuadraticSurd, matrix: Tuple[int, int, int, int]) -> QuadraticSurd:
    """Fractional linear image (a*s + b)/(c*s + d), det = +-1, canonical."""
    a, b, c, d = matrix
    if abs(a * d - b * c) != 1:
        raise SurdError("matrix must have determinant +-1")
    r, coef, d0 = s.canonical_value()
    # numerator and denominator in Q(sqrt(d0))
    n_r, n_c = a * r + b, a * coef
    m_r, m_c = c * r + d, c * coef
    norm = m_r * m_r - m_c * m_c * d0
    if norm == 0:
        raise SurdError("pole: denominator vanishes at the surd")
    out_r = (n_r * m_r - n_c * m_c * d0) / norm
    out_c = (n_c * m_r - n_r * m_c) / norm
    if out_c == 0:
        raise SurdError("image is rational (determinant condition violated?)")
    return surd_from_rational_pair(out_r, out_c, d0)
