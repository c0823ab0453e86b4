"""Exact arithmetic in the quadratic field Q(alpha), alpha^2 = p*alpha + q.

Elements are stored as a + b*alpha with exact rational coefficients.  All
order decisions (sign, comparisons, floor) are made with integer/rational
arithmetic only; floats appear exclusively in display approximations.

The ring A of allowed breakpoints and intercepts is Z[alpha, 1/alpha].  In
the unit case |q| = 1 this equals Z[alpha] and membership is integrality of
the coefficients.  For |q| > 1 we test membership in Z[alpha][1/q], a
documented superset; callers should treat non-unit results as experimental.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class FieldError(ValueError):
    """Invalid construction or operation in the quadratic field."""


@dataclass(frozen=True)
class SlopeSpec:
    """The defining data of alpha: the larger root of x^2 = p*x + q."""

    p: int
    q: int
    unit_case: bool

    @property
    def discriminant(self) -> int:
        return self.p * self.p + 4 * self.q

    def alpha_float(self) -> float:
        return (self.p + math.sqrt(self.discriminant)) / 2

    def __repr__(self) -> str:
        return f"SlopeSpec(p={self.p}, q={self.q})"


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def make_alpha(p: int, q: int) -> SlopeSpec:
    """Validate (p, q) and build the slope spec for alpha = (p + sqrt(p^2+4q))/2.

    Rejects rational roots (perfect-square discriminant), non-real roots,
    q = 0, and larger root <= 1.
    """
    if q == 0:
        raise FieldError("q = 0 gives a rational (degenerate) root")
    disc = p * p + 4 * q
    if disc <= 0:
        raise FieldError(f"discriminant {disc} <= 0: no real root")
    if _is_square(disc):
        raise FieldError(f"discriminant {disc} is a perfect square: alpha rational")
    # larger root > 1  <=>  p + sqrt(disc) > 2  <=>  sqrt(disc) > 2 - p
    if 2 - p >= 0 and disc <= (2 - p) ** 2:
        raise FieldError("larger root is <= 1")
    return SlopeSpec(p=p, q=q, unit_case=abs(q) == 1)


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"expected int or Fraction, got {type(v).__name__}")


@dataclass(frozen=True)
class FieldElem:
    """The number a + b*alpha, with a, b exact rationals."""

    a: Fraction
    b: Fraction
    spec: SlopeSpec

    # -- construction -----------------------------------------------------

    @staticmethod
    def of(spec: SlopeSpec, a=0, b=0) -> "FieldElem":
        return FieldElem(_as_fraction(a), _as_fraction(b), spec)

    @staticmethod
    def alpha(spec: SlopeSpec) -> "FieldElem":
        return FieldElem(Fraction(0), Fraction(1), spec)

    def _check(self, other: "FieldElem") -> None:
        if self.spec != other.spec:
            raise FieldError("mismatched slope specs")

    def _coerce(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElem.of(self.spec, other)
        return NotImplemented

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.a + o.a, self.b + o.b, self.spec)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.a - o.a, self.b - o.b, self.spec)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FieldElem(-self.a, -self.b, self.spec)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p, q = self.spec.p, self.spec.q
        # (a1 + b1 x)(a2 + b2 x) with x^2 -> p x + q
        a = self.a * o.a + q * self.b * o.b
        b = self.a * o.b + self.b * o.a + p * self.b * o.b
        return FieldElem(a, b, self.spec)

    __rmul__ = __mul__

    def conjugate(self) -> "FieldElem":
        """Image under alpha -> p - alpha (the other root)."""
        p = self.spec.p
        return FieldElem(self.a + self.b * p, -self.b, self.spec)

    def norm(self) -> Fraction:
        """N(a + b*alpha) = a^2 + a*b*p - b^2*q."""
        p, q = self.spec.p, self.spec.q
        return self.a * self.a + self.a * self.b * p - self.b * self.b * q

    def inv(self) -> "FieldElem":
        n = self.norm()
        if n == 0:
            if self.a == 0 and self.b == 0:
                raise ZeroDivisionError("cannot invert zero")
            raise FieldError("zero norm for nonzero element (alpha not irrational?)")
        c = self.conjugate()
        return FieldElem(c.a / n, c.b / n, self.spec)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k: int) -> "FieldElem":
        if k < 0:
            return self.inv() ** (-k)
        result = FieldElem.of(self.spec, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- order ------------------------------------------------------------

    def sign(self) -> int:
        """Exact sign of the real number a + b*alpha."""
        a, b = self.a, self.b
        if b == 0:
            return (a.numerator > 0) - (a.numerator < 0)
        p, q = self.spec.p, self.spec.q
        # a + b*alpha > 0  <=>  alpha > -a/b (b > 0)  or  alpha < -a/b (b < 0).
        # alpha is the larger root of f(x) = x^2 - p x - q, so
        # alpha > r  <=>  2r <= p  or  f(r) < 0.
        # With r = N/D (integers, D of either sign) this is integer-only.
        N = -(a.numerator * b.denominator)
        D = a.denominator * b.numerator
        if D > 0:
            half = 2 * N <= p * D
        else:
            half = 2 * N >= p * D
        alpha_gt_r = half or (N * N - p * N * D - q * D * D < 0)
        if b.numerator > 0:
            return 1 if alpha_gt_r else -1
        return -1 if alpha_gt_r else 1

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __lt__(self, other):
        return (self - self._coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - self._coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - self._coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - self._coerce(other)).sign() >= 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.a == other and self.b == 0
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.spec == other.spec and self.a == other.a and self.b == other.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.spec))

    def floor(self) -> int:
        """Exact integer floor, via a float guess corrected with exact signs."""
        n = math.floor(float(self))
        while self - n < 0:
            n -= 1
        while self - (n + 1) >= 0:
            n += 1
        return n

    def frac(self) -> "FieldElem":
        return self - self.floor()

    # -- display & serialization ------------------------------------------

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * self.spec.alpha_float()

    def __repr__(self) -> str:
        return f"FieldElem({self.a}, {self.b}; ~{float(self):.6g})"

    def to_json(self) -> dict:
        return {
            "a_num": str(self.a.numerator),
            "a_den": str(self.a.denominator),
            "b_num": str(self.b.numerator),
            "b_den": str(self.b.denominator),
            "p": str(self.spec.p),
            "q": str(self.spec.q),
            "approx": float(self),
        }

    @staticmethod
    def from_json(d: dict) -> "FieldElem":
        spec = make_alpha(int(d["p"]), int(d["q"]))
        return FieldElem(
            Fraction(int(d["a_num"]), int(d["a_den"])),
            Fraction(int(d["b_num"]), int(d["b_den"])),
            spec,
        )


_POWER_CACHE: dict = {}


def power_alpha(spec: SlopeSpec, k: int) -> FieldElem:
    """Exact alpha^k for any integer k (memoized)."""
    key = (spec.p, spec.q, k)
    v = _POWER_CACHE.get(key)
    if v is None:
        v = FieldElem.alpha(spec) ** k
        _POWER_CACHE[key] = v
    return v


# -- the ring A and the ideal (alpha - 1)A ---------------------------------


def _denominator_ok(den: int, q: int) -> bool:
    # every prime factor of den must divide |q|
    qa = abs(q)
    while den != 1:
        g = gcd(den, qa)
        if g == 1:
            return False
        while den % g == 0:
            den //= g
    return True


def in_ring_A(x: FieldElem) -> bool:
    """Membership in the breakpoint ring A.

    Unit case: A = Z[alpha], the test is integrality.  Otherwise we test
    membership in Z[alpha][1/q], a superset of Z[alpha, 1/alpha] when |q| > 1.
    """
    if x.spec.unit_case:
        return x.a.denominator == 1 and x.b.denominator == 1
    return _denominator_ok(x.a.denominator, x.spec.q) and _denominator_ok(
        x.b.denominator, x.spec.q
    )


def ideal_modulus(spec: SlopeSpec) -> int:
    """The modulus |p + q - 1| of the quotient A/(alpha-1)A under alpha -> 1."""
    return abs(spec.p + spec.q - 1)


@dataclass(frozen=True)
class CongruenceClass:
    """Image of a ring element in A/(alpha-1)A, via evaluation alpha -> 1."""

    modulus: int
    residue: int


def _ev1_residue(x: FieldElem, m: int) -> int:
    """a + b mod m, inverting denominators mod m (they are coprime to m)."""
    if m == 0:
        raise FieldError("modulus 0 has no finite residue")

    def frac_mod(f: Fraction) -> int:
        num, den = f.numerator, f.denominator
        if gcd(den, m) != 1:
            raise FieldError(
                f"denominator {den} not invertible mod {m}; use the brute-force oracle"
            )
        return (num * pow(den, -1, m)) % m

    return (frac_mod(x.a) + frac_mod(x.b)) % m


def congruence_class(x: FieldElem) -> CongruenceClass:
    if not in_ring_A(x):
        raise FieldError("element outside the ring A")
    m = ideal_modulus(x.spec)
    if m == 0:
        v = x.a + x.b
        return CongruenceClass(0, int(v) if v.denominator == 1 else 0)
    if m == 1:
        return CongruenceClass(1, 0)
    return CongruenceClass(m, _ev1_residue(x, m))


def congruent_mod_ideal(x: FieldElem, y: FieldElem) -> bool:
    """Whether x - y lies in the ideal (alpha - 1)A.

    Decided by evaluating alpha -> 1 into Z/(p+q-1)Z; requires the
    denominators of the coefficients (powers of q) to be invertible there.
    """
    if not (in_ring_A(x) and in_ring_A(y)):
        raise FieldError("congruence test requires elements of A")
    d = x - y
    m = ideal_modulus(x.spec)
    if m == 0:
        return d.a + d.b == 0
    if m == 1:
        return True
    return _ev1_residue(d, m) == 0


def ideal_witness(x: FieldElem, height: int = 100, depth: int = 20):
    """Search e with (alpha-1)e = x and e = (u + v*alpha) * alpha^(-t),
    |u|, |v| <= height, 0 <= t <= depth.  Returns e or None.

    The quotient e0 = x / (alpha - 1) is computed exactly; the search only
    scans alpha-power shifts of it for integer coefficients.
    """
    spec = x.spec
    am1 = FieldElem.of(spec, -1, 1)
    e0 = x * am1.inv()
    alpha = FieldElem.alpha(spec)
    c = e0
    for _ in range(depth + 1):
        if (
            c.a.denominator == 1
            and c.b.denominator == 1
            and abs(c.a) <= height
            and abs(c.b) <= height
        ):
            return e0
        c = c * alpha
    return None


def brute_force_in_ideal(x: FieldElem, height: int = 100, depth: int = 20) -> bool:
    """Independent oracle for congruent_mod_ideal(x, 0).

    Sound for membership; a False only means "no witness up to the given
    height and depth".
    """
    if not in_ring_A(x):
        raise FieldError("brute-force ideal test requires an element of A")
    return ideal_witness(x, height=height, depth=depth) is not None
