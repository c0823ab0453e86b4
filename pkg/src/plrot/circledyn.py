"""Circle homeomorphisms as degree-one PL lifts, with exact rotation numbers.

A lift is stored by its base map on the fundamental domain [0, 1] with
F(1) = F(0) + 1 and extended by F(t + 1) = F(t) + 1.  Because the maps are
PL over the quadratic field, comparing the rotation number with any rational
p/q is a finite exact sign test on F^q, which drives a Stern-Brocot
bisection for continued-fraction digit extraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from .exactfield import FieldElem, SlopeSpec, power_alpha
from .plmap import Piece, PLMap, _sorted_unique


class CircleError(ValueError):
    pass


DEFAULT_PIECE_CAP = 10**6


class CircleLift:
    """Monotone degree-one lift of a circle homeomorphism."""

    __slots__ = ("base",)

    def __init__(self, base: PLMap):
        spec = base.spec
        zero = FieldElem.of(spec, 0)
        one = FieldElem.of(spec, 1)
        if base.left != zero or base.right != one:
            raise CircleError("lift base must live on the fundamental domain [0, 1]")
        if base.evaluate(one) != base.evaluate(zero) + one:
            raise CircleError("wrap consistency F(1) = F(0) + 1 violated")
        self.base = base

    @property
    def spec(self) -> SlopeSpec:
        return self.base.spec

    @staticmethod
    def rotation(spec: SlopeSpec, angle: FieldElem) -> "CircleLift":
        zero = FieldElem.of(spec, 0)
        one = FieldElem.of(spec, 1)
        return CircleLift(PLMap.translation(spec, zero, one, angle))

    @staticmethod
    def from_interval_map(f: PLMap) -> "CircleLift":
        """Lift of a homeomorphism of [0,1] fixing both endpoints."""
        return CircleLift(f)

    def __eq__(self, other):
        if not isinstance(other, CircleLift):
            return NotImplemented
        return self.base == other.base

    def __repr__(self):
        return f"CircleLift({len(self.base.pieces)} pieces, F(0)~{float(self.base.evaluate(FieldElem.of(self.spec, 0))):.6g})"

    # -- evaluation on all of R ------------------------------------------------

    def evaluate(self, t: FieldElem) -> FieldElem:
        n = t.floor()
        return self.base.evaluate(t - n) + n

    __call__ = evaluate

    # -- composition and powers --------------------------------------------------

    def compose(self, other: "CircleLift", piece_cap: int = DEFAULT_PIECE_CAP) -> "CircleLift":
        """self o other, exactly, on the fundamental domain."""
        spec = self.spec
        F = other.base
        G = self.base
        zero = FieldElem.of(spec, 0)
        one = FieldElem.of(spec, 1)
        cuts = [zero]
        cuts.extend(F.breakpoints())
        # preimages under F of every unrolled cut of G in the range of F
        f0, f1 = F.evaluate(zero), F.evaluate(one)
        g_cuts = [zero] + G.breakpoints() + [one]
        m_lo = f0.floor()
        m_hi = f1.floor() + 1
        for m in range(m_lo, m_hi + 1):
            for c in g_cuts:
                target = c + m
                if f0 < target < f1:
                    cuts.append(F.preimage(target))
        cuts = _sorted_unique(cuts)
        pieces: List[Piece] = []
        for s in cuts:
            pF = F.pieces[F._piece_index(s)]
            val = pF.value_at(s)
            m = val.floor()
            inner = val - m
            idx = G._piece_index(inner) if inner < one else len(G.pieces) - 1
            pG = G.pieces[idx]
            k = pG.k + pF.k
            b = power_alpha(spec, pG.k) * (pF.b - m) + pG.b + m
            pieces.append(Piece(s, k, b))
        if len(pieces) > piece_cap:
            raise CircleError(f"piece cap {piece_cap} exceeded in composition")
        return CircleLift(PLMap(spec, pieces, one))

    def iterate(self, n: int, piece_cap: int = DEFAULT_PIECE_CAP) -> "CircleLift":
        """Exact n-fold composition via binary powering."""
        if n < 1:
            raise CircleError("iterate needs n >= 1")
        result: Optional[CircleLift] = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result.compose(base, piece_cap)
            n >>= 1
            if n:
                base = base.compose(base, piece_cap)
            if result is not None and len(result.base.pieces) > piece_cap:
                raise CircleError(f"piece cap {piece_cap} exceeded")
        return result

    def invert(self) -> "CircleLift":
        """Lift of the inverse circle homeomorphism."""
        spec = self.spec
        zero = FieldElem.of(spec, 0)
        one = FieldElem.of(spec, 1)
        Q = self.base.invert()  # domain [F(0), F(0)+1]
        s = Q.left
        # K with s + K <= 0 < s + K + 1
        K = (-s).floor()
        while s + K > zero:
            K -= 1
        while s + K + 1 <= zero:
            K += 1
        boundary = s + K + 1  # in (0, 1]

        def shifted(pl: PLMap, shift: int) -> PLMap:
            # value rule: x -> pl(x - shift) + shift
            pieces = [
                Piece(
                    pc.left + shift,
                    pc.k,
                    pc.b + shift - power_alpha(spec, pc.k) * shift,
                )
                for pc in pl.pieces
            ]
            return PLMap(spec, pieces, pl.right + shift)

        parts = []
        if boundary >= one:
            parts.append(shifted(Q, K).restrict(zero, one))
        else:
            parts.append(shifted(Q, K).restrict(zero, boundary))
            parts.append(shifted(Q, K + 1).restrict(boundary, one))
        pieces = []
        for part in parts:
            pieces.extend(part.pieces)
        return CircleLift(PLMap(spec, pieces, one))

    # -- rotation number ----------------------------------------------------------

    def compare_rotation(
        self, p: int, q: int, piece_cap: int = DEFAULT_PIECE_CAP
    ) -> Tuple[str, Optional[FieldElem]]:
        """Exact position of rot(F) relative to p/q: 'less', 'equal' (with a
        periodic-point witness), or 'greater'."""
        if q < 1:
            raise CircleError("q must be positive")
        G = self.iterate(q, piece_cap).base
        spec = self.spec
        zero = FieldElem.of(spec, 0)
        one = FieldElem.of(spec, 1)
        test_points = [zero] + G.breakpoints() + [one]
        signs = [(G.evaluate(t) - t - p).sign() for t in test_points]
        if all(s < 0 for s in signs):
            return "less", None
        if all(s > 0 for s in signs):
            return "greater", None
        # a periodic point exists; solve G(t) = t + p piece by piece
        for i, pc in enumerate(G.pieces):
            right = G.pieces[i + 1].left if i + 1 < len(G.pieces) else one
            if pc.k == 0:
                if pc.b == p:
                    return "equal", pc.left
                continue
            # G(t) - t - p = (alpha^k - 1) t + b - p = 0
            t = (FieldElem.of(spec, p) - pc.b) / (power_alpha(spec, pc.k) - one)
            if pc.left <= t <= right:
                return "equal", t
        raise CircleError("sign change without a root: inconsistent state")


@dataclass
class RotationNumberResult:
    kind: str  # "rational" | "irrational_enclosure"
    value: Optional[Fraction] = None
    witness: Optional[FieldElem] = None
    digits: List[int] = field(default_factory=list)
    bracket: Optional[Tuple[Fraction, Fraction]] = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "value": str(self.value) if self.value is not None else None,
            "witness": self.witness.to_json() if self.witness is not None else None,
            "digits": self.digits,
            "bracket": [str(self.bracket[0]), str(self.bracket[1])]
            if self.bracket
            else None,
        }


def rotation_number_cf(
    F: CircleLift, depth: int = 12, piece_cap: int = DEFAULT_PIECE_CAP
) -> RotationNumberResult:
    """Continued-fraction digits of rot(F) via Stern-Brocot bisection.

    Returns the rational value (with exact periodic-point witness) if a
    mediant hits it, else the first ``depth`` digits [a0, a1, ...] with the
    exact convergent bracket reached.
    """
    # integer part
    est = float(F.base.evaluate(FieldElem.of(F.spec, 0)))
    a0 = None
    for n in range(int(est) - 2, int(est) + 4):
        rel, wit = F.compare_rotation(n, 1, piece_cap)
        if rel == "equal":
            return RotationNumberResult("rational", value=Fraction(n), witness=wit)
        if rel == "greater":
            rel2, wit2 = F.compare_rotation(n + 1, 1, piece_cap)
            if rel2 == "equal":
                return RotationNumberResult(
                    "rational", value=Fraction(n + 1), witness=wit2
                )
            if rel2 == "less":
                a0 = n
                break
    if a0 is None:
        raise CircleError("could not bracket the integer part of rot(F)")

    digits = [a0]
    lo = (a0, 1)
    hi = (a0 + 1, 1)
    # Stern-Brocot path decoding: path L^(a1-1) R^(a2) L^(a3) ...
    run_dir = "L"
    run_len = 0
    first_run = True
    while len(digits) < depth:
        pm = (lo[0] + hi[0], lo[1] + hi[1])
        rel, wit = F.compare_rotation(pm[0], pm[1], piece_cap)
        if rel == "equal":
            return RotationNumberResult(
                "rational", value=Fraction(pm[0], pm[1]), witness=wit
            )
        step = "L" if rel == "less" else "R"
        if step == "L":
            hi = pm
        else:
            lo = pm
        if step == run_dir:
            run_len += 1
        else:
            digits.append(run_len + 1 if first_run else run_len)
            first_run = False
            run_dir = step
            run_len = 1
    return RotationNumberResult(
        "irrational_enclosure",
        digits=digits[:depth],
        bracket=(Fraction(lo[0], lo[1]), Fraction(hi[0], hi[1])),
    )


def rotation_number_orbit(F: CircleLift, n: int, x0: FieldElem) -> Tuple[float, float]:
    """Floating estimate F^n(x0)/n from n exact forward evaluations, with the
    standard 1/n error bound for degree-one lifts."""
    if n < 1:
        raise CircleError("need n >= 1")
    t = x0.frac()
    offset = x0.floor()
    for _ in range(n):
        v = F.base.evaluate(t)
        m = v.floor()
        offset += m
        t = v - m
    total = float(t) + offset
    return total / n, 1.0 / n


def class_P_certificate(F: CircleLift) -> Tuple[bool, int]:
    """PL lifts always have log-slope of bounded variation; returns the total
    variation around the circle (internal breaks plus the seam) in units of
    log(alpha)."""
    base = F.base
    v = base.variation_log_slope()
    seam = abs(base.pieces[0].k - base.pieces[-1].k)
    return True, v + seam


def seam_jump_exponent(F: CircleLift) -> int:
    """Exponent of the derivative jump at the seam 0 ~ 1."""
    return F.base.pieces[0].k - F.base.pieces[-1].k
