"""Piecewise-linear homeomorphisms with slopes in the cyclic group <alpha>.

A map is a sorted list of affine pieces x -> alpha^k x + b on a closed
interval, with exact continuity at every internal breakpoint.  Slopes are
stored as integer exponents of alpha, so membership of the derivative in
<alpha> is structural and jump arithmetic is pure integer arithmetic.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Optional, Sequence

from .exactfield import FieldElem, SlopeSpec, in_ring_A, power_alpha


class PLMapError(ValueError):
    """Invalid PL map construction or operation."""


@dataclass(frozen=True)
class Piece:
    left: FieldElem
    k: int
    b: FieldElem

    def value_at(self, x: FieldElem) -> FieldElem:
        return power_alpha(self.left.spec, self.k) * x + self.b


@dataclass(frozen=True)
class JumpValue:
    """One-sided derivative exponents at a point; sigma = alpha^(right-left)."""

    point: FieldElem
    left_exponent: Optional[int]
    right_exponent: Optional[int]
    at_boundary: bool = False

    @property
    def sigma_exponent(self) -> int:
        if self.left_exponent is None or self.right_exponent is None:
            raise PLMapError("jump undefined at a domain boundary")
        return self.right_exponent - self.left_exponent

    def is_break(self) -> bool:
        if self.left_exponent is None or self.right_exponent is None:
            return True
        return self.sigma_exponent != 0


class PLMap:
    """Strictly increasing PL homeomorphism of [left, right]."""

    __slots__ = ("spec", "pieces", "right")

    def __init__(self, spec: SlopeSpec, pieces: Sequence[Piece], right: FieldElem):
        pieces = self._normalize(list(pieces))
        if not pieces:
            raise PLMapError("a PL map needs at least one piece")
        for i in range(len(pieces) - 1):
            if not pieces[i].left < pieces[i + 1].left:
                raise PLMapError("piece left endpoints must be strictly increasing")
            # continuity at the internal breakpoint
            t = pieces[i + 1].left
            if pieces[i].value_at(t) != pieces[i + 1].value_at(t):
                raise PLMapError(f"discontinuity at breakpoint {t!r}")
        if not pieces[-1].left < right:
            raise PLMapError("zero-length final piece")
        self.spec = spec
        self.pieces = tuple(pieces)
        self.right = right

    @staticmethod
    def _normalize(pieces: list) -> list:
        out = []
        for pc in pieces:
            if out and out[-1].k == pc.k and out[-1].b == pc.b:
                continue
            out.append(pc)
        return out

    # -- basic accessors ----------------------------------------------------

    @property
    def left(self) -> FieldElem:
        return self.pieces[0].left

    @property
    def domain(self):
        return (self.left, self.right)

    def image(self):
        return (self.evaluate(self.left), self.evaluate(self.right))

    def breakpoints(self):
        """Interior breakpoints only."""
        return [pc.left for pc in self.pieces[1:]]

    def __eq__(self, other):
        if not isinstance(other, PLMap):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.right == other.right
            and self.pieces == other.pieces
        )

    def __hash__(self):
        return hash((self.pieces, self.right))

    def __repr__(self):
        return f"PLMap({len(self.pieces)} pieces on [{float(self.left):.4g}, {float(self.right):.4g}])"

    def pretty(self) -> str:
        lines = []
        for i, pc in enumerate(self.pieces):
            r = self.pieces[i + 1].left if i + 1 < len(self.pieces) else self.right
            lines.append(
                f"[{float(pc.left):.6g}, {float(r):.6g}]  x -> alpha^{pc.k} x + "
                f"({float(pc.b):.6g})"
            )
        return "\n".join(lines)

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def identity(spec: SlopeSpec, left: FieldElem, right: FieldElem) -> "PLMap":
        zero = FieldElem.of(spec, 0)
        return PLMap(spec, [Piece(left, 0, zero)], right)

    @staticmethod
    def translation(
        spec: SlopeSpec, left: FieldElem, right: FieldElem, amount: FieldElem
    ) -> "PLMap":
        return PLMap(spec, [Piece(left, 0, amount)], right)

    # -- evaluation -----------------------------------------------------------

    def _piece_index(self, x: FieldElem) -> int:
        """Rightmost piece with left <= x (left-closed convention)."""
        lo, hi = 0, len(self.pieces) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.pieces[mid].left <= x:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def evaluate(self, x: FieldElem) -> FieldElem:
        if x < self.left or x > self.right:
            raise PLMapError(f"{float(x):.6g} outside domain")
        return self.pieces[self._piece_index(x)].value_at(x)

    __call__ = evaluate

    def preimage(self, y: FieldElem) -> FieldElem:
        lo, hi = self.image()
        if y < lo or y > hi:
            raise PLMapError("value outside image")
        # locate the piece whose image interval contains y
        for i, pc in enumerate(self.pieces):
            r = self.pieces[i + 1].left if i + 1 < len(self.pieces) else self.right
            if pc.value_at(r) >= y:
                return power_alpha(self.spec, -pc.k) * (y - pc.b)
        raise PLMapError("unreachable: monotone map covers its image")

    # -- group operations ------------------------------------------------------

    def compose(self, g: "PLMap") -> "PLMap":
        """Exact self o g."""
        f = self
        if g.image() != f.domain:
            raise PLMapError("image of inner map must equal domain of outer map")
        cuts = [g.left]
        cuts.extend(g.breakpoints())
        cuts.extend(g.preimage(t) for t in f.breakpoints())
        cuts = _sorted_unique(cuts)
        pieces = []
        for s in cuts:
            pg = g.pieces[g._piece_index(s)]
            gs = pg.value_at(s)
            idx = f._piece_index(gs) if gs < f.right else len(f.pieces) - 1
            pf = f.pieces[idx]
            k = pf.k + pg.k
            b = power_alpha(f.spec, pf.k) * pg.b + pf.b
            pieces.append(Piece(s, k, b))
        return PLMap(f.spec, pieces, g.right)

    def invert(self) -> "PLMap":
        pieces = []
        for pc in self.pieces:
            left = pc.value_at(pc.left)
            inv_slope = power_alpha(self.spec, -pc.k)
            pieces.append(Piece(left, -pc.k, -(inv_slope * pc.b)))
        return PLMap(self.spec, pieces, self.evaluate(self.right))

    def restrict(self, lo: FieldElem, hi: FieldElem) -> "PLMap":
        if lo < self.left or hi > self.right or not lo < hi:
            raise PLMapError("restriction interval outside domain")
        pieces = []
        for pc in self.pieces:
            if pc.left <= lo:
                start = lo
            elif pc.left < hi:
                start = pc.left
            else:
                break
            if not pieces or pieces[-1].left < start:
                pieces.append(Piece(start, pc.k, pc.b))
            else:
                pieces[-1] = Piece(start, pc.k, pc.b)
        return PLMap(self.spec, pieces, hi)

    # -- derivative data --------------------------------------------------------

    def one_sided_derivatives(self, x: FieldElem) -> JumpValue:
        if x < self.left or x > self.right:
            raise PLMapError("point outside domain")
        left_exp = right_exp = None
        if x > self.left:
            # rightmost piece with left < x covers the left side of x
            i = self._piece_index(x)
            if self.pieces[i].left == x:
                i -= 1
            left_exp = self.pieces[i].k
        if x < self.right:
            right_exp = self.pieces[self._piece_index(x)].k
        return JumpValue(x, left_exp, right_exp, at_boundary=(None in (left_exp, right_exp)))

    def variation_log_slope(self) -> int:
        """Total variation of log-slope in units of log(alpha): sum |k_{i+1}-k_i|."""
        return sum(
            abs(self.pieces[i + 1].k - self.pieces[i].k)
            for i in range(len(self.pieces) - 1)
        )

    # -- group membership ---------------------------------------------------------

    def is_in_F_alpha(self) -> bool:
        """Whether this is an element of the PL group on [0,1] with slopes in
        <alpha> and breakpoints/intercepts in A."""
        zero = FieldElem.of(self.spec, 0)
        one = FieldElem.of(self.spec, 1)
        if self.left != zero or self.right != one:
            return False
        if self.evaluate(zero) != zero or self.evaluate(one) != one:
            return False
        return all(in_ring_A(t) for t in self.breakpoints()) and all(
            in_ring_A(pc.b) for pc in self.pieces
        )

    # -- fixed points ------------------------------------------------------------

    def fixed_points(self):
        """Fixed-point structure: (points, intervals).

        ``intervals`` are maximal closed intervals fixed pointwise.
        ``points`` are isolated fixed points plus interior endpoints of fixed
        intervals, each tagged with the derivative jump there.
        """
        spec = self.spec
        one = FieldElem.of(spec, 1)
        candidates = []
        intervals = []
        for i, pc in enumerate(self.pieces):
            right = self.pieces[i + 1].left if i + 1 < len(self.pieces) else self.right
            if pc.k == 0:
                if pc.b.is_zero():
                    intervals.append((pc.left, right))
                continue
            t = pc.b / (one - power_alpha(spec, pc.k))
            if pc.left <= t <= right:
                candidates.append(t)
        # merge adjacent fixed intervals
        merged = []
        for lo, hi in intervals:
            if merged and merged[-1][1] == lo:
                merged[-1] = (merged[-1][0], hi)
            else:
                merged.append((lo, hi))
        # interval endpoints interior to the domain are reportable points
        for lo, hi in merged:
            if lo > self.left:
                candidates.append(lo)
            if hi < self.right:
                candidates.append(hi)
        points = []
        for t in _sorted_unique(candidates):
            if any(lo < t < hi for lo, hi in merged):
                continue
            points.append((t, self.one_sided_derivatives(t)))
        return points, merged

    # -- commutation ---------------------------------------------------------------

    def commutes_with_on(self, g: "PLMap", lo: FieldElem, hi: FieldElem) -> bool:
        """Exact equality of self o g and g o self on [lo, hi]."""
        h1 = self.compose(g)
        h2 = g.compose(self)
        cuts = [lo]
        for h in (h1, h2):
            cuts.extend(t for t in h.breakpoints() if lo < t < hi)
        for s in _sorted_unique(cuts):
            p1 = h1.pieces[h1._piece_index(s)]
            p2 = h2.pieces[h2._piece_index(s)]
            if p1.k != p2.k or p1.b != p2.b:
                return False
        return True

    # -- serialization ----------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "right": self.right.to_json(),
            "pieces": [
                {"left": pc.left.to_json(), "k": pc.k, "b": pc.b.to_json()}
                for pc in self.pieces
            ],
        }

    @staticmethod
    def from_json(d: dict) -> "PLMap":
        right = FieldElem.from_json(d["right"])
        pieces = [
            Piece(FieldElem.from_json(pd["left"]), int(pd["k"]), FieldElem.from_json(pd["b"]))
            for pd in d["pieces"]
        ]
        return PLMap(right.spec, pieces, right)


def _sorted_unique(values):
    vals = sorted(values, key=functools.cmp_to_key(lambda u, v: (u - v).sign()))
    out = []
    for v in vals:
        if not out or out[-1] != v:
            out.append(v)
    return out
