"""Local rotations (y; f, g) inside the PL group on [0, 1].

The pair acts as exact translations by beta1 and -beta2 on windows around y,
with beta2/beta1 = alpha, so the induced two-interval exchange on
[g(y), f(y)] is affinely a rigid rotation of angle beta = 1/(1 + alpha).
The construction realizes the translation tails with the box realizer and
glues the three parts into group elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import bieristrebel
from .circledyn import CircleLift
from .exactfield import FieldElem, SlopeSpec, in_ring_A, power_alpha
from .plmap import Piece, PLMap


class LocalRotationError(ValueError):
    pass


@dataclass(frozen=True)
class LocalRotation:
    y: FieldElem
    f: PLMap
    g: PLMap
    x: FieldElem
    z: FieldElem
    epsilon: FieldElem
    beta: FieldElem
    k: int

    def to_json(self) -> dict:
        return {
            "y": self.y.to_json(),
            "f": self.f.to_json(),
            "g": self.g.to_json(),
            "x": self.x.to_json(),
            "z": self.z.to_json(),
            "epsilon": self.epsilon.to_json(),
            "beta": self.beta.to_json(),
            "k": self.k,
        }

    @staticmethod
    def from_json(d: dict) -> "LocalRotation":
        return LocalRotation(
            y=FieldElem.from_json(d["y"]),
            f=PLMap.from_json(d["f"]),
            g=PLMap.from_json(d["g"]),
            x=FieldElem.from_json(d["x"]),
            z=FieldElem.from_json(d["z"]),
            epsilon=FieldElem.from_json(d["epsilon"]),
            beta=FieldElem.from_json(d["beta"]),
            k=int(d["k"]),
        )


@dataclass
class VerificationReport:
    ordering_ok: bool  # g(y) < y < f(y)
    commutation_ok: bool  # gf(y) = fg(y)
    translation_windows_ok: bool  # Df = 1 near [x, y], Dg = 1 near [y, z]
    angle_ok: bool  # (fg(y) - x)/(z - x) = beta mod 1
    membership_ok: bool  # f, g in the group on [0, 1]
    angle: Optional[FieldElem] = None

    @property
    def all_ok(self) -> bool:
        return (
            self.ordering_ok
            and self.commutation_ok
            and self.translation_windows_ok
            and self.angle_ok
            and self.membership_ok
        )

    def to_json(self) -> dict:
        return {
            "ordering_ok": self.ordering_ok,
            "commutation_ok": self.commutation_ok,
            "translation_windows_ok": self.translation_windows_ok,
            "angle_ok": self.angle_ok,
            "membership_ok": self.membership_ok,
            "angle_approx": float(self.angle) if self.angle is not None else None,
            "all_ok": self.all_ok,
        }


def _translation_element(
    spec: SlopeSpec, lo: FieldElem, hi: FieldElem, amount: FieldElem
) -> PLMap:
    """Element of the group on [0,1] translating by ``amount`` on (lo, hi).

    Built exactly as a three-part glue: a realized map [0, lo] -> [0, lo+amount],
    the translation itself, and a realized map [hi, 1] -> [hi+amount, 1].
    """
    zero = FieldElem.of(spec, 0)
    one = FieldElem.of(spec, 1)
    head, _ = bieristrebel.realize(zero, lo, zero, lo + amount)
    tail, _ = bieristrebel.realize(hi, one, hi + amount, one)
    return bieristrebel.glue(
        [((zero, lo), head), ((lo, hi), amount), ((hi, one), tail)]
    )


def construct(spec: SlopeSpec, y: Optional[FieldElem] = None) -> LocalRotation:
    """Build a local rotation of angle 1/(1 + alpha) around y (default frac(alpha))."""
    one = FieldElem.of(spec, 1)
    zero = FieldElem.of(spec, 0)
    if y is None:
        y = FieldElem.alpha(spec).frac()
    else:
        if not in_ring_A(y):
            raise LocalRotationError("y must lie in the ring A")
        if not (zero < y < one):
            raise LocalRotationError("y must lie in (0, 1)")

    am1 = FieldElem.of(spec, -1, 1)  # alpha - 1
    k = 0
    while True:
        beta2 = am1 * power_alpha(spec, -k)
        beta1 = am1 * power_alpha(spec, -k - 1)
        if zero < y - beta2 and y + beta1 < one:
            break
        k += 1
        if k > 4096:
            raise LocalRotationError("no window exponent found (unreachable)")

    x = y - beta2
    z = y + beta1

    # epsilon: the largest power alpha^(-j) keeping x - eps > 0 and z + eps < 1
    j = 0
    while True:
        eps = power_alpha(spec, -j)
        if x - eps > zero and z + eps < one:
            break
        j += 1
        if j > 4096:
            raise LocalRotationError("no epsilon found (unreachable)")

    f = _translation_element(spec, x - eps, y + eps, beta1)
    g = _translation_element(spec, y - eps, z + eps, -beta2)
    beta = beta1 / (beta1 + beta2)
    return LocalRotation(y=y, f=f, g=g, x=x, z=z, epsilon=eps, beta=beta, k=k)


def _slope_one_on(f: PLMap, lo: FieldElem, hi: FieldElem) -> bool:
    """Whether every piece of f overlapping the open interval (lo, hi) has slope 1."""
    for i, pc in enumerate(f.pieces):
        right = f.pieces[i + 1].left if i + 1 < len(f.pieces) else f.right
        if pc.left < hi and right > lo and pc.k != 0:
            return False
    return True


def verify(L: LocalRotation) -> VerificationReport:
    """Exact check of the four defining conditions, plus group membership."""
    f, g, y = L.f, L.g, L.y
    x, z, eps = L.x, L.z, L.epsilon
    gy = g.evaluate(y)
    fy = f.evaluate(y)
    ordering_ok = gy == x and fy == z and x < y < z
    commutation_ok = f.evaluate(g.evaluate(y)) == g.evaluate(f.evaluate(y))
    windows_ok = _slope_one_on(f, x - eps, y + eps) and _slope_one_on(
        g, y - eps, z + eps
    )
    ratio = (f.evaluate(g.evaluate(y)) - x) / (z - x)
    angle = ratio.frac()
    angle_ok = angle == L.beta.frac()
    membership_ok = f.is_in_F_alpha() and g.is_in_F_alpha()
    return VerificationReport(
        ordering_ok=ordering_ok,
        commutation_ok=commutation_ok,
        translation_windows_ok=windows_ok,
        angle_ok=angle_ok,
        membership_ok=membership_ok,
        angle=angle,
    )


def induced_iet(L: LocalRotation, checked: bool = True) -> CircleLift:
    """The circle map induced by (f on [x,y], g on (y,z]), rescaled to [0,1).

    The affine rescaling maps [x, z] onto [0, 1]; the g-branch is lifted by +1
    so the result is a continuous degree-one lift.
    """
    if checked and not verify(L).all_ok:
        raise LocalRotationError("local rotation fails verification")
    spec = L.y.spec
    w = L.z - L.x
    w_inv = w.inv()

    def rescaled(branch: PLMap, lo: FieldElem, hi: FieldElem, lift_by: int):
        pieces = []
        seg = branch.restrict(lo, hi)
        for pc in seg.pieces:
            new_left = (pc.left - L.x) * w_inv
            new_b = (power_alpha(spec, pc.k) * L.x + pc.b - L.x) * w_inv + lift_by
            pieces.append(Piece(new_left, pc.k, new_b))
        return pieces

    pieces = rescaled(L.f, L.x, L.y, 0) + rescaled(L.g, L.y, L.z, 1)
    base = PLMap(spec, pieces, FieldElem.of(spec, 1))
    return CircleLift(base)


def construct_pinned_element(
    spec: SlopeSpec, lo: FieldElem, hi: FieldElem
) -> PLMap:
    """Element of the group on [0,1], identity outside a subinterval of
    (lo, hi), with exactly two fixed points in (lo, hi), both with a
    derivative jump there.

    The non-identity part expands a leading subinterval by alpha and contracts
    the next one back, a zero-defect two-move plan.
    """
    if not (in_ring_A(lo) and in_ring_A(hi)):
        raise LocalRotationError("interval endpoints must lie in A")
    zero = FieldElem.of(spec, 0)
    one = FieldElem.of(spec, 1)
    if not (zero < lo < hi < one):
        raise LocalRotationError("interval must be strictly inside (0, 1)")

    # find j with s = lo + alpha^j and support width alpha^j * (1 + alpha)
    # fitting strictly inside (lo, hi)
    width = hi - lo
    two_plus_alpha = FieldElem.of(spec, 2, 1)
    j = 0
    while not power_alpha(spec, j) * two_plus_alpha < width:
        j -= 1
        if j < bieristrebel.DEFAULT_EXPONENT_FLOOR:
            raise LocalRotationError("interval too short for the exponent floor")

    s = lo + power_alpha(spec, j)
    mid = s + power_alpha(spec, j)
    u = mid + power_alpha(spec, j + 1)
    # on [s, u]: slope alpha on [s, mid], slope 1/alpha on [mid, u]
    inner = PLMap(
        spec,
        [
            Piece(s, 1, s - power_alpha(spec, 1) * s),
            Piece(mid, -1, (s + power_alpha(spec, j + 1)) - power_alpha(spec, -1) * mid),
        ],
        u,
    )
    h = bieristrebel.glue(
        [
            ((zero, s), PLMap.identity(spec, zero, s)),
            ((s, u), inner),
            ((u, one), PLMap.identity(spec, u, one)),
        ]
    )
    assert h.is_in_F_alpha()
    points, _ = h.fixed_points()
    inner_points = [(t, jv) for t, jv in points if lo < t < hi]
    assert len(inner_points) == 2
    assert all(jv.sigma_exponent != 0 for _, jv in inner_points)
    return h
