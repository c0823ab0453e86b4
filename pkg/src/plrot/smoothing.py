"""Piecewise-smooth conjugators and the nonlinearity cocycle.

This is the floating-point side of the artifact: the regularity of a
conjugated circle map is an analytic property, so all quantities here carry
explicit tolerances.  Derivative jumps of the underlying PL data stay exact
(integer exponents, handled in :mod:`plrot.plmap`); everything else uses
doubles with one-sided finite differences and Richardson extrapolation.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .circledyn import CircleLift, seam_jump_exponent
from .localrotation import LocalRotation, induced_iet, verify


class SmoothingError(ValueError):
    pass


@dataclass(frozen=True)
class BreakData:
    """One-sided derivative and nonlinearity data of a map at a point."""

    point: float
    D_left: float
    D_right: float
    N_left: float
    N_right: float

    @property
    def sigma(self) -> float:
        return self.D_right / self.D_left


class PiecewiseSmoothMap:
    """Increasing piecewise-polynomial map; pieces stored in local coordinates.

    Piece i lives on [breaks[i], breaks[i+1]] and is evaluated as a polynomial
    in s = (t - breaks[i]) / h_i, which keeps the Hermite constructions well
    conditioned.
    """

    def __init__(self, breaks: Sequence[float], local_coeffs: Sequence[np.ndarray]):
        if len(breaks) != len(local_coeffs) + 1:
            raise SmoothingError("need one more breakpoint than pieces")
        self.breaks = [float(b) for b in breaks]
        self.coeffs = [np.asarray(c, dtype=float) for c in local_coeffs]
        for i in range(len(self.breaks) - 1):
            if not self.breaks[i] < self.breaks[i + 1]:
                raise SmoothingError("breakpoints must be strictly increasing")
        for i in range(len(self.coeffs) - 1):
            left = self._eval_piece(i, self.breaks[i + 1])
            right = self._eval_piece(i + 1, self.breaks[i + 1])
            if abs(left - right) > 1e-12 * max(1.0, abs(left)):
                raise SmoothingError("discontinuity at an internal breakpoint")

    # -- construction -------------------------------------------------------

    @staticmethod
    def identity(lo: float, hi: float) -> "PiecewiseSmoothMap":
        h = hi - lo
        return PiecewiseSmoothMap([lo, hi], [np.array([lo, h])])

    @staticmethod
    def from_global_cubics(
        breaks: Sequence[float], global_coeffs: Sequence[Sequence[float]]
    ) -> "PiecewiseSmoothMap":
        """Pieces given as ascending global-coordinate coefficients."""
        local = []
        for i, g in enumerate(global_coeffs):
            a, h = breaks[i], breaks[i + 1] - breaks[i]
            poly = np.polynomial.Polynomial(list(g))
            # compose with t = a + h*s
            shifted = poly(np.polynomial.Polynomial([a, h]))
            local.append(shifted.coef)
        return PiecewiseSmoothMap(breaks, local)

    # -- evaluation ----------------------------------------------------------

    def _piece_index(self, t: float) -> int:
        i = bisect.bisect_right(self.breaks, t) - 1
        return min(max(i, 0), len(self.coeffs) - 1)

    def _local(self, i: int, t: float) -> Tuple[float, float]:
        a, b = self.breaks[i], self.breaks[i + 1]
        h = b - a
        return (t - a) / h, h

    def _eval_piece(self, i: int, t: float) -> float:
        s, _ = self._local(i, t)
        return float(np.polynomial.polynomial.polyval(s, self.coeffs[i]))

    def __call__(self, t: float) -> float:
        return self._eval_piece(self._piece_index(t), t)

    def derivative(self, t: float, side: int = 0) -> float:
        """First derivative; side=-1/+1 picks the piece left/right of a break."""
        i = self._piece_index(t)
        if side < 0 and i > 0 and abs(t - self.breaks[i]) < 1e-15:
            i -= 1
        s, h = self._local(i, t)
        d = np.polynomial.polynomial.polyder(self.coeffs[i])
        return float(np.polynomial.polynomial.polyval(s, d)) / h

    def second_derivative(self, t: float, side: int = 0) -> float:
        i = self._piece_index(t)
        if side < 0 and i > 0 and abs(t - self.breaks[i]) < 1e-15:
            i -= 1
        s, h = self._local(i, t)
        d2 = np.polynomial.polynomial.polyder(self.coeffs[i], 2)
        return float(np.polynomial.polynomial.polyval(s, d2)) / (h * h)

    def inverse(self, y: float, tol: float = 1e-14) -> float:
        lo, hi = self.breaks[0], self.breaks[-1]
        flo, fhi = self(lo), self(hi)
        if not flo - tol <= y <= fhi + tol:
            raise SmoothingError("value outside image")
        a, b = lo, hi
        for _ in range(200):
            mid = 0.5 * (a + b)
            if self(mid) < y:
                a = mid
            else:
                b = mid
            if b - a < tol:
                break
        return 0.5 * (a + b)

    def is_increasing(self, samples_per_piece: int = 400) -> bool:
        for i in range(len(self.coeffs)):
            a, b = self.breaks[i], self.breaks[i + 1]
            ts = np.linspace(a, b, samples_per_piece)
            d = np.polynomial.polynomial.polyval(
                (ts - a) / (b - a), np.polynomial.polynomial.polyder(self.coeffs[i])
            ) / (b - a)
            if np.min(d) <= 0:
                return False
        return True


# -- nonlinearity ------------------------------------------------------------


def nonlinearity(h: PiecewiseSmoothMap, t: float, side: int = 0) -> float:
    """D^2 h / D h from the piece coefficients (one-sided at breakpoints)."""
    d = h.derivative(t, side)
    if d == 0:
        raise SmoothingError("vanishing derivative")
    return h.second_derivative(t, side) / d


def check_cocycle(
    h1: PiecewiseSmoothMap,
    h2: PiecewiseSmoothMap,
    samples: int = 200,
    step: float = 1e-4,
) -> float:
    """Max residual of N(h1 o h2) = N(h1) o h2 * Dh2 + N(h2) over interior samples.

    The composite's derivative data comes from central finite differences with
    Richardson extrapolation; sample points keep clear of breakpoints.
    """
    lo, hi = h2.breaks[0], h2.breaks[-1]
    margin = 20 * step
    bad = set(h2.breaks)
    for c in h1.breaks:
        try:
            bad.add(h2.inverse(min(max(c, h2(lo)), h2(hi))))
        except SmoothingError:
            pass
    worst = 0.0
    n = 0
    t = lo + margin
    dt = (hi - lo - 2 * margin) / samples
    while n < samples:
        if all(abs(t - b) > margin for b in bad):
            comp = lambda u: h1(h2(u))
            n_comp = _fd_nonlinearity(comp, t, step)
            rhs = nonlinearity(h1, h2(t)) * h2.derivative(t) + nonlinearity(h2, t)
            worst = max(worst, abs(n_comp - rhs))
            n += 1
        t += dt
        if t >= hi - margin:
            break
    return worst


def _fd_derivative(fn: Callable[[float], float], t: float, h: float) -> float:
    d1 = (fn(t + h) - fn(t - h)) / (2 * h)
    d2 = (fn(t + h / 2) - fn(t - h / 2)) / h
    return (4 * d2 - d1) / 3


def _fd_second(fn: Callable[[float], float], t: float, h: float) -> float:
    s1 = (fn(t + h) - 2 * fn(t) + fn(t - h)) / (h * h)
    s2 = (fn(t + h / 2) - 2 * fn(t) + fn(t - h / 2)) / (h * h / 4)
    return (4 * s2 - s1) / 3

def _fd_nonlinearity(fn: Callable[[float], float], t: float, h: float) -> float:
    return _fd_second(fn, t, h) / _fd_derivative(fn, t, h)


def _fd_one_sided_derivative(
    fn: Callable[[float], float], t: float, h: float, direction: int
) -> float:
    """Second-order one-sided derivative with Richardson over h and h/2."""

    def d(hh: float) -> float:
        s = direction * hh
        return (-3 * fn(t) + 4 * fn(t + s) - fn(t + 2 * s)) / (2 * s)

    return (4 * d(h / 2) - d(h)) / 3


def _fd_one_sided_nonlinearity(
    fn: Callable[[float], float], t: float, h: float, direction: int
) -> float:
    """One-sided D log D via one-sided differences of log of one-sided slopes."""

    def logd(offset: float) -> float:
        return math.log(_fd_one_sided_derivative(fn, t + direction * offset, h / 4, direction))

    return direction * (-3 * logd(0) + 4 * logd(h) - logd(2 * h)) / (2 * h)


# -- jump bookkeeping for local rotations ---------------------------------------


def jump_product(L: LocalRotation, checked: bool = True) -> int:
    """Exponent of sigma(T)(seam) * sigma(T)(y) for the induced circle map.

    Zero exactly when the commutation window conditions hold.
    """
    if checked and not verify(L).all_ok:
        raise SmoothingError("local rotation fails verification")
    T = induced_iet(L, checked=checked)
    w_inv = (L.z - L.x).inv()
    u_y = (L.y - L.x) * w_inv
    interior = T.base.one_sided_derivatives(u_y)
    return seam_jump_exponent(T) + interior.sigma_exponent


def jump_product_raw(L: LocalRotation) -> int:
    """Same exponent computed directly from f and g, without verification.

    sigma(T)(seam) = D+f(x) / D-g(z), sigma(T)(y) = D+g(y) / D-f(y).
    """
    f, g = L.f, L.g
    seam = (
        f.one_sided_derivatives(L.x).right_exponent
        - g.one_sided_derivatives(L.z).left_exponent
    )
    at_y = (
        g.one_sided_derivatives(L.y).right_exponent
        - f.one_sided_derivatives(L.y).left_exponent
    )
    return seam + at_y


# -- the C^2 linear system -------------------------------------------------------


@dataclass
class C2Solution:
    consistent: bool
    N_minus: Optional[float]
    N_plus: Optional[float]
    rhs_from_seam: float
    rhs_from_y: float

    def to_json(self) -> dict:
        return {
            "consistent": self.consistent,
            "N_minus": self.N_minus,
            "N_plus": self.N_plus,
            "rhs_from_seam": self.rhs_from_seam,
            "rhs_from_y": self.rhs_from_y,
        }


def solve_c2_system(
    seam_data: BreakData, y_data: BreakData, tol: float = 1e-9
) -> C2Solution:
    """Solve for the conjugator's one-sided nonlinearities at the seam.

    Both equations share the left side D-T(y) N- - D+T(y) N+; they are
    simultaneously solvable iff the two right sides agree, in which case the
    solution set is a line and the representative with N+ = 0 is returned.
    """
    if seam_data.D_left <= 0 or seam_data.D_right <= 0:
        raise SmoothingError("derivatives at the seam must be positive")
    if y_data.D_left <= 0 or y_data.D_right <= 0:
        raise SmoothingError("derivatives at y must be positive")
    rhs1 = y_data.D_left * seam_data.N_left - y_data.D_right * seam_data.N_right
    rhs2 = -y_data.N_left + y_data.N_right
    scale = max(1.0, abs(rhs1), abs(rhs2))
    if abs(rhs1 - rhs2) > tol * scale:
        return C2Solution(False, None, None, rhs1, rhs2)
    n_minus = rhs1 / y_data.D_left
    return C2Solution(True, n_minus, 0.0, rhs1, rhs2)


def _hermite_with_second(
    a: float,
    b: float,
    va: float,
    vb: float,
    ma: float,
    mb: float,
    d2: float,
    d2_side: str,
) -> np.ndarray:
    """Local quartic with prescribed values, end slopes, and one end second
    derivative (in global units)."""
    h = b - a
    # local poly P(s), s in [0,1]: value va..vb, slopes m*h, second derivative d2*h^2
    rows = []
    rhs = []
    basis = 5

    def eval_row(s: float, order: int) -> List[float]:
        row = []
        for k in range(basis):
            if order == 0:
                row.append(s**k)
            elif order == 1:
                row.append(k * s ** (k - 1) if k >= 1 else 0.0)
            else:
                row.append(k * (k - 1) * s ** (k - 2) if k >= 2 else 0.0)
        return row

    rows.append(eval_row(0.0, 0)); rhs.append(va)
    rows.append(eval_row(1.0, 0)); rhs.append(vb)
    rows.append(eval_row(0.0, 1)); rhs.append(ma * h)
    rows.append(eval_row(1.0, 1)); rhs.append(mb * h)
    s2 = 0.0 if d2_side == "left" else 1.0
    rows.append(eval_row(s2, 2)); rhs.append(d2 * h * h)
    coef = np.linalg.solve(np.array(rows), np.array(rhs))
    return coef


def build_phi(
    x_tilde: float,
    y_tilde: float,
    z_tilde: float,
    sigma_target: float,
    n_solution: Tuple[float, float],
    mid_slope: float = 1.0,
) -> PiecewiseSmoothMap:
    """Conjugator phi fixing x, y, z with endpoint derivative ratio
    D+phi(x)/D-phi(z) = sigma_target and one-sided nonlinearities at the seam
    equal to the solved pair (N-, N+).

    Endpoint slopes are balanced as sqrt(sigma) and 1/sqrt(sigma); extreme
    ratios make a monotone two-piece polynomial impossible and are rejected.
    """
    if sigma_target <= 0:
        raise SmoothingError("sigma target must be positive")
    n_minus, n_plus = n_solution
    d_x = math.sqrt(sigma_target)
    d_z = 1.0 / math.sqrt(sigma_target)
    p1 = _hermite_with_second(
        x_tilde, y_tilde, x_tilde, y_tilde, d_x, mid_slope, n_plus * d_x, "left"
    )
    p2 = _hermite_with_second(
        y_tilde, z_tilde, y_tilde, z_tilde, mid_slope, d_z, n_minus * d_z, "right"
    )
    phi = PiecewiseSmoothMap([x_tilde, y_tilde, z_tilde], [p1, p2])
    if not phi.is_increasing():
        raise SmoothingError(
            "monotonicity unattainable with two polynomial pieces for this data"
        )
    return phi


# -- conjugate regularity verification ----------------------------------------------


@dataclass
class RegularityReport:
    order: int
    tol: float
    seam_gap: float
    interior_gap: float

    @property
    def passed(self) -> bool:
        return self.seam_gap <= self.tol and self.interior_gap <= self.tol

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "tol": self.tol,
            "seam_gap": self.seam_gap,
            "interior_gap": self.interior_gap,
            "passed": self.passed,
        }


def _lift_as_float(T: CircleLift) -> Callable[[float], float]:
    base = T.base
    lefts = [float(pc.left) for pc in base.pieces]
    slopes = [float(T.spec.alpha_float() ** pc.k) for pc in base.pieces]
    icepts = [float(pc.b) for pc in base.pieces]

    def fn(t: float) -> float:
        n = math.floor(t)
        u = t - n
        i = min(max(bisect.bisect_right(lefts, u) - 1, 0), len(lefts) - 1)
        return slopes[i] * u + icepts[i] + n

    return fn


def verify_conjugate_regularity(
    phi: PiecewiseSmoothMap,
    T: CircleLift,
    order: int = 1,
    tol: float = 1e-6,
    interior_break: float = None,
    step: float = 1e-4,
) -> RegularityReport:
    """Numerically check that phi T phi^-1 has no derivative (order 1) or
    nonlinearity (order 2) break at the images of the seam and the interior
    breakpoint.

    phi must be a homeomorphism of the rescaled fundamental domain [0, 1]
    fixing both endpoints; T is given as an exact lift and evaluated in
    doubles.
    """
    if abs(phi.breaks[0]) > 1e-12 or abs(phi.breaks[-1] - 1.0) > 1e-12:
        raise SmoothingError("phi must be normalized to [0, 1]")
    if order not in (1, 2):
        raise SmoothingError("order must be 1 or 2")
    t_fn = _lift_as_float(T)
    if interior_break is None:
        interior_break = float(phi.breaks[1]) if len(phi.breaks) > 2 else 0.5

    def psi(t: float) -> float:
        n = math.floor(t)
        u = t - n
        w = t_fn(phi.inverse(u))
        m = math.floor(w)
        frac = w - m
        return phi(frac) + m + n

    if order == 1:
        d_plus_seam = _fd_one_sided_derivative(psi, 0.0, step, +1)
        d_minus_seam = _fd_one_sided_derivative(psi, 1.0, step, -1)
        seam_gap = abs(d_plus_seam / d_minus_seam - 1.0)
        d_plus = _fd_one_sided_derivative(psi, interior_break, step, +1)
        d_minus = _fd_one_sided_derivative(psi, interior_break, step, -1)
        interior_gap = abs(d_plus / d_minus - 1.0)
    else:
        n_plus_seam = _fd_one_sided_nonlinearity(psi, 0.0, step, +1)
        n_minus_seam = _fd_one_sided_nonlinearity(psi, 1.0, step, -1)
        seam_gap = abs(n_plus_seam - n_minus_seam)
        n_plus = _fd_one_sided_nonlinearity(psi, interior_break, step, +1)
        n_minus = _fd_one_sided_nonlinearity(psi, interior_break, step, -1)
        interior_gap = abs(n_plus - n_minus)
    return RegularityReport(order=order, tol=tol, seam_gap=seam_gap, interior_gap=interior_gap)
