import math
import random

import numpy as np
import pytest

from plrot import localrotation, smoothing
from plrot.exactfield import make_alpha
from plrot.smoothing import (
    BreakData,
    PiecewiseSmoothMap,
    SmoothingError,
    build_phi,
    check_cocycle,
    jump_product,
    jump_product_raw,
    nonlinearity,
    solve_c2_system,
    verify_conjugate_regularity,
)


def cubic(coeffs, lo=0.0, hi=1.0):
    return PiecewiseSmoothMap.from_global_cubics([lo, hi], [coeffs])


def test_eval_matches_global_polynomial():
    h = cubic([0.0, 0.5, 0.3, 0.2])
    for t in np.linspace(0, 1, 17):
        expected = 0.5 * t + 0.3 * t**2 + 0.2 * t**3
        assert abs(h(float(t)) - expected) < 1e-12


def test_derivatives_match_calculus():
    h = cubic([0.0, 0.5, 0.3, 0.2])
    for t in (0.1, 0.35, 0.8):
        assert abs(h.derivative(t) - (0.5 + 0.6 * t + 0.6 * t**2)) < 1e-10
        assert abs(h.second_derivative(t) - (0.6 + 1.2 * t)) < 1e-10
        n = nonlinearity(h, t)
        expected = (0.6 + 1.2 * t) / (0.5 + 0.6 * t + 0.6 * t**2)
        assert abs(n - expected) < 1e-10


def test_validation():
    with pytest.raises(SmoothingError):
        PiecewiseSmoothMap([0.0, 1.0], [])
    with pytest.raises(SmoothingError):
        PiecewiseSmoothMap([0.0, 0.5, 1.0], [np.array([0.0, 0.5]), np.array([9.0, 0.5])])


def test_inverse():
    h = cubic([0.0, 0.2, 0.0, 0.8])
    for y in (0.05, 0.3, 0.77):
        t = h.inverse(y)
        assert abs(h(t) - y) < 1e-10
    with pytest.raises(SmoothingError):
        h.inverse(2.0)


def test_is_increasing():
    assert cubic([0.0, 1.0, 0.0, 0.0]).is_increasing()
    assert not cubic([0.0, -1.0, 3.0, -1.0]).is_increasing()


def test_fd_oracles_on_smooth_function():
    """One-sided FD with Richardson reproduces known derivatives of sin."""
    d = smoothing._fd_one_sided_derivative(math.sin, 0.7, 1e-4, +1)
    assert abs(d - math.cos(0.7)) < 1e-8
    d = smoothing._fd_one_sided_derivative(math.sin, 0.7, 1e-4, -1)
    assert abs(d - math.cos(0.7)) < 1e-8
    # nonlinearity of exp is identically 1
    n = smoothing._fd_one_sided_nonlinearity(math.exp, 0.3, 1e-4, +1)
    assert abs(n - 1.0) < 1e-5


def test_cocycle_identity_random_cubics():
    rng = random.Random(13)

    def monotone(rngen):
        while True:
            c2 = rngen.uniform(-1.0, 1.0)
            c3 = rngen.uniform(-1.0, 1.0)
            h = cubic([0.0, 1.0 - c2 - c3, c2, c3])
            if h.is_increasing():
                return h

    for _ in range(5):
        h1, h2 = monotone(rng), monotone(rng)
        assert check_cocycle(h1, h2) < 1e-6


def test_jump_product_zero_for_local_rotation():
    spec = make_alpha(1, 1)
    L = localrotation.construct(spec)
    assert jump_product(L) == 0
    assert jump_product_raw(L) == 0


def test_solve_c2_system():
    seam = BreakData(0.0, 1.0, 2.0, 0.0, 0.0)
    ydat = BreakData(0.5, 1.5, 1.5, 0.0, 0.0)
    sol = solve_c2_system(seam, ydat)
    assert sol.consistent and sol.N_minus == 0.0 and sol.N_plus == 0.0
    # inconsistent right sides
    seam2 = BreakData(0.0, 1.0, 1.0, 0.3, 0.0)
    ydat2 = BreakData(0.5, 1.0, 1.0, 0.0, 0.0)
    sol2 = solve_c2_system(seam2, ydat2)
    assert not sol2.consistent
    with pytest.raises(SmoothingError):
        solve_c2_system(BreakData(0.0, -1.0, 1.0, 0.0, 0.0), ydat)


def test_build_phi_identity_case():
    phi = build_phi(0.0, 0.618, 1.0, 1.0, (0.0, 0.0))
    for t in np.linspace(0, 1, 21):
        assert abs(phi(float(t)) - float(t)) < 1e-9


def test_build_phi_fixes_data():
    phi = build_phi(0.0, 0.6, 1.0, 1.2, (0.0, 0.0))
    assert abs(phi(0.0)) < 1e-12
    assert abs(phi(0.6) - 0.6) < 1e-12
    assert abs(phi(1.0) - 1.0) < 1e-12
    assert abs(phi.derivative(0.0, +1) - math.sqrt(1.2)) < 1e-9
    assert abs(phi.derivative(1.0, -1) - 1 / math.sqrt(1.2)) < 1e-9
    assert phi.is_increasing()


def test_build_phi_rejects_extreme_sigma():
    with pytest.raises(SmoothingError):
        build_phi(0.0, 0.618, 1.0, 1e6, (0.0, 0.0))
    with pytest.raises(SmoothingError):
        build_phi(0.0, 0.618, 1.0, -1.0, (0.0, 0.0))


def test_verify_conjugate_regularity_golden():
    spec = make_alpha(1, 1)
    L = localrotation.construct(spec)
    T = localrotation.induced_iet(L)
    y_tilde = float((L.y - L.x) / (L.z - L.x))
    phi = build_phi(0.0, y_tilde, 1.0, 1.0, (0.0, 0.0))
    rep = verify_conjugate_regularity(phi, T, order=1, tol=1e-6)
    assert rep.passed
    rep2 = verify_conjugate_regularity(phi, T, order=2, tol=1e-4)
    assert rep2.passed
    # perturbed endpoint derivative ratio must fail order 1
    phi_bad = build_phi(0.0, y_tilde, 1.0, 1.01, (0.0, 0.0))
    rep_bad = verify_conjugate_regularity(phi_bad, T, order=1, tol=1e-6)
    assert not rep_bad.passed
    assert max(rep_bad.seam_gap, rep_bad.interior_gap) > 1e-3


def test_break_data_sigma():
    bd = BreakData(0.0, 2.0, 1.0, 0.0, 0.0)
    assert bd.sigma == 0.5
