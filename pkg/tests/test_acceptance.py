"""Acceptance suite: one test per criterion, with runtime budgets.

Each test prints a single pass/fail line (run pytest with -s or check the
captured output) and asserts both correctness and the runtime bound.
"""

import time

import pytest

from plrot import acceptance


def _run(idx: int, budget: float) -> None:
    name, fn = acceptance.CRITERIA[idx - 1]
    t0 = time.perf_counter()
    ok, msg = fn()
    dt = time.perf_counter() - t0
    print(f"criterion {idx} ({name}): {'PASS' if ok else 'FAIL'} [{dt:.2f}s] - {msg}")
    assert ok, msg
    assert dt < budget, f"criterion {idx} took {dt:.2f}s (budget {budget}s)"


def test_criterion_1_golden_local_rotation():
    """All four local-rotation conditions exact for the golden ratio; < 1 s."""
    _run(1, 1.0)


def test_criterion_2_other_slopes():
    """Same for p=2,q=1 and p=3,q=1; < 1 s each (2 s combined)."""
    _run(2, 2.0)


def test_criterion_3_induced_rigid_rotation():
    """Induced circle map is exactly the rigid rotation; jump product 1; < 1 s."""
    _run(3, 1.0)


def test_criterion_4_rotation_number_engine():
    """CF digits [0; 2, 1 x 10] to depth 12 and orbit estimate within 1e-4; < 10 s."""
    _run(4, 10.0)


def test_criterion_5_realizer_grid():
    """Exhaustive golden box grid realizes; defect-1 rejection for p=2; < 60 s."""
    _run(5, 60.0)


def test_criterion_6_pinned_element():
    """Two jump fixed points, exact; < 1 s."""
    _run(6, 1.0)


def test_criterion_7_diophantine_suite():
    """CF periods, PSL(2,Z) tails, witness in (0.44, 0.45) = brute force; < 30 s."""
    _run(7, 30.0)


def test_criterion_8_smoothing_suite():
    """Cocycle residual <= 1e-6, C^2 solution (0,0), regularity pass/fail; < 10 s."""
    _run(8, 10.0)


def test_criterion_9_group_laws():
    """10^4 exact composition/inversion/jump-cocycle checks; < 30 s."""
    _run(9, 30.0)
