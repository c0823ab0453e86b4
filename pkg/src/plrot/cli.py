"""Command-line front end.

Subcommands: alpha, bieri-strebel, local-rotation, rot-number, cf, smooth,
selftest.  Machine-readable output via --json (schema versioned); diagnostics
go to stderr.  Exit codes: 0 success, 1 failed verification, 2 usage or parse
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

from . import acceptance, bieristrebel, circledyn, diophantine, localrotation, smoothing
from .exactfield import (
    FieldElem,
    FieldError,
    SlopeSpec,
    ideal_modulus,
    make_alpha,
)
from .localrotation import LocalRotation
from .plmap import PLMap

SCHEMA = 1


class CLIError(Exception):
    """Bad input detected after argparse (still a usage error, exit 2)."""


def _parse_field_elem(spec: SlopeSpec, text: str) -> FieldElem:
    """Parse 'a,b' (rationals) as the element a + b*alpha."""
    parts = text.split(",")
    if len(parts) not in (1, 2):
        raise CLIError(f"cannot parse field element {text!r}; expected 'a,b'")
    try:
        a = Fraction(parts[0])
        b = Fraction(parts[1]) if len(parts) == 2 else Fraction(0)
    except (ValueError, ZeroDivisionError) as exc:
        raise CLIError(f"cannot parse field element {text!r}: {exc}")
    return FieldElem.of(spec, a, b)


def _emit(args, payload: dict, human: str) -> None:
    if getattr(args, "json", False):
        payload = {"schema": SCHEMA, **payload}
        print(json.dumps(payload, indent=2))
    else:
        print(human)


def _spec_from_args(args) -> SlopeSpec:
    try:
        return make_alpha(args.p, args.q)
    except FieldError as exc:
        raise CLIError(str(exc))


def _load_json_input(args) -> dict:
    try:
        if getattr(args, "infile", None):
            with open(args.infile) as fh:
                return json.load(fh)
        return json.load(sys.stdin)
    except (OSError, json.JSONDecodeError) as exc:
        raise CLIError(f"cannot read JSON input: {exc}")


# -- subcommands ---------------------------------------------------------------


def cmd_alpha(args) -> int:
    spec = _spec_from_args(args)
    alpha = FieldElem.alpha(spec)
    cf = diophantine.cf_expand(diophantine.surd_of(alpha))
    payload = {
        "command": "alpha",
        "p": spec.p,
        "q": spec.q,
        "discriminant": spec.discriminant,
        "unit_case": spec.unit_case,
        "ideal_modulus": ideal_modulus(spec),
        "alpha": alpha.to_json(),
        "alpha_inverse": alpha.inv().to_json(),
        "cf": cf.to_json(),
    }
    human = (
        f"alpha = ({spec.p} + sqrt({spec.discriminant}))/2 ~ {float(alpha):.12g}\n"
        f"relation: alpha^2 = {spec.p} alpha + {spec.q}\n"
        f"unit case: {spec.unit_case}   quotient modulus |p+q-1| = {ideal_modulus(spec)}\n"
        f"1/alpha ~ {float(alpha.inv()):.12g}\n"
        f"continued fraction: preperiod {list(cf.preperiod)}, period {list(cf.period)}"
    )
    _emit(args, payload, human)
    return 0


def cmd_bieri_strebel(args) -> int:
    spec = _spec_from_args(args)
    a = _parse_field_elem(spec, args.a)
    c = _parse_field_elem(spec, args.c)
    a2 = _parse_field_elem(spec, args.a2)
    c2 = _parse_field_elem(spec, args.c2)
    if args.action == "check":
        try:
            ok = bieristrebel.check(a, c, a2, c2)
        except bieristrebel.RealizeError as exc:
            raise CLIError(str(exc))
        _emit(
            args,
            {"command": "bieri-strebel check", "realizable": ok},
            f"realizable: {ok}",
        )
        return 0 if ok else 1
    try:
        f, plan = bieristrebel.realize(a, c, a2, c2)
    except bieristrebel.RealizeError as exc:
        _emit(
            args,
            {"command": "bieri-strebel realize", "realizable": False, "error": str(exc)},
            f"not realizable: {exc}",
        )
        return 1
    payload = {
        "command": "bieri-strebel realize",
        "realizable": True,
        "plan": plan.to_json(),
        "map": f.to_json(),
    }
    _emit(args, payload, f"realized with {len(f.pieces)} pieces:\n{f.pretty()}")
    return 0


def cmd_local_rotation(args) -> int:
    if args.action == "build":
        spec = _spec_from_args(args)
        y = _parse_field_elem(spec, args.y) if args.y else None
        try:
            L = localrotation.construct(spec, y)
        except localrotation.LocalRotationError as exc:
            raise CLIError(str(exc))
        payload = {"command": "local-rotation build", "local_rotation": L.to_json()}
        human = (
            f"local rotation around y ~ {float(L.y):.9g}\n"
            f"x ~ {float(L.x):.9g}  z ~ {float(L.z):.9g}  eps ~ {float(L.epsilon):.9g}\n"
            f"angle beta = 1/(1+alpha) ~ {float(L.beta):.12g}\n"
            f"f: {len(L.f.pieces)} pieces, g: {len(L.g.pieces)} pieces"
        )
        _emit(args, payload, human)
        return 0
    # verify
    data = _load_json_input(args)
    if "local_rotation" in data:
        data = data["local_rotation"]
    try:
        L = LocalRotation.from_json(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise CLIError(f"malformed local rotation JSON: {exc}")
    rep = localrotation.verify(L)
    n_pass = sum(
        [
            rep.ordering_ok,
            rep.commutation_ok,
            rep.translation_windows_ok,
            rep.angle_ok,
        ]
    )
    human = (
        f"ordering: {'pass' if rep.ordering_ok else 'FAIL'}\n"
        f"commutation: {'pass' if rep.commutation_ok else 'FAIL'}\n"
        f"translation windows: {'pass' if rep.translation_windows_ok else 'FAIL'}\n"
        f"angle: {'pass' if rep.angle_ok else 'FAIL'}\n"
        f"group membership: {'pass' if rep.membership_ok else 'FAIL'}\n"
        f"{n_pass}/4 defining conditions pass"
    )
    _emit(args, {"command": "local-rotation verify", "report": rep.to_json()}, human)
    return 0 if rep.all_ok else 1


def _load_lift(args) -> circledyn.CircleLift:
    if args.p is not None and args.q is not None:
        spec = make_alpha(args.p, args.q)
        L = localrotation.construct(spec)
        return localrotation.induced_iet(L)
    data = _load_json_input(args)
    if "map" in data:
        data = data["map"]
    try:
        base = PLMap.from_json(data)
        return circledyn.CircleLift(base)
    except (KeyError, ValueError, TypeError, circledyn.CircleError) as exc:
        raise CLIError(f"input is not a valid circle lift: {exc}")


def cmd_rot_number(args) -> int:
    F = _load_lift(args)
    if args.method == "cf":
        res = circledyn.rotation_number_cf(F, depth=args.depth)
        if res.kind == "rational":
            human = f"rot(F) = {res.value} exactly (periodic point ~ {float(res.witness):.9g})"
        else:
            lo, hi = res.bracket
            human = (
                f"CF digits: {res.digits}\n"
                f"enclosure: [{lo}, {hi}] ~ [{float(lo):.12g}, {float(hi):.12g}]"
            )
        _emit(args, {"command": "rot-number", "method": "cf", **res.to_json()}, human)
        return 0
    est, err = circledyn.rotation_number_orbit(
        F, args.n, FieldElem.of(F.spec, 0)
    )
    if args.out:
        t = FieldElem.of(F.spec, 0)
        offset = 0
        with open(args.out, "w") as fh:
            fh.write("n,Fn0\n")
            for i in range(1, args.n + 1):
                v = F.base.evaluate(t)
                m = v.floor()
                offset += m
                t = v - m
                fh.write(f"{i},{float(t) + offset!r}\n")
    payload = {
        "command": "rot-number",
        "method": "orbit",
        "estimate": est,
        "error_bound": err,
        "n": args.n,
    }
    _emit(args, payload, f"rot(F) ~ {est:.12g} +- {err:.3g} (orbit, n={args.n})")
    return 0


def cmd_cf(args) -> int:
    if args.surd:
        try:
            P, Q, D = (int(t) for t in args.surd.split(","))
            s = diophantine._canonicalize(P, Q, D)
        except (ValueError, diophantine.SurdError) as exc:
            raise CLIError(f"bad --surd: {exc}")
    else:
        if args.p is None or args.q is None:
            raise CLIError("need --p/--q or --surd P,Q,D")
        spec = _spec_from_args(args)
        s = diophantine.surd_of(FieldElem.alpha(spec))
    cf = diophantine.cf_expand(s)
    bounded, M = diophantine.is_bounded_type(cf)
    payload = {
        "command": "cf",
        "surd": {"P": s.P, "Q": s.Q, "D": s.D, "approx": float(s)},
        "preperiod": list(cf.preperiod),
        "period": list(cf.period),
        "bounded_type": bounded,
        "bound_M": M,
    }
    lines = [
        f"value ~ {float(s):.12g}",
        f"CF: preperiod {list(cf.preperiod)}, period {list(cf.period)}",
        f"bounded type, partial quotients <= {M}",
    ]
    if args.qmax:
        delta = Fraction(args.delta)
        w = diophantine.diophantine_witness(s, delta, args.qmax)
        payload["witness"] = {
            "delta": str(delta),
            "q_max": args.qmax,
            "bound": str(w),
            "bound_approx": float(w),
        }
        lines.append(
            f"diophantine witness (delta={delta}, q<={args.qmax}): "
            f"q^(1+delta)|q a - p| >= {float(w):.9g}"
        )
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_smooth(args) -> int:
    spec = make_alpha(args.p, args.q)
    L = localrotation.construct(spec)
    T = localrotation.induced_iet(L)
    y_tilde = float((L.y - L.x) / (L.z - L.x))
    jump = smoothing.jump_product(L)
    alpha = spec.alpha_float()
    seam = smoothing.BreakData(0.0, 1.0, alpha**0, 0.0, 0.0)
    ydat = smoothing.BreakData(y_tilde, 1.0, 1.0, 0.0, 0.0)
    sol = smoothing.solve_c2_system(seam, ydat)
    try:
        phi = smoothing.build_phi(
            0.0, y_tilde, 1.0, args.sigma, (sol.N_minus or 0.0, sol.N_plus or 0.0)
        )
    except smoothing.SmoothingError as exc:
        _emit(
            args,
            {"command": "smooth verify", "built": False, "error": str(exc)},
            f"conjugator construction rejected: {exc}",
        )
        return 1
    rep = smoothing.verify_conjugate_regularity(phi, T, order=args.order, tol=args.tol)
    if args.out:
        import numpy as np

        ts = np.linspace(1e-4, 1 - 1e-4, 512)
        with open(args.out, "w") as fh:
            fh.write("t,Dpsi\n")
            for t in ts:
                d = smoothing._fd_one_sided_derivative(
                    lambda u: _conjugate_eval(phi, T, u), float(t), 1e-5, +1
                )
                fh.write(f"{t!r},{d!r}\n")
    payload = {
        "command": "smooth verify",
        "built": True,
        "jump_exponent_total": jump,
        "c2_system": sol.to_json(),
        "report": rep.to_json(),
    }
    human = (
        f"total jump exponent: {jump}\n"
        f"C^2 system: consistent={sol.consistent} (N-, N+) = ({sol.N_minus}, {sol.N_plus})\n"
        f"order-{args.order} regularity: seam gap {rep.seam_gap:.3g}, "
        f"interior gap {rep.interior_gap:.3g}, tol {args.tol:.3g} -> "
        f"{'pass' if rep.passed else 'FAIL'}"
    )
    _emit(args, payload, human)
    return 0 if rep.passed else 1


def _conjugate_eval(phi, T, t: float) -> float:
    import math as _math

    n = _math.floor(t)
    u = t - n
    w = smoothing._lift_as_float(T)(phi.inverse(u))
    m = _math.floor(w)
    return phi(w - m) + m + n


def cmd_selftest(args) -> int:
    results = acceptance.collect(seed=args.seed)
    ok = all(r["pass"] for r in results)
    if args.json:
        print(
            json.dumps(
                {"schema": SCHEMA, "command": "selftest", "results": results}, indent=2
            )
        )
    else:
        for r in results:
            print(
                f"criterion {r['criterion']} ({r['name']}): "
                f"{'PASS' if r['pass'] else 'FAIL'} [{r['seconds']:.2f}s] - {r['detail']}"
            )
        print("selftest:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="plrot",
        description=(
            "Exact piecewise-linear dynamics over a quadratic field: box maps, "
            "local rotations, rotation numbers, continued fractions, smoothing."
        ),
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_pq(sp, required=True):
        sp.add_argument("--p", type=int, required=required, default=None)
        sp.add_argument("--q", type=int, required=required, default=None)

    def add_json(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    sp = sub.add_parser("alpha", help="properties of the slope generator")
    add_pq(sp)
    add_json(sp)
    sp.set_defaults(func=cmd_alpha)

    sp = sub.add_parser("bieri-strebel", help="box-map decision and realizer")
    sp.add_argument("action", choices=["check", "realize"])
    add_pq(sp)
    for flag in ("--a", "--c", "--a2", "--c2"):
        sp.add_argument(flag, required=True, help="field element as 'a,b' = a + b*alpha")
    add_json(sp)
    sp.set_defaults(func=cmd_bieri_strebel)

    sp = sub.add_parser("local-rotation", help="construct/verify local rotations")
    sp.add_argument("action", choices=["build", "verify"])
    add_pq(sp, required=False)
    sp.add_argument("--y", default=None, help="center point as 'a,b'")
    sp.add_argument("--in", dest="infile", default=None, help="JSON input file (verify)")
    add_json(sp)
    sp.set_defaults(func=cmd_local_rotation)

    sp = sub.add_parser("rot-number", help="rotation number of a circle lift")
    add_pq(sp, required=False)
    sp.add_argument("--in", dest="infile", default=None, help="JSON lift (PLMap base)")
    sp.add_argument("--method", choices=["cf", "orbit"], default="cf")
    sp.add_argument("--depth", type=int, default=12)
    sp.add_argument("--n", type=int, default=10**4, help="orbit length")
    sp.add_argument("--out", default=None, help="CSV path for orbit samples")
    add_json(sp)
    sp.set_defaults(func=cmd_rot_number)

    sp = sub.add_parser("cf", help="continued fractions and Diophantine witnesses")
    add_pq(sp, required=False)
    sp.add_argument("--surd", default=None, help="P,Q,D meaning (P+sqrt(D))/Q")
    sp.add_argument("--delta", default="0", help="Diophantine exponent (rational)")
    sp.add_argument("--qmax", type=int, default=None)
    add_json(sp)
    sp.set_defaults(func=cmd_cf)

    sp = sub.add_parser("smooth", help="conjugate-regularity verifier")
    sp.add_argument("action", choices=["verify"])
    add_pq(sp)
    sp.add_argument("--order", type=int, choices=[1, 2], default=1)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--sigma", type=float, default=1.0, help="endpoint derivative ratio target")
    sp.add_argument("--out", default=None, help="CSV path for the derivative profile")
    add_json(sp)
    sp.set_defaults(func=cmd_smooth)

    sp = sub.add_parser("selftest", help="run the full acceptance suite")
    sp.add_argument("--seed", type=int, default=None, help="override RNG seed")
    add_json(sp)
    sp.set_defaults(func=cmd_selftest)

    return ap


def main(argv: Optional[list] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FieldError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
