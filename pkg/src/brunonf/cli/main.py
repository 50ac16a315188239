"""Command-line driver.  Every command prints one JSON report."""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from .. import __version__
from ..bruno import analyticity_certificate, bruno_ideal, bruno_oracle_compare
from ..errors import BrunoError
from ..normalize import SPerturbation, conjugate, exp_automorphism, normalize
from ..omega import DEFAULT_CAP, bruno_sum, estimate_diagnostics, omega_sequence, radius_schedule
from ..series import Series
from .parser import parse_field, parse_scalar_list

SCHEMA = "brunonf.report/1"


def _load(args):
    with open(args.input, encoding="utf-8") as fh:
        text = fh.read()
    order = getattr(args, "order", None)
    return parse_field(text, order=order, epsilon=args.epsilon)


def _input_echo(spec):
    return {"vars": spec.names, "scalars": spec.field.name, "order": spec.order,
            "field": spec.derivation.to_expr(spec.names)}


def cmd_normalize(args):
    spec = _load(args)
    delta, phi, trace = normalize(spec.derivation, spec.order, args.method, args.flavor)
    names = spec.names
    return {
        "input": _input_echo(spec),
        "method": args.method,
        "flavor": args.flavor,
        "normalized_field": delta.to_expr(names),
        "normalized_terms": delta.to_json(),
        "automorphism": [im.to_str(names) for im in phi.images],
        "automorphism_is_identity": phi.is_identity(),
        "orientation": "original(f o phi) = normalized(f) o phi",
        "trace": trace.to_json(),
    }


def cmd_bruno_ideal(args):
    spec = _load(args)
    rep = bruno_ideal(spec.derivation, spec.order, args.method)
    out = {"input": _input_echo(spec)}
    out.update(rep.to_json(spec.names))
    out["normalized_field"] = rep.delta.to_expr(spec.names)
    out["automorphism"] = [im.to_str(spec.names) for im in rep.phi.images]
    return out


def cmd_omega(args):
    lam, _ = parse_scalar_list(args.lam, args.epsilon)
    rep = omega_sequence(lam, args.kmax, args.mode, args.cap, args.epsilon)
    bruno_sum(rep)
    return {"omega": rep.to_json()}


def cmd_certify(args):
    spec = _load(args)
    sp = SPerturbation(spec.derivation)
    rep = bruno_ideal(sp, spec.order, "newton")
    delta = SPerturbation(rep.delta)
    I, verdict = analyticity_certificate(delta, spec.order)
    K = max(args.kmax, 0)
    om = omega_sequence(sp.lam, K, args.mode, args.cap, args.epsilon)
    v, _ = bruno_sum(om)
    sched = radius_schedule(om.omegas, args.C, args.k0, args.rho,
                            omega_summable=v != "Undetermined")
    diag = estimate_diagnostics(sp, rep.trace, args.C, args.k0, args.rho, om.omegas, args.mode)
    return {
        "input": _input_echo(spec),
        "certificate_ideal": I.to_strs(spec.names),
        "certificate": verdict,
        "bruno_generators_normalized": rep.ideal_normalized.to_strs(spec.names),
        "bruno_generators_original": rep.ideal_original.to_strs(spec.names),
        "a_condition": {"holds_mod_order": rep.a_condition, "order": spec.order},
        "f0": rep.f0.to_str(spec.names),
        "omega": om.to_json(),
        "radius_schedule": sched.to_json(),
        "diagnostics": diag,
    }


def cmd_oracle_compare(args):
    args.order = args.jet
    spec = _load(args)
    rec = bruno_oracle_compare(spec.derivation, args.jet)
    return {"input": _input_echo(spec), "comparison": rec}


def cmd_check(args):
    spec = _load(args)
    d = spec.derivation
    N = spec.order
    n, field = spec.n, spec.field
    rng = random.Random(args.seed)
    checks = {}
    xs = [Series.var(i, n, N, field) for i in range(n)]
    f = sum((x * x for x in xs), Series.zero(n, N, field)) + xs[0]
    g = xs[-1] * xs[0] + xs[-1]
    lhs = d.apply(f * g, N)
    rhs = d.apply(f, N) * g + f * d.apply(g, N)
    checks["leibniz"] = lhs.equals_mod(rhs, N)
    checks["bracket_antisymmetry"] = d.bracket(d, N).is_zero()
    checks["print_roundtrip"] = parse_field(
        f"vars: {', '.join(spec.names)}\nscalars: {_scalar_word(field)}\n"
        + d.to_expr(spec.names), order=N, epsilon=args.epsilon).derivation == d
    sp = SPerturbation(d)
    exact = field.exact
    if exact:
        from ..derivation import random_log_derivation

        U = random_log_derivation(rng, n, N, field, 2, density=0.6, min_degree=1)
        phi = exp_automorphism(U, N)
        psi = phi.inverse(N)
        e = conjugate(d, U, N)
        lhs = e.apply(f.substitute(psi, N), N)
        rhs = d.apply(f, N).substitute(psi, N)
        checks["conjugation_consistency"] = lhs.equals_mod(rhs, N)
    newton_ok = N & (N - 1) == 0
    rg = bruno_ideal(sp, N, "graded")
    checks["graded_normal_form"] = rg.delta.graded_split(sp.lam)[1].is_zero()
    if newton_ok:
        rn = bruno_ideal(sp, N, "newton")
        checks["newton_normal_form"] = rn.delta.graded_split(sp.lam)[1].is_zero()
        checks["newton_flatness"] = all(
            s.U.is_zero() or (s.U.ord >= 2 ** s.k and s.U.deg < 2 ** (s.k + 1))
            for s in rn.trace.steps)
        if exact:
            checks["newton_vs_graded_bruno"] = rn.ideal_original.equals(rg.ideal_original, N)
    checks["bruno_memberships"] = rg.memberships["f_minus_f0"] and all(rg.memberships["g"])
    if exact:
        B = rg.ideal_original
        checks["bruno_invariance"] = all(B.contains(d.apply(gen, N), N) for gen in B.generators)
    ok = all(checks.values())
    return {"input": _input_echo(spec), "checks": checks, "all_passed": ok,
            "heuristic": not exact}, (0 if ok else 1)


def _scalar_word(field):
    return {"QQ": "rational", "QQI": "gaussian"}.get(field.name, "float")


def build_parser():
    p = argparse.ArgumentParser(prog="brunonf",
                                description="Normal forms and Bruno ideals of logarithmic fields.")
    p.add_argument("--version", action="version", version=f"brunonf {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report to this file")
    common.add_argument("--epsilon", type=float, default=1e-12,
                        help="zero tolerance for float scalars")
    common.add_argument("--timing", action="store_true",
                        help="include wall-clock timing (makes output nondeterministic)")
    sub = p.add_subparsers(dest="command", required=True)

    def with_input(name, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("--input", required=True, help="field description file")
        return s

    s = with_input("normalize", "normalize the field")
    s.add_argument("--order", type=int)
    s.add_argument("--method", choices=["newton", "graded"], default="newton")
    s.add_argument("--flavor", choices=["exp", "polynomial"], default="exp")
    s.set_defaults(func=cmd_normalize)

    s = with_input("bruno-ideal", "compute the Bruno ideal")
    s.add_argument("--order", type=int)
    s.add_argument("--method", choices=["newton", "graded"], default="newton")
    s.set_defaults(func=cmd_bruno_ideal)

    s = sub.add_parser("omega", parents=[common], help="small-divisor table")
    s.add_argument("--lambda", dest="lam", required=True, help='eigenvalues, e.g. "1,-1"')
    s.add_argument("--kmax", type=int, default=8)
    s.add_argument("--mode", choices=["paper", "nonneg"], default="paper")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.set_defaults(func=cmd_omega)

    s = with_input("certify", "analyticity certificate, omega table and norm diagnostics")
    s.add_argument("--order", type=int)
    s.add_argument("--C", type=float, default=3.0)
    s.add_argument("--k0", type=int, default=1)
    s.add_argument("--rho", type=float, default=1.0)
    s.add_argument("--kmax", type=int, default=8)
    s.add_argument("--mode", choices=["paper", "nonneg"], default="paper")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.set_defaults(func=cmd_certify)

    s = with_input("oracle-compare", "Jordan-Chevalley oracle against the pullback route")
    s.add_argument("--jet", type=int, default=8)
    s.set_defaults(func=cmd_oracle_compare)

    s = with_input("check", "run the invariant suite on the input")
    s.add_argument("--order", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_check)
    return p


def _emit(obj, out):
    text = json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    report = {"schema": SCHEMA, "version": __version__, "command": args.command}
    code = 0
    try:
        res = args.func(args)
        if isinstance(res, tuple):
            res, code = res
        report["result"] = res
    except BrunoError as exc:
        report["error"] = exc.to_dict()
        code = 2
    except (OSError, ValueError) as exc:
        report["error"] = {"error": type(exc).__name__.lower(), "message": str(exc)}
        code = 2
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - t0, 6)
    _emit(report, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
