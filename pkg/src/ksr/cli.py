"""Command-line interface.

Subcommands: ``bound`` (closed-form sharp bounds), ``extremal``
(extremal-function CSV emitters), ``recover`` (optimal-recovery
experiments with two-sided certification), ``landau``, ``stechkin``,
``delta-recover``, ``verify`` (the full certification suites) and
``sweep`` (convergence tables).

JSON goes to stdout and is byte-stable under a fixed seed; CSV is used
for function graphs only.  Exit codes: 0 success, 1 parse error,
2 precondition violation (the diagnostic names the violated
hypothesis), 3 failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import gridfn as gf
from . import kscore as ks
from . import landau as la
from . import lspace as ls
from . import oracle as orc
from . import ostrowski as ost
from . import recovery as rec
from .errors import KsrError
from .modulus import parse_modulus

_DIAGNOSTICS = {
    "NonConcave": "modulus not concave: sharpness unavailable, bound still valid",
    "MassMismatch": "weight masses differ: the comparison functional is not balanced",
    "BadSupportOrder": "weight supports are not ordered left before right",
    "KnotViolation": "knot/half-width configuration violates the admissibility constraints",
    "WindowViolation": "difference windows violate the nesting constraints",
    "NonzeroBoundary": "profile does not vanish at the domain endpoints",
    "NonIsotropic": "operation requires an isotropic model",
    "NoDifference": "required Hukuhara difference does not exist",
    "NotInvertible": "element has no additive inverse",
    "CannotCertify": "extremal candidate could not be certified as a class member",
    "SearchFailed": "bounded numeric search did not converge",
    "InvalidModulus": "candidate modulus failed validation",
}


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


def _pair(text: str) -> tuple:
    parts = [float(x) for x in text.split(",")]
    if len(parts) != 2:
        raise ValueError(f"expected 'lo,hi', got {text!r}")
    return parts[0], parts[1]


def _write_csv(f: gf.GridFunction, path: str) -> None:
    Path(path).write_text(gf.to_csv(f))


def _case_name(case: str) -> str:
    return case.capitalize()


def cmd_bound(args) -> int:
    omega = parse_modulus(args.omega)
    if args.kind == "ks":
        w1 = ks.parse_step_weight(args.psi1)
        w2 = ks.parse_step_weight(args.psi2)
        _emit({"bound": ks.ks_bound(w1, w2, omega), "kind": "ks"})
    elif args.kind == "general":
        w1 = ks.parse_step_weight(args.psi1)
        w2 = ks.parse_step_weight(args.psi2)
        _emit({"bound": ks.general_bound(w1, w2, omega), "kind": "general"})
    elif args.kind == "ostrowski":
        a, b = _pair(args.ab)
        c, d = _pair(args.cd)
        cfg = ost.two_interval_config(a, b, c, d)
        _emit({"bound": ost.two_interval_bound(cfg, omega), "case": _case_name(cfg.case)})
    elif args.kind == "symmetric":
        a, b = _pair(args.ab)
        c, d = _pair(args.cd)
        _emit({"bound": ost.symmetric_bound(a, b, c, d, omega), "kind": "symmetric"})
    elif args.kind == "point-mean":
        c, d = _pair(args.cd)
        _emit({"bound": ost.point_vs_mean_bound(args.t, c, d, omega), "kind": "point-mean"})
    elif args.kind == "pair":
        a, b = _pair(args.ab)
        _emit({"bound": ost.symmetrized_pair_bound(args.t, a, b, omega), "kind": "pair"})
    else:
        raise ValueError(f"unknown bound kind {args.kind!r}")
    return 0


def cmd_extremal(args) -> int:
    omega = parse_modulus(args.omega)
    n = args.grid
    if args.kind == "ks":
        w1 = ks.parse_step_weight(args.psi1)
        w2 = ks.parse_step_weight(args.psi2)
        g = ks.ks_extremal(w1, w2, omega, n=n)
        attained = ks.functional_S(g, w1, w2)
        target = ks.ks_bound(w1, w2, omega)
    elif args.kind == "general":
        w1 = ks.parse_step_weight(args.psi1)
        w2 = ks.parse_step_weight(args.psi2)
        g = ks.glue_extremal(ks.decompose_weights(w1, w2), omega, n=n)
        attained = ks.functional_S(g, w1, w2)
        target = ks.general_bound(w1, w2, omega)
    elif args.kind == "ostrowski":
        a, b = _pair(args.ab)
        c, d = _pair(args.cd)
        cfg = ost.two_interval_config(a, b, c, d)
        g = ost.two_interval_extremal(cfg, omega, n=n)
        w1, w2 = ost.two_interval_weights(cfg)
        attained = ks.functional_S(g, w1, w2)
        target = ost.two_interval_bound(cfg, omega)
    elif args.kind == "point-mean":
        c, d = _pair(args.cd)
        a, b = _pair(args.ab) if args.ab else (c, d)
        g = ost.point_vs_mean_extremal(args.t, omega, min(a, c), max(b, d), n=n)
        lift = gf.lift(g, ls.interval(1, 1))
        mean_w = ks.indicator_weight(c, d, 1.0 / (d - c), domain=(lift.a, lift.b))
        attained = ls.dist(ls.convexify(lift.value_at(args.t)), ks.integrate_weighted(lift, mean_w))
        target = ost.point_vs_mean_bound(args.t, c, d, omega)
    elif args.kind == "pair":
        a, b = _pair(args.ab)
        g = ost.symmetrized_pair_extremal(args.t, a, b, omega, n=n)
        lift = gf.lift(g, ls.interval(1, 1))
        mean_w = ks.indicator_weight(a, b, 1.0 / (b - a), domain=(a, b))
        half = ls.scale(
            0.5,
            ls.add(
                ls.convexify(lift.value_at(args.t)),
                ls.convexify(lift.value_at(a + b - args.t)),
            ),
        )
        attained = ls.dist(half, ks.integrate_weighted(lift, mean_w))
        target = ost.symmetrized_pair_bound(args.t, a, b, omega)
    else:
        raise ValueError(f"unknown extremal kind {args.kind!r}")
    out = {"attained": attained, "kind": args.kind, "target": target}
    if args.out:
        _write_csv(g, args.out)
        out["csv"] = args.out
    _emit(out)
    return 0


def cmd_recover(args) -> int:
    omega = parse_modulus(args.omega)
    a, b = _pair(args.ab)
    report = orc.recovery_experiment(
        args.kind, args.n, args.h, omega, a, b, args.trials, args.grid, args.seed
    )
    payload = report.as_dict()
    payload["gap"] = payload["theoretical"] - payload["lower_bound"]
    if args.out:
        core = orc.recovery_extremal(args.kind, args.n, args.h, omega, a, b, args.grid)
        _write_csv(core, args.out)
        payload["extremal_csv"] = args.out
    _emit(payload)
    return 0


def cmd_landau(args) -> int:
    omega = parse_modulus(args.omega)
    a, b = _pair(args.ab)
    if args.variant in ("b", "d"):
        if args.gamma is None:
            raise la.WindowViolation("variants b and d need --gamma")
        w = la.clamped_windows(args.t, args.gamma, args.h, a, b)
    else:
        h1, h2 = la.clamped_outer(args.t, args.h, a, b)
        w = la.WindowConfig(args.t, 0.0, 0.0, h1, h2, a, b)
    if args.variant in ("b", "d"):
        value = la.K_value(w, omega)
    else:
        value = la.derivative_vs_quotient_value(w, omega)
    payload = {
        "norm_budget": la.operator_norm_bound(w),
        "value": value,
        "variant": args.variant,
        "windows": {"g1": w.g1, "g2": w.g2, "h1": w.h1, "h2": w.h2},
    }
    if args.variant == "e":
        payload["extremal_sup_norm"] = la.extremal_sup_norm(w, omega)
    if args.out:
        f = la.landau_extremal(args.variant, w, omega, n=args.grid)
        _write_csv(f, args.out)
        payload["extremal_csv"] = args.out
    _emit(payload)
    return 0


def cmd_stechkin(args) -> int:
    omega = parse_modulus(args.omega)
    a, b = _pair(args.ab)
    if args.target == "derivative":
        h1, h2 = la.clamped_outer(args.t, args.h, a, b)
        w = la.WindowConfig(args.t, 0.0, 0.0, h1, h2, a, b)
    else:
        if args.gamma is None:
            raise la.WindowViolation("divided-difference target needs --gamma")
        w = la.clamped_windows(args.t, args.gamma, args.h, a, b)
    payload = {
        "norm_budget": la.operator_norm_bound(w),
        "target": args.target,
        "value": la.stechkin_value("divdiff" if args.target == "divdiff" else "derivative", w, omega),
    }
    _emit(payload)
    return 0


def cmd_delta_recover(args) -> int:
    omega = parse_modulus(args.omega)
    a, b = _pair(args.ab)
    payload = la.delta_recovery_value(args.t, args.h, omega, a, b)
    _emit(payload)
    return 0


def cmd_verify(args) -> int:
    names = list(orc.SUITES) if args.suite == "all" else [args.suite]
    for n in names:
        if n not in orc.SUITES:
            raise ValueError(f"unknown suite {n!r}")
    report = orc.run_suites(names, args.trials, args.grid, args.seed)
    _emit(report)
    return 0 if report["pass"] else 3


def cmd_sweep(args) -> int:
    omega = parse_modulus(args.omega)
    a, b = _pair(args.ab)
    values = [int(v) for v in args.values.split(",") if v.strip()] if args.values else []
    lines = ["param,theoretical,empirical,gap"]
    for n in values:
        report = orc.recovery_experiment(
            args.kind, n, args.h, omega, a, b, args.trials, args.grid, args.seed
        )
        gap = report.theoretical - report.lower_bound
        lines.append(f"{n},{report.theoretical:.12g},{report.empirical_upper:.12g},{gap:.12g}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    return 0


def _load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#") or "=" not in line:
            continue
        k, v = line.split("=", 1)
        out[k.strip().replace("-", "_")] = v.strip()
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ksr", description="sharp bounds and optimal recovery toolkit")
    parser.add_argument("--config", default=None, help="key=value config file; flags override")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, omega=True, grid=True):
        if omega:
            p.add_argument("--omega", default="power:K=1,alpha=1")
        if grid:
            p.add_argument("--grid", type=int, default=gf.DEFAULT_GRID)

    p = sub.add_parser("bound", help="closed-form sharp bounds")
    p.add_argument("kind", choices=["ks", "general", "ostrowski", "symmetric", "point-mean", "pair"])
    p.add_argument("--psi1", help="left step weight 'a,b; u,v,w; ...'")
    p.add_argument("--psi2", help="right step weight")
    p.add_argument("--ab", help="first segment 'a,b'")
    p.add_argument("--cd", help="second segment 'c,d'")
    p.add_argument("--t", type=float, default=0.0)
    common(p, grid=False)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("extremal", help="emit extremal functions as CSV")
    p.add_argument("kind", choices=["ks", "general", "ostrowski", "point-mean", "pair"])
    p.add_argument("--psi1")
    p.add_argument("--psi2")
    p.add_argument("--ab")
    p.add_argument("--cd")
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("recover", help="optimal-recovery experiments")
    p.add_argument("kind", choices=["convexify", "integral", "identity", "derivative"])
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--h", type=float, default=0.05)
    p.add_argument("--ab", default="0,1")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("landau", help="sharp first-order inequality constants")
    p.add_argument("--variant", choices=list(la.VARIANTS), default="e")
    p.add_argument("--t", type=float, default=0.5)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--ab", default="0,1")
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(func=cmd_landau)

    p = sub.add_parser("stechkin", help="best approximation of unbounded operators")
    p.add_argument("--target", choices=["derivative", "divdiff"], default="derivative")
    p.add_argument("--t", type=float, default=0.5)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--ab", default="0,1")
    common(p, grid=False)
    p.set_defaults(func=cmd_stechkin)

    p = sub.add_parser("delta-recover", help="recovery of the derivative from inexact data")
    p.add_argument("--t", type=float, default=0.5)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--ab", default="0,1")
    common(p, grid=False)
    p.set_defaults(func=cmd_delta_recover)

    p = sub.add_parser("verify", help="run the certification suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--grid", type=int, default=gf.DEFAULT_GRID)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="convergence table for a recovery problem")
    p.add_argument("kind", choices=["convexify", "integral", "identity", "derivative"])
    p.add_argument("--values", default="", help="comma-separated knot counts")
    p.add_argument("--h", type=float, default=0.0, help="0 selects h = cell/20 per n")
    p.add_argument("--ab", default="0,1")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = _build_parser()
    try:
        # pre-parse the config path so file values become defaults
        cfg_path = None
        for i, tok in enumerate(argv):
            if tok == "--config" and i + 1 < len(argv):
                cfg_path = argv[i + 1]
            elif tok.startswith("--config="):
                cfg_path = tok.split("=", 1)[1]
        config = _load_config(cfg_path)
        if config:
            for subparser in parser._subparsers._group_actions[0].choices.values():  # type: ignore[union-attr]
                known = {a.dest: a for a in subparser._actions}
                for key, raw in config.items():
                    if key not in known:
                        continue
                    action = known[key]
                    value = action.type(raw) if action.type is not None else raw
                    subparser.set_defaults(**{key: value})
                    action.required = False
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 1
    try:
        return args.func(args)
    except KsrError as e:
        name = type(e).__name__
        hint = _DIAGNOSTICS.get(name, "precondition violated")
        sys.stderr.write(f"{name}: {hint} ({e})\n")
        return 2
    except (ValueError, ArithmeticError) as e:
        sys.stderr.write(f"{type(e).__name__}: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
