"""Command-line interface.

Subcommands:

- formula: evaluate a closed form (with the universal bound alongside).
- verify:  build the exact joint, run both oracles, compare to the closed
           form; exit 0 iff they agree.
- sweep:   parameter sweeps emitted as CSV (monotonicity, Poisson limit,
           Marshall-Olkin limit, binomial hazard).
- mc:      seeded Monte Carlo replicates with a per-replicate CSV report.
- joint:   dump the exact joint table as CSV or JSON.

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import closed_forms as cf
from .core import (
    Bernoulli,
    Binomial,
    Geometric,
    MarginalSpec,
    MinMaxCorrError,
    OverlapScheme,
    Poisson,
    validate_scheme,
)
from .joint_builder import min_joint
from .montecarlo import MCConfig, mc_replicates
from .oracle import ace_maxcorr, svd_maxcorr

DISCRETE_FAMILIES = ("bernoulli", "geometric", "binomial", "poisson")


class UsageError(Exception):
    pass


def _parse_scheme(text: str) -> OverlapScheme:
    try:
        n, m, ell = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--scheme expects n,m,l integers, got {text!r}")
    return validate_scheme(n, m, ell)


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated reals, got {text!r}")


def _marginals(args, scheme: OverlapScheme) -> list[MarginalSpec]:
    fam = args.family
    if fam == "bernoulli":
        return [Bernoulli(p) for p in _require_ps(args, scheme)]
    if fam == "geometric":
        return [Geometric(p) for p in _require_ps(args, scheme)]
    if fam == "binomial":
        _require(args.d is not None and args.p is not None,
                 "binomial needs --d and --p")
        ps = _parse_floats(args.p)
        _require(len(ps) == 1, "binomial takes a single --p (i.i.d. only)")
        return [Binomial(args.d, ps[0]) for _ in range(scheme.n)]
    if fam == "poisson":
        _require(args.lam is not None, "poisson needs --lambda")
        return [Poisson(args.lam) for _ in range(scheme.n)]
    raise UsageError(f"family {fam!r} has no joint construction")


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def _require_ps(args, scheme: OverlapScheme) -> list[float]:
    _require(args.p is not None, f"{args.family} needs --p p1,...,pn")
    ps = _parse_floats(args.p)
    _require(len(ps) == scheme.n,
             f"--p must list {scheme.n} values for scheme n={scheme.n}")
    return ps


def _fmt(x: float, precision: int) -> str:
    return format(x, f".{precision}g")


def _closed_form(args, scheme: OverlapScheme) -> float:
    fam = args.family
    if fam == "continuous":
        return cf.r_continuous(scheme).value
    if fam == "bernoulli":
        return cf.r_bernoulli(_require_ps(args, scheme), scheme).value
    if fam == "geometric":
        return cf.r_geometric(_require_ps(args, scheme), scheme).value
    if fam == "binomial":
        _require(args.d is not None and args.p is not None,
                 "binomial needs --d and --p")
        ps = _parse_floats(args.p)
        _require(len(ps) == 1, "binomial takes a single --p (i.i.d. only)")
        return cf.r_binomial(args.d, ps[0], scheme).value
    if fam == "poisson":
        _require(args.lam is not None, "poisson needs --lambda")
        return cf.r_poisson(args.lam, scheme).value
    raise UsageError(f"unknown family {fam!r}")


def cmd_formula(args) -> int:
    scheme = _parse_scheme(args.scheme)
    value = _closed_form(args, scheme)
    bound = cf.upper_bound(scheme)
    if args.format == "json":
        print(json.dumps({"family": args.family, "value": value,
                          "upper_bound": bound}))
    else:
        print(f"value = {_fmt(value, args.precision)}")
        print(f"upper_bound = {_fmt(bound, args.precision)}")
    return 0


def cmd_verify(args) -> int:
    scheme = _parse_scheme(args.scheme)
    _require(args.family in DISCRETE_FAMILIES,
             "verify supports discrete families only")
    closed = _closed_form(args, scheme)
    joint = min_joint(_marginals(args, scheme), scheme, args.tail_eps)
    svd_report = svd_maxcorr(joint)
    ace = ace_maxcorr(joint)
    values = {"closed_form": closed, "svd": svd_report.value,
              "ace": ace.value}
    max_diff = max(abs(a - b)
                   for a in values.values() for b in values.values())
    allowance = 1e-8 + 10.0 * joint.truncated_mass
    ok = max_diff <= allowance
    payload = dict(values, max_diff=max_diff,
                   truncated_mass=joint.truncated_mass, agree=ok)
    if args.dump_functions:
        payload["functions"] = svd_report.to_json()
    if args.format == "json":
        print(json.dumps(payload))
    else:
        for k in ("closed_form", "svd", "ace", "max_diff"):
            print(f"{k} = {_fmt(payload[k], args.precision)}")
        print(f"agree = {str(ok).lower()}")
    return 0 if ok else 1


def _emit_rows(rows: list[tuple], header: str, output: str | None,
               trailer: str | None = None) -> None:
    lines = [header]
    for row in rows:
        lines.append(",".join("" if x is None else repr(float(x)) if
                              isinstance(x, float) else str(x) for x in row))
    if trailer is not None:
        lines.append(trailer)
    text = "\n".join(lines) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_sweep(args) -> int:
    scheme = _parse_scheme(args.scheme) if args.scheme else None
    header = "param,closed_form,oracle,abs_diff"
    if args.kind == "rml_monotone":
        _require(scheme is not None, "rml_monotone needs --scheme")
        _require(args.grid >= 2, "--grid must be >= 2")
        rows, prev, monotone = [], None, True
        for i in range(1, args.grid + 1):
            p = i / (args.grid + 1)
            v = cf.r_ml(p, scheme)
            if prev is not None and v < prev - 1e-12:
                monotone = False
            prev = v
            rows.append((p, v, None, None))
        _emit_rows(rows, header, args.output,
                   trailer=f"monotone={str(monotone).lower()}")
        return 0
    if args.kind == "poisson_limit":
        _require(scheme is not None and args.lam is not None,
                 "poisson_limit needs --scheme and --lambda")
        target = cf.r_poisson(args.lam, scheme).value
        ks = [int(float(k)) for k in args.k.split(",")] if args.k else \
            [10, 100, 1000, 10**4, 10**5, 10**6]
        _require(all(k >= 1 and args.lam / k < 1 for k in ks),
                 "each k must satisfy k >= 1 and lambda/k < 1")
        rows = []
        for k in ks:
            v = cf.r_binomial(k, args.lam / k, scheme).value
            rows.append((k, v, target, abs(v - target)))
        _emit_rows(rows, header, args.output)
        return 0
    if args.kind == "mo_limit":
        _require(args.rates is not None, "mo_limit needs --rates l1,l2,l3")
        rates = _parse_floats(args.rates)
        _require(len(rates) == 3, "--rates expects exactly 3 rates")
        scheme = scheme or validate_scheme(3, 2, 1)
        _require((scheme.n, scheme.m, scheme.ell) == (3, 2, 1),
                 "mo_limit is defined for scheme 3,2,1")
        target = cf.r_marshall_olkin(*rates)
        hs = [float(h) for h in args.h.split(",")] if args.h else \
            [1e-1, 1e-2, 1e-3, 1e-4]
        rows = []
        for h in hs:
            ps = [-math.expm1(-r * h) for r in rates]
            v = cf.r_geometric(ps, scheme).value
            rows.append((h, v, target, abs(v - target)))
        _emit_rows(rows, header, args.output)
        return 0
    if args.kind == "hazard":
        _require(args.d is not None and args.p is not None,
                 "hazard needs --d and --p")
        ps = _parse_floats(args.p)
        _require(len(ps) == 1, "hazard takes a single --p")
        rows = [(k, cf.binomial_hazard(args.d, ps[0], k), None, None)
                for k in range(1, args.d + 1)]
        _emit_rows(rows, header, args.output)
        return 0
    raise UsageError(f"unknown sweep kind {args.kind!r}")


def cmd_mc(args) -> int:
    scheme = _parse_scheme(args.scheme)
    _require(args.family in DISCRETE_FAMILIES,
             "mc supports discrete families only")
    closed = _closed_form(args, scheme)
    cfg = MCConfig(n_samples=args.n, seed=args.seed,
                   replicates=args.replicates)
    try:
        reps = mc_replicates(_marginals(args, scheme), scheme, cfg)
    except ValueError as exc:
        raise UsageError(str(exc))
    print("replicate,n_samples,estimate,closed_form,abs_error")
    for rep, est in reps:
        print(f"{rep},{args.n},{est!r},{closed!r},{abs(est - closed)!r}")
    values = [est for _, est in reps]
    mean = float(np.mean(values))
    se = float(np.std(values, ddof=1) / len(values) ** 0.5) \
        if len(values) > 1 else 0.0
    print(f"summary,mean={_fmt(mean, args.precision)},"
          f"se={_fmt(se, args.precision)}")
    return 0


def cmd_joint(args) -> int:
    scheme = _parse_scheme(args.scheme)
    _require(args.family in DISCRETE_FAMILIES,
             "joint supports discrete families only")
    joint = min_joint(_marginals(args, scheme), scheme, args.tail_eps)
    if args.format == "json":
        print(json.dumps(joint.to_json()))
    else:
        sys.stdout.write(joint.to_csv())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minmaxcorr",
        description="Maximal correlation of overlapping minima: closed "
                    "forms, exact oracles, sweeps and Monte Carlo.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, families):
        p.add_argument("family", choices=families)
        p.add_argument("--scheme", required=True, metavar="N,M,L",
                       help="overlap scheme n,m,l")
        p.add_argument("--p", help="comma-separated probabilities")
        p.add_argument("--d", type=int, help="binomial trial count")
        p.add_argument("--lambda", dest="lam", type=float,
                       help="Poisson rate")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--precision", type=int, default=10,
                       help="significant digits for printed reals")

    p = sub.add_parser("formula", help="evaluate a closed form")
    common(p, ("continuous",) + DISCRETE_FAMILIES)
    p.set_defaults(func=cmd_formula)

    p = sub.add_parser("verify",
                       help="closed form vs SVD and ACE oracles")
    common(p, DISCRETE_FAMILIES)
    p.add_argument("--tail-eps", type=float, default=1e-12)
    p.add_argument("--dump-functions", action="store_true",
                   help="include optimal score functions in JSON output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="parameter sweeps as CSV")
    p.add_argument("kind", choices=("rml_monotone", "poisson_limit",
                                    "mo_limit", "hazard"))
    p.add_argument("--scheme", metavar="N,M,L")
    p.add_argument("--grid", type=int, default=1000)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--k", help="comma-separated binomial sizes")
    p.add_argument("--rates", help="l1,l2,l3 exponential rates")
    p.add_argument("--h", help="comma-separated discretization steps")
    p.add_argument("--d", type=int)
    p.add_argument("--p")
    p.add_argument("--output", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("mc", help="seeded Monte Carlo replicates")
    common(p, DISCRETE_FAMILIES)
    p.add_argument("--n", type=int, required=True, help="samples per replicate")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--replicates", type=int, default=1)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("joint", help="dump the exact joint table")
    common(p, DISCRETE_FAMILIES)
    p.add_argument("--tail-eps", type=float, default=1e-12)
    p.set_defaults(func=cmd_joint)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, MinMaxCorrError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
