"""Command-line interface: ``nilcover <verb> ...``.

Exit codes: 0 success, 2 usage or input errors, 3 resource caps (partial
bounds are still printed), 1 for a failing ``verify-all``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass

from . import __version__
from .galois import FieldError, make_field
from .groups import ClosureCapExceeded, format_bound, parse_bound
from .lie_families import EnumerationCapExceeded, FamilySpec, SpecError, build

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
THREADS_ENV = "NILCOVER_THREADS"

log = logging.getLogger("nilcover")


class ResourceAbort(RuntimeError):
    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


@dataclass
class RunConfig:
    threads: int
    closure_cap: int = 2**22
    mis_timeout_ms: int | None = None
    output_format: str = "json"
    seed: int = 20240601

    def __post_init__(self):
        if self.threads < 1 or self.closure_cap < 1 or (self.mis_timeout_ms is not None and self.mis_timeout_ms < 1):
            raise ValueError("threads, closure cap and timeout must be positive")
        if self.output_format not in ("json", "csv", "text"):
            raise ValueError(f"unknown output format {self.output_format}")

    @property
    def timeout(self) -> float | None:
        return None if self.mis_timeout_ms is None else self.mis_timeout_ms / 1000

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        base = {}
        if args.config:
            with open(args.config) as fh:
                base = json.load(fh)
        threads = base.get("threads", os.cpu_count() or 1)
        if os.environ.get(THREADS_ENV):
            threads = int(os.environ[THREADS_ENV])
        elif args.threads is not None:
            threads = args.threads
        return cls(
            threads=int(threads),
            closure_cap=int(args.closure_cap or base.get("closure_cap", 2**22)),
            mis_timeout_ms=args.mis_timeout_ms if args.mis_timeout_ms is not None else base.get("mis_timeout_ms"),
            output_format=args.format or base.get("output_format", "json"),
            seed=int(args.seed if args.seed is not None else base.get("seed", 20240601)),
        )


# -- output ----------------------------------------------------------------------

def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list) and v and isinstance(v[0], (dict, list)):
            out[key] = json.dumps(v)
        elif isinstance(v, list):
            sep = "; " if all(isinstance(x, str) for x in v) else " "
            out[key] = sep.join(str(x) for x in v)
        else:
            out[key] = v
    return out


def render(report, fmt: str) -> str:
    rows = report if isinstance(report, list) else [report]
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True, default=str)
    if fmt == "csv":
        flat = [_flatten(r) for r in rows]
        cols = []
        for r in flat:
            cols += [k for k in r if k not in cols]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(flat)
        return buf.getvalue().rstrip("\n")
    lines = []
    for r in rows:
        for k, v in _flatten(r).items():
            lines.append(f"{k}: {v}")
        lines.append("")
    return "\n".join(lines).rstrip("\n")


# -- helpers ---------------------------------------------------------------------

def _group(args, cfg):
    G = build(FamilySpec(args.family, args.q))
    G.closure_cap = cfg.closure_cap
    return G


def _omega_report(res, G=None, witness=False) -> dict:
    d = res.to_dict(G=G, with_elements=witness)
    if res.value is None:
        raise ResourceAbort("solver budget expired", d)
    return d


# -- verbs -----------------------------------------------------------------------

def cmd_field(args, cfg):
    F = make_field(args.p, args.k)
    terms = [f"x^{i}" if i > 1 else ("x" if i == 1 else "1") for i, a in enumerate(F.modulus) if a]
    coeffs = [a for a in F.modulus if a]
    poly = " + ".join((f"{a}*{t}" if a != 1 else t) for a, t in zip(coeffs, terms))
    return {"p": F.p, "k": F.k, "order": F.q, "modulus": list(F.modulus), "modulus_poly": poly}


def cmd_group(args, cfg):
    from .groups import dump_group
    G = _group(args, cfg)
    primes = G.primes
    report = {**G.spec.as_dict(), "order": G.order, "classes": len(G.conjugacy_classes()),
              "center": len(G.center), "sylow_counts": {str(t): G.sylow(t).count for t in primes}}
    if args.dump:
        dump_group(G, args.dump)
        report["dump"] = args.dump
    return report


def cmd_omega(args, cfg):
    c = parse_bound(args.c)
    if args.how == "formula":
        from .closed_forms import omega_lookup
        return omega_lookup(args.family, args.q, c).to_dict()
    from .nilgraph import omega_exact
    G = _group(args, cfg)
    res = omega_exact(G, c, strategy=args.strategy, timeout=cfg.timeout)
    return _omega_report(res, G, args.witness)


def cmd_cover(args, cfg):
    from .covers import construction_cover, ree_cover, unitary_cover, verify_2minimal
    c = parse_bound(args.c)
    spec = FamilySpec(args.family, args.q)
    mode = args.mode
    if spec.family in ("SU3", "PGU3"):
        G = None if mode == "count" else _group(args, cfg)
        cv = unitary_cover(G, spec, c, mode="count" if G is None else "full")
    elif spec.family in ("Ree3Full", "ReeSylowP"):
        if spec.family == "Ree3Full" and mode != "count":
            cv = ree_cover(_group(args, cfg), spec, c, mode="full")
        else:
            local = _group(args, cfg) if spec.family == "ReeSylowP" and mode != "count" else None
            cv = ree_cover(None, spec, c, mode="count", local=local)
    else:
        if mode == "count":
            raise SpecError("COUNT mode is for the unitary and Ree families")
        G = _group(args, cfg)
        cv = construction_cover(G, spec, c)
        if cv is None:
            raise SpecError(f"no explicit construction for {spec.label()}; use 'omega exact'")
    report = {**spec.as_dict(), **cv.to_dict()}
    if cv.mode == "full":
        report["certificate"] = verify_2minimal(cv).to_dict()
    else:
        report["counts_match_formulas"] = cv.counts == cv.expected if cv.expected else None
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
    return report


def cmd_graph(args, cfg):
    from .nilgraph import GraphCapExceeded, build_gamma, graph_metrics
    c = parse_bound(args.c)
    G = _group(args, cfg)
    try:
        gr = build_gamma(G, c)
    except GraphCapExceeded as e:
        raise ResourceAbort(str(e)) from e
    if args.action == "export":
        text = gr.to_dimacs()
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
            return {"vertices": gr.n, "edges": gr.edge_count, "out": args.out}
        sys.stdout.write(text)
        return None
    return {"family": G.spec.family, "q": G.spec.q, "c": format_bound(c), **graph_metrics(gr, cfg.timeout)}


def cmd_sylow(args, cfg):
    G = _group(args, cfg)
    d = G.sylow(args.t)
    report = {"family": G.spec.family, "q": G.spec.q, "t": args.t, "count": d.count,
              "order": len(d.subgroups[0]), "unique_members": int(len(G.unique_sylow_members(args.t)))}
    if args.bound is not None:
        from .covers import sylow_lower_bound_set
        primes = [int(x) for x in args.bound.split(",") if x]
        S = sylow_lower_bound_set(G, G.spec, primes)
        report["lower_bound_set"] = {"size": len(S), "parts": {str(k): v for k, v in S.parts.items()},
                                     "verified": S.verified,
                                     "elements": [G.element_hex(i) for i in S.elements] if args.witness else None}
    return report


def cmd_classes(args, cfg):
    from .classes import analyze_classes, ratio_conjecture_check
    G = _group(args, cfg)
    c = parse_bound(args.c)
    timeout = 60.0 if cfg.timeout is None else cfg.timeout  # per class; bounds are reported past it
    if args.ratio:
        return ratio_conjecture_check(G, override=args.override, timeout=timeout).to_dict()
    return [r.to_dict() for r in analyze_classes(G, c, timeout)]


def cmd_ppd(args, cfg):
    from .closed_forms import zsigmondy, zsigmondy_exception
    if args.x < 2 or args.n < 2:
        raise SpecError("need x > 1 and n >= 2")
    r = zsigmondy(args.x, args.n)
    d = {"x": args.x, "n": args.n, "value": r}
    if r is None:
        d["reason"] = "zsigmondy-exception" if zsigmondy_exception(args.x, args.n) else "none"
    return d


def cmd_verify_all(args, cfg):
    from .acceptance import all_claims, run_claim, summarize
    outcomes = []
    for claim in all_claims(extended=not args.skip_extended):
        o = run_claim(claim)
        outcomes.append(o)
        print(o.line(), file=sys.stderr, flush=True)
    rows = [{"criterion": o.claim.criterion, "claim": o.claim.name, "passed": o.passed,
             "expected": str(o.expected), "actual": str(o.actual), "seconds": round(o.seconds, 2),
             "extended": o.claim.extended} for o in outcomes]
    for line in summarize(outcomes):
        print(line, file=sys.stderr)
    args._verify_ok = all(o.passed for o in outcomes)
    return rows


# -- parser ----------------------------------------------------------------------

def _family_q(p):
    p.add_argument("family")
    p.add_argument("q", type=int)


def _common(ap, default):
    ap.add_argument("--format", choices=["json", "csv", "text"], default=default)
    ap.add_argument("--threads", type=int, default=default)
    ap.add_argument("--closure-cap", type=int, default=default)
    ap.add_argument("--mis-timeout-ms", type=int, default=default)
    ap.add_argument("--seed", type=int, default=default)
    ap.add_argument("--config", help="JSON file with RunConfig fields", default=default)
    ap.add_argument("-v", "--verbose", action="store_true", default=default if default is not None else False)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nilcover", description="Nilpotent covers of rank-one groups of Lie type.")
    ap.add_argument("--version", action="version", version=f"nilcover {__version__}")
    _common(ap, None)
    common = argparse.ArgumentParser(add_help=False)
    _common(common, argparse.SUPPRESS)  # also accepted after the verb
    sub = ap.add_subparsers(dest="verb", required=True)
    sub_add = sub.add_parser
    sub.add_parser = lambda *a, **kw: sub_add(*a, parents=[common], **kw)

    p = sub.add_parser("field", help="finite field data")
    p.add_argument("action", choices=["info"])
    p.add_argument("p", type=int)
    p.add_argument("k", type=int)
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("group", help="build a group")
    p.add_argument("action", choices=["build"])
    _family_q(p)
    p.add_argument("--dump", metavar="FILE")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("omega", help="omega_c by closed form or exact computation")
    p.add_argument("how", choices=["formula", "exact"])
    _family_q(p)
    p.add_argument("c")
    p.add_argument("--strategy", choices=["auto", "mis", "certify"], default="auto")
    p.add_argument("--witness", action="store_true", help="include the independent set")
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("cover", help="build and certify a cover")
    p.add_argument("action", choices=["build"])
    _family_q(p)
    p.add_argument("c")
    p.add_argument("--mode", choices=["auto", "full", "count"], default="auto")
    p.add_argument("--json", metavar="FILE")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("graph", help="Gamma_c export and metrics")
    p.add_argument("action", choices=["export", "metrics"])
    _family_q(p)
    p.add_argument("c")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("sylow", help="Sylow subgroup counts and lower-bound sets")
    _family_q(p)
    p.add_argument("t", type=int)
    p.add_argument("--bound", metavar="PRIMES", help="comma-separated torus primes for the lower-bound set")
    p.add_argument("--witness", action="store_true")
    p.set_defaults(func=cmd_sylow)

    p = sub.add_parser("classes", help="conjugacy classes as non-nilpotent sets")
    p.add_argument("action", choices=["analyze"])
    _family_q(p)
    p.add_argument("--ratio", action="store_true")
    p.add_argument("--override", action="store_true", help="skip the simplicity requirement of --ratio")
    p.add_argument("--c", default="inf")
    p.set_defaults(func=cmd_classes)

    p = sub.add_parser("ppd", help="least primitive prime divisor of x^n - 1")
    p.add_argument("x", type=int)
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_ppd)

    p = sub.add_parser("verify-all", help="run the acceptance suite")
    p.add_argument("--skip-extended", action="store_true")
    p.set_defaults(func=cmd_verify_all)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = RunConfig.from_args(args)
    except (ValueError, OSError) as e:
        print(f"nilcover: {e}", file=sys.stderr)
        return EXIT_USAGE
    from .nilgraph import GraphCapExceeded, SolverTimeout
    try:
        report = args.func(args, cfg)
    except ResourceAbort as e:
        if e.partial is not None:
            print(render(e.partial, cfg.output_format))
        print(f"nilcover: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (EnumerationCapExceeded, ClosureCapExceeded, GraphCapExceeded, SolverTimeout, MemoryError) as e:
        print(f"nilcover: resource cap: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (SpecError, FieldError, ValueError, KeyError) as e:
        print(f"nilcover: {e}", file=sys.stderr)
        return EXIT_USAGE
    if report is not None:
        print(render(report, cfg.output_format))
    if getattr(args, "_verify_ok", True) is False:
        return EXIT_FAIL
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
