"""Command-line entry point: ``eulermag {emh,ai-verify,shell,inj,sweep}``.

Every command prints JSON carrying ``schema_version``; ``--human`` prints a
table instead.  Exit codes: 0 success, 1 verification failure, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from eulermag import __version__
from eulermag.asao_izumihara import (
    MIN_ELL,
    build_pair,
    emh_via_ai,
    verify_chain_isomorphism,
)
from eulermag.complexes import ComplexError, TupleComplex
from eulermag.experiments import (
    SCHEMA_VERSION,
    ConfigError,
    config_from_mapping,
    parse_config_text,
    parse_pair_policy,
    run_sweep,
)
from eulermag.graph import GraphError, path_metric, read_edge_list
from eulermag.homology import homology_report
from eulermag.injective_words import verify_bjorner_wachs, verify_filtration_quotient
from eulermag.shelling import (
    DEFAULT_BUDGET,
    FacetDims,
    ShellingError,
    et_shelling_threshold,
    etsub_shelling_threshold,
    find_shelling,
    vanishing_threshold,
)
from eulermag.trails import build_emc, emh

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(payload: dict, human: bool, table=None) -> None:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    if human and table is not None:
        print(table(payload))
    else:
        print(json.dumps(payload, indent=2, sort_keys=True))


def _homology_table(rows: list[dict]) -> str:
    lines = [f"{'k':>3}  {'rank':>6}  torsion"]
    for h in rows:
        tors = " ".join(f"Z/{t}" for t in h["torsion"]) or "-"
        lines.append(f"{h['degree']:>3}  {h['free_rank']:>6}  {tors}")
    return "\n".join(lines)


def _load_graph(path: str):
    try:
        return read_edge_list(path)
    except OSError as exc:
        raise UsageError(f"cannot read graph file {path}: {exc.strerror}") from None


def _endpoints(args, n: int) -> Optional[tuple[int, int]]:
    if (args.a is None) != (args.b is None):
        raise UsageError("--a and --b must be given together")
    if args.a is None:
        return None
    for v in (args.a, args.b):
        if not 0 <= v < n:
            raise UsageError(f"vertex {v} outside 0..{n - 1}")
    return (args.a, args.b)


def cmd_emh(args) -> int:
    g = _load_graph(args.graph)
    if args.ell < 0:
        raise UsageError("--ell must be >= 0")
    ends = _endpoints(args, g.n)
    dm = path_metric(g)
    groups = emh(g, args.ell, ends, dm)
    if args.k is not None:
        if not 0 <= args.k <= args.ell:
            raise UsageError(f"--k must lie in 0..{args.ell}")
        groups = [groups[args.k]]
    chain = build_emc(g, args.ell, ends, dm)
    payload = {
        "command": "emh",
        "n": g.n,
        "ell": args.ell,
        "endpoints": list(ends) if ends else None,
        "basis_sizes": chain.gradings,
        **homology_report(groups, chain.euler_characteristic()),
    }
    if args.dump_chain:
        Path(args.dump_chain).write_text(json.dumps(chain.to_json(), sort_keys=True) + "\n")
    _emit(payload, args.human, lambda p: _homology_table(p["homology"]))
    return EXIT_OK


def _verify_pair(g, dm, a, b, ell) -> dict:
    pair = build_pair(g, a, b, ell, dm)
    iso = verify_chain_isomorphism(pair, g, dm)
    direct = emh(g, ell, (a, b), dm)
    mismatches = list(iso.mismatches)
    for k in range(2, ell + 1):
        via = emh_via_ai(pair, dm, k)
        if (via.free_rank, via.torsion) != (direct[k].free_rank, direct[k].torsion):
            mismatches.append(
                {"degree": k, "kind": "homology", "ai": via.to_dict(), "direct": direct[k].to_dict()}
            )
    return {
        "a": a,
        "b": b,
        "status": "PASS" if not mismatches else "FAIL",
        "sign": iso.sign,
        "relative_generators": [c["generators"] for c in iso.checks],
        "mismatches": mismatches,
    }


def cmd_ai_verify(args) -> int:
    g = _load_graph(args.graph)
    if args.ell < MIN_ELL:
        raise UsageError(f"--ell must be >= {MIN_ELL} for the Asao-Izumihara pair")
    ends = _endpoints(args, g.n)
    dm = path_metric(g)
    pairs = [ends] if ends else [(a, b) for a in range(g.n) for b in range(g.n) if a != b]
    results = [_verify_pair(g, dm, a, b, args.ell) for a, b in pairs]
    ok = all(r["status"] == "PASS" for r in results)
    if args.dump and ends:
        Path(args.dump).write_text(json.dumps(build_pair(g, *ends, args.ell, dm).to_json(), sort_keys=True) + "\n")
    payload = {"command": "ai-verify", "ell": args.ell, "status": "PASS" if ok else "FAIL", "pairs": results}

    def table(p):
        lines = [f"{'a':>3} {'b':>3}  status"]
        lines += [f"{r['a']:>3} {r['b']:>3}  {r['status']}" for r in p["pairs"]]
        lines.append(f"overall: {p['status']}")
        return "\n".join(lines)

    _emit(payload, args.human, table)
    return EXIT_OK if ok else EXIT_FAIL


def _load_complex(path: str, which: Optional[str]) -> TupleComplex:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read complex dump {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"complex dump {path} is not valid JSON: {exc.msg}") from None
    if "big" in data and "sub" in data:
        data = data[which or "big"]
    if not isinstance(data, dict) or not ({"faces", "facets"} & data.keys()):
        raise UsageError("complex dump needs a 'faces' or 'facets' array")
    return TupleComplex.from_json(data)


def cmd_shell_check(args) -> int:
    x = _load_complex(args.complex, args.which)
    res = find_shelling(x, args.budget)
    payload = {"command": "shell check", "facets": len(x.facets), "dim": x.dim, **res.to_json()}
    _emit(payload, args.human, lambda p: f"{p['status']} ({p['facets']} facets, dim {p['dim']})")
    return EXIT_OK


def cmd_shell_threshold(args) -> int:
    try:
        dims = FacetDims(tuple(int(d) for d in args.dims.split(",") if d.strip()), args.ell)
        et = et_shelling_threshold(dims)
        sub = etsub_shelling_threshold(dims)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = {
        "command": "shell threshold",
        "dims": list(dims.dims),
        "ell": args.ell,
        "et_threshold": f"{et.numerator}/{et.denominator}",
        "etsub_threshold": f"{sub.numerator}/{sub.denominator}",
        "vanishing_threshold": str(vanishing_threshold(args.ell)),
    }
    _emit(payload, args.human, lambda p: "\n".join(f"{k}: {v}" for k, v in p.items()))
    return EXIT_OK


def cmd_inj_verify(args) -> int:
    if args.n is not None:
        if args.n < 1:
            raise UsageError("--n must be >= 1")
        try:
            report = verify_bjorner_wachs(args.n, cap=args.cap)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        kind = "bjorner-wachs"
    else:
        if args.graph is None or args.ell is None:
            raise UsageError("give --n, or --graph together with --ell")
        if args.ell < MIN_ELL:
            raise UsageError(f"--ell must be >= {MIN_ELL}")
        report = verify_filtration_quotient(_load_graph(args.graph), args.ell)
        kind = "filtration-quotient"
    payload = {"command": "inj verify", "check": kind, **report}
    _emit(payload, args.human, lambda p: f"{p['check']}: {p['status']}")
    return EXIT_OK if report["status"] == "PASS" else EXIT_FAIL


_SWEEP_FLAGS = ("n", "ell", "trials", "seed", "step_budget", "time_budget", "workers", "sampled_pairs")


def cmd_sweep(args) -> int:
    values: dict = {}
    if args.config:
        try:
            values.update(parse_config_text(Path(args.config).read_text()))
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc.strerror}") from None
    for key in _SWEEP_FLAGS:
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    if args.alpha_grid:
        try:
            values["alpha_grid"] = tuple(float(a) for a in args.alpha_grid.split(","))
        except ValueError:
            raise ConfigError(f"bad --alpha-grid {args.alpha_grid!r}") from None
    if args.pair_policy:
        values.update(parse_pair_policy(args.pair_policy))
    cfg = config_from_mapping(values)
    summary = run_sweep(cfg)
    paths = summary.write(args.out)
    payload = {
        "command": "sweep",
        "outputs": {k: str(v) for k, v in paths.items()},
        **summary.summary_json(),
    }
    _emit(payload, args.human, lambda p: summary.summary_csv())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eulermag", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--human", action="store_true", help="print a table instead of JSON")

    p = sub.add_parser("emh", help="eulerian magnitude homology of a graph")
    p.add_argument("graph", help="edge-list file")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--k", type=int, help="report only this degree")
    p.add_argument("--dump-chain", metavar="PATH", help="write the chain complex as JSON")
    common(p)
    p.set_defaults(func=cmd_emh)

    p = sub.add_parser("ai-verify", help="check the Asao-Izumihara isomorphism")
    p.add_argument("graph")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--dump", metavar="PATH", help="write the (ET, ETsub) pair as JSON (needs --a/--b)")
    common(p)
    p.set_defaults(func=cmd_ai_verify)

    p = sub.add_parser("shell", help="shellability tools")
    shell_sub = p.add_subparsers(dest="shell_command", required=True)
    q = shell_sub.add_parser("check", help="search for a shelling of a complex dump")
    q.add_argument("complex", help="complex or pair dump (JSON)")
    q.add_argument("--which", choices=("big", "sub"), help="member of a pair dump (default big)")
    q.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common(q)
    q.set_defaults(func=cmd_shell_check)
    q = shell_sub.add_parser("threshold", help="evaluate the shellability thresholds")
    q.add_argument("--dims", required=True, help="facet dimensions, comma separated, non-increasing")
    q.add_argument("--ell", type=int, required=True)
    common(q)
    q.set_defaults(func=cmd_shell_threshold)

    p = sub.add_parser("inj", help="complex of injective words")
    inj_sub = p.add_subparsers(dest="inj_command", required=True)
    q = inj_sub.add_parser("verify", help="Bjorner-Wachs (--n) or filtration quotient (--graph --ell)")
    q.add_argument("--n", type=int)
    q.add_argument("--cap", type=int, default=6)
    q.add_argument("--graph")
    q.add_argument("--ell", type=int)
    common(q)
    q.set_defaults(func=cmd_inj_verify)

    p = sub.add_parser("sweep", help="Monte Carlo sweep over G(n, n^-alpha)")
    p.add_argument("--config", help="key=value config file; flags override it")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--n", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--alpha-grid", help="comma-separated exponents")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=lambda s: int(s, 0))
    p.add_argument("--pair-policy", help="AUTO, ALL_PAIRS or SAMPLED(count)")
    p.add_argument("--sampled-pairs", type=int)
    p.add_argument("--step-budget", type=int)
    p.add_argument("--time-budget", type=float)
    p.add_argument("--workers", type=int)
    common(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GraphError, ConfigError, ComplexError, ShellingError) as exc:
        print(f"eulermag: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
