"""Command-line front end: ``rigidcore <command> ...``.

Exit codes: 0 ok, 1 assertion failure (e.g. non-isomorphic, failed check),
2 undecided (budget exhausted or structural property failed), 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from rigidcore.canonical import IsoOutcome, canonical_label, iso_test
from rigidcore.core import core_partition, two_core
from rigidcore.cycles import census_compatible, log_bound
from rigidcore.errors import DomainError, ParseError, Undecided
from rigidcore.experiments import EXPERIMENTS, ExperimentConfig, report_csv, report_json, run_experiment
from rigidcore.graph import Graph, format_edge_list, gnp_sample, induced_subgraph, read_edge_list
from rigidcore.oracle import DEFAULT_BUDGET, automorphism_group
from rigidcore.prob import pi_decay_profile, verify_lemma1_grid
from rigidcore.reconstruction import deck, read_deck, reconstruct_from_deck, write_deck

OK, FAILED, UNDECIDED, USAGE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_gen(args) -> int:
    G = gnp_sample(args.n, args.p, args.seed)
    _emit(format_edge_list(G), args.out)
    return OK


def cmd_core(args) -> int:
    G = read_edge_list(args.input)
    if args.partition:
        _emit(_dump(core_partition(G).to_json()), args.out)
    else:
        _emit(f"{len(two_core(G))}\n", args.out)
    return OK


def cmd_canon(args) -> int:
    G = read_edge_list(args.input)
    res = canonical_label(G, strict=args.strict)
    info = {"ok": res.ok, "labeling": res.labeling,
            "violation": res.violation.to_json() if res.violation else None,
            "warnings": [w.to_json() for w in res.warnings]}
    if res.ok and args.out:
        Path(args.out).write_text(format_edge_list(res.form_graph(G.n)))
    sys.stdout.write(_dump(info))
    return OK if res.ok else UNDECIDED


def cmd_iso(args) -> int:
    outcome = iso_test(read_edge_list(args.a), read_edge_list(args.b), strict=args.strict)
    sys.stdout.write(outcome.name.lower() + "\n")
    return {IsoOutcome.ISOMORPHIC: OK, IsoOutcome.NON_ISOMORPHIC: FAILED,
            IsoOutcome.UNDECIDED: UNDECIDED}[outcome]


def cmd_aut(args) -> int:
    G = read_edge_list(args.input)
    if args.core_only:
        G, _ = induced_subgraph(G, two_core(G))
    group = automorphism_group(G, args.budget)
    _emit(_dump(group.to_json()), args.out)
    return OK


def cmd_census(args) -> int:
    G = read_edge_list(args.input)
    max_k = args.max_k or max(3, log_bound(G.n))
    rep = census_compatible(G, max_k, args.budget, args.seed)
    if args.format == "csv":
        row = rep.to_json()
        text = ",".join(sorted(row)) + "\n" + ",".join(str(row[k]) for k in sorted(row)) + "\n"
    else:
        text = _dump(rep.to_json())
    _emit(text, args.out)
    return UNDECIDED if rep.undecided else OK


def cmd_deck(args) -> int:
    write_deck(deck(read_edge_list(args.input)), args.out)
    return OK


def cmd_recon(args) -> int:
    res = reconstruct_from_deck(read_deck(args.deck))
    if not res.ok:
        sys.stderr.write(f"reconstruction failed at step {res.step}: {res.message}\n")
        return FAILED
    _emit(format_edge_list(res.graph), args.out)
    return OK


def cmd_prob(args) -> int:
    if args.prob_cmd == "verify-lemma1":
        cases, failures = verify_lemma1_grid(args.max_m, args.max_k, Fraction(args.grid).limit_denominator(10**6))
        sys.stdout.write(_dump({"cases": cases, "failures": [[m, [str(x) for x in p]] for m, p in failures]}))
        return OK if not failures else FAILED
    rows = pi_decay_profile(args.k, args.p, args.m_list)
    lines = ["m,pi,statistic,folded_mass,undecided"]
    for r in rows:
        lines.append(",".join("" if x is None else str(x)
                              for x in (r.m, r.pi, r.statistic, r.folded_mass, int(r.undecided))))
    _emit("\n".join(lines) + "\n", args.out)
    return UNDECIDED if any(r.undecided for r in rows) else OK


def cmd_experiment(args) -> int:
    if args.p is not None:
        mode, c = "explicit", None
    elif args.c is not None:
        mode, c = args.p_mode, args.c
    else:
        raise DomainError("give --p or --c")
    cfg = ExperimentConfig(name=args.name, n=args.n, p=args.p, c=c, p_mode=mode,
                           trials=args.trials, seed=args.seed, workers=args.workers,
                           budget=args.budget, max_k=args.max_k, pairs=args.pairs,
                           min_rate=args.min_rate, timings=args.timings)
    report = run_experiment(cfg)
    _emit(report_csv(report) if args.format == "csv" else report_json(report), args.out)
    return FAILED if report["aggregate"]["verdict"] == "fail" else OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out")
    common.add_argument("--workers", type=int, default=1)

    parser = _Parser(prog="rigidcore", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", parents=[common], help="sample G(n, p) as an edge list")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("core", parents=[common], help="2-core size or full partition")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--partition", action="store_true")
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("canon", parents=[common], help="canonical labelling")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--strict", action="store_true", help="treat the diameter property as a hard failure")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("iso", parents=[common], help="isomorphism test via canonical forms")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("aut", parents=[common], help="automorphism group order")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--core-only", action="store_true")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("census", parents=[common], help="search for compatible configurations")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--max-k", type=int)
    p.add_argument("--budget", type=int, default=10**5)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("deck", parents=[common], help="write the deck of a graph")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_deck)
    p.set_defaults(out_required=True)

    p = sub.add_parser("recon", parents=[common], help="reconstruct a graph from a deck directory")
    p.add_argument("--deck", required=True)
    p.set_defaults(func=cmd_recon)

    p = sub.add_parser("prob", help="multinomial mode computations")
    psub = p.add_subparsers(dest="prob_cmd", required=True, parser_class=_Parser)
    q = psub.add_parser("verify-lemma1", parents=[common])
    q.add_argument("--max-m", type=int, default=10)
    q.add_argument("--max-k", type=int, default=4)
    q.add_argument("--grid", default="0.05")
    q.set_defaults(func=cmd_prob)
    q = psub.add_parser("pi-profile", parents=[common])
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--p", type=float, required=True)
    q.add_argument("--m-list", type=int, nargs="+", required=True)
    q.set_defaults(func=cmd_prob)

    p = sub.add_parser("experiment", parents=[common], help="seeded Monte Carlo experiment")
    p.add_argument("name", choices=EXPERIMENTS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--p-mode", choices=("c_over_n", "c_logn_over_n"), default="c_over_n")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--max-k", type=int)
    p.add_argument("--pairs", type=int, default=10**6)
    p.add_argument("--min-rate", type=float, help="pass-rate threshold for the exit code")
    p.add_argument("--timings", action="store_true", help="add per-trial seconds (breaks byte-identity)")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "out_required", False) and not args.out:
        parser.error("--out is required for this command")
    try:
        return args.func(args)
    except (ParseError, DomainError, ValueError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE
    except Undecided as exc:
        sys.stderr.write(f"undecided: {exc}\n")
        return UNDECIDED


if __name__ == "__main__":
    sys.exit(main())
