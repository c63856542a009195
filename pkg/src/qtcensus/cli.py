"""Command-line entry point.

Every report is JSON (or CSV for ``scan``) headed by the fully resolved run
configuration, so identical invocations produce byte-identical output.

Exit codes: 0 success, 1 a check or verification failed, 2 usage error,
3 budget or overflow error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from . import __version__, automata, config, crt, querytable
from .errors import (
    BudgetExceededError,
    CapExceededError,
    CensusError,
    OutOfDomainError,
    OverflowDomainError,
    SearchExhaustedError,
)
from .oracles import LanguageOracle, OracleKind
from .words import BitWord

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_SEED = 20040101


class UsageError(Exception):
    pass


def _int_list(text):
    return [int(s) for s in text.split(",") if s.strip()]


def _add_oracle_args(p):
    p.add_argument("--oracle", required=True, choices=[k.value for k in OracleKind])
    p.add_argument("--automaton", metavar="FILE", help="automaton file for --oracle automaton")
    p.add_argument("--members", default="", help="comma-separated integers for --oracle explicit")
    p.add_argument("--cutoff", type=int, help="domain bound for --oracle explicit")


def _oracle(args) -> LanguageOracle:
    kind = OracleKind(args.oracle)
    if kind is OracleKind.AUTOMATON:
        if not args.automaton:
            raise UsageError("--oracle automaton needs --automaton FILE")
        return LanguageOracle.from_automaton(automata.load(args.automaton))
    if kind is OracleKind.EXPLICIT:
        if args.cutoff is None:
            raise UsageError("--oracle explicit needs --cutoff")
        return LanguageOracle.explicit(_int_list(args.members), args.cutoff)
    return LanguageOracle.named(kind.value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtcensus", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--output", "-o", metavar="PATH", help="write the report here instead of stdout")
    parser.add_argument("--window-cap", type=int, help="max entries per sieve window")
    parser.add_argument("--profile-cap", type=int, help="in-memory profiles before spilling to disk")
    parser.add_argument("--work-cap", type=int, help="enumeration budget for residuals/bound checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profiles", help="profile of order n of one suffix y")
    _add_oracle_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--y", type=int, required=True)

    p = sub.add_parser("scan", help="census of distinct profiles over a y-range")
    _add_oracle_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--y-lo", type=int, default=0)
    p.add_argument("--y-hi", type=int, required=True)
    p.add_argument("--chunk-y", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("richness", help="rich/poor interval census of the primes")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("construct", help="build a witness y with a prescribed squarefree profile")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", default="", help="comma-separated target residues (empty for the empty set)")
    p.add_argument("--z-bound", type=int)
    p.add_argument("--max-order", type=int, default=3)

    p = sub.add_parser("verify", help="re-verify a serialized witness")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--witness", metavar="FILE")
    g.add_argument("--replay", metavar="FILE")

    p = sub.add_parser("coverage", help="fraction of subsets of S realized as squarefree profiles")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--y-bound", type=int, required=True)
    p.add_argument("--chunk-y", type=int)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("automaton", help="acceptance, reachability census and profile bound of an automaton")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--file", metavar="FILE")
    src.add_argument("--random-dfa", type=int, metavar="STATES")
    src.add_argument("--random-alternating", type=int, metavar="STATES")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--word", action="append", default=[], help="word in reading order, e.g. 0101")
    p.add_argument("--profile-order", type=int, help="run the DFA profile bound check at this order")
    p.add_argument("--suffix-max", type=int, default=12)
    p.add_argument("--dump", action="store_true", help="include the automaton text in the report")

    p = sub.add_parser("residuals", help="count residual classes of short prefixes")
    _add_oracle_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    return parser


def _resolved_config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "output"}
    cfg["caps"] = config.defaults()
    return cfg


# ---------------------------------------------------------------- commands


def _cmd_profiles(args):
    p = querytable.profile(_oracle(args), args.n, args.y)
    return EXIT_OK, {"n": args.n, "y": args.y, "members": p.members(), "hex": p.hex(), "size": len(p)}


def _scan(args):
    return querytable.scan_profiles(
        _oracle(args), args.n, args.y_lo, args.y_hi, chunk_y=args.chunk_y, workers=args.workers
    )


def _cmd_richness(args):
    r = querytable.richness_report(args.x, args.n)
    code = EXIT_OK if r.rich_bound_holds and r.poor_bound_holds else EXIT_FAILED
    return code, r.to_dict()


def _cmd_construct(args):
    T = crt.parse_subset(args.t, args.n) if args.n >= 1 else ()
    w = crt.construct_witness(args.n, T, z_bound=args.z_bound, max_order=args.max_order)
    return (EXIT_OK if w.verified else EXIT_FAILED), w.to_dict()


def _cmd_verify(args):
    path = args.witness or args.replay
    try:
        with open(path) as fh:
            w = crt.CrtWitness.from_json(fh.read())
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"{path}: not a witness file ({exc})") from exc
    ok, transcript = crt.verify_witness(w)
    failing = [e for e in transcript if not e["ok"]]
    for e in failing:
        print(f"verification failed: {e}", file=sys.stderr)
    return (EXIT_OK if ok else EXIT_FAILED), {"verified": ok, "failures": failing, "transcript": transcript}


def _cmd_coverage(args):
    c = crt.profile_coverage_census(args.n, args.y_bound, chunk_y=args.chunk_y, workers=args.workers)
    code = EXIT_OK if (args.n < 2 or c.all_inside) else EXIT_FAILED
    return code, c.to_dict()


def _cmd_automaton(args):
    rng = random.Random(args.seed)
    if args.file:
        aut = automata.load(args.file)
    elif args.random_dfa:
        aut = automata.random_dfa(rng, args.random_dfa)
    else:
        aut = automata.random_alternating(rng, args.random_alternating)
    kind = "deterministic" if aut.is_deterministic else "nondeterministic" if aut.is_nondeterministic else "alternating"
    out = {
        "states": len(aut.states),
        "class": kind,
        "census": automata.reachable_census(aut, args.depth),
        "censusNote": "exact" if aut.is_deterministic else "over-approximation: states occurring as atoms",
        "accepts": {w: automata.accepts(aut, BitWord.parse(w)) for w in args.word},
    }
    code = EXIT_OK
    if args.profile_order is not None:
        check = querytable.dfa_profile_bound_check(aut, args.profile_order, args.suffix_max)
        out["profileBound"] = check.to_dict()
        code = EXIT_OK if check.holds else EXIT_FAILED
    if args.dump:
        out["automaton"] = automata.dumps(aut)
    return code, out


def _cmd_residuals(args):
    return EXIT_OK, automata.residual_count(_oracle(args), args.n, args.d).to_dict()


_COMMANDS = {
    "profiles": _cmd_profiles,
    "richness": _cmd_richness,
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "coverage": _cmd_coverage,
    "automaton": _cmd_automaton,
    "residuals": _cmd_residuals,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    caps = {"window_cap": args.window_cap, "profile_map_cap": args.profile_cap, "work_cap": args.work_cap}
    if args.command == "construct":
        caps["z_bound"] = args.z_bound
    try:
        with config.overrides(**caps):
            header = _resolved_config(args)
            if args.command == "scan":
                scan = _scan(args)
                code = EXIT_OK
                if args.format == "csv":
                    text = "# config: " + json.dumps(header, sort_keys=True) + "\n" + scan.to_csv()
                else:
                    text = _render(header, scan.to_dict())
            else:
                code, result = _COMMANDS[args.command](args)
                text = _render(header, result)
    except (UsageError, ValueError, OutOfDomainError, OSError) as exc:
        # MalformedAutomatonError is a ValueError
        print(f"qtcensus: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BudgetExceededError, OverflowDomainError, CapExceededError, SearchExhaustedError) as exc:
        print(f"qtcensus: budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CensusError as exc:  # pragma: no cover - every subclass is mapped above
        print(f"qtcensus: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def _render(header, result) -> str:
    return json.dumps({"config": header, "result": result}, sort_keys=True, indent=2) + "\n"


def main():  # pragma: no cover
    sys.exit(run())
