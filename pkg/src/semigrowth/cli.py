"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 internal invariant violation,
4 inconclusive under the given budgets.
"""

from __future__ import annotations

import argparse
import io
import sys
from typing import Optional

from . import __version__
from .growth import (DEFAULT_CLOSURE_CAP, DEFAULT_FRONTIER_BUDGET, DEFAULT_MAX_N,
                     GeneratorSet, InvariantViolation, Verdict, growth_degree, mn_bruteforce)
from .linalg import NORM_KINDS
from .regseq import (AlphabetMismatch, Dfao, LinRep, SeqVerdict, add, convolve, eval_rep, from_dfao,
                     growth_degree_seq, minimize)
from .serialize import (InstanceError, dumps, growth_report_to_dict, instance_to_dict, parse_instance,
                        rat_from_json, rat_to_json, seq_report_to_dict, verify_report)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INVARIANT = 3
EXIT_INCONCLUSIVE = 4


class InputError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def load(path: str):
    try:
        return parse_instance(_read(path))
    except InstanceError as exc:
        raise InputError(f"{path}: {exc}") from None


def load_gens(path: str) -> GeneratorSet:
    obj = load(path)
    if not isinstance(obj, GeneratorSet):
        raise InputError(f"{path}: expected an instance of kind 'matrix_set'")
    return obj


def load_rep(path: str) -> LinRep:
    obj = load(path)
    if isinstance(obj, Dfao):
        return from_dfao(obj)
    if not isinstance(obj, LinRep):
        raise InputError(f"{path}: expected an instance of kind 'linrep' or 'dfao'")
    return obj


def _emit(text: str, out: Optional[str]):
    if out and out != "-":
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _budget_flags(p: argparse.ArgumentParser, max_n: int = DEFAULT_MAX_N):
    p.add_argument("--norm", choices=NORM_KINDS, default="inf_operator")
    p.add_argument("--max-n", type=int, default=max_n, help="length of the m_n table")
    p.add_argument("--word-budget", type=int, default=None, help="longest word searched (default 2d)")
    p.add_argument("--closure-cap", type=int, default=DEFAULT_CLOSURE_CAP)
    p.add_argument("--frontier-budget", type=int, default=DEFAULT_FRONTIER_BUDGET,
                   help="distinct products kept per length")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default from SEMIGROWTH_THREADS, else 1)")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--reproducible", action="store_true", help="omit the timestamp")


def cmd_analyze(args) -> int:
    gens = load_gens(args.path)
    report = growth_degree(gens, norm_kind=args.norm, max_n=args.max_n, word_budget=args.word_budget,
                           closure_cap=args.closure_cap, frontier_budget=args.frontier_budget,
                           threads=args.threads)
    data = growth_report_to_dict(report, reproducible=args.reproducible)
    problems = verify_report(data, gens)
    if problems:
        raise InvariantViolation("; ".join(problems))
    _emit(dumps(data), args.out)
    return EXIT_INCONCLUSIVE if report.verdict is Verdict.INCONCLUSIVE else EXIT_OK


def mn_csv(table) -> str:
    buf = io.StringIO()
    buf.write("n,m_n,frontier,truncated\n")
    for n, (v, f) in enumerate(zip(table.values, table.frontier_sizes)):
        flag = 1 if table.truncated_at is not None and n >= table.truncated_at else 0
        buf.write(f"{n},{rat_to_json(v)},{f},{flag}\n")
    if table.truncated:
        buf.write(f"# truncated at n={table.truncated_at}: frontier budget exceeded, "
                  f"m_n from there is a lower bound and later lengths were not computed\n")
    return buf.getvalue()


def cmd_mn(args) -> int:
    gens = load_gens(args.path)
    table = mn_bruteforce(gens, args.max_n, args.norm, args.frontier_budget, args.threads)
    _emit(mn_csv(table), args.out)
    return EXIT_OK


def cmd_regseq(args) -> int:
    sub = args.sub
    if sub == "eval":
        rep = load_rep(args.path)
        try:
            val = eval_rep(rep, args.word)
        except ValueError as exc:
            raise InputError(f"word {args.word!r}: {exc}") from None
        _emit(f"{rat_to_json(val)}\n", args.out)
        return EXIT_OK
    if sub in ("add", "conv"):
        f, g = load_rep(args.f), load_rep(args.g)
        if sub == "add":
            try:
                lam = rat_from_json(args.scalar if "/" in args.scalar else int(args.scalar))
            except ValueError:
                raise InputError(f"cannot parse scalar {args.scalar!r}") from None
            rep = add(f, g, lam)
        else:
            rep = convolve(f, g)
        _emit(dumps(instance_to_dict(rep)), args.out)
        return EXIT_OK
    if sub == "minimize":
        _emit(dumps(instance_to_dict(minimize(load_rep(args.path)))), args.out)
        return EXIT_OK
    # growth
    rep = load_rep(args.path)
    report = growth_degree_seq(rep, max_n=args.max_n, word_budget=args.word_budget,
                               closure_cap=args.closure_cap, frontier_budget=args.frontier_budget,
                               norm_kind=args.norm, threads=args.threads)
    data = seq_report_to_dict(report, reproducible=args.reproducible)
    if report.growth is not None:
        problems = verify_report(data["growth"], GeneratorSet(minimize(rep).matrices))
        if problems:
            raise InvariantViolation("; ".join(problems))
    _emit(dumps(data), args.out)
    return EXIT_INCONCLUSIVE if report.verdict is SeqVerdict.INCONCLUSIVE else EXIT_OK


def cmd_import_dfao(args) -> int:
    obj = load(args.path)
    if not isinstance(obj, Dfao):
        raise InputError(f"{args.path}: expected an instance of kind 'dfao'")
    _emit(dumps(instance_to_dict(from_dfao(obj))), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="semigrowth",
                                description="Growth of maximal norms of matrix products and regular sequences.")
    p.add_argument("--version", action="version", version=f"semigrowth {__version__}")
    sp = p.add_subparsers(dest="cmd", required=True)

    a = sp.add_parser("analyze", help="classify the growth of a matrix set")
    a.add_argument("path", help="matrix_set instance file, or - for stdin")
    _budget_flags(a)
    a.set_defaults(func=cmd_analyze)

    m = sp.add_parser("mn", help="exact m_n table as CSV")
    m.add_argument("path")
    _budget_flags(m)
    m.set_defaults(func=cmd_mn)

    r = sp.add_parser("regseq", help="operations on regular sequences")
    rs = r.add_subparsers(dest="sub", required=True)
    e = rs.add_parser("eval", help="evaluate on a word")
    e.add_argument("path")
    e.add_argument("word", help="word in the instance alphabet (or symbol numbers 1..m)")
    e.add_argument("--out", default=None)
    for name, help_ in (("add", "f + scalar * g"), ("conv", "convolution f * g")):
        q = rs.add_parser(name, help=help_)
        q.add_argument("f")
        q.add_argument("g")
        if name == "add":
            q.add_argument("--scalar", default="1", help="integer or p/q")
        q.add_argument("--out", default=None)
    mi = rs.add_parser("minimize", help="minimal equivalent representation")
    mi.add_argument("path")
    mi.add_argument("--out", default=None)
    g = rs.add_parser("growth", help="growth degree of a regular sequence")
    g.add_argument("path")
    _budget_flags(g, max_n=16)
    r.set_defaults(func=cmd_regseq)

    d = sp.add_parser("import-dfao", help="convert a DFAO instance to a linear representation")
    d.add_argument("path")
    d.add_argument("--out", default=None)
    d.set_defaults(func=cmd_import_dfao)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, AlphabetMismatch) as exc:
        print(f"semigrowth: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as exc:
        print(f"semigrowth: internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
