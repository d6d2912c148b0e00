"""Command-line interface.

Exit codes: 0 success, 1 usage or parse error, 2 verification failed or
counterexample found, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict
from typing import Optional, Sequence

from . import instance as docs
from .abelian import ElementSet, is_good_abelian_order, stabilizer
from .codes import (
    EnumerationBoundError,
    SearchLimits,
    enumerate_total_perfect_codes,
    is_total_perfect_code,
)
from .factorization import cyclic_certificate, multivariate_certificate, unique_sum_factorization
from .graph import CayleySumGraph, export_dot, is_connected_algebraic, is_connected_bfs, is_regular
from .theorems import (
    CASE_IDS,
    HypothesisError,
    ScanSpace,
    applicable_cases,
    check_case,
    scan,
)

EXIT_OK, EXIT_USAGE, EXIT_FAILED, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt_elem(g) -> str:
    return str(g[0]) if len(g) == 1 else "(" + ",".join(map(str, g)) + ")"


def _fmt_set(X: ElementSet) -> str:
    return "{" + ", ".join(_fmt_elem(g) for g in X.elements()) + "}"


def _yn(b) -> str:
    return "yes" if b else "no"


def _emit(out, pairs: list[tuple[str, object]], as_json: bool):
    if as_json:
        out.write(json.dumps(dict(pairs), indent=2) + "\n")
    else:
        for k, v in pairs:
            out.write(f"{k}: {v}\n")


def _load(args) -> docs.InstanceDocument:
    if getattr(args, "file", None):
        if args.group or args.set:
            raise UsageError("give either an instance file or --group/--set, not both")
        return docs.load(args.file)
    if not args.group or not args.set:
        raise UsageError("an instance file or both --group and --set are required")
    G = docs.parse_group(args.group)
    S = docs.parse_set(G, args.set, "S")
    if not S:
        raise docs.InstanceError("S", "connection set must be nonempty")
    C = docs.parse_set(G, args.code, "C") if args.code else None
    return docs.InstanceDocument(G, S, C)


def cmd_info(args, out) -> int:
    doc = _load(args)
    G, S = doc.group, doc.S
    graph = CayleySumGraph(G, S)
    conn = is_connected_algebraic(graph)
    H = stabilizer(G, S)
    good, label = is_good_abelian_order(G.order)
    degree = is_regular(graph)
    cases = [c.identifier for c in applicable_cases(G, S)]
    pairs = [
        ("group", str(G)),
        ("order", G.order),
        ("S", _fmt_set(S)),
        ("|S|", len(S)),
        ("square-free", _yn(graph.square_free)),
        ("stabilizer", _fmt_set(H)),
        ("periodic", _yn(len(H) > 1)),
        ("<S> order", len(conn.span)),
        ("<S-S> order", len(conn.difference_span)),
        ("<S-S> index", conn.index),
        ("connected (algebraic)", _yn(conn.connected)),
        ("connected (bfs)", _yn(is_connected_bfs(graph))),
        ("regular", degree if degree is not None else "no"),
        ("good abelian order", f"{_yn(good)} ({label})"),
        ("applicable cases", ", ".join(cases) if cases else "none"),
    ]
    _emit(out, pairs, args.json)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    doc = _load(args)
    if doc.C is None:
        raise docs.InstanceError("C", "verify needs a code C")
    G, S, C = doc.group, doc.S, doc.C
    graph = CayleySumGraph(G, S)
    check = is_total_perfect_code(graph, C)
    if C:
        fact = unique_sum_factorization(G, C.negate(), S).is_factorization
        cert = cyclic_certificate(G.order, C, S) if G.rank == 1 else multivariate_certificate(G, C, S)
        cert_ok = cert.passed
        vector = cert.vector.reshape(-1).tolist()
    else:
        fact = cert_ok = False
        vector = None
    conn = is_connected_algebraic(graph)
    tpc = "pass" if check else (
        f"fail (vertex {_fmt_elem(G.decode(check.vertex))} has {check.count} neighbours in C)"
    )
    pairs = [
        ("group", str(G)),
        ("S", _fmt_set(S)),
        ("C", _fmt_set(C)),
        ("total perfect code", tpc),
        ("factorization G = (-C) + S", "pass" if fact else "fail"),
        ("cyclic certificate" if G.rank == 1 else "multivariate certificate", "pass" if cert_ok else "fail"),
        ("connected (algebraic)", _yn(conn.connected)),
        ("connected (bfs)", _yn(is_connected_bfs(graph))),
        ("<S> = G", _yn(len(conn.span) == G.order)),
        ("<S-S> = G", _yn(len(conn.difference_span) == G.order)),
    ]
    if args.json:
        pairs.append(("convolution", vector))
    _emit(out, pairs, args.json)
    return EXIT_OK if (check.ok and fact and cert_ok) else EXIT_FAILED


def cmd_search(args, out) -> int:
    doc = _load(args)
    graph = CayleySumGraph(doc.group, doc.S)
    limits = SearchLimits(args.max, args.budget, args.size)
    result = enumerate_total_perfect_codes(graph, limits, jobs=args.jobs if args.budget is None else 1)
    state = "complete" if result.complete else "incomplete"
    if args.json:
        out.write(json.dumps({
            "codes": [[list(g) for g in c.elements()] for c in result.codes],
            "count": len(result.codes),
            "complete": result.complete,
        }, indent=2) + "\n")
    else:
        out.write(f"{len(result.codes)} codes found ({state})\n")
        for c in result.codes:
            out.write(_fmt_set(c) + "\n")
    if args.save and result.codes:
        saved = docs.InstanceDocument(doc.group, doc.S, result.codes[0], doc.name, doc.notes)
        with open(args.save, "w", encoding="utf-8") as f:
            f.write(docs.dumps(saved))
    return EXIT_OK if result.complete else EXIT_BUDGET


def cmd_check(args, out) -> int:
    doc = _load(args)
    if args.case not in CASE_IDS:
        raise docs.InstanceError("case", f"unknown case id {args.case!r}; known: {', '.join(CASE_IDS)}")
    limits = SearchLimits(node_budget=args.budget)
    try:
        v = check_case(args.case, doc.group, doc.S, limits)
    except HypothesisError as e:
        out.write(f"hypotheses met: no\nreason: {e}\n")
        return EXIT_USAGE
    if args.json:
        out.write(json.dumps(asdict(v), indent=2) + "\n")
    else:
        pairs = [
            ("case", v.case),
            ("hypotheses met", _yn(v.hypotheses_met)),
            ("condition holds", _yn(v.condition_holds)),
            ("tpc exists", _yn(v.tpc_exists)),
            ("consistent", _yn(v.consistent)),
        ]
        if v.codes_found is not None:
            pairs.append(("codes found", v.codes_found))
        if v.witness is not None:
            pairs.append(("witness", "{" + ", ".join(_fmt_elem(g) for g in v.witness) + "}"))
        if v.family_match is not None:
            pairs.append(("family match", _yn(v.family_match)))
        if v.transport_ok is not None:
            pairs.append(("quotient transport", _yn(v.transport_ok)))
        pairs.append(("complete", _yn(v.complete)))
        _emit(out, pairs, False)
    if not v.complete:
        return EXIT_BUDGET
    return EXIT_OK if v.consistent else EXIT_FAILED


def _case_list(text: str) -> list[str]:
    if text.strip().lower() == "all":
        return list(CASE_IDS)
    ids = [c.strip() for c in text.split(",") if c.strip()]
    for c in ids:
        if c not in CASE_IDS:
            raise docs.InstanceError("cases", f"unknown case id {c!r}; known: {', '.join(CASE_IDS)}")
    return ids


def cmd_scan(args, out) -> int:
    cases = _case_list(args.cases)
    space = None
    if args.max_n is not None:
        if args.max_n < 2:
            raise docs.InstanceError("max-n", "must be >= 2")
        space = ScanSpace(tuple(range(2, args.max_n + 1)), args.max_n, max_degree=args.max_degree or 6)
    elif args.max_degree is not None:
        raise UsageError("--max-degree needs --max-n")
    report = scan(cases, space, SearchLimits(node_budget=args.budget), jobs=args.jobs)
    out.write(report.to_json() if args.json else report.to_text())
    if report.counterexamples:
        return EXIT_FAILED
    return EXIT_OK if report.complete else EXIT_BUDGET


def cmd_dot(args, out) -> int:
    doc = _load(args)
    highlight = None
    if args.highlight is not None:
        if args.highlight == "C":
            if doc.C is None:
                raise docs.InstanceError("C", "--highlight without a set needs a code C in the instance")
            highlight = doc.C
        else:
            highlight = docs.parse_set(doc.group, args.highlight, "highlight")
    text = export_dot(CayleySumGraph(doc.group, doc.S), highlight)
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        out.write(text)
    return EXIT_OK


def _instance_args(p: argparse.ArgumentParser):
    p.add_argument("file", nargs="?", help="instance JSON file")
    p.add_argument("--group", help="inline group, e.g. 4x4")
    p.add_argument("--set", help='inline connection set, e.g. "(0,1),(1,1)"')
    p.add_argument("--code", help="inline code C")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sumcodes", description="Total perfect codes in Cayley sum graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    jobs_default = os.cpu_count() or 1

    p = sub.add_parser("info", help="facts about CS(G, S)")
    _instance_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("verify", help="check a code three ways")
    _instance_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="enumerate total perfect codes")
    _instance_args(p)
    p.add_argument("--max", type=int, help="stop after this many codes")
    p.add_argument("--budget", type=int, help="search node budget")
    p.add_argument("--size", type=int, help="only codes of at most this size")
    p.add_argument("--save", help="write the instance with the first code found")
    p.add_argument("--jobs", type=int, default=jobs_default)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("check", help="check one theorem case on an instance")
    _instance_args(p)
    p.add_argument("--case", required=True, help="one of " + ", ".join(CASE_IDS))
    p.add_argument("--budget", type=int, help="search node budget")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("scan", help="scan theorem cases for counterexamples")
    p.add_argument("--cases", required=True, help="comma-separated case ids, or 'all'")
    p.add_argument("--max-n", type=int, help="cyclic n in [2, N] and products with |G| <= N")
    p.add_argument("--max-degree", type=int, help="largest |S| (default 6)")
    p.add_argument("--budget", type=int, help="search node budget per instance")
    p.add_argument("--jobs", type=int, default=jobs_default)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("dot", help="export the graph in DOT format")
    _instance_args(p)
    p.add_argument("--highlight", nargs="?", const="C", help="set to fill; bare flag uses the code C")
    p.add_argument("-o", "--output", help="output path (default stdout)")
    p.set_defaults(func=cmd_dot)
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (UsageError, docs.InstanceError, EnumerationBoundError, OSError, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
