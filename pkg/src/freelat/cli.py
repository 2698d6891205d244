"""Command-line front end.

Exit codes are uniform across subcommands: 0 when the queried property
holds / all checks pass, 1 when it fails, 2 on usage or input errors.
Reports are deterministic: identical inputs give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import bipartite, covers, embed, reduction
from .canonical import canonical_joinands, canonicalize, is_canonical
from .covers import UnsupportedShape
from .order import equiv, is_independent, leq
from .terms import (ParseError, TermArena, TermError, _NameTable, parse_raw,
                    parse_term, print_term, tree_size)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


class CliError(Exception):
    pass


class _Deadline:
    def __init__(self, budget_secs: float | None):
        self.t0 = time.monotonic()
        self.budget = budget_secs

    def check(self, what: str) -> None:
        if self.budget is not None and time.monotonic() - self.t0 > self.budget:
            raise CliError(f"time budget exceeded during {what}")


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON: {exc}") from exc


def _structure(path: str) -> bipartite.BipartiteStructure:
    try:
        return bipartite.parse_structure(_load_json(path))
    except bipartite.StructureError as exc:
        raise CliError(f"{path}: {exc}") from exc


def _sentence(path: str) -> bipartite.AESentence:
    try:
        return bipartite.parse_sentence(_load_json(path))
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from exc


def _parse_terms(texts: list[str], args) -> tuple[TermArena, list]:
    arena = TermArena()
    names = _NameTable(args.vars)
    try:
        return arena, [parse_term(t, arena, names=names) for t in texts]
    except (ParseError, TermError) as exc:
        raise CliError(str(exc)) from exc


def _emit(args, text_lines: list[str], payload: dict) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        for line in text_lines:
            print(line)


def _bool_exit(value: bool) -> int:
    return EXIT_OK if value else EXIT_FAIL


# --- term subcommands -------------------------------------------------------

def cmd_le(args) -> int:
    _, (s, t) = _parse_terms([args.lhs, args.rhs], args)
    out = leq(s, t)
    _emit(args, [str(out).lower()], {"holds": out})
    return _bool_exit(out)


def cmd_equiv(args) -> int:
    _, (s, t) = _parse_terms([args.lhs, args.rhs], args)
    out = equiv(s, t)
    _emit(args, [str(out).lower()], {"holds": out})
    return _bool_exit(out)


def cmd_canon(args) -> int:
    _, (t,) = _parse_terms([args.term], args)
    c = canonicalize(t).term
    rendered = print_term(c, args.style)
    _emit(args, [rendered], {"canonical": rendered})
    return EXIT_OK


def cmd_is_canon(args) -> int:
    if args.raw:
        try:
            raw = parse_raw(args.term, args.vars)
        except (ParseError, TermError) as exc:
            raise CliError(str(exc)) from exc
        out = is_canonical(raw)
    else:
        _, (t,) = _parse_terms([args.term], args)
        out = is_canonical(t)
    _emit(args, [str(out).lower()], {"canonical": out})
    return _bool_exit(out)


def cmd_joinands(args) -> int:
    _, (t,) = _parse_terms([args.term], args)
    parts = [print_term(p) for p in canonical_joinands(t)]
    _emit(args, parts if parts else ["(none)"], {"joinands": parts})
    return EXIT_OK


def cmd_indep(args) -> int:
    _, ts = _parse_terms(args.terms, args)
    try:
        out = is_independent(ts)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    _emit(args, [str(out).lower()], {"independent": out})
    return _bool_exit(out)


def cmd_eset(args) -> int:
    _, (t,) = _parse_terms([args.term], args)
    try:
        us = sorted(covers.e_set(t), key=lambda u: u.id)
    except UnsupportedShape as exc:
        raise CliError(str(exc)) from exc
    rendered = [print_term(u) for u in us]
    _emit(args, rendered, {"eset": rendered})
    return EXIT_OK


def cmd_covers(args) -> int:
    _, (t,) = _parse_terms([args.term], args)
    try:
        cs = covers.doubly_minimal_join_covers(t)
    except UnsupportedShape as exc:
        raise CliError(str(exc)) from exc
    rendered = [sorted(print_term(u) for u in c) for c in cs]
    _emit(args, ["{" + ", ".join(c) + "}" for c in rendered],
          {"covers": rendered})
    return EXIT_OK


def cmd_psi(args) -> int:
    _, (t,) = _parse_terms([args.term], args)
    report = covers.psi_check(t)
    if args.report or args.format == "json":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(str(report.outcome).lower())
    return _bool_exit(report.outcome)


# --- structure subcommands --------------------------------------------------

def cmd_nice(args) -> int:
    report = bipartite.is_nice(_structure(args.structure))
    _emit(args, [str(report.nice).lower()]
          + [f"  {k}: {str(v).lower()}" for k, v in report.conditions.items()],
          report.to_dict())
    return _bool_exit(report.nice)


def cmd_eval(args) -> int:
    phi = _sentence(args.sentence)
    s = _structure(args.structure)
    result = bipartite.eval_ae_sentence(phi, s)
    lines = [str(result.holds).lower()]
    if result.witness is not None:
        lines.append("witness: " + " ".join(result.witness))
    _emit(args, lines, result.to_dict())
    return _bool_exit(result.holds)


def cmd_embed_poset(args) -> int:
    s = _structure(args.structure)
    arena = TermArena()
    images = reduction.xi_embed(s, arena)
    if args.mode == "f3":
        chain = embed.generator_chain(arena, len(s.elements))
        images = {k: embed.zeta(v, chain) for k, v in images.items()}
    rendered = {k: print_term(v) for k, v in images.items()}
    _emit(args, [f"{k} -> {v}" for k, v in rendered.items()],
          {"images": rendered})
    return EXIT_OK


def cmd_wq(args) -> int:
    s = _structure(args.structure)
    arena = TermArena()
    try:
        word = reduction.build_wq(s, arena)
    except reduction.EmptyJoinError as exc:
        raise CliError(str(exc)) from exc
    if args.mode == "f3":
        chain = embed.generator_chain(arena, len(s.elements))
        word = embed.zeta(word, chain)
    rendered = print_term(word, args.style)
    _emit(args, [rendered], {"word": rendered})
    return EXIT_OK


def cmd_phistar(args) -> int:
    phi = _sentence(args.sentence)
    print(reduction.emit_phi_star(phi, args.emit_format))
    return EXIT_OK


def _report_exit(report: reduction.ReductionReport, args) -> int:
    doc = report.to_dict()
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        for key, value in doc["checks"].items():
            print(f"{key}: {str(value).lower()}")
        if report.conclusion:
            print(f"conclusion: {report.conclusion}")
    if report.conclusion is not None:
        return EXIT_OK if report.conclusion == reduction.CONCLUSION_HOLDS \
            else EXIT_FAIL
    return _bool_exit(report.all_structure_checks)


def cmd_verify_lemma(args) -> int:
    s = _structure(args.structure)
    deadline = _Deadline(args.budget_secs)
    report = reduction.verify_lemma_wq(s, mode=args.mode)
    deadline.check("verification")
    return _report_exit(report, args)


def cmd_check_counterexample(args) -> int:
    phi = _sentence(args.sentence)
    s = _structure(args.structure)
    deadline = _Deadline(args.budget_secs)
    try:
        report = reduction.verify_counterexample(phi, s, mode=args.mode)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    deadline.check("verification")
    return _report_exit(report, args)


def cmd_whitman_gens(args) -> int:
    arena = TermArena()
    try:
        chain = embed.generator_chain(arena, args.count)
    except embed.ChainError as exc:
        raise CliError(str(exc)) from exc
    if args.stats:
        stats = embed.chain_stats(chain)
        payload = {"stages": stats, "arena_nodes": len(arena),
                   "z_tree_sizes": [tree_size(z) for z in chain.z]}
        _emit(args, [f"stage {s['stage_size']}: max tree {s['max_tree_size']}"
                     for s in stats]
              + [f"arena nodes: {len(arena)}"], payload)
    else:
        rendered = [print_term(z) for z in chain.z]
        _emit(args, [f"z{i} = {z}" for i, z in enumerate(rendered, 1)],
              {"z": rendered})
    return EXIT_OK


def cmd_verify_f3(args) -> int:
    s = _structure(args.structure)
    deadline = _Deadline(args.budget_secs)
    try:
        report = embed.verify_f3_lemma(s, embed_seed=args.seed)
    except (ValueError, embed.ChainError) as exc:
        raise CliError(str(exc)) from exc
    deadline.check("verification")
    return _report_exit(report, args)


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="freelat",
        description="Free-lattice computations: order, canonical forms, "
                    "join covers, poset embeddings, sentence translation.")
    top.add_argument("--format", choices=["text", "json"], default="text")
    top.add_argument("--vars", nargs="*", default=None,
                     help="generator names, in index order")
    top.add_argument("--budget-secs", type=float, default=None)
    top.add_argument("--seed", type=int, default=0,
                     help="seed for sampled spot checks")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        return p

    p = add("le", cmd_le, help="decide lhs <= rhs")
    p.add_argument("lhs")
    p.add_argument("rhs")

    p = add("equiv", cmd_equiv, help="decide lhs = rhs as lattice elements")
    p.add_argument("lhs")
    p.add_argument("rhs")

    p = add("canon", cmd_canon, help="print the canonical form")
    p.add_argument("term")
    p.add_argument("--style", choices=["ascii", "paper"], default="ascii")

    p = add("is-canon", cmd_is_canon, help="check the canonical-form conditions")
    p.add_argument("term")
    p.add_argument("--raw", action="store_true",
                   help="parse without normalization")

    p = add("joinands", cmd_joinands, help="joinands of the canonical form")
    p.add_argument("term")

    p = add("indep", cmd_indep, help="independence of a list of terms")
    p.add_argument("terms", nargs="+")

    p = add("eset", cmd_eset, help="neighbour set of a canonical meet of joins")
    p.add_argument("term")

    p = add("covers", cmd_covers, help="doubly minimal join covers")
    p.add_argument("term")

    p = add("psi", cmd_psi, help="nice-neighbour-poset check")
    p.add_argument("term")
    p.add_argument("--report", action="store_true")

    p = add("nice", cmd_nice, help="niceness of a bipartite structure")
    p.add_argument("structure")

    p = add("eval", cmd_eval, help="evaluate a sentence on a structure")
    p.add_argument("sentence")
    p.add_argument("structure")

    p = add("embed-poset", cmd_embed_poset, help="element-to-term embedding")
    p.add_argument("structure")
    p.add_argument("--mode", choices=["direct", "f3"], default="direct")

    p = add("wq", cmd_wq, help="build the word of a structure")
    p.add_argument("structure")
    p.add_argument("--mode", choices=["direct", "f3"], default="direct")
    p.add_argument("--style", choices=["ascii", "paper"], default="ascii")

    p = add("phistar", cmd_phistar, help="translate and emit a sentence")
    p.add_argument("sentence")
    p.add_argument("--format", dest="emit_format",
                   choices=["tptp", "sexp"], default="tptp")

    p = add("verify-lemma", cmd_verify_lemma,
            help="verify word checks on an instance")
    p.add_argument("structure")
    p.add_argument("--mode", choices=["direct", "f3"], default="direct")

    p = add("check-counterexample", cmd_check_counterexample,
            help="full pipeline on a sentence and a nice instance")
    p.add_argument("sentence")
    p.add_argument("structure")
    p.add_argument("--mode", choices=["direct", "f3"], default="direct")

    p = add("whitman-gens", cmd_whitman_gens,
            help="generators of the rank-3 embedding chain")
    p.add_argument("count", type=int)
    p.add_argument("--stats", action="store_true")

    p = add("verify-f3", cmd_verify_f3,
            help="instance verification in rank-3 mode")
    p.add_argument("structure")

    return top


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (TermError, UnsupportedShape, bipartite.StructureError,
            reduction.EmptyJoinError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
