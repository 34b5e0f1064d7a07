"""Command line front end and the plain-text algebra document format.

A document names one algebra and any number of reflexive relations:

    # comments run to end of line
    algebra NAME
    size N
    op NAME ARITY
    ... n**ARITY integers, row-major, first argument most significant ...
    rel NAME
    a b          # one ordered pair per line; the diagonal is implicit

Exit codes: 0 when the queried property holds (or the command just
reports), 1 when it fails, 2 for usage or format errors, 3 when a search
or enumeration budget runs out.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import decide
from .algebras import Algebra, OperationTable, classify_relation, expand, is_compatible
from .corpus import corpus_get, corpus_names
from .errors import BudgetExceeded, DocumentError
from .relations import BinRel, classify_shape, compose
from .terms import eval_term, is_regular, parse_term, term_variables

__all__ = ["Document", "parse_document", "print_document", "run", "main"]


@dataclass
class Document:
    """An algebra plus named reflexive relations, as read from a file."""

    name: str
    algebra: Algebra
    relations: dict[str, BinRel] = field(default_factory=dict)

    def __post_init__(self):
        for rname, rel in self.relations.items():
            if rel.n != self.algebra.n:
                raise ValueError(f"relation {rname!r} lives on {rel.n} elements, "
                                 f"algebra on {self.algebra.n}")
            if not all(rel.rows[a] >> a & 1 for a in range(rel.n)):
                raise ValueError(f"relation {rname!r} is missing diagonal pairs")


def _ints(tokens):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        return None


def parse_document(text: str) -> Document:
    """Parse the document format; all failures carry the offending line."""
    name = None
    n = None
    ops: list[OperationTable] = []
    op_names: set[str] = set()
    pending: dict | None = None
    relations: dict[str, list[int]] = {}
    current_rel: str | None = None

    def fail(lineno, message):
        raise DocumentError(lineno, message)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        values = _ints(tokens)
        if values is not None:
            if pending is not None:
                pending["values"].extend(values)
                for v in values:
                    if not (0 <= v < n):
                        fail(lineno, f"value {v} outside the universe of size {n}")
                if len(pending["values"]) > pending["want"]:
                    fail(lineno, f"operation {pending['name']!r} expects "
                                 f"{pending['want']} entries, got more")
                if len(pending["values"]) == pending["want"]:
                    ops.append(OperationTable(pending["name"], pending["arity"],
                                              tuple(pending["values"])))
                    pending = None
                continue
            if current_rel is not None:
                if len(values) != 2:
                    fail(lineno, "expected a pair of two integers")
                a, b = values
                if not (0 <= a < n and 0 <= b < n):
                    fail(lineno, f"pair ({a}, {b}) outside the universe of size {n}")
                relations[current_rel][a] |= 1 << b
                continue
            fail(lineno, "values outside an op or rel block")
        keyword = tokens[0]
        if pending is not None:
            fail(lineno, f"operation {pending['name']!r} expects {pending['want']} "
                         f"entries, got {len(pending['values'])}")
        current_rel = None
        if keyword == "algebra":
            if name is not None:
                fail(lineno, "duplicate algebra line")
            if len(tokens) != 2:
                fail(lineno, "expected: algebra NAME")
            name = tokens[1]
        elif keyword == "size":
            if name is None:
                fail(lineno, "size must follow the algebra line")
            if n is not None:
                fail(lineno, "duplicate size line")
            got = _ints(tokens[1:])
            if len(tokens) != 2 or got is None or got[0] <= 0:
                fail(lineno, "expected: size N with N positive")
            n = got[0]
        elif keyword == "op":
            if n is None:
                fail(lineno, "op must follow the size line")
            if len(tokens) < 3:
                fail(lineno, "expected: op NAME ARITY")
            arity = _ints(tokens[2:3])
            if arity is None or arity[0] < 0:
                fail(lineno, f"bad arity {tokens[2]!r}")
            if tokens[1] in op_names:
                fail(lineno, f"duplicate operation name {tokens[1]!r}")
            op_names.add(tokens[1])
            pending = {"name": tokens[1], "arity": arity[0],
                       "want": n ** arity[0], "values": []}
            inline = _ints(tokens[3:])
            if tokens[3:]:
                if inline is None:
                    fail(lineno, "table entries must be integers")
                for v in inline:
                    if not (0 <= v < n):
                        fail(lineno, f"value {v} outside the universe of size {n}")
                pending["values"].extend(inline)
                if len(pending["values"]) > pending["want"]:
                    fail(lineno, f"operation {pending['name']!r} expects "
                                 f"{pending['want']} entries, got more")
                if len(pending["values"]) == pending["want"]:
                    ops.append(OperationTable(pending["name"], pending["arity"],
                                              tuple(pending["values"])))
                    pending = None
        elif keyword == "rel":
            if n is None:
                fail(lineno, "rel must follow the size line")
            if len(tokens) != 2:
                fail(lineno, "expected: rel NAME")
            if tokens[1] in relations:
                fail(lineno, f"duplicate relation name {tokens[1]!r}")
            relations[tokens[1]] = [1 << a for a in range(n)]
            current_rel = tokens[1]
        else:
            fail(lineno, f"unknown keyword {keyword!r}")
    if pending is not None:
        fail(len(text.splitlines()) + 1,
             f"operation {pending['name']!r} expects {pending['want']} entries, "
             f"got {len(pending['values'])}")
    if name is None:
        fail(1, "missing algebra line")
    if n is None:
        fail(1, "missing size line")
    return Document(name, Algebra(n, tuple(ops)),
                    {rname: BinRel(n, rows) for rname, rows in relations.items()})


def print_document(doc: Document) -> str:
    """Canonical text form; parse_document round-trips it."""
    n = doc.algebra.n
    lines = [f"algebra {doc.name}", f"size {n}"]
    for op in doc.algebra.ops:
        lines.append(f"op {op.name} {op.arity}")
        if op.arity == 0:
            lines.append(str(op.table[0]))
        else:
            for start in range(0, len(op.table), n):
                lines.append(" ".join(str(v) for v in op.table[start:start + n]))
    for rname, rel in doc.relations.items():
        lines.append(f"rel {rname}")
        for a, b in rel.pairs():
            if a != b:
                lines.append(f"{a} {b}")
    return "\n".join(lines) + "\n"


def _rel_block(name: str, rel: BinRel) -> str:
    lines = [f"rel {name}"]
    for a, b in rel.pairs():
        if a != b:
            lines.append(f"{a} {b}")
    return "\n".join(lines)


def _rel_json(rel: BinRel) -> dict:
    return {"n": rel.n, "pairs": [[a, b] for a, b in rel.pairs()]}


def _pairs_text(rel: BinRel) -> str:
    offdiag = [f"{a} {b}" for a, b in rel.pairs() if a != b]
    return "; ".join(offdiag) if offdiag else "(diagonal)"


def _load_document(path: str) -> Document:
    try:
        with open(path, encoding="utf-8") as handle:
            return parse_document(handle.read())
    except OSError as err:
        raise DocumentError(0, f"cannot read {path}: {err.strerror}") from None


def _pick_relation(doc: Document, name: str | None) -> tuple[str, BinRel]:
    known = ", ".join(doc.relations) or "(none)"
    if name is None:
        if len(doc.relations) != 1:
            raise ValueError(
                f"--rel is required when the document does not have exactly "
                f"one relation; known: {known}")
        name = next(iter(doc.relations))
    if name not in doc.relations:
        raise ValueError(f"no relation named {name!r} in the document; known: {known}")
    return name, doc.relations[name]


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for line in text_lines:
            print(line)


def _cmd_check(args) -> int:
    doc = _load_document(args.file)
    rel_name, rel = _pick_relation(doc, args.rel)
    shape = classify_shape(rel)
    kind = classify_relation(doc.algebra, rel)
    compatible = is_compatible(doc.algebra, rel)
    flags = {
        "reflexive": shape.reflexive,
        "symmetric": shape.symmetric,
        "transitive": shape.transitive,
        "compatible": compatible,
        "admissible": kind.admissible,
        "tolerance": kind.tolerance,
        "congruence": kind.congruence,
    }
    payload = {"command": "check", "algebra": doc.name, "size": doc.algebra.n,
               "relation": rel_name, **flags}
    lines = [f"relation {rel_name} on algebra {doc.name} (size {doc.algebra.n})"]
    lines += [f"{key}: {'yes' if value else 'no'}" for key, value in flags.items()]
    _emit(args, payload, lines)
    return 0


def _cmd_represent(args) -> int:
    doc = _load_document(args.file)
    rel_name, rel = _pick_relation(doc, args.rel)
    witness = decide.find_representation(doc.algebra, rel, node_budget=args.node_budget)
    if witness is None:
        _emit(args, {"command": "represent", "relation": rel_name,
                     "representable": False, "witness": None},
              [f"{rel_name} is not representable"])
        return 1
    lines = [f"{rel_name} is representable"]
    if args.witness:
        lines.append(_rel_block("witness", witness.rel))
    _emit(args, {"command": "represent", "relation": rel_name,
                 "representable": True, "witness": _rel_json(witness.rel)}, lines)
    return 0


def _cmd_weak_represent(args) -> int:
    doc = _load_document(args.file)
    rel_name, rel = _pick_relation(doc, args.rel)
    witness = decide.find_weak_representation(doc.algebra, rel, rel_budget=args.rel_budget)
    if witness is None:
        _emit(args, {"command": "weak-represent", "relation": rel_name,
                     "weakly_representable": False, "separators": None},
              [f"{rel_name} is not weakly representable"])
        return 1
    lines = [f"{rel_name} is weakly representable ({len(witness.separators)} separators)"]
    if args.witness:
        for (a, b), sep in witness.separators.items():
            lines.append(_rel_block(f"sep_{a}_{b}", sep))
    payload = {"command": "weak-represent", "relation": rel_name,
               "weakly_representable": True,
               "separators": [{"pair": [a, b], "rel": _rel_json(sep)}
                              for (a, b), sep in witness.separators.items()]}
    _emit(args, payload, lines)
    return 0


def _cmd_expand(args) -> int:
    doc = _load_document(args.file)
    rel_name, rel = _pick_relation(doc, args.rel)
    bigger = expand(doc.algebra, rel)
    out = Document(f"{doc.name}_plus", bigger, dict(doc.relations))
    text = print_document(out)
    with open(args.output, "w", encoding="utf-8") as handle:
        handle.write(text)
    _emit(args, {"command": "expand", "relation": rel_name, "output": args.output,
                 "operations": len(bigger.ops)},
          [f"wrote {out.name} with {len(bigger.ops)} operations to {args.output}"])
    return 0


def _cmd_enumerate(args) -> int:
    doc = _load_document(args.file)
    truncated = False
    if args.kind == "admissible":
        result = decide.enumerate_admissible(doc.algebra, limit=args.limit or args.rel_budget)
        rels = list(result.relations)
        truncated = result.truncated
    elif args.kind == "tolerances":
        rels = decide.enumerate_tolerances(doc.algebra, limit=args.limit or args.rel_budget)
    else:
        rels = decide.enumerate_congruences(doc.algebra, limit=args.limit or args.rel_budget)
    lines = [f"{args.kind} of {doc.name}: {len(rels)}"
             + (" (truncated)" if truncated else "")]
    lines += [f"{i}: {_pairs_text(rel)}" for i, rel in enumerate(rels)]
    payload = {"command": "enumerate", "kind": args.kind, "count": len(rels),
               "truncated": truncated, "relations": [_rel_json(r) for r in rels]}
    _emit(args, payload, lines)
    return 0


def _cmd_permutable(args) -> int:
    doc = _load_document(args.file)
    report = decide.check_permutability(doc.algebra, limit=args.rel_budget)
    count = len(decide.enumerate_congruences(doc.algebra, limit=args.rel_budget))
    if report.permutable:
        _emit(args, {"command": "permutable", "permutable": True,
                     "congruence_count": count, "counterexample": None},
              [f"congruences permute ({count} congruences)"])
        return 0
    alpha, beta, (a, b) = report.counterexample
    payload = {"command": "permutable", "permutable": False, "congruence_count": count,
               "counterexample": {"alpha": _rel_json(alpha), "beta": _rel_json(beta),
                                  "pair": [a, b]}}
    _emit(args, payload, [
        "congruences do not permute",
        f"alpha: {_pairs_text(alpha)}",
        f"beta: {_pairs_text(beta)}",
        f"pair {a} {b} lies in alpha o beta but not in beta o alpha",
    ])
    return 1


def _cmd_term_eval(args) -> int:
    doc = _load_document(args.file)
    term = parse_term(args.term)
    env = {}
    for binding in args.bind or []:
        if "=" not in binding:
            raise ValueError(f"bad binding {binding!r}; expected VAR=REL")
        var, rel_name = binding.split("=", 1)
        env[var] = _pick_relation(doc, rel_name)[1]
    missing = sorted(term_variables(term) - set(env))
    if missing:
        raise ValueError(f"unbound term variables: {', '.join(missing)}")
    if args.square:
        env = {name: compose(rel, rel) for name, rel in env.items()}
    result = eval_term(term, env)
    _emit(args, {"command": "term-eval", "term": args.term, "squared": bool(args.square),
                 "result": _rel_json(result)},
          [f"term: {args.term}", _rel_block("result", result)])
    return 0


def _cmd_term_regular(args) -> int:
    term = parse_term(args.term)
    regular = is_regular(term)
    _emit(args, {"command": "term-regular", "term": args.term, "regular": regular},
          ["regular" if regular else "not regular"])
    return 0 if regular else 1


def _cmd_corpus(args) -> int:
    entry = corpus_get(args.name)
    doc = Document(entry.name, entry.algebra, dict(entry.relations))
    text = f"# {entry.notes}\n" + print_document(doc)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
        _emit(args, {"command": "corpus", "name": args.name, "output": args.output},
              [f"wrote {args.name} to {args.output}"])
    else:
        _emit(args, {"command": "corpus", "name": args.name, "document": text},
              [text.rstrip("\n")])
    return 0


def _cmd_verify_paper(args) -> int:
    from . import verify
    results = verify.run_all()
    lines = []
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        lines.append(f"{status} {res.name}: {res.detail}")
    all_passed = all(res.passed for res in results)
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    payload = {"command": "verify-paper", "all_passed": all_passed,
               "results": [{"name": r.name, "passed": r.passed, "detail": r.detail}
                           for r in results]}
    _emit(args, payload, lines)
    return 0 if all_passed else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tolrep",
        description="Tolerance representability workbench for finite algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, file=True, budgets=True):
        if file:
            p.add_argument("file", help="algebra document")
        p.add_argument("--json", action="store_true", help="structured output")
        if budgets:
            p.add_argument("--node-budget", type=int, default=decide.DEFAULT_NODE_BUDGET)
            p.add_argument("--rel-budget", type=int, default=decide.DEFAULT_REL_BUDGET)

    p = sub.add_parser("check", help="classify a named relation")
    common(p)
    p.add_argument("--rel", help="relation name (defaults to the only one)")
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("represent", help="decide theta = R o R-converse")
    common(p)
    p.add_argument("--rel", help="relation name (defaults to the only one)")
    p.add_argument("--witness", action="store_true", help="print the witness relation")
    p.set_defaults(handler=_cmd_represent)

    p = sub.add_parser("weak-represent", help="decide theta as an intersection of composites")
    common(p)
    p.add_argument("--rel", help="relation name (defaults to the only one)")
    p.add_argument("--witness", action="store_true", help="print the separator family")
    p.set_defaults(handler=_cmd_weak_represent)

    p = sub.add_parser("expand", help="adjoin all unary maps into theta-related pairs")
    common(p)
    p.add_argument("--rel", help="relation name (defaults to the only one)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=_cmd_expand)

    p = sub.add_parser("enumerate", help="list admissible relations, tolerances or congruences")
    common(p)
    p.add_argument("--kind", required=True,
                   choices=["admissible", "tolerances", "congruences"])
    p.add_argument("--limit", type=int, default=None)
    p.set_defaults(handler=_cmd_enumerate)

    p = sub.add_parser("permutable", help="check that all congruence pairs permute")
    common(p)
    p.set_defaults(handler=_cmd_permutable)

    p = sub.add_parser("term-eval", help="evaluate a composition/intersection term")
    common(p)
    p.add_argument("--term", required=True)
    p.add_argument("--bind", action="append", metavar="VAR=REL")
    p.add_argument("--square", action="store_true",
                   help="replace each binding theta by theta o theta first")
    p.set_defaults(handler=_cmd_term_eval)

    p = sub.add_parser("term-regular", help="check term regularity")
    common(p, file=False, budgets=False)
    p.add_argument("--term", required=True)
    p.set_defaults(handler=_cmd_term_regular)

    p = sub.add_parser("corpus", help="print or write a bundled algebra document")
    common(p, file=False, budgets=False)
    p.add_argument("name", help=f"one of: {', '.join(corpus_names())}")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(handler=_cmd_corpus)

    p = sub.add_parser("verify-paper", help="run the built-in verification suite")
    common(p, file=False, budgets=False)
    p.set_defaults(handler=_cmd_verify_paper)

    return parser


def run(argv: list[str]) -> int:
    """Execute one command; returns the exit code instead of raising."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.handler(args)
    except BudgetExceeded as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def main() -> None:
    try:
        code = run(sys.argv[1:])
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); suppress the traceback
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = 0
    sys.exit(code)
