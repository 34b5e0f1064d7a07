"""Relation terms built from composition and intersection.

Grammar (left associative, composition binds tighter):

    term   := factor ('&' factor)*
    factor := atom ('o' atom)*
    atom   := identifier | '(' term ')'

The bare identifier ``o`` is the composition operator, so it cannot name a
variable; the unicode aliases ``∘`` and ``∩`` are accepted on input.  A
term also has a two-terminal series-parallel graph: a variable is a single
labeled edge, composition glues the right graph's source onto the left
graph's sink, and intersection merges both sources and both sinks.  A term
is regular when no vertex of that graph meets two distinct edges carrying
the same label.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .algebras import Algebra, classify_relation
from .errors import DimensionError, TermSyntaxError
from .relations import BinRel, compose, intersect, subset

__all__ = [
    "Var",
    "Compose",
    "Intersect",
    "RelTerm",
    "TermGraph",
    "parse_term",
    "term_to_text",
    "term_variables",
    "term_graph",
    "is_regular",
    "eval_term",
    "check_identity_iv",
]


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Compose:
    left: "RelTerm"
    right: "RelTerm"


@dataclass(frozen=True)
class Intersect:
    left: "RelTerm"
    right: "RelTerm"


RelTerm = Union[Var, Compose, Intersect]

_NAME_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_NAME_CONT = _NAME_START | set("0123456789")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "(":
            tokens.append(("lparen", ch, i))
            i += 1
        elif ch == ")":
            tokens.append(("rparen", ch, i))
            i += 1
        elif ch in ("&", "∩"):
            tokens.append(("intersect", ch, i))
            i += 1
        elif ch == "∘":
            tokens.append(("compose", ch, i))
            i += 1
        elif ch in _NAME_START:
            start = i
            while i < len(text) and text[i] in _NAME_CONT:
                i += 1
            word = text[start:i]
            tokens.append(("compose" if word == "o" else "name", word, start))
        else:
            raise TermSyntaxError(i, f"unexpected character {ch!r}")
    tokens.append(("end", "", len(text)))
    return tokens


def parse_term(text: str) -> RelTerm:
    """Parse a term; raises TermSyntaxError with the offending offset."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos]

    def atom():
        nonlocal pos
        kind, value, at = peek()
        if kind == "name":
            pos += 1
            return Var(value)
        if kind == "lparen":
            pos += 1
            inner = term()
            kind, _, at = peek()
            if kind != "rparen":
                raise TermSyntaxError(at, "expected ')'")
            pos += 1
            return inner
        raise TermSyntaxError(at, "expected a variable or '('")

    def factor():
        nonlocal pos
        node = atom()
        while peek()[0] == "compose":
            pos += 1
            node = Compose(node, atom())
        return node

    def term():
        nonlocal pos
        node = factor()
        while peek()[0] == "intersect":
            pos += 1
            node = Intersect(node, factor())
        return node

    node = term()
    kind, value, at = peek()
    if kind != "end":
        raise TermSyntaxError(at, f"unexpected {value!r} after the term")
    return node


def term_to_text(term: RelTerm) -> str:
    """Render with the fewest parentheses; parse_term round-trips the result."""
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Compose):
        left = term_to_text(term.left)
        if isinstance(term.left, Intersect):
            left = f"({left})"
        right = term_to_text(term.right)
        if not isinstance(term.right, Var):
            right = f"({right})"
        return f"{left} o {right}"
    left = term_to_text(term.left)
    right = term_to_text(term.right)
    if isinstance(term.right, Intersect):
        right = f"({right})"
    return f"{left} & {right}"


def term_variables(term: RelTerm) -> set[str]:
    if isinstance(term, Var):
        return {term.name}
    return term_variables(term.left) | term_variables(term.right)


@dataclass(frozen=True)
class TermGraph:
    """Two-terminal series-parallel graph of a term.

    Vertices are 0..vertex_count-1.  Edges keep their identity (the same
    endpoints and label may appear twice, one edge per variable
    occurrence); endpoints are unordered.
    """

    vertex_count: int
    edges: tuple[tuple[int, int, str], ...]
    source: int
    sink: int


def term_graph(term: RelTerm) -> TermGraph:
    parent: list[int] = []
    edges: list[tuple[int, int, str]] = []

    def fresh():
        parent.append(len(parent))
        return len(parent) - 1

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def merge(x, y):
        parent[find(x)] = find(y)

    def build(t):
        if isinstance(t, Var):
            s, k = fresh(), fresh()
            edges.append((s, k, t.name))
            return s, k
        ls, lk = build(t.left)
        rs, rk = build(t.right)
        if isinstance(t, Compose):
            merge(lk, rs)
            return ls, rk
        merge(ls, rs)
        merge(lk, rk)
        return ls, lk

    source, sink = build(term)
    index: dict[int, int] = {}
    out = []
    for u, v, label in edges:
        ru, rv = find(u), find(v)
        for r in (ru, rv):
            if r not in index:
                index[r] = len(index)
        out.append((index[ru], index[rv], label))
    return TermGraph(len(index), tuple(out), index[find(source)], index[find(sink)])


def is_regular(term: RelTerm) -> bool:
    """No vertex of the term graph meets two distinct same-label edges."""
    graph = term_graph(term)
    incident: dict[int, list[str]] = {v: [] for v in range(graph.vertex_count)}
    for u, v, label in graph.edges:
        incident[u].append(label)
        if v != u:
            incident[v].append(label)
    return all(len(labels) == len(set(labels)) for labels in incident.values())


def eval_term(term: RelTerm, env: dict[str, BinRel]) -> BinRel:
    """Evaluate over an environment of relations sharing one universe."""
    sizes = set()
    for name in sorted(term_variables(term)):
        if name not in env:
            raise ValueError(f"unbound variable {name!r}")
        sizes.add(env[name].n)
    if len(sizes) > 1:
        raise DimensionError(f"environment mixes universe sizes {sorted(sizes)}")

    def walk(t):
        if isinstance(t, Var):
            return env[t.name]
        if isinstance(t, Compose):
            return compose(walk(t.left), walk(t.right))
        return intersect(walk(t.left), walk(t.right))

    return walk(term)


def check_identity_iv(algebra: Algebra, p: RelTerm, q: RelTerm, env: dict[str, BinRel]) -> bool:
    """Does p ⊆ q hold after replacing every tolerance by its composition square?

    Every environment value must be a tolerance of the algebra; each
    variable binding theta is replaced by theta∘theta before evaluating
    both sides.
    """
    for name, rel in env.items():
        if not classify_relation(algebra, rel).tolerance:
            raise ValueError(f"binding {name!r} is not a tolerance of the algebra")
    squared = {name: compose(rel, rel) for name, rel in env.items()}
    return subset(eval_term(p, squared), eval_term(q, squared))
