"""Decision procedures for tolerance representability.

A tolerance theta of a finite algebra is representable when some reflexive
compatible R satisfies theta = R∘R⁻, and weakly representable when theta
is an intersection of such composites.  Both questions are decided exactly
here, alongside the enumerations they lean on (admissible relations,
tolerances, congruences) and a congruence permutability check.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import islice
from typing import Iterator, Optional

from .algebras import Algebra, _grow, classify_relation, closure, is_compatible
from .errors import BudgetExceeded
from .relations import BinRel, _bits, compose, converse, intersect, subset

__all__ = [
    "DEFAULT_NODE_BUDGET",
    "DEFAULT_REL_BUDGET",
    "RepWitness",
    "WeakRepWitness",
    "PermutabilityReport",
    "AdmissibleEnumeration",
    "find_representation",
    "exhaustive_representation",
    "verify_representation",
    "represent_via_order",
    "iter_admissible",
    "enumerate_admissible",
    "find_weak_representation",
    "verify_weak_representation",
    "enumerate_tolerances",
    "enumerate_congruences",
    "tolerance_join",
    "check_permutability",
]

DEFAULT_NODE_BUDGET = 10**6
DEFAULT_REL_BUDGET = 10**5


@dataclass(frozen=True)
class RepWitness:
    """A reflexive compatible R whose composite with its converse is theta."""

    rel: BinRel


@dataclass(frozen=True)
class WeakRepWitness:
    """One separator per ordered pair outside theta.

    Each separator R is reflexive and compatible with theta inside R∘R⁻
    and the keyed pair outside it, so the intersection of the composites
    over the whole family is exactly theta.
    """

    separators: dict[tuple[int, int], BinRel]


@dataclass(frozen=True)
class PermutabilityReport:
    permutable: bool
    counterexample: Optional[tuple[BinRel, BinRel, tuple[int, int]]] = None


def _require_tolerance(algebra: Algebra, theta: BinRel) -> None:
    kind = classify_relation(algebra, theta)
    if not kind.tolerance:
        raise ValueError(
            "relation is not a tolerance of the algebra "
            "(needs reflexivity, symmetry and compatibility)"
        )


def find_representation(
    algebra: Algebra, theta: BinRel, node_budget: int = DEFAULT_NODE_BUDGET
) -> Optional[RepWitness]:
    """Search for a reflexive compatible R with R∘R⁻ equal to theta.

    Any such R sits inside theta (reflexivity of R puts both R and its
    converse inside R∘R⁻), so the search only ever adds theta pairs.  The
    state is kept compatibility-closed.  A branch picks the uncovered
    theta pair (a, b) with the fewest witness candidates and tries each
    candidate c by adding (a, c) and (b, c); a child is pruned when its
    closure escapes theta or R∘R⁻ picks up a pair outside theta, which is
    sound because composition is monotone.  Exhausting the tree proves no
    witness exists.  Exceeding node_budget raises BudgetExceeded rather
    than guessing.  Pairs and candidates are explored in ascending index
    order, so the returned witness is canonical.
    """
    _require_tolerance(algebra, theta)
    n = algebra.n
    diag = BinRel.diagonal(n)
    if theta == diag:
        return RepWitness(diag)
    trows = theta.rows
    cover = [(a, b) for a in range(n) for b in range(a + 1, n) if trows[a] >> b & 1]
    candidates = {(a, b): trows[a] & trows[b] for a, b in cover}
    remaining = node_budget

    def extend(rel, a, c, b):
        child = _grow(algebra, rel, ((a, c), (b, c)))
        if not subset(child, theta):
            return None
        if not subset(compose(child, converse(child)), theta):
            return None
        return child

    def explore(rel):
        nonlocal remaining
        rows = rel.rows
        pick = None
        pick_count = 0
        for a, b in cover:
            if rows[a] & rows[b]:
                continue
            k = candidates[(a, b)].bit_count()
            if pick is None or k < pick_count:
                pick = (a, b)
                pick_count = k
        if pick is None:
            return rel
        a, b = pick
        for c in _bits(candidates[pick]):
            if remaining <= 0:
                raise BudgetExceeded(f"node budget of {node_budget} exhausted")
            remaining -= 1
            child = extend(rel, a, c, b)
            if child is not None:
                found = explore(child)
                if found is not None:
                    return found
        return None

    found = explore(closure(algebra, (), "reflexive"))
    return RepWitness(found) if found is not None else None


def exhaustive_representation(algebra: Algebra, theta: BinRel) -> Optional[RepWitness]:
    """Brute-force cross-check: try every reflexive subset of theta.

    Independent of find_representation on purpose; no closure, no pruning,
    just direct compatibility and composite tests over all 2**k subsets of
    the k off-diagonal theta pairs.  Only usable for small k.
    """
    _require_tolerance(algebra, theta)
    n = algebra.n
    offdiag = [(a, b) for a, b in theta.pairs() if a != b]
    k = len(offdiag)
    if k > 24:
        raise BudgetExceeded(f"{k} off-diagonal pairs is past the brute-force range")
    diag_rows = [1 << a for a in range(n)]
    for mask in range(1 << k):
        rows = diag_rows.copy()
        m = mask
        while m:
            low = m & -m
            a, b = offdiag[low.bit_length() - 1]
            rows[a] |= 1 << b
            m ^= low
        rel = BinRel(n, rows)
        if not is_compatible(algebra, rel):
            continue
        if compose(rel, converse(rel)) == theta:
            return RepWitness(rel)
    return None


def verify_representation(algebra: Algebra, theta: BinRel, rel: BinRel) -> bool:
    """Re-check a claimed witness from scratch."""
    shape_ok = all(rel.rows[a] >> a & 1 for a in range(rel.n))
    return (
        rel.n == algebra.n
        and shape_ok
        and is_compatible(algebra, rel)
        and compose(rel, converse(rel)) == theta
    )


def represent_via_order(algebra: Algebra, join: str, meet: str, theta: BinRel) -> RepWitness:
    """Witness theta = R∘R⁻ with R = theta ∩ ≤ for a compatible semilattice order.

    Requires join to be a semilattice operation (idempotent, commutative,
    associative), the two absorption identities meet(a, join(a, b)) = a and
    meet(join(a, b), b) = b, a compatible induced order x ≤ y iff
    join(x, y) = y, and theta to be a tolerance.  Every precondition is
    checked exhaustively and the composite identity of the returned witness
    is verified rather than assumed.
    """
    n = algebra.n
    jt = algebra.op(join)
    mt = algebra.op(meet)
    if jt.arity != 2 or mt.arity != 2:
        raise ValueError("join and meet must be binary operations")

    def j(x, y):
        return jt.table[x * n + y]

    def mee(x, y):
        return mt.table[x * n + y]

    for a in range(n):
        if j(a, a) != a:
            raise ValueError(f"join not idempotent: join({a}, {a}) = {j(a, a)}")
    for a in range(n):
        for b in range(n):
            if j(a, b) != j(b, a):
                raise ValueError(f"join not commutative: join({a}, {b}) = {j(a, b)} "
                                 f"but join({b}, {a}) = {j(b, a)}")
            if mee(a, j(a, b)) != a:
                raise ValueError(f"absorption meet(a, join(a, b)) = a fails at ({a}, {b})")
            if mee(j(a, b), b) != b:
                raise ValueError(f"absorption meet(join(a, b), b) = b fails at ({a}, {b})")
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if j(j(a, b), c) != j(a, j(b, c)):
                    raise ValueError(f"join not associative at ({a}, {b}, {c})")
    leq = BinRel(n, tuple(
        sum(1 << b for b in range(n) if j(a, b) == b) for a in range(n)
    ))
    if not is_compatible(algebra, leq):
        raise ValueError("the semilattice order induced by join is not compatible")
    _require_tolerance(algebra, theta)
    rel = intersect(theta, leq)
    if compose(rel, converse(rel)) != theta:
        # unreachable when the preconditions above hold
        raise ValueError("theta ∩ ≤ failed to reproduce theta; preconditions violated")
    return RepWitness(rel)


def iter_admissible(algebra: Algebra) -> Iterator[BinRel]:
    """All reflexive compatible relations, breadth-first from the diagonal.

    Each emitted relation is closed; neighbours arise by adding one absent
    pair and re-closing.  Every admissible relation is reached because any
    target stays a superset along the way.  Deterministic order, no
    duplicates.
    """
    start = closure(algebra, (), "reflexive")
    seen = {start}
    queue = deque([start])
    n = algebra.n
    while queue:
        rel = queue.popleft()
        yield rel
        for a in range(n):
            row = rel.rows[a]
            for b in range(n):
                if a != b and not row >> b & 1:
                    nxt = _grow(algebra, rel, ((a, b),))
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)


@dataclass(frozen=True)
class AdmissibleEnumeration:
    relations: tuple[BinRel, ...]
    truncated: bool


def enumerate_admissible(algebra: Algebra, limit: int = DEFAULT_REL_BUDGET) -> AdmissibleEnumeration:
    """First `limit` admissible relations plus a flag saying whether more exist."""
    if limit <= 0:
        raise ValueError(f"limit must be positive, got {limit}")
    it = iter_admissible(algebra)
    rels = tuple(islice(it, limit))
    truncated = next(it, None) is not None
    return AdmissibleEnumeration(rels, truncated)


def _no_ops_separator(n: int, a: int, b: int) -> BinRel:
    """R with R∘R⁻ missing exactly (a, b) and (b, a): rows a and b shrink
    to their diagonal bit, every other row is full."""
    full = (1 << n) - 1
    rows = [full] * n
    rows[a] = 1 << a
    rows[b] = 1 << b
    return BinRel(n, rows)


def find_weak_representation(
    algebra: Algebra, theta: BinRel, rel_budget: int = DEFAULT_REL_BUDGET
) -> Optional[WeakRepWitness]:
    """Express theta as an intersection of composites R∘R⁻, if possible.

    Whenever such a family exists, every factor contains theta, so a
    family keyed by excluded pairs suffices: for each ordered (a, b)
    outside theta, find one admissible R with theta inside R∘R⁻ and
    (a, b) not in it.  Separators may legitimately exceed theta, hence
    the search runs over the full admissible enumeration and keeps the
    first hit.  Without operations the two-singleton-row construction
    is a separator for any pair, so no search is needed.  Exceeding
    rel_budget before the enumeration finishes raises BudgetExceeded.
    """
    _require_tolerance(algebra, theta)
    n = algebra.n
    excluded = [(a, b) for a in range(n) for b in range(n)
                if a != b and not theta.rows[a] >> b & 1]
    if not excluded:
        return WeakRepWitness({})
    diag = BinRel.diagonal(n)
    if theta == diag:
        return WeakRepWitness({pair: diag for pair in excluded})
    if not algebra.ops:
        return WeakRepWitness({(a, b): _no_ops_separator(n, a, b) for a, b in excluded})
    usable = []
    count = 0
    for rel in iter_admissible(algebra):
        count += 1
        if count > rel_budget:
            raise BudgetExceeded(f"admissible enumeration passed the budget of {rel_budget}")
        composite = compose(rel, converse(rel))
        if subset(theta, composite):
            usable.append((rel, composite))
    separators = {}
    for a, b in excluded:
        for rel, composite in usable:
            if not composite.rows[a] >> b & 1:
                separators[(a, b)] = rel
                break
        else:
            return None
    return WeakRepWitness(separators)


def verify_weak_representation(algebra: Algebra, theta: BinRel, witness: WeakRepWitness) -> bool:
    """Re-check a claimed separator family from scratch."""
    n = algebra.n
    excluded = {(a, b) for a in range(n) for b in range(n)
                if a != b and not theta.rows[a] >> b & 1}
    if set(witness.separators) != excluded:
        return False
    meet_rows = [(1 << n) - 1] * n
    for (a, b), rel in witness.separators.items():
        if rel.n != n:
            return False
        if not all(rel.rows[x] >> x & 1 for x in range(n)):
            return False
        if not is_compatible(algebra, rel):
            return False
        composite = compose(rel, converse(rel))
        if not subset(theta, composite):
            return False
        if composite.rows[a] >> b & 1:
            return False
        meet_rows = [x & y for x, y in zip(meet_rows, composite.rows)]
    return BinRel(n, meet_rows) == theta


def enumerate_tolerances(algebra: Algebra, limit: int = DEFAULT_REL_BUDGET) -> list[BinRel]:
    """All tolerances, as the join closure of the principal ones.

    Every tolerance is the join of the principal tolerances of its pairs,
    so saturating {diagonal, principals} under pairwise join-then-close
    reaches all of them.  Result is sorted by pair count then rows.
    """
    n = algebra.n
    diag = closure(algebra, (), "reflexive-symmetric")
    seen = {diag}
    items = [diag]
    for a in range(n):
        for b in range(a + 1, n):
            t = closure(algebra, ((a, b),), "reflexive-symmetric")
            if t not in seen:
                seen.add(t)
                items.append(t)
                if len(items) > limit:
                    raise BudgetExceeded(f"tolerance count passed the budget of {limit}")
    i = 0
    while i < len(items):
        for pred in range(i):
            joined = _grow(algebra, items[i], items[pred].pairs(), symmetric=True)
            if joined not in seen:
                seen.add(joined)
                items.append(joined)
                if len(items) > limit:
                    raise BudgetExceeded(f"tolerance count passed the budget of {limit}")
        i += 1
    return sorted(items, key=lambda r: (r.pair_count(), r.rows))


def _transitive_close(rel: BinRel) -> BinRel:
    """Transitive closure by Warshall on the bit rows."""
    rows = list(rel.rows)
    for k in range(rel.n):
        bit = 1 << k
        for a in range(rel.n):
            if rows[a] & bit:
                rows[a] |= rows[k]
    return BinRel(rel.n, tuple(rows))


def _congruence_close(algebra: Algebra, rel: BinRel) -> BinRel:
    """Smallest congruence containing a tolerance.

    Alternates transitive closure with the compatibility closure until
    neither adds a pair; rel must already be closed.
    """
    while True:
        trans = _transitive_close(rel)
        if trans == rel:
            return rel
        added = [(a, b) for a, b in trans.pairs() if not rel.has(a, b)]
        rel = _grow(algebra, rel, added, symmetric=True)


def enumerate_congruences(algebra: Algebra, limit: int = DEFAULT_REL_BUDGET) -> list[BinRel]:
    """Tolerances that are also transitive.

    Saturated directly inside the congruence lattice (principal congruences,
    then pairwise join-then-close) rather than by filtering the tolerances:
    the work is then priced by the congruence count, which for something
    like a semilattice sits far below the tolerance count.
    """
    n = algebra.n
    diag = closure(algebra, (), "reflexive-symmetric")
    seen = {diag}
    items = [diag]
    for a in range(n):
        for b in range(a + 1, n):
            c = _congruence_close(algebra, closure(algebra, ((a, b),), "reflexive-symmetric"))
            if c not in seen:
                seen.add(c)
                items.append(c)
                if len(items) > limit:
                    raise BudgetExceeded(f"congruence count passed the budget of {limit}")
    i = 0
    while i < len(items):
        for pred in range(i):
            joined = _congruence_close(
                algebra, _grow(algebra, items[i], items[pred].pairs(), symmetric=True))
            if joined not in seen:
                seen.add(joined)
                items.append(joined)
                if len(items) > limit:
                    raise BudgetExceeded(f"congruence count passed the budget of {limit}")
        i += 1
    return sorted(items, key=lambda r: (r.pair_count(), r.rows))


def tolerance_join(algebra: Algebra, alpha: BinRel, beta: BinRel) -> BinRel:
    """Smallest tolerance containing both (their union re-closed)."""
    _require_tolerance(algebra, alpha)
    _require_tolerance(algebra, beta)
    return _grow(algebra, alpha, beta.pairs(), symmetric=True)


def check_permutability(algebra: Algebra, limit: int = DEFAULT_REL_BUDGET) -> PermutabilityReport:
    """Do all congruence pairs satisfy α∘β = β∘α?

    Scans ordered pairs in enumeration order and reports the first
    violation as (α, β, pair) with the pair in α∘β but not β∘α.
    """
    congruences = enumerate_congruences(algebra, limit)
    for i, alpha in enumerate(congruences):
        for k, beta in enumerate(congruences):
            if i == k:
                continue
            ab = compose(alpha, beta)
            ba = compose(beta, alpha)
            if ab == ba:
                continue
            for a in range(algebra.n):
                extra = ab.rows[a] & ~ba.rows[a]
                if extra:
                    b = (extra & -extra).bit_length() - 1
                    return PermutabilityReport(False, (alpha, beta, (a, b)))
            # α∘β strictly below β∘α; the swapped scan of (β, α) reports it
    return PermutabilityReport(True, None)
