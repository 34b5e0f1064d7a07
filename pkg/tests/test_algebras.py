import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import algebra_with_rel, algebras, binrels_on
from tolrep import (
    Algebra,
    BinRel,
    OperationTable,
    classify_relation,
    classify_shape,
    closure,
    corpus_get,
    eval_op,
    expand,
    is_compatible,
    subset,
)


def two_chain():
    join = OperationTable.from_function("join", 2, 2, max)
    return Algebra(2, (join,))


class TestConstruction:
    def test_from_function(self):
        op = OperationTable.from_function("join", 2, 3, max)
        assert op.table == (0, 1, 2, 1, 1, 2, 2, 2, 2)

    def test_rejects_wrong_table_length(self):
        with pytest.raises(ValueError):
            Algebra(2, (OperationTable("f", 2, (0, 1, 0)),))

    def test_rejects_out_of_range_values(self):
        with pytest.raises(ValueError):
            Algebra(2, (OperationTable("f", 1, (0, 2)),))

    def test_rejects_duplicate_names(self):
        f = OperationTable("f", 1, (0, 1))
        with pytest.raises(ValueError):
            Algebra(2, (f, f))

    def test_rejects_bad_arity(self):
        with pytest.raises(ValueError):
            OperationTable.from_function("f", 0, 2, lambda: 0)

    def test_op_lookup(self):
        alg = two_chain()
        assert alg.op("join").arity == 2
        with pytest.raises(ValueError):
            alg.op("meet")

    def test_eval_op(self):
        alg = corpus_get("s7_semilattice").algebra
        assert eval_op(alg, "join", (1, 2)) == 6
        assert eval_op(alg, "join", (3, 3)) == 3
        with pytest.raises(ValueError):
            eval_op(alg, "join", (1,))


class TestClosure:
    def test_no_ops_reflexive(self):
        alg = Algebra(3)
        got = closure(alg, [(0, 1)], "reflexive")
        assert sorted(got.pairs()) == [(0, 0), (0, 1), (1, 1), (2, 2)]

    def test_no_ops_reflexive_symmetric(self):
        alg = Algebra(3)
        got = closure(alg, [(0, 1)], "reflexive-symmetric")
        assert sorted(got.pairs()) == [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]

    def test_rejects_unknown_mode(self):
        with pytest.raises(ValueError):
            closure(Algebra(2), [(0, 1)], "transitive")

    def test_rejects_out_of_range_seed(self):
        with pytest.raises(ValueError):
            closure(Algebra(2), [(0, 5)], "reflexive")

    def test_semilattice_propagates(self):
        # (0,1) forces (join(0,x), join(1,x)) for every x
        alg = corpus_get("s7_semilattice").algebra
        got = closure(alg, [(0, 1)], "reflexive")
        assert got.has(0, 6)  # join of (0,1) with (0,0) componentwise
        assert got.has(6, 1)  # join of (0,1) with (1,1)
        assert not got.has(1, 0)

    @given(algebra_with_rel())
    def test_extensive(self, case):
        alg, rel = case
        got = closure(alg, rel.pairs(), "reflexive")
        assert subset(rel, got)
        assert subset(BinRel.diagonal(alg.n), got)

    @given(algebra_with_rel())
    def test_idempotent(self, case):
        alg, rel = case
        once = closure(alg, rel.pairs(), "reflexive-symmetric")
        again = closure(alg, once.pairs(), "reflexive-symmetric")
        assert once == again

    @given(algebra_with_rel())
    def test_monotone(self, case):
        alg, rel = case
        seed = list(rel.pairs())
        smaller = closure(alg, seed[: len(seed) // 2], "reflexive")
        bigger = closure(alg, seed, "reflexive")
        assert subset(smaller, bigger)

    @given(algebra_with_rel())
    def test_closure_is_compatible(self, case):
        alg, rel = case
        for mode in ("reflexive", "reflexive-symmetric"):
            got = closure(alg, rel.pairs(), mode)
            assert is_compatible(alg, got)

    @given(algebra_with_rel())
    def test_symmetric_mode_symmetric(self, case):
        alg, rel = case
        got = closure(alg, rel.pairs(), "reflexive-symmetric")
        assert classify_shape(got).symmetric


class TestCompatibility:
    def test_semilattice_counterexample(self):
        alg = corpus_get("s7_semilattice").algebra
        rel = BinRel.from_pairs(7, [(0, 1)], reflexive=True, symmetric=True)
        # join((0,1),(1,1)) = (6,1) escapes
        assert not is_compatible(alg, rel)

    def test_diagonal_always_compatible(self):
        alg = corpus_get("l7_majority").algebra
        assert is_compatible(alg, BinRel.diagonal(7))

    def test_full_always_compatible(self):
        alg = corpus_get("l7_majority").algebra
        assert is_compatible(alg, BinRel.full(7))

    @given(algebra_with_rel(reflexive=True))
    def test_fixpoint_characterization(self, case):
        # a reflexive relation is compatible iff closing it changes nothing
        alg, rel = case
        assert is_compatible(alg, rel) == (closure(alg, rel.pairs(), "reflexive") == rel)

    def test_ternary_operation(self):
        table = tuple((x + y + z) % 3 for x in range(3) for y in range(3) for z in range(3))
        alg = Algebra(3, (OperationTable("f", 3, table),))
        shift = BinRel.from_pairs(3, [(0, 1), (1, 2), (2, 0)], reflexive=True)
        # (0,1)+(0,1)+(0,1) = (0,0) mod 3, adding diagonal pairs stays inside
        assert not is_compatible(alg, shift)
        assert is_compatible(alg, BinRel.full(3))


class TestClassifyRelation:
    def test_tolerance_not_congruence(self):
        entry = corpus_get("five_set")
        kind = classify_relation(entry.algebra, entry.relations["theta"])
        assert kind.tolerance and kind.admissible
        assert not kind.congruence

    def test_order_is_admissible_only(self):
        entry = corpus_get("n5")
        kind = classify_relation(entry.algebra, entry.relations["leq"])
        assert kind.admissible
        assert not kind.tolerance

    @given(algebra_with_rel())
    def test_consistent_with_parts(self, case):
        alg, rel = case
        kind = classify_relation(alg, rel)
        shape = classify_shape(rel)
        compat = is_compatible(alg, rel)
        assert kind.admissible == (shape.reflexive and compat)
        assert kind.tolerance == (kind.admissible and shape.symmetric)
        assert kind.congruence == (kind.tolerance and shape.transitive)


class TestExpand:
    def test_five_set_count(self):
        entry = corpus_get("five_set")
        plus = expand(entry.algebra, entry.relations["theta"])
        assert len(plus.ops) == 185
        assert all(op.arity == 1 for op in plus.ops)

    def test_five_set_raw_count_before_dedup(self):
        entry = corpus_get("five_set")
        theta = entry.relations["theta"]
        raw = set()
        distinct = set()
        slots = [(a, b) for a in range(5) for b in range(a + 1, 5) if theta.has(a, b)]
        assert len(slots) == 6
        for a, b in slots:
            for mask in range(1 << 5):
                table = tuple(b if mask >> i & 1 else a for i in range(5))
                raw.add((a, b, table))
                distinct.add(table)
        assert len(raw) == 192
        assert len(distinct) == 185

    def test_diagonal_gives_constants(self):
        plus = expand(Algebra(4), BinRel.diagonal(4))
        tables = sorted(op.table for op in plus.ops)
        assert tables == [(a,) * 4 for a in range(4)]

    def test_requires_tolerance(self):
        with pytest.raises(ValueError):
            expand(Algebra(3), BinRel.from_pairs(3, [(0, 1)], reflexive=True))

    def test_keeps_original_operations(self):
        alg = two_chain()
        plus = expand(alg, BinRel.full(2))
        assert plus.op("join") is alg.op("join")
        assert len(plus.ops) > 1

    def test_theta_still_tolerance(self):
        entry = corpus_get("five_set")
        theta = entry.relations["theta"]
        plus = expand(entry.algebra, theta)
        assert classify_relation(plus, theta).tolerance

    @settings(max_examples=25)
    @given(algebras(max_n=3), st.data())
    def test_expansion_shrinks_tolerances(self, alg, data):
        # closing any symmetric seed under more operations gives a larger result
        rel = data.draw(binrels_on(alg.n, reflexive=True, symmetric=True))
        theta = closure(alg, rel.pairs(), "reflexive-symmetric")
        plus = expand(alg, theta)
        assert classify_relation(plus, theta).tolerance
        for a in range(alg.n):
            for b in range(alg.n):
                base = closure(alg, [(a, b)], "reflexive")
                richer = closure(plus, [(a, b)], "reflexive")
                assert subset(base, richer)
