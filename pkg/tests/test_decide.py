from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import algebra_with_rel, algebras, binrels_on
from tolrep import (
    Algebra,
    BinRel,
    BudgetExceeded,
    OperationTable,
    check_permutability,
    classify_relation,
    compose,
    converse,
    corpus_get,
    enumerate_admissible,
    enumerate_congruences,
    enumerate_tolerances,
    exhaustive_representation,
    find_representation,
    find_weak_representation,
    intersect,
    is_compatible,
    represent_via_order,
    subset,
    tolerance_join,
    verify_representation,
    verify_weak_representation,
)


def all_reflexive_symmetric(n):
    slots = list(combinations(range(n), 2))
    for mask in range(1 << len(slots)):
        rows = [1 << a for a in range(n)]
        for i, (a, b) in enumerate(slots):
            if mask >> i & 1:
                rows[a] |= 1 << b
                rows[b] |= 1 << a
        yield BinRel(n, rows)


class TestFindRepresentation:
    def test_diagonal(self):
        alg = corpus_get("s7_semilattice").algebra
        witness = find_representation(alg, BinRel.diagonal(7))
        assert witness is not None
        assert witness.rel == BinRel.diagonal(7)

    def test_full_no_ops(self):
        witness = find_representation(Algebra(3), BinRel.full(3))
        assert witness is not None
        assert verify_representation(Algebra(3), BinRel.full(3), witness.rel)

    def test_five_set_has_none(self):
        entry = corpus_get("five_set")
        assert find_representation(entry.algebra, entry.relations["theta"]) is None

    def test_semilattice_has_none(self):
        entry = corpus_get("s7_semilattice")
        assert find_representation(entry.algebra, entry.relations["theta"]) is None

    def test_majority_has_none(self):
        entry = corpus_get("l7_majority")
        assert find_representation(entry.algebra, entry.relations["theta"]) is None

    def test_near_full_family(self):
        for n in range(2, 6):
            for a in range(n):
                for b in range(a + 1, n):
                    entry = corpus_get(f"theta_ab({n},{a},{b})")
                    theta = entry.relations["theta"]
                    witness = find_representation(entry.algebra, theta)
                    assert witness is not None
                    assert verify_representation(entry.algebra, theta, witness.rel)

    def test_rejects_non_tolerance(self):
        with pytest.raises(ValueError):
            find_representation(Algebra(2), BinRel.from_pairs(2, [(0, 1)], reflexive=True))

    def test_budget_exhaustion(self):
        entry = corpus_get("five_set")
        with pytest.raises(BudgetExceeded):
            find_representation(entry.algebra, entry.relations["theta"], node_budget=1)

    @given(st.data())
    def test_agrees_with_exhaustive_oracle(self, data):
        alg = data.draw(algebras(max_n=3, max_ops=1))
        seed = data.draw(binrels_on(alg.n, reflexive=True, symmetric=True))
        from tolrep import closure

        theta = closure(alg, seed.pairs(), "reflexive-symmetric")
        fast = find_representation(alg, theta)
        slow = exhaustive_representation(alg, theta)
        assert (fast is None) == (slow is None)
        if fast is not None:
            assert verify_representation(alg, theta, fast.rel)
            assert verify_representation(alg, theta, slow.rel)

    def test_composite_grows_with_relation(self):
        # pruning on composites is sound because composition is monotone
        entry = corpus_get("five_set")
        theta = entry.relations["theta"]
        pairs = [p for p in theta.pairs() if p[0] != p[1]]
        for k in range(len(pairs)):
            small = BinRel.from_pairs(5, pairs[:k], reflexive=True)
            big = BinRel.from_pairs(5, pairs, reflexive=True)
            assert subset(compose(small, converse(small)), compose(big, converse(big)))


class TestExhaustiveOracle:
    def test_guard_on_large_theta(self):
        with pytest.raises(BudgetExceeded):
            exhaustive_representation(Algebra(6), BinRel.full(6))

    def test_small_sweep_matches_search(self):
        alg = Algebra(3)
        for theta in all_reflexive_symmetric(3):
            fast = find_representation(alg, theta)
            slow = exhaustive_representation(alg, theta)
            assert (fast is None) == (slow is None)


class TestVerifyRepresentation:
    def test_accepts_congruence_as_own_witness(self):
        entry = corpus_get("chain(4)")
        for cong in enumerate_congruences(entry.algebra):
            assert verify_representation(entry.algebra, cong, cong)

    def test_rejects_wrong_composite(self):
        alg = Algebra(3)
        theta = BinRel.from_pairs(3, [(0, 1)], reflexive=True, symmetric=True)
        assert not verify_representation(alg, theta, BinRel.full(3))

    def test_rejects_irreflexive_witness(self):
        alg = Algebra(2)
        assert not verify_representation(alg, BinRel.diagonal(2), BinRel.empty(2))

    def test_rejects_incompatible_witness(self):
        alg = corpus_get("s7_semilattice").algebra
        rel = BinRel.from_pairs(7, [(0, 1)], reflexive=True)
        assert not is_compatible(alg, rel)
        assert not verify_representation(alg, compose(rel, converse(rel)), rel)


class TestRepresentViaOrder:
    def test_m3_full(self):
        entry = corpus_get("m3")
        theta = BinRel.full(5)
        witness = represent_via_order(entry.algebra, "join", "meet", theta)
        assert witness.rel == entry.relations["leq"]
        assert verify_representation(entry.algebra, theta, witness.rel)

    def test_diagonal(self):
        entry = corpus_get("n5")
        witness = represent_via_order(entry.algebra, "join", "meet", BinRel.diagonal(5))
        assert witness.rel == BinRel.diagonal(5)

    def test_n5_principal_tolerance(self):
        entry = corpus_get("n5")
        alg = entry.algebra
        from tolrep import closure

        theta = closure(alg, [(0, 1)], "reflexive-symmetric")
        witness = represent_via_order(alg, "join", "meet", theta)
        assert witness.rel == intersect(theta, entry.relations["leq"])
        assert verify_representation(alg, theta, witness.rel)

    def test_rejects_non_semilattice_join(self):
        bad = Algebra(2, (OperationTable("j", 2, (1, 0, 0, 1)), OperationTable("m", 2, (0, 0, 0, 1))))
        with pytest.raises(ValueError, match="idempotent"):
            represent_via_order(bad, "j", "m", BinRel.full(2))

    def test_rejects_broken_absorption(self):
        join = OperationTable.from_function("join", 2, 2, max)
        bad_meet = OperationTable("meet", 2, (0, 0, 0, 0))
        alg = Algebra(2, (join, bad_meet))
        with pytest.raises(ValueError, match="absorption"):
            represent_via_order(alg, "join", "meet", BinRel.full(2))

    def test_every_lattice_tolerance(self):
        for name in ("m3", "n5", "chain(4)", "chain(2)"):
            entry = corpus_get(name)
            for theta in enumerate_tolerances(entry.algebra):
                witness = represent_via_order(entry.algebra, "join", "meet", theta)
                assert verify_representation(entry.algebra, theta, witness.rel)


class TestAdmissibleEnumeration:
    def test_no_ops_counts(self):
        assert len(enumerate_admissible(Algebra(2)).relations) == 4
        assert len(enumerate_admissible(Algebra(3)).relations) == 64

    def test_truncation(self):
        got = enumerate_admissible(Algebra(3), limit=10)
        assert got.truncated
        assert len(got.relations) == 10

    def test_all_admissible_and_distinct(self):
        entry = corpus_get("s7_semilattice")
        got = enumerate_admissible(entry.algebra, limit=500)
        assert len(set(got.relations)) == len(got.relations)
        for rel in got.relations:
            assert classify_relation(entry.algebra, rel).admissible

    def test_expansion_census(self):
        entry = corpus_get("expand_five")
        theta = entry.relations["theta"]
        got = enumerate_admissible(entry.algebra)
        assert not got.truncated
        assert len(got.relations) == 257
        others = [r for r in got.relations if r != BinRel.diagonal(5)]
        assert all(subset(theta, r) for r in others)


class TestWeakRepresentation:
    def test_five_set(self):
        entry = corpus_get("five_set")
        theta = entry.relations["theta"]
        witness = find_weak_representation(entry.algebra, theta)
        assert witness is not None
        assert len(witness.separators) == 8
        assert verify_weak_representation(entry.algebra, theta, witness)

    def test_expansion_has_none(self):
        entry = corpus_get("expand_five")
        assert find_weak_representation(entry.algebra, entry.relations["theta"]) is None

    def test_full_theta_needs_no_separators(self):
        alg = corpus_get("m3").algebra
        witness = find_weak_representation(alg, BinRel.full(5))
        assert witness is not None
        assert witness.separators == {}
        assert verify_weak_representation(alg, BinRel.full(5), witness)

    def test_diagonal_theta(self):
        alg = Algebra(3)
        witness = find_weak_representation(alg, BinRel.diagonal(3))
        assert witness is not None
        assert len(witness.separators) == 6
        assert verify_weak_representation(alg, BinRel.diagonal(3), witness)

    def test_no_ops_always_weakly_representable(self):
        for theta in all_reflexive_symmetric(4):
            witness = find_weak_representation(Algebra(4), theta)
            assert witness is not None
            assert verify_weak_representation(Algebra(4), theta, witness)

    def test_representable_implies_weakly(self):
        alg = Algebra(3)
        for theta in all_reflexive_symmetric(3):
            if find_representation(alg, theta) is not None:
                assert find_weak_representation(alg, theta) is not None

    def test_verify_rejects_missing_pair(self):
        entry = corpus_get("five_set")
        theta = entry.relations["theta"]
        witness = find_weak_representation(entry.algebra, theta)
        clipped = type(witness)(dict(list(witness.separators.items())[:-1]))
        assert not verify_weak_representation(entry.algebra, theta, clipped)

    def test_budget(self):
        entry = corpus_get("expand_five")
        with pytest.raises(BudgetExceeded):
            find_weak_representation(entry.algebra, entry.relations["theta"], rel_budget=5)


class TestToleranceEnumeration:
    def test_no_ops_three(self):
        got = enumerate_tolerances(Algebra(3))
        assert len(got) == 8

    def test_sorted_by_size(self):
        got = enumerate_tolerances(Algebra(3))
        sizes = [rel.pair_count() for rel in got]
        assert sizes == sorted(sizes)
        assert got[0] == BinRel.diagonal(3)
        assert got[-1] == BinRel.full(3)

    def test_chain_counts(self):
        entry = corpus_get("chain(4)")
        assert len(enumerate_tolerances(entry.algebra)) == 14
        assert len(enumerate_congruences(entry.algebra)) == 8

    def test_limit(self):
        with pytest.raises(BudgetExceeded):
            enumerate_tolerances(Algebra(4), limit=3)

    def test_congruence_limit(self):
        # Bell(4) = 15 equivalence relations on a bare 4-element universe
        with pytest.raises(BudgetExceeded):
            enumerate_congruences(Algebra(4), limit=3)

    @given(algebras(max_n=4, max_ops=1))
    def test_matches_brute_force(self, alg):
        got = set(enumerate_tolerances(alg))
        want = {rel for rel in all_reflexive_symmetric(alg.n) if is_compatible(alg, rel)}
        assert got == want

    @given(algebras(max_n=4, max_ops=1))
    def test_congruences_are_exactly_transitive_tolerances(self, alg):
        tols = enumerate_tolerances(alg)
        congs = enumerate_congruences(alg)
        assert congs == [t for t in tols if subset(compose(t, t), t)]
        for cong in congs:
            assert classify_relation(alg, cong).congruence

    def test_semilattice_census(self):
        # the tolerance lattice of s7 runs to thousands of members, so the
        # congruence enumeration must not route through it
        s7 = corpus_get("s7_semilattice").algebra
        congs = enumerate_congruences(s7)
        assert len(congs) == 64
        for cong in congs:
            assert classify_relation(s7, cong).congruence

    def test_bare_universe_gives_bell_number(self):
        assert len(enumerate_congruences(Algebra(5))) == 52


class TestToleranceJoin:
    def test_example(self):
        alg = Algebra(3)
        a = BinRel.from_pairs(3, [(0, 1)], reflexive=True, symmetric=True)
        b = BinRel.from_pairs(3, [(1, 2)], reflexive=True, symmetric=True)
        joined = tolerance_join(alg, a, b)
        # no operations: join of tolerances is their union
        assert joined == (a | b)

    def test_join_is_least_upper_bound(self):
        entry = corpus_get("chain(4)")
        alg = entry.algebra
        tols = enumerate_tolerances(alg)
        for a in tols[:6]:
            for b in tols[:6]:
                joined = tolerance_join(alg, a, b)
                assert subset(a, joined) and subset(b, joined)
                assert classify_relation(alg, joined).tolerance
                uppers = [t for t in tols if subset(a, t) and subset(b, t)]
                assert min(uppers, key=lambda t: t.pair_count()).pair_count() == joined.pair_count()

    def test_rejects_non_tolerance(self):
        alg = Algebra(2)
        with pytest.raises(ValueError):
            tolerance_join(alg, BinRel.from_pairs(2, [(0, 1)], reflexive=True), BinRel.diagonal(2))

    @given(st.data())
    def test_congruence_join_inside_composite(self, data):
        alg = data.draw(algebras(max_n=4, max_ops=1))
        congs = enumerate_congruences(alg)
        a = data.draw(st.sampled_from(congs))
        b = data.draw(st.sampled_from(congs))
        assert subset(tolerance_join(alg, a, b), compose(b, a))


class TestPermutability:
    def test_no_ops_three_fails(self):
        report = check_permutability(Algebra(3))
        assert not report.permutable
        alpha, beta, pair = report.counterexample
        assert classify_relation(Algebra(3), alpha).congruence
        assert classify_relation(Algebra(3), beta).congruence
        assert compose(alpha, beta).has(*pair)
        assert not compose(beta, alpha).has(*pair)

    def test_semilattice_fails(self):
        s7 = corpus_get("s7_semilattice").algebra
        report = check_permutability(s7)
        assert not report.permutable
        alpha, beta, pair = report.counterexample
        assert compose(alpha, beta).has(*pair)
        assert not compose(beta, alpha).has(*pair)

    def test_single_element(self):
        assert check_permutability(Algebra(1)).permutable

    def test_simple_lattice(self):
        entry = corpus_get("m3")
        assert check_permutability(entry.algebra).permutable

    @given(algebras(max_n=4, max_ops=1))
    def test_report_matches_definition(self, alg):
        congs = enumerate_congruences(alg)
        truth = all(compose(a, b) == compose(b, a) for a in congs for b in congs)
        assert check_permutability(alg).permutable == truth

    @settings(max_examples=40)
    @given(algebras(max_n=4, max_ops=1))
    def test_all_tolerances_transitive_implies_permutable(self, alg):
        if enumerate_tolerances(alg) == enumerate_congruences(alg):
            assert check_permutability(alg).permutable
