import itertools

import pytest

from omegaramsey import (
    Coloring,
    ContractError,
    FALSE,
    FiniteSetFamily,
    StructuralError,
    Subfamily,
    TRUE,
    admissible,
    enumerate_admissible,
    fg_witness,
    is_dense,
    is_thin,
    nw_homogenize,
    ramsey_via_nw,
    solve_partition,
)
from omegaramsey.barriers import is_initial_segment, partition_of
from omegaramsey import oracle


def pairs_family(family):
    return FiniteSetFamily.of(
        family, itertools.combinations(family.indices, 2))


class TestThin:
    def test_pairs_are_thin(self, eight5):
        assert is_thin(pairs_family(eight5))

    def test_prefix_violation(self, eight5):
        assert not is_thin(FiniteSetFamily.of(eight5, [(1,), (1, 2)]))

    def test_empty_family_is_thin(self, eight5):
        assert is_thin(FiniteSetFamily.of(eight5, []))

    def test_thin_means_prefix_antichain(self, eight5):
        # cross-check against an independent pairwise formulation
        import random
        rng = random.Random(4)
        pool = list(itertools.chain(
            itertools.combinations(range(1, 9), 1),
            itertools.combinations(range(1, 9), 2),
            itertools.combinations(range(1, 9), 3)))
        for _ in range(30):
            stems = rng.sample(pool, rng.randint(1, 8))
            fam = FiniteSetFamily.of(eight5, stems)
            want = all(not (s != t and t[:len(s)] == s)
                       for s in fam.stems for t in fam.stems)
            assert is_thin(fam) == want

    def test_initial_segment_relation_is_a_partial_order(self):
        stems = [(), (1,), (1, 2), (1, 3), (2,)]
        for s in stems:
            assert is_initial_segment(s, s)
        for s, t in itertools.permutations(stems, 2):
            if is_initial_segment(s, t) and is_initial_segment(t, s):
                assert s == t
        for s, t, u in itertools.permutations(stems, 3):
            if is_initial_segment(s, t) and is_initial_segment(t, u):
                assert is_initial_segment(s, u)


class TestDense:
    def test_singletons_are_dense(self, eight5, p_grid):
        S = FiniteSetFamily.of(eight5, [(i,) for i in range(1, 9)])
        assert is_dense(S, p_grid) is TRUE

    def test_empty_family_not_dense(self, eight5, p_grid):
        assert is_dense(FiniteSetFamily.of(eight5, []), p_grid) is FALSE

    def test_matches_exhaustive_oracle(self, eight5, p_grid):
        S = FiniteSetFamily.of(eight5, [(1, 2), (3, 4), (5, 6), (7, 8)])
        got = is_dense(S, p_grid)
        admissible_sets = [b.indices for b in
                           enumerate_admissible(Subfamily.full(eight5), p_grid)]
        want = all(any(set(s) <= set(b) for s in S.stems)
                   for b in admissible_sets)
        assert (got is TRUE) == want


class TestFgWitness:
    def test_singletons_give_first_admissible(self, eight5, p_grid):
        S = FiniteSetFamily.of(eight5, [(i,) for i in range(1, 9)])
        got = fg_witness(S, p_grid)
        first = next(iter(enumerate_admissible(Subfamily.full(eight5), p_grid)))
        assert got.kind == "witness"
        assert got.witness.indices == first.indices

    def test_needs_density(self, eight5, p_grid):
        with pytest.raises(ContractError):
            fg_witness(FiniteSetFamily.of(eight5, [(1, 2)]), p_grid)

    def test_witness_verified_exhaustively(self, eight5, p_grid):
        S = FiniteSetFamily.of(eight5,
                               [(1,), (2,), (3, 4), (3, 5), (3, 6), (3, 7),
                                (3, 8), (4, 5), (4, 6), (4, 7), (4, 8),
                                (5, 6), (5, 7), (5, 8), (6, 7), (6, 8),
                                (7, 8), (3,)])
        if is_dense(S, p_grid) is not TRUE:
            pytest.skip("fixture stems not dense at these params")
        got = fg_witness(S, p_grid)
        assert got.kind == "witness"
        for C in enumerate_admissible(got.witness, p_grid):
            c = C.indices
            assert any(c[:j] in S.stems for j in range(len(c) + 1))


class TestNwHomogenize:
    def test_everything_in_first_part(self, eight5, p_grid):
        T = pairs_family(eight5)
        got = nw_homogenize(T, [sorted(T.stems), []], p_grid)
        assert got.kind == "homogeneous" and got.part == 0
        first = next(iter(enumerate_admissible(Subfamily.full(eight5), p_grid)))
        assert got.witness.indices == first.indices

    def test_single_part(self, eight5, p_grid):
        T = pairs_family(eight5)
        got = nw_homogenize(T, [sorted(T.stems)], p_grid)
        assert got.kind == "homogeneous" and got.part == 0

    def test_thinness_required(self, eight5, p_grid):
        T = FiniteSetFamily.of(eight5, [(1,), (1, 2)])
        with pytest.raises(ContractError):
            nw_homogenize(T, [[(1,)], [(1, 2)]], p_grid)

    def test_partition_validated(self, eight5, p_grid):
        T = pairs_family(eight5)
        with pytest.raises(StructuralError):
            nw_homogenize(T, [sorted(T.stems), [(1, 2)]], p_grid)

    def test_parity_partition_appears_in_oracle(self, eight5, p_grid):
        T = pairs_family(eight5)
        parts = [[s for s in sorted(T.stems) if s[0] % 2 == 1],
                 [s for s in sorted(T.stems) if s[0] % 2 == 0]]
        got = nw_homogenize(T, parts, p_grid)
        all_pairs = oracle.brute_nw(T, parts, p_grid)
        if got.kind == "homogeneous":
            assert (got.witness.indices, got.part) in all_pairs
        else:
            assert not all_pairs

    def test_output_is_sound(self, eight5, p_grid):
        T = FiniteSetFamily.of(eight5, itertools.combinations(range(1, 9), 3))
        parts = [[s for s in sorted(T.stems) if sum(s) % 2 == 0],
                 [s for s in sorted(T.stems) if sum(s) % 2 == 1]]
        got = nw_homogenize(T, parts, p_grid)
        if got.kind != "homogeneous":
            pytest.skip("no homogeneous set at this fixture")
        inside = [s for s in T.stems
                  if set(s) <= set(got.witness.indices)]
        normalized = partition_of(T, parts)
        assert all(s in normalized[got.part] for s in inside)


class TestRamseyViaNw:
    def test_constant_coloring(self, eight5, p_grid):
        f = Coloring(2, 2, {c: 1 for c in
                            itertools.combinations(range(1, 9), 2)})
        got = ramsey_via_nw(eight5, f, p_grid)
        assert got is not None and got[1] == 1

    def test_agrees_with_partition_solver(self, eight5, p_grid):
        import random
        rng = random.Random(12)
        agreements = 0
        for _ in range(8):
            table = {c: rng.randrange(2)
                     for c in itertools.combinations(range(1, 9), 2)}
            f = Coloring(2, 2, table)
            via_nw = ramsey_via_nw(eight5, f, p_grid)
            direct = solve_partition(eight5, f, p_grid)
            if via_nw is None:
                continue
            B, color = via_nw
            assert all(f.of(c) == color
                       for c in itertools.combinations(B.indices, 2))
            assert direct is not None
            agreements += 1
        assert agreements >= 4

    def test_pigeonhole_arity_one(self, eight5, p_grid):
        f = Coloring(1, 2, {(i,): i % 2 for i in range(1, 9)})
        got = ramsey_via_nw(eight5, f, p_grid)
        if got is not None:
            B, color = got
            assert all(f.of((i,)) == color for i in B.indices)
            assert admissible(B, p_grid) is TRUE
