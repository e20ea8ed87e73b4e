from itertools import combinations, product

import pytest

from signelim import (
    DomainError,
    SignMatrix,
    canonical_sign_vectors,
    column_rank,
    cover_reports,
    covered_fraction,
    describe_cover,
    eliminates,
    full_support_vectors,
    is_eliminating_cover,
    is_minimal_cover,
    minimal_covers,
    orthogonality_implication_holds,
    unit_vectors,
)
from signelim.errors import ResourceLimitError

ZS_2 = [(0, 1), (1, 0), (1, 1), (1, -1)]


class TestVectorFamilies:
    @pytest.mark.parametrize("n", range(1, 6))
    def test_full_support_family(self, n):
        family = full_support_vectors(n)
        assert len(family) == 2 ** (n - 1)
        for v in family:
            assert all(e in (1, -1) for e in v)
            assert v[0] == 1

    def test_full_support_members_eliminate_only_themselves(self):
        family = full_support_vectors(4)
        for t in family:
            for s in family:
                assert eliminates(t, s) == (t == s)

    def test_unit_vectors(self):
        assert unit_vectors(3) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
        assert unit_vectors(3, [1]) == {(0, 1, 0)}
        with pytest.raises(DomainError):
            unit_vectors(3, [3])
        with pytest.raises(DomainError):
            unit_vectors(3, [])


class TestCoverPredicates:
    def test_whole_universe_is_a_cover(self):
        for n in (1, 2, 3):
            assert is_eliminating_cover(canonical_sign_vectors(n), n)

    def test_units_and_full_support_cover(self):
        for n in (2, 3, 4):
            assert is_eliminating_cover(unit_vectors(n), n)
            assert is_eliminating_cover(full_support_vectors(n), n)
            assert is_minimal_cover(unit_vectors(n), n)
            assert is_minimal_cover(full_support_vectors(n), n)

    def test_single_vector_covers_only_in_dimension_one(self):
        assert is_eliminating_cover([(1,)], 1)
        assert is_minimal_cover([(1,)], 1)
        for x in ZS_2:
            assert not is_eliminating_cover([x], 2)

    def test_minimality_rejects_padded_covers(self):
        padded = list(unit_vectors(3)) + [(1, 1, 1)]
        assert is_eliminating_cover(padded, 3)
        assert not is_minimal_cover(padded, 3)

    def test_minimality_requires_a_cover(self):
        with pytest.raises(DomainError):
            is_minimal_cover([(1, 1)], 2)

    def test_covered_fraction(self):
        assert covered_fraction([(1, 1)], 2) == (3, 4)
        assert covered_fraction(ZS_2, 2) == (4, 4)


class TestCoverSearch:
    def test_no_cover_is_smaller_than_the_dimension(self):
        assert cover_reports(2, 1) == []
        assert cover_reports(3, 2) == []

    def test_every_two_subset_covers_dimension_two(self):
        found = minimal_covers(2, 4)
        expected = [frozenset(c) for c in combinations(ZS_2, 2)]
        assert sorted(found, key=sorted) == sorted(expected, key=sorted)
        assert len(found) == 6

    def test_dimension_one(self):
        assert minimal_covers(1, 1) == [frozenset({(1,)})]

    def test_known_minimal_covers_in_dimension_three(self):
        found = minimal_covers(3, 4)
        assert frozenset(unit_vectors(3)) in found
        assert frozenset(full_support_vectors(3)) in found
        assert all(len(c) >= 3 for c in found)

    def test_every_found_cover_has_full_column_rank(self):
        for n in (2, 3):
            for report in cover_reports(n, 3):
                assert report.is_cover
                assert report.column_rank == n
                assert column_rank(SignMatrix(report.members)) == n

    def test_search_cap_is_enforced(self, monkeypatch):
        monkeypatch.setenv("SIGNELIM_SEARCH_CAP", "10")
        with pytest.raises(ResourceLimitError):
            minimal_covers(3, 3)

    def test_rejects_zero_max_size(self):
        with pytest.raises(DomainError):
            minimal_covers(2, 0)


class TestDescribeCover:
    def test_reports_a_non_cover(self):
        report = describe_cover([(1, 1), (1, -1)], 2)
        assert report.is_cover
        assert report.is_minimal
        report = describe_cover([(1, 1, 1)], 3)
        assert not report.is_cover
        assert report.is_minimal is None
        assert report.column_rank == 1

    def test_members_are_deduplicated_and_ordered(self):
        report = describe_cover([(1, 0), (0, 1), (1, 0)], 2)
        assert report.members == ((0, 1), (1, 0))


class TestColumnRank:
    def test_examples(self):
        assert column_rank(SignMatrix.from_rows([(1, 0, 0), (0, 1, 0)])) == 2
        assert column_rank(SignMatrix.from_rows([(1, 1), (1, -1)])) == 2
        assert column_rank(SignMatrix.from_rows([(1, 1, 1)])) == 1
        assert column_rank(SignMatrix.from_rows([(1, 1), (1, 0)])) == 2

    def test_rank_is_bounded_by_both_dimensions(self, rng):
        for _ in range(50):
            n = rng.randint(1, 5)
            universe = canonical_sign_vectors(n)
            rows = rng.sample(universe, rng.randint(1, min(4, len(universe))))
            rank = column_rank(SignMatrix.from_rows(rows))
            assert 1 <= rank <= min(len(rows), n)


class TestOrthogonality:
    @pytest.mark.parametrize("n", (1, 2, 3))
    def test_exhaustive_over_small_integer_vectors(self, n):
        for x in canonical_sign_vectors(n):
            for v in product(range(-2, 3), repeat=n):
                if not any(v):
                    continue
                assert orthogonality_implication_holds(x, v)

    def test_premise_failure_counts_as_holding(self):
        # (1, -1) is not eliminated by (1, 1), orthogonal or not.
        assert orthogonality_implication_holds((1, 1), (1, -1))

    def test_rejects_zero_and_non_canonical_input(self):
        with pytest.raises(DomainError):
            orthogonality_implication_holds((1, 1), (0, 0))
        with pytest.raises(DomainError):
            orthogonality_implication_holds((-1, 1), (1, 1))
