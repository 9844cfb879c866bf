from fractions import Fraction

import numpy as np
import pytest

from nsdensity.core import (
    DSet,
    NumericalSet,
    as_semigroup,
    associated_semigroup_definitional,
    n_f,
    n_of,
    suffix_pattern,
)
from nsdensity.enumeration import (
    BudgetError,
    DensityTable,
    alpha_empirical,
    alpha_empirical_all,
    count_B,
    count_B_l,
    count_G_l,
    count_S,
    count_small_multiplicity,
    density_table,
    iter_numerical_sets,
    multiplicity_counts,
    preimage_counts,
    suffix_census,
    window_counts,
    window_restrict,
)

# preimage counts at f = 9, keyed by D(S); computed with the pairwise-scan
# reference route and frozen
TABLE_9 = {
    "∅": 140, "1": 28, "2": 22, "3": 9, "4": 8,
    "1,3": 7, "1,2": 6, "1,4": 6, "2,3": 6,
    "1,2,4": 3, "1,2,5": 3, "3,4": 3,
    "1,2,3": 2, "1,3,4": 2, "1,3,5": 2, "1,5": 2, "2,3,4": 2, "2,4": 2,
    "1,2,3,4": 1, "1,2,3,5": 1, "1,3,5,7": 1,
}


def definitional_window_counts(f, width, prefix_zeros=0):
    """Brute-force window histogram via the pairwise-scan A(T)."""
    counts = {}
    step = 1 << prefix_zeros if prefix_zeros else 1
    for mask in range(0, 1 << (f - 1), 1):
        if mask & (step - 1):
            continue
        a = associated_semigroup_definitional(NumericalSet(f, mask))
        key = suffix_pattern(a, width).mask if width else 0
        counts[key] = counts.get(key, 0) + 1
    return counts


class TestDensityTable:
    def test_f9_fixture(self):
        table = density_table(9)
        assert len(table) == 21
        got = {}
        from nsdensity.core import d_of
        for s, p in table.entries.items():
            got[d_of(s).key] = p
        assert got == TABLE_9

    def test_f3(self):
        table = density_table(3)
        assert dict(table.entries) == {
            as_semigroup(n_of(DSet(), 3, warn_uncertified=False)): 3,
            as_semigroup(n_of(DSet.of([1]), 3, warn_uncertified=False)): 1,
        }

    def test_sum_identity(self):
        for f in range(1, 15):
            table = density_table(f)
            assert sum(table.entries.values()) == 1 << (f - 1)

    def test_mu_and_sorting(self):
        table = density_table(9)
        assert table.mu(n_f(9)) == Fraction(140, 256)
        entries = table.sorted_entries()
        assert [p for _, p in entries] == sorted(
            (p for _, p in entries), reverse=True
        )

    def test_validation(self):
        with pytest.raises(ValueError):
            DensityTable(3, {n_f(3): 3})  # sum is 3, not 4
        with pytest.raises(ValueError):
            DensityTable(3, {n_f(4): 8})  # wrong f on entry

    def test_workers_equivalence(self):
        assert density_table(13).entries == density_table(13, workers=3).entries

    def test_budget(self):
        with pytest.raises(BudgetError):
            density_table(25, budget=24)

    def test_preimage_counts_match_table(self):
        f = 12
        table = density_table(f)
        # n_f may repeat a table entry: duplicates must not double-count
        targets = list(table.entries)[:5] + [n_f(f)]
        got = preimage_counts(f, targets)
        for s in targets:
            assert got[s] == table.entries[s]
        with pytest.raises(ValueError):
            preimage_counts(f, [n_f(f + 1)])


class TestIteration:
    def test_iter_counts(self):
        for f in (1, 2, 5):
            sets = list(iter_numerical_sets(f))
            assert len(sets) == 1 << (f - 1)
            assert all(t.f == f for t in sets)


class TestWindowCounts:
    @pytest.mark.parametrize("f,width,prefix", [(7, 3, 0), (9, 4, 0), (9, 3, 1), (10, 2, 2)])
    def test_against_definitional(self, f, width, prefix):
        got = window_counts(f, width, prefix_zeros=prefix)
        want = definitional_window_counts(f, width, prefix)
        assert got.sum() == 1 << (f - 1 - prefix)
        for mask in range(1 << width):
            assert int(got[mask]) == want.get(mask, 0)

    def test_restrict_matches_direct(self):
        f = 14
        wide = window_counts(f, 5)
        for t in range(6):
            direct = window_counts(f, t)
            assert np.array_equal(window_restrict(wide, 5, t), direct)

    def test_restrict_validation(self):
        with pytest.raises(ValueError):
            window_restrict(np.zeros(8, dtype=np.int64), 3, 4)

    def test_width_validation(self):
        with pytest.raises(ValueError):
            window_counts(9, 5)  # width beyond (f-1)//2


class TestBCounters:
    def test_count_B_factorization_spot(self):
        # A_{1} = 1, A_{2} = 2, A_{1,2} = 1 (frozen)
        for f in range(4, 17):
            assert count_B(DSet.of([1]), f) == 1 << (f - 3)
        for f in range(6, 17):
            assert count_B(DSet.of([2]), f) == 2 * (1 << (f - 5))
            assert count_B(DSet.of([1, 2]), f) == 1 << (f - 5)

    def test_count_B_empty(self):
        assert count_B(DSet(), 9) == 256

    def test_count_B_validation(self):
        with pytest.raises(ValueError):
            count_B(DSet.of([3]), 6)  # needs f > 2t

    def test_count_B_l_fixture(self):
        # C_{l,k} at minimal f; frozen from the pairwise-scan route
        assert count_B_l(1, 4, 9) == 3
        assert count_B_l(1, 5, 11) == 6
        assert count_B_l(2, 6, 13) == 5

    def test_count_G_l(self):
        assert count_G_l(1, 9) == 41
        # prefix partition at l = 0: G_0(f) = P(N_f)
        for f in (8, 9, 10):
            assert count_G_l(0, f) == preimage_counts(f, [n_f(f)])[n_f(f)]

    def test_count_S_residual_not_plain_mult(self):
        # plain "2 m(A(T)) <= f inside B(D,f)" would give 10 here; the
        # partition residual is empty because each such set already lies
        # in some B(D u {k}, f) with 2k < f
        assert count_S(DSet.of([1]), 10) == 0

    def test_count_S_against_definitional(self):
        for f in (10, 11):
            wide = (f - 1) // 2
            for mask in range(8):
                d = DSet.from_mask(mask)
                want = 0
                for gm in range(1 << (f - 1)):
                    a = associated_semigroup_definitional(NumericalSet(f, gm))
                    am = a.gaps_mask
                    mult = (am & -am).bit_length() if am else f + 1
                    if (suffix_pattern(a, wide) == d) and 2 * mult <= f:
                        want += 1
                assert count_S(d, f) == want


class TestSuffixCensus:
    @pytest.mark.parametrize("f", [10, 13])
    def test_census_matches_pointwise_counters(self, f):
        census = suffix_census(f, 3)
        table = density_table(f)
        for mask in range(8):
            d = DSet.from_mask(mask)
            s = as_semigroup(n_of(d, f, warn_uncertified=False))
            assert census.p_counts[d] == table.entries.get(s, 0)
            assert census.s_counts[d] == count_S(d, f)
            if d.max_element >= 1:
                assert census.b_count(d) == count_B(d, f)

    def test_census_validation(self):
        with pytest.raises(ValueError):
            suffix_census(7, 4)  # max_t beyond (f-1)//2


class TestMultiplicityStats:
    def test_against_definitional(self):
        f = 10
        want = {}
        for gm in range(1 << (f - 1)):
            am = associated_semigroup_definitional(NumericalSet(f, gm)).gaps_mask
            m = (am & -am).bit_length() if am else f + 1
            want[m] = want.get(m, 0) + 1
        assert multiplicity_counts(f) == want

    def test_small_multiplicity_consistency(self):
        f = 14
        counts = multiplicity_counts(f)
        for bound in (2, 5, 7, f):
            assert count_small_multiplicity(f, bound) == sum(
                c for m, c in counts.items() if m <= bound
            )
        with pytest.raises(ValueError):
            count_small_multiplicity(f, 0)

    def test_alpha_empirical_sums_to_one(self):
        for f in range(1, 13):
            assert sum(alpha_empirical_all(f).values()) == 1

    def test_alpha_empirical_values(self):
        # R(S) = -1 exactly for the minimal semigroup, so alpha_{-1}(f) is
        # its density
        f = 9
        assert alpha_empirical(f, -1) == Fraction(TABLE_9["∅"], 256)
        # R(S) = n > 0 collects all D with Max(D) = n
        assert alpha_empirical(f, 3) == Fraction(
            TABLE_9["3"] + TABLE_9["1,3"] + TABLE_9["2,3"] + TABLE_9["1,2,3"],
            256,
        )
        assert alpha_empirical(f, 2) == Fraction(TABLE_9["2"] + TABLE_9["1,2"], 256)
        with pytest.raises(ValueError):
            alpha_empirical(f, -2)
