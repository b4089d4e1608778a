import math

import numpy as np
import pytest

from bosoncert.certification import (
    VERDICT_BOSON,
    VERDICT_INCONCLUSIVE,
    VERDICT_MEANFIELD,
    CountTable,
    certify_against_meanfield,
    chi_square_upper_tail,
    chi_square_vs_reference,
    most_frequent_event_test,
    spread_statistic,
    tally,
    tvd,
)
from bosoncert.linalg import haar_unitary
from bosoncert.models import meanfield_test_state_distribution
from bosoncert.patterns import enumerate_patterns
from bosoncert.sampling import postselect, sample_boson, sample_coherent, sample_meanfield


class TestTally:
    def test_empty(self):
        table = tally([])
        assert table.total == 0
        assert table.counts == {}

    def test_three_identical_events(self):
        table = tally([(1, 0, 1)] * 3)
        assert table.counts == {(1, 0, 1): 3}
        assert table.total == 3
        assert (table.photons, table.modes) == (2, 3)

    def test_postselect_is_pointwise_below(self):
        u = haar_unitary(3, 1)
        batch = sample_coherent(u, (1.0, 0.0, 0.0), 2000, 2)
        full = {}
        for event in batch.events:
            full[event] = full.get(event, 0) + 1
        kept = tally(postselect(batch, 1))
        assert all(kept.counts[e] <= full[e] for e in kept.counts)

    def test_mixed_shapes_rejected(self):
        with pytest.raises(ValueError, match="shape"):
            tally([(1, 1), (2, 0), (1, 1, 0)])
        with pytest.raises(ValueError, match="shape"):
            tally([(1, 1), (2, 1)])


class TestSpread:
    def test_uniform_counts(self):
        events = enumerate_patterns(2, 2)
        table = CountTable({t: 5 for t in events}, 2, 2, 5 * len(events))
        assert spread_statistic(table) == 0.0

    def test_single_pattern(self):
        table = CountTable({(2, 0): 100}, 2, 2, 100)
        assert spread_statistic(table) == 1.0

    def test_closed_form_proportional_counts(self):
        null = meanfield_test_state_distribution(4)
        counts = {t: round(p * 256) for t, p in null.items()}
        table = CountTable(counts, 4, 4, 256)
        assert spread_statistic(table) == pytest.approx(0.08984375)

    def test_empty_table_rejected(self):
        with pytest.raises(ValueError):
            spread_statistic(CountTable({}, 2, 2, 0))


class TestTvd:
    def test_identical(self):
        p = {(1, 0): 0.5, (0, 1): 0.5}
        assert tvd(p, p) == 0.0

    def test_disjoint(self):
        assert tvd({(1, 0): 1.0}, {(0, 1): 1.0}) == 1.0

    def test_empirical_meanfield_close_to_null(self):
        u = haar_unitary(4, 3)
        batch = sample_meanfield(u, (1, 1, 1, 1), 100_000, 4, "independent")
        table = tally(batch)
        freq = {t: c / table.total for t, c in table.counts.items()}
        assert tvd(freq, meanfield_test_state_distribution(4)) <= 0.02


class TestChiSquare:
    def test_exact_counts_give_zero(self):
        null = meanfield_test_state_distribution(4)
        counts = {t: round(p * 2560) for t, p in null.items()}
        table = CountTable(counts, 4, 4, sum(counts.values()))
        stat, dof, p = chi_square_vs_reference(table, null)
        assert stat == 0.0
        assert p == 1.0
        assert dof == len(null) - 1

    def test_tabulated_quantiles(self):
        # upper 5% quantiles, dof 1..10
        upper_05 = [3.841, 5.991, 7.815, 9.488, 11.070,
                    12.592, 14.067, 15.507, 16.919, 18.307]
        for dof, q in enumerate(upper_05, start=1):
            assert chi_square_upper_tail(q, dof) == pytest.approx(0.05, abs=1e-3)
        # a couple of 1% quantiles for good measure
        assert chi_square_upper_tail(6.635, 1) == pytest.approx(0.01, abs=1e-3)
        assert chi_square_upper_tail(23.209, 10) == pytest.approx(0.01, abs=1e-3)

    def test_matches_scipy_incomplete_gamma(self):
        scipy_special = pytest.importorskip("scipy.special")
        for dof in range(1, 21):
            for x in (0.0, 0.01, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0, 60.0, 150.0):
                mine = chi_square_upper_tail(x, dof)
                ref = float(scipy_special.gammaincc(dof / 2.0, x / 2.0))
                assert mine == pytest.approx(ref, abs=1e-10)

    def test_pooling_merges_small_cells(self):
        null = meanfield_test_state_distribution(4)
        # 300 samples: many expected counts fall below 5 and must pool
        u = haar_unitary(4, 5)
        batch = sample_meanfield(u, (1, 1, 1, 1), 300, 6, "independent")
        stat, dof, p = chi_square_vs_reference(tally(batch), null)
        assert dof < len(null) - 1
        assert 0.0 <= p <= 1.0

    def test_degenerate_pooling_rejected(self):
        table = CountTable({(1, 0): 2, (0, 1): 1}, 1, 2, 3)
        with pytest.raises(ValueError, match="degenerate|single cell"):
            chi_square_vs_reference(table, {(1, 0): 0.5, (0, 1): 0.5})

    def test_event_outside_support_rejected(self):
        table = CountTable({(2, 0): 10}, 2, 2, 10)
        with pytest.raises(ValueError, match="support"):
            chi_square_vs_reference(table, {(1, 1): 0.5, (0, 2): 0.5})


class TestCertify:
    def test_boson_stream_rejected_as_boson_like(self):
        u = haar_unitary(4, 7)
        batch = sample_boson(u, (1, 1, 1, 1), 10_000, 8)
        report = certify_against_meanfield(batch)
        assert report.verdict == VERDICT_BOSON
        assert report.p_value < 1e-3
        assert report.samples == 10_000

    def test_meanfield_stream_fails_to_reject(self):
        u = haar_unitary(4, 9)
        batch = sample_meanfield(u, (1, 1, 1, 1), 10_000, 10, "independent")
        report = certify_against_meanfield(batch)
        assert report.verdict == VERDICT_MEANFIELD

    def test_small_stream_is_inconclusive(self):
        u = haar_unitary(4, 11)
        batch = sample_meanfield(u, (1, 1, 1, 1), 100, 12, "independent")
        report = certify_against_meanfield(batch)
        assert report.verdict == VERDICT_INCONCLUSIVE

    def test_deterministic(self):
        u = haar_unitary(4, 13)
        batch = sample_meanfield(u, (1, 1, 1, 1), 5000, 14, "independent")
        assert certify_against_meanfield(batch) == certify_against_meanfield(batch)

    def test_wrong_photon_count_rejected(self):
        events = [(1, 1, 0, 0)] * 10
        with pytest.raises(ValueError, match="photons"):
            certify_against_meanfield(events, n=4)

    def test_non_test_state_shape_rejected(self):
        events = [(1, 1, 0, 0)] * 10  # two photons over four modes
        with pytest.raises(ValueError, match="modes"):
            certify_against_meanfield(events)

    def test_reference_never_depends_on_matrix(self):
        # the certifier's null is built from the photon number alone; the
        # distributions "for" different unitaries must be bit-identical
        references = []
        for seed in range(20):
            haar_unitary(4, seed)  # a matrix exists, but the null ignores it
            references.append(meanfield_test_state_distribution(4))
        first = references[0]
        assert all(r == first for r in references[1:])
        spreads = {
            spread_statistic(
                CountTable({t: round(p * 2560) for t, p in r.items()}, 4, 4, 2560)
            )
            for r in references
        }
        assert len(spreads) == 1

    def test_type_one_error_rate_matches_significance(self):
        # ~significance of the independent-variant nulls should be rejected
        u = haar_unitary(4, 15)
        rejections = 0
        runs = 1000
        rng = np.random.default_rng(16)
        for _ in range(runs):
            batch = sample_meanfield(u, (1, 1, 1, 1), 2000, rng, "independent")
            _, _, p = chi_square_vs_reference(
                tally(batch), meanfield_test_state_distribution(4)
            )
            rejections += p < 1e-3
        # Binomial(1000, 1e-3): P(X > 6) < 1e-4
        assert rejections <= 6


class TestMostFrequentEvent:
    def test_peaked_table_wins(self):
        a = tally([(1, 0)] * 60 + [(0, 1)] * 40)
        b = tally([(1, 0)] * 50 + [(0, 1)] * 50)
        assert most_frequent_event_test(a, b) == "first"
        assert most_frequent_event_test(b, a) == "second"

    def test_identical_tables_inconclusive(self):
        a = tally([(1, 0)] * 60 + [(0, 1)] * 40)
        assert most_frequent_event_test(a, a) == "inconclusive"

    def test_boson_vs_meanfield_batches(self):
        wins = 0
        for seed in range(10):
            u = haar_unitary(4, seed + 100)
            boson = sample_boson(u, (0, 1, 1, 0), 10_000, 2 * seed)
            meanfield = sample_meanfield(u, (0, 1, 1, 0), 10_000, 2 * seed + 1, "shared")
            wins += most_frequent_event_test(boson, meanfield) == "first"
        assert wins >= 8

    def test_mismatched_spaces_rejected(self):
        with pytest.raises(ValueError, match="spaces"):
            most_frequent_event_test([(1, 0)], [(1, 0, 0)])

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            most_frequent_event_test([], [(1, 0)])
