import numpy as np
import pytest

from gapgauge import (Histogram, MetricRecord, jsd, jsd_histograms, kl, mae,
                      rmse, shared_histogram, wasserstein_1d)
from gapgauge.errors import (EmptySampleError, InvalidParameterError,
                             InvalidSampleError, ShapeError)

from _oracles import jsd_direct, kl_direct, transport_cost_bruteforce


def random_sample(rng, max_size=12):
    size = int(rng.integers(1, max_size + 1))
    return rng.normal(scale=rng.uniform(0.5, 5.0), size=size)


class TestWasserstein:
    def test_identical_samples(self):
        assert wasserstein_1d([1, 2, 3], [1, 2, 3]) == 0.0

    def test_unit_translation(self):
        assert wasserstein_1d([0, 1], [1, 2]) == pytest.approx(1.0, abs=1e-12)

    def test_unequal_sizes_hand_value(self):
        # CDFs differ by 0.5 over [0, 4]; the coupling LP agrees.
        assert wasserstein_1d([0, 0, 0, 0], [0, 4]) == pytest.approx(2.0, abs=1e-12)
        assert transport_cost_bruteforce([0, 0, 0, 0], [0, 4]) == pytest.approx(2.0, abs=1e-9)

    def test_equal_size_equals_sorted_mean_abs_diff(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            n = int(rng.integers(1, 20))
            p, q = rng.normal(size=n), rng.normal(size=n)
            direct = np.mean(np.abs(np.sort(p) - np.sort(q)))
            assert wasserstein_1d(p, q) == pytest.approx(direct, abs=1e-12)

    def test_symmetry_and_nonnegativity(self):
        rng = np.random.default_rng(2)
        for _ in range(300):
            p, q = random_sample(rng), random_sample(rng)
            d = wasserstein_1d(p, q)
            assert d >= 0.0
            assert d == pytest.approx(wasserstein_1d(q, p), abs=1e-12)

    def test_zero_iff_equal_multisets(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            p = random_sample(rng)
            shuffled = rng.permutation(p)
            assert wasserstein_1d(p, shuffled) == pytest.approx(0.0, abs=1e-12)
            assert wasserstein_1d(p, p + 0.37) > 0.1

    def test_translation_equivariance(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            p = random_sample(rng)
            q = random_sample(rng)
            c = float(rng.normal(scale=10))
            assert wasserstein_1d(p, p + c) == pytest.approx(abs(c), abs=1e-9)
            assert wasserstein_1d(p + c, q + c) == pytest.approx(
                wasserstein_1d(p, q), abs=1e-9)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            a, b, c = (random_sample(rng) for _ in range(3))
            assert wasserstein_1d(a, c) <= \
                wasserstein_1d(a, b) + wasserstein_1d(b, c) + 1e-9

    def test_matches_bruteforce_coupling_small_sizes(self):
        rng = np.random.default_rng(6)
        for n in range(1, 7):
            for m in range(1, 7):
                for _ in range(4):
                    p = rng.normal(size=n)
                    q = rng.normal(size=m)
                    assert wasserstein_1d(p, q) == pytest.approx(
                        transport_cost_bruteforce(p, q), abs=1e-9)

    def test_empty_sample_rejected(self):
        with pytest.raises(EmptySampleError):
            wasserstein_1d([], [1.0])

    def test_non_finite_rejected(self):
        with pytest.raises(InvalidSampleError):
            wasserstein_1d([np.nan], [1.0])


class TestSharedHistogram:
    def test_identical_samples_identical_histograms(self):
        hp, hq = shared_histogram([1, 2, 2, 3], [1, 2, 2, 3], bins=5)
        assert np.array_equal(hp.edges, hq.edges)
        assert np.allclose(hp.mass, hq.mass)

    def test_separated_points_land_in_separate_bins(self):
        hp, hq = shared_histogram([0.0], [10.0], bins=2, epsilon=1e-9)
        assert hp.mass[0] > 0.99 and hq.mass[1] > 0.99

    def test_masses_normalized(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            hp, hq = shared_histogram(random_sample(rng), random_sample(rng))
            assert hp.mass.sum() == pytest.approx(1.0, abs=1e-9)
            assert hq.mass.sum() == pytest.approx(1.0, abs=1e-9)
            assert np.all(hp.mass > 0) and np.all(hq.mass > 0)

    def test_degenerate_range_widened(self):
        hp, hq = shared_histogram([5.0, 5.0], [5.0], bins=4)
        assert hp.edges[-1] - hp.edges[0] == pytest.approx(1.0)
        # the shared value must sit strictly inside a bin, not on an edge
        assert not np.any(np.isclose(hp.edges, 5.0))
        assert np.allclose(hp.mass, hq.mass)

    def test_nearly_identical_samples_do_not_straddle_edges(self):
        base = np.full(12, 6.0)
        wiggled = base + 3e-15
        assert jsd(base, wiggled) <= 1e-6

    def test_parameter_validation(self):
        with pytest.raises(InvalidParameterError):
            shared_histogram([1.0], [2.0], bins=1)
        with pytest.raises(InvalidParameterError):
            shared_histogram([1.0], [2.0], epsilon=0.0)


class TestKL:
    def edges(self, k):
        return np.arange(k + 1, dtype=float)

    def test_identical_is_zero(self):
        h = Histogram(self.edges(2), np.array([0.4, 0.6]))
        assert kl(h, h) == pytest.approx(0.0, abs=1e-12)

    def test_one_bit_hand_value(self):
        p = Histogram(self.edges(2), np.array([1.0, 0.0]))
        q = Histogram(self.edges(2), np.array([0.5, 0.5]))
        assert kl(p, q) == pytest.approx(1.0, abs=1e-12)

    def test_asymmetry_witnessed(self):
        p = Histogram(self.edges(2), np.array([0.9, 0.1]))
        q = Histogram(self.edges(2), np.array([0.5, 0.5]))
        forward = kl(p, q)
        backward = kl(q, p)
        assert forward == pytest.approx(kl_direct([0.9, 0.1], [0.5, 0.5]), abs=1e-12)
        assert backward == pytest.approx(kl_direct([0.5, 0.5], [0.9, 0.1]), abs=1e-12)
        assert forward != backward

    def test_non_negative(self):
        rng = np.random.default_rng(8)
        for _ in range(200):
            k = int(rng.integers(2, 8))
            p = rng.dirichlet(np.ones(k))
            q = rng.dirichlet(np.ones(k)) + 1e-9
            q = q / q.sum()
            assert kl(Histogram(self.edges(k), p),
                      Histogram(self.edges(k), q)) >= -1e-12

    def test_mismatched_edges_rejected(self):
        p = Histogram(np.array([0.0, 1.0, 2.0]), np.array([0.5, 0.5]))
        q = Histogram(np.array([0.0, 2.0, 4.0]), np.array([0.5, 0.5]))
        with pytest.raises(ShapeError):
            kl(p, q)


class TestJSD:
    def test_identical_samples_near_zero(self):
        rng = np.random.default_rng(9)
        sample = rng.normal(size=50)
        assert jsd(sample, sample) <= 1e-6

    def test_disjoint_supports_near_one(self):
        assert jsd(np.zeros(40), np.full(40, 10.0),
                   epsilon=1e-12) == pytest.approx(1.0, abs=1e-6)

    def test_histogram_hand_value(self):
        p = Histogram(np.array([0.0, 1.0, 2.0]), np.array([1.0, 0.0]))
        q = Histogram(np.array([0.0, 1.0, 2.0]), np.array([0.5, 0.5]))
        expected = jsd_direct([1.0, 0.0], [0.5, 0.5])
        assert expected == pytest.approx(0.3112781244591328, abs=1e-12)
        assert jsd_histograms(p, q) == pytest.approx(expected, abs=1e-12)

    def test_symmetric_and_bounded(self):
        rng = np.random.default_rng(10)
        for _ in range(300):
            p, q = random_sample(rng), random_sample(rng)
            d = jsd(p, q)
            assert 0.0 <= d <= 1.0
            assert d == jsd(q, p)

    def test_matches_direct_summation_on_histograms(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            p, q = random_sample(rng), random_sample(rng)
            hp, hq = shared_histogram(p, q, bins=8)
            assert jsd_histograms(hp, hq) == pytest.approx(
                jsd_direct(hp.mass, hq.mass), abs=1e-12)


class TestPointwiseErrors:
    def test_identical_vectors(self):
        assert rmse([1.0, 2.0], [1.0, 2.0]) == 0.0
        assert mae([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_hand_values(self):
        assert rmse([0, 0], [3, 4]) == pytest.approx(np.sqrt(12.5), abs=1e-12)
        assert mae([0, 0], [3, 4]) == pytest.approx(3.5, abs=1e-12)

    def test_mae_never_exceeds_rmse(self):
        rng = np.random.default_rng(12)
        for _ in range(300):
            n = int(rng.integers(1, 30))
            a, b = rng.normal(size=n), rng.normal(size=n)
            assert mae(a, b) <= rmse(a, b) + 1e-12

    def test_length_mismatch_rejected(self):
        with pytest.raises(ShapeError):
            rmse([1.0], [1.0, 2.0])
        with pytest.raises(ShapeError):
            mae([], [])


class TestMetricRecord:
    def test_success_record_requires_finite_metrics(self):
        with pytest.raises(ShapeError):
            MetricRecord(gap_id="g", imputer_id="m", gap_len=2,
                         wd=1.0, jsd=0.1, rmse=np.inf, mae=1.0)

    def test_error_record_carries_no_metrics(self):
        record = MetricRecord(gap_id="g", imputer_id="m", gap_len=2,
                              error="context: not enough points")
        assert record.failed and record.wd is None
