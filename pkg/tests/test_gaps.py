import numpy as np
import pytest

from gapgauge import (GapSet, GapSpec, TimeSeries, apply_gaps,
                      gap_set_from_json, gap_set_to_json, generate_gaps,
                      pre_gap_window)
from gapgauge.errors import (CapacityError, GapConflictError,
                             RangeError, ReferenceWindowError)


def series_1_to_10():
    return TimeSeries.fully_observed(0.0, 3600.0, np.arange(1.0, 11.0))


def extended_intervals_disjoint(gap_set):
    intervals = sorted(g.extended_interval() for g in gap_set)
    return all(intervals[i][1] <= intervals[i + 1][0]
               for i in range(len(intervals) - 1))


class TestGenerateGaps:
    def test_paper_scale_generation_is_reproducible(self):
        first = generate_gaps(100_000, 100, 2, 48, seed=7)
        second = generate_gaps(100_000, 100, 2, 48, seed=7)
        assert first == second
        assert len(first) == 100
        assert extended_intervals_disjoint(first)

    def test_single_gap_bounds(self):
        gap_set = generate_gaps(10, 1, 2, 2, seed=1)
        (gap,) = gap_set.gaps
        assert gap.length == 2
        assert 2 <= gap.start_index <= 8

    def test_infeasible_packing_reports_placed_count(self):
        with pytest.raises(CapacityError) as err:
            generate_gaps(8, 3, 4, 4, seed=0)
        assert "placed" in str(err.value)

    def test_lengths_within_bounds_and_window_room(self):
        for seed in range(8):
            gap_set = generate_gaps(5_000, 40, 2, 48, seed=seed)
            assert extended_intervals_disjoint(gap_set)
            for gap in gap_set:
                assert 2 <= gap.length <= 48
                assert gap.start_index >= gap.length
                assert gap.end_index <= 5_000

    def test_min_start_reserves_history(self):
        gap_set = generate_gaps(3_000, 10, 2, 10, seed=3, min_start=1_000)
        assert all(g.start_index >= 1_000 for g in gap_set)

    def test_different_seeds_differ(self):
        assert generate_gaps(5_000, 10, 2, 48, seed=1) != \
            generate_gaps(5_000, 10, 2, 48, seed=2)

    def test_json_round_trip_is_byte_stable(self):
        gap_set = generate_gaps(500, 4, 2, 10, seed=11)
        text = gap_set_to_json(gap_set)
        assert text.startswith('{"seed": 11, "source_length": 500, "gaps": [')
        assert gap_set_from_json(text) == gap_set
        assert gap_set_to_json(gap_set_from_json(text)) == text


class TestApplyGaps:
    def test_masks_exactly_the_gap_and_keeps_truth(self):
        gap = GapSpec(4, 2)
        masked, truth = apply_gaps(series_1_to_10(),
                                   GapSet((gap,), seed=0, source_length=10))
        assert np.array_equal(masked.observed,
                              [1, 1, 1, 1, 0, 0, 1, 1, 1, 1])
        assert np.array_equal(truth[gap], [5.0, 6.0])

    def test_empty_gap_set_is_identity(self):
        series = series_1_to_10()
        masked, truth = apply_gaps(series, GapSet((), seed=0, source_length=10))
        assert np.array_equal(masked.observed, series.observed)
        assert np.array_equal(masked.values, series.values)
        assert truth == {}

    def test_pre_masked_position_conflicts(self):
        series = series_1_to_10()
        series.observed[5] = False
        with pytest.raises(GapConflictError):
            apply_gaps(series, GapSet((GapSpec(4, 2),), seed=0, source_length=10))

    def test_out_of_range_gap(self):
        with pytest.raises(RangeError):
            apply_gaps(series_1_to_10(),
                       GapSet((GapSpec(9, 5),), seed=0, source_length=10))

    def test_round_trip_restores_original(self):
        rng = np.random.default_rng(2)
        series = TimeSeries.fully_observed(0.0, 3600.0, rng.normal(size=4_000))
        gap_set = generate_gaps(4_000, 25, 2, 48, seed=9)
        masked, truth = apply_gaps(series, gap_set)
        restored = masked.copy()
        for gap, values in truth.items():
            restored.values[gap.start_index:gap.end_index] = values
            restored.observed[gap.start_index:gap.end_index] = True
        assert np.array_equal(restored.values, series.values)
        assert np.array_equal(restored.observed, series.observed)

    def test_original_untouched(self):
        series = series_1_to_10()
        apply_gaps(series, GapSet((GapSpec(4, 2),), seed=0, source_length=10))
        assert series.observed.all()


class TestPreGapWindow:
    def test_window_precedes_gap(self):
        masked, _ = apply_gaps(series_1_to_10(),
                               GapSet((GapSpec(4, 2),), seed=0, source_length=10))
        sample = pre_gap_window(masked, GapSpec(4, 2))
        assert np.array_equal(sample.values, [3.0, 4.0])

    def test_window_at_series_start(self):
        sample = pre_gap_window(series_1_to_10(), GapSpec(2, 2))
        assert np.array_equal(sample.values, [1.0, 2.0])

    def test_underflow_errors(self):
        with pytest.raises(ReferenceWindowError):
            pre_gap_window(series_1_to_10(), GapSpec(1, 2))

    def test_unobserved_window_errors(self):
        series = series_1_to_10()
        series.observed[3] = False
        with pytest.raises(ReferenceWindowError):
            pre_gap_window(series, GapSpec(4, 2))

    def test_window_length_matches_gap_for_generated_sets(self):
        series = TimeSeries.fully_observed(0.0, 3600.0, np.arange(6_000.0))
        gap_set = generate_gaps(6_000, 30, 2, 48, seed=4)
        masked, _ = apply_gaps(series, gap_set)
        for gap in gap_set:
            assert len(pre_gap_window(masked, gap)) == gap.length
