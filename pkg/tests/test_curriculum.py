import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freqtrain import (
    ConfigError,
    Crop,
    Downsample,
    HighPass,
    Identity,
    LowPass,
    MagnitudeRule,
    RangeError,
    Schedule,
    Stage,
    efficienttrain_schedule,
    lookup,
    relative_cost,
    schedule_from_dict,
    schedule_to_dict,
    schedule_to_json,
)

# relative-cost grid printed for the crop curricula: rows are the epoch the
# crop stops (as a fraction of 300), columns B in {96, 128, 160, 192}
COST_GRID = {
    300: (0.18, 0.31, 0.49, 0.72),
    225: (0.38, 0.48, 0.62, 0.79),
    150: (0.59, 0.66, 0.75, 0.86),
    75: (0.79, 0.83, 0.87, 0.93),
}
BANDWIDTHS = (96, 128, 160, 192)


def crop_then_full(bandwidth: int, switch: int, total: int = 300) -> Schedule:
    # the grid's full-length crop rows keep no full-resolution tail; valid
    # schedules need one, so give them a single base epoch (cost shift < 0.007)
    switch = min(switch, total - 1)
    return Schedule(
        total,
        (Stage(1, switch, Crop(bandwidth)), Stage(switch + 1, total, Crop(224))),
        MagnitudeRule(),
        224,
    )


class TestTransformSpecs:
    def test_odd_crop_rejected(self):
        with pytest.raises(ConfigError):
            Crop(95)

    def test_negative_radius_rejected(self):
        with pytest.raises(ConfigError):
            LowPass(-1.0)

    def test_bad_downsample_rejected(self):
        with pytest.raises(ConfigError):
            Downsample(0)
        with pytest.raises(ConfigError):
            Downsample(2, "box")


class TestScheduleValidation:
    def test_gap_rejected(self):
        with pytest.raises(ConfigError):
            Schedule(10, (Stage(1, 4, Crop(96)), Stage(6, 10, Identity())))

    def test_overlap_rejected(self):
        with pytest.raises(ConfigError):
            Schedule(10, (Stage(1, 5, Crop(96)), Stage(5, 10, Identity())))

    def test_uncovered_tail_rejected(self):
        with pytest.raises(ConfigError):
            Schedule(10, (Stage(1, 9, Identity()),))

    def test_non_identity_final_rejected(self):
        with pytest.raises(ConfigError):
            Schedule(10, (Stage(1, 10, Crop(96)),))
        with pytest.raises(ConfigError):
            Schedule(10, (Stage(1, 10, LowPass(40.0)),))

    def test_base_resolution_crop_counts_as_identity(self):
        Schedule(10, (Stage(1, 10, Crop(224)),))
        Schedule(10, (Stage(1, 10, Crop(64)),), base_resolution=64)


class TestBuiltinSchedule:
    def test_t300_reference_stages(self):
        sched = efficienttrain_schedule(300)
        assert [(s.start, s.end, s.transform.B) for s in sched.stages] == [
            (1, 180, 160),
            (181, 240, 192),
            (241, 300, 224),
        ]
        assert sched.magnitude == MagnitudeRule(m0=9.0, kind="linear")

    def test_t100_scaled_boundaries(self):
        sched = efficienttrain_schedule(100)
        assert [(s.start, s.end, s.transform.B) for s in sched.stages] == [
            (1, 60, 160),
            (61, 80, 192),
            (81, 100, 224),
        ]

    def test_t1_collapses_to_final_stage(self):
        sched = efficienttrain_schedule(1)
        assert [(s.start, s.end, s.transform.B) for s in sched.stages] == [(1, 1, 224)]

    @settings(max_examples=60, deadline=None)
    @given(total=st.integers(1, 2000))
    def test_boundaries_proportional_and_valid(self, total):
        sched = efficienttrain_schedule(total)
        assert sched.stages[-1].end == total
        assert isinstance(sched.stages[-1].transform, Crop)
        assert sched.stages[-1].transform.B == 224
        first = sched.stages[0]
        if first.transform.B == 160:
            fraction = first.length / total
            assert 0.6 - 1.0 / total <= fraction <= 0.6 + 1.0 / total


class TestLookup:
    def test_table_rows(self):
        sched = efficienttrain_schedule(300)
        assert lookup(sched, 100) == (Crop(160), pytest.approx(3.0))
        transform, m = lookup(sched, 181)
        assert transform == Crop(192)
        assert m == pytest.approx(181 / 300 * 9)
        assert lookup(sched, 280) == (Crop(224), pytest.approx(8.4))

    def test_final_epoch_is_identity_at_base(self):
        for total in (1, 7, 100, 300):
            sched = efficienttrain_schedule(total)
            transform, _ = lookup(sched, total)
            assert transform == Crop(224)

    def test_out_of_range_rejected(self):
        sched = efficienttrain_schedule(300)
        with pytest.raises(RangeError):
            lookup(sched, 0)
        with pytest.raises(RangeError):
            lookup(sched, 301)

    def test_constant_magnitude_rule(self):
        sched = Schedule(10, (Stage(1, 10, Identity()),), MagnitudeRule(kind="constant", value=7.0))
        assert lookup(sched, 3) == (Identity(), 7.0)


class TestRelativeCost:
    def test_constant_full_resolution(self):
        sched = Schedule(300, (Stage(1, 300, Crop(224)),))
        assert relative_cost(sched) == (pytest.approx(1.0), pytest.approx(1.0))

    def test_crop96_then_full(self):
        cost, speedup = relative_cost(crop_then_full(96, 225))
        assert cost == pytest.approx(0.75 * (96 / 224) ** 2 + 0.25, abs=1e-12)
        assert cost == pytest.approx(0.38, abs=0.03)
        assert speedup == pytest.approx(1.0 / cost)

    def test_reference_grid_within_tolerance(self):
        for switch, row in COST_GRID.items():
            for bandwidth, printed in zip(BANDWIDTHS, row):
                cost, _ = relative_cost(crop_then_full(bandwidth, switch))
                assert cost == pytest.approx(printed, abs=0.03), (bandwidth, switch)

    def test_builtin_schedule_speedup(self):
        cost, speedup = relative_cost(efficienttrain_schedule(300))
        assert cost == pytest.approx(0.653, abs=1e-3)
        assert speedup == pytest.approx(1.53, abs=0.05)

    def test_filters_cost_full_price(self):
        sched = Schedule(10, (Stage(1, 5, LowPass(40.0)), Stage(6, 10, Identity())))
        assert relative_cost(sched)[0] == pytest.approx(1.0)

    def test_downsample_cost_quadratic_in_ratio(self):
        sched = Schedule(10, (Stage(1, 5, Downsample(2)), Stage(6, 10, Identity())))
        assert relative_cost(sched)[0] == pytest.approx(0.5 * 0.25 + 0.5)

    @settings(max_examples=40, deadline=None)
    @given(
        bands=st.lists(st.sampled_from([96, 128, 160, 192, 224]), min_size=1, max_size=4),
        bump=st.integers(0, 3),
    )
    def test_monotone_in_any_stage_bandwidth(self, bands, bump):
        bands = sorted(bands) + [224]
        spans = []
        start = 1
        for i, b in enumerate(bands):
            end = start + 9
            spans.append(Stage(start, end, Crop(b)))
            start = end + 1
        total = spans[-1].end
        sched = Schedule(total, tuple(spans))
        cost, _ = relative_cost(sched)
        assert 0 < cost <= 1.0 + 1e-12
        index = bump % (len(bands) - 1) if len(bands) > 1 else 0
        grid = [96, 128, 160, 192, 224]
        raised = grid[min(grid.index(bands[index]) + 1, len(grid) - 1)]
        bumped = list(bands)
        bumped[index] = raised
        stages2 = tuple(
            Stage(s.start, s.end, Crop(b)) for s, b in zip(spans, bumped)
        )
        cost2, _ = relative_cost(Schedule(total, stages2))
        assert cost2 >= cost - 1e-12


class TestJsonFormat:
    def test_roundtrip(self):
        sched = efficienttrain_schedule(300)
        clone = schedule_from_dict(json.loads(schedule_to_json(sched)))
        assert clone == sched

    def test_canonical_key_order(self):
        payload = schedule_to_dict(efficienttrain_schedule(300))
        assert list(payload) == ["total_epochs", "base_resolution", "stages", "magnitude"]
        assert list(payload["stages"][0]) == ["start", "end", "transform"]

    def test_unknown_top_level_field_rejected(self):
        payload = schedule_to_dict(efficienttrain_schedule(10))
        payload["comment"] = "nope"
        with pytest.raises(ConfigError):
            schedule_from_dict(payload)

    def test_unknown_transform_field_rejected(self):
        payload = schedule_to_dict(efficienttrain_schedule(10))
        payload["stages"][0]["transform"]["extra"] = 1
        with pytest.raises(ConfigError):
            schedule_from_dict(payload)

    def test_unknown_magnitude_field_rejected(self):
        payload = schedule_to_dict(efficienttrain_schedule(10))
        payload["magnitude"]["gamma"] = 2
        with pytest.raises(ConfigError):
            schedule_from_dict(payload)

    def test_all_transform_kinds_roundtrip(self):
        stages = (
            Stage(1, 2, Crop(96)),
            Stage(3, 4, LowPass(40.0)),
            Stage(5, 6, HighPass(12.5)),
            Stage(7, 8, Downsample(2, "bilinear")),
            Stage(9, 10, Identity()),
        )
        sched = Schedule(10, stages)
        clone = schedule_from_dict(schedule_to_dict(sched))
        assert clone == sched
