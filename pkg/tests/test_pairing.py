"""Event pairing: adjacency, gap bounds, replay validation, window fitting."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from soccerforge.annotations import EventLabel, Team, TimeSpan
from soccerforge.pairing import (
    EventPair,
    RoleTag,
    WindowImpossible,
    find_consecutive,
    fit_pair_window,
    pair_match,
    validate_not_replay,
)
from soccerforge.synthetic import generate_match

from conftest import make_match, MATCH, RT, RP


def events_at(*times, half=1, label="Goal"):
    return tuple(
        sorted(
            (EventLabel(MATCH, half, t, label, Team.NONE) for t in times),
            key=EventLabel.sort_key,
        )
    )


class TestFindConsecutive:
    def test_gap_inside_range(self):
        pairs = find_consecutive(list(events_at(50_000, 54_000)))
        assert len(pairs) == 1
        assert pairs[0][1].timestamp_ms - pairs[0][0].timestamp_ms == 4_000

    @pytest.mark.parametrize("second", [50_500, 58_000])
    def test_gap_outside_range(self, second):
        assert find_consecutive(list(events_at(50_000, second))) == []

    @pytest.mark.parametrize("gap,expected", [(999, 0), (1_000, 1), (7_000, 1), (7_001, 0)])
    def test_boundaries_inclusive(self, gap, expected):
        assert len(find_consecutive(list(events_at(50_000, 50_000 + gap)))) == expected

    def test_cross_half_never_pairs(self):
        events = list(events_at(2_000, half=1)) + list(events_at(4_000, half=2))
        events.sort(key=EventLabel.sort_key)
        assert find_consecutive(events) == []

    def test_adjacency_only_no_skipping(self):
        # 3 events 2 s apart: adjacent pairs only, not the 4 s outer pair
        pairs = find_consecutive(list(events_at(10_000, 12_000, 14_000)))
        assert len(pairs) == 2
        gaps = [(b.timestamp_ms - a.timestamp_ms) for a, b in pairs]
        assert gaps == [2_000, 2_000]

    @given(
        st.lists(st.integers(min_value=0, max_value=120_000), min_size=0, max_size=200),
        st.sampled_from([1, 2]),
    )
    @settings(max_examples=200, deadline=None)
    def test_matches_brute_force_on_random_streams(self, times, half):
        events = sorted(
            (EventLabel(MATCH, half, t, "Goal", Team.NONE) for t in times),
            key=EventLabel.sort_key,
        )
        expected = [
            (events[i], events[i + 1])
            for i in range(len(events) - 1)
            if events[i].half == events[i + 1].half
            and 1_000 <= events[i + 1].timestamp_ms - events[i].timestamp_ms <= 7_000
        ]
        assert find_consecutive(events) == expected


class TestValidateNotReplay:
    def test_both_in_realtime_is_valid(self):
        annotations = make_match(
            events=[(1, 20_000, "Foul"), (1, 24_000, "Yellow card")],
            camera=[(1, 0, 60_000, RT)],
        )
        assert validate_not_replay(tuple(annotations.events), annotations) is True

    def test_second_inside_replay_rejected(self):
        annotations = make_match(
            events=[(1, 20_000, "Goal"), (1, 24_000, "Goal")],
            camera=[(1, 0, 23_000, RT), (1, 23_000, 30_000, RP)],
        )
        assert validate_not_replay(tuple(annotations.events), annotations) is False

    def test_first_inside_replay_rejected(self):
        annotations = make_match(
            events=[(1, 20_000, "Goal"), (1, 24_000, "Corner")],
            camera=[(1, 18_000, 21_000, RP), (1, 21_000, 60_000, RT)],
        )
        assert validate_not_replay(tuple(annotations.events), annotations) is False

    def test_synthetic_corpus_rejects_exactly_planted_duplicates(self):
        annotations, book = generate_match(seed=17)
        candidates = find_consecutive(list(annotations.events))
        valid = [p for p in candidates if validate_not_replay(p, annotations)]
        assert len(valid) == book.planted_valid_pairs
        # the planted replay-duplicate pairs are in range but rejected
        assert len(candidates) > len(valid)


class TestFitPairWindow:
    def test_default_padding(self):
        annotations = make_match(
            events=[(1, 10_000, "Throw-in"), (1, 14_000, "Shots off target")],
            camera=[(1, 0, 60_000, RT)],
        )
        pair = fit_pair_window(tuple(annotations.events), annotations)
        assert pair.span == TimeSpan(8_000, 17_000)
        assert pair.span.duration_ms == 9_000
        assert pair.flagged_long is True
        assert pair.gap_ms == 4_000

    def test_short_gap_not_flagged(self):
        annotations = make_match(
            events=[(1, 10_000, "Foul"), (1, 11_000, "Yellow card")],
            camera=[(1, 0, 60_000, RT)],
        )
        pair = fit_pair_window(tuple(annotations.events), annotations)
        assert pair.span == TimeSpan(8_000, 14_000)
        assert pair.span.duration_ms == 6_000
        assert pair.flagged_long is False

    def test_max_gap_shrinks_symmetrically(self):
        annotations = make_match(
            events=[(1, 20_000, "Corner"), (1, 27_000, "Goal")],
            camera=[(1, 0, 60_000, RT)],
        )
        pair = fit_pair_window(tuple(annotations.events), annotations)
        assert pair.span == TimeSpan(19_000, 29_000)
        assert pair.span.duration_ms == 10_000
        assert pair.flagged_long is True

    def test_window_impossible_for_huge_gap(self):
        first = EventLabel(MATCH, 1, 0, "Goal", Team.NONE)
        second = EventLabel(MATCH, 1, 11_000, "Goal", Team.NONE)
        annotations = make_match(camera=[(1, 0, 60_000, RT)])
        with pytest.raises(WindowImpossible):
            fit_pair_window((first, second), annotations)

    def test_role_tags_start_end_unrelated(self):
        annotations = make_match(
            events=[(1, 10_000, "Throw-in"), (1, 16_000, "Shots off target")],
            camera=[
                (1, 0, 11_000, RT),
                (1, 11_000, 14_000, RP),
                (1, 14_000, 60_000, RT),
            ],
        )
        pair = fit_pair_window(tuple(annotations.events), annotations)
        tags = sorted(pair.role_tags.values(), key=lambda t: t.value)
        assert tags == [RoleTag.END, RoleTag.START, RoleTag.UNRELATED]

    def test_flag_tracks_duration_exactly(self):
        # gap sweep: flagged_long iff fitted duration > 8 s
        annotations = make_match(camera=[(1, 0, 120_000, RT)])
        for gap in range(1_000, 7_001, 250):
            first = EventLabel(MATCH, 1, 50_000, "Foul", Team.NONE)
            second = EventLabel(MATCH, 1, 50_000 + gap, "Goal", Team.NONE)
            pair = fit_pair_window((first, second), annotations)
            assert pair.flagged_long == (pair.span.duration_ms > 8_000)
            assert pair.span.duration_ms <= 10_000
            assert pair.span.contains(first.timestamp_ms)
            assert pair.span.contains(second.timestamp_ms)

    def test_window_clamped_at_half_start(self):
        first = EventLabel(MATCH, 1, 500, "Kick-off", Team.NONE)
        second = EventLabel(MATCH, 1, 2_000, "Ball out of play", Team.NONE)
        annotations = make_match(camera=[(1, 0, 60_000, RT)])
        pair = fit_pair_window((first, second), annotations)
        assert pair.span.start_ms == 0


class TestPairMatch:
    def test_synthetic_sweep_matches_book(self):
        for seed in range(10):
            annotations, book = generate_match(seed)
            pairs = pair_match(annotations)
            assert len(pairs) == book.planted_valid_pairs
            spans = sorted((p.first.half, p.span.start_ms, p.span.end_ms) for p in pairs)
            assert spans == book.expected_pair_spans

    def test_pair_invariants(self):
        annotations, _ = generate_match(seed=21)
        for pair in pair_match(annotations):
            assert pair.first.timestamp_ms < pair.second.timestamp_ms
            assert pair.span.contains(pair.first.timestamp_ms)
            assert pair.span.contains(pair.second.timestamp_ms)
            assert pair.span.duration_ms <= 10_000
            assert 1_000 <= pair.gap_ms <= 7_000
            assert pair.valid

    def test_sidecar_records_round_trip(self):
        from soccerforge.pairing import pair_from_record, pair_to_record

        annotations, _ = generate_match(seed=22)
        for pair in pair_match(annotations):
            assert pair_from_record(pair_to_record(pair), annotations.match_id) == pair
