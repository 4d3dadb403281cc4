"""Shared builders and fixtures for the test suite."""

from __future__ import annotations

import pytest

from soccerforge.annotations import (
    AsrSegment,
    CameraKind,
    CameraSegment,
    Caption,
    EventLabel,
    JerseyColors,
    MatchAnnotations,
    MatchId,
    Roster,
    RosterEntry,
    Team,
    TimeSpan,
)

MATCH = MatchId("testleague", "2024", "fixture-01")


def make_match(
    events=(),
    camera=(),
    captions=(),
    asr=(),
    home_color="red",
    away_color="blue",
    roster_entries=None,
) -> MatchAnnotations:
    """Build annotations from shorthand tuples.

    events:   (half, t_ms, label[, team])
    camera:   (half, start_ms, end_ms, kind)
    captions: (half, t_ms, text)
    asr:      (half, start_ms, end_ms, text)
    """
    event_objs = tuple(
        sorted(
            (
                EventLabel(
                    MATCH, e[0], e[1], e[2], e[3] if len(e) > 3 else Team.NONE
                )
                for e in events
            ),
            key=EventLabel.sort_key,
        )
    )
    camera_objs = tuple(
        CameraSegment(MATCH, c[0], TimeSpan(c[1], c[2]), c[3]) for c in camera
    )
    caption_objs = tuple(Caption(MATCH, c[0], c[1], c[2]) for c in captions)
    asr_objs = tuple(AsrSegment(MATCH, a[0], TimeSpan(a[1], a[2]), a[3]) for a in asr)
    roster = None
    if roster_entries is not None:
        roster = Roster(MATCH, tuple(RosterEntry(*e) for e in roster_entries))
    return MatchAnnotations(
        match_id=MATCH,
        events=event_objs,
        camera=camera_objs,
        captions=caption_objs,
        asr=asr_objs,
        jerseys=JerseyColors(MATCH, home_color, away_color),
        roster=roster,
    )


RT = CameraKind.REAL_TIME
RP = CameraKind.REPLAY


@pytest.fixture
def simple_match():
    """One long RealTime half with a Goal in the middle."""
    return make_match(
        events=[(1, 30_000, "Goal", Team.HOME)],
        camera=[(1, 0, 60_000, RT)],
        captions=[(1, 34_000, "red-jerseyed team scores a brilliant goal!")],
        asr=[(1, 28_000, 33_000, "What a stunning finish! The home team takes the lead!")],
    )
