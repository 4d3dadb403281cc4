"""Consecutive-event pair detection and two-event clip windows.

Two events form a candidate pair when they are adjacent in the sorted
stream of the same half and the second follows the first by 1 to 7
seconds inclusive. Candidates are rejected when they are replays of the
same action, then fitted into a ≤10 s window with lead/tail padding,
shrunk symmetrically when too long. Windows longer than 8 s are flagged.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .annotations import (
    CameraKind,
    EventLabel,
    MatchAnnotations,
    MatchId,
    Team,
    TimeSpan,
)
from .errors import SoccerForgeError

DEFAULT_GAP_MIN_MS = 1_000
DEFAULT_GAP_MAX_MS = 7_000
DEFAULT_LEAD_MS = 2_000
DEFAULT_TAIL_MS = 3_000
DEFAULT_MAX_CLIP_MS = 10_000
DEFAULT_FLAG_MS = 8_000


class WindowImpossible(SoccerForgeError):
    """The events are further apart than the maximum clip length (caller bug)."""


class RoleTag(Enum):
    START = "Start"
    END = "End"
    UNRELATED = "Unrelated"


@dataclass
class EventPair:
    """A validated two-event clip specification."""

    first: EventLabel
    second: EventLabel
    gap_ms: int
    span: TimeSpan
    role_tags: dict[str, RoleTag]  # camera-segment key -> role within the pair
    flagged_long: bool
    valid: bool
    pair_id: str = ""


def find_consecutive(
    events: list[EventLabel],
    gap_min_ms: int = DEFAULT_GAP_MIN_MS,
    gap_max_ms: int = DEFAULT_GAP_MAX_MS,
) -> list[tuple[EventLabel, EventLabel]]:
    """All adjacent same-half pairs with a gap in [gap_min_ms, gap_max_ms].

    Adjacent means consecutive in the sorted stream: no third event sits
    between the two. Expects events sorted by (half, timestamp).
    """
    pairs = []
    for a, b in zip(events, events[1:]):
        if a.half != b.half:
            continue
        gap = b.timestamp_ms - a.timestamp_ms
        if gap_min_ms <= gap <= gap_max_ms:
            pairs.append((a, b))
    return pairs


def validate_not_replay(
    pair: tuple[EventLabel, EventLabel], annotations: MatchAnnotations
) -> bool:
    """Reject pairs that are really one action shown twice.

    False when either event's timestamp lies inside a Replay camera
    segment, or when both events carry the same label and the second sits
    in a Replay segment.
    """
    first, second = pair

    def in_replay(e: EventLabel) -> bool:
        return any(
            seg.kind is CameraKind.REPLAY
            and seg.half == e.half
            and seg.span.contains(e.timestamp_ms)
            for seg in annotations.camera
        )

    if in_replay(first) or in_replay(second):
        return False
    if first.label == second.label and in_replay(second):
        return False
    return True


def fit_pair_window(
    pair: tuple[EventLabel, EventLabel],
    annotations: MatchAnnotations,
    lead_ms: int = DEFAULT_LEAD_MS,
    tail_ms: int = DEFAULT_TAIL_MS,
    max_clip_ms: int = DEFAULT_MAX_CLIP_MS,
    flag_ms: int = DEFAULT_FLAG_MS,
) -> EventPair:
    """Fit a validated pair into a padded window of at most max_clip_ms.

    The raw window is [first - lead, second + tail]; excess length is
    shaved symmetrically, never past either event, then the start is
    clamped to the half clock's zero. Camera segments overlapping the
    window are tagged Start / End / Unrelated by which event they contain.
    """
    first, second = pair
    gap = second.timestamp_ms - first.timestamp_ms
    if gap >= max_clip_ms:
        # with half-open spans both events fit only when gap < max length
        raise WindowImpossible(f"gap {gap} ms exceeds max clip length {max_clip_ms} ms")

    start = first.timestamp_ms - lead_ms
    end = second.timestamp_ms + tail_ms
    excess = (end - start) - max_clip_ms
    if excess > 0:
        # shave both sides, never past either event (end stays > second)
        left_cap = max(lead_ms, 0)
        right_cap = max(tail_ms - 1, 0)
        shave_left = min(excess // 2, left_cap)
        shave_right = min(excess - shave_left, right_cap)
        shave_left = min(excess - shave_right, left_cap)
        start += shave_left
        end -= shave_right
    start = max(start, 0)
    span = TimeSpan(start, end)

    role_tags: dict[str, RoleTag] = {}
    for seg in annotations.camera:
        if seg.half != first.half or not seg.span.intersects(span):
            continue
        if seg.span.contains(first.timestamp_ms):
            role_tags[seg.key()] = RoleTag.START
        elif seg.span.contains(second.timestamp_ms):
            role_tags[seg.key()] = RoleTag.END
        else:
            role_tags[seg.key()] = RoleTag.UNRELATED

    return EventPair(
        first=first,
        second=second,
        gap_ms=gap,
        span=span,
        role_tags=role_tags,
        flagged_long=span.duration_ms > flag_ms,
        valid=True,
    )


def pair_match(
    annotations: MatchAnnotations,
    gap_min_ms: int = DEFAULT_GAP_MIN_MS,
    gap_max_ms: int = DEFAULT_GAP_MAX_MS,
    lead_ms: int = DEFAULT_LEAD_MS,
    tail_ms: int = DEFAULT_TAIL_MS,
    max_clip_ms: int = DEFAULT_MAX_CLIP_MS,
    flag_ms: int = DEFAULT_FLAG_MS,
) -> list[EventPair]:
    """Find, validate and fit all event pairs for one match, ids assigned."""
    pairs = []
    for candidate in find_consecutive(list(annotations.events), gap_min_ms, gap_max_ms):
        if not validate_not_replay(candidate, annotations):
            continue
        pairs.append(
            fit_pair_window(
                candidate, annotations, lead_ms, tail_ms, max_clip_ms, flag_ms
            )
        )
    for i, pair in enumerate(pairs):
        pair.pair_id = f"p{i:05d}"
    return pairs


# ---------------------------------------------------------------------------
# sidecar metadata (mirrors the single-clip sidecar, plus pair fields)


def pair_to_record(pair: EventPair) -> dict:
    return {
        "clip_id": pair.pair_id,
        "match_id": pair.first.match.render(),
        "half": pair.first.half,
        "span": {"start_ms": pair.span.start_ms, "end_ms": pair.span.end_ms},
        "labels": [pair.first.label, pair.second.label],
        "teams": [pair.first.team.value, pair.second.team.value],
        "anchors_ms": [pair.first.timestamp_ms, pair.second.timestamp_ms],
        "gap_ms": pair.gap_ms,
        "flagged_long": pair.flagged_long,
        "role_tags": {k: v.value for k, v in pair.role_tags.items()},
        "valid": pair.valid,
    }


def pair_from_record(rec: dict, match: MatchId) -> EventPair:
    half = rec["half"]
    first = EventLabel(
        match=match,
        half=half,
        timestamp_ms=rec["anchors_ms"][0],
        label=rec["labels"][0],
        team=Team(rec["teams"][0]),
    )
    second = EventLabel(
        match=match,
        half=half,
        timestamp_ms=rec["anchors_ms"][1],
        label=rec["labels"][1],
        team=Team(rec["teams"][1]),
    )
    return EventPair(
        first=first,
        second=second,
        gap_ms=rec["gap_ms"],
        span=TimeSpan(rec["span"]["start_ms"], rec["span"]["end_ms"]),
        role_tags={k: RoleTag(v) for k, v in rec.get("role_tags", {}).items()},
        flagged_long=bool(rec["flagged_long"]),
        valid=bool(rec.get("valid", True)),
        pair_id=rec["clip_id"],
    )

