"""Single-event clip extraction from camera segmentation and event labels.

A RealTime clip is a ±window around an event, kept only when the whole
window is consistent in camera type (it touches no Replay footage), then
clipped to the enclosing RealTime segment and truncated to the maximum
clip length symmetrically around the event. Replay camera segments are
paired backwards to the nearest preceding RealTime clip and truncated
from the end, keeping the replay onset.

Clip ids: RealTime clips receive zero-padded sequence numbers in
(half, timestamp) order; a paired replay clip takes its partner's id
plus an "r" suffix so the link is visible in media file names.
"""

from __future__ import annotations

from dataclasses import dataclass

from .annotations import (
    CameraKind,
    CameraSegment,
    EventLabel,
    MatchAnnotations,
    MatchId,
    Team,
    TimeSpan,
)

DEFAULT_EVENT_WINDOW_MS = 5_000
DEFAULT_MAX_CLIP_MS = 10_000
DEFAULT_REPLAY_LOOKBACK_MS = 30_000


@dataclass
class ClipSpec:
    """One extracted clip: a ≤10 s span anchored on a single event."""

    clip_id: str
    match: MatchId
    half: int
    span: TimeSpan
    anchor_event: EventLabel
    kind: CameraKind
    paired_with: str | None = None
    truncated: bool = False


def camera_interval_at(
    annotations: MatchAnnotations, half: int, t_ms: int
) -> CameraSegment | None:
    """Return the camera segment containing t_ms in the half, or None.

    Spans are half-open, so a query exactly at one segment's end_ms falls
    into the following segment.
    """
    for seg in annotations.camera:
        if seg.half == half and seg.span.contains(t_ms):
            return seg
    return None


def _replay_spans(annotations: MatchAnnotations, half: int) -> list[TimeSpan]:
    return [
        c.span
        for c in annotations.camera
        if c.half == half and c.kind is CameraKind.REPLAY
    ]


def _truncate_around(span: TimeSpan, anchor_ms: int, max_ms: int) -> TimeSpan:
    """Trim a too-long span to max_ms keeping the anchor as centered as possible."""
    lo = anchor_ms - max_ms // 2
    hi = lo + max_ms
    if lo < span.start_ms:
        return TimeSpan(span.start_ms, span.start_ms + max_ms)
    if hi > span.end_ms:
        return TimeSpan(span.end_ms - max_ms, span.end_ms)
    return TimeSpan(lo, hi)


def match_event_to_realtime(
    annotations: MatchAnnotations,
    event: EventLabel,
    window_ms: int = DEFAULT_EVENT_WINDOW_MS,
    max_clip_ms: int = DEFAULT_MAX_CLIP_MS,
) -> ClipSpec | None:
    """Build the RealTime clip for one event, or None on a camera-type break.

    The ±window must touch no Replay footage and the event itself must sit
    inside a RealTime segment; the span is the window clipped to that
    segment (footage gaps and half boundaries shorten it), then truncated
    to max_clip_ms around the event.
    """
    seg = camera_interval_at(annotations, event.half, event.timestamp_ms)
    if seg is None or seg.kind is not CameraKind.REAL_TIME:
        return None
    t = event.timestamp_ms
    w_start, w_end = t - window_ms, t + window_ms
    window = TimeSpan(max(w_start, 0), w_end)
    for replay in _replay_spans(annotations, event.half):
        if replay.intersects(window):
            return None
    start = max(w_start, seg.span.start_ms)
    end = min(w_end, seg.span.end_ms)
    span = TimeSpan(start, end)
    truncated = span.duration_ms > max_clip_ms
    if truncated:
        span = _truncate_around(span, t, max_clip_ms)
    return ClipSpec(
        clip_id="",
        match=event.match,
        half=event.half,
        span=span,
        anchor_event=event,
        kind=CameraKind.REAL_TIME,
        truncated=truncated,
    )


def pair_replays(
    annotations: MatchAnnotations,
    realtime_clips: list[ClipSpec],
    lookback_ms: int = DEFAULT_REPLAY_LOOKBACK_MS,
    max_clip_ms: int = DEFAULT_MAX_CLIP_MS,
) -> list[ClipSpec]:
    """Pair each Replay camera segment with the nearest preceding RealTime clip.

    A replay claims the unclaimed RealTime clip with the latest anchor
    timestamp that precedes the replay's start by at most lookback_ms
    (replays show the most recent action); claims are one-to-one so
    paired_with stays symmetric. Unpaired replays are not emitted.
    Replay clips longer than max_clip_ms keep their onset and are
    truncated from the end. Mutates the claimed clips' paired_with.
    """
    replay_clips: list[ClipSpec] = []
    replays = sorted(
        (c for c in annotations.camera if c.kind is CameraKind.REPLAY),
        key=lambda c: (c.half, c.span.start_ms),
    )
    for seg in replays:
        candidates = [
            rt
            for rt in realtime_clips
            if rt.half == seg.half
            and rt.paired_with is None
            and rt.anchor_event.timestamp_ms < seg.span.start_ms
            and seg.span.start_ms - rt.anchor_event.timestamp_ms <= lookback_ms
        ]
        if not candidates:
            continue
        partner = max(
            candidates, key=lambda rt: (rt.anchor_event.timestamp_ms, rt.span.start_ms)
        )
        truncated = seg.span.duration_ms > max_clip_ms
        span = (
            TimeSpan(seg.span.start_ms, seg.span.start_ms + max_clip_ms)
            if truncated
            else seg.span
        )
        clip = ClipSpec(
            clip_id=f"{partner.clip_id}r",
            match=annotations.match_id,
            half=seg.half,
            span=span,
            anchor_event=partner.anchor_event,
            kind=CameraKind.REPLAY,
            paired_with=partner.clip_id,
            truncated=truncated,
        )
        partner.paired_with = clip.clip_id
        replay_clips.append(clip)
    return replay_clips


def segment_match(
    annotations: MatchAnnotations,
    window_ms: int = DEFAULT_EVENT_WINDOW_MS,
    max_clip_ms: int = DEFAULT_MAX_CLIP_MS,
    replay_lookback_ms: int = DEFAULT_REPLAY_LOOKBACK_MS,
) -> list[ClipSpec]:
    """Extract all RealTime clips plus paired Replay clips for one match.

    Deterministic: events are already sorted by (half, timestamp), ids are
    sequence numbers in that order, and the output is the RealTime clips
    followed by the replay clips in (half, start) order.
    """
    realtime: list[ClipSpec] = []
    for event in annotations.events:
        clip = match_event_to_realtime(annotations, event, window_ms, max_clip_ms)
        if clip is not None:
            realtime.append(clip)
    for i, clip in enumerate(realtime):
        clip.clip_id = f"{i:06d}"
    replays = pair_replays(annotations, realtime, replay_lookback_ms, max_clip_ms)
    return realtime + replays


# ---------------------------------------------------------------------------
# sidecar metadata


def clip_to_record(clip: ClipSpec) -> dict:
    return {
        "clip_id": clip.clip_id,
        "match_id": clip.match.render(),
        "half": clip.half,
        "span": {"start_ms": clip.span.start_ms, "end_ms": clip.span.end_ms},
        "label": clip.anchor_event.label,
        "team": clip.anchor_event.team.value,
        "anchor_ms": clip.anchor_event.timestamp_ms,
        "kind": clip.kind.value,
        "paired_with": clip.paired_with,
        "truncated": clip.truncated,
    }


def clip_from_record(rec: dict, match: MatchId) -> ClipSpec:
    span = TimeSpan(rec["span"]["start_ms"], rec["span"]["end_ms"])
    anchor = EventLabel(
        match=match,
        half=rec["half"],
        timestamp_ms=rec["anchor_ms"],
        label=rec["label"],
        team=Team(rec.get("team", "None")),
    )
    return ClipSpec(
        clip_id=rec["clip_id"],
        match=match,
        half=rec["half"],
        span=span,
        anchor_event=anchor,
        kind=CameraKind(rec["kind"]),
        paired_with=rec.get("paired_with"),
        truncated=bool(rec.get("truncated", False)),
    )

