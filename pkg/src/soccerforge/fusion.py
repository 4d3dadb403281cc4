"""Caption alignment, name anonymization, and commentary filtering.

Captions attach to a clip when their timestamp falls in the window that
opens 3 s after an anchor event and closes 10 s after it (closed at both
ends, the lag people need to react to a play). Caption text is
anonymized by replacing roster surface names with jersey-color phrases;
commentary keeps its original identifiers but drops anything overlapping
Replay footage, immediate word repeats, and filler tokens. Clips with no
aligned caption are dropped from the QA track (they stay available for
classification).
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .annotations import (
    AsrSegment,
    CameraKind,
    CameraSegment,
    Caption,
    EventLabel,
    JerseyColors,
    MatchAnnotations,
    Roster,
    TimeSpan,
)
from .pairing import EventPair
from .segmenter import ClipSpec

logger = logging.getLogger(__name__)

DEFAULT_CAPTION_LEAD_MS = 3_000
DEFAULT_CAPTION_TAIL_MS = 10_000
DEFAULT_FILLER_TOKENS = ("uh", "um", "erm")


@dataclass
class FusedClip:
    """A clip joined with anonymized captions and filtered commentary."""

    clip: ClipSpec | EventPair
    captions: list[str]
    commentary: str
    jerseys: JerseyColors

    @property
    def clip_id(self) -> str:
        return (
            self.clip.pair_id if isinstance(self.clip, EventPair) else self.clip.clip_id
        )

    @property
    def is_pair(self) -> bool:
        return isinstance(self.clip, EventPair)


def caption_window(
    event: EventLabel,
    lead_ms: int = DEFAULT_CAPTION_LEAD_MS,
    tail_ms: int = DEFAULT_CAPTION_TAIL_MS,
) -> TimeSpan:
    """Alignment window for one event; membership is closed at both ends."""
    t = event.timestamp_ms
    return TimeSpan(t + lead_ms, t + tail_ms)


def caption_in_window(caption: Caption, window: TimeSpan) -> bool:
    """Closed-closed membership: both window endpoints attach."""
    return window.start_ms <= caption.timestamp_ms <= window.end_ms


def anonymize(text: str, roster: Roster | None, jerseys: JerseyColors) -> str:
    """Replace roster surface names with jersey-color phrases.

    Team names become "<color>-jerseyed team", player names
    "<color>-jerseyed team player". Matching is case-insensitive on word
    boundaries, longest surface form first, in one pass (which makes the
    transform idempotent). Without a roster the text passes through.
    """
    if roster is None or not roster.entries or not text:
        if roster is None:
            logger.warning("anonymize called without a roster; text left unchanged")
        return text

    phrases: dict[str, str] = {}
    for entry in roster.entries:
        color = jerseys.for_team(entry.side)
        if color is None:
            continue
        phrase = f"{color}-jerseyed team"
        if entry.kind == "player":
            phrase += " player"
        phrases[entry.surface_name.casefold()] = phrase
    if not phrases:
        return text

    names = sorted(phrases, key=len, reverse=True)
    pattern = re.compile(
        r"(?<!\w)(" + "|".join(re.escape(n) for n in names) + r")(?!\w)",
        re.IGNORECASE,
    )
    return pattern.sub(lambda m: phrases[m.group(0).casefold()], text)


def filter_asr(
    asr: Sequence[AsrSegment],
    camera: Sequence[CameraSegment],
    clip_span: TimeSpan,
    half: int | None = None,
    fillers: Sequence[str] = DEFAULT_FILLER_TOKENS,
) -> str:
    """Commentary for a clip span, with replay talk and noise removed.

    Keeps ASR segments that intersect the clip span and intersect no
    Replay camera segment, concatenates them in time order, strips filler
    tokens, then collapses immediately repeated tokens (case-folded).
    """
    replay_spans = [
        c.span
        for c in camera
        if c.kind is CameraKind.REPLAY and (half is None or c.half == half)
    ]
    kept = [
        seg
        for seg in sorted(asr, key=lambda a: (a.span.start_ms, a.span.end_ms))
        if (half is None or seg.half == half)
        and seg.span.intersects(clip_span)
        and not any(seg.span.intersects(r) for r in replay_spans)
    ]
    filler_set = {f.casefold() for f in fillers}
    tokens: list[str] = []
    for seg in kept:
        for token in seg.text.split():
            if token.casefold() in filler_set:
                continue
            if tokens and tokens[-1].casefold() == token.casefold():
                continue
            tokens.append(token)
    return " ".join(tokens)


def anchor_events(clip: ClipSpec | EventPair) -> list[EventLabel]:
    if isinstance(clip, EventPair):
        return [clip.first, clip.second]
    return [clip.anchor_event]


def fuse(
    clip: ClipSpec | EventPair,
    annotations: MatchAnnotations,
    caption_lead_ms: int = DEFAULT_CAPTION_LEAD_MS,
    caption_tail_ms: int = DEFAULT_CAPTION_TAIL_MS,
    fillers: Sequence[str] = DEFAULT_FILLER_TOKENS,
) -> FusedClip | None:
    """Join one clip with its captions and commentary, or None.

    Returns None when no caption aligns with any anchor event; for
    paired-event clips the windows of both events are unioned.
    """
    anchors = anchor_events(clip)
    half = anchors[0].half
    windows = [caption_window(e, caption_lead_ms, caption_tail_ms) for e in anchors]
    hits = [
        c
        for c in annotations.captions
        if c.half == half and any(caption_in_window(c, w) for w in windows)
    ]
    if not hits:
        return None
    captions = [
        anonymize(c.text, annotations.roster, annotations.jerseys)
        for c in sorted(hits, key=lambda c: (c.timestamp_ms, c.text))
    ]
    commentary = filter_asr(
        annotations.asr, annotations.camera, clip.span, half=half, fillers=fillers
    )
    return FusedClip(
        clip=clip,
        captions=captions,
        commentary=commentary,
        jerseys=annotations.jerseys,
    )


def fuse_all(
    clips: Iterable[ClipSpec],
    pairs: Iterable[EventPair],
    annotations: MatchAnnotations,
    **kwargs,
) -> list[FusedClip]:
    """Fuse a match's clips and pairs; drop those without captions.

    Replay clips are skipped: they would carry the same captions as their
    RealTime partner and no commentary (their footage is all replay), so
    fusing them only duplicates QA material.
    """
    fused = []
    for clip in clips:
        if clip.kind is CameraKind.REPLAY:
            continue
        result = fuse(clip, annotations, **kwargs)
        if result is not None:
            fused.append(result)
    for pair in pairs:
        result = fuse(pair, annotations, **kwargs)
        if result is not None:
            fused.append(result)
    return fused


# ---------------------------------------------------------------------------
# serialization (line-delimited, keyed by clip_id)


def fused_to_record(fused: FusedClip) -> dict:
    clip = fused.clip
    if isinstance(clip, EventPair):
        events = {
            "labels": [clip.first.label, clip.second.label],
            "teams": [clip.first.team.value, clip.second.team.value],
            "gap_ms": clip.gap_ms,
        }
    else:
        events = {
            "labels": [clip.anchor_event.label],
            "teams": [clip.anchor_event.team.value],
        }
    return {
        "clip_id": fused.clip_id,
        "is_pair": fused.is_pair,
        "span": {"start_ms": clip.span.start_ms, "end_ms": clip.span.end_ms},
        "events": events,
        "captions": list(fused.captions),
        "commentary": fused.commentary,
        "home_color": fused.jerseys.home_color,
        "away_color": fused.jerseys.away_color,
    }

