"""Synthetic match generator with a ground-truth book.

Every planted structure (covered single events, valid and decoy event
pairs, paired replays, replay duplicates, caption hits and near misses)
is recorded in a book of expected counts and spans computed by direct
placement arithmetic, so each pipeline stage can be checked exactly at
desk scale. Blocks are spaced far enough apart (beyond the pair gap
ceiling and the replay lookback) that structures never interact across
blocks; camera segments tile each 45-minute half with no same-kind
overlap. Generation is pure and deterministic per seed.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Sequence

from .annotations import (
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
from .errors import SoccerForgeError

EVENT_WINDOW_MS = 5_000
MAX_CLIP_MS = 10_000
PAIR_LEAD_MS = 2_000
PAIR_TAIL_MS = 3_000
CAPTION_LEAD_MS = 3_000
CAPTION_TAIL_MS = 10_000

BLOCK_SPACING_MS = 60_000  # beyond replay lookback: blocks cannot interact
BLOCK_ANCHOR_OFFSET_MS = 6_000

PAIR_GAPS_MS = (1_000, 7_000, 3_500, 5_000)
DECOY_GAPS_MS = (900, 7_100)
REPLAY_LENGTHS_MS = (4_000, 7_000, 12_000)
CAPTION_HIT_OFFSETS_MS = (3_000, 6_500, 10_000)
CAPTION_MISS_OFFSETS_MS = (2_999, 10_001)

JERSEY_PALETTE = (
    ("red", "blue"),
    ("yellow", "green"),
    ("white", "black"),
    ("blue/red stripe", "turquoise/teal"),
    ("red/white stripe", "purple"),
)

SINGLE_LABELS = (
    "Goal",
    "Foul",
    "Corner",
    "Throw-in",
    "Shots on target",
    "Shots off target",
    "Ball out of play",
    "Clearance",
)
PAIR_LABELS = (
    ("Throw-in", "Shots off target"),
    ("Corner", "Goal"),
    ("Foul", "Yellow card"),
    ("Clearance", "Ball out of play"),
)


class InfeasibleParams(SoccerForgeError):
    """The requested block counts do not fit in the half length."""


@dataclass(frozen=True)
class SynthParams:
    half_length_ms: int = 2_700_000
    singles_per_half: int = 3
    blocked_singles_per_half: int = 1
    pairs_per_half: int = 2
    decoy_pairs_per_half: int = 1
    replays_per_half: int = 1
    replay_dups_per_half: int = 1
    caption_coverage: float = 0.7

    def blocks_per_half(self) -> int:
        return (
            self.singles_per_half
            + self.blocked_singles_per_half
            + self.pairs_per_half
            + self.decoy_pairs_per_half
            + self.replays_per_half
            + self.replay_dups_per_half
        )


@dataclass
class GroundTruthBook:
    """Expected pipeline outputs, derived from placement arithmetic."""

    planted_single_events: int = 0  # expected RealTime clips
    planted_valid_pairs: int = 0
    planted_replays: int = 0  # expected paired replay clips
    planted_caption_hits: int = 0  # fused singles + fused pairs
    expected_fused_singles: int = 0
    expected_fused_pairs: int = 0
    expected_single_spans: list[tuple[int, int, int]] = field(default_factory=list)
    expected_pair_spans: list[tuple[int, int, int]] = field(default_factory=list)
    expected_replay_spans: list[tuple[int, int, int]] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(self.__dict__, ensure_ascii=False, sort_keys=True)


@dataclass
class _Placement:
    """Working state for one half while blocks are laid down."""

    half: int
    events: list[EventLabel] = field(default_factory=list)
    replay_carves: list[TimeSpan] = field(default_factory=list)
    covered_events: list[EventLabel] = field(default_factory=list)
    valid_pairs: list[tuple[EventLabel, EventLabel]] = field(default_factory=list)
    replay_specs: list[TimeSpan] = field(default_factory=list)  # planted paired replays


def _pair_span(first_ms: int, second_ms: int) -> tuple[int, int]:
    """Expected two-event window per the lead/tail + symmetric-shave rule."""
    start = first_ms - PAIR_LEAD_MS
    end = second_ms + PAIR_TAIL_MS
    excess = (end - start) - MAX_CLIP_MS
    if excess > 0:
        shave_left = excess // 2
        start += shave_left
        end -= excess - shave_left
    return max(start, 0), end


def generate_match(
    seed: int, params: SynthParams = SynthParams()
) -> tuple[MatchAnnotations, GroundTruthBook]:
    """Build one synthetic match and the book of expected outputs."""
    needed = (
        params.blocks_per_half() * BLOCK_SPACING_MS + BLOCK_SPACING_MS
    )
    if needed > params.half_length_ms:
        raise InfeasibleParams(
            f"{params.blocks_per_half()} blocks at {BLOCK_SPACING_MS} ms spacing "
            f"do not fit a {params.half_length_ms} ms half"
        )

    rng = random.Random(seed)
    match = MatchId("synthleague", "2024", f"match-{seed:04d}")
    home_color, away_color = JERSEY_PALETTE[seed % len(JERSEY_PALETTE)]
    jerseys = JerseyColors(match, home_color, away_color)
    roster = Roster(
        match,
        (
            RosterEntry("Arlo Maddox", Team.HOME, "player"),
            RosterEntry("Ciro Vantale", Team.AWAY, "player"),
            RosterEntry("Northbridge", Team.HOME, "team"),
            RosterEntry("Южный Rovers", Team.AWAY, "team"),
        ),
    )

    book = GroundTruthBook()
    events: list[EventLabel] = []
    camera: list[CameraSegment] = []
    captions: list[Caption] = []
    asr: list[AsrSegment] = []
    label_cursor = seed  # staggers label choice across seeds
    pair_cursor = seed
    gap_cursor = 0  # pairs walk the gap cycle from the top: boundary gaps always planted
    decoy_cursor = 0
    teams = (Team.HOME, Team.AWAY, Team.NONE)

    for half in (1, 2):
        placement = _Placement(half=half)
        kinds = (
            ["single"] * params.singles_per_half
            + ["blocked_single"] * params.blocked_singles_per_half
            + ["pair"] * params.pairs_per_half
            + ["decoy_pair"] * params.decoy_pairs_per_half
            + ["replay"] * params.replays_per_half
            + ["replay_dup"] * params.replay_dups_per_half
        )
        rng.shuffle(kinds)
        for i, kind in enumerate(kinds):
            base = BLOCK_SPACING_MS * i + rng.randrange(0, 5_000)
            t = base + BLOCK_ANCHOR_OFFSET_MS
            team = teams[(label_cursor + i) % len(teams)]
            if kind == "single":
                label = SINGLE_LABELS[label_cursor % len(SINGLE_LABELS)]
                label_cursor += 1
                event = EventLabel(match, half, t, label, team)
                placement.events.append(event)
                placement.covered_events.append(event)
            elif kind == "blocked_single":
                label = SINGLE_LABELS[label_cursor % len(SINGLE_LABELS)]
                label_cursor += 1
                event = EventLabel(match, half, t, label, team)
                placement.events.append(event)
                placement.replay_carves.append(TimeSpan(t + 1_000, t + 4_000))
            elif kind in ("pair", "decoy_pair"):
                if kind == "pair":
                    gap = PAIR_GAPS_MS[gap_cursor % len(PAIR_GAPS_MS)]
                    gap_cursor += 1
                else:
                    gap = DECOY_GAPS_MS[decoy_cursor % len(DECOY_GAPS_MS)]
                    decoy_cursor += 1
                labels = PAIR_LABELS[pair_cursor % len(PAIR_LABELS)]
                pair_cursor += 1
                first = EventLabel(match, half, t, labels[0], team)
                second = EventLabel(match, half, t + gap, labels[1], team)
                placement.events.extend([first, second])
                placement.covered_events.extend([first, second])
                if kind == "pair":
                    placement.valid_pairs.append((first, second))
            elif kind == "replay":
                label = SINGLE_LABELS[label_cursor % len(SINGLE_LABELS)]
                length = REPLAY_LENGTHS_MS[label_cursor % len(REPLAY_LENGTHS_MS)]
                label_cursor += 1
                event = EventLabel(match, half, t, label, team)
                placement.events.append(event)
                placement.covered_events.append(event)
                carve = TimeSpan(t + 6_000, t + 6_000 + length)
                placement.replay_carves.append(carve)
                placement.replay_specs.append(carve)
            elif kind == "replay_dup":
                label = SINGLE_LABELS[label_cursor % len(SINGLE_LABELS)]
                label_cursor += 1
                gap = 1_000 + rng.randrange(0, 3_001)
                first = EventLabel(match, half, t, label, team)
                second = EventLabel(match, half, t + gap, label, team)
                placement.events.extend([first, second])
                placement.replay_carves.append(
                    TimeSpan(t + gap - 500, t + gap + 3_000)
                )

        # commentary: one talk segment per covered event, plus replay chatter
        # that the filter must drop
        for event in placement.covered_events:
            asr.append(
                AsrSegment(
                    match,
                    half,
                    TimeSpan(event.timestamp_ms - 2_000, event.timestamp_ms + 2_000),
                    f"what a a moment uh near the {event.label.lower()} um here",
                )
            )
        for carve in placement.replay_carves:
            asr.append(
                AsrSegment(
                    match,
                    half,
                    TimeSpan(carve.start_ms + 100, carve.end_ms - 100),
                    "seeing that again in the replay",
                )
            )

        # captions: hits inside the alignment window, near misses just outside
        caption_events = placement.covered_events + [
            e for e in placement.events if e not in placement.covered_events
        ]
        for j, event in enumerate(caption_events):
            roll = rng.random()
            if roll < params.caption_coverage:
                offset = CAPTION_HIT_OFFSETS_MS[j % len(CAPTION_HIT_OFFSETS_MS)]
            elif roll < min(params.caption_coverage + 0.2, 1.0):
                offset = CAPTION_MISS_OFFSETS_MS[j % len(CAPTION_MISS_OFFSETS_MS)]
            else:
                continue
            captions.append(
                Caption(
                    match,
                    half,
                    event.timestamp_ms + offset,
                    _caption_text(rng, event, jerseys),
                )
            )

        camera.extend(_tile_half(match, half, params.half_length_ms, placement))
        events.extend(placement.events)
        _update_book(book, placement, captions)

    annotations = MatchAnnotations(
        match_id=match,
        events=tuple(sorted(events, key=EventLabel.sort_key)),
        camera=tuple(camera),
        captions=tuple(sorted(captions, key=lambda c: (c.half, c.timestamp_ms, c.text))),
        asr=tuple(sorted(asr, key=lambda a: (a.half, a.span.start_ms))),
        jerseys=jerseys,
        roster=roster,
    )
    book.expected_single_spans.sort()
    book.expected_pair_spans.sort()
    book.expected_replay_spans.sort()
    return annotations, book


def _caption_text(rng: random.Random, event: EventLabel, jerseys: JerseyColors) -> str:
    color = jerseys.for_team(event.team) or jerseys.home_color
    variants = (
        f"Arlo Maddox wins the {event.label.lower()} for Northbridge!",
        f"{color}-jerseyed team with a {event.label.lower()} chance.",
        f"Ciro Vantale reacts as the {event.label.lower()} is given.",
    )
    return variants[rng.randrange(len(variants))]


def _tile_half(
    match: MatchId, half: int, half_length_ms: int, placement: _Placement
) -> list[CameraSegment]:
    """RealTime segments filling everything between the replay carves."""
    carves = sorted(placement.replay_carves, key=lambda s: s.start_ms)
    for a, b in zip(carves, carves[1:]):
        if b.start_ms < a.end_ms:
            raise InfeasibleParams("replay carves overlap; spacing too tight")
    segments: list[CameraSegment] = []
    cursor = 0
    for n, carve in enumerate(carves):
        if carve.start_ms > cursor:
            segments.append(
                CameraSegment(
                    match, half, TimeSpan(cursor, carve.start_ms), CameraKind.REAL_TIME
                )
            )
        segments.append(
            CameraSegment(match, half, carve, CameraKind.REPLAY, f"replay-{n}")
        )
        cursor = carve.end_ms
    if cursor < half_length_ms:
        segments.append(
            CameraSegment(
                match, half, TimeSpan(cursor, half_length_ms), CameraKind.REAL_TIME
            )
        )
    return segments


def _update_book(
    book: GroundTruthBook, placement: _Placement, captions: Sequence[Caption]
) -> None:
    half = placement.half

    def caption_hit(event: EventLabel) -> bool:
        lo = event.timestamp_ms + CAPTION_LEAD_MS
        hi = event.timestamp_ms + CAPTION_TAIL_MS
        return any(c.half == half and lo <= c.timestamp_ms <= hi for c in captions)

    book.planted_single_events += len(placement.covered_events)
    for event in placement.covered_events:
        t = event.timestamp_ms
        book.expected_single_spans.append((half, t - EVENT_WINDOW_MS, t + EVENT_WINDOW_MS))
        if caption_hit(event):
            book.expected_fused_singles += 1

    book.planted_valid_pairs += len(placement.valid_pairs)
    for first, second in placement.valid_pairs:
        start, end = _pair_span(first.timestamp_ms, second.timestamp_ms)
        book.expected_pair_spans.append((half, start, end))
        if caption_hit(first) or caption_hit(second):
            book.expected_fused_pairs += 1

    book.planted_replays += len(placement.replay_specs)
    for carve in placement.replay_specs:
        end = min(carve.end_ms, carve.start_ms + MAX_CLIP_MS)
        book.expected_replay_spans.append((half, carve.start_ms, end))

    book.planted_caption_hits = (
        book.expected_fused_singles + book.expected_fused_pairs
    )
