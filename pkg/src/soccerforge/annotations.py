"""Canonical on-disk schemas for match annotations and their loaders.

One directory per match holds five line-delimited/JSON files:

    events.jsonl    one event label per line
    camera.jsonl    one camera segment per line
    captions.jsonl  one timestamped caption per line
    asr.jsonl       one speech-transcript segment per line
    jerseys.json    home/away jersey colors
    roster.json     optional player/team surface names

All timestamps are integer milliseconds on a per-half clock. Spans are
half-open [start_ms, end_ms). Loading validates every record, sorts
events, and normalizes camera segments (adjacent same-kind segments with
a zero gap are merged). A loaded MatchAnnotations is immutable; loading
is side-effect free, so matches can be loaded in parallel.

The label set is configurable; SOCCERNET_LABELS carries the default
17-class vocabulary. Parsing is a case-sensitive exact match.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .errors import SoccerForgeError

SOCCERNET_LABELS: tuple[str, ...] = (
    "Ball out of play",
    "Clearance",
    "Corner",
    "Direct free-kick",
    "Foul",
    "Goal",
    "Indirect free-kick",
    "Kick-off",
    "Offside",
    "Penalty",
    "Red card",
    "Shots off target",
    "Shots on target",
    "Substitution",
    "Throw-in",
    "Yellow card",
    "Yellow->red card",
)

EVENTS_FILE = "events.jsonl"
CAMERA_FILE = "camera.jsonl"
CAPTIONS_FILE = "captions.jsonl"
ASR_FILE = "asr.jsonl"
JERSEYS_FILE = "jerseys.json"
ROSTER_FILE = "roster.json"

REQUIRED_FILES = (EVENTS_FILE, CAMERA_FILE, CAPTIONS_FILE, ASR_FILE, JERSEYS_FILE)


class AnnotationError(SoccerForgeError):
    """Base for annotation-store failures."""


class MissingFile(AnnotationError):
    def __init__(self, path: Path):
        self.path = Path(path)
        super().__init__(f"missing annotation file: {self.path}")


class SchemaViolation(AnnotationError):
    """First offending record in a file, with enough context to fix it."""

    def __init__(self, path: Path | str, line: int, reason: str):
        self.path = str(path)
        self.line = line
        self.reason = reason
        super().__init__(f"{self.path}:{line}: {reason}")


class OverlapConflict(AnnotationError):
    def __init__(self, first: "CameraSegment", second: "CameraSegment"):
        self.first = first
        self.second = second
        super().__init__(
            f"overlapping {first.kind.value} segments in half {first.half}: "
            f"{first.span} and {second.span}"
        )


class Team(Enum):
    HOME = "Home"
    AWAY = "Away"
    NONE = "None"


class CameraKind(Enum):
    REAL_TIME = "RealTime"
    REPLAY = "Replay"


@dataclass(frozen=True, order=True)
class MatchId:
    """Identifies one match; the rendered form is used in file names."""

    league: str
    season: str
    fixture: str

    def __post_init__(self):
        if not (self.league and self.season and self.fixture):
            raise ValueError("MatchId components must be non-empty")

    def render(self) -> str:
        return f"{self.league}__{self.season}__{self.fixture}"


@dataclass(frozen=True, order=True)
class TimeSpan:
    """Half-open interval [start_ms, end_ms) on a per-half clock."""

    start_ms: int
    end_ms: int

    def __post_init__(self):
        if self.start_ms < 0 or self.end_ms <= self.start_ms:
            raise ValueError(f"invalid span [{self.start_ms}, {self.end_ms})")

    @property
    def duration_ms(self) -> int:
        return self.end_ms - self.start_ms

    def contains(self, t_ms: int) -> bool:
        return self.start_ms <= t_ms < self.end_ms

    def intersects(self, other: "TimeSpan") -> bool:
        return self.start_ms < other.end_ms and other.start_ms < self.end_ms

    def __str__(self) -> str:
        return f"[{self.start_ms}, {self.end_ms})"


@dataclass(frozen=True)
class EventLabel:
    match: MatchId
    half: int
    timestamp_ms: int
    label: str
    team: Team = Team.NONE

    def sort_key(self):
        return (self.half, self.timestamp_ms, self.label, self.team.value)


@dataclass(frozen=True)
class CameraSegment:
    match: MatchId
    half: int
    span: TimeSpan
    kind: CameraKind
    camera_label: str = ""

    def key(self) -> str:
        """Stable identifier used for role tags keyed by segment."""
        return f"{self.half}:{self.kind.value}:{self.span.start_ms}-{self.span.end_ms}"


@dataclass(frozen=True)
class Caption:
    match: MatchId
    half: int
    timestamp_ms: int
    text: str
    anonymized: bool = False


@dataclass(frozen=True)
class AsrSegment:
    match: MatchId
    half: int
    span: TimeSpan
    text: str  # may be empty (silence window)


@dataclass(frozen=True)
class JerseyColors:
    match: MatchId
    home_color: str
    away_color: str

    def for_team(self, team: Team) -> str | None:
        if team is Team.HOME:
            return self.home_color
        if team is Team.AWAY:
            return self.away_color
        return None


@dataclass(frozen=True)
class RosterEntry:
    surface_name: str
    side: Team
    kind: str = "player"  # "player" or "team"


@dataclass(frozen=True)
class Roster:
    match: MatchId
    entries: tuple[RosterEntry, ...]


@dataclass(frozen=True)
class MatchAnnotations:
    """All per-match source annotations under one roof."""

    match_id: MatchId
    events: tuple[EventLabel, ...]
    camera: tuple[CameraSegment, ...]
    captions: tuple[Caption, ...]
    asr: tuple[AsrSegment, ...]
    jerseys: JerseyColors
    roster: Roster | None = None

    def camera_in_half(self, half: int) -> tuple[CameraSegment, ...]:
        return tuple(c for c in self.camera if c.half == half)


@dataclass(frozen=True)
class Issue:
    """One machine-readable validation finding."""

    code: str
    severity: str  # "error" or "warning"
    location: str
    detail: str = ""


# ---------------------------------------------------------------------------
# record <-> dataclass conversion


def _match_to_record(m: MatchId) -> dict:
    return {"league": m.league, "season": m.season, "fixture": m.fixture}


def _match_from_record(rec) -> MatchId:
    if not isinstance(rec, dict):
        raise ValueError("match must be an object with league/season/fixture")
    return MatchId(str(rec["league"]), str(rec["season"]), str(rec["fixture"]))


def _span_to_record(s: TimeSpan) -> dict:
    return {"start_ms": s.start_ms, "end_ms": s.end_ms}


def _span_from_record(rec) -> TimeSpan:
    if not isinstance(rec, dict):
        raise ValueError("span must be an object with start_ms/end_ms")
    return TimeSpan(_int_field(rec, "start_ms"), _int_field(rec, "end_ms"))


def _int_field(rec: dict, name: str) -> int:
    value = rec[name]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    return value


def event_to_record(e: EventLabel) -> dict:
    return {
        "match": _match_to_record(e.match),
        "half": e.half,
        "timestamp_ms": e.timestamp_ms,
        "label": e.label,
        "team": e.team.value,
    }


def event_from_record(rec: dict, label_set: Sequence[str]) -> EventLabel:
    half = _int_field(rec, "half")
    if half not in (1, 2):
        raise ValueError(f"half must be 1 or 2, got {half}")
    t = _int_field(rec, "timestamp_ms")
    if t < 0:
        raise ValueError(f"timestamp_ms must be >= 0, got {t}")
    label = rec["label"]
    if label not in label_set:
        raise ValueError(f"unknown label {label!r}")
    return EventLabel(
        match=_match_from_record(rec["match"]),
        half=half,
        timestamp_ms=t,
        label=label,
        team=Team(rec.get("team", "None")),
    )


def camera_to_record(c: CameraSegment) -> dict:
    return {
        "match": _match_to_record(c.match),
        "half": c.half,
        "span": _span_to_record(c.span),
        "kind": c.kind.value,
        "camera_label": c.camera_label,
    }


def camera_from_record(rec: dict) -> CameraSegment:
    half = _int_field(rec, "half")
    if half not in (1, 2):
        raise ValueError(f"half must be 1 or 2, got {half}")
    return CameraSegment(
        match=_match_from_record(rec["match"]),
        half=half,
        span=_span_from_record(rec["span"]),
        kind=CameraKind(rec["kind"]),
        camera_label=str(rec.get("camera_label", "")),
    )


def caption_to_record(c: Caption) -> dict:
    return {
        "match": _match_to_record(c.match),
        "half": c.half,
        "timestamp_ms": c.timestamp_ms,
        "text": c.text,
        "anonymized": c.anonymized,
    }


def caption_from_record(rec: dict) -> Caption:
    half = _int_field(rec, "half")
    if half not in (1, 2):
        raise ValueError(f"half must be 1 or 2, got {half}")
    t = _int_field(rec, "timestamp_ms")
    if t < 0:
        raise ValueError(f"timestamp_ms must be >= 0, got {t}")
    text = rec["text"]
    if not isinstance(text, str) or not text:
        raise ValueError("caption text must be a non-empty string")
    return Caption(
        match=_match_from_record(rec["match"]),
        half=half,
        timestamp_ms=t,
        text=text,
        anonymized=bool(rec.get("anonymized", False)),
    )


def asr_to_record(a: AsrSegment) -> dict:
    return {
        "match": _match_to_record(a.match),
        "half": a.half,
        "span": _span_to_record(a.span),
        "text": a.text,
    }


def asr_from_record(rec: dict) -> AsrSegment:
    half = _int_field(rec, "half")
    if half not in (1, 2):
        raise ValueError(f"half must be 1 or 2, got {half}")
    text = rec["text"]
    if not isinstance(text, str):
        raise ValueError("asr text must be a string (may be empty)")
    return AsrSegment(
        match=_match_from_record(rec["match"]),
        half=half,
        span=_span_from_record(rec["span"]),
        text=text,
    )


def jerseys_to_record(j: JerseyColors) -> dict:
    return {
        "match": _match_to_record(j.match),
        "home_color": j.home_color,
        "away_color": j.away_color,
    }


def jerseys_from_record(rec: dict) -> JerseyColors:
    home = rec["home_color"]
    away = rec["away_color"]
    if not (isinstance(home, str) and home and isinstance(away, str) and away):
        raise ValueError("home_color and away_color must be non-empty strings")
    return JerseyColors(_match_from_record(rec["match"]), home, away)


def roster_to_record(r: Roster) -> dict:
    return {
        "match": _match_to_record(r.match),
        "entries": [
            {"surface_name": e.surface_name, "side": e.side.value, "kind": e.kind}
            for e in r.entries
        ],
    }


def roster_from_record(rec: dict) -> Roster:
    entries = []
    seen = set()
    for i, e in enumerate(rec["entries"]):
        name = e["surface_name"]
        if not isinstance(name, str) or not name:
            raise ValueError(f"entries[{i}].surface_name must be a non-empty string")
        folded = name.casefold()
        if folded in seen:
            raise ValueError(f"duplicate roster surface name {name!r}")
        seen.add(folded)
        kind = e.get("kind", "player")
        if kind not in ("player", "team"):
            raise ValueError(f"entries[{i}].kind must be 'player' or 'team'")
        entries.append(RosterEntry(name, Team(e["side"]), kind))
    return Roster(_match_from_record(rec["match"]), tuple(entries))


# ---------------------------------------------------------------------------
# loading


def _read_jsonl(path: Path, parse, label_set=None) -> list:
    if not path.exists():
        raise MissingFile(path)
    out = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaViolation(path, line_no, f"invalid JSON: {exc}") from exc
            try:
                if label_set is not None:
                    out.append(parse(rec, label_set))
                else:
                    out.append(parse(rec))
            except (KeyError, ValueError, TypeError) as exc:
                reason = exc.args[0] if exc.args else str(exc)
                if isinstance(exc, KeyError):
                    reason = f"missing field {reason!r}"
                raise SchemaViolation(path, line_no, str(reason)) from exc
    return out


def _read_json(path: Path, parse, required: bool = True):
    if not path.exists():
        if required:
            raise MissingFile(path)
        return None
    with path.open(encoding="utf-8") as fh:
        try:
            rec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaViolation(path, 1, f"invalid JSON: {exc}") from exc
    try:
        return parse(rec)
    except (KeyError, ValueError, TypeError) as exc:
        reason = exc.args[0] if exc.args else str(exc)
        if isinstance(exc, KeyError):
            reason = f"missing field {reason!r}"
        raise SchemaViolation(path, 1, str(reason)) from exc


def normalize_camera(segments: Iterable[CameraSegment]) -> tuple[CameraSegment, ...]:
    """Sort segments and merge same-half/same-kind neighbors with a zero gap.

    Raises OverlapConflict if two segments of the same half and kind overlap.
    """
    ordered = sorted(segments, key=lambda c: (c.half, c.span.start_ms, c.span.end_ms))
    merged: list[CameraSegment] = []
    last_by_kind: dict[tuple[int, CameraKind], int] = {}
    for seg in ordered:
        key = (seg.half, seg.kind)
        if key in last_by_kind:
            prev_idx = last_by_kind[key]
            prev = merged[prev_idx]
            if seg.span.start_ms < prev.span.end_ms:
                raise OverlapConflict(prev, seg)
            if seg.span.start_ms == prev.span.end_ms:
                merged[prev_idx] = replace(
                    prev, span=TimeSpan(prev.span.start_ms, seg.span.end_ms)
                )
                continue
        merged.append(seg)
        last_by_kind[key] = len(merged) - 1
    merged.sort(key=lambda c: (c.half, c.span.start_ms, c.span.end_ms))
    return tuple(merged)


def load_match(
    dir_path: Path | str, label_set: Sequence[str] = SOCCERNET_LABELS
) -> MatchAnnotations:
    """Load and validate one match directory into a MatchAnnotations.

    Events come back sorted by (half, timestamp); camera segments are
    normalized. Raises MissingFile, SchemaViolation or OverlapConflict.
    """
    d = Path(dir_path)
    events = _read_jsonl(d / EVENTS_FILE, event_from_record, label_set)
    camera = _read_jsonl(d / CAMERA_FILE, camera_from_record)
    captions = _read_jsonl(d / CAPTIONS_FILE, caption_from_record)
    asr = _read_jsonl(d / ASR_FILE, asr_from_record)
    jerseys = _read_json(d / JERSEYS_FILE, jerseys_from_record)
    roster = _read_json(d / ROSTER_FILE, roster_from_record, required=False)

    match_id = jerseys.match
    for name, records in (
        (EVENTS_FILE, events),
        (CAMERA_FILE, camera),
        (CAPTIONS_FILE, captions),
        (ASR_FILE, asr),
    ):
        for i, rec in enumerate(records):
            if rec.match != match_id:
                raise SchemaViolation(
                    d / name, i + 1, f"match id {rec.match} does not match {match_id}"
                )
    if roster is not None and roster.match != match_id:
        raise SchemaViolation(d / ROSTER_FILE, 1, "roster match id mismatch")

    return MatchAnnotations(
        match_id=match_id,
        events=tuple(sorted(events, key=EventLabel.sort_key)),
        camera=normalize_camera(camera),
        captions=tuple(
            sorted(captions, key=lambda c: (c.half, c.timestamp_ms, c.text))
        ),
        asr=tuple(sorted(asr, key=lambda a: (a.half, a.span.start_ms, a.span.end_ms))),
        jerseys=jerseys,
        roster=roster,
    )


def save_match(annotations: MatchAnnotations, dir_path: Path | str) -> None:
    """Write the canonical file set; save(load(x)) is byte-identical."""
    d = Path(dir_path)
    d.mkdir(parents=True, exist_ok=True)

    def dump_lines(path: Path, records: list[dict]) -> None:
        with path.open("w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(rec, ensure_ascii=False))
                fh.write("\n")

    events = sorted(annotations.events, key=EventLabel.sort_key)
    camera = sorted(
        annotations.camera, key=lambda c: (c.half, c.span.start_ms, c.span.end_ms)
    )
    captions = sorted(
        annotations.captions, key=lambda c: (c.half, c.timestamp_ms, c.text)
    )
    asr = sorted(
        annotations.asr, key=lambda a: (a.half, a.span.start_ms, a.span.end_ms)
    )
    dump_lines(d / EVENTS_FILE, [event_to_record(e) for e in events])
    dump_lines(d / CAMERA_FILE, [camera_to_record(c) for c in camera])
    dump_lines(d / CAPTIONS_FILE, [caption_to_record(c) for c in captions])
    dump_lines(d / ASR_FILE, [asr_to_record(a) for a in asr])
    (d / JERSEYS_FILE).write_text(
        json.dumps(jerseys_to_record(annotations.jerseys), ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    if annotations.roster is not None:
        (d / ROSTER_FILE).write_text(
            json.dumps(roster_to_record(annotations.roster), ensure_ascii=False) + "\n",
            encoding="utf-8",
        )


def validate(
    annotations: MatchAnnotations, label_set: Sequence[str] = SOCCERNET_LABELS
) -> list[Issue]:
    """Check every invariant; an empty list means the annotations are clean.

    Issues are data, not failures: callers decide whether to proceed.
    """
    issues: list[Issue] = []

    def err(code: str, location: str, detail: str = ""):
        issues.append(Issue(code, "error", location, detail))

    for i, e in enumerate(annotations.events):
        loc = f"events[{i}]"
        if e.timestamp_ms < 0:
            err("NegativeTimestamp", loc, f"timestamp_ms={e.timestamp_ms}")
        if e.half not in (1, 2):
            err("BadHalf", loc, f"half={e.half}")
        if e.label not in label_set:
            err("UnknownLabel", loc, e.label)
        if e.match != annotations.match_id:
            err("MatchIdMismatch", loc)
    for i in range(1, len(annotations.events)):
        if annotations.events[i].sort_key() < annotations.events[i - 1].sort_key():
            err("EventsUnsorted", f"events[{i}]")
            break

    by_kind: dict[tuple[int, CameraKind], list[CameraSegment]] = {}
    for i, c in enumerate(annotations.camera):
        loc = f"camera[{i}]"
        if c.half not in (1, 2):
            err("BadHalf", loc, f"half={c.half}")
        if c.match != annotations.match_id:
            err("MatchIdMismatch", loc)
        by_kind.setdefault((c.half, c.kind), []).append(c)
    for (half, kind), segs in by_kind.items():
        segs = sorted(segs, key=lambda c: c.span.start_ms)
        for a, b in zip(segs, segs[1:]):
            if b.span.start_ms < a.span.end_ms:
                err(
                    "CameraOverlap",
                    f"camera(half={half},kind={kind.value})",
                    f"{a.span} overlaps {b.span}",
                )

    for i, c in enumerate(annotations.captions):
        loc = f"captions[{i}]"
        if not c.text:
            err("EmptyCaption", loc)
        if c.timestamp_ms < 0:
            err("NegativeTimestamp", loc, f"timestamp_ms={c.timestamp_ms}")
        if c.half not in (1, 2):
            err("BadHalf", loc, f"half={c.half}")
        if c.match != annotations.match_id:
            err("MatchIdMismatch", loc)

    for i, a in enumerate(annotations.asr):
        loc = f"asr[{i}]"
        if a.half not in (1, 2):
            err("BadHalf", loc, f"half={a.half}")
        if a.match != annotations.match_id:
            err("MatchIdMismatch", loc)

    if not annotations.jerseys.home_color or not annotations.jerseys.away_color:
        err("EmptyJerseyColor", "jerseys")
    if annotations.jerseys.match != annotations.match_id:
        err("MatchIdMismatch", "jerseys")

    if annotations.roster is not None:
        seen: set[str] = set()
        for i, entry in enumerate(annotations.roster.entries):
            folded = entry.surface_name.casefold()
            if folded in seen:
                err("DuplicateRosterName", f"roster.entries[{i}]", entry.surface_name)
            seen.add(folded)

    return issues
