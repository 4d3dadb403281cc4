"""QA record parsing and per-clip dataset assembly.

A single-event clip yields one long description plus one overview QA; a
paired-event clip yields one long description plus three detail QAs.
Model replies are expected as a dict with keys {Q, A} or
{Q1, A1, Q2, A2, Q3, A3}; a reply that fails to parse is retried once
with a corrective instruction and then quarantined with its raw text
preserved for audit.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

from .errors import SoccerForgeError
from .fusion import FusedClip
from .jsonish import ExtractionError, parse_object
from .llm import LlmConfig, request_completion
from .pairing import EventPair
from .prompts import (
    Message,
    PromptMessages,
    Role,
    build_detail_qa_prompt,
    build_long_description_prompt,
    build_overview_qa_prompt,
    describe_events,
)

logger = logging.getLogger(__name__)


class QaParseError(SoccerForgeError):
    raw = ""  # offending reply, kept for audit by the subclasses


class UnparseableResponse(QaParseError):
    """Nothing dict-shaped in the reply; raw text kept for audit."""

    def __init__(self, raw: str, reason: str = ""):
        self.raw = raw
        super().__init__(reason or "no parseable QA object in response")


class WrongShape(QaParseError):
    """The reply parsed but its key set or values are wrong."""

    def __init__(self, raw: str, reason: str):
        self.raw = raw
        super().__init__(reason)


class ResponseShape(Enum):
    ONE = 1
    THREE = 3


class QaKind(Enum):
    LONG_DESCRIPTION = "LongDescription"
    OVERVIEW_QA = "OverviewQA"
    DETAIL_QA = "DetailQA"


@dataclass(frozen=True)
class QARecord:
    clip_id: str
    kind: QaKind
    question: str
    answer: str
    index: int = 0  # 1..3 for DetailQA, 0 otherwise


@dataclass(frozen=True)
class QuarantineRecord:
    clip_id: str
    stage: str  # which prompt failed: long_description / overview_qa / detail_qa
    raw: str
    reason: str


_SHAPE_KEYS = {
    ResponseShape.ONE: ("Q", "A"),
    ResponseShape.THREE: ("Q1", "A1", "Q2", "A2", "Q3", "A3"),
}


def parse_qa_response(raw: str, expected: ResponseShape) -> list[tuple[str, str]]:
    """Parse a model reply into ordered (question, answer) pairs.

    Raises UnparseableResponse when no object can be extracted, WrongShape
    when the keys or values do not match the expected shape.
    """
    try:
        obj = parse_object(raw)
    except ExtractionError as exc:
        raise UnparseableResponse(raw, str(exc)) from exc

    wanted = _SHAPE_KEYS[expected]
    missing = [k for k in wanted if k not in obj]
    extra = [k for k in obj if k not in wanted]
    if missing or extra:
        raise WrongShape(
            raw, f"bad key set: missing {missing or 'none'}, extra {extra or 'none'}"
        )
    for key in wanted:
        value = obj[key]
        if not isinstance(value, str) or not value.strip():
            raise WrongShape(raw, f"value for {key!r} must be a non-empty string")
    if expected is ResponseShape.ONE:
        return [(obj["Q"], obj["A"])]
    return [(obj[f"Q{i}"], obj[f"A{i}"]) for i in (1, 2, 3)]


CORRECTIVE_INSTRUCTION = (
    "Your previous reply could not be parsed. Respond again with ONLY the "
    "requested dictionary, no extra text."
)


def _with_correction(prompt: PromptMessages, bad_reply: str) -> PromptMessages:
    note = f"{CORRECTIVE_INSTRUCTION} Previous reply: {bad_reply[:500]}"
    return PromptMessages(prompt.messages + (Message(Role.USER, note),))


RequestFn = Callable[[PromptMessages, LlmConfig], str]


def _ask(
    prompt: PromptMessages,
    shape: ResponseShape,
    cfg: LlmConfig,
    request_fn: RequestFn,
) -> list[tuple[str, str]]:
    raw = request_fn(prompt, cfg)
    try:
        return parse_qa_response(raw, shape)
    except QaParseError:
        retry_raw = request_fn(_with_correction(prompt, raw), cfg)
        return parse_qa_response(retry_raw, shape)


def event_info_for(fused: FusedClip) -> str:
    """The <event_info> slot for detail-QA prompts on paired-event clips."""
    clip = fused.clip
    if not isinstance(clip, EventPair):
        return ""
    return f"The clip contains a {describe_events(fused)}."


def generate_for_clip(
    fused: FusedClip,
    cfg: LlmConfig,
    request_fn: RequestFn = request_completion,
) -> tuple[list[QARecord], list[QuarantineRecord]]:
    """Generate the full record group for one fused clip.

    All-or-nothing: if any prompt for the clip fails after the corrective
    retry, the clip is quarantined and no partial group is emitted.
    """
    clip_id = fused.clip_id
    try:
        ld_q, ld_a = _ask(
            build_long_description_prompt(fused), ResponseShape.ONE, cfg, request_fn
        )[0]
    except QaParseError as exc:
        return [], [QuarantineRecord(clip_id, "long_description", exc.raw, str(exc))]

    records = [QARecord(clip_id, QaKind.LONG_DESCRIPTION, ld_q, ld_a)]
    if fused.is_pair:
        try:
            triples = _ask(
                build_detail_qa_prompt(ld_a, event_info_for(fused)),
                ResponseShape.THREE,
                cfg,
                request_fn,
            )
        except QaParseError as exc:
            return [], [QuarantineRecord(clip_id, "detail_qa", exc.raw, str(exc))]
        for i, (q, a) in enumerate(triples, start=1):
            records.append(QARecord(clip_id, QaKind.DETAIL_QA, q, a, index=i))
    else:
        try:
            ov_q, ov_a = _ask(
                build_overview_qa_prompt(ld_a), ResponseShape.ONE, cfg, request_fn
            )[0]
        except QaParseError as exc:
            return [], [QuarantineRecord(clip_id, "overview_qa", exc.raw, str(exc))]
        records.append(QARecord(clip_id, QaKind.OVERVIEW_QA, ov_q, ov_a))
    return records, []


def assemble_dataset(
    fused_clips: Sequence[FusedClip],
    cfg: LlmConfig,
    request_fn: RequestFn = request_completion,
) -> tuple[list[QARecord], list[QuarantineRecord]]:
    """Generate records for every fused clip, deterministically ordered.

    Clips run concurrently (the client's in-flight cap still applies) but
    results are emitted in input order regardless of completion order.
    """
    workers = max(1, min(cfg.max_inflight, len(fused_clips) or 1))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(
            pool.map(lambda f: generate_for_clip(f, cfg, request_fn), fused_clips)
        )
    records: list[QARecord] = []
    quarantined: list[QuarantineRecord] = []
    for recs, quar in results:
        records.extend(recs)
        quarantined.extend(quar)
    if quarantined:
        logger.warning("%d clip(s) quarantined during QA generation", len(quarantined))
    return records, quarantined


# ---------------------------------------------------------------------------
# dataset serialization


def qa_to_record(rec: QARecord, media_path: str) -> dict:
    return {
        "clip_id": rec.clip_id,
        "media": media_path,
        "kind": rec.kind.value,
        "question": rec.question,
        "answer": rec.answer,
        "index": rec.index,
    }

