"""QA response parsing, fuzzed round-trips, and per-clip dataset assembly."""

from __future__ import annotations

import json
import random
import string

import pytest

from soccerforge.llm import LlmConfig
from soccerforge.mockllm import GARBAGE_FALLBACK, MockLlmServer
from soccerforge.qa import (
    QaKind,
    QaParseError,
    ResponseShape,
    UnparseableResponse,
    WrongShape,
    assemble_dataset,
    generate_for_clip,
    parse_qa_response,
)

from test_prompts import fused_goal_clip, fused_pair_clip


class TestParseQaResponse:
    def test_single_quoted_single_qa(self):
        pairs = parse_qa_response(
            "{'Q': 'What happened?', 'A': 'A goal.'}", ResponseShape.ONE
        )
        assert pairs == [("What happened?", "A goal.")]

    def test_fenced_strict_json_triple(self):
        record = {
            "Q1": "q one",
            "A1": "a one",
            "Q2": "q two",
            "A2": "a two",
            "Q3": "q three",
            "A3": "a three",
        }
        raw = f"```json\n{json.dumps(record)}\n```"
        pairs = parse_qa_response(raw, ResponseShape.THREE)
        assert pairs == [("q one", "a one"), ("q two", "a two"), ("q three", "a three")]

    def test_missing_a3_is_wrong_shape(self):
        record = {"Q1": "q", "A1": "a", "Q2": "q", "A2": "a", "Q3": "q"}
        with pytest.raises(WrongShape):
            parse_qa_response(json.dumps(record), ResponseShape.THREE)

    def test_extra_key_is_wrong_shape(self):
        with pytest.raises(WrongShape):
            parse_qa_response(
                "{'Q': 'q', 'A': 'a', 'note': 'extra'}", ResponseShape.ONE
            )

    def test_empty_value_is_wrong_shape(self):
        with pytest.raises(WrongShape):
            parse_qa_response("{'Q': 'q', 'A': '  '}", ResponseShape.ONE)

    def test_garbage_is_unparseable_with_raw_kept(self):
        with pytest.raises(UnparseableResponse) as exc_info:
            parse_qa_response(GARBAGE_FALLBACK, ResponseShape.ONE)
        assert exc_info.value.raw == GARBAGE_FALLBACK


def _random_text(rng: random.Random) -> str:
    alphabet = string.ascii_letters + " '\"\\{}:,éß-"
    text = "".join(rng.choice(alphabet) for _ in range(rng.randrange(1, 40)))
    return text.strip() or "x"


def _render(rng: random.Random, record: dict) -> str:
    style = rng.randrange(4)
    if style == 0:
        return json.dumps(record)
    if style == 1:
        return repr(record)
    if style == 2:
        return f"```json\n{json.dumps(record)}\n```"
    return f"Here's the dictionary:\n{repr(record)}\nHope that helps!"


class TestFuzzedRoundTrip:
    def test_ten_thousand_fuzzed_responses(self):
        rng = random.Random(1234)
        well_formed = 0
        for _ in range(10_000):
            if rng.random() < 0.8:
                if rng.random() < 0.5:
                    record = {"Q": _random_text(rng), "A": _random_text(rng)}
                    shape = ResponseShape.ONE
                else:
                    record = {}
                    for i in (1, 2, 3):
                        record[f"Q{i}"] = _random_text(rng)
                        record[f"A{i}"] = _random_text(rng)
                    shape = ResponseShape.THREE
                pairs = parse_qa_response(_render(rng, record), shape)
                flat = [v for qa in pairs for v in qa]
                keys = (
                    ["Q", "A"]
                    if shape is ResponseShape.ONE
                    else ["Q1", "A1", "Q2", "A2", "Q3", "A3"]
                )
                assert flat == [record[k] for k in keys]
                well_formed += 1
            else:
                corrupted = rng.choice(
                    [
                        "no braces at all",
                        '{"Q": "q"',
                        "{'Q': 'q', 'A': 'a', 'B': 'extra'}",
                        "{'Q1': 'q', 'A1': 'a'}",
                        "{'Q': '', 'A': 'a'}",
                        "[1, 2, 3]",
                    ]
                )
                shape = rng.choice([ResponseShape.ONE, ResponseShape.THREE])
                with pytest.raises(QaParseError):
                    parse_qa_response(corrupted, shape)
        assert well_formed > 7_000  # sanity on the split


class TestGenerateForClip:
    def cfg(self, server):
        return LlmConfig(
            endpoint_url=server.url, model_name="mock", backoff_base_s=0.01
        )

    def test_single_event_clip_group(self):
        fused = fused_goal_clip()
        with MockLlmServer() as server:
            records, quarantined = generate_for_clip(fused, self.cfg(server))
        assert quarantined == []
        kinds = [r.kind for r in records]
        assert kinds == [QaKind.LONG_DESCRIPTION, QaKind.OVERVIEW_QA]
        assert all(r.clip_id == fused.clip_id for r in records)

    def test_pair_clip_group(self):
        fused = fused_pair_clip()
        with MockLlmServer() as server:
            records, quarantined = generate_for_clip(fused, self.cfg(server))
        assert quarantined == []
        kinds = [r.kind for r in records]
        assert kinds == [
            QaKind.LONG_DESCRIPTION,
            QaKind.DETAIL_QA,
            QaKind.DETAIL_QA,
            QaKind.DETAIL_QA,
        ]
        assert [r.index for r in records] == [0, 1, 2, 3]

    def test_garbage_reply_quarantines_clip(self):
        fused = fused_goal_clip()
        with MockLlmServer(fallback=GARBAGE_FALLBACK) as server:
            records, quarantined = generate_for_clip(fused, self.cfg(server))
            served = server.requests_served
        assert records == []
        assert len(quarantined) == 1
        assert quarantined[0].stage == "long_description"
        assert quarantined[0].raw == GARBAGE_FALLBACK
        assert served == 2  # original + one corrective retry

    def test_corrective_retry_recovers(self):
        fused = fused_goal_clip()
        replies = iter([GARBAGE_FALLBACK, '{"Q": "q", "A": "a"}'])

        def flaky_once(messages):
            try:
                return next(replies)
            except StopIteration:
                return '{"Q": "q2", "A": "a2"}'

        with MockLlmServer(fallback=flaky_once) as server:
            records, quarantined = generate_for_clip(fused, self.cfg(server))
        assert quarantined == []
        assert records[0].question == "q"


class TestAssembleDataset:
    def test_order_is_input_order_despite_concurrency(self):
        fused = [fused_goal_clip() for _ in range(6)]
        for i, f in enumerate(fused):
            f.clip.clip_id = f"{i:06d}"
        with MockLlmServer() as server:
            cfg = LlmConfig(
                endpoint_url=server.url,
                model_name="mock",
                max_inflight=4,
                backoff_base_s=0.01,
            )
            records, quarantined = assemble_dataset(fused, cfg)
        assert quarantined == []
        clip_order = [r.clip_id for r in records if r.kind is QaKind.LONG_DESCRIPTION]
        assert clip_order == [f"{i:06d}" for i in range(6)]
