"""Acceptance suite: one test per shipping criterion, each printing a
PASS/FAIL line (visible with `pytest -s` or in verbose test output).

Criteria cover: the token budget and frame-rate constants, weighted-metric
reproduction from the published per-class tables, brute-force metric
equivalence, the hamming identity, the 100-seed pipeline oracle sweep,
parser robustness under fuzzing, the end-to-end dry run with the mock
endpoint, and the explicit non-goal of reproducing full-corpus totals at
desk scale.
"""

from __future__ import annotations

import json
import random
import string
import time

import pytest
import yaml

from soccerforge.annotations import CameraKind, TimeSpan
from soccerforge.cli import main as cli_main
from soccerforge.cli import read_records
from soccerforge.fusion import fuse_all
from soccerforge.judging import ClassSet, SIX_CLASS, parse_judge_output, JudgeError
from soccerforge.media import patch_grid, plan_frames
from soccerforge.metrics import (
    PerClassRow,
    aggregate_per_class,
    confusion,
    metrics,
)
from soccerforge.mockllm import MockLlmServer
from soccerforge.pairing import pair_match
from soccerforge.qa import QaParseError, ResponseShape, parse_qa_response
from soccerforge.segmenter import segment_match
from soccerforge.synthetic import generate_match

from test_metrics import SIX_CLASS_REPORT, SIXTEEN_CLASS_REPORT, brute_force_metrics


def report(criterion: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {criterion}: {detail}"


def test_criterion_1_token_budget_reproduction():
    patch_grid(16, 9)  # warm any lazy imports before timing
    start = time.perf_counter()
    budget = patch_grid(16, 9)
    elapsed_ms = (time.perf_counter() - start) * 1_000
    ok = (
        budget.tokens_per_frame == 112
        and budget.frames == 24
        and budget.total_tokens == 2_688
        and elapsed_ms < 1.0
    )
    report(
        1,
        ok,
        f"16:9 grid {budget.grid_w}x{budget.grid_h} = {budget.tokens_per_frame} "
        f"tokens/frame, {budget.total_tokens} total, {elapsed_ms:.3f} ms",
    )


def test_criterion_2_frame_rate_reproduction():
    plan = plan_frames(TimeSpan(0, 10_000))
    ok = plan.effective_fps == 2.4 and len(plan.frame_times_ms) == 24
    report(2, ok, f"10 s span -> effective_fps={plan.effective_fps!r} (exact)")


def test_criterion_3_weighted_metric_reproduction():
    start = time.perf_counter()
    six = aggregate_per_class(SIX_CLASS_REPORT)
    sixteen = aggregate_per_class(SIXTEEN_CLASS_REPORT)
    elapsed = time.perf_counter() - start
    checks = [
        abs(six.weighted_precision - 0.59) <= 0.005,
        abs(six.weighted_recall - 0.57) <= 0.005,
        abs(six.weighted_f1 - 0.57) <= 0.005,
        abs(sixteen.weighted_precision - 0.57) <= 0.005,
        abs(sixteen.weighted_recall - 0.51) <= 0.005,
        abs(sixteen.weighted_f1 - 0.49) <= 0.005,
        abs(sixteen.accuracy - 0.51) <= 0.005,
        elapsed < 1.0,
    ]
    report(
        3,
        all(checks),
        "six-class wt P/R/F1 = "
        f"{six.weighted_precision:.4f}/{six.weighted_recall:.4f}/{six.weighted_f1:.4f}; "
        "sixteen-class = "
        f"{sixteen.weighted_precision:.4f}/{sixteen.weighted_recall:.4f}/"
        f"{sixteen.weighted_f1:.4f}, acc {sixteen.accuracy:.4f} "
        f"(targets 0.59/0.57/0.57 and 0.57/0.51/0.49, acc 0.51, tol ±0.005)",
    )


def test_criterion_4_metric_oracle_equivalence():
    start = time.perf_counter()
    rng = random.Random(20_240_817)
    worst = 0.0
    for _ in range(1_000):
        n_classes = rng.randrange(2, 9)
        labels = tuple(f"C{i}" for i in range(n_classes))
        classes = ClassSet("rand", labels)
        n = rng.randrange(1, 21)
        truth = [rng.choice(labels) for _ in range(n)]
        pred = [rng.choice(labels + ("off-list",)) for _ in range(n)]
        got = metrics(confusion(truth, pred, classes))
        want = brute_force_metrics(truth, pred, labels)
        worst = max(
            worst,
            abs(got.accuracy - want["accuracy"]),
            abs(got.cohen_kappa - want["kappa"]),
            abs(got.mcc - want["mcc"]),
            abs(got.hamming_loss - want["hamming"]),
            max(
                max(
                    abs(row.precision - want["per_class"][row.label][0]),
                    abs(row.recall - want["per_class"][row.label][1]),
                    abs(row.f1 - want["per_class"][row.label][2]),
                )
                for row in got.per_class
            ),
        )
    fixture = metrics(confusion(["A", "A", "B"], ["A", "B", "B"], ClassSet("ab", ("A", "B"))))
    elapsed = time.perf_counter() - start
    ok = (
        worst < 1e-12
        and fixture.cohen_kappa == 0.4
        and fixture.mcc == 0.5
        and fixture.hamming_loss == 1 - fixture.accuracy
        and abs(fixture.hamming_loss - 1 / 3) < 1e-15
        and elapsed < 10.0
    )
    report(
        4,
        ok,
        f"1000 random instances, worst |delta|={worst:.2e}; fixture kappa="
        f"{fixture.cohen_kappa}, mcc={fixture.mcc}, hamming={fixture.hamming_loss:.6f} "
        f"({elapsed:.2f} s)",
    )


def test_criterion_5_hamming_identity():
    rng = random.Random(5_055)
    exact = True
    for _ in range(1_000):
        n = rng.randrange(1, 21)
        labels = ("A", "B", "C")
        truth = [rng.choice(labels) for _ in range(n)]
        pred = [rng.choice(labels + ("junk",)) for _ in range(n)]
        got = metrics(confusion(truth, pred, ClassSet("abc", labels)))
        if got.hamming_loss != 1 - got.accuracy:
            exact = False
            break
    report(5, exact, "hamming_loss == 1 - accuracy on 1000 random instances, exact")


def test_criterion_6_pipeline_oracle_equivalence():
    start = time.perf_counter()
    mismatches = []
    seen_pair_gaps: set[int] = set()
    seen_raw_gaps: set[int] = set()
    for seed in range(100):
        annotations, book = generate_match(seed)
        clips = segment_match(annotations)
        realtime = [c for c in clips if c.kind is CameraKind.REAL_TIME]
        replays = [c for c in clips if c.kind is CameraKind.REPLAY]
        pairs = pair_match(annotations)
        fused = fuse_all(clips, pairs, annotations)
        fused_singles = sum(1 for f in fused if not f.is_pair)
        fused_pairs = len(fused) - fused_singles
        seen_pair_gaps.update(p.gap_ms for p in pairs)
        events = list(annotations.events)
        seen_raw_gaps.update(
            b.timestamp_ms - a.timestamp_ms
            for a, b in zip(events, events[1:])
            if a.half == b.half
        )
        ok = (
            len(realtime) == book.planted_single_events
            and len(replays) == book.planted_replays
            and len(pairs) == book.planted_valid_pairs
            and fused_singles == book.expected_fused_singles
            and fused_pairs == book.expected_fused_pairs
            and fused_singles + fused_pairs == book.planted_caption_hits
            and sorted((c.half, c.span.start_ms, c.span.end_ms) for c in realtime)
            == book.expected_single_spans
            and sorted((c.half, c.span.start_ms, c.span.end_ms) for c in replays)
            == book.expected_replay_spans
            and sorted((p.first.half, p.span.start_ms, p.span.end_ms) for p in pairs)
            == book.expected_pair_spans
        )
        if not ok:
            mismatches.append(seed)
    elapsed = time.perf_counter() - start
    boundaries_ok = (
        1_000 in seen_pair_gaps
        and 7_000 in seen_pair_gaps
        and 900 in seen_raw_gaps
        and 900 not in seen_pair_gaps
        and 7_100 in seen_raw_gaps
        and 7_100 not in seen_pair_gaps
    )
    ok = not mismatches and boundaries_ok and elapsed < 60.0
    report(
        6,
        ok,
        f"100-seed sweep exact (mismatched seeds: {mismatches or 'none'}), "
        f"gap boundaries 1.0/7.0 s paired and 0.9/7.1 s excluded ({elapsed:.1f} s)",
    )


def _random_text(rng: random.Random) -> str:
    alphabet = string.ascii_letters + " '\"\\{}:,éß-"
    return "".join(rng.choice(alphabet) for _ in range(rng.randrange(1, 40))).strip() or "x"


def test_criterion_7_parser_robustness():
    rng = random.Random(777)
    qa_round_trips = 0
    qa_quarantined = 0
    for _ in range(10_000):
        well_formed = rng.random() < 0.7
        if well_formed:
            if rng.random() < 0.5:
                record = {"Q": _random_text(rng), "A": _random_text(rng)}
                shape = ResponseShape.ONE
                keys = ["Q", "A"]
            else:
                record = {}
                for i in (1, 2, 3):
                    record[f"Q{i}"] = _random_text(rng)
                    record[f"A{i}"] = _random_text(rng)
                shape = ResponseShape.THREE
                keys = ["Q1", "A1", "Q2", "A2", "Q3", "A3"]
            style = rng.randrange(4)
            raw = (
                json.dumps(record)
                if style == 0
                else repr(record)
                if style == 1
                else f"```json\n{json.dumps(record)}\n```"
                if style == 2
                else f"Sure thing!\n{repr(record)}\nAnything else?"
            )
            pairs = parse_qa_response(raw, shape)
            assert [v for qa in pairs for v in qa] == [record[k] for k in keys]
            qa_round_trips += 1
        else:
            raw = "".join(
                rng.choice(string.printable) for _ in range(rng.randrange(0, 80))
            )
            try:
                parse_qa_response(raw, rng.choice(list(ResponseShape)))
            except QaParseError:
                qa_quarantined += 1

    judge_round_trips = 0
    judge_rejections = 0
    for _ in range(1_000):
        if rng.random() < 0.7:
            models = sorted({_random_text(rng)[:8].strip() or "m" for _ in range(2)})
            payload = {
                "scores": {m: rng.randrange(0, 11) for m in models},
                "reason": {m: _random_text(rng) for m in models},
                "predicted_class": {
                    m: rng.choice(list(SIX_CLASS.labels) + ["Handball"]) for m in models
                },
            }
            style = rng.randrange(3)
            raw = (
                f"```\n{json.dumps(payload)}\n```"
                if style == 0
                else repr(payload)
                if style == 1
                else f"Verdict:\n```python\n{repr(payload)}\n```"
            )
            verdict = parse_judge_output(raw, models, SIX_CLASS)
            assert verdict.scores == payload["scores"]
            judge_round_trips += 1
        else:
            raw = "".join(
                rng.choice(string.printable) for _ in range(rng.randrange(0, 80))
            )
            try:
                parse_judge_output(raw, {"m1"})
            except JudgeError:
                judge_rejections += 1
    report(
        7,
        True,
        f"{qa_round_trips} QA round-trips recovered 100%, {qa_quarantined} "
        f"malformed quarantined; {judge_round_trips} judge round-trips, "
        f"{judge_rejections} rejections; zero panics",
    )


@pytest.fixture
def pipeline_workdir(tmp_path):
    def configure(server_url: str | None = None) -> tuple:
        cfg = {
            "data_root": str(tmp_path / "data"),
            "out_root": str(tmp_path / "out"),
            "seed": 0,
            "synth_matches": 5,
            "eval": {"class_sets": ["six", "sixteen"], "answers_file": str(tmp_path / "answers.jsonl")},
        }
        if server_url:
            cfg["llm"] = {
                "generator": {
                    "endpoint_url": server_url,
                    "model_name": "mock-gen",
                    "backoff_base_s": 0.01,
                },
                "judge": {
                    "endpoint_url": server_url,
                    "model_name": "mock-judge",
                    "backoff_base_s": 0.01,
                },
            }
        cfg_path = tmp_path / "config.yaml"
        cfg_path.write_text(yaml.safe_dump(cfg))
        return tmp_path, cfg_path

    return configure


def test_criterion_8_end_to_end_dry_run(pipeline_workdir):
    start = time.perf_counter()
    with MockLlmServer() as server:
        tmp_path, cfg_path = pipeline_workdir(server.url)
        for stage in ("synth", "ingest", "segment", "pair", "fuse", "generate"):
            code = cli_main([stage, "--config", str(cfg_path)])
            assert code == 0, f"stage {stage} failed"
    dataset = read_records(tmp_path / "out" / "generate" / "dataset.jsonl")
    fused_records = []
    for fused_file in sorted((tmp_path / "out" / "fuse").glob("*/fused.jsonl")):
        match_name = fused_file.parent.name
        for rec in read_records(fused_file):
            fused_records.append({**rec, "clip_id": f"{match_name}:{rec['clip_id']}"})
    by_clip: dict[str, list[dict]] = {}
    for rec in dataset:
        by_clip.setdefault(rec["clip_id"], []).append(rec)
    group_ok = True
    singles = pairs = 0
    for fused in fused_records:
        group = sorted(r["kind"] for r in by_clip.get(fused["clip_id"], []))
        if fused["is_pair"]:
            pairs += 1
            group_ok &= group == ["DetailQA", "DetailQA", "DetailQA", "LongDescription"]
        else:
            singles += 1
            group_ok &= group == ["LongDescription", "OverviewQA"]
    elapsed = time.perf_counter() - start
    ok = group_ok and singles > 0 and pairs > 0 and elapsed < 120.0
    report(
        8,
        ok,
        f"5-match dry run: {singles} single-event clips with 1 LD + 1 overview QA, "
        f"{pairs} paired-event clips with 1 LD + 3 detail QAs ({elapsed:.1f} s)",
    )


def test_criterion_9_full_scale_counts_reported_not_asserted(pipeline_workdir):
    # Full-corpus totals (90 834 clips / 12 827 pairs / 10 615 + 2 982 fused,
    # judge score means) need the real media corpus and proprietary models;
    # at desk scale the pipeline must only complete on real-shaped annotation
    # input and REPORT its counts for side-by-side comparison.
    with MockLlmServer() as server:
        tmp_path, cfg_path = pipeline_workdir(server.url)
        for stage in ("synth", "segment", "pair", "fuse"):
            assert cli_main([stage, "--config", str(cfg_path)]) == 0
        # candidate answers for two models, then judge + report
        manifest_rows = []
        assert cli_main(["build-eval", "--config", str(cfg_path)]) == 0
        for set_name in ("six", "sixteen"):
            manifest_rows.extend(
                read_records(tmp_path / "out" / "build-eval" / f"manifest_{set_name}.jsonl")
            )
        with (tmp_path / "answers.jsonl").open("w") as fh:
            for row in {r["clip_id"]: r for r in manifest_rows}.values():
                fh.write(json.dumps({"clip_id": row["clip_id"], "model": "good-model", "answer": f"That looks like {row['label']} to me."}) + "\n")
                fh.write(json.dumps({"clip_id": row["clip_id"], "model": "bad-model", "answer": "No idea, maybe handball?"}) + "\n")
        assert cli_main(["judge", "--config", str(cfg_path)]) == 0
        assert cli_main(["report", "--config", str(cfg_path)]) == 0

    seg = json.loads((tmp_path / "out" / "segment" / "summary.json").read_text())
    pair = json.loads((tmp_path / "out" / "pair" / "summary.json").read_text())
    fuse = json.loads((tmp_path / "out" / "fuse" / "summary.json").read_text())
    counts_reported = (
        isinstance(seg["total_clips"], int)
        and isinstance(pair["total_pairs"], int)
        and isinstance(fuse["total_fused_singles"], int)
        and isinstance(fuse["total_fused_pairs"], int)
    )
    summary_csv = (tmp_path / "out" / "report" / "summary_six.csv").read_text()
    reports_exist = "Cohen Kappa" in summary_csv and "good-model" in summary_csv
    ok = counts_reported and reports_exist
    report(
        9,
        ok,
        f"pipeline completed and reported counts (clips={seg['total_clips']}, "
        f"pairs={pair['total_pairs']}, fused={fuse['total_fused_singles']}+"
        f"{fuse['total_fused_pairs']}) without asserting full-corpus totals; "
        "judge/report stages emitted metric tables",
    )
