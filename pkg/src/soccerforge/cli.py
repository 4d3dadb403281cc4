"""Pipeline driver: each stage is a subcommand over one config file.

    soccerforge <subcommand> --config <path> [--seed N] [--match <id>...]

Stages read only prior-stage outputs and write line-delimited records
under the configured output root. Every output file starts with a
manifest record (stage, stage version, config hash, resolved parameters)
so a run can be reproduced exactly; stage outputs are a pure function of
(inputs, config). Re-running a stage whose inputs and parameters are
unchanged is a no-op, keyed by content hash rather than timestamps.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import random
import sys
from dataclasses import replace
from pathlib import Path

from . import fusion, media, metrics, pairing, qa, segmenter
from .annotations import load_match, save_match, validate
from .config import ConfigError, PipelineConfig, config_hash, load_config
from .errors import SoccerForgeError
from .judging import (
    build_classification_query,
    build_judge_prompt,
    judge_prompt_hash,
    parse_judge_output,
    verdict_to_record,
)
from .llm import request_completion
from .prompts import Message, PromptMessages, Role
from .synthetic import generate_match

logger = logging.getLogger(__name__)

STAGE_VERSION = "1"

SUBCOMMANDS = (
    "synth",
    "ingest",
    "segment",
    "pair",
    "fuse",
    "cut",
    "generate",
    "build-eval",
    "judge",
    "report",
)


# ---------------------------------------------------------------------------
# manifest + caching plumbing


def _manifest(cfg: PipelineConfig, stage: str, params: dict) -> dict:
    return {
        "manifest": {
            "stage": stage,
            "stage_version": STAGE_VERSION,
            "config_hash": config_hash(cfg),
            "params": params,
        }
    }


def write_records(path: Path, manifest: dict, records: list[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps(manifest, ensure_ascii=False, sort_keys=True))
        fh.write("\n")
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False))
            fh.write("\n")


def read_records(path: Path) -> list[dict]:
    """Read a line-delimited output, skipping its manifest header."""
    records = []
    with path.open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            if "manifest" in rec:
                continue
            records.append(rec)
    return records


def _digest_paths(paths: list[Path]) -> str:
    h = hashlib.sha256()
    for p in sorted(paths):
        h.update(str(p.name).encode())
        h.update(p.read_bytes())
    return h.hexdigest()


def _stage_key(cfg: PipelineConfig, stage: str, input_paths: list[Path], params: dict) -> str:
    h = hashlib.sha256()
    h.update(STAGE_VERSION.encode())
    h.update(stage.encode())
    h.update(json.dumps(params, sort_keys=True).encode())
    h.update(_digest_paths(input_paths).encode())
    return h.hexdigest()


def _stamp_path(cfg: PipelineConfig, stage: str) -> Path:
    return cfg.out_root / ".stamps" / f"{stage}.json"


def _up_to_date(cfg: PipelineConfig, stage: str, key: str) -> bool:
    stamp = _stamp_path(cfg, stage)
    if not stamp.exists():
        return False
    try:
        return json.loads(stamp.read_text())["key"] == key
    except (json.JSONDecodeError, KeyError):
        return False


def _write_stamp(cfg: PipelineConfig, stage: str, key: str) -> None:
    stamp = _stamp_path(cfg, stage)
    stamp.parent.mkdir(parents=True, exist_ok=True)
    stamp.write_text(json.dumps({"key": key}))


def _write_error(cfg: PipelineConfig, stage: str, exc: Exception) -> None:
    path = cfg.out_root / "errors" / f"{stage}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(
            {"stage": stage, "error": type(exc).__name__, "message": str(exc)},
            ensure_ascii=False,
        )
    )


def _match_dirs(cfg: PipelineConfig) -> list[Path]:
    root = cfg.data_root
    if not root.exists():
        raise ConfigError(f"data root does not exist: {root}")
    dirs = sorted(d for d in root.iterdir() if d.is_dir())
    if cfg.matches:
        wanted = set(cfg.matches)
        dirs = [d for d in dirs if d.name in wanted]
        missing = wanted - {d.name for d in dirs}
        if missing:
            raise ConfigError(f"match dir(s) not found: {sorted(missing)}")
    if not dirs:
        raise ConfigError(f"no match directories under {root}")
    return dirs


def _annotation_files(dirs: list[Path]) -> list[Path]:
    files = []
    for d in dirs:
        files.extend(sorted(p for p in d.iterdir() if p.is_file()))
    return files


def _load_all(cfg: PipelineConfig):
    return [(d.name, load_match(d, cfg.label_set)) for d in _match_dirs(cfg)]


def _write_summary(cfg: PipelineConfig, stage: str, counts: dict) -> None:
    path = cfg.out_root / stage / "summary.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "_manifest": _manifest(cfg, stage, {})["manifest"],
        **counts,
    }
    path.write_text(json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2))


# ---------------------------------------------------------------------------
# stages


def stage_synth(cfg: PipelineConfig) -> int:
    cfg.data_root.mkdir(parents=True, exist_ok=True)
    for i in range(cfg.synth_matches):
        annotations, book = generate_match(cfg.seed + i, cfg.synth_params)
        match_dir = cfg.data_root / annotations.match_id.render()
        save_match(annotations, match_dir)
        (match_dir / "book.json").write_text(book.to_json())
        print(f"synth: wrote {match_dir}")
    return 0


def stage_ingest(cfg: PipelineConfig) -> int:
    dirs = _match_dirs(cfg)
    params = {"label_set": list(cfg.label_set)}
    key = _stage_key(cfg, "ingest", _annotation_files(dirs), params)
    if _up_to_date(cfg, "ingest", key):
        print("ingest: up to date")
        return 0
    records = []
    counts = {}
    for d in dirs:
        annotations = load_match(d, cfg.label_set)
        issues = validate(annotations, cfg.label_set)
        counts[d.name] = {
            "events": len(annotations.events),
            "camera": len(annotations.camera),
            "captions": len(annotations.captions),
            "asr": len(annotations.asr),
            "issues": len(issues),
        }
        for issue in issues:
            records.append(
                {
                    "match": d.name,
                    "code": issue.code,
                    "severity": issue.severity,
                    "location": issue.location,
                    "detail": issue.detail,
                }
            )
    write_records(cfg.out_root / "ingest" / "issues.jsonl", _manifest(cfg, "ingest", params), records)
    _write_summary(cfg, "ingest", counts)
    _write_stamp(cfg, "ingest", key)
    print(f"ingest: {len(dirs)} match(es), {len(records)} issue(s)")
    return 0


def stage_segment(cfg: PipelineConfig) -> int:
    dirs = _match_dirs(cfg)
    params = {
        "event_window_ms": cfg.event_window_ms,
        "max_clip_ms": cfg.max_clip_ms,
        "replay_lookback_ms": cfg.replay_lookback_ms,
    }
    key = _stage_key(cfg, "segment", _annotation_files(dirs), params)
    if _up_to_date(cfg, "segment", key):
        print("segment: up to date")
        return 0
    counts = {}
    total = 0
    for name, annotations in _load_all(cfg):
        clips = segmenter.segment_match(
            annotations, cfg.event_window_ms, cfg.max_clip_ms, cfg.replay_lookback_ms
        )
        records = [segmenter.clip_to_record(c) for c in clips]
        write_records(
            cfg.out_root / "segment" / name / "clips.jsonl",
            _manifest(cfg, "segment", params),
            records,
        )
        counts[name] = len(clips)
        total += len(clips)
    counts["total_clips"] = total
    _write_summary(cfg, "segment", counts)
    _write_stamp(cfg, "segment", key)
    print(f"segment: {total} clip(s) across {len(dirs)} match(es)")
    return 0


def stage_pair(cfg: PipelineConfig) -> int:
    dirs = _match_dirs(cfg)
    params = {
        "pair_gap_min_ms": cfg.pair_gap_min_ms,
        "pair_gap_max_ms": cfg.pair_gap_max_ms,
        "pair_lead_ms": cfg.pair_lead_ms,
        "pair_tail_ms": cfg.pair_tail_ms,
        "max_clip_ms": cfg.max_clip_ms,
        "flag_ms": cfg.flag_ms,
    }
    key = _stage_key(cfg, "pair", _annotation_files(dirs), params)
    if _up_to_date(cfg, "pair", key):
        print("pair: up to date")
        return 0
    counts = {}
    total = 0
    for name, annotations in _load_all(cfg):
        pairs = pairing.pair_match(
            annotations,
            cfg.pair_gap_min_ms,
            cfg.pair_gap_max_ms,
            cfg.pair_lead_ms,
            cfg.pair_tail_ms,
            cfg.max_clip_ms,
            cfg.flag_ms,
        )
        records = [pairing.pair_to_record(p) for p in pairs]
        write_records(
            cfg.out_root / "pair" / name / "pairs.jsonl",
            _manifest(cfg, "pair", params),
            records,
        )
        counts[name] = len(pairs)
        total += len(pairs)
    counts["total_pairs"] = total
    _write_summary(cfg, "pair", counts)
    _write_stamp(cfg, "pair", key)
    print(f"pair: {total} valid pair(s) across {len(dirs)} match(es)")
    return 0


def _segment_outputs(cfg: PipelineConfig, dirs: list[Path]) -> list[Path]:
    return [cfg.out_root / "segment" / d.name / "clips.jsonl" for d in dirs]


def _pair_outputs(cfg: PipelineConfig, dirs: list[Path]) -> list[Path]:
    return [cfg.out_root / "pair" / d.name / "pairs.jsonl" for d in dirs]


def _require(paths: list[Path], producer: str) -> None:
    missing = [str(p) for p in paths if not p.exists()]
    if missing:
        raise SoccerForgeError(
            f"missing input(s) {missing}; run the {producer} stage first"
        )


def stage_fuse(cfg: PipelineConfig) -> int:
    dirs = _match_dirs(cfg)
    clip_files = _segment_outputs(cfg, dirs)
    pair_files = _pair_outputs(cfg, dirs)
    _require(clip_files, "segment")
    _require(pair_files, "pair")
    params = {
        "caption_lead_ms": cfg.caption_lead_ms,
        "caption_tail_ms": cfg.caption_tail_ms,
        "filler_tokens": list(cfg.filler_tokens),
    }
    inputs = _annotation_files(dirs) + clip_files + pair_files
    key = _stage_key(cfg, "fuse", inputs, params)
    if _up_to_date(cfg, "fuse", key):
        print("fuse: up to date")
        return 0
    counts = {}
    total_single = total_pair = 0
    for d, clip_file, pair_file in zip(dirs, clip_files, pair_files):
        annotations = load_match(d, cfg.label_set)
        clips = [
            segmenter.clip_from_record(rec, annotations.match_id)
            for rec in read_records(clip_file)
        ]
        pairs = [
            pairing.pair_from_record(rec, annotations.match_id)
            for rec in read_records(pair_file)
        ]
        fused = fusion.fuse_all(
            clips,
            pairs,
            annotations,
            caption_lead_ms=cfg.caption_lead_ms,
            caption_tail_ms=cfg.caption_tail_ms,
            fillers=cfg.filler_tokens,
        )
        records = [fusion.fused_to_record(f) for f in fused]
        write_records(
            cfg.out_root / "fuse" / d.name / "fused.jsonl",
            _manifest(cfg, "fuse", params),
            records,
        )
        singles = sum(1 for f in fused if not f.is_pair)
        counts[d.name] = {"singles": singles, "pairs": len(fused) - singles}
        total_single += singles
        total_pair += len(fused) - singles
    counts["total_fused_singles"] = total_single
    counts["total_fused_pairs"] = total_pair
    _write_summary(cfg, "fuse", counts)
    _write_stamp(cfg, "fuse", key)
    print(f"fuse: {total_single} single-event + {total_pair} paired-event fused clip(s)")
    return 0


def stage_cut(cfg: PipelineConfig) -> int:
    if cfg.video_root is None:
        raise ConfigError("cut requires media.video_root in the config")
    dirs = _match_dirs(cfg)
    clip_files = _segment_outputs(cfg, dirs)
    pair_files = _pair_outputs(cfg, dirs)
    _require(clip_files, "segment")
    _require(pair_files, "pair")
    video_files = sorted(p for p in cfg.video_root.rglob("*") if p.is_file())
    key = _stage_key(
        cfg,
        "cut",
        clip_files + pair_files + video_files,
        {"tool": cfg.tool.tool, "extra_args": list(cfg.tool.extra_args)},
    )
    if _up_to_date(cfg, "cut", key):
        print("cut: up to date")
        return 0
    total = 0
    report = []
    for d, clip_file, pair_file in zip(dirs, clip_files, pair_files):
        match_id = load_match(d, cfg.label_set).match_id
        jobs = []
        names = []
        for rec in read_records(clip_file):
            clip = segmenter.clip_from_record(rec, match_id)
            source = cfg.video_root / d.name / f"half{clip.half}.mp4"
            out = cfg.out_root / "media" / d.name / media.media_filename(clip)
            jobs.append((source, clip.span, out))
            names.append(rec["clip_id"])
        for rec in read_records(pair_file):
            pair = pairing.pair_from_record(rec, match_id)
            source = cfg.video_root / d.name / f"half{pair.first.half}.mp4"
            out = cfg.out_root / "media" / d.name / media.media_filename(pair)
            jobs.append((source, pair.span, out))
            names.append(rec["clip_id"])
        results = media.cut_clips(jobs, cfg.tool, cfg.cut_workers)
        for clip_id, result in zip(names, results):
            report.append(
                {
                    "match": d.name,
                    "clip_id": clip_id,
                    "out": str(result.out_path),
                    "requested_ms": result.requested_ms,
                    "probed_ms": result.probed_ms,
                }
            )
        total += len(results)
    write_records(
        cfg.out_root / "cut" / "cut_report.jsonl",
        _manifest(cfg, "cut", {"tool": cfg.tool.tool}),
        report,
    )
    _write_stamp(cfg, "cut", key)
    print(f"cut: {total} clip(s) written")
    return 0


def _media_path(cfg: PipelineConfig, match_name: str, filename: str) -> str:
    return str(Path("media") / match_name / filename)


def corpus_clip_id(match_name: str, clip_id: str) -> str:
    """Clip ids are per-match; corpus-level outputs qualify them."""
    return f"{match_name}:{clip_id}"


def stage_generate(cfg: PipelineConfig) -> int:
    if cfg.generator is None:
        raise ConfigError("generate requires llm.generator in the config")
    dirs = _match_dirs(cfg)
    fused_files = [cfg.out_root / "fuse" / d.name / "fused.jsonl" for d in dirs]
    _require(fused_files, "fuse")
    params = {"model": cfg.generator.model_name, "temperature": cfg.generator.temperature}
    key = _stage_key(cfg, "generate", fused_files, params)
    if _up_to_date(cfg, "generate", key):
        print("generate: up to date")
        return 0

    dataset_records = []
    quarantine_records = []
    for d, fused_file in zip(dirs, fused_files):
        annotations = load_match(d, cfg.label_set)
        clip_file = cfg.out_root / "segment" / d.name / "clips.jsonl"
        pair_file = cfg.out_root / "pair" / d.name / "pairs.jsonl"
        clips = {
            rec["clip_id"]: segmenter.clip_from_record(rec, annotations.match_id)
            for rec in read_records(clip_file)
        }
        pairs = {
            rec["clip_id"]: pairing.pair_from_record(rec, annotations.match_id)
            for rec in read_records(pair_file)
        }
        fused_list = []
        for rec in read_records(fused_file):
            source = pairs.get(rec["clip_id"]) if rec["is_pair"] else clips.get(rec["clip_id"])
            if source is None:
                raise SoccerForgeError(
                    f"fused clip {rec['clip_id']} has no sidecar record in {d.name}"
                )
            fused_list.append(
                fusion.FusedClip(
                    clip=source,
                    captions=list(rec["captions"]),
                    commentary=rec["commentary"],
                    jerseys=annotations.jerseys,
                )
            )
        records, quarantined = qa.assemble_dataset(fused_list, cfg.generator)
        media_paths = {
            f.clip_id: _media_path(cfg, d.name, media.media_filename(f.clip))
            for f in fused_list
        }
        for rec in records:
            row = qa.qa_to_record(rec, media_paths[rec.clip_id])
            row["clip_id"] = corpus_clip_id(d.name, rec.clip_id)
            dataset_records.append(row)
        for quar in quarantined:
            quarantine_records.append(
                {
                    "match": d.name,
                    "clip_id": corpus_clip_id(d.name, quar.clip_id),
                    "stage": quar.stage,
                    "raw": quar.raw,
                    "reason": quar.reason,
                }
            )
    write_records(
        cfg.out_root / "generate" / "dataset.jsonl",
        _manifest(cfg, "generate", params),
        dataset_records,
    )
    write_records(
        cfg.out_root / "generate" / "quarantine.jsonl",
        _manifest(cfg, "generate", params),
        quarantine_records,
    )
    _write_stamp(cfg, "generate", key)
    print(
        f"generate: {len(dataset_records)} record(s), "
        f"{len(quarantine_records)} quarantined clip(s)"
    )
    return 0


def stage_build_eval(cfg: PipelineConfig) -> int:
    dirs = _match_dirs(cfg)
    clip_files = _segment_outputs(cfg, dirs)
    _require(clip_files, "segment")
    params = {
        "class_sets": list(cfg.eval_class_sets),
        "per_class_cap": cfg.eval_per_class_cap,
        "seed": cfg.seed,
    }
    key = _stage_key(cfg, "build-eval", clip_files, params)
    if _up_to_date(cfg, "build-eval", key):
        print("build-eval: up to date")
        return 0

    candidates: dict[str, list[dict]] = {}
    for d, clip_file in zip(dirs, clip_files):
        for rec in read_records(clip_file):
            if rec["kind"] != "RealTime":
                continue  # replays duplicate their partner's action
            filename = f"{rec['clip_id']}_{media.label_token(rec['label'])}.mp4"
            candidates.setdefault(rec["label"], []).append(
                {
                    "match": d.name,
                    "clip_id": corpus_clip_id(d.name, rec["clip_id"]),
                    "media": _media_path(cfg, d.name, filename),
                    "label": rec["label"],
                }
            )

    for set_name in cfg.eval_class_sets:
        classes = cfg.class_set(set_name)
        rng = random.Random(cfg.seed)
        rows = []
        query = build_classification_query(None, classes)
        for label in classes.labels:
            pool = sorted(
                candidates.get(label, []), key=lambda r: (r["match"], r["clip_id"])
            )
            if len(pool) > cfg.eval_per_class_cap:
                pool = rng.sample(pool, cfg.eval_per_class_cap)
                pool.sort(key=lambda r: (r["match"], r["clip_id"]))
            for row in pool:
                rows.append({**row, "query": query})
        write_records(
            cfg.out_root / "build-eval" / f"manifest_{set_name}.jsonl",
            _manifest(cfg, "build-eval", params),
            rows,
        )
        print(f"build-eval: {set_name} manifest with {len(rows)} clip(s)")
    _write_stamp(cfg, "build-eval", key)
    return 0


def stage_judge(cfg: PipelineConfig) -> int:
    if cfg.judge is None:
        raise ConfigError("judge requires llm.judge in the config")
    if cfg.answers_file is None:
        raise ConfigError("judge requires eval.answers_file in the config")
    if not cfg.answers_file.exists():
        raise SoccerForgeError(f"answers file not found: {cfg.answers_file}")

    answers_by_clip: dict[str, dict[str, str]] = {}
    with cfg.answers_file.open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            answers_by_clip.setdefault(rec["clip_id"], {})[rec["model"]] = rec["answer"]

    params = {"model": cfg.judge.model_name, "class_sets": list(cfg.eval_class_sets)}
    manifest_files = [
        cfg.out_root / "build-eval" / f"manifest_{set_name}.jsonl"
        for set_name in cfg.eval_class_sets
    ]
    _require(manifest_files, "build-eval")
    key = _stage_key(cfg, "judge", manifest_files + [cfg.answers_file], params)
    if _up_to_date(cfg, "judge", key):
        print("judge: up to date")
        return 0
    for set_name in cfg.eval_class_sets:
        manifest_file = cfg.out_root / "build-eval" / f"manifest_{set_name}.jsonl"
        classes = cfg.class_set(set_name)
        out_file = cfg.out_root / "judge" / f"verdicts_{set_name}.jsonl"
        # the verdict store is append-only: re-runs skip work already keyed
        # by (clip, model set, judge prompt hash)
        records = read_records(out_file) if out_file.exists() else []
        done = {
            (r["clip_id"], r["prompt_hash"], tuple(sorted(r["verdict"]["scores"])))
            for r in records
        }
        judged = 0
        for row in read_records(manifest_file):
            answers = answers_by_clip.get(row["clip_id"])
            if not answers:
                continue
            prompt_text = build_judge_prompt(row["query"], row["label"], answers, classes)
            text_hash = judge_prompt_hash(prompt_text)
            if (row["clip_id"], text_hash, tuple(sorted(answers))) in done:
                continue
            prompt = PromptMessages((Message(Role.SYSTEM, prompt_text),))
            raw = request_completion(prompt, cfg.judge)
            verdict = parse_judge_output(raw, answers.keys(), classes)
            rec = verdict_to_record(row["clip_id"], raw, verdict, text_hash)
            rec["label"] = row["label"]
            records.append(rec)
            judged += 1
        write_records(out_file, _manifest(cfg, "judge", params), records)
        print(f"judge: {set_name}: {judged} new clip(s) judged, {len(records)} total")
    _write_stamp(cfg, "judge", key)
    return 0


def stage_report(cfg: PipelineConfig) -> int:
    out_dir = cfg.out_root / "report"
    out_dir.mkdir(parents=True, exist_ok=True)
    verdict_files = [
        cfg.out_root / "judge" / f"verdicts_{set_name}.jsonl"
        for set_name in cfg.eval_class_sets
    ]
    _require(verdict_files, "judge")
    key = _stage_key(
        cfg, "report", verdict_files, {"class_sets": list(cfg.eval_class_sets)}
    )
    if _up_to_date(cfg, "report", key):
        print("report: up to date")
        return 0
    for set_name in cfg.eval_class_sets:
        verdict_file = cfg.out_root / "judge" / f"verdicts_{set_name}.jsonl"
        classes = cfg.class_set(set_name)
        truth: dict[str, list[str]] = {}
        pred: dict[str, list[str]] = {}
        scores: dict[str, list[int]] = {}
        for rec in read_records(verdict_file):
            verdict = rec["verdict"]
            for model, predicted in verdict["predicted_class"].items():
                truth.setdefault(model, []).append(rec["label"])
                pred.setdefault(model, []).append(predicted)
                scores.setdefault(model, []).append(verdict["scores"][model])
        summary_rows = []
        distributions = []
        for model in sorted(truth):
            cm = metrics.confusion(truth[model], pred[model], classes)
            report = metrics.metrics(cm)
            summary_rows.append((model, report))
            distributions.append(metrics.score_stats(scores[model], model))
            with (out_dir / f"per_class_{set_name}_{model}.csv").open(
                "w", encoding="utf-8", newline=""
            ) as fh:
                metrics.write_per_class_csv(report, fh)
        with (out_dir / f"summary_{set_name}.csv").open(
            "w", encoding="utf-8", newline=""
        ) as fh:
            metrics.write_summary_csv(summary_rows, fh)
        with (out_dir / f"violin_{set_name}.csv").open(
            "w", encoding="utf-8", newline=""
        ) as fh:
            metrics.write_violin_csv(distributions, fh)
        print(f"report: {set_name}: {len(summary_rows)} model(s) reported")
    _write_stamp(cfg, "report", key)
    return 0


_STAGES = {
    "synth": stage_synth,
    "ingest": stage_ingest,
    "segment": stage_segment,
    "pair": stage_pair,
    "fuse": stage_fuse,
    "cut": stage_cut,
    "generate": stage_generate,
    "build-eval": stage_build_eval,
    "judge": stage_judge,
    "report": stage_report,
}


def run(subcommand: str, cfg: PipelineConfig) -> int:
    """Run one pipeline stage; non-zero exit plus an error file on failure."""
    if subcommand not in _STAGES:
        raise ConfigError(f"unknown subcommand {subcommand!r}")
    try:
        return _STAGES[subcommand](cfg)
    except SoccerForgeError as exc:
        _write_error(cfg, subcommand, exc)
        print(f"{subcommand}: error: {exc}", file=sys.stderr)
        return 1


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="soccerforge",
        description="Soccer video instruction dataset pipeline and eval harness",
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", required=True, help="path to the YAML config")
    parser.add_argument("--seed", type=int, default=None, help="override config seed")
    parser.add_argument(
        "--match",
        action="append",
        default=None,
        help="restrict to one or more match directory names",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.match:
        cfg = replace(cfg, matches=tuple(args.match))
    return run(args.subcommand, cfg)


if __name__ == "__main__":
    sys.exit(main())
