"""Pipeline configuration: one YAML file drives every stage.

Window defaults carry the published pipeline constants (±5 s event
window, 1-7 s pair gaps, the 3-10 s caption lag, 10 s clip cap, 8 s
long flag); any override travels into every output manifest so a run
can be reproduced exactly from its artifacts.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import yaml

from .annotations import SOCCERNET_LABELS
from .errors import SoccerForgeError
from .judging import CLASS_SETS, ClassSet
from .llm import LlmConfig
from .media import ToolConfig
from .synthetic import SynthParams


class ConfigError(SoccerForgeError):
    pass


@dataclass
class PipelineConfig:
    data_root: Path
    out_root: Path
    matches: tuple[str, ...] | None = None
    seed: int = 0

    label_set: tuple[str, ...] = SOCCERNET_LABELS
    event_window_ms: int = 5_000
    pair_gap_min_ms: int = 1_000
    pair_gap_max_ms: int = 7_000
    caption_lead_ms: int = 3_000
    caption_tail_ms: int = 10_000
    max_clip_ms: int = 10_000
    flag_ms: int = 8_000
    pair_lead_ms: int = 2_000
    pair_tail_ms: int = 3_000
    replay_lookback_ms: int = 30_000
    filler_tokens: tuple[str, ...] = ("uh", "um", "erm")

    generator: LlmConfig | None = None
    judge: LlmConfig | None = None

    video_root: Path | None = None
    tool: ToolConfig = field(default_factory=ToolConfig)
    cut_workers: int = 4

    eval_class_sets: tuple[str, ...] = ("six", "sixteen")
    custom_class_sets: dict[str, tuple[str, ...]] = field(default_factory=dict)
    eval_per_class_cap: int = 100
    answers_file: Path | None = None

    synth_matches: int = 5
    synth_params: SynthParams = field(default_factory=SynthParams)

    def class_set(self, name: str) -> ClassSet:
        if name in CLASS_SETS:
            return CLASS_SETS[name]
        if name in self.custom_class_sets:
            return ClassSet(name, tuple(self.custom_class_sets[name]))
        raise ConfigError(f"unknown class set {name!r}")

    def to_dict(self) -> dict:
        data = asdict(self)
        data["data_root"] = str(self.data_root)
        data["out_root"] = str(self.out_root)
        data["video_root"] = str(self.video_root) if self.video_root else None
        data["answers_file"] = str(self.answers_file) if self.answers_file else None
        return data


def config_hash(cfg: PipelineConfig) -> str:
    payload = json.dumps(cfg.to_dict(), ensure_ascii=False, sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _llm_from_mapping(mapping: dict) -> LlmConfig:
    try:
        return LlmConfig(**mapping)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad llm config: {exc}") from exc


def load_config(path: Path | str) -> PipelineConfig:
    """Read a YAML config file into a PipelineConfig."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    with path.open(encoding="utf-8") as fh:
        raw = yaml.safe_load(fh) or {}
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a mapping")

    try:
        cfg = PipelineConfig(
            data_root=Path(raw["data_root"]),
            out_root=Path(raw["out_root"]),
        )
    except KeyError as exc:
        raise ConfigError(f"config is missing required key {exc.args[0]!r}") from exc

    if raw.get("matches"):
        cfg = replace(cfg, matches=tuple(str(m) for m in raw["matches"]))
    scalars = (
        "seed",
        "event_window_ms",
        "pair_gap_min_ms",
        "pair_gap_max_ms",
        "caption_lead_ms",
        "caption_tail_ms",
        "max_clip_ms",
        "flag_ms",
        "pair_lead_ms",
        "pair_tail_ms",
        "replay_lookback_ms",
        "cut_workers",
        "eval_per_class_cap",
        "synth_matches",
    )
    overrides = {key: int(raw[key]) for key in scalars if key in raw}
    if overrides:
        cfg = replace(cfg, **overrides)
    if "label_set" in raw:
        cfg = replace(cfg, label_set=tuple(str(x) for x in raw["label_set"]))
    if "filler_tokens" in raw:
        cfg = replace(cfg, filler_tokens=tuple(str(x) for x in raw["filler_tokens"]))

    llm = raw.get("llm", {})
    if "generator" in llm:
        cfg = replace(cfg, generator=_llm_from_mapping(llm["generator"]))
    if "judge" in llm:
        cfg = replace(cfg, judge=_llm_from_mapping(llm["judge"]))

    media = raw.get("media", {})
    if "video_root" in media:
        cfg = replace(cfg, video_root=Path(media["video_root"]))
    tool_keys = {
        k: media[k] for k in ("tool", "probe_tool", "duration_tolerance_ms") if k in media
    }
    if "extra_args" in media:
        tool_keys["extra_args"] = tuple(str(a) for a in media["extra_args"])
    if tool_keys:
        cfg = replace(cfg, tool=ToolConfig(**tool_keys))

    eval_cfg = raw.get("eval", {})
    if "class_sets" in eval_cfg:
        cfg = replace(cfg, eval_class_sets=tuple(str(s) for s in eval_cfg["class_sets"]))
    if "custom_class_sets" in eval_cfg:
        cfg = replace(
            cfg,
            custom_class_sets={
                str(name): tuple(str(label) for label in labels)
                for name, labels in eval_cfg["custom_class_sets"].items()
            },
        )
    if "answers_file" in eval_cfg:
        cfg = replace(cfg, answers_file=Path(eval_cfg["answers_file"]))

    synth = raw.get("synth", {})
    if synth:
        params = {
            k: v for k, v in synth.items() if k in SynthParams.__dataclass_fields__
        }
        cfg = replace(cfg, synth_params=SynthParams(**params))

    return cfg
