"""Frame sampling schedule, visual-token budgeting, and clip cutting.

The patch grid fits a frame's aspect ratio into a per-frame token cap:
with the ratio normalized to r >= 1, grid_h = floor(sqrt(cap / r)) and
grid_w = floor(grid_h * r), transposed back for portrait inputs. Every
clip is sampled at 24 frames placed at interval midpoints. Cutting
shells out to an ffmpeg-style tool with decode-accurate seeking and
re-encoding, then probes the output duration against the request.
"""

from __future__ import annotations

import logging
import math
import subprocess
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .annotations import TimeSpan
from .errors import SoccerForgeError
from .pairing import EventPair
from .segmenter import ClipSpec

logger = logging.getLogger(__name__)

FRAMES_PER_CLIP = 24
MAX_TOKENS_PER_FRAME = 128


class MediaError(SoccerForgeError):
    pass


class DegenerateSpan(MediaError):
    """Too short to place the required count of distinct ms timestamps."""


class ToolMissing(MediaError):
    pass


class NonzeroExit(MediaError):
    def __init__(self, cmd: list[str], returncode: int, stderr: str):
        self.cmd = cmd
        self.returncode = returncode
        self.stderr = stderr
        super().__init__(f"{cmd[0]} exited {returncode}: {stderr.strip()[:500]}")


class DurationMismatch(MediaError):
    def __init__(self, requested_ms: int, probed_ms: int, tolerance_ms: int):
        self.requested_ms = requested_ms
        self.probed_ms = probed_ms
        super().__init__(
            f"cut is {probed_ms} ms, requested {requested_ms} ms "
            f"(tolerance ±{tolerance_ms} ms)"
        )


@dataclass(frozen=True)
class TokenBudget:
    grid_w: int
    grid_h: int
    tokens_per_frame: int
    frames: int
    total_tokens: int


@dataclass(frozen=True)
class FramePlan:
    span: TimeSpan
    frame_times_ms: tuple[int, ...]
    effective_fps: float


def patch_grid(
    aspect_w: int, aspect_h: int, max_tokens: int = MAX_TOKENS_PER_FRAME
) -> TokenBudget:
    """Patch grid for an aspect ratio under the per-frame token cap.

    Exact integer arithmetic: floor(sqrt(max_tokens / r)) computed via
    isqrt so no float rounding can flip a boundary case.
    """
    if aspect_w < 1 or aspect_h < 1:
        raise ValueError("aspect components must be >= 1")
    if max_tokens < 1:
        raise ValueError("max_tokens must be >= 1")
    w, h = (aspect_w, aspect_h) if aspect_w >= aspect_h else (aspect_h, aspect_w)
    grid_h = max(1, math.isqrt(max_tokens * h // w))
    grid_w = max(1, min(grid_h * w // h, max_tokens // grid_h))
    if aspect_w < aspect_h:
        grid_w, grid_h = grid_h, grid_w
    tokens = grid_w * grid_h
    return TokenBudget(
        grid_w=grid_w,
        grid_h=grid_h,
        tokens_per_frame=tokens,
        frames=FRAMES_PER_CLIP,
        total_tokens=FRAMES_PER_CLIP * tokens,
    )


def plan_frames(span: TimeSpan, frames: int = FRAMES_PER_CLIP) -> FramePlan:
    """Sampling times for a clip: the midpoints of `frames` equal slices.

    Midpoints are floored to whole ms, which keeps them strictly
    increasing and inside [start, end) whenever duration >= frames ms;
    shorter spans cannot hold that many distinct timestamps.
    """
    duration = span.duration_ms
    if duration < frames:
        raise DegenerateSpan(
            f"span of {duration} ms cannot hold {frames} distinct ms timestamps"
        )
    times = tuple(
        span.start_ms + ((2 * i + 1) * duration) // (2 * frames) for i in range(frames)
    )
    return FramePlan(
        span=span, frame_times_ms=times, effective_fps=frames / (duration / 1000)
    )


# ---------------------------------------------------------------------------
# media file naming


def label_token(label: str) -> str:
    """Labels embed in file names with spaces removed ("Shots off target" -> "Shotsofftarget")."""
    return label.replace(" ", "")


def media_filename(clip: ClipSpec | EventPair) -> str:
    if isinstance(clip, EventPair):
        return (
            f"{clip.pair_id}_{label_token(clip.first.label)}--"
            f"{label_token(clip.second.label)}.mp4"
        )
    return f"{clip.clip_id}_{label_token(clip.anchor_event.label)}.mp4"


# ---------------------------------------------------------------------------
# external tool invocation


@dataclass(frozen=True)
class ToolConfig:
    tool: str = "ffmpeg"
    probe_tool: str = "ffprobe"
    extra_args: tuple[str, ...] = ("-c:v", "libx264", "-preset", "veryfast", "-an")
    duration_tolerance_ms: int = 120


@dataclass(frozen=True)
class CutResult:
    out_path: Path
    requested_ms: int
    probed_ms: int
    returncode: int


def cut_clip(
    video_path: Path | str,
    span: TimeSpan,
    out_path: Path | str,
    tool_cfg: ToolConfig = ToolConfig(),
) -> CutResult:
    """Cut one clip with decode-accurate seeking and re-encoding.

    The seek goes after the input so the tool decodes to the exact start;
    the output duration is probed and must land within the tolerance.
    """
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    start_s = span.start_ms / 1000
    duration_s = span.duration_ms / 1000
    cmd = [
        tool_cfg.tool,
        "-y",
        "-i",
        str(video_path),
        "-ss",
        f"{start_s:.3f}",
        "-t",
        f"{duration_s:.3f}",
        *tool_cfg.extra_args,
        str(out_path),
    ]
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True)
    except FileNotFoundError as exc:
        raise ToolMissing(f"media tool not found: {tool_cfg.tool}") from exc
    if proc.returncode != 0:
        raise NonzeroExit(cmd, proc.returncode, proc.stderr)

    probed_ms = probe_duration_ms(out_path, tool_cfg)
    if abs(probed_ms - span.duration_ms) > tool_cfg.duration_tolerance_ms:
        raise DurationMismatch(
            span.duration_ms, probed_ms, tool_cfg.duration_tolerance_ms
        )
    return CutResult(
        out_path=out_path,
        requested_ms=span.duration_ms,
        probed_ms=probed_ms,
        returncode=proc.returncode,
    )


def probe_duration_ms(path: Path | str, tool_cfg: ToolConfig = ToolConfig()) -> int:
    cmd = [
        tool_cfg.probe_tool,
        "-v",
        "error",
        "-show_entries",
        "format=duration",
        "-of",
        "default=noprint_wrappers=1:nokey=1",
        str(path),
    ]
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True)
    except FileNotFoundError as exc:
        raise ToolMissing(f"probe tool not found: {tool_cfg.probe_tool}") from exc
    if proc.returncode != 0:
        raise NonzeroExit(cmd, proc.returncode, proc.stderr)
    try:
        return round(float(proc.stdout.strip()) * 1000)
    except ValueError as exc:
        raise MediaError(f"unparseable probe output: {proc.stdout!r}") from exc


def cut_clips(
    jobs: Sequence[tuple[Path | str, TimeSpan, Path | str]],
    tool_cfg: ToolConfig = ToolConfig(),
    max_workers: int = 4,
) -> list[CutResult]:
    """Run independent cuts on a bounded worker pool; order preserved."""
    if not jobs:
        return []
    workers = max(1, min(max_workers, len(jobs)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda j: cut_clip(j[0], j[1], j[2], tool_cfg), jobs))
