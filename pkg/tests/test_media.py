"""Token budgets, frame plans, media naming, and external-tool cutting."""

from __future__ import annotations

import stat
import textwrap
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from soccerforge.annotations import TimeSpan
from soccerforge.media import (
    CutResult,
    DegenerateSpan,
    DurationMismatch,
    NonzeroExit,
    ToolConfig,
    ToolMissing,
    cut_clip,
    cut_clips,
    label_token,
    media_filename,
    patch_grid,
    plan_frames,
)


def oracle_grid(w: int, h: int, max_tokens: int = 128) -> tuple[int, int]:
    """Exhaustive search for the floor rule's grid, in exact arithmetic."""
    if w < h:
        gh, gw = oracle_grid(h, w, max_tokens)
        return gw, gh
    r = Fraction(w, h)
    grid_h = max(
        [k for k in range(1, max_tokens + 1) if Fraction(k * k) <= Fraction(max_tokens) / r]
        or [1]
    )
    grid_w = max([k for k in range(1, max_tokens + 1) if Fraction(k) <= grid_h * r] or [1])
    grid_w = min(grid_w, max_tokens // grid_h)
    return grid_w, grid_h


class TestPatchGrid:
    def test_widescreen_reproduces_published_budget(self):
        budget = patch_grid(16, 9)
        assert (budget.grid_w, budget.grid_h) == (14, 8)
        assert budget.tokens_per_frame == 112
        assert budget.frames == 24
        assert budget.total_tokens == 2_688

    def test_square(self):
        budget = patch_grid(1, 1)
        assert (budget.grid_w, budget.grid_h) == (11, 11)
        assert budget.tokens_per_frame == 121

    def test_four_three(self):
        budget = patch_grid(4, 3)
        assert (budget.grid_w, budget.grid_h) == (12, 9)
        assert budget.tokens_per_frame == 108

    def test_exhaustive_sweep_within_cap(self):
        for w in range(1, 65):
            for h in range(1, 65):
                budget = patch_grid(w, h)
                assert budget.grid_w >= 1 and budget.grid_h >= 1
                assert budget.tokens_per_frame <= 128
                assert (budget.grid_w, budget.grid_h) == oracle_grid(w, h)

    def test_transpose_symmetry(self):
        for w, h in ((16, 9), (4, 3), (21, 9), (5, 7)):
            a = patch_grid(w, h)
            b = patch_grid(h, w)
            assert (a.grid_w, a.grid_h) == (b.grid_h, b.grid_w)
            assert a.tokens_per_frame == b.tokens_per_frame

    def test_extreme_ratios_stay_under_cap(self):
        for w, h in ((300, 1), (1, 300), (1_000, 7), (128, 1)):
            budget = patch_grid(w, h)
            assert budget.grid_w >= 1 and budget.grid_h >= 1
            assert budget.tokens_per_frame <= 128


class TestPlanFrames:
    def test_ten_second_clip_is_2_4_fps(self):
        plan = plan_frames(TimeSpan(0, 10_000))
        assert plan.effective_fps == 2.4
        assert len(plan.frame_times_ms) == 24

    def test_five_second_clip_is_4_8_fps(self):
        plan = plan_frames(TimeSpan(25_000, 30_000))
        assert plan.effective_fps == 24 / 5

    def test_times_are_midpoints(self):
        plan = plan_frames(TimeSpan(0, 24_000))
        assert plan.frame_times_ms == tuple(500 + 1_000 * i for i in range(24))

    def test_exactly_24_ms_span_still_distinct(self):
        plan = plan_frames(TimeSpan(100, 124))
        assert len(set(plan.frame_times_ms)) == 24

    def test_below_24_ms_is_degenerate(self):
        with pytest.raises(DegenerateSpan):
            plan_frames(TimeSpan(100, 123))

    def test_always_24_increasing_times_inside_span(self):
        for duration in (24, 25, 100, 999, 5_000, 10_000):
            span = TimeSpan(7_000, 7_000 + duration)
            plan = plan_frames(span)
            times = plan.frame_times_ms
            assert len(times) == 24
            assert all(a < b for a, b in zip(times, times[1:]))
            assert all(span.start_ms <= t < span.end_ms for t in times)

    @given(
        st.integers(min_value=0, max_value=10_000_000),
        st.integers(min_value=24, max_value=600_000),
    )
    @settings(max_examples=300, deadline=None)
    def test_invariants_hold_for_any_span(self, start, duration):
        plan = plan_frames(TimeSpan(start, start + duration))
        times = plan.frame_times_ms
        assert len(times) == 24
        assert all(a < b for a, b in zip(times, times[1:]))
        assert all(start <= t < start + duration for t in times)
        assert plan.effective_fps == 24 / (duration / 1000)


class TestNaming:
    def test_label_token_strips_spaces(self):
        assert label_token("Shots off target") == "Shotsofftarget"
        assert label_token("Throw-in") == "Throw-in"

    def test_single_clip_filename(self, simple_match):
        from dataclasses import replace

        from soccerforge.segmenter import segment_match

        clip = segment_match(simple_match)[0]
        clip.clip_id = "40035"
        clip.anchor_event = replace(clip.anchor_event, label="Corner")
        assert media_filename(clip) == "40035_Corner.mp4"

    def test_pair_clip_filename(self):
        from soccerforge.pairing import pair_match

        from conftest import make_match, RT

        annotations = make_match(
            events=[(1, 20_000, "Throw-in"), (1, 24_000, "Shots off target")],
            camera=[(1, 0, 60_000, RT)],
        )
        pair = pair_match(annotations)[0]
        pair.pair_id = "113345"
        assert media_filename(pair) == "113345_Throw-in--Shotsofftarget.mp4"


FAKE_TOOL = textwrap.dedent(
    """\
    #!/bin/sh
    # fake cutter: args ... -t <dur> ... <out>; writes the duration into the file
    dur=""
    prev=""
    for arg in "$@"; do
      if [ "$prev" = "-t" ]; then dur="$arg"; fi
      prev="$arg"
    done
    out=""
    for arg in "$@"; do out="$arg"; done
    printf '%s' "$dur" > "$out"
    """
)

FAKE_PROBE = textwrap.dedent(
    """\
    #!/bin/sh
    # fake prober: prints the duration stored by the fake cutter
    for arg in "$@"; do file="$arg"; done
    cat "$file"
    echo
    """
)


@pytest.fixture
def fake_tools(tmp_path):
    tool = tmp_path / "fakecut"
    probe = tmp_path / "fakeprobe"
    tool.write_text(FAKE_TOOL)
    probe.write_text(FAKE_PROBE)
    for p in (tool, probe):
        p.chmod(p.stat().st_mode | stat.S_IEXEC)
    return ToolConfig(tool=str(tool), probe_tool=str(probe), extra_args=())


class TestCutClip:
    def test_cut_and_probe_within_tolerance(self, tmp_path, fake_tools):
        source = tmp_path / "half1.mp4"
        source.write_bytes(b"fake video")
        out = tmp_path / "40035_Corner.mp4"
        result = cut_clip(source, TimeSpan(25_000, 35_000), out, fake_tools)
        assert isinstance(result, CutResult)
        assert result.requested_ms == 10_000
        assert abs(result.probed_ms - 10_000) <= 120
        assert out.exists()

    def test_missing_tool(self, tmp_path):
        cfg = ToolConfig(tool=str(tmp_path / "nope"), probe_tool="true")
        with pytest.raises(ToolMissing):
            cut_clip(tmp_path / "in.mp4", TimeSpan(0, 1_000), tmp_path / "out.mp4", cfg)

    def test_nonzero_exit_captures_stderr(self, tmp_path, fake_tools):
        bad = tmp_path / "badtool"
        bad.write_text("#!/bin/sh\necho boom >&2\nexit 3\n")
        bad.chmod(bad.stat().st_mode | stat.S_IEXEC)
        cfg = ToolConfig(tool=str(bad), probe_tool=fake_tools.probe_tool, extra_args=())
        with pytest.raises(NonzeroExit) as exc_info:
            cut_clip(tmp_path / "in.mp4", TimeSpan(0, 1_000), tmp_path / "out.mp4", cfg)
        assert exc_info.value.returncode == 3
        assert "boom" in exc_info.value.stderr

    def test_duration_mismatch(self, tmp_path, fake_tools):
        lying_probe = tmp_path / "lyingprobe"
        lying_probe.write_text("#!/bin/sh\necho 99.0\n")
        lying_probe.chmod(lying_probe.stat().st_mode | stat.S_IEXEC)
        cfg = ToolConfig(
            tool=fake_tools.tool, probe_tool=str(lying_probe), extra_args=()
        )
        source = tmp_path / "half1.mp4"
        source.write_bytes(b"fake video")
        with pytest.raises(DurationMismatch):
            cut_clip(source, TimeSpan(0, 5_000), tmp_path / "out.mp4", cfg)

    def test_parallel_cuts_preserve_order(self, tmp_path, fake_tools):
        source = tmp_path / "half1.mp4"
        source.write_bytes(b"fake video")
        jobs = [
            (source, TimeSpan(i * 1_000, i * 1_000 + 2_000), tmp_path / f"c{i}.mp4")
            for i in range(6)
        ]
        results = cut_clips(jobs, fake_tools, max_workers=3)
        assert [r.out_path.name for r in results] == [f"c{i}.mp4" for i in range(6)]
