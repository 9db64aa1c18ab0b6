"""Keyframe selection from motion cues plus a periodic heartbeat.

A frame is selected when the mean absolute luminance difference to the
previous frame (computed on an area-averaged downscale) exceeds the motion
threshold, or when its index is a multiple of ``max_gap``. The heartbeat on
absolute indices keeps the keyframe set monotone under threshold changes:
lowering the threshold can only add keyframes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .manifest import LuminanceFrame, MediaManifest, load_frame


@dataclass(frozen=True)
class SamplerConfig:
    motion_threshold: float = 0.08
    scene_threshold: float = 0.35
    max_gap: int = 50
    downscale_edge: int = 32

    def __post_init__(self) -> None:
        if not 0.0 <= self.motion_threshold <= self.scene_threshold <= 1.0:
            raise ValueError(
                "thresholds must satisfy 0 <= motion <= scene <= 1, got "
                f"{self.motion_threshold}, {self.scene_threshold}"
            )
        if self.max_gap < 1:
            raise ValueError(f"max_gap must be >= 1, got {self.max_gap}")
        if self.downscale_edge < 1:
            raise ValueError(f"downscale_edge must be >= 1, got {self.downscale_edge}")

    @classmethod
    def for_fps(cls, fps: float, **overrides) -> "SamplerConfig":
        """Defaults with a heartbeat of roughly one keyframe per two seconds."""
        overrides.setdefault("max_gap", max(1, round(2 * fps)))
        return cls(**overrides)


@dataclass(frozen=True)
class Keyframe:
    frame_index: int
    timestamp_s: float
    motion_score: float
    scene_boundary: bool


def _axis_operator(src: int, dst: int) -> np.ndarray:
    """Exact box-filter averaging operator mapping src samples to dst samples."""
    op = np.zeros((dst, src), dtype=np.float64)
    scale = src / dst
    for i in range(dst):
        lo = i * scale
        hi = (i + 1) * scale
        j0 = int(math.floor(lo))
        j1 = min(src, int(math.ceil(hi)))
        for j in range(j0, j1):
            op[i, j] = min(hi, j + 1) - max(lo, j)
    return op / scale


def _downscaled_dims(width: int, height: int, edge: int) -> tuple[int, int]:
    longest = max(width, height)
    if longest <= edge:
        return width, height
    if width >= height:
        return edge, max(1, round(height * edge / width))
    return max(1, round(width * edge / height)), edge


def _area_resize(frame: LuminanceFrame, target_w: int, target_h: int) -> np.ndarray:
    img = np.frombuffer(frame.pixels, dtype=np.uint8).astype(np.float64)
    img = img.reshape(frame.height, frame.width)
    if (target_w, target_h) == (frame.width, frame.height):
        return img
    rows = _axis_operator(frame.height, target_h)
    cols = _axis_operator(frame.width, target_w)
    return rows @ img @ cols.T


def motion_score(prev: LuminanceFrame, curr: LuminanceFrame, cfg: SamplerConfig) -> float:
    """Mean absolute luminance difference in [0, 1] on a common downscaled grid."""
    wa, ha = _downscaled_dims(prev.width, prev.height, cfg.downscale_edge)
    wb, hb = _downscaled_dims(curr.width, curr.height, cfg.downscale_edge)
    tw, th = min(wa, wb), min(ha, hb)
    a = _area_resize(prev, tw, th)
    b = _area_resize(curr, tw, th)
    score = float(np.mean(np.abs(a - b))) / 255.0
    return min(1.0, max(0.0, score))


def select_keyframes(manifest: MediaManifest, cfg: SamplerConfig) -> list[Keyframe]:
    """Scan frames in order; frame 0 is always selected."""
    selected: list[Keyframe] = []
    prev: LuminanceFrame | None = None
    for index in range(manifest.frame_count):
        frame = load_frame(manifest, index)
        score = 0.0 if prev is None else motion_score(prev, frame, cfg)
        if index == 0 or score > cfg.motion_threshold or index % cfg.max_gap == 0:
            selected.append(
                Keyframe(
                    frame_index=index,
                    timestamp_s=index / manifest.fps,
                    motion_score=score,
                    scene_boundary=score > cfg.scene_threshold,
                )
            )
        prev = frame
    return selected
