"""Frame-file manifests: a video as an ordered list of grayscale frames plus timing."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .pgm import MalformedFrame, read_pgm


class MediaError(Exception):
    pass


class BadManifest(MediaError):
    pass


class MissingFrameFile(MediaError):
    pass


@dataclass(frozen=True)
class LuminanceFrame:
    """One decoded frame: row-major 8-bit luminance values."""

    width: int
    height: int
    pixels: bytes
    index: int


@dataclass(frozen=True)
class MediaManifest:
    video_id: str
    fps: float
    frame_paths: tuple[Path, ...]
    transcript_path: Path | None
    frame_sizes: tuple[tuple[int, int], ...]

    @property
    def frame_count(self) -> int:
        return len(self.frame_paths)

    @property
    def duration_s(self) -> float:
        return self.frame_count / self.fps

    def to_doc(self) -> dict:
        return {
            "video_id": self.video_id,
            "fps": self.fps,
            "frames": [str(p) for p in self.frame_paths],
            "transcript": str(self.transcript_path) if self.transcript_path else None,
        }


def manifest_from_doc(doc: dict, base_dir: str | Path = ".") -> MediaManifest:
    """Validate a manifest document, checking every referenced frame file."""
    if not isinstance(doc, dict):
        raise BadManifest("manifest must be a JSON object")
    video_id = doc.get("video_id")
    if not isinstance(video_id, str) or not video_id:
        raise BadManifest("video_id must be a non-empty string")
    fps = doc.get("fps")
    if not isinstance(fps, (int, float)) or isinstance(fps, bool) or fps <= 0:
        raise BadManifest(f"fps must be positive, got {fps!r}")
    frames = doc.get("frames")
    if not isinstance(frames, list) or not frames:
        raise BadManifest("frames must be a non-empty list")
    base = Path(base_dir)
    paths: list[Path] = []
    sizes: list[tuple[int, int]] = []
    for entry in frames:
        if not isinstance(entry, str):
            raise BadManifest(f"frame path must be a string, got {entry!r}")
        path = base / entry
        if not path.is_file():
            raise MissingFrameFile(str(path))
        try:
            width, height, _ = read_pgm(path)
        except MalformedFrame as exc:
            raise MalformedFrame(f"{path}: {exc}") from exc
        paths.append(path)
        sizes.append((width, height))
    transcript = doc.get("transcript")
    transcript_path: Path | None = None
    if transcript is not None:
        if not isinstance(transcript, str):
            raise BadManifest("transcript must be a path or null")
        transcript_path = base / transcript
        if not transcript_path.is_file():
            raise BadManifest(f"transcript file not found: {transcript_path}")
    return MediaManifest(
        video_id=video_id,
        fps=float(fps),
        frame_paths=tuple(paths),
        transcript_path=transcript_path,
        frame_sizes=tuple(sizes),
    )


def load_manifest(path: str | Path) -> MediaManifest:
    """Load a manifest JSON file; frame paths resolve relative to its directory."""
    path = Path(path)
    if not path.is_file():
        raise BadManifest(f"manifest file not found: {path}")
    try:
        doc = json.loads(path.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise BadManifest(f"{path}: invalid JSON ({exc})") from exc
    return manifest_from_doc(doc, base_dir=path.parent)


def load_frame(manifest: MediaManifest, index: int) -> LuminanceFrame:
    width, height, raster = read_pgm(manifest.frame_paths[index])
    return LuminanceFrame(width=width, height=height, pixels=raster, index=index)
