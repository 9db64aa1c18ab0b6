import json

import pytest

from sceneagent.media import (
    BadManifest,
    MalformedFrame,
    MissingFrameFile,
    load_frame,
    load_manifest,
    read_pgm,
    write_pgm,
)

from conftest import flat_frames, make_video


def test_load_valid_manifest(tmp_path):
    path = make_video(tmp_path, flat_frames([10, 20, 30]), width=4, height=4, fps=1.0)
    manifest = load_manifest(path)
    assert manifest.video_id == "vid"
    assert manifest.frame_count == 3
    assert manifest.duration_s == 3.0
    frame = load_frame(manifest, 1)
    assert (frame.width, frame.height) == (4, 4)
    assert frame.pixels == bytes([20] * 16)


def test_missing_frame_file(tmp_path):
    path = make_video(tmp_path, flat_frames([10]), width=4, height=4)
    doc = json.loads(path.read_text())
    doc["frames"].append("nope.pgm")
    path.write_text(json.dumps(doc))
    with pytest.raises(MissingFrameFile):
        load_manifest(path)


def test_sixteen_bit_depth_rejected(tmp_path):
    frame = tmp_path / "deep.pgm"
    frame.write_bytes(b"P5\n2 2\n65535\n" + bytes(8))
    (tmp_path / "manifest.json").write_text(
        json.dumps({"video_id": "v", "fps": 1, "frames": ["deep.pgm"], "transcript": None})
    )
    with pytest.raises(MalformedFrame):
        load_manifest(tmp_path / "manifest.json")


@pytest.mark.parametrize(
    "doc",
    [
        {"video_id": "v", "fps": 0, "frames": ["f.pgm"], "transcript": None},
        {"video_id": "v", "fps": -2, "frames": ["f.pgm"], "transcript": None},
        {"video_id": "v", "fps": 1, "frames": [], "transcript": None},
        {"video_id": "", "fps": 1, "frames": ["f.pgm"], "transcript": None},
    ],
)
def test_bad_manifest_rejected(tmp_path, doc):
    write_pgm(tmp_path / "f.pgm", 2, 2, bytes(4))
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(BadManifest):
        load_manifest(path)


def test_frames_may_vary_in_resolution(tmp_path):
    write_pgm(tmp_path / "a.pgm", 2, 2, bytes(4))
    write_pgm(tmp_path / "b.pgm", 6, 3, bytes(18))
    path = tmp_path / "manifest.json"
    path.write_text(
        json.dumps({"video_id": "v", "fps": 2, "frames": ["a.pgm", "b.pgm"], "transcript": None})
    )
    manifest = load_manifest(path)
    assert manifest.frame_sizes == ((2, 2), (6, 3))
    assert manifest.duration_s == 1.0


def test_pgm_roundtrip_and_header_comments(tmp_path):
    write_pgm(tmp_path / "x.pgm", 3, 2, bytes([0, 1, 2, 3, 4, 5]))
    assert read_pgm(tmp_path / "x.pgm") == (3, 2, bytes([0, 1, 2, 3, 4, 5]))
    commented = tmp_path / "c.pgm"
    commented.write_bytes(b"P5\n# a comment\n2 1\n255\n\x07\x09")
    assert read_pgm(commented) == (2, 1, b"\x07\x09")


@pytest.mark.parametrize(
    "data",
    [
        b"P6\n2 2\n255\n" + bytes(12),          # wrong magic
        b"P5\n2 2\n255\n" + bytes(3),           # short raster
        b"P5\n2 2\n255\n" + bytes(5),           # long raster
        b"P5\n2 2\n",                           # truncated header
        b"P5\n2 x\n255\n" + bytes(4),           # non-numeric height
    ],
)
def test_malformed_pgm(tmp_path, data):
    path = tmp_path / "bad.pgm"
    path.write_bytes(data)
    with pytest.raises(MalformedFrame):
        read_pgm(path)
