import json
from pathlib import Path

import pytest

from sceneagent.backends.client import CachingClient
from sceneagent.backends.protocol import BackendProfile
from sceneagent.backends.scripted import ScriptedTransport
from sceneagent.media.pgm import write_pgm
from sceneagent.scenegraph.model import SceneEdge, SceneGraph, SceneNode


def make_video(
    tmp_path: Path,
    frames: list[bytes],
    width: int,
    height: int,
    fps: float = 1.0,
    video_id: str = "vid",
    transcript: dict | None = None,
) -> Path:
    """Write PGM frames plus a manifest; returns the manifest path."""
    tmp_path.mkdir(parents=True, exist_ok=True)
    names = []
    for i, pixels in enumerate(frames):
        name = f"frame_{i:04d}.pgm"
        write_pgm(tmp_path / name, width, height, pixels)
        names.append(name)
    doc = {"video_id": video_id, "fps": fps, "frames": names, "transcript": None}
    if transcript is not None:
        (tmp_path / "transcript.json").write_text(json.dumps(transcript))
        doc["transcript"] = "transcript.json"
    manifest_path = tmp_path / "manifest.json"
    manifest_path.write_text(json.dumps(doc))
    return manifest_path


def flat_frames(values: list[int], count_each: int = 1, size: int = 4) -> list[bytes]:
    """Constant-luminance square frames, one per value (repeated count_each times)."""
    frames = []
    for value in values:
        for _ in range(count_each):
            frames.append(bytes([value] * (size * size)))
    return frames


@pytest.fixture
def scripted_profile() -> BackendProfile:
    return BackendProfile(
        name="scripted", kind="scripted", model_id="scripted-default", fixture_path="inline"
    )


@pytest.fixture
def scripted_setup(scripted_profile):
    transport = ScriptedTransport()
    client = CachingClient(scripted_profile, transport)
    return scripted_profile, transport, client


def contacts_fixture_graph() -> SceneGraph:
    """Two contacts edges onto tissue: scalpel ends at 46, forceps at 80."""
    graph = SceneGraph(video_id="fixture", fps=2.0)
    graph.nodes["scalpel:#0"] = SceneNode(
        node_id="scalpel:#0", category="scalpel", first_frame=0, last_frame=50,
        provenance=[(0, (1, 1, 4, 4))],
    )
    graph.nodes["forceps:#0"] = SceneNode(
        node_id="forceps:#0", category="forceps", first_frame=10, last_frame=90,
        provenance=[(10, (2, 2, 4, 4))],
    )
    graph.nodes["tissue_region:#0"] = SceneNode(
        node_id="tissue_region:#0", category="tissue_region", first_frame=0, last_frame=90,
        provenance=[(0, (8, 8, 6, 6))],
    )
    graph.edges["e1"] = SceneEdge(
        edge_id="e1", src="scalpel:#0", dst="tissue_region:#0", relation="contacts",
        t_start=40, t_end=46, provenance=[40, 46],
    )
    graph.edges["e2"] = SceneEdge(
        edge_id="e2", src="forceps:#0", dst="tissue_region:#0", relation="contacts",
        t_start=70, t_end=80, provenance=[70, 80],
    )
    return graph
