from .buffer import MemoryBuffer, Observation, OutOfOrderObservation, buffer_context
from .manifest import (
    BadManifest,
    LuminanceFrame,
    MediaError,
    MediaManifest,
    MissingFrameFile,
    load_frame,
    load_manifest,
    manifest_from_doc,
)
from .pgm import MalformedFrame, read_pgm, write_pgm
from .sampling import Keyframe, SamplerConfig, motion_score, select_keyframes
from .transcript import Transcript, Utterance, load_transcript, transcript_search

__all__ = [
    "BadManifest",
    "Keyframe",
    "LuminanceFrame",
    "MalformedFrame",
    "MediaError",
    "MediaManifest",
    "MemoryBuffer",
    "MissingFrameFile",
    "Observation",
    "OutOfOrderObservation",
    "SamplerConfig",
    "Transcript",
    "Utterance",
    "buffer_context",
    "load_frame",
    "load_manifest",
    "load_transcript",
    "manifest_from_doc",
    "motion_score",
    "read_pgm",
    "select_keyframes",
    "transcript_search",
    "write_pgm",
]
