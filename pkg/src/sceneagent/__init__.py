"""Agentic video scene understanding toolkit.

Subpackages:
  media      - frame manifests, keyframe sampling, transcripts, memory buffer
  backends   - chat wire protocol, scripted/http transports, cache, embedder
  scenegraph - canonical vocabulary, spatial rules, temporal scene graphs
  graphquery - small graph query language: parser, executor, traces
  retrieval  - dual-level (entity graph + dense vector) retrieval
  agent      - ReAct loop with self-consistency confidence and fallback
  evalharness- QA loading, MCQ/judge scoring, report aggregation
  service    - FastAPI app, session manager, persistence
"""

__version__ = "0.1.0"
