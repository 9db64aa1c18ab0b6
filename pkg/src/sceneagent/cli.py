"""Command-line client: each subcommand mirrors one pipeline operation.

Exit codes: 0 ok, 1 usage error, 2 data error, 3 backend error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .backends.client import CachingClient
from .backends.http import HttpTransport
from .backends.protocol import BackendError, BackendProfile
from .backends.scripted import ScriptedTransport
from .evalharness.items import EvalError, load_qa
from .evalharness.report import aggregate, format_report, report_from_doc, report_to_doc
from .evalharness.run import evaluate_items
from .graphquery.executor import PlanError, run_query
from .graphquery.parser import QuerySyntaxError
from .media.manifest import MediaError, load_manifest
from .media.pgm import MalformedFrame
from .media.sampling import SamplerConfig, select_keyframes
from .retrieval.chunking import EmptyCorpus
from .retrieval.store import RetrievalStore, ingest_corpus, load_corpus_manifest
from .scenegraph.serialize import SCHEMA_VERSION, import_graph
from .scenegraph.model import GraphError
from .service.sessions import ServiceError, SessionManager

USAGE_EXIT = 1
DATA_EXIT = 2
BACKEND_EXIT = 3

DATA_ERRORS = (
    MediaError,
    MalformedFrame,
    EvalError,
    QuerySyntaxError,
    PlanError,
    GraphError,
    EmptyCorpus,
    json.JSONDecodeError,
    OSError,
    ValueError,
)


BASE_URL_ENV = "SCENEAGENT_BASE_URL"
TIMEOUT_ENV = "SCENEAGENT_TIMEOUT_MS"


def _load_profile(profile_path: str | None, fixtures: str | None) -> BackendProfile:
    import os

    if profile_path:
        doc = json.loads(Path(profile_path).read_text("utf-8"))
        if fixtures:
            doc["fixture_path"] = fixtures
    elif fixtures:
        doc = {
            "name": "scripted", "kind": "scripted",
            "model_id": "scripted-default", "fixture_path": fixtures,
        }
    elif os.environ.get(BASE_URL_ENV):
        doc = {"name": "env", "kind": "http", "model_id": "default"}
    else:
        raise click.UsageError(
            f"provide --backend-profile, --fixtures, or {BASE_URL_ENV}"
        )
    if os.environ.get(BASE_URL_ENV):
        doc["base_url"] = os.environ[BASE_URL_ENV]
    if os.environ.get(TIMEOUT_ENV):
        doc["timeout_ms"] = int(os.environ[TIMEOUT_ENV])
    return BackendProfile(**doc)


def _make_transport(profile: BackendProfile):
    if profile.kind == "scripted":
        if not profile.fixture_path:
            raise click.UsageError("scripted profiles need a fixture file (--fixtures)")
        return ScriptedTransport.from_file(profile.fixture_path)
    return HttpTransport()


def _manager(profile_path, fixtures, store, corpus_index=None, budget=None) -> SessionManager:
    profile = _load_profile(profile_path, fixtures)
    corpus_store = RetrievalStore.load(corpus_index) if corpus_index else None
    kwargs = {}
    if budget is not None:
        kwargs["call_budget"] = budget
    return SessionManager(
        profile=profile,
        transport=_make_transport(profile),
        store_dir=store,
        corpus_store=corpus_store,
        **kwargs,
    )


def _echo_json(doc) -> None:
    click.echo(json.dumps(doc, indent=2, sort_keys=True))


backend_options = [
    click.option("--backend-profile", "profile_path", type=click.Path(), default=None,
                 help="Backend profile JSON file."),
    click.option("--fixtures", type=click.Path(), default=None,
                 help="Scripted fixture file (digest-keyed responses)."),
    click.option("--store", type=click.Path(), default=None,
                 help="Persistence directory for sessions, graphs, and traces."),
]


def with_backend_options(fn):
    for option in reversed(backend_options):
        fn = option(fn)
    return fn


@click.group()
def cli() -> None:
    """Video scene understanding workflows: sampling, scene graphs, QA, retrieval."""


@cli.command()
@click.argument("manifest_path", type=click.Path())
def ingest(manifest_path: str) -> None:
    """Validate a frame manifest and print a summary."""
    manifest = load_manifest(manifest_path)
    _echo_json(
        {
            "video_id": manifest.video_id,
            "fps": manifest.fps,
            "frame_count": manifest.frame_count,
            "duration_s": manifest.duration_s,
            "has_transcript": manifest.transcript_path is not None,
        }
    )


@cli.command()
@click.argument("manifest_path", type=click.Path())
@click.option("--tau", type=float, default=0.08, help="Motion threshold in [0,1].")
@click.option("--tau-scene", type=float, default=0.35, help="Scene-boundary threshold.")
@click.option("--max-gap", type=int, default=None, help="Heartbeat gap in frames.")
@click.option("--downscale-edge", type=int, default=32)
def sample(manifest_path, tau, tau_scene, max_gap, downscale_edge) -> None:
    """Select keyframes by motion cues and print them."""
    manifest = load_manifest(manifest_path)
    overrides = {
        "motion_threshold": tau,
        "scene_threshold": tau_scene,
        "downscale_edge": downscale_edge,
    }
    if max_gap is not None:
        overrides["max_gap"] = max_gap
    cfg = SamplerConfig.for_fps(manifest.fps, **overrides)
    keyframes = select_keyframes(manifest, cfg)
    _echo_json(
        [
            {
                "frame_index": k.frame_index,
                "timestamp_s": k.timestamp_s,
                "motion_score": k.motion_score,
                "scene_boundary": k.scene_boundary,
            }
            for k in keyframes
        ]
    )


@cli.command()
@click.argument("manifest_path", type=click.Path())
@with_backend_options
@click.option("--out", type=click.Path(), default=None, help="Write graph JSON here.")
def scenegen(manifest_path, profile_path, fixtures, store, out) -> None:
    """Generate the temporal scene graph for a video."""
    manager = _manager(profile_path, fixtures, store)
    session = manager.create_session(manifest_path=manifest_path)
    graph, warnings = manager.generate_scene_graph(session.session_id)
    from .scenegraph.serialize import export_graph

    data = export_graph(graph)
    if out:
        Path(out).write_bytes(data)
        click.echo(f"wrote {out}")
    else:
        click.echo(data.decode("utf-8"), nl=False)
    for warning in warnings:
        click.echo(f"warning: {warning}", err=True)


@cli.command()
@click.argument("manifest_path", type=click.Path())
@click.argument("question")
@with_backend_options
@click.option("--corpus-index", type=click.Path(), default=None,
              help="Retrieval index JSON built by retrieve-ingest.")
@click.option("--budget", type=int, default=None, help="Per-session backend call budget.")
@click.option("--with-scenegraph", is_flag=True, help="Generate the scene graph first.")
def ask(manifest_path, question, profile_path, fixtures, store, corpus_index, budget,
        with_scenegraph) -> None:
    """Answer one question about a video through the agent loop."""
    manager = _manager(profile_path, fixtures, store, corpus_index, budget)
    session = manager.create_session(manifest_path=manifest_path)
    if with_scenegraph:
        manager.generate_scene_graph(session.session_id)
    _session, trace, trace_ref = manager.ask(session.session_id, question)
    _echo_json(
        {
            "answer": trace.answer,
            "confidence": trace.confidence,
            "abstained": trace.abstained,
            "trace_ref": trace_ref,
            "steps": len(trace.steps),
        }
    )


@cli.command()
@click.option("--graph", "graph_path", type=click.Path(), required=True,
              help="Scene graph JSON exported by scenegen.")
@click.argument("query")
def graphqa(graph_path, query) -> None:
    """Run a graph query against an exported scene graph."""
    graph = import_graph(Path(graph_path).read_bytes())
    result = run_query(query, graph)
    _echo_json(result.to_doc())


@cli.command("retrieve-ingest")
@click.option("--corpus", "corpus_path", type=click.Path(), required=True,
              help="Corpus manifest JSON: {doc_id: text file path}.")
@click.option("--chunk-size", type=int, default=512)
@click.option("--out", type=click.Path(), required=True, help="Index snapshot output path.")
def retrieve_ingest(corpus_path, chunk_size, out) -> None:
    """Chunk and index a reference corpus for dual-level retrieval."""
    docs = load_corpus_manifest(corpus_path)
    store = ingest_corpus(docs, chunk_size=chunk_size)
    store.save(out)
    _echo_json({"chunks": len(store.chunks), "index": out})


@cli.command()
@click.option("--index", "index_path", type=click.Path(), required=True)
@click.argument("query")
@click.option("--top-n", type=int, default=3)
def retrieve(index_path, query, top_n) -> None:
    """Query a retrieval index and print fused hits."""
    from .retrieval.search import FusionConfig

    store = RetrievalStore.load(index_path)
    hits = store.search(query, FusionConfig(top_n=top_n))
    _echo_json(
        [
            {
                "chunk_id": h.chunk_id,
                "score": h.score,
                "channel": h.channel,
                "matched_entities": h.matched_entities,
                "doc_id": store.chunks[h.chunk_id].doc_id,
            }
            for h in hits
        ]
    )


@cli.command("eval")
@click.option("--qa", "qa_path", type=click.Path(), required=True, help="QA JSON-lines file.")
@click.option("--videos", "videos_dir", type=click.Path(), required=True,
              help="Directory with <video_id>/manifest.json per video.")
@with_backend_options
@click.option("--corpus-index", type=click.Path(), default=None)
@click.option("--out", type=click.Path(), default=None, help="Write the JSON report here.")
@click.option("--style", type=click.Choice(["text-table", "json"]), default="text-table")
def eval_cmd(qa_path, videos_dir, profile_path, fixtures, store, corpus_index, out, style) -> None:
    """Run a QA set through the pipeline and aggregate accuracy."""
    items = load_qa(qa_path)
    manager = _manager(profile_path, fixtures, store, corpus_index)

    def session_factory(video_id: str):
        manifest = Path(videos_dir) / video_id / "manifest.json"
        session = manager.create_session(manifest_path=str(manifest))
        return session.context

    judge_client = CachingClient(manager.profile, manager.transport)
    outcome = evaluate_items(items, session_factory, judge_client=judge_client)
    report = aggregate(outcome.records, items)
    if out:
        Path(out).write_bytes(format_report(report, "json"))
    click.echo(format_report(report, style).decode("utf-8"), nl=False)
    if outcome.errors:
        for err in outcome.errors:
            click.echo(f"error: {err}", err=True)
        sys.exit(BACKEND_EXIT)


@cli.command()
@click.option("--in", "report_path", type=click.Path(), required=True)
@click.option("--style", type=click.Choice(["text-table", "json"]), default="text-table")
def report(report_path, style) -> None:
    """Re-render a stored report JSON."""
    doc = json.loads(Path(report_path).read_text("utf-8"))
    click.echo(format_report(report_from_doc(doc), style).decode("utf-8"), nl=False)


@cli.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8099)
@with_backend_options
@click.option("--corpus-index", type=click.Path(), default=None)
@click.option("--budget", type=int, default=None)
def serve(host, port, profile_path, fixtures, store, corpus_index, budget) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service.app import create_app

    manager = _manager(profile_path, fixtures, store, corpus_index, budget)
    uvicorn.run(create_app(manager), host=host, port=port)


def main() -> None:
    try:
        cli(standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        sys.exit(USAGE_EXIT)
    except click.ClickException as exc:
        exc.show()
        sys.exit(USAGE_EXIT)
    except click.exceptions.Abort:
        sys.exit(USAGE_EXIT)
    except ServiceError as exc:
        click.echo(f"error ({exc.code}): {exc}", err=True)
        if exc.code in ("backend_unavailable", "budget_exceeded"):
            sys.exit(BACKEND_EXIT)
        sys.exit(DATA_EXIT)
    except BackendError as exc:
        click.echo(f"backend error: {exc}", err=True)
        sys.exit(BACKEND_EXIT)
    except DATA_ERRORS as exc:
        click.echo(f"data error: {exc}", err=True)
        sys.exit(DATA_EXIT)


if __name__ == "__main__":
    main()
