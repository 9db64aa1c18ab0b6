"""Canonical object vocabulary and label canonicalization.

Canonicalization is three-stage: synonym table hit after normalization, then
an optional backend asked to choose from the closed id list, then
``unknown_object``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..backends.client import CachingClient
from ..backends.protocol import BackendError, ChatRequest, text_message
from ..prompts import load_prompt, render_template
from .model import CATEGORY_KINDS, UNKNOWN_CATEGORY


@dataclass(frozen=True)
class CanonicalCategory:
    id: str
    kind: str
    synonyms: tuple[str, ...]


class Vocabulary:
    def __init__(self, version: str, categories: list[CanonicalCategory]):
        self.version = version
        self.categories: dict[str, CanonicalCategory] = {}
        self._lookup: dict[str, str] = {}
        for cat in categories:
            if cat.id in self.categories:
                raise ValueError(f"duplicate category id {cat.id!r}")
            if cat.kind not in CATEGORY_KINDS:
                raise ValueError(f"unknown kind {cat.kind!r} for {cat.id!r}")
            self.categories[cat.id] = cat
            self._lookup[cat.id] = cat.id
            for syn in cat.synonyms:
                self._lookup.setdefault(syn.strip().lower(), cat.id)

    @property
    def ids(self) -> list[str]:
        return sorted(self.categories)

    def kind_of(self, category_id: str) -> str | None:
        cat = self.categories.get(category_id)
        return cat.kind if cat else None

    def table_lookup(self, normalized: str) -> str | None:
        return self._lookup.get(normalized)


def _from_doc(doc: dict) -> Vocabulary:
    cats = [
        CanonicalCategory(id=c["id"], kind=c["kind"], synonyms=tuple(c.get("synonyms", ())))
        for c in doc["categories"]
    ]
    return Vocabulary(version=doc["version"], categories=cats)


def load_vocabulary(version: str = "clinical_v1") -> Vocabulary:
    """Load a packaged vocabulary data file by version id."""
    data = resources.files("sceneagent.scenegraph.data").joinpath(f"{version}.json")
    return _from_doc(json.loads(data.read_text("utf-8")))


def load_vocabulary_file(path: str | Path) -> Vocabulary:
    return _from_doc(json.loads(Path(path).read_text("utf-8")))


def canonicalize(
    raw_label: str,
    vocabulary: Vocabulary,
    client: CachingClient | None = None,
) -> str:
    """Map a raw detection label to a canonical category id (total function)."""
    base = raw_label.strip().lower()
    hit = vocabulary.table_lookup(base)
    if hit is None and base.endswith("s") and len(base) > 1:
        hit = vocabulary.table_lookup(base[:-1])
    if hit is not None:
        return hit
    if client is not None:
        prompt = render_template(
            load_prompt("canonicalize_v1"),
            label=raw_label.strip(),
            categories=", ".join(vocabulary.ids),
        )
        req = ChatRequest(
            model_id=client.profile.model_id,
            messages=(text_message("user", prompt),),
            temperature=client.profile.temperature,
            max_tokens=32,
        )
        try:
            answer = client.complete(req).text.strip().lower()
        except BackendError:
            answer = ""
        if answer in vocabulary.categories:
            return answer
    return UNKNOWN_CATEGORY
