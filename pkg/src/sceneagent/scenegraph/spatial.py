"""Deterministic geometric spatial-relation scorer.

The scorer interface (entities, frame dims) -> relation candidates is kept
narrow so a learned classifier can replace the rule set without touching the
graph builder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .model import Bbox, DetectedEntity
from .vocabulary import Vocabulary


@dataclass(frozen=True)
class SpatialScorerConfig:
    margin_frac: float = 0.05
    contact_gap_px: float = 1.0
    next_to_frac: float = 0.05


@dataclass(frozen=True)
class RelationCandidate:
    src: int  # entity index
    dst: int
    relation: str
    confidence: float


SpatialScorer = Callable[
    [Sequence[DetectedEntity], int, int, Vocabulary], list[RelationCandidate]
]


def _centroid(bbox: Bbox) -> tuple[float, float]:
    x, y, w, h = bbox
    return x + w / 2.0, y + h / 2.0


def _strictly_inside(a: Bbox, b: Bbox) -> bool:
    ax, ay, aw, ah = a
    bx, by, bw, bh = b
    return ax > bx and ay > by and ax + aw < bx + bw and ay + ah < by + bh


def _boundary_gap(a: Bbox, b: Bbox) -> float:
    ax, ay, aw, ah = a
    bx, by, bw, bh = b
    gap_x = max(0.0, max(bx - (ax + aw), ax - (bx + bw)))
    gap_y = max(0.0, max(by - (ay + ah), ay - (by + bh)))
    return math.hypot(gap_x, gap_y)


def _intersection_area(a: Bbox, b: Bbox) -> float:
    ax, ay, aw, ah = a
    bx, by, bw, bh = b
    ix = min(ax + aw, bx + bw) - max(ax, bx)
    iy = min(ay + ah, by + bh) - max(ay, by)
    return max(0.0, ix) * max(0.0, iy)


def infer_spatial_relations(
    entities: Sequence[DetectedEntity],
    frame_width: int,
    frame_height: int,
    vocabulary: Vocabulary,
    cfg: SpatialScorerConfig = SpatialScorerConfig(),
) -> list[RelationCandidate]:
    """Emit every rule that fires for each ordered entity pair (confidence 1.0).

    Image coordinates grow downward, so "above" means the smaller centroid y
    by at least the vertical margin.
    """
    margin_x = cfg.margin_frac * frame_width
    margin_y = cfg.margin_frac * frame_height
    out: list[RelationCandidate] = []
    for i, a in enumerate(entities):
        for j, b in enumerate(entities):
            if i == j:
                continue
            cxa, cya = _centroid(a.bbox)
            cxb, cyb = _centroid(b.bbox)
            contacts = (
                _intersection_area(a.bbox, b.bbox) > 0.0
                or _boundary_gap(a.bbox, b.bbox) <= cfg.contact_gap_px
            )
            inside_either = _strictly_inside(a.bbox, b.bbox) or _strictly_inside(b.bbox, a.bbox)

            def fire(relation: str) -> None:
                out.append(RelationCandidate(src=i, dst=j, relation=relation, confidence=1.0))

            if cxa + margin_x < cxb:
                fire("left_of")
            if cxb + margin_x < cxa:
                fire("right_of")
            if cya + margin_y < cyb:
                fire("above")
            if cyb + margin_y < cya:
                fire("below")
            if _strictly_inside(a.bbox, b.bbox):
                fire("inside")
            if contacts:
                fire("contacts")
            if (
                not contacts
                and not inside_either
                and _boundary_gap(a.bbox, b.bbox) <= cfg.next_to_frac * frame_width
            ):
                fire("next_to")
            if contacts and a.category and b.category:
                if (
                    vocabulary.kind_of(a.category) == "person"
                    and vocabulary.kind_of(b.category) == "instrument"
                ):
                    fire("holds")
    return out
