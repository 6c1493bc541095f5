"""Friend recommendation: rank the most similar profiles within a cluster."""

from __future__ import annotations

from dataclasses import dataclass

from tagrec.cluster import Clustering
from tagrec.errors import InputError, UnknownIdError
from tagrec.matcher import SimilarityMatrix


@dataclass(frozen=True)
class Recommendation:
    target: str
    items: tuple[tuple[str, float], ...]  # (candidate id, similarity), descending


def recommend(target: str, clustering: Clustering, matrix: SimilarityMatrix, top_k: int) -> Recommendation:
    """Top ``top_k`` candidates from the target's own cluster.

    Candidates are ordered by similarity descending, ties by id
    ascending; the target itself never appears.  Small clusters simply
    yield fewer results.
    """
    if top_k < 1:
        raise InputError(f"top_k must be positive, got {top_k}")
    if target not in clustering.assignment:
        raise UnknownIdError(f"unknown profile id {target!r}")
    t = matrix.index(target)
    cluster = clustering.assignment[target]
    scored = [
        (candidate, matrix.sim(t, matrix.index(candidate)))
        for candidate in clustering.members(cluster)
        if candidate != target
    ]
    scored.sort(key=lambda item: (-item[1], item[0]))
    return Recommendation(target=target, items=tuple(scored[:top_k]))


def recommend_all(clustering: Clustering, matrix: SimilarityMatrix, top_k: int) -> list[Recommendation]:
    """Batch recommendations for every profile, in matrix id order."""
    return [recommend(pid, clustering, matrix, top_k) for pid in matrix.ids]
