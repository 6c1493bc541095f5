"""Pipeline artifact IO: atomic TSV writes, hashing, metadata sidecars.

Every stage output is written through a temp file + rename so interrupted
runs never leave a corrupt artifact, and is accompanied by a
``<name>.meta.json`` sidecar recording parameters, input hashes, and the
output hash.  A stage is considered cached when its sidecar still matches
the current inputs and parameters.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from tagrec.cluster import Clustering
from tagrec.errors import ParseError, ResourceError
from tagrec.matcher import SimilarityMatrix
from tagrec.profiles import Profile

SIM_FORMAT = "{:.6f}"


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_tsv(path, rows) -> None:
    atomic_write_text(path, "".join("\t".join(str(f) for f in row) + "\n" for row in rows))


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def sidecar_path(artifact_path) -> Path:
    return Path(str(artifact_path) + ".meta.json")


def write_sidecar(artifact_path, stage: str, params: dict, inputs: dict, elapsed: float) -> None:
    meta = {
        "stage": stage,
        "params": params,
        "inputs": {name: {"path": str(p), "sha256": sha256_file(p)} for name, p in inputs.items()},
        "output_sha256": sha256_file(artifact_path),
        "elapsed_seconds": round(elapsed, 3),
    }
    atomic_write_text(sidecar_path(artifact_path), json.dumps(meta, indent=2, sort_keys=True) + "\n")


def stage_is_cached(artifact_path, stage: str, params: dict, inputs: dict) -> bool:
    artifact_path = Path(artifact_path)
    meta_path = sidecar_path(artifact_path)
    if not artifact_path.exists() or not meta_path.exists():
        return False
    try:
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError):
        return False
    if meta.get("stage") != stage or meta.get("params") != params:
        return False
    recorded = meta.get("inputs", {})
    if set(recorded) != set(inputs):
        return False
    for name, p in inputs.items():
        if not Path(p).exists() or recorded[name].get("sha256") != sha256_file(p):
            return False
    return meta.get("output_sha256") == sha256_file(artifact_path)


# -- artifact writers/readers ------------------------------------------


def write_profiles_tsv(path, profiles) -> None:
    """``id<TAB>word1 word2 ...`` with words sorted for determinism."""
    write_tsv(path, ((p.id, " ".join(sorted(p.words))) for p in profiles))


def read_profiles_tsv(path) -> list[Profile]:
    profiles = []
    try:
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line.strip():
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise ParseError(path, line_no, f"expected 2 tab-separated fields, got {len(parts)}")
                profiles.append(Profile(id=parts[0], words=frozenset(parts[1].split())))
    except (OSError, UnicodeDecodeError) as exc:
        raise ResourceError(f"cannot read profiles {path}: {exc}") from exc
    return profiles


def write_sims_tsv(path, matrix: SimilarityMatrix) -> None:
    """``id_i<TAB>id_j<TAB>sim`` for i < j, fixed 6-decimal formatting."""
    write_tsv(path, ((a, b, SIM_FORMAT.format(s)) for a, b, s in matrix.iter_pairs()))


def read_sims_tsv(path) -> SimilarityMatrix:
    """Rebuild a :class:`SimilarityMatrix` from its TSV; ids keep their
    order of first appearance."""
    ids: list[str] = []
    index: dict[str, int] = {}
    rows: list[tuple[int, int, float]] = []
    try:
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line.strip():
                    continue
                parts = line.split("\t")
                if len(parts) != 3:
                    raise ParseError(path, line_no, f"expected 3 tab-separated fields, got {len(parts)}")
                a, b, raw = parts
                for pid in (a, b):
                    if pid not in index:
                        index[pid] = len(ids)
                        ids.append(pid)
                try:
                    value = float(raw)
                except ValueError:
                    raise ParseError(path, line_no, f"similarity is not a number: {raw!r}") from None
                if not 0.0 <= value <= 1.0:
                    raise ParseError(path, line_no, f"similarity out of range: {value}")
                rows.append((index[a], index[b], value))
    except (OSError, UnicodeDecodeError) as exc:
        raise ResourceError(f"cannot read similarity matrix {path}: {exc}") from exc

    n = len(ids)
    expected = n * (n - 1) // 2
    if len(rows) != expected:
        raise ParseError(path, 0, f"expected {expected} pair rows for {n} ids, found {len(rows)}")
    condensed = np.full(expected, np.nan, dtype=np.float32)
    for i, j, value in rows:
        if i == j:
            raise ParseError(path, 0, f"self-pair for id {ids[i]!r}")
        if i > j:
            i, j = j, i
        k = n * i - i * (i + 1) // 2 + (j - i - 1)
        if not np.isnan(condensed[k]):
            raise ParseError(path, 0, f"duplicate pair ({ids[i]}, {ids[j]})")
        condensed[k] = value
    return SimilarityMatrix(ids, condensed)


def write_clusters_tsv(path, clustering: Clustering, id_order) -> None:
    """``profile_id<TAB>cluster_index<TAB>medoid_id`` in matrix id order."""
    write_tsv(
        path,
        (
            (pid, clustering.assignment[pid], clustering.medoids[clustering.assignment[pid]])
            for pid in id_order
        ),
    )


def read_clusters_tsv(path) -> Clustering:
    assignment: dict[str, int] = {}
    medoids: dict[int, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line.strip():
                    continue
                parts = line.split("\t")
                if len(parts) != 3:
                    raise ParseError(path, line_no, f"expected 3 tab-separated fields, got {len(parts)}")
                pid, raw_cluster, medoid = parts
                try:
                    cluster = int(raw_cluster)
                except ValueError:
                    raise ParseError(path, line_no, f"cluster index is not an integer: {raw_cluster!r}") from None
                if pid in assignment:
                    raise ParseError(path, line_no, f"duplicate profile id {pid!r}")
                assignment[pid] = cluster
                if medoids.setdefault(cluster, medoid) != medoid:
                    raise ParseError(path, line_no, f"conflicting medoid for cluster {cluster}")
    except (OSError, UnicodeDecodeError) as exc:
        raise ResourceError(f"cannot read clusters {path}: {exc}") from exc
    if not assignment:
        raise ParseError(path, 0, "no cluster rows")
    k = max(medoids) + 1
    if sorted(medoids) != list(range(k)):
        raise ParseError(path, 0, "cluster indices are not contiguous from 0")
    return Clustering(
        k=k,
        medoids=tuple(medoids[c] for c in range(k)),
        assignment=assignment,
        cost=float("nan"),
        seed=0,
        iterations=0,
    )


def write_recommendations_tsv(path, recommendations) -> None:
    """``target<TAB>rank<TAB>candidate<TAB>sim`` rows, rank starting at 1."""

    def rows():
        for rec in recommendations:
            for rank, (candidate, sim) in enumerate(rec.items, start=1):
                yield rec.target, rank, candidate, SIM_FORMAT.format(sim)

    write_tsv(path, rows())
