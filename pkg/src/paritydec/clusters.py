"""Clusters, contours, interiors, and the 2D/3D correction steps.

Matched paths that share a location (a defect's two symmetry roles, or a
virtual's symmetry and chain roles) form closed clusters.  Each cluster's
contour — the mod-2 union of its paths' planar segments — encloses the
qubits to flip; the enclosed set is found by exact ray casting
(:meth:`SymmetryLayout.interior`).

In the spacetime setting each cluster is projected onto a single round
chosen by majority vote over its real defects, building a per-round
correction whose per-qubit XOR is the final (cumulative) correction.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .code import ParityCode, Stabilizer
from .graph_builders import MatchedPath, MatchingOutcome
from .symmetry import SymmetryLayout


class PostconditionError(AssertionError):
    """A correction failed its mandatory syndrome-consistency check."""


@dataclass
class Cluster:
    """A connected group of matched paths with its projected geometry."""

    paths: list[MatchedPath]
    defects: list[tuple[Stabilizer, int]]  # unique real defects, sorted
    contour: np.ndarray                    # bool over layout segments

    @property
    def t_star(self) -> int:
        """Majority round of the cluster's defects; ties pick the smallest."""
        counts = Counter(t for _, t in self.defects)
        best = max(counts.values())
        return min(t for t, c in counts.items() if c == best)


def _find(parent: dict, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def _union(parent: dict, x, y) -> None:
    rx, ry = _find(parent, x), _find(parent, y)
    if rx != ry:
        parent[ry] = rx


def build_clusters(layout: SymmetryLayout,
                   outcome: MatchingOutcome) -> list[Cluster]:
    """Group matched paths into clusters by shared (location, round) keys."""
    parent: dict = {}
    for path in outcome.paths:
        keys = list(dict.fromkeys(path.members))
        for key in keys:
            parent.setdefault(key, key)
        for a, b in zip(keys, keys[1:]):
            _union(parent, a, b)

    groups: dict = {}
    for path in outcome.paths:
        root = _find(parent, path.members[0])
        groups.setdefault(root, []).append(path)

    clusters = []
    for paths in groups.values():
        contour = np.zeros(layout.n_segments, dtype=bool)
        defects = set()
        for path in paths:
            contour ^= path.segments
            for loc, t in path.members:
                if isinstance(loc, Stabilizer):
                    defects.add((loc, t))
        assert defects, "cluster without any real defect"
        clusters.append(Cluster(paths, sorted(defects,
                                              key=lambda dt: (dt[1], dt[0].label)),
                                contour))
    clusters.sort(key=lambda cl: (cl.t_star, cl.defects[0][1],
                                  cl.defects[0][0].label))
    return clusters


def correction_2d(code: ParityCode, layout: SymmetryLayout,
                  outcome: MatchingOutcome,
                  syndrome: np.ndarray) -> np.ndarray:
    """Qubit flips enclosed by the matching's contours.

    Raises :class:`PostconditionError` unless the result reproduces the
    observed syndrome exactly.
    """
    contour = np.zeros(layout.n_segments, dtype=bool)
    for path in outcome.paths:
        contour ^= path.segments
    correction = layout.interior(contour)
    if not np.array_equal(code.syndrome(correction), syndrome):
        raise PostconditionError(
            "2D correction does not reproduce the observed syndrome")
    return correction


def project_cluster(layout: SymmetryLayout,
                    cluster: Cluster) -> tuple[int, np.ndarray]:
    """(majority round, spatial contour) of a spacetime cluster."""
    return cluster.t_star, cluster.contour


def correction_3d(code: ParityCode, layout: SymmetryLayout,
                  outcome: MatchingOutcome, rounds: int,
                  final_syndrome: np.ndarray, *, post_process: bool = False
                  ) -> tuple[np.ndarray, np.ndarray, int]:
    """Per-round corrections from projected clusters, plus their XOR.

    Returns ``(slices, cumulative, pp_cycles)`` where ``slices`` has shape
    (rounds, n_qubits).  Clusters containing only measurement errors have an
    empty projected contour and contribute nothing.  With ``post_process``
    the per-round sets are line-minimized independently; the cumulative
    correction must reproduce the final accumulated syndrome either way.
    """
    from .postprocess import post_process_slices

    slices = np.zeros((rounds, code.n_qubits), dtype=bool)
    for cluster in build_clusters(layout, outcome):
        interior = layout.interior(cluster.contour)
        if interior.any():
            slices[cluster.t_star] ^= interior
    pp_cycles = 0
    if post_process:
        slices, pp_cycles = post_process_slices(code, slices)
    cumulative = np.logical_xor.reduce(slices, axis=0)
    if not np.array_equal(code.syndrome(cumulative), final_syndrome):
        raise PostconditionError(
            "cumulative 3D correction does not reproduce the final syndrome")
    return slices, cumulative, pp_cycles
