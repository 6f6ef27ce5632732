"""Dimer coverings of BOT graphs, partition functions and determinants."""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import prod
from typing import Iterable, Mapping

from .bot import BotGraph, EdgeKey, KasteleynWeighting, build_bot, dehn_weighting, is_kasteleyn, kasteleyn_weighting
from .coloring import fox_matrix_full, fox_torsion_matrix
from .diagram import KnotDiagram
from .errors import CrossCheckError
from .linalg import bareiss_det

Matching = tuple[EdgeKey, ...]


def enumerate_matchings(g: BotGraph) -> list[Matching]:
    """All perfect matchings, each as a sorted tuple of edge keys.

    Backtracking that always branches on an uncovered vertex of minimum
    remaining degree.
    """
    if len(g.crossings) != len(g.faces):
        return []
    c_adj: dict[int, list[int]] = {x: [] for x in g.crossings}
    f_adj: dict[int, list[int]] = {f: [] for f in g.faces}
    for e in g.edges:
        c_adj[e.crossing].append(e.face)
        f_adj[e.face].append(e.crossing)
    free_c, free_f = set(g.crossings), set(g.faces)
    chosen: list[EdgeKey] = []
    out: list[Matching] = []

    def rec():
        if not free_c:
            out.append(tuple(sorted(chosen)))
            return
        best = None
        for x in free_c:
            opts = [f for f in c_adj[x] if f in free_f]
            if best is None or len(opts) < len(best[2]):
                best = ("c", x, opts)
                if not opts:
                    return
        for f in free_f:
            opts = [x for x in f_adj[f] if x in free_c]
            if len(opts) < len(best[2]):
                best = ("f", f, opts)
                if not opts:
                    return
        kind, v, opts = best
        for u in sorted(opts):
            x, f = (v, u) if kind == "c" else (u, v)
            free_c.discard(x)
            free_f.discard(f)
            chosen.append((x, f))
            rec()
            chosen.pop()
            free_c.add(x)
            free_f.add(f)

    rec()
    out.sort()
    return out


def partition_function(g: BotGraph, weight: Mapping[EdgeKey, int] | None = None,
                       matchings: Iterable[Matching] | None = None) -> int:
    """Sum over dimer coverings of the product of edge weights
    (all weights 1 when ``weight`` is None)."""
    ms = enumerate_matchings(g) if matchings is None else matchings
    if weight is None:
        return sum(1 for _ in ms)
    return sum(prod(weight[e] for e in m) for m in ms)


def kasteleyn_determinant(g: BotGraph, weight: Mapping[EdgeKey, int] | None = None) -> int:
    if len(g.crossings) != len(g.faces):
        raise ValueError(f"weight matrix is {len(g.crossings)}x{len(g.faces)}, not square")
    return bareiss_det(g.weight_matrix(weight))


def signed_weight(g: BotGraph, eps: KasteleynWeighting) -> dict[EdgeKey, int]:
    mu = g.mu
    return {k: eps[k] * mu[k] for k in mu}


def kasteleyn_for(g: BotGraph) -> KasteleynWeighting:
    """The Dehn weighting when it already is Kasteleyn (always so for
    alternating diagrams), otherwise a constructed one."""
    mu = dehn_weighting(g)
    if is_kasteleyn(g, mu):
        return mu
    return kasteleyn_weighting(g)


@dataclass(frozen=True)
class DeterminantReport:
    determinant: int
    partition_sum: int
    matrix_determinant: int | None
    fox_determinant: int | None
    matchings: int | None
    omitted_face: int
    dehn_is_kasteleyn: bool
    mode: str

    def to_dict(self) -> dict:
        return {
            "determinant": self.determinant,
            "partition_sum": self.partition_sum,
            "matrix_determinant": self.matrix_determinant,
            "fox_determinant": self.fox_determinant,
            "matchings": self.matchings,
            "omitted_face": self.omitted_face,
            "dehn_is_kasteleyn": self.dehn_is_kasteleyn,
            "mode": self.mode,
        }


def determinant_report(d: KnotDiagram, mode: str = "crosscheck", omitted: int | None = None) -> DeterminantReport:
    if mode not in ("crosscheck", "fast"):
        raise ValueError(f"unknown mode {mode!r}")
    g = build_bot(d, omitted)
    if mode == "fast":
        det = abs(kasteleyn_determinant(g))
        return DeterminantReport(det, det, det, None, None, g.omitted_face, False, mode)
    mu_ok = is_kasteleyn(g, dehn_weighting(g))
    eps = dehn_weighting(g) if mu_ok else kasteleyn_weighting(g)
    ms = enumerate_matchings(g)
    z = partition_function(g, signed_weight(g, eps), ms)
    det = abs(z)
    matrix_det = abs(kasteleyn_determinant(g))
    fox = abs(bareiss_det(fox_torsion_matrix(fox_matrix_full(d), 0, 0).entries))
    count = len(ms)
    problems = []
    if matrix_det != det:
        problems.append(f"|det weight matrix| = {matrix_det}")
    if fox != det:
        problems.append(f"|det Fox torsion| = {fox}")
    if d.alternating and count != det:
        problems.append(f"matching count = {count}")
    if d.alternating and not mu_ok:
        problems.append("Dehn weighting of an alternating diagram is not Kasteleyn")
    if problems:
        raise CrossCheckError(f"partition sum gives {det} but " + "; ".join(problems))
    return DeterminantReport(det, z, matrix_det, fox, count, g.omitted_face, mu_ok, mode)


def knot_determinant(d: KnotDiagram, mode: str = "crosscheck", omitted: int | None = None) -> int:
    return determinant_report(d, mode, omitted).determinant


@dataclass(frozen=True)
class ForcingReport:
    edge_counts: dict[EdgeKey, int]
    total: int

    @property
    def forcing_edges(self) -> list[EdgeKey]:
        return sorted(k for k, c in self.edge_counts.items() if c == 1)

    @property
    def forced_edges(self) -> list[EdgeKey]:
        """Edges present in every covering."""
        return sorted(k for k, c in self.edge_counts.items() if self.total and c == self.total)

    def to_dict(self) -> dict:
        return {
            "matchings": self.total,
            "edge_counts": [[k[0], k[1], c] for k, c in sorted(self.edge_counts.items())],
            "forcing_edges": [list(k) for k in self.forcing_edges],
            "forced_edges": [list(k) for k in self.forced_edges],
        }


def forcing_analysis(g: BotGraph, given: Iterable[EdgeKey] = (),
                     matchings: list[Matching] | None = None) -> ForcingReport:
    """Per-edge count of coverings containing it, among the coverings that
    contain every edge of ``given``."""
    ms = enumerate_matchings(g) if matchings is None else matchings
    need = set(given)
    ms = [m for m in ms if need <= set(m)]
    counts = {e.key: 0 for e in g.edges}
    for m in ms:
        for k in m:
            counts[k] += 1
    return ForcingReport(counts, len(ms))


def matchings_to_json(ms: list[Matching]) -> str:
    return json.dumps([[list(k) for k in m] for m in ms])
