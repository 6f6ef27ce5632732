"""Planar diagram codes and the combinatorial knot diagram built from them.

A PD code lists one 4-tuple of edge labels per crossing, read
counterclockwise starting from the incoming under-strand.  Slots 0 and 2
of a tuple are therefore the under-strand, slots 1 and 3 the over-strand.

Corner ``i`` of a crossing is the angular sector between slot ``i`` and
slot ``i + 1`` (mod 4), so corners 0..3 are in counterclockwise order.
Faces are traced as orbits of corners and every other structure (arcs,
shading, the BOT graph embedding) is expressed in terms of
``(crossing, corner)`` pairs.
"""

from __future__ import annotations

import json
import re
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property

from .errors import (
    ComponentError,
    DiagramError,
    LabelError,
    PDSyntaxError,
    PlanarityError,
    ReducednessError,
)

Corner = tuple[int, int]

_TOKEN = re.compile(r"X\s*[\(\[]\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*[\)\]]")
_WRAPPER = re.compile(r"^\s*PD\s*\[(.*)\]\s*$", re.S)


@dataclass(frozen=True)
class PDCode:
    crossings: tuple[tuple[int, int, int, int], ...]

    def __post_init__(self):
        _validate_labels(self.crossings)

    def __len__(self):
        return len(self.crossings)

    def __str__(self):
        return " ".join("X(%d,%d,%d,%d)" % t for t in self.crossings)

    @classmethod
    def from_tuples(cls, tuples) -> "PDCode":
        return cls(tuple(tuple(int(v) for v in t) for t in tuples))


def _validate_labels(crossings):
    if not crossings:
        raise PDSyntaxError("empty PD code: at least one crossing is required")
    for t in crossings:
        if len(t) != 4:
            raise PDSyntaxError(f"crossing {t!r} does not have four labels")
    counts = Counter(v for t in crossings for v in t)
    bad = sorted(v for v, c in counts.items() if c != 2)
    if bad:
        raise LabelError(
            "labels must appear exactly twice; offending: "
            + ", ".join(f"{v} (x{counts[v]})" for v in bad)
        )
    k = len(crossings)
    if set(counts) != set(range(1, 2 * k + 1)):
        raise LabelError(f"labels must be exactly 1..{2 * k}, got {sorted(counts)}")


def parse_pd(text: str) -> PDCode:
    """Parse ``X(4,2,5,1) X(8,6,1,5) ...`` (brackets or parentheses,
    optional ``PD[...]`` wrapper, commas or whitespace between crossings).
    """
    m = _WRAPPER.match(text)
    body = m.group(1) if m else text
    tuples = []
    pos = 0
    for tok in _TOKEN.finditer(body):
        gap = body[pos:tok.start()]
        if gap.strip(" \t\r\n,"):
            raise PDSyntaxError(f"unexpected text {gap.strip()!r} in PD code")
        tuples.append(tuple(int(g) for g in tok.groups()))
        pos = tok.end()
    tail = body[pos:]
    if tail.strip(" \t\r\n,"):
        raise PDSyntaxError(f"unexpected text {tail.strip()!r} in PD code")
    if not tuples:
        raise PDSyntaxError("no crossings found in PD code")
    return PDCode(tuple(tuples))


@dataclass(frozen=True)
class KnotDiagram:
    """Immutable combinatorial diagram.

    Crossing ids are PD positions (0-based).  Arc ids are assigned in order
    of the smallest edge label on the arc; face ids in order of discovery
    when corners are scanned crossing by crossing.
    """

    pd: PDCode
    faces: tuple[tuple[Corner, ...], ...]
    arcs: tuple[tuple[int, ...], ...]
    unbounded_face: int
    shading: tuple[bool, ...]
    alternating: bool

    @property
    def n_crossings(self) -> int:
        return len(self.pd.crossings)

    @property
    def edges(self) -> tuple[int, ...]:
        return tuple(range(1, 2 * self.n_crossings + 1))

    @cached_property
    def corner_face(self) -> dict[Corner, int]:
        return {c: f for f, corners in enumerate(self.faces) for c in corners}

    @cached_property
    def arc_of_edge(self) -> dict[int, int]:
        return {e: a for a, edges in enumerate(self.arcs) for e in edges}

    @cached_property
    def edge_ends(self) -> dict[int, tuple[tuple[int, int], tuple[int, int]]]:
        return _edge_ends(self.pd.crossings)

    @property
    def bounded_faces(self) -> tuple[int, ...]:
        return tuple(f for f in range(len(self.faces)) if f != self.unbounded_face)

    def crossing(self, x: int) -> tuple[int, int, int, int]:
        return self.pd.crossings[x]

    def over_arc(self, x: int) -> int:
        return self.arc_of_edge[self.pd.crossings[x][1]]

    def under_arcs(self, x: int) -> tuple[int, int]:
        t = self.pd.crossings[x]
        return self.arc_of_edge[t[0]], self.arc_of_edge[t[2]]

    def edge_faces(self, e: int) -> tuple[int, int]:
        """The two faces on either side of edge ``e``."""
        x, s = self.edge_ends[e][0]
        return self.corner_face[(x, (s - 1) % 4)], self.corner_face[(x, s)]

    def crossing_faces(self, x: int) -> tuple[int, int, int, int]:
        return tuple(self.corner_face[(x, i)] for i in range(4))

    def is_shaded(self, f: int) -> bool:
        return self.shading[f]

    def face_size(self, f: int) -> int:
        return len(self.faces[f])

    def with_unbounded(self, face: int) -> "KnotDiagram":
        return build_diagram(self.pd, unbounded=face)

    def to_dict(self) -> dict:
        return {
            "pd": [list(t) for t in self.pd.crossings],
            "crossings": self.n_crossings,
            "arcs": [list(a) for a in self.arcs],
            "faces": [[list(c) for c in f] for f in self.faces],
            "unbounded_face": self.unbounded_face,
            "shading": ["shaded" if s else "unshaded" for s in self.shading],
            "alternating": self.alternating,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _edge_ends(crossings):
    ends: dict[int, list[tuple[int, int]]] = {}
    for x, t in enumerate(crossings):
        for s, e in enumerate(t):
            ends.setdefault(e, []).append((x, s))
    return {e: (p[0], p[1]) for e, p in ends.items()}


def _other_end(ends, e, here):
    a, b = ends[e]
    return b if a == here else a


def _trace_faces(crossings, ends):
    # corner (x, i) -> leave along slot i+1 -> arrive at (y, j) -> corner (y, j)
    seen = set()
    faces = []
    for x in range(len(crossings)):
        for i in range(4):
            if (x, i) in seen:
                continue
            face = []
            c = (x, i)
            while c not in seen:
                seen.add(c)
                face.append(c)
                cx, ci = c
                slot = (ci + 1) % 4
                c = _other_end(ends, crossings[cx][slot], (cx, slot))
            faces.append(tuple(face))
    return faces


def _trace_arcs(crossings):
    parent = {}

    def find(e):
        while parent.setdefault(e, e) != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for t in crossings:
        for e in t:
            find(e)
        parent[find(t[1])] = find(t[3])
    groups: dict[int, list[int]] = {}
    for e in sorted(parent):
        groups.setdefault(find(e), []).append(e)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


def _walk_strand(crossings, ends):
    """Walk the knot from edge 1; return the over/under sequence and the
    set of edges visited."""
    start = ends[1][0]
    here = start
    visited = []
    passes = []
    while True:
        x, s = here
        passes.append(s % 2 == 1)
        out = (s + 2) % 4
        e = crossings[x][out]
        visited.append(e)
        here = _other_end(ends, e, (x, out))
        if here == start:
            break
    return passes, visited


def build_diagram(pd: PDCode, unbounded: int | None = None) -> KnotDiagram:
    crossings = pd.crossings
    k = len(crossings)
    ends = _edge_ends(crossings)

    passes, visited = _walk_strand(crossings, ends)
    if len(set(visited)) != 2 * k:
        raise ComponentError(
            f"strand walk covers {len(set(visited))} of {2 * k} edges; only knots are supported"
        )
    alternating = all(passes[i] != passes[(i + 1) % len(passes)] for i in range(len(passes)))

    faces = _trace_faces(crossings, ends)
    if k - 2 * k + len(faces) != 2:
        raise PlanarityError(
            f"Euler check failed: {k} crossings, {2 * k} edges, {len(faces)} faces"
        )
    corner_face = {c: f for f, cs in enumerate(faces) for c in cs}
    for x in range(k):
        around = [corner_face[(x, i)] for i in range(4)]
        if len(set(around)) != 4:
            raise ReducednessError(
                f"crossing {x} meets face {Counter(around).most_common(1)[0][0]} at two corners"
            )

    if unbounded is None:
        unbounded = max(range(len(faces)), key=lambda f: (len(faces[f]), -f))
    elif not 0 <= unbounded < len(faces):
        raise DiagramError(f"unknown face id {unbounded}")

    shading = _shade(faces, crossings, ends, corner_face, unbounded)
    return KnotDiagram(
        pd=pd,
        faces=tuple(faces),
        arcs=tuple(_trace_arcs(crossings)),
        unbounded_face=unbounded,
        shading=shading,
        alternating=alternating,
    )


def _shade(faces, crossings, ends, corner_face, unbounded):
    adj: dict[int, set[int]] = {f: set() for f in range(len(faces))}
    for e, ((x, s), _) in ends.items():
        f, g = corner_face[(x, (s - 1) % 4)], corner_face[(x, s)]
        adj[f].add(g)
        adj[g].add(f)
    shade = {unbounded: False}
    queue = deque([unbounded])
    while queue:
        f = queue.popleft()
        for g in sorted(adj[f]):
            if g not in shade:
                shade[g] = not shade[f]
                queue.append(g)
            elif shade[g] == shade[f]:
                raise PlanarityError("faces do not admit a checkerboard shading")
    return tuple(shade[f] for f in range(len(faces)))


def faces_adjacent_to_unbounded(d: KnotDiagram) -> list[int]:
    out = set()
    for e in d.edges:
        f, g = d.edge_faces(e)
        if f == d.unbounded_face:
            out.add(g)
        elif g == d.unbounded_face:
            out.add(f)
    out.discard(d.unbounded_face)
    return sorted(out)


def diagram_from_text(text: str, unbounded: int | None = None) -> KnotDiagram:
    return build_diagram(parse_pd(text), unbounded=unbounded)
