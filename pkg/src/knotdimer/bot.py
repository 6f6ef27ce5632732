"""Balanced overlaid Tait (BOT) graphs and Kasteleyn weightings on them.

A BOT graph has one vertex per crossing, one vertex per bounded face
except an omitted face adjacent to the unbounded one, and an edge for every
crossing/face incidence, weighted by the sign that face carries in the Dehn
relation of that crossing.

The embedding is inherited from the diagram.  The edge joining crossing
``x`` to the face at its corner ``i`` runs inside that corner, so the
diagram edges at slots ``i`` and ``i + 1`` flank it.  Those diagram edges
("quads" below) are the cells of the overlaid Tait graph that includes every
face vertex; regions of the plane cut out by any subgraph are unions of
quads, which is how bounded and unbounded faces of subgraphs are told
apart without coordinates.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

from .coloring import DEHN_CORNER_SIGNS
from .diagram import KnotDiagram, faces_adjacent_to_unbounded
from .errors import DiagramError, WeightingError

EdgeKey = tuple[int, int]  # (crossing, face)
Node = tuple[str, int]  # ("c", crossing) or ("f", face)


class Edge(NamedTuple):
    crossing: int
    face: int
    corner: int
    sign: int

    @property
    def key(self) -> EdgeKey:
        return (self.crossing, self.face)


class Dart(NamedTuple):
    tail: Node
    head: Node
    edge: EdgeKey


@dataclass(frozen=True)
class GraphFace:
    darts: tuple[Dart, ...]
    bounded: bool
    component: int
    region: int
    enclosed: int = 0  # vertices of other components lying inside

    @property
    def edges(self) -> tuple[EdgeKey, ...]:
        return tuple(d.edge for d in self.darts)

    def __len__(self):
        return len(self.darts)


class _UnionFind:
    def __init__(self, items):
        self.parent = {i: i for i in items}

    def find(self, i):
        p = self.parent
        while p[i] != i:
            p[i] = p[p[i]]
            i = p[i]
        return i

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)


@dataclass(frozen=True)
class BotGraph:
    diagram: KnotDiagram
    omitted_face: int
    crossings: tuple[int, ...]
    faces: tuple[int, ...]
    edges: tuple[Edge, ...]

    # -- basic structure ---------------------------------------------------

    @cached_property
    def edge_map(self) -> dict[EdgeKey, Edge]:
        return {e.key: e for e in self.edges}

    @property
    def mu(self) -> dict[EdgeKey, int]:
        return {e.key: e.sign for e in self.edges}

    @property
    def nodes(self) -> list[Node]:
        return [("c", x) for x in self.crossings] + [("f", f) for f in self.faces]

    @cached_property
    def rotation(self) -> dict[Node, tuple[Node, ...]]:
        """Counterclockwise neighbour order around every vertex."""
        rot: dict[Node, tuple[Node, ...]] = {}
        present = self.edge_map
        for x in self.crossings:
            rot[("c", x)] = tuple(
                ("f", e.face) for e in sorted((e for e in self.edges if e.crossing == x), key=lambda e: e.corner)
            )
        for f in self.faces:
            # face tracing runs clockwise around a bounded face
            around = [cx for cx, _ in reversed(self.diagram.faces[f]) if (cx, f) in present]
            rot[("f", f)] = tuple(("c", cx) for cx in around)
        return rot

    def degree(self, node: Node) -> int:
        return len(self.rotation[node])

    def has_edge(self, x: int, f: int) -> bool:
        return (x, f) in self.edge_map

    def weight_matrix(self, weight: Mapping[EdgeKey, int] | None = None) -> list[list[int]]:
        """Rows are crossings, columns faces, both in id order."""
        w = self.mu if weight is None else weight
        return [[w[(x, f)] if (x, f) in self.edge_map else 0 for f in self.faces] for x in self.crossings]

    def induced(self, crossings: Iterable[int], faces: Iterable[int]) -> "BotGraph":
        cs, fs = set(crossings), set(faces)
        if not cs <= set(self.crossings) or not fs <= set(self.faces):
            raise KeyError("subgraph vertices must belong to the graph")
        return BotGraph(
            self.diagram,
            self.omitted_face,
            tuple(x for x in self.crossings if x in cs),
            tuple(f for f in self.faces if f in fs),
            tuple(e for e in self.edges if e.crossing in cs and e.face in fs),
        )

    def without_edge(self, key: EdgeKey) -> "BotGraph":
        if key not in self.edge_map:
            raise KeyError(f"edge {key} not in graph")
        return BotGraph(self.diagram, self.omitted_face, self.crossings, self.faces,
                        tuple(e for e in self.edges if e.key != key))

    # -- embedding ---------------------------------------------------------

    def _edge_quads(self, e: Edge) -> tuple[int, int]:
        """(quad clockwise of the edge, quad counterclockwise of it), as
        seen from the crossing end."""
        t = self.diagram.crossing(e.crossing)
        return t[e.corner], t[(e.corner + 1) % 4]

    def _left_quad(self, dart: Dart) -> int:
        e = self.edge_map[dart.edge]
        right, left = self._edge_quads(e)
        return left if dart.tail[0] == "c" else right

    def _node_quad(self, node: Node) -> int:
        kind, i = node
        if kind == "c":
            return self.diagram.crossing(i)[0]
        x, c = self.diagram.faces[i][0]
        return self.diagram.crossing(x)[(c + 1) % 4]

    def _node_quads(self, node: Node) -> set[int]:
        kind, i = node
        if kind == "c":
            return set(self.diagram.crossing(i))
        return {self.diagram.crossing(x)[(c + 1) % 4] for x, c in self.diagram.faces[i]}

    def _outer_quad(self) -> int:
        d = self.diagram
        x, c = d.faces[d.unbounded_face][0]
        return d.crossing(x)[(c + 1) % 4]

    def _regions(self, walls: Iterable[EdgeKey]) -> _UnionFind:
        """Union-find of quads: two quads merge unless separated by a wall."""
        d = self.diagram
        walls = set(walls)
        uf = _UnionFind(d.edges)
        for x in range(d.n_crossings):
            t = d.crossing(x)
            for i in range(4):
                if (x, d.corner_face[(x, i)]) not in walls:
                    uf.union(t[i], t[(i + 1) % 4])
        return uf

    @cached_property
    def components(self) -> list[list[Node]]:
        seen: set[Node] = set()
        comps = []
        for start in self.nodes:
            if start in seen:
                continue
            comp = []
            queue = deque([start])
            seen.add(start)
            while queue:
                v = queue.popleft()
                comp.append(v)
                for u in self.rotation[v]:
                    if u not in seen:
                        seen.add(u)
                        queue.append(u)
            comps.append(comp)
        return comps

    @property
    def is_connected(self) -> bool:
        return len(self.components) <= 1

    @cached_property
    def faces_by_component(self) -> list[list[GraphFace]]:
        """Faces of each connected component, traced on its own rotation
        system.  For every component exactly one face is unbounded."""
        out = []
        comps = self.components
        for ci, comp in enumerate(comps):
            members = set(comp)
            walls = [e.key for e in self.edges if ("c", e.crossing) in members]
            uf = self._regions(walls)
            outer = uf.find(self._outer_quad())
            inside: dict[int, int] = {}
            for cj, other in enumerate(comps):
                if cj != ci:
                    r = uf.find(self._node_quad(other[0]))
                    inside[r] = inside.get(r, 0) + len(other)
            walks = _trace_walks(self.rotation, comp)
            faces = []
            for walk in walks:
                r = uf.find(self._left_quad(walk[0]))
                faces.append(GraphFace(tuple(walk), r != outer, ci, r, inside.get(r, 0)))
            if not walks:
                faces.append(GraphFace((), False, ci, outer, 0))
            out.append(faces)
        return out

    def euler_characteristics(self) -> list[int]:
        out = []
        for comp, faces in zip(self.components, self.faces_by_component):
            members = set(comp)
            ne = sum(1 for e in self.edges if ("c", e.crossing) in members)
            out.append(len(comp) - ne + len(faces))
        return out

    def on_common_face(self, a: Node, b: Node) -> bool:
        """Whether some region of the plane minus the graph has both
        vertices on its boundary."""
        uf = self._regions(e.key for e in self.edges)
        ra = {uf.find(q) for q in self._node_quads(a)}
        rb = {uf.find(q) for q in self._node_quads(b)}
        return bool(ra & rb)

    # -- export --------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "omitted_face": self.omitted_face,
            "unbounded_face": self.diagram.unbounded_face,
            "crossing_vertices": list(self.crossings),
            "face_vertices": list(self.faces),
            "edges": [{"crossing": e.crossing, "face": e.face, "corner": e.corner, "mu": e.sign}
                      for e in self.edges],
            "rotation": {f"{k[0]}{k[1]}": [f"{n[0]}{n[1]}" for n in v]
                         for k, v in sorted(self.rotation.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_dot(self, weight: Mapping[EdgeKey, int] | None = None) -> str:
        w = self.mu if weight is None else weight
        lines = ["graph bot {", "  node [shape=circle, label=\"\", width=0.2];"]
        for x in self.crossings:
            lines.append(f'  c{x} [style=filled, fillcolor=black, xlabel="c{x}"];')
        for f in self.faces:
            lines.append(f'  f{f} [style=solid, xlabel="f{f}"];')
        for e in self.edges:
            style = ' [color="black:invis:black"]' if w[e.key] < 0 else ""
            lines.append(f"  c{e.crossing} -- f{e.face}{style};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _trace_walks(rotation, comp) -> list[list[Dart]]:
    members = set(comp)
    darts = [Dart(v, u, _key(v, u)) for v in comp for u in rotation[v] if v in members]
    seen: set[tuple[Node, Node]] = set()
    walks = []
    for start in darts:
        if (start.tail, start.head) in seen:
            continue
        walk = []
        d = start
        while (d.tail, d.head) not in seen:
            seen.add((d.tail, d.head))
            walk.append(d)
            rot = rotation[d.head]
            i = rot.index(d.tail)
            nxt = rot[(i - 1) % len(rot)]
            d = Dart(d.head, nxt, _key(d.head, nxt))
        walks.append(walk)
    return walks


def _key(a: Node, b: Node) -> EdgeKey:
    return (a[1], b[1]) if a[0] == "c" else (b[1], a[1])


def build_bot(d: KnotDiagram, omitted: int | None = None) -> BotGraph:
    adjacent = faces_adjacent_to_unbounded(d)
    if omitted is None:
        omitted = adjacent[0]
    if omitted not in adjacent:
        raise DiagramError(f"omitted face {omitted} must be bounded and adjacent to the unbounded face")
    keep = [f for f in d.bounded_faces if f != omitted]
    keep_set = set(keep)
    edges = []
    for x in range(d.n_crossings):
        for i in range(4):
            f = d.corner_face[(x, i)]
            if f in keep_set:
                edges.append(Edge(x, f, i, DEHN_CORNER_SIGNS[i]))
    edges.sort(key=lambda e: e.key)
    return BotGraph(d, omitted, tuple(range(d.n_crossings)), tuple(keep), tuple(edges))


def graph_faces(g: BotGraph, include_unbounded: bool = False) -> list[GraphFace]:
    faces = [f for comp in g.faces_by_component for f in comp]
    return faces if include_unbounded else [f for f in faces if f.bounded]


# -- Kasteleyn weightings --------------------------------------------------------


@dataclass(frozen=True)
class KasteleynWeighting:
    signs: Mapping[EdgeKey, int]

    def __getitem__(self, key: EdgeKey) -> int:
        return self.signs[key]

    def __contains__(self, key) -> bool:
        return key in self.signs

    def restrict(self, g: BotGraph) -> "KasteleynWeighting":
        return KasteleynWeighting({e.key: self.signs[e.key] for e in g.edges})

    def times(self, weight: Mapping[EdgeKey, int]) -> dict[EdgeKey, int]:
        return {k: v * weight[k] for k, v in self.signs.items() if k in weight}


def dehn_weighting(g: BotGraph) -> KasteleynWeighting:
    return KasteleynWeighting(g.mu)


def face_parity_target(face: GraphFace) -> int:
    """Required parity of the number of -1 darts on a bounded face.

    ``len/2 - 1`` is the usual rule (odd for 0 mod 4, even for 2 mod 4).
    Vertices of other components enclosed by the face shift it, which keeps
    the rule equivalent to the cycle condition on disconnected subgraphs.
    """
    return (len(face) // 2 - 1 + face.enclosed) % 2


def kasteleyn_violations(g: BotGraph, eps: Mapping[EdgeKey, int] | KasteleynWeighting) -> list[GraphFace]:
    signs = eps.signs if isinstance(eps, KasteleynWeighting) else eps
    missing = [e.key for e in g.edges if e.key not in signs]
    if missing:
        raise WeightingError(f"weighting is missing edges {missing}")
    bad = []
    for face in graph_faces(g):
        neg = sum(1 for dart in face.darts if signs[dart.edge] < 0)
        if neg % 2 != face_parity_target(face):
            bad.append(face)
    return bad


def is_kasteleyn(g: BotGraph, eps) -> bool:
    return not kasteleyn_violations(g, eps)


def kasteleyn_weighting(g: BotGraph, seed: int | None = None) -> KasteleynWeighting:
    """Spanning-tree construction, run on each component separately.

    Tree edges get +1.  The remaining edges form a spanning tree of the
    dual rooted at the unbounded face; taking faces leaves-first, each
    face's edge towards the root is the last unset edge on that face and is
    signed to satisfy the face's parity.  ``seed`` randomizes the tree.
    """
    rng = random.Random(seed) if seed is not None else None
    signs: dict[EdgeKey, int] = {}
    for comp, faces in zip(g.components, g.faces_by_component):
        tree = _spanning_tree(g, comp, rng)
        for key in tree:
            signs[key] = 1
        dart_face = {}
        for fi, face in enumerate(faces):
            for dart in face.darts:
                dart_face[(dart.tail, dart.head)] = fi
        sides: dict[EdgeKey, list[int]] = {}
        for face_darts_index, face in enumerate(faces):
            for dart in face.darts:
                if dart.edge not in tree:
                    sides.setdefault(dart.edge, []).append(face_darts_index)
        dual: dict[int, list[tuple[EdgeKey, int]]] = {i: [] for i in range(len(faces))}
        for key, (a, b) in sides.items():
            dual[a].append((key, b))
            dual[b].append((key, a))
        root = next(i for i, f in enumerate(faces) if not f.bounded)
        parent_edge: dict[int, EdgeKey | None] = {root: None}
        order = [root]
        queue = deque([root])
        while queue:
            f = queue.popleft()
            for key, h in sorted(dual[f]):
                if h not in parent_edge:
                    parent_edge[h] = key
                    order.append(h)
                    queue.append(h)
        if len(order) != len(faces):
            raise WeightingError("dual of the cotree is not a spanning tree")
        for fi in reversed(order[1:]):
            face = faces[fi]
            key = parent_edge[fi]
            neg = sum(1 for dart in face.darts if dart.edge != key and signs[dart.edge] < 0)
            signs[key] = -1 if (neg + 1) % 2 == face_parity_target(face) else 1
    return KasteleynWeighting(signs)


def _spanning_tree(g: BotGraph, comp: list[Node], rng) -> set[EdgeKey]:
    start = comp[0] if rng is None else rng.choice(comp)
    seen = {start}
    tree = set()
    queue = deque([start])
    while queue:
        v = queue.popleft() if rng is None else queue.pop()
        nbrs = list(g.rotation[v])
        if rng is not None:
            rng.shuffle(nbrs)
        for u in nbrs:
            if u not in seen:
                seen.add(u)
                tree.add(_key(v, u))
                queue.append(u)
    return tree


def extend_weighting(g: BotGraph, eps: KasteleynWeighting, key: EdgeKey) -> KasteleynWeighting:
    """Sign a single extra edge ``key`` of ``g`` given a Kasteleyn
    weighting of ``g`` minus that edge: one of the two faces it borders
    decides the sign, and the other then agrees automatically."""
    if key not in g.edge_map:
        raise KeyError(f"edge {key} not in graph")
    signs = {k: v for k, v in eps.signs.items() if k != key}
    for face in graph_faces(g):
        if key in face.edges:
            neg = sum(1 for dart in face.darts if dart.edge != key and signs[dart.edge] < 0)
            signs[key] = -1 if (neg + 1) % 2 == face_parity_target(face) else 1
            break
    else:
        signs[key] = 1
    return KasteleynWeighting(signs)


def remove_pair(g: BotGraph, eps: KasteleynWeighting, v: int, w: int) -> tuple[BotGraph, KasteleynWeighting | None]:
    """Delete crossing ``v`` and face ``w``.

    The restriction of ``eps`` is returned when ``v`` and ``w`` are
    adjacent or share a face; otherwise ``None`` tells the caller to build
    a fresh weighting on the subgraph.
    """
    if v not in g.crossings:
        raise KeyError(f"crossing {v} is not a vertex")
    if w not in g.faces:
        raise KeyError(f"face {w} is not a vertex")
    sub = g.induced([x for x in g.crossings if x != v], [f for f in g.faces if f != w])
    if g.has_edge(v, w) or g.on_common_face(("c", v), ("f", w)):
        return sub, eps.restrict(sub)
    return sub, None
