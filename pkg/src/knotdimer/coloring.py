"""Fox and Dehn colorings, their presentation matrices, the conversion maps
between them, and the dihedral representations they induce.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from math import gcd, prod
from typing import Iterable, Sequence

from .diagram import KnotDiagram, faces_adjacent_to_unbounded
from .errors import ColoringError, CostCapError

# Dehn relation coefficient for each corner of a crossing.  Corners 0 and 1
# (either side of over-slot 1) lie on one side of the under-strand, corners
# 2 and 3 on the other; a face and its neighbour across the over-strand
# always carry the same sign.
DEHN_CORNER_SIGNS = (1, 1, -1, -1)

MAX_MODULUS = 16
MAX_CROSSINGS = 10

FOX_FULL = "fox_full"
DEHN_FULL = "dehn_full"
FOX_TORSION = "fox_torsion"
DEHN_TORSION = "dehn_torsion"


@dataclass(frozen=True)
class ColoringMatrix:
    entries: tuple[tuple[int, ...], ...]
    row_labels: tuple[int, ...]
    col_labels: tuple[int, ...]
    kind: str
    # bounded faces adjacent to the unbounded face (Dehn kinds only)
    droppable: frozenset[int] = field(default=frozenset(), compare=False)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_labels), len(self.col_labels)

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "row_labels": list(self.row_labels),
            "col_labels": list(self.col_labels),
            "entries": self.rows(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def fox_matrix_full(d: KnotDiagram) -> ColoringMatrix:
    k = d.n_crossings
    rows = []
    for x in range(k):
        row = [0] * len(d.arcs)
        row[d.over_arc(x)] += 2
        for a in d.under_arcs(x):
            row[a] -= 1
        rows.append(tuple(row))
    return ColoringMatrix(tuple(rows), tuple(range(k)), tuple(range(len(d.arcs))), FOX_FULL)


def dehn_coefficients(d: KnotDiagram, x: int) -> dict[int, int]:
    """Face -> coefficient of the Dehn relation at crossing ``x``, over all
    four corner faces (the unbounded face included)."""
    return {d.corner_face[(x, i)]: DEHN_CORNER_SIGNS[i] for i in range(4)}


def dehn_matrix_full(d: KnotDiagram) -> ColoringMatrix:
    cols = d.bounded_faces
    index = {f: j for j, f in enumerate(cols)}
    rows = []
    for x in range(d.n_crossings):
        row = [0] * len(cols)
        for f, c in dehn_coefficients(d, x).items():
            if f != d.unbounded_face:
                row[index[f]] += c
        rows.append(tuple(row))
    return ColoringMatrix(
        tuple(rows),
        tuple(range(d.n_crossings)),
        cols,
        DEHN_FULL,
        droppable=frozenset(faces_adjacent_to_unbounded(d)),
    )


def _drop(m: ColoringMatrix, row: int | None, col: int, kind: str) -> ColoringMatrix:
    if col not in m.col_labels:
        raise KeyError(f"unknown column label {col}")
    if row is not None and row not in m.row_labels:
        raise KeyError(f"unknown row label {row}")
    ri = [i for i, r in enumerate(m.row_labels) if r != row]
    ci = [j for j, c in enumerate(m.col_labels) if c != col]
    return ColoringMatrix(
        tuple(tuple(m.entries[i][j] for j in ci) for i in ri),
        tuple(m.row_labels[i] for i in ri),
        tuple(m.col_labels[j] for j in ci),
        kind,
        droppable=m.droppable,
    )


def fox_torsion_matrix(m: ColoringMatrix, drop_row: int, drop_col: int) -> ColoringMatrix:
    if m.kind != FOX_FULL:
        raise ValueError(f"expected a {FOX_FULL} matrix, got {m.kind}")
    return _drop(m, drop_row, drop_col, FOX_TORSION)


def dehn_torsion_matrix(m: ColoringMatrix, face: int) -> ColoringMatrix:
    if m.kind != DEHN_FULL:
        raise ValueError(f"expected a {DEHN_FULL} matrix, got {m.kind}")
    if face not in m.col_labels:
        raise KeyError(f"unknown or unbounded face {face}")
    if face not in m.droppable:
        raise ValueError(f"face {face} is not adjacent to the unbounded face")
    return _drop(m, None, face, DEHN_TORSION)


def default_omitted_face(d: KnotDiagram) -> int:
    return faces_adjacent_to_unbounded(d)[0]


# -- colorings ---------------------------------------------------------------


@dataclass(frozen=True)
class FoxColoring:
    modulus: int
    labels: tuple[int, ...]  # indexed by arc id

    def to_dict(self) -> dict:
        return {"kind": "fox", "modulus": self.modulus,
                "labels": {str(a): v for a, v in enumerate(self.labels)}}


@dataclass(frozen=True)
class DehnColoring:
    modulus: int
    labels: tuple[int, ...]  # indexed by face id; unbounded face is 0

    def to_dict(self) -> dict:
        return {"kind": "dehn", "modulus": self.modulus,
                "labels": {str(f): v for f, v in enumerate(self.labels)}}


def coloring_from_dict(data: dict, d: KnotDiagram | None = None):
    """Inverse of ``to_dict``.  Missing face labels in a Dehn map are
    rejected; the unbounded face may be omitted and defaults to 0."""
    n = int(data["modulus"])
    kind = data.get("kind", "fox")
    raw = {int(k): int(v) % n for k, v in data["labels"].items()}
    if kind == "fox":
        size = len(d.arcs) if d is not None else len(raw)
        try:
            return FoxColoring(n, tuple(raw[a] for a in range(size)))
        except KeyError as exc:
            raise ColoringError(f"missing label for arc {exc.args[0]}") from None
    if kind == "dehn":
        if d is not None:
            raw.setdefault(d.unbounded_face, 0)
            size = len(d.faces)
        else:
            size = len(raw)
        try:
            return DehnColoring(n, tuple(raw[f] for f in range(size)))
        except KeyError as exc:
            raise ColoringError(f"missing label for face {exc.args[0]}") from None
    raise ColoringError(f"unknown coloring kind {kind!r}")


def is_fox_coloring(d: KnotDiagram, c: FoxColoring) -> bool:
    n = c.modulus
    if len(c.labels) != len(d.arcs):
        return False
    for x in range(d.n_crossings):
        b, e = d.under_arcs(x)
        if (2 * c.labels[d.over_arc(x)] - c.labels[b] - c.labels[e]) % n:
            return False
    return True


def is_dehn_coloring(d: KnotDiagram, c: DehnColoring) -> bool:
    n = c.modulus
    if len(c.labels) != len(d.faces) or c.labels[d.unbounded_face] % n:
        return False
    for x in range(d.n_crossings):
        if sum(coef * c.labels[f] for f, coef in dehn_coefficients(d, x).items()) % n:
            return False
    return True


def trivial_fox(d: KnotDiagram, n: int, value: int) -> FoxColoring:
    return FoxColoring(n, (value % n,) * len(d.arcs))


def trivial_dehn(d: KnotDiagram, n: int, value: int) -> DehnColoring:
    return DehnColoring(n, tuple(value % n if s else 0 for s in d.shading))


def phi(c: DehnColoring, d: KnotDiagram) -> FoxColoring:
    """Label each arc by the sum of the two faces it separates."""
    if not is_dehn_coloring(d, c):
        raise ColoringError("input is not a Dehn coloring of this diagram")
    n = c.modulus
    out: dict[int, int] = {}
    for e in d.edges:
        f, g = d.edge_faces(e)
        a = d.arc_of_edge[e]
        v = (c.labels[f] + c.labels[g]) % n
        if out.setdefault(a, v) != v:
            raise ColoringError(f"arc {a} receives two different labels")
    return FoxColoring(n, tuple(out[a] for a in range(len(d.arcs))))


def face_paths(d: KnotDiagram, tree: str = "bfs", seed: int | None = None) -> dict[int, list[tuple[int, int]]]:
    """For each face, a path from the unbounded face as a list of
    ``(arc crossed, face entered)`` steps, read off a spanning tree of the
    face-adjacency graph.

    ``tree`` is ``"bfs"`` or ``"dfs"``; ``seed`` shuffles neighbour order so
    that different seeds give (generally) different trees.
    """
    nbrs: dict[int, list[tuple[int, int]]] = {f: [] for f in range(len(d.faces))}
    for e in d.edges:
        f, g = d.edge_faces(e)
        a = d.arc_of_edge[e]
        nbrs[f].append((a, g))
        nbrs[g].append((a, f))
    if seed is not None:
        rng = random.Random(seed)
        for lst in nbrs.values():
            rng.shuffle(lst)
    root = d.unbounded_face
    paths = {root: []}
    if tree == "bfs":
        queue = deque([root])
        while queue:
            f = queue.popleft()
            for a, g in nbrs[f]:
                if g not in paths:
                    paths[g] = paths[f] + [(a, g)]
                    queue.append(g)
    elif tree == "dfs":
        stack = [root]
        while stack:
            f = stack.pop()
            for a, g in reversed(nbrs[f]):
                if g not in paths:
                    paths[g] = paths[f] + [(a, g)]
                    stack.append(g)
    else:
        raise ValueError(f"unknown tree kind {tree!r}")
    return paths


def integrate(c: FoxColoring, d: KnotDiagram, tree: str = "bfs", seed: int | None = None) -> DehnColoring:
    """Recover the Dehn coloring: the unbounded face is 0 and crossing arc
    ``a`` from face ``g`` into face ``f`` sets ``f = C(a) - g``."""
    if not is_fox_coloring(d, c):
        raise ColoringError("input is not a Fox coloring of this diagram")
    n = c.modulus
    labels = [0] * len(d.faces)
    for f, path in face_paths(d, tree, seed).items():
        v = 0
        for a, _ in path:
            v = (c.labels[a] - v) % n
        labels[f] = v
    out = DehnColoring(n, tuple(labels))
    if not is_dehn_coloring(d, out):
        raise ColoringError("integration produced an inconsistent Dehn labelling")
    return out


# -- enumeration -------------------------------------------------------------


def _elimination_order(relations: Sequence[dict[int, int]], nvars: int) -> list[int]:
    order: list[int] = []
    placed: set[int] = set()
    remaining = set(range(nvars))
    while remaining:
        def score(v):
            closes = sum(1 for r in relations if v in r and set(r) - placed <= {v})
            touches = sum(1 for r in relations if v in r and placed & set(r))
            return (closes, touches, -v)
        v = max(remaining, key=score)
        order.append(v)
        placed.add(v)
        remaining.discard(v)
    return order


def solve_mod(relations: Sequence[dict[int, int]], nvars: int, n: int) -> list[tuple[int, ...]]:
    """All x in (Z/n)^nvars with sum(coef * x[var]) == 0 mod n for every
    relation, by exhaustive search with constraint checks, sorted
    lexicographically."""
    order = _elimination_order(relations, nvars)
    pos = {v: i for i, v in enumerate(order)}
    closing: list[list[dict[int, int]]] = [[] for _ in order]
    for r in relations:
        live = {v: c for v, c in r.items() if c % n}
        if live:
            closing[max(pos[v] for v in live)].append(live)
    x = [0] * nvars
    out = []

    def rec(depth):
        if depth == nvars:
            out.append(tuple(x))
            return
        var = order[depth]
        for val in range(n):
            x[var] = val
            if all(sum(c * x[v] for v, c in r.items()) % n == 0 for r in closing[depth]):
                rec(depth + 1)
        x[var] = 0

    rec(0)
    out.sort()
    return out


def enumerate_colorings(
    d: KnotDiagram,
    n: int,
    kind: str = "fox",
    max_modulus: int = MAX_MODULUS,
    max_crossings: int = MAX_CROSSINGS,
) -> list:
    if not 2 <= n <= max_modulus:
        raise ValueError(f"modulus {n} outside 2..{max_modulus}")
    if d.n_crossings > max_crossings:
        raise CostCapError(f"{d.n_crossings} crossings exceeds the enumeration cap {max_crossings}")
    if kind == "fox":
        m = fox_matrix_full(d)
        rels = [{j: v for j, v in enumerate(row) if v} for row in m.entries]
        return [FoxColoring(n, sol) for sol in solve_mod(rels, len(d.arcs), n)]
    if kind == "dehn":
        m = dehn_matrix_full(d)
        rels = [{j: v for j, v in enumerate(row) if v} for row in m.entries]
        cols = m.col_labels
        found = []
        for sol in solve_mod(rels, len(cols), n):
            labels = [0] * len(d.faces)
            for f, v in zip(cols, sol):
                labels[f] = v
            found.append(DehnColoring(n, tuple(labels)))
        found.sort(key=lambda c: c.labels)
        return found
    raise ValueError(f"unknown coloring kind {kind!r}")


def count_from_snf(s, n: int) -> int:
    """n * prod(gcd(s_i, n)).  ``s`` is a SmithData or a sequence of
    invariant factors of a torsion presentation matrix."""
    factors = getattr(s, "invariant_factors", s)
    return n * prod(gcd(int(f), n) for f in factors)


# -- dihedral representations --------------------------------------------------


@dataclass(frozen=True)
class DihedralElement:
    """``s^r alpha^e`` in the dihedral group of order 2n."""

    reflection: bool
    exponent: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "exponent", self.exponent % self.n)

    def __mul__(self, other: "DihedralElement") -> "DihedralElement":
        if self.n != other.n:
            raise ValueError("elements of different dihedral groups")
        e = (-self.exponent if other.reflection else self.exponent) + other.exponent
        return DihedralElement(self.reflection != other.reflection, e, self.n)

    def inverse(self) -> "DihedralElement":
        if self.reflection:
            return self
        return DihedralElement(False, -self.exponent, self.n)

    @classmethod
    def identity(cls, n: int) -> "DihedralElement":
        return cls(False, 0, n)

    def __str__(self):
        head = "s" if self.reflection else ""
        return f"{head}a^{self.exponent}" if head else f"a^{self.exponent}"


def dihedral_rep(c: FoxColoring, d: KnotDiagram) -> dict[int, DihedralElement]:
    """Send arc ``a`` to the reflection ``s alpha^C(a)`` and check every
    Wirtinger relation."""
    n = c.modulus
    rho = {a: DihedralElement(True, v, n) for a, v in enumerate(c.labels)}
    for x in range(d.n_crossings):
        o = rho[d.over_arc(x)]
        b, e = d.under_arcs(x)
        if o * rho[b] * o.inverse() != rho[e]:
            raise ColoringError(f"Wirtinger relation fails at crossing {x}")
    return rho


def evaluate_path(rho: dict[int, DihedralElement], path: Iterable[tuple[int, int]], n: int) -> DihedralElement:
    out = DihedralElement.identity(n)
    for a, _ in path:
        out = out * rho[a]
    return out


def dehn_rep(c: DehnColoring, d: KnotDiagram, n_paths: int = 2) -> dict[int, DihedralElement]:
    """Shaded faces go to reflections, unshaded faces to rotations.

    Checked against the Fox representation of ``phi(c)`` evaluated along
    ``n_paths`` different paths from the unbounded face to each face.
    """
    if not is_dehn_coloring(d, c):
        raise ColoringError("input is not a Dehn coloring of this diagram")
    n = c.modulus
    rho_t = {f: DihedralElement(d.is_shaded(f), c.labels[f], n) for f in range(len(d.faces))}
    rho = dihedral_rep(phi(c, d), d)
    systems = [face_paths(d, "bfs"), face_paths(d, "dfs")]
    systems += [face_paths(d, "bfs", seed=s) for s in range(max(0, n_paths - 2))]
    for paths in systems[:max(n_paths, 1)]:
        for f, path in paths.items():
            if evaluate_path(rho, path, n) != rho_t[f]:
                raise ColoringError(f"face {f}: path word disagrees with the Dehn representation")
    return rho_t
