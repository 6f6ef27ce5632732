"""Smith normal form of coloring presentation matrices, computed either by
integer elimination or graph-theoretically from BOT subgraph partition sums.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd, prod

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from .bot import BotGraph, KasteleynWeighting, build_bot, kasteleyn_weighting, remove_pair
from .coloring import ColoringMatrix, default_omitted_face, dehn_matrix_full, dehn_torsion_matrix
from .diagram import KnotDiagram
from .dimer import enumerate_matchings, kasteleyn_for, partition_function, signed_weight
from .errors import CostCapError, KnotDimerError

MATRIX_ORACLE = "matrix_oracle"
GRAPH_ALGORITHM = "graph_algorithm"

GRAPH_MAX_CROSSINGS = 8


@dataclass(frozen=True)
class SmithData:
    invariant_factors: tuple[int, ...]
    determinantal_divisors: tuple[int, ...]
    source: str
    # levels i whose d_i was computed directly (graph route only)
    computed_levels: tuple[int, ...] = field(default=(), compare=False)

    @property
    def determinant(self) -> int:
        return self.determinantal_divisors[-1] if self.determinantal_divisors else 1

    def nontrivial(self) -> tuple[int, ...]:
        return tuple(s for s in self.invariant_factors if s != 1)

    def to_dict(self) -> dict:
        return {
            "invariant_factors": list(self.invariant_factors),
            "determinantal_divisors": list(self.determinantal_divisors),
            "determinant": self.determinant,
            "cyclic": len(self.nontrivial()) <= 1,
            "method": self.source,
        }


def factors_from_divisors(divisors) -> tuple[int, ...]:
    out = []
    prev = 1
    for d in divisors:
        out.append(d // prev if prev else 0)
        prev = d
    return tuple(out)


def divisors_from_factors(factors) -> tuple[int, ...]:
    out = []
    acc = 1
    for s in factors:
        acc *= s
        out.append(acc)
    return tuple(out)


def _entries(m) -> list[list[int]]:
    if isinstance(m, ColoringMatrix):
        return m.rows()
    return [list(map(int, r)) for r in m]


def snf_matrix(m) -> SmithData:
    rows = _entries(m)
    if not rows or not rows[0]:
        return SmithData((), (), MATRIX_ORACLE)
    dm = DomainMatrix([[ZZ(v) for v in r] for r in rows], (len(rows), len(rows[0])), ZZ)
    factors = tuple(abs(int(s)) for s in invariant_factors(dm))
    return SmithData(factors, divisors_from_factors(factors), MATRIX_ORACLE)


def same_up_to_ones(a, b) -> bool:
    """Invariant factor lists agree after deleting 1s."""
    fa = getattr(a, "invariant_factors", a)
    fb = getattr(b, "invariant_factors", b)
    return [s for s in fa if s != 1] == [s for s in fb if s != 1]


def subgraph_minor(sub: BotGraph, eps: KasteleynWeighting | None = None, seed: int | None = None) -> int:
    """Signed partition sum of a BOT subgraph under a Kasteleyn weighting;
    equals the corresponding minor of the weight matrix up to sign."""
    if eps is None:
        eps = kasteleyn_weighting(sub, seed=seed)
    return partition_function(sub, signed_weight(sub, eps))


def determinantal_divisor_graph(g: BotGraph, i: int, eps: KasteleynWeighting | None = None,
                                stop_at_one: bool = True) -> int:
    """gcd of |d_{V'W'}| over all i-subsets V' of crossings and W' of faces.

    ``eps`` is a Kasteleyn weighting of ``g``; at the top two levels its
    restrictions are reused wherever deleting a pair keeps them valid.
    """
    k = len(g.crossings)
    if not 1 <= i <= k:
        raise ValueError(f"size {i} outside 1..{k}")
    if eps is None:
        eps = kasteleyn_for(g)
    if i == k:
        return abs(subgraph_minor(g, eps))
    out = 0
    for vs in combinations(g.crossings, k - i):
        for ws in combinations(g.faces, k - i):
            if i == k - 1:
                sub, sub_eps = remove_pair(g, eps, vs[0], ws[0])
            else:
                sub, sub_eps = g.induced(set(g.crossings) - set(vs), set(g.faces) - set(ws)), None
            if any(not sub.rotation[n] for n in sub.nodes):
                continue
            out = gcd(out, abs(subgraph_minor(sub, sub_eps)))
            if stop_at_one and out == 1:
                return 1
    return out


def snf_graph(d: KnotDiagram, omitted: int | None = None, max_crossings: int = GRAPH_MAX_CROSSINGS) -> SmithData:
    """Determinantal divisors from the top down, stopping at the first
    level equal to 1."""
    k = d.n_crossings
    if k > max_crossings:
        raise CostCapError(
            f"graph SNF on {k} crossings exceeds the cap of {max_crossings}; use snf_matrix instead"
        )
    g = build_bot(d, omitted)
    eps = kasteleyn_for(g)
    divisors = [0] * k
    computed = []
    i = k
    while i >= 1:
        divisors[i - 1] = determinantal_divisor_graph(g, i, eps)
        computed.append(i)
        if i == k and divisors[i - 1] == 0:
            raise KnotDimerError("top determinantal divisor vanished; torsion must be finite for a knot")
        if divisors[i - 1] == 1:
            break
        i -= 1
    for j in range(i - 1):
        divisors[j] = 1
    return SmithData(factors_from_divisors(divisors), tuple(divisors), GRAPH_ALGORITHM, tuple(computed))


@dataclass(frozen=True)
class CyclicityVerdict:
    status: str  # "cyclic_certified" | "bound" | "inconclusive"
    max_nontrivial: int | None
    forcing_set: tuple[tuple[int, int], ...]
    factors: tuple[int, ...] | None = None

    def to_dict(self) -> dict:
        return {"status": self.status, "max_nontrivial": self.max_nontrivial,
                "forcing_set": [list(e) for e in self.forcing_set],
                "factors": list(self.factors) if self.factors is not None else None}


def cyclicity_by_forcing(g: BotGraph, det: int) -> CyclicityVerdict:
    """Certify cyclic torsion from a forcing edge, or bound the number of
    nontrivial invariant factors by the size of a greedy forcing set.

    Deleting the endpoints of a forcing set of m edges leaves a subgraph
    with exactly one covering, so some (k-m)-minor is +-1 and d_{k-m} = 1;
    hence at most m factors exceed 1.
    """
    k = len(g.crossings)
    ms = enumerate_matchings(g)
    if not ms:
        return CyclicityVerdict("inconclusive", None, ())
    chosen: list[tuple[int, int]] = []
    pool = ms
    while len(pool) > 1:
        counts: dict[tuple[int, int], int] = {}
        for m in pool:
            for e in m:
                if e not in chosen:
                    counts[e] = counts.get(e, 0) + 1
        e = min(counts, key=lambda e: (counts[e], e))
        chosen.append(e)
        pool = [m for m in pool if e in m]
    if not chosen:
        # unique covering: any of its edges is forcing
        chosen = [ms[0][0]]
    m = len(chosen)
    if m == 1:
        return CyclicityVerdict("cyclic_certified", 1, tuple(chosen), (1,) * (k - 1) + (det,))
    if m < k:
        return CyclicityVerdict("bound", m, tuple(sorted(chosen)))
    return CyclicityVerdict("inconclusive", None, tuple(sorted(chosen)))


@dataclass(frozen=True)
class ModuleStructure:
    torsion: tuple[int, ...]
    determinant: int
    cyclic: bool
    smith: SmithData

    def __str__(self):
        return " ⊕ ".join([f"Z/{s}" for s in self.torsion] + ["Z"])

    def to_dict(self) -> dict:
        out = self.smith.to_dict()
        out["module"] = str(self)
        return out


def coloring_module_structure(d: KnotDiagram, method: str = "matrix", omitted: int | None = None) -> ModuleStructure:
    if method == "matrix":
        face = default_omitted_face(d) if omitted is None else omitted
        s = snf_matrix(dehn_torsion_matrix(dehn_matrix_full(d), face))
    elif method == "graph":
        s = snf_graph(d, omitted)
    else:
        raise ValueError(f"unknown method {method!r}")
    torsion = s.nontrivial()
    if 0 in torsion:
        raise KnotDimerError("torsion presentation has a zero invariant factor")
    return ModuleStructure(torsion, prod(torsion), len(torsion) <= 1, s)


def smith_to_json(s: SmithData) -> str:
    return json.dumps(s.to_dict())
