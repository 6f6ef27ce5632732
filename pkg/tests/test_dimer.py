import json

import pytest

from knotdimer import (
    CrossCheckError,
    build_bot,
    dehn_weighting,
    determinant_report,
    enumerate_matchings,
    forcing_analysis,
    kasteleyn_determinant,
    kasteleyn_weighting,
    knot_determinant,
    partition_function,
)
from knotdimer import dimer
from knotdimer.dimer import matchings_to_json, signed_weight
from knotdimer.diagram import faces_adjacent_to_unbounded

from conftest import diagram, knot_entries
from knotdimer import get_fixture
from helpers import perm_sign


def brute_matchings(g):
    """Perfect matchings by trying every permutation."""
    import itertools

    out = []
    for perm in itertools.permutations(g.faces):
        m = tuple(zip(g.crossings, perm))
        if all(g.has_edge(x, f) for x, f in m):
            out.append(tuple(sorted(m)))
    return sorted(out)


def test_trefoil_matchings(trefoil):
    g = build_bot(trefoil)
    ms = enumerate_matchings(g)
    assert len(ms) == 3
    assert ms == sorted(ms)
    for m in ms:
        assert sorted(x for x, _ in m) == list(g.crossings)
        assert sorted(f for _, f in m) == list(g.faces)


@pytest.mark.parametrize("name", ["4_1", "5_2", "6_3", "7_7", "8_20", "4_1-perturbed"])
def test_matchings_against_permutations(name):
    g = build_bot(diagram(name))
    assert enumerate_matchings(g) == brute_matchings(g)


def test_unbalanced_graph_has_no_matchings(fig8):
    g = build_bot(fig8)
    sub = g.induced(g.crossings[1:], g.faces)
    assert enumerate_matchings(sub) == []
    assert partition_function(sub) == 0
    with pytest.raises(ValueError, match="not square"):
        kasteleyn_determinant(sub)


def test_partition_function_is_leibniz_sum(fig8):
    g = build_bot(fig8)
    row = {x: i for i, x in enumerate(g.crossings)}
    col = {f: j for j, f in enumerate(g.faces)}
    total = 0
    for m in enumerate_matchings(g):
        perm = [0] * 4
        w = 1
        for x, f in m:
            perm[row[x]] = col[f]
            w *= g.mu[(x, f)]
        total += perm_sign(perm) * w
    assert total == kasteleyn_determinant(g)
    assert abs(total) == 5
    # the determinant is Z(mu * eps); with eps = mu every covering counts +1
    assert partition_function(g, signed_weight(g, dehn_weighting(g))) == 5


@pytest.mark.parametrize("entry", knot_entries(), ids=lambda e: e.name)
def test_determinant_modes(entry):
    d = entry.diagram()
    det = entry.golden("determinant")
    rep = determinant_report(d)
    assert rep.determinant == det
    assert rep.matrix_determinant == rep.fox_determinant == det
    assert abs(rep.partition_sum) == det
    if entry.alternating:
        assert rep.matchings == det
        assert rep.dehn_is_kasteleyn
    assert knot_determinant(d, "fast") == det
    for omit in faces_adjacent_to_unbounded(d):
        assert knot_determinant(d, "crosscheck", omit) == det


def test_signed_partition_with_constructed_weighting():
    for name in ("8_19", "8_20", "8_21"):
        g = build_bot(diagram(name))
        for seed in range(3):
            eps = kasteleyn_weighting(g, seed)
            z = partition_function(g, signed_weight(g, eps))
            assert abs(z) == abs(kasteleyn_determinant(g))


def test_crosscheck_failure_is_reported(fig8, monkeypatch):
    monkeypatch.setattr(dimer, "bareiss_det", lambda m: 4)
    with pytest.raises(CrossCheckError, match="Fox"):
        determinant_report(fig8)


def test_unknown_mode(fig8):
    with pytest.raises(ValueError):
        determinant_report(fig8, "slow")


def test_forcing_analysis(trefoil):
    g = build_bot(trefoil)
    rep = forcing_analysis(g)
    assert rep.total == 3
    assert sum(rep.edge_counts.values()) == 3 * 3
    for e in rep.forcing_edges:
        assert forcing_analysis(g, given=[e]).total == 1
    pinned = forcing_analysis(g, given=rep.forcing_edges[:1])
    assert len(pinned.forced_edges) == 3
    data = rep.to_dict()
    assert data["matchings"] == 3
    json.dumps(data)


def test_matchings_json(trefoil):
    ms = enumerate_matchings(build_bot(trefoil))
    back = json.loads(matchings_to_json(ms))
    assert [tuple(tuple(k) for k in m) for m in back] == ms


@pytest.mark.parametrize("entry", [e for e in knot_entries() if e.alternating], ids=lambda e: e.name)
def test_mu_squared_counts_coverings(entry):
    g = build_bot(entry.diagram())
    sq = {k: v * v for k, v in g.mu.items()}
    assert partition_function(g, sq) == partition_function(g) == entry.golden("matchings")


def test_edgeless_square_graph():
    g = build_bot(diagram("4_1"))
    empty = g.induced(g.crossings, g.faces)
    for e in g.edges:
        empty = empty.without_edge(e.key)
    assert enumerate_matchings(empty) == []
    assert kasteleyn_determinant(empty) == 0


@pytest.mark.parametrize("name", ["5_2", "6_3", "8_20"])
def test_edge_deletion_never_adds_matchings(name):
    g = build_bot(diagram(name))
    total = len(enumerate_matchings(g))
    for e in g.edges:
        assert len(enumerate_matchings(g.without_edge(e.key))) <= total


def test_unique_matching_edges_all_forcing(trefoil):
    g = build_bot(trefoil)
    rep = forcing_analysis(g)
    e = rep.forcing_edges[0]
    # pin down the single covering through e; the pair-deleted graph then
    # has exactly one covering and every one of its edges is forcing
    (m,) = [m for m in enumerate_matchings(g) if e in m]
    sub = g.induced([x for x in g.crossings if x != e[0]], [f for f in g.faces if f != e[1]])
    (sub_m,) = enumerate_matchings(sub)
    assert set(forcing_analysis(sub).forcing_edges) == set(sub_m)
    assert len(forcing_analysis(g, given=[e]).forced_edges) == len(m)


def test_edge_in_no_matching_not_forcing():
    g = build_bot(diagram("8_8"))
    rep = forcing_analysis(g)
    zero = [k for k, c in rep.edge_counts.items() if c == 0]
    assert all(k not in rep.forcing_edges for k in zero)


def test_eight_eight_subgraph_forced_edges():
    e = get_fixture("8_8")
    info = e.extra["induced_subgraph"]
    g = build_bot(e.diagram(), info["omitted_face"])
    sub = g.induced([x for x in g.crossings if x != info["crossing"]],
                    [f for f in g.faces if f != info["face"]])
    rep = forcing_analysis(sub)
    assert rep.total == info["matchings"] == 2
    assert len(rep.forced_edges) == info["forced_edges"] == 5
