import itertools
import json

import pytest

from knotdimer import (
    DiagramError,
    KasteleynWeighting,
    WeightingError,
    build_bot,
    dehn_weighting,
    extend_weighting,
    graph_faces,
    is_kasteleyn,
    kasteleyn_weighting,
    remove_pair,
)
from knotdimer.bot import kasteleyn_violations
from knotdimer.diagram import faces_adjacent_to_unbounded

from conftest import diagram, knot_entries, small_entries
from helpers import adjacent_or_cofacial_pairs, matching_signs


def test_fig8_bot_shape(fig8):
    g = build_bot(fig8)
    assert len(g.crossings) == len(g.faces) == 4
    assert len(g.edges) == 4 * 4 - sum(1 for x in range(4) for f in fig8.crossing_faces(x)
                                       if f in (fig8.unbounded_face, g.omitted_face))
    assert g.is_connected
    assert g.euler_characteristics() == [2]
    for e in g.edges:
        assert g.mu[e.key] == e.sign in (1, -1)


def test_omitted_face_must_touch_unbounded(fig8):
    inner = [f for f in fig8.bounded_faces if f not in faces_adjacent_to_unbounded(fig8)]
    with pytest.raises(DiagramError):
        build_bot(fig8, inner[0])
    with pytest.raises(DiagramError):
        build_bot(fig8, fig8.unbounded_face)


def test_rotation_is_consistent(fig8):
    g = build_bot(fig8)
    for v, nbrs in g.rotation.items():
        for u in nbrs:
            assert v in g.rotation[u]
        assert len(nbrs) == g.degree(v)


@pytest.mark.parametrize("entry", knot_entries(), ids=lambda e: e.name)
def test_faces_and_euler(entry):
    d = entry.diagram()
    for omit in faces_adjacent_to_unbounded(d):
        g = build_bot(d, omit)
        assert g.euler_characteristics() == [2] * len(g.components)
        faces = graph_faces(g, include_unbounded=True)
        assert sum(1 for f in faces if not f.bounded) == len(g.components)
        assert sum(len(f) for f in faces) == 2 * len(g.edges)
        for f in faces:
            assert len(f) % 2 == 0


@pytest.mark.parametrize("entry", knot_entries(), ids=lambda e: e.name)
def test_dehn_weighting_kasteleyn_iff_alternating_here(entry):
    g = build_bot(entry.diagram())
    mu = dehn_weighting(g)
    if entry.alternating:
        assert is_kasteleyn(g, mu)
        assert len(matching_signs(g, mu)) == 1


@pytest.mark.parametrize("entry", knot_entries(), ids=lambda e: e.name)
def test_constructed_weighting(entry):
    g = build_bot(entry.diagram())
    for seed in (None, 1, 2):
        eps = kasteleyn_weighting(g, seed=seed)
        assert is_kasteleyn(g, eps)
        assert len(matching_signs(g, eps)) == 1


def test_nonalternating_dehn_weighting_can_fail():
    g = build_bot(diagram("8_20"))
    assert not is_kasteleyn(g, dehn_weighting(g))
    assert len(matching_signs(g, dehn_weighting(g))) == 2


@pytest.mark.parametrize("entry", small_entries(7), ids=lambda e: e.name)
def test_pair_removal_keeps_weighting(entry):
    g = build_bot(entry.diagram())
    eps = kasteleyn_weighting(g)
    for v, w in adjacent_or_cofacial_pairs(g):
        sub, sub_eps = remove_pair(g, eps, v, w)
        assert sub_eps is not None
        assert is_kasteleyn(sub, sub_eps)
        assert len(matching_signs(sub, sub_eps)) <= 1


def test_remove_far_pair_gives_none():
    g = build_bot(diagram("8_8"))
    eps = kasteleyn_weighting(g)
    far = [(v, w) for v in g.crossings for w in g.faces
           if not g.has_edge(v, w) and not g.on_common_face(("c", v), ("f", w))]
    assert far
    sub, sub_eps = remove_pair(g, eps, *far[0])
    assert sub_eps is None
    assert len(sub.crossings) == 7
    with pytest.raises(KeyError):
        remove_pair(g, eps, 99, g.faces[0])


@pytest.mark.parametrize("name", ["5_2", "6_2", "7_5", "4_1-perturbed"])
def test_two_pair_deletions_weighted(name):
    # deleting two pairs often disconnects the graph; the constructed
    # weighting must still give every covering the same determinant sign
    g = build_bot(diagram(name))
    disconnected = 0
    for vs in itertools.combinations(g.crossings, 2):
        for ws in itertools.combinations(g.faces, 2):
            sub = g.induced(set(g.crossings) - set(vs), set(g.faces) - set(ws))
            if any(not sub.rotation[n] for n in sub.nodes):
                continue
            disconnected += not sub.is_connected
            eps = kasteleyn_weighting(sub)
            assert is_kasteleyn(sub, eps)
            assert len(matching_signs(sub, eps)) <= 1
    assert disconnected


def test_extend_weighting(fig8):
    g = build_bot(fig8)
    eps = kasteleyn_weighting(g)
    for e in g.edges:
        h = g.without_edge(e.key)
        base = kasteleyn_weighting(h, seed=5)
        full = extend_weighting(g, base, e.key)
        assert is_kasteleyn(g, full)
    with pytest.raises(KeyError):
        extend_weighting(g, eps, (99, 99))


def test_missing_signs_rejected(fig8):
    g = build_bot(fig8)
    with pytest.raises(WeightingError):
        kasteleyn_violations(g, KasteleynWeighting({}))


def test_exports(fig8):
    g = build_bot(fig8)
    data = json.loads(g.to_json())
    assert data["omitted_face"] == g.omitted_face
    assert len(data["edges"]) == len(g.edges)
    assert data == json.loads(build_bot(fig8).to_json())
    dot = g.to_dot()
    assert dot.startswith("graph bot {")
    assert dot.count(" -- ") == len(g.edges)
    assert dot.count("black:invis:black") == sum(1 for e in g.edges if e.sign < 0)
