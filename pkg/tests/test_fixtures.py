import json
import re
import shutil

import pytest

from knotdimer import load_catalog, minor_gcds
from knotdimer.fixtures import ENV_VAR, FixtureError, _load, catalog_path, get_fixture, knot_fixtures


REQUIRED = ["3_1", "4_1", "5_1", "5_2", "6_1", "6_2", "6_3", "7_1", "8_8", "9_42-matrix"]


def test_required_entries_present():
    names = {e.name for e in load_catalog()}
    assert set(REQUIRED) <= names


def test_every_golden_has_provenance():
    for e in load_catalog():
        for q, g in e.goldens.items():
            assert g["tag"] in ("PAPER", "TRIVIAL", "DERIVED"), (e.name, q)
            if g["tag"] == "DERIVED":
                assert g["oracle"]


def test_reference_goldens():
    assert get_fixture("4_1").golden("determinant") == 5
    assert get_fixture("4_1").golden("invariant_factors") == [1, 1, 1, 5]
    assert get_fixture("8_8").golden("matchings") == 25
    assert get_fixture("8_8").golden("invariant_factors") == [1] * 7 + [25]
    assert get_fixture("9_42-matrix").golden("determinant") == 7


def test_matrix_fixture():
    e = get_fixture("9_42-matrix")
    assert e.is_matrix and e.pd is None
    assert len(e.matrix) == 8
    assert minor_gcds(e.matrix)[-1] == 7
    with pytest.raises(FixtureError):
        e.diagram()


def test_knot_fixtures_filter():
    small = knot_fixtures(6)
    assert small and all(len(e.pd) <= 6 for e in small)
    assert all(not e.is_matrix for e in knot_fixtures())


def test_unknown_fixture():
    with pytest.raises(FixtureError, match="unknown"):
        get_fixture("10_161")


def test_env_override(tmp_path, monkeypatch):
    data = json.loads(catalog_path().read_text())
    data["knots"] = data["knots"][:2]
    data["matrices"] = []
    (tmp_path / "fixtures.json").write_text(json.dumps(data))
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    assert [e.name for e in load_catalog()] == ["3_1", "4_1"]
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "fixtures.json"))
    assert len(load_catalog()) == 2


@pytest.mark.parametrize("mutate", [
    lambda text: text[: len(text) // 2],
    lambda text: re.sub(r'"pd": "[^"]*"', '"pd": "X(1,5,4,2) X(3,1,4,6) X(5,3,6,2)"', text, count=1),
    lambda text: text.replace('"alternating": true', '"alternating": false', 1),
    lambda text: text.replace('"tag": "PAPER"', '"tag": "FOLKLORE"', 1),
    lambda text: text.replace('"knots"', '"knotz"', 1),
])
def test_corrupted_catalog(tmp_path, monkeypatch, mutate):
    target = tmp_path / "fixtures.json"
    shutil.copy(catalog_path(), target)
    target.write_text(mutate(target.read_text()))
    monkeypatch.setenv(ENV_VAR, str(target))
    _load.cache_clear()
    with pytest.raises(FixtureError, match="corrupted|provenance|alternating"):
        load_catalog()


def test_missing_catalog(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "nowhere.json"))
    with pytest.raises(FixtureError):
        load_catalog()
