"""Curated catalog of knot diagrams and reference values.

The catalog ships as ``data/fixtures.json``.  Set ``KNOTDIMER_FIXTURES`` to
a directory containing a ``fixtures.json`` (or to the file itself) to use a
different one.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .diagram import KnotDiagram, PDCode, build_diagram, parse_pd
from .errors import KnotDimerError

ENV_VAR = "KNOTDIMER_FIXTURES"
TAGS = {"PAPER", "TRIVIAL", "DERIVED"}


class FixtureError(KnotDimerError):
    pass


@dataclass(frozen=True)
class FixtureEntry:
    name: str
    pd: PDCode | None = None
    matrix: tuple[tuple[int, ...], ...] | None = None
    alternating: bool | None = None
    goldens: dict = field(default_factory=dict, compare=False)
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def is_matrix(self) -> bool:
        return self.matrix is not None

    def golden(self, quantity: str):
        return self.goldens[quantity]["value"]

    def diagram(self, unbounded: int | None = None) -> KnotDiagram:
        if self.pd is None:
            raise FixtureError(f"fixture {self.name!r} is a raw matrix, not a diagram")
        return build_diagram(self.pd, unbounded=unbounded)


def catalog_path() -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        p = Path(override)
        return p / "fixtures.json" if p.is_dir() else p
    return Path(str(resources.files("knotdimer") / "data" / "fixtures.json"))


def _check_goldens(name, goldens):
    for q, g in goldens.items():
        if g.get("tag") not in TAGS:
            raise FixtureError(f"{name}: golden {q!r} has no provenance tag")
        if g["tag"] == "DERIVED" and not g.get("oracle"):
            raise FixtureError(f"{name}: derived golden {q!r} does not name its oracle")


@lru_cache(maxsize=None)
def _load(path: str) -> tuple[FixtureEntry, ...]:
    try:
        data = json.loads(Path(path).read_text())
        out = []
        for k in data["knots"]:
            _check_goldens(k["name"], k["goldens"])
            extra = {key: v for key, v in k.items() if key not in ("name", "pd", "alternating", "goldens")}
            pd = parse_pd(k["pd"])
            if build_diagram(pd).alternating != k["alternating"]:
                raise FixtureError(f"{k['name']}: alternating flag disagrees with the diagram")
            out.append(FixtureEntry(k["name"], pd, None, k["alternating"], k["goldens"], extra))
        for m in data.get("matrices", []):
            _check_goldens(m["name"], m["goldens"])
            mat = tuple(tuple(int(v) for v in row) for row in m["matrix"])
            out.append(FixtureEntry(m["name"], None, mat, None, m["goldens"], {"note": m.get("note", "")}))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise FixtureError(f"corrupted fixture file {path}: {exc}") from exc
    return tuple(out)


def load_catalog() -> list[FixtureEntry]:
    return list(_load(str(catalog_path())))


def get_fixture(name: str) -> FixtureEntry:
    for entry in load_catalog():
        if entry.name == name:
            return entry
    raise FixtureError(f"unknown fixture {name!r}")


def knot_fixtures(max_crossings: int | None = None) -> list[FixtureEntry]:
    return [e for e in load_catalog()
            if e.pd is not None and (max_crossings is None or len(e.pd) <= max_crossings)]
