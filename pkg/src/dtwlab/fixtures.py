"""Stored example graphs, decompositions, witnesses, brambles and strategies.

The data directory defaults to the package's ``data`` folder and can be
overridden with the ``DTWLAB_DATA`` environment variable. Every file is
checked against the catalog checksum and its declared claims on load.
"""

from __future__ import annotations

import hashlib
import json
import os
import pathlib
from functools import lru_cache

from .decomp import DirectedTreeDecomposition, validate
from .digraph import Digraph
from .errors import DtwlabError
from .game import StrategyTree, validate_strategy_tree
from .minors import MinorWitness, verify_witness
from .obstructions import Bramble, bramble_order, validate_bramble


class FixtureError(DtwlabError):
    """Unknown fixture name or a fixture that fails its own checks."""


def data_dir() -> pathlib.Path:
    env = os.environ.get("DTWLAB_DATA")
    if env:
        return pathlib.Path(env)
    return pathlib.Path(__file__).resolve().parent / "data"


def _catalog(root: pathlib.Path) -> dict:
    path = root / "catalog.json"
    if not path.exists():
        raise FixtureError(f"no catalog.json in {root}")
    return json.loads(path.read_text())


def catalog() -> dict:
    return _catalog(data_dir())["fixtures"]


def list_fixtures() -> list[str]:
    return sorted(catalog())


def _raw(name: str) -> dict:
    root = data_dir()
    cat = _catalog(root)
    if name not in cat["fixtures"]:
        raise FixtureError(f"unknown fixture {name!r}")
    text = (root / f"{name}.json").read_text()
    want = cat["sha256"].get(name)
    if want is not None and hashlib.sha256(text.encode()).hexdigest() != want:
        raise FixtureError(f"checksum mismatch for fixture {name!r}")
    return json.loads(text)


def fixture_path(name: str) -> pathlib.Path:
    if name not in catalog():
        raise FixtureError(f"unknown fixture {name!r}")
    return data_dir() / f"{name}.json"


def load_fixture(name: str):
    """Load, deserialize and check one fixture."""
    return _load(str(data_dir()), name)


@lru_cache(maxsize=None)
def _load(root: str, name: str):
    entry = catalog().get(name)
    if entry is None:
        raise FixtureError(f"unknown fixture {name!r}")
    data = _raw(name)
    kind = entry["type"]
    if kind == "digraph":
        D = Digraph.from_dict(data)
        if "vertices" in entry and D.n != entry["vertices"]:
            raise FixtureError(f"{name}: expected {entry['vertices']} vertices, found {D.n}")
        return D
    host = load_fixture(entry["host"])
    if kind == "decomposition":
        T = DirectedTreeDecomposition.from_dict(data, host)
        for flavor in [T.flavor] + entry.get("also", []):
            rep = validate(T, flavor)
            if not rep.valid:
                raise FixtureError(f"{name}: not a valid {flavor} decomposition: {rep.violations[0]}")
            if "width" in entry and rep.width != entry["width"]:
                raise FixtureError(f"{name}: width {rep.width}, expected {entry['width']}")
        return T
    if kind == "witness":
        w = MinorWitness.from_dict(data)
        if not verify_witness(load_fixture(entry["minor"]), host, w):
            raise FixtureError(f"{name}: witness does not replay to {entry['minor']}")
        return w
    if kind == "bramble":
        B = Bramble.from_dict(data, host)
        v = validate_bramble(host, B)
        if not v.valid:
            raise FixtureError(f"{name}: {v.problems[0]}")
        if "order" in entry and bramble_order(host, B).order != entry["order"]:
            raise FixtureError(f"{name}: order differs from the catalog")
        return B
    if kind == "strategy":
        S = StrategyTree.from_dict(data, host)
        v = validate_strategy_tree(host, S)
        if not v.valid:
            raise FixtureError(f"{name}: {v.violations[0]}")
        if "nodes" in entry and len(S) != entry["nodes"]:
            raise FixtureError(f"{name}: {len(S)} nodes, expected {entry['nodes']}")
        if "robber_monotone" in entry and v.robber_monotone != entry["robber_monotone"]:
            raise FixtureError(f"{name}: robber-monotone flag differs from the catalog")
        return S
    raise FixtureError(f"{name}: unknown fixture type {kind!r}")


def fixture_host(name: str) -> str | None:
    return catalog()[name].get("host")


def dump_fixture(name: str) -> str:
    return json.dumps(_raw(name), indent=1, ensure_ascii=False)
