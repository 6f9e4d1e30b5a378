"""JSON readers and writers for graphs, groups, generating sets, coverings, glued graphs,
cocycles and presentations."""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path
from typing import Any, Iterable

from .cayley import GenSet, cayley_graph
from .cocycles import Cocycle2, carry_cocycle
from .errors import PreconditionError
from .fox import Laurent, Presentation
from .gluing import GluedGraph
from .graph import (
    SimpleGraph,
    complete_graph,
    cycle_graph,
    grid_ball,
    path_graph,
    petersen_graph,
    regular_tree_ball,
    torus_graph,
)
from .groups import Element, Group, generated_subgroup, group_from_json
from .rigidity import CoveringMap, verify_covering


def load_json(value: str) -> Any:
    """``@path`` or an existing path reads a file, ``-`` reads stdin, anything else is JSON text."""
    if value == "-":
        return json.load(sys.stdin)
    if value.startswith("@"):
        return json.loads(Path(value[1:]).read_text())
    try:
        return json.loads(value)
    except json.JSONDecodeError:
        p = Path(value)
        if p.is_file():
            return json.loads(p.read_text())
        raise


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def digest(obj: Any) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


# ----------------------------------------------------------------------
# Graphs
# ----------------------------------------------------------------------

def graph_from_json(obj: dict[str, Any]) -> SimpleGraph:
    """Explicit graph JSON or a named family such as ``{"family": "torus", "a": 8}``."""
    fam = obj.get("family")
    if fam is None:
        return SimpleGraph.from_json(obj)
    if fam == "cycle":
        return cycle_graph(int(obj["n"]))
    if fam == "path":
        return path_graph(int(obj["n"]))
    if fam == "complete":
        return complete_graph(int(obj["n"]))
    if fam == "torus":
        return torus_graph(int(obj["a"]), int(obj.get("b", obj["a"])))
    if fam == "petersen":
        return petersen_graph()
    if fam == "grid_ball":
        return grid_ball(int(obj["radius"]))[0]
    if fam == "tree":
        return regular_tree_ball(int(obj["degree"]), int(obj["radius"]))
    if fam == "cayley":
        G = group_from_json(obj["group"])
        return cayley_graph(G, genset_from_json(G, obj["genset"]), bool(obj.get("marked", False)))
    raise PreconditionError(f"unknown graph family {fam!r}")


def genset_from_json(G: Group, obj: Iterable[Any], symmetric: bool = True) -> GenSet:
    return GenSet(G, [G.parse(x) for x in obj], require_symmetric=symmetric)


def elements_from_json(G: Group, obj: Iterable[Any]) -> list[Element]:
    return [G.parse(x) for x in obj]


def subgroup_from_json(G: Group, gens: Iterable[Any]) -> set[Element]:
    return set(generated_subgroup(G, elements_from_json(G, gens)))


# ----------------------------------------------------------------------
# Coverings
# ----------------------------------------------------------------------

def covering_to_json(p: CoveringMap) -> dict[str, Any]:
    out = {"source": p.source.to_json(), "target": p.target.to_json(), "map": p.to_json(),
           "fiber_size": p.fiber_size,
           "injectivity_radius": None if p.injectivity_radius == float("inf") else p.injectivity_radius}
    if p.interior is not None:
        out["interior"] = list(p.interior)
    return out


def covering_from_json(obj: dict[str, Any], target: SimpleGraph | None = None) -> CoveringMap:
    Z = graph_from_json(obj["source"])
    X = target if target is not None else graph_from_json(obj["target"])
    return verify_covering(obj["map"], Z, X, obj.get("interior"))


# ----------------------------------------------------------------------
# Glued graphs
# ----------------------------------------------------------------------

def glued_to_json(g: GluedGraph) -> dict[str, Any]:
    out = g.to_json()
    out["base"] = g.base.to_json()
    return out


def glued_from_json(obj: dict[str, Any]) -> GluedGraph:
    g = SimpleGraph.from_json({k: obj[k] for k in ("vertices", "edges") if k in obj})
    kinds = dict(zip(g.edges(), obj["edge_kinds"]))
    if len(kinds) != g.edge_count:
        raise PreconditionError("edge_kinds must be aligned with edges")
    return GluedGraph(g, kinds, tuple(obj["projection"]), graph_from_json(obj["base"]))


# ----------------------------------------------------------------------
# Cocycles, presentations, Laurent matrices
# ----------------------------------------------------------------------

def cocycle_from_json(obj: dict[str, Any]) -> Cocycle2:
    """Cocycle table JSON, or ``{"family": "carry", "n": n}``."""
    fam = obj.get("family")
    if fam is None:
        return Cocycle2.from_json(obj)
    if fam == "carry":
        return carry_cocycle(int(obj["n"]))
    raise PreconditionError(f"unknown cocycle family {fam!r}")


def presentation_from_json(obj: dict[str, Any]) -> Presentation:
    return Presentation.from_json(obj)


def laurent_matrix_from_json(obj: list[list[list[int]]]) -> list[list[Laurent]]:
    """Rows of entries, each entry the list of exponents with coefficient 1."""
    return [[Laurent.from_exponents(e) for e in row] for row in obj]


def laurent_matrix_to_json(M: list[list[Laurent]] | None) -> list | None:
    return None if M is None else [[x.to_json() for x in row] for row in M]
