"""Command-line front end: one subcommand per operation, JSON in, JSON report out.

Exit codes: 0 positive verdict or successful construction, 1 negative verdict or
obstruction, 2 malformed input, failed precondition or exhausted budget.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import io
from .cayley import GenSet, cayley_graph
from .cocycles import (
    Cocycle2,
    central_extension,
    certificate_holds,
    disconnection_radius,
    is_coboundary,
    short_vanishing_cocycle_search,
    two_covering_from_cocycle,
    validate_cocycle,
)
from .complexes import fill_radius, is_k_simply_connected, k_universal_cover_ball
from .discreteness import (
    AugmentationFailed,
    augment_genset,
    build_discrete_genset,
    build_padded_genset,
    fiber_clique_certificate,
    n3_profile,
)
from .errors import BudgetExceeded, CoveringViolation, LgrigidError, PreconditionError
from .fox import (
    betti_bound,
    fox_matrix,
    product_presentation_counts,
    random_specialization_ranks,
    rank_over_fraction_field,
    surface_product_counts,
)
from .gluing import (
    VERTICAL,
    admissible_edge_analysis,
    bilipschitz_compare,
    build_Xq,
    build_X0,
    build_Xtilde,
    check_cayley_triangle_condition,
    choose_marking_genset,
    coset_base,
    detect_vertical_relation,
    is_admissible,
)
from .graph import automorphism_group, ball, iter_ball_isometries, is_r_locally
from .groups import Group, find_group_isomorphism, group_from_json
from .rigidity import (
    GluingConflict,
    Obstruction,
    TreeDecomposition,
    deck_quotient,
    extend_cover_along_tree,
    extension_radius,
    propagate_covering,
    propagation_params,
    residual_finiteness_probe,
    verify_covering,
)


@dataclass
class RunReport:
    subcommand: str
    inputs_digest: str
    verdict: str
    exit_code: int
    result: dict[str, Any]
    timing: dict[str, float] | None = field(default=None)

    def to_json(self) -> dict[str, Any]:
        out = {
            "subcommand": self.subcommand,
            "inputs_digest": self.inputs_digest,
            "verdict": self.verdict,
            "exit_code": self.exit_code,
            "result": self.result,
        }
        if self.timing is not None:
            out["timing"] = self.timing
        return out


@dataclass
class Context:
    budget: int | None
    seed: int


Handler = Callable[[dict[str, Any], Context], tuple[bool, dict[str, Any]]]
HANDLERS: dict[str, tuple[Handler, str]] = {}


def command(name: str, help_text: str):
    def wrap(fn: Handler) -> Handler:
        HANDLERS[name] = (fn, help_text)
        return fn
    return wrap


def _budget(ctx: Context, default: int) -> int | None:
    return default if ctx.budget is None else ctx.budget


def _fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _seed_map(obj: Any) -> dict[int, int]:
    if isinstance(obj, dict):
        return {int(k): int(v) for k, v in obj.items()}
    return {i: int(v) for i, v in enumerate(obj) if v is not None}


def _group_genset(inp: dict[str, Any], key: str = "genset") -> tuple[Group, GenSet]:
    G = group_from_json(inp["group"])
    return G, io.genset_from_json(G, inp[key])


def _cocycle(inp: dict[str, Any]) -> Cocycle2:
    if "entries" in inp or "family" in inp:
        return io.cocycle_from_json(inp)
    c = inp["cocycle"]
    if isinstance(c, list):
        return io.cocycle_from_json({"group": inp["group"], "entries": c})
    return io.cocycle_from_json(c)


def _gluing_instance(inp: dict[str, Any]):
    H = group_from_json(inp["H"])
    if not H.is_finite():
        raise PreconditionError("the ambient group must be finite")
    T = io.genset_from_json(H, inp["T"])
    members = io.subgroup_from_json(H, inp["G"])
    section = io.elements_from_json(H, inp["section"]) if "section" in inp else None
    return H, T, members.__contains__, section


def _cover_over_G(inp: dict[str, Any], cb) -> Any:
    """Covering of ``Y = Cay(G, T ∩ G)``, given directly or through a cocycle on a group
    embedded in ``H`` (``embedding[i]`` is the image of the i-th element)."""
    Y = cb.base.Y
    if "cover" in inp:
        return io.covering_from_json(inp["cover"], target=Y)
    desc = inp["cocycle"]
    phi = io.cocycle_from_json(desc)
    C = phi.group
    H = cb.H
    emb = dict(zip(C.elements(), io.elements_from_json(H, desc["embedding"])))
    if len(emb) != C.order() or set(emb.values()) != set(cb.group_elements):
        raise PreconditionError("embedding must be a bijection onto G")
    for a in C.elements():
        for b in C.elements():
            if emb[C.multiply(a, b)] != H.multiply(emb[a], emb[b]):
                raise PreconditionError("embedding is not a homomorphism")
    back = {v: k for k, v in emb.items()}
    S_C = GenSet(C, [back[s] for s in cb.S])
    cover = two_covering_from_cocycle(C, S_C, phi)
    gidx = {g: i for i, g in enumerate(cb.group_elements)}
    return verify_covering([gidx[emb[x[1]]] for x in cover.elements], cover.total, Y)


# ----------------------------------------------------------------------
# graph-core
# ----------------------------------------------------------------------

@command("ball", "induced ball with its intrinsic metric")
def _ball(inp, ctx):
    g = io.graph_from_json(inp["graph"])
    b = ball(g, int(inp.get("center", 0)), int(inp["radius"]))
    return True, {"ball": b.carrier.to_json(), "vertices": list(b.vertices),
                  "distances": list(b.intrinsic_dist)}


@command("is-r-locally", "check that every R-ball of a graph matches a model ball")
def _is_r_locally(inp, ctx):
    Y = io.graph_from_json(inp["graph"])
    X = io.graph_from_json(inp["model"])
    R = int(inp["R"])
    centers = inp.get("centers")
    if centers is None:
        centers = [orb[0] for orb in automorphism_group(X, budget=_budget(ctx, 200_000)).orbits]
    rep = is_r_locally(Y, [ball(X, int(c), R) for c in centers], R, _budget(ctx, 1_000_000))
    return rep.verdict, {"verdict": rep.verdict, "centers": list(centers),
                         "witnesses": list(rep.witnesses), "failing_vertex": rep.failing_vertex}


@command("aut", "automorphism group: order, generators, orbits")
def _aut(inp, ctx):
    g = io.graph_from_json(inp["graph"] if "graph" in inp else inp)
    A = automorphism_group(g, bool(inp.get("labels", False)), _budget(ctx, 200_000), inp.get("fixed", ()))
    out = {"order": A.order, "generators": [list(p) for p in A.generators],
           "orbits": [list(o) for o in A.orbits]}
    if "edge_kinds" in inp:
        vertical = {tuple(e) for e, k in zip(inp["edges"], inp["edge_kinds"]) if k == VERTICAL}
        out["preserves_vertical"] = all(
            tuple(sorted((p[u], p[v]))) in vertical for p in A.generators for u, v in vertical
        )
    return True, out


# ----------------------------------------------------------------------
# complexes
# ----------------------------------------------------------------------

@command("k-cover", "ball in the k-universal cover")
def _k_cover(inp, ctx):
    g = io.graph_from_json(inp["graph"])
    cb = k_universal_cover_ball(g, int(inp.get("base", 0)), int(inp["k"]), int(inp["R"]),
                                _budget(ctx, 200_000))
    if not cb.exact:
        raise BudgetExceeded("folding ran out of fuel", {"explored_radius": cb.explored_radius})
    return True, {"ball": cb.ball.carrier.to_json(), "distances": list(cb.ball.ambient_dist),
                  "projection": list(cb.projection), "status": cb.status, "closed": cb.closed,
                  "explored_radius": cb.explored_radius, "nodes": cb.nodes}


@command("k-simply-connected", "decide simple connectivity of the k-polygon complex")
def _k_sc(inp, ctx):
    g = io.graph_from_json(inp["graph"])
    res = is_k_simply_connected(g, int(inp["k"]), _budget(ctx, 200_000), inp.get("max_radius"))
    if res.verdict == "unknown":
        raise BudgetExceeded("undecided within the budget", res.certificate)
    return res.verdict == "yes", {"verdict": res.verdict, "certificate": res.certificate}


@command("fill-radius", "least R2 filling loops of radius-R1 balls")
def _fill(inp, ctx):
    g = io.graph_from_json(inp["graph"])
    r = fill_radius(g, int(inp["k"]), int(inp["R1"]), _budget(ctx, 200_000), inp.get("vertices"))
    return r is not None, {"fill_radius": r}


# ----------------------------------------------------------------------
# rigidity-engine
# ----------------------------------------------------------------------

@command("verify-covering", "check that a vertex map is a covering")
def _verify(inp, ctx):
    try:
        p = io.covering_from_json(inp)
    except CoveringViolation as exc:
        return False, {"vertex": exc.vertex, "reason": exc.reason}
    return True, io.covering_to_json(p)


@command("extension-radius", "radius r2 at which ball isometries extend to automorphisms")
def _ext(inp, ctx):
    g = io.graph_from_json(inp["graph"])
    r2 = extension_radius(g, int(inp["r"]), _budget(ctx, 500_000), inp.get("centers"), inp.get("max_radius"))
    return True, {"r2": r2}


@command("propagate", "propagate a seed ball isometry into a covering")
def _propagate(inp, ctx):
    X = io.graph_from_json(inp["model"])
    Y = io.graph_from_json(inp["target"])
    x0, y0 = int(inp.get("x0", 0)), int(inp.get("y0", 0))
    params = propagation_params(X, int(inp.get("k", 4)), inp.get("r_c"), inp.get("r2"), _budget(ctx, 500_000))
    if "seed" in inp:
        seed = _seed_map(inp["seed"])
    else:
        iso = next(iter_ball_isometries(ball(X, x0, params.r2), ball(Y, y0, params.r2),
                                        budget=_budget(ctx, 500_000)), None)
        if iso is None:
            return False, {"reason": f"no isometry B({x0}, {params.r2}) -> B({y0}, {params.r2})"}
        seed = {v: iso.vertex_map[v] for v in ball(X, x0, params.r1).vertices}
    res = propagate_covering(X, Y, seed, x0, params, inp.get("domain"), _budget(ctx, 2_000_000))
    out = {"params": {"r_c": params.r_c, "k": params.k, "r1": params.r1, "r2": params.r2}}
    if isinstance(res, Obstruction):
        out["obstruction"] = res.to_json()
        return False, out
    out["covering"] = io.covering_to_json(res)
    return True, out


@command("deck", "deck group of a covering and its quotient")
def _deck(inp, ctx):
    p = io.covering_from_json(inp)
    d = deck_quotient(p)
    return d.failure is None, {
        "order": d.order, "free": d.free, "generators": [list(h) for h in d.group.generators],
        "quotient": d.quotient.to_json(), "quotient_iso": None if d.quotient_iso is None else list(d.quotient_iso),
        "failure": d.failure,
    }


@command("rf-probe", "transport a group action to a finite quotient and test freeness")
def _rf(inp, ctx):
    G, S = _group_genset(inp)
    Y = io.graph_from_json(inp["target"])
    F = io.elements_from_json(G, inp["F"])
    res = residual_finiteness_probe(G, S, Y, int(inp["n"]), F, int(inp.get("k", 4)), int(inp.get("r_c", 1)),
                                    inp.get("r2"), _budget(ctx, 5_000_000))
    ser = G.serialize
    return not res.with_fixed_points, {
        "acts_freely": [ser(f) for f in res.fixed_point_free],
        "with_fixed_points": [ser(f) for f in res.with_fixed_points],
        "skipped": [ser(f) for f in res.skipped],
        "generator_action": [[ser(s), list(p)] for s, p in res.action.items()],
        "element_action": [[ser(f), list(p)] for f, p in res.element_action.items()],
        "fiber_size": res.covering.fiber_size,
    }


@command("tree-extend", "extend a covering piece by piece along a tree decomposition")
def _tree(inp, ctx):
    X = io.graph_from_json(inp["graph"])
    Y = io.graph_from_json(inp["target"])
    D = TreeDecomposition.make(io.graph_from_json(inp["tree"]), inp["pieces"], int(inp["r1"]))
    try:
        p = extend_cover_along_tree(X, D, Y, _seed_map(inp["seed"]), int(inp.get("x0", 0)),
                                    int(inp["r"]), int(inp["r2"]), _budget(ctx, 1_000_000))
    except GluingConflict as exc:
        return False, {"conflict": str(exc), "tree_edge": None if exc.edge is None else list(exc.edge)}
    return True, io.covering_to_json(p)


# ----------------------------------------------------------------------
# discreteness
# ----------------------------------------------------------------------

@command("n3", "triangle counts N3(s, S) over a generating set")
def _n3(inp, ctx):
    G, S = _group_genset(inp)
    return True, {"profile": n3_profile(G, S).to_json(G)}


def _augment_json(G: Group, r) -> dict[str, Any]:
    st = r.step
    return {"s0": G.serialize(st.s0), "gamma": G.serialize(st.gamma), "n": st.n,
            "delta": [G.serialize(x) for x in st.delta], "achieved": list(r.achieved),
            "rejections": [list(x) for x in r.rejections]}


@command("augment", "add four elements raising N3(s0) within the allowed increments")
def _augment(inp, ctx):
    G, S = _group_genset(inp)
    try:
        r = augment_genset(G, S, G.parse(inp["s0"]), G.parse(inp["gamma"]),
                           int(inp.get("search_bound", 10_000)), int(inp.get("start", 1)))
    except AugmentationFailed as exc:
        return False, {"reason": str(exc), "rejections": [list(x) for x in exc.rejections]}
    out = _augment_json(G, r)
    out["genset"] = r.S.to_json()
    return True, out


@command("discrete-genset", "generating set whose triangle counts mark the original classes")
def _discrete(inp, ctx):
    G, S0 = _group_genset(inp)
    D = build_discrete_genset(G, S0, G.parse(inp["gamma"]), int(inp.get("search_bound", 100_000)),
                              int(inp.get("max_steps", 500)))
    sep = D.separated()
    return sep, {"genset": D.S.to_json(), "profile": D.profile.to_json(G), "separated": sep,
                 "steps": [_augment_json(G, r) for r in D.steps],
                 "chain": [[[G.serialize(x) for x in inc] for inc in block] for block in D.chain]}


@command("padded-genset", "pad by cyclic groups so the largest cliques are the fibres")
def _padded(inp, ctx):
    G, S = _group_genset(inp)
    S0 = io.elements_from_json(G, inp["S0"]) if "S0" in inp else None
    P = build_padded_genset(G, S, S0)
    out = {"group": P.group.to_json(), "primes": list(P.primes), "clique_number": P.clique_number,
           "genset": P.S.to_json(), "classes": [[G.serialize(x) for x in c] for c in P.classes]}
    verdict = True
    if inp.get("certificate", True) and G.is_finite():
        cert = fiber_clique_certificate(P, _budget(ctx, 5_000_000))
        out["certificate"] = {"clique_number": cert.clique_number, "fibers_only": cert.fibers_only,
                              "cliques_at_max": cert.cliques_at_max,
                              "fiber_edge_counts": [[k, v] for k, v in sorted(cert.fiber_edge_counts.items())]}
        verdict = cert.fibers_only
    return verdict, out


# ----------------------------------------------------------------------
# extensions-cocycles
# ----------------------------------------------------------------------

@command("cocycle-validate", "check the cocycle identity")
def _validate(inp, ctx):
    phi = _cocycle(inp)
    bad = validate_cocycle(phi)
    G = phi.group
    return bad is None, {"valid": bad is None,
                         "failing_triple": None if bad is None else [G.serialize(x) for x in bad]}


@command("coboundary", "decide whether a cocycle is a coboundary")
def _coboundary(inp, ctx):
    phi = _cocycle(inp)
    G = phi.group
    r = is_coboundary(phi)
    if r.is_coboundary:
        return True, {"is_coboundary": True,
                      "psi": [[G.serialize(g), r.psi[g]] for g in G.elements() if r.psi[g]]}
    cert = [[G.serialize(g), G.serialize(h)] for g, h in r.certificate]
    return False, {"is_coboundary": False, "certificate": cert,
                   "certificate_holds": certificate_holds(phi, r.certificate)}


@command("central-ext", "central extension by Z/2 defined by a cocycle")
def _central(inp, ctx):
    E = central_extension(_cocycle(inp))
    orders = sorted({E.order_of(x) for x in E.elements()})
    out = {"group": E.to_json(), "order": E.order(), "element_orders": orders,
           "elements": [E.serialize(x) for x in E.elements()]}
    if "compare" in inp:
        iso = find_group_isomorphism(E, group_from_json(inp["compare"]))
        out["isomorphic"] = iso is not None
        return iso is not None, out
    return True, out


@command("two-cover", "double cover of a Cayley graph from a cocycle")
def _two_cover(inp, ctx):
    G, S = _group_genset(inp)
    tc = two_covering_from_cocycle(G, S, _cocycle(inp), bool(inp.get("adapt", True)))
    out = io.covering_to_json(tc.covering)
    out["connected"] = tc.connected
    out["extension"] = tc.extension.to_json()
    out["lifted_genset"] = tc.lifted.to_json()
    out["elements"] = [tc.extension.serialize(x) for x in tc.elements]
    return True, out


@command("vanishing-search", "non-trivial cocycle vanishing on short pairs")
def _vanishing(inp, ctx):
    G, S = _group_genset(inp)
    phi = short_vanishing_cocycle_search(G, S, int(inp["n"]))
    if phi is None:
        return False, {"cocycle": None}
    out = {"cocycle": phi.to_json()}
    try:
        tc = two_covering_from_cocycle(G, S, phi)
        out["connected"] = tc.connected
        out["disconnection_radius"] = disconnection_radius(tc)
    except PreconditionError as exc:
        out["cover_error"] = str(exc)
    return True, out


# ----------------------------------------------------------------------
# gluing
# ----------------------------------------------------------------------

@command("build-x0", "Cayley graph of H x Z/2 with its edge kinds")
def _x0(inp, ctx):
    H, T, in_G, _ = _gluing_instance(inp)
    return True, io.glued_to_json(build_X0(H, T, in_G))


@command("build-xq", "cover q over the coset G, trivial covers elsewhere")
def _xq(inp, ctx):
    H, T, in_G, section = _gluing_instance(inp)
    cb = coset_base(H, T, in_G, section)
    return True, io.glued_to_json(build_Xq(cb, _cover_over_G(inp, cb)))


@command("build-xtilde", "the same cover q over every coset")
def _xtilde(inp, ctx):
    H, T, in_G, section = _gluing_instance(inp)
    cb = coset_base(H, T, in_G, section)
    return True, io.glued_to_json(build_Xtilde(cb.base, _cover_over_G(inp, cb)))


@command("triangle-condition", "triangle bound on the Cayley graph of H")
def _triangle(inp, ctx):
    H, T, in_G, _ = _gluing_instance(inp)
    S = GenSet(H, [t for t in T if in_G(t)])
    tc = check_cayley_triangle_condition(H, T, S)
    return tc.holds, {"holds": tc.holds, "margin": tc.margin, "max_triangles": tc.max_triangles,
                      "threshold": tc.threshold}


@command("marking-genset", "enlarge T1 until the triangle condition holds")
def _marking(inp, ctx):
    H = group_from_json(inp["H"])
    members = io.subgroup_from_json(H, inp["G"])
    T1 = io.genset_from_json(H, inp["T1"])
    cands = io.elements_from_json(H, inp["candidates"]) if "candidates" in inp else None
    m = choose_marking_genset(H, members.__contains__, T1, cands, int(inp.get("radius", 8)),
                              _budget(ctx, 1_000_000))
    return True, {"genset": m.T.to_json(), "added": [H.serialize(x) for x in m.added],
                  "profile": [[H.serialize(t), c] for t, c in m.profile.items()]}


@command("detect-fibers", "recover the vertical pairs from triangle counts alone")
def _detect(inp, ctx):
    g = io.graph_from_json(inp["graph"] if "graph" in inp else inp)
    v = detect_vertical_relation(g)
    return v.found, {"found": v.found, "fibers": [list(f) for f in v.fibers], "threshold": v.threshold,
                     "vertical_range": None if v.vertical_range is None else list(v.vertical_range),
                     "other_range": None if v.other_range is None else list(v.other_range),
                     "reason": v.reason}


@command("admissible", "search for a disconnecting admissible edge set")
def _admissible(inp, ctx):
    glued = io.glued_from_json(inp)
    r = admissible_edge_analysis(glued, _budget(ctx, 1_000_000))
    out = {"disconnecting": r.disconnecting, "forced_components": r.forced_components,
           "forced_edges": r.forced_edges}
    if r.disconnecting:
        out["edges"] = [list(e) for e in r.edges]
        out["side"] = list(r.side)
        out["admissible"] = is_admissible(glued, r.edges)
    return r.disconnecting, out


@command("bilipschitz", "Lipschitz constants of a fibre-preserving bijection")
def _bilip(inp, ctx):
    a, b = io.glued_from_json(inp["first"]), io.glued_from_json(inp["second"])
    r = bilipschitz_compare(a, b, inp.get("mapping"))
    out = {"forward": _fraction(r.forward), "backward": _fraction(r.backward),
           "bilipschitz": _fraction(r.bilipschitz), "mapping": list(r.mapping)}
    if "max_constant" in inp:
        ok = r.bilipschitz <= Fraction(str(inp["max_constant"]))
        out["within"] = ok
        return ok, out
    return True, out


# ----------------------------------------------------------------------
# fox-homology
# ----------------------------------------------------------------------

@command("fox", "specialized Fox matrices of a presentation")
def _fox(inp, ctx):
    M = fox_matrix(io.presentation_from_json(inp))
    return True, {"D1": io.laurent_matrix_to_json(M.D1), "D2": io.laurent_matrix_to_json(M.D2),
                  "D3": io.laurent_matrix_to_json(M.D3)}


@command("rank", "rank over GF(2)(t) and at random points of GF(2^16)")
def _rank(inp, ctx):
    M = io.laurent_matrix_from_json(inp["matrix"])
    r = rank_over_fraction_field(M)
    trials = int(inp.get("trials", 0))
    desc = random_specialization_ranks(M, trials, ctx.seed) if trials else []
    return True, {"rank": r, "specialization_ranks": desc,
                  "agreement": sum(1 for x in desc if x == r), "never_exceeds": all(x <= r for x in desc)}


@command("betti-bound", "dimension of H_2 over GF(2)(t) and its lower bound")
def _betti(inp, ctx):
    b = betti_bound(io.presentation_from_json(inp))
    return b.infinite_H2_certificate, b.to_json()


@command("product-counts", "cell counts of a product presentation")
def _product(inp, ctx):
    if "surface" in inp:
        g1, g2 = inp["surface"]
        c = surface_product_counts(int(g1), int(g2))
    else:
        c = product_presentation_counts(int(inp["p1"]), int(inp["q1"]), int(inp["p2"]), int(inp["q2"]))
    return True, c.to_json()


# ----------------------------------------------------------------------
# Driver
# ----------------------------------------------------------------------

def run(subcommand: str, inp: Any, budget: int | None = None, seed: int = 0, timing: bool = False) -> RunReport:
    """Run one subcommand on parsed JSON input; errors become exit code 2."""
    if subcommand not in HANDLERS:
        raise KeyError(f"unknown subcommand {subcommand!r}")
    handler = HANDLERS[subcommand][0]
    digest = io.digest({"subcommand": subcommand, "input": inp, "budget": budget, "seed": seed})
    ctx = Context(budget, seed)
    start = time.perf_counter()
    try:
        if not isinstance(inp, dict):
            raise PreconditionError("input must be a JSON object")
        verdict, result = handler(inp, ctx)
        code = 0 if verdict else 1
        word = "positive" if verdict else "negative"
    except BudgetExceeded as exc:
        code, word = 2, "budget"
        result = {"error": str(exc), "partial": exc.partial}
    except (LgrigidError, ValueError, KeyError, TypeError, IndexError) as exc:
        code, word = 2, "error"
        result = {"error": f"{type(exc).__name__}: {exc}"}
    # round trip through JSON so tuples and other containers print canonically
    result = json.loads(json.dumps(result, default=_default))
    elapsed = time.perf_counter() - start
    return RunReport(subcommand, digest, word, code, result, {"seconds": round(elapsed, 6)} if timing else None)


def _default(x: Any) -> Any:
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if isinstance(x, Fraction):
        return _fraction(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _summary(rep: RunReport) -> str:
    res = rep.result
    if "error" in res:
        return f"{rep.subcommand}: {rep.verdict}: {res['error']}"
    shown = {k: v for k, v in res.items() if isinstance(v, (bool, int, str)) or v is None}
    detail = ", ".join(f"{k}={json.dumps(v)}" for k, v in sorted(shown.items())[:8])
    return f"{rep.subcommand}: {rep.verdict}" + (f" ({detail})" if detail else "")


def build_parser() -> argparse.ArgumentParser:
    def globals_parser(suppress: bool) -> argparse.ArgumentParser:
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--budget", type=int, default=d(None), help="node budget for exponential searches")
        p.add_argument("--seed", type=int, default=d(0), help="seed for randomized checks")
        p.add_argument("--json-out", default=d(None), metavar="PATH", help="write the report here ('-' for stdout)")
        p.add_argument("--quiet", action="store_true", default=d(False), help="no summary line")
        p.add_argument("--threads", type=int, default=d(None), help="accepted for compatibility; work runs sequentially")
        p.add_argument("--timing", action="store_true", default=d(False), help="include wall time in the report")
        return p

    parser = argparse.ArgumentParser(prog="lgrigid", description="Local-to-global rigidity toolkit.",
                                     parents=[globals_parser(False)])
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")
    for name, (_, help_text) in HANDLERS.items():
        sp = sub.add_parser(name, help=help_text, parents=[globals_parser(True)])
        sp.add_argument("input", help="JSON text, @file, a file path, or - for stdin")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        inp = io.load_json(args.input)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"lgrigid {args.subcommand}: cannot read input: {exc}", file=sys.stderr)
        return 2
    rep = run(args.subcommand, inp, args.budget, args.seed, args.timing)
    text = io.dumps(rep.to_json())
    if args.json_out == "-":
        sys.stdout.write(text)
    else:
        if args.json_out:
            with open(args.json_out, "w") as fh:
                fh.write(text)
        if not args.quiet:
            print(_summary(rep))
    if rep.exit_code == 2 and not args.quiet:
        print(f"lgrigid {args.subcommand}: {rep.result.get('error')}", file=sys.stderr)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
