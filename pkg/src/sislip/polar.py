"""Generic polar curves on a superisolated surface germ.

The polar curve of F = f - g with respect to a linear projection with
coefficients (a, b, c) is cut out on the surface by a*F_x + b*F_y + c*F_z.
For generic coefficients its multiplicities along the exceptional curves,
the extra blow-ups needed to resolve its base points on the exceptional
divisor, and the number of its branches are bilipschitz-meaningful data for
the *outer* metric.  Genericity is certified probabilistically: k seeded
samples, per-vertex minimum, and at least k-1 samples must attain the
minimum simultaneously.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import GenericityAlarm, ZeroOnComponent
from .poly import MPoly, exact_div, mgcd, multiplicity_of_factor
from .resolve import resolve_germ
from .sis import (
    AMBIENT_VARS,
    DecoratedGraph,
    DVertex,
    _pullback_numerator,
    build_gamma,
    components,
    dehomogenize,
    inner_rates,
    l_node_self_int,
    multiplicity_table,
    point_resolution,
    singular_points,
)

POLAR_TAG = "polar"
DEFAULT_SAMPLES = 5
COEFF_BOX = 9999          # coefficients are sampled uniformly from 1..COEFF_BOX
MAX_EXTRA_BLOWUPS = 8     # cap on base-point resolution work per singular point


def surface_partials(s):
    """The three partial derivatives of the defining polynomial F = f - g."""
    F = s.f - s.g
    return tuple(F.derivative(v) for v in AMBIENT_VARS)


def partials_table(s, graph=None):
    """multiplicity_table applied to F_x, F_y, F_z; returns three maps.

    When a decorated graph is supplied the values are also stored on its
    vertices under the names "Fx", "Fy", "Fz".
    """
    if graph is None:
        graph = build_gamma(s, "inner")
    out = []
    for p, name in zip(surface_partials(s), ("Fx", "Fy", "Fz")):
        out.append(multiplicity_table(s, p, graph, name=name))
    return tuple(out)


def _radical(p):
    """Squarefree part of p: p divided by gcd(p, all partials)."""
    g = p
    for var in p.vars:
        d = p.derivative(var)
        if d:
            g = mgcd(g, d)
    if g.total_degree() == 0:
        return p
    q = exact_div(p, g)
    assert q is not None, "radical division failed"
    return q


def _local_polar_data(s, pt, G):
    """(reduced local polar germ or None, pullback numerator at the point)."""
    N, _K = _pullback_numerator(s, G, pt.chart)
    Nloc = N.lift(pt.ctx).shift("v", pt.coords[0]).shift("w", pt.coords[1])
    if not Nloc:
        raise ZeroOnComponent("polar sample vanishes identically on the surface")
    # the numerator carries the tangent-cone components (the L-curves) as
    # factors; the strict transform of the polar is what remains
    strict = Nloc
    for _name, comp in components(s):
        cloc = dehomogenize(comp, pt.chart).lift(pt.ctx) \
            .shift("v", pt.coords[0]).shift("w", pt.coords[1])
        if cloc.total_degree() == 0:
            continue
        while True:
            q = exact_div(strict, cloc)
            if q is None:
                break
            strict = q
    if strict.order_at_origin() == 0:
        return None, Nloc  # the polar misses this singular point
    rad = _radical(strict)
    for name, comp in pt.local_factors.items():
        if mgcd(rad, comp).total_degree() > 0:
            raise GenericityAlarm(
                f"polar sample contains a branch of component {name}"
            )
    return rad, Nloc


@dataclass
class PolarSample:
    coefficients: tuple         # the representative certified triple (a, b, c)
    G: MPoly                    # a F_x + b F_y + c F_z for that triple
    mults: dict                 # base inner-graph vertex id -> multiplicity
    base_graph: DecoratedGraph
    graph: DecoratedGraph       # extended graph with polar arrows
    extra_blowups: int          # vertices beyond the base inner graph
    l_arrow_counts: dict        # L-vertex id -> polar branches through it
    agreeing: int               # how many samples attained the minimum


def extended_polar_graph(s, G):
    """Resolve the polar's base points on the exceptional divisor.

    Rebuilds the inner decorated graph from the combined resolution of
    (tangent-cone germ) * (local polar germ) at every singular point, so any
    extra blow-ups forced by the polar show up as new vertices with updated
    self-intersections.  Every strict-transform branch of the polar becomes
    one arrow; branches through the L-curves away from the singular points
    are counted by the principal-divisor identity.

    Returns (graph, extra_vertex_count, l_arrow_counts).
    """
    vertices, edges, arrows = {}, [], []
    nid = 0
    l_id = {}
    for name, _comp in components(s):
        nid += 1
        vertices[nid] = DVertex(nid, True, component=name)
        l_id[name] = nid
    extra = 0
    for ip, pt in enumerate(singular_points(s)):
        pol, Nloc = _local_polar_data(s, pt, G)
        base = point_resolution(s, ip)
        if pol is None:
            res = base
        else:
            factors = dict(pt.local_factors)
            factors[POLAR_TAG] = pol
            res = resolve_germ(pt.h_local * pol, pt.ctx, factors=factors)
        local = res.dual_graph()
        n_new = len(local.vertices) - len(base.dual_graph().vertices)
        if n_new > MAX_EXTRA_BLOWUPS:
            raise GenericityAlarm(
                f"polar base points needed {n_new} extra blow-ups "
                f"(cap {MAX_EXTRA_BLOWUPS}) at singular point {ip}"
            )
        extra += n_new * pt.class_size
        m_pol = res.track(Nloc)
        m_lin = res.track(pt.h_local)
        for copy in range(pt.class_size):
            gid = {}
            for lid in sorted(local.vertices):
                nid += 1
                gid[lid] = nid
                rid = local.rep_of[lid]
                vertices[nid] = DVertex(
                    nid, False, self_int=local.vertices[lid], point=ip,
                    copy=copy, local_id=rid,
                    mult={"polar": m_pol[rid], "l": m_lin[rid]},
                )
            for e in local.edges:
                a, b = sorted(e)
                edges.append((gid[a], gid[b]))
            for arrow in local.arrows:
                if arrow.vertex is None:
                    continue
                if arrow.tag == POLAR_TAG:
                    arrows.append((gid[arrow.vertex], None))
                else:
                    edges.append((gid[arrow.vertex], l_id[arrow.tag]))
    graph = DecoratedGraph("inner", vertices, edges, arrows)
    comp_of = dict(components(s))
    for v in graph.l_vertices():
        comp = comp_of[v.component]
        chart = next(
            c for c in (0, 1, 2) if dehomogenize(comp, c).total_degree() > 0
        )
        N, _K = _pullback_numerator(s, G, chart)
        v.mult["polar"] = multiplicity_of_factor(N, dehomogenize(comp, chart))
        v.mult["l"] = 1
        v.self_int = -(comp.total_degree() + sum(
            graph.vertices[u].mult["l"] for u in graph.neighbors(v.id)
        ))
    l_counts = {}
    for v in graph.l_vertices():
        # (sum m_E(G) E + strict) . L = 0 pins the strict contact with L
        total = v.mult["polar"] * v.self_int
        for u in graph.neighbors(v.id):
            total += graph.vertices[u].mult["polar"]
        cnt = -total
        assert cnt >= 0, "polar strict transform has negative L-contact"
        l_counts[v.id] = cnt
        for _ in range(cnt):
            graph.arrows.append((v.id, None))
    return graph, extra, l_counts


def generic_polar(s, k=DEFAULT_SAMPLES, seed=0):
    """Sample k polar curves and certify the generic multiplicity data."""
    if k < 3:
        raise ValueError("need at least 3 samples for a certificate")
    base = build_gamma(s, "inner")
    l_node_self_int(base, s)
    px, py, pz = surface_partials(s)
    rng = random.Random(seed)
    triples, gs, tables = [], [], []
    while len(gs) < k:
        a, b, c = (Fraction(rng.randint(1, COEFF_BOX)) for _ in range(3))
        G = px * a + py * b + pz * c
        if not G:
            continue
        triples.append((a, b, c))
        gs.append(G)
        tables.append(multiplicity_table(s, G, base))
    mins = {vid: min(t[vid] for t in tables) for vid in base.vertices}
    good = [i for i, t in enumerate(tables) if t == mins]
    if len(good) < k - 1:
        raise GenericityAlarm(
            f"only {len(good)} of {k} polar samples attained the minimum "
            f"everywhere; re-run with a different seed or more samples"
        )
    idx = good[0]
    for vid, m in mins.items():
        base.vertices[vid].mult["polar"] = m
    graph, extra, l_counts = extended_polar_graph(s, gs[idx])
    return PolarSample(triples[idx], gs[idx], mins, base, graph, extra,
                       l_counts, len(good))


def polar_branch_count(sample):
    """Number of strict-transform branches of the certified generic polar."""
    return len(sample.graph.arrows)


@dataclass
class EvidenceReport:
    inner_equivalent: bool
    branch_counts: tuple
    mult_vectors: tuple         # sorted base-graph polar multiplicities
    extra_blowups: tuple
    extended_profiles: tuple    # sorted (self_int, polar mult) per surface
    verdict: str
    caveat: str = ("matching polar data does not establish outer bilipschitz "
                   "equivalence; only a difference is conclusive")


def outer_evidence_report(s1, s2, k=DEFAULT_SAMPLES, seed=0):
    """Compare two presentations: inner graphs, then generic-polar data."""
    from .report import isomorphic  # local import: report consumes this module

    graphs = []
    for s in (s1, s2):
        g = build_gamma(s, "inner")
        l_node_self_int(g, s)
        inner_rates(g, s, seed=seed)
        graphs.append(g)
    inner_eq = isomorphic(graphs[0], graphs[1]) is not None
    p1 = generic_polar(s1, k=k, seed=seed)
    p2 = generic_polar(s2, k=k, seed=seed)
    mv = tuple(tuple(sorted(p.mults.values())) for p in (p1, p2))
    bc = (polar_branch_count(p1), polar_branch_count(p2))
    eb = (p1.extra_blowups, p2.extra_blowups)
    prof = tuple(
        tuple(sorted(
            (v.self_int, v.mult["polar"]) for v in p.graph.vertices.values()
        ))
        for p in (p1, p2)
    )
    same = mv[0] == mv[1] and bc[0] == bc[1] and eb[0] == eb[1] and \
        prof[0] == prof[1]
    if not inner_eq:
        verdict = "inner geometries differ"
    elif not same:
        verdict = "inner-equivalent, polar data differ"
    else:
        verdict = "inner-equivalent, polar data agree"
    return EvidenceReport(inner_eq, bc, mv, eb, prof, verdict)
