"""Acceptance gate: end-to-end checks of every headline result.

Each test pins an exact expected value (graph shape, self-intersections,
rates, multiplicities, polar data) or a randomized exactness property.
"""

import json
import math
import random
import time
import zlib
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from util import (
    binomial_resolution_oracle,
    intersection_matrix,
    is_negative_definite,
    linear_change,
)

from sislip import polar, report, sis
from sislip.cli import main
from sislip.errors import (
    DegreeTooLarge,
    FieldExtensionFailure,
    GenericityAlarm,
    NotIrreducible,
    TowerDepthExceeded,
)
from sislip.poly import MPoly, is_squarefree, parse_poly
from sislip.resolve import resolve_germ
from sislip.scalar import QQ
from sislip.sis import DecoratedGraph, DVertex

AV = ("x", "y", "z")
CUBIC = "y^3 + x*z^2 - x^4"
TWO_CUBICS = "(z*x^2+y^3)*(x^3+z*y^2)+z^7"
PAIR_A = "(y^3 - z^2*x)*(y^3 + z^2*x) + (x + y + z)^7"
PAIR_B = "(y^3 - z^2*x)*(y^3 + 2*z^2*x) + (x + y + z)^7"
FIXTURES = [CUBIC, TWO_CUBICS, PAIR_A, PAIR_B]


def surface(text):
    return sis.from_polynomial(parse_poly(text, vars=AV))


def inner_graph(s, rates=True):
    g = sis.build_gamma(s, "inner")
    sis.l_node_self_int(g, s)
    if rates:
        sis.inner_rates(g, s)
    return g


def run_cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


# ---------------------------------------------------------------------------
# criterion 1: cuspidal cubic, minimal graph, exact shape and multiplicities

def test_criterion_1_cubic_min_graph(capsys):
    t0 = time.monotonic()
    code, out = run_cli(capsys, "sis-graph", CUBIC, "--mode", "min")
    elapsed = time.monotonic() - t0
    assert code == 0
    body = json.loads(out)
    by_self = {v["self_int"]: v for v in body["vertices"]}
    assert set(by_self) == {-9, -3, -2, -1}
    assert by_self[-9]["is_L"]
    # the chain hangs off the -1 vertex: (-2)-(-1)-(-3), L at -1
    ids = {v["self_int"]: v["id"] for v in body["vertices"]}
    edges = {frozenset(e) for e in body["edges"]}
    assert edges == {frozenset((ids[-1], ids[-2])),
                     frozenset((ids[-1], ids[-3])),
                     frozenset((ids[-1], ids[-9]))}
    mults = {v["self_int"]: v["mult"]["l"] for v in body["vertices"]}
    assert mults == {-9: 1, -2: 3, -1: 6, -3: 2}
    assert elapsed < 1.0


# ---------------------------------------------------------------------------
# criterion 2: inner rate 4/3 from the polar quotient 2/6

def test_criterion_2_rate_from_quotient():
    s = surface(CUBIC)
    res = sis.point_resolution(s, 0)
    pt = sis.singular_points(s)[0]
    local = res.dual_graph()
    from sislip.resolve import detect_nodes

    (node,) = detect_nodes(local, pt.h_local)
    rid = local.rep_of[node]
    m_l = sis._generic_local_track(res)[rid]
    m_h = res.track(pt.h_local)[rid]
    assert (m_l, m_h) == (2, 6)
    g = inner_graph(s)
    (v,) = [v for v in g.vertices.values() if v.rate == Fraction(4, 3)]
    assert v.self_int == -1
    assert v.rate == 1 + Fraction(m_l, m_h)


# ---------------------------------------------------------------------------
# criterion 3: two tangent cubics, inner graph isomorphic to the figure

def figure_two_cubics():
    """Hand transcription of the published inner-rate graph."""
    f = Fraction
    entries = {
        1: (True, -23, f(1)), 2: (True, -23, f(1)),       # L-vertices
        3: (False, -1, f(3, 2)), 4: (False, -1, f(3, 2)),  # five nodes of C
        5: (False, -1, f(3, 2)), 6: (False, -1, f(3, 2)),
        7: (False, -1, f(3, 2)),
        8: (False, -5, f(5, 4)),                           # central vertex
        9: (False, -1, f(6, 5)), 10: (False, -1, f(6, 5)),
        11: (False, -2, None), 12: (False, -2, None),      # end vertices
    }
    vertices = {
        vid: DVertex(vid, is_l, self_int=e, rate=r)
        for vid, (is_l, e, r) in entries.items()
    }
    edges = [(1, 3), (2, 3), (1, 4), (2, 4), (1, 5), (2, 5), (1, 6), (2, 6),
             (1, 7), (2, 7),
             (8, 9), (8, 10), (1, 9), (2, 10), (9, 11), (10, 12)]
    return DecoratedGraph("inner", vertices, edges)


def test_criterion_3_two_cubics_matches_figure(capsys):
    t0 = time.monotonic()
    code, out = run_cli(capsys, "sis-graph", TWO_CUBICS, "--mode", "inner",
                        "--rates")
    elapsed = time.monotonic() - t0
    assert code == 0
    doc = report.from_json(out)
    m = report.isomorphic(doc.graph, figure_two_cubics())
    assert m is not None
    assert elapsed < 30.0


# ---------------------------------------------------------------------------
# criterion 4: the surface pair has isomorphic rate-decorated inner graphs

def test_criterion_4_pair_inner_graphs():
    g1 = inner_graph(surface(PAIR_A))
    g2 = inner_graph(surface(PAIR_B))
    for g in (g1, g2):
        l_selfs = sorted(v.self_int for v in g.l_vertices())
        assert l_selfs == [-21, -21]
        others = sorted(v.self_int for v in g.vertices.values() if not v.is_L)
        assert others == [-3, -2, -2, -2, -1, -1]
        node_rates = [v.rate for v in g.vertices.values()
                      if not v.is_L and v.rate is not None]
        assert node_rates == [Fraction(7, 6)] * 2
    m = report.isomorphic(g1, g2)
    assert m is not None
    for a, b in m.items():
        assert g1.vertices[a].rate == g2.vertices[b].rate


# ---------------------------------------------------------------------------
# criterion 5: coordinate multiplicity triples and partial-derivative tables

EXPECTED_TRIPLES = sorted([
    (1, 1, 1), (1, 1, 1), (12, 14, 15), (6, 7, 8), (4, 5, 5),
    (9, 7, 6), (6, 5, 4), (3, 3, 2),
])


@pytest.mark.parametrize("expr", [PAIR_A, PAIR_B])
def test_criterion_5_multiplicity_triples(expr):
    s = surface(expr)
    g = inner_graph(s, rates=False)
    tables = [sis.multiplicity_table(s, parse_poly(c, vars=AV), g, name=c)
              for c in AV]
    triples = sorted(tuple(t[vid] for t in tables) for vid in g.vertices)
    assert triples == EXPECTED_TRIPLES


def partials_by_profile(s):
    g = inner_graph(s, rates=False)
    polar.partials_table(s, g)
    out = {}
    for v in g.vertices.values():
        key = ("L", v.component) if v.is_L else ("E", v.self_int, v.mult["l"])
        out[key] = (v.mult["Fx"], v.mult["Fy"], v.mult["Fz"])
    return out


def test_criterion_5_partials_discrepancy():
    ta = partials_by_profile(surface(PAIR_A))
    tb = partials_by_profile(surface(PAIR_B))
    # the genuine discrepancy: 36 vs 35 at the -2 vertex next to the deep
    # node (third partial); every other entry of the two tables coincides
    assert ta[("E", -2, 6)] == (36, 35, 36)
    assert tb[("E", -2, 6)] == (36, 35, 35)
    # at the deep node itself both surfaces give (72, 70, 69): the second
    # entry is 70 for BOTH (the minimum of 2i+3j over the support of either
    # pulled-back F_y is 70, so 69 is not attainable there)
    assert ta[("E", -1, 12)] == (72, 70, 69)
    assert tb[("E", -1, 12)] == (72, 70, 69)
    diff = {k for k in ta if ta[k] != tb[k]}
    assert diff == {("E", -2, 6)}


# ---------------------------------------------------------------------------
# criterion 6: certified generic polar data distinguishes the pair

def test_criterion_6_polar_distinguishes_pair():
    t0 = time.monotonic()
    sa = surface(PAIR_A)
    sb = surface(PAIR_B)
    pa = polar.generic_polar(sa, k=5, seed=0)
    pb = polar.generic_polar(sb, k=5, seed=0)
    expected = sorted([11, 22, 33, 5, 5, 69, 23, 35])
    assert sorted(pa.mults.values()) == expected
    assert sorted(pb.mults.values()) == expected
    assert pa.extra_blowups == 1 and pb.extra_blowups == 0
    assert any(v.mult.get("polar") == 105 for v in pa.graph.vertices.values())
    assert not any(v.mult.get("polar") == 105
                   for v in pb.graph.vertices.values())
    assert polar.polar_branch_count(pa) == 8
    assert polar.polar_branch_count(pb) == 9
    rep = polar.outer_evidence_report(sa, sb, k=5, seed=0)
    assert rep.verdict == "inner-equivalent, polar data differ"
    assert time.monotonic() - t0 <= 60.0


# ---------------------------------------------------------------------------
# criterion 7: randomized exactness properties

VW = ("v", "w")
CAPABILITY_ERRORS = (FieldExtensionFailure, TowerDepthExceeded,
                     NotIrreducible, DegreeTooLarge, GenericityAlarm)


@st.composite
def reduced_germs(draw):
    terms = draw(st.dictionaries(
        st.tuples(st.integers(0, 5), st.integers(0, 5)).filter(
            lambda e: 0 < sum(e) <= 5),
        st.integers(-3, 3),
        min_size=1, max_size=5,
    ))
    p = MPoly(QQ, VW, {e: Fraction(c) for e, c in terms.items() if c})
    assume(p and 1 <= p.order_at_origin() <= 5)
    assume(is_squarefree(p))
    return p


def resolved(p):
    try:
        return resolve_germ(p)
    except CAPABILITY_ERRORS:
        assume(False)


@settings(max_examples=100, deadline=None)
@given(p=reduced_germs())
def test_property_principal_divisor_identity(p):
    res = resolved(p)
    g = res.dual_graph()
    assume(g.vertices)
    m = res.track(p)
    for vid, self_int in g.vertices.items():
        total = m[g.rep_of[vid]] * self_int
        for u in g.neighbors(vid):
            total += m[g.rep_of[u]]
        total += sum(1 for a in g.arrows if a.vertex == vid)
        assert total == 0


@settings(max_examples=100, deadline=None)
@given(p=reduced_germs())
def test_property_negative_definite(p):
    res = resolved(p)
    g = res.dual_graph()
    assume(g.vertices)
    M, _ids = intersection_matrix(dict(g.vertices), g.edges)
    assert is_negative_definite(M)


germ_pool = ["v^3 + w^2", "v*w", "(v^3 + w^2)*(v^3 + 2*w^2)", "w^2 - v^4"]

factors_st = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)),
    st.integers(-3, 3), max_size=4,
)


def poly_of(terms):
    return MPoly(QQ, VW, {e: Fraction(c) for e, c in terms.items() if c})


@settings(max_examples=100, deadline=None)
@given(expr=st.sampled_from(germ_pool), ta=factors_st, tb=factors_st)
def test_property_track_additivity(expr, ta, tb):
    a, b = poly_of(ta), poly_of(tb)
    assume(a and b)
    res = resolve_germ(parse_poly(expr, vars=VW))
    ma, mb, mab = res.track(a), res.track(b), res.track(a * b)
    for rid in mab:
        assert mab[rid] == ma[rid] + mb[rid]


# p >= 2: for p = 1 the germ is smooth and is represented by a bare arrow
# (no blow-up), while the integer oracle always performs the first blow-up
COPRIME_PAIRS = [(p, q) for p in range(2, 13) for q in range(2, 13)
                 if p < q and math.gcd(p, q) == 1]


@settings(max_examples=100, deadline=None)
@given(pq=st.sampled_from(COPRIME_PAIRS))
def test_property_binomial_euclid_oracle(pq):
    p, q = pq
    h = parse_poly(f"v^{p} + w^{q}", vars=VW)
    res = resolve_germ(h)
    g = res.dual_graph()
    curves, edges, arrows, val = binomial_resolution_oracle(p, q)
    assert dict(g.vertices) == curves
    assert g.edges == edges
    assert sorted(a.vertex for a in g.arrows) == sorted(arrows)
    assert res.track(h) == val


@pytest.mark.parametrize("expr", FIXTURES)
def test_property_linear_change_invariance(expr):
    s = surface(expr)
    base = inner_graph(s)
    F = s.f - s.g
    rng = random.Random(zlib.adler32(expr.encode()))
    for _ in range(10):
        s2 = sis.from_polynomial(linear_change(F, rng))
        g2 = inner_graph(s2)
        assert report.isomorphic(base, g2) is not None


# ---------------------------------------------------------------------------
# criterion 8: byte-identical CLI output per seed

@pytest.mark.parametrize("argv", [
    ("sis-graph", CUBIC, "--mode", "min", "--seed", "3"),
    ("inner-rates", TWO_CUBICS, "--seed", "3"),
    ("polar", PAIR_A, "--samples", "3", "--seed", "3"),
    ("compare", PAIR_A, PAIR_B, "--polar", "--samples", "3", "--seed", "3"),
])
def test_criterion_8_determinism(capsys, argv):
    _c, out1 = run_cli(capsys, *argv)
    _c, out2 = run_cli(capsys, *argv)
    assert out1 and out1 == out2
