"""Serialization and comparison of decorated graphs.

DOT for eyeballing (L-vertices drawn black), JSON (schema 1) for golden
files, a canonical vertex order so output is byte-stable, and exact
decorated-graph isomorphism by color refinement plus backtracking.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import SchemaVersionMismatch
from .sis import DecoratedGraph, DVertex

SCHEMA_VERSION = 1


@dataclass
class GraphDocument:
    graph: DecoratedGraph
    provenance: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION


# ---------------------------------------------------------------------------
# canonical vertex order

def _initial_color(graph, vid):
    v = graph.vertices[vid]
    rate = None if v.rate is None else (Fraction(v.rate).numerator,
                                        Fraction(v.rate).denominator)
    arrows = sorted(
        (repr(m) for a, m in graph.arrows if a == vid)
    )
    return (not v.is_L, v.self_int if v.self_int is not None else 0,
            rate is None, rate or (0, 0), tuple(arrows))


def _refine(graph, colors):
    """One round of Weisfeiler-Lehman refinement."""
    adj = {vid: [] for vid in graph.vertices}
    for a, b in graph.edges:
        adj[a].append(b)
        adj[b].append(a)
    return {
        vid: (colors[vid], tuple(sorted(colors[u] for u in adj[vid])))
        for vid in graph.vertices
    }


def canonical_order(graph):
    """Deterministic vertex order; ties broken by current id."""
    colors = {vid: _initial_color(graph, vid) for vid in graph.vertices}
    for _ in range(len(graph.vertices)):
        nxt = _refine(graph, colors)
        if len(set(nxt.values())) == len(set(colors.values())):
            colors = nxt
            break
        colors = nxt
    return sorted(graph.vertices, key=lambda vid: (repr(colors[vid]), vid))


# ---------------------------------------------------------------------------
# JSON

def _rat_str(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _rat_parse(text):
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den or 1))


def to_json(doc):
    graph = doc.graph
    order = canonical_order(graph)
    new_id = {vid: i + 1 for i, vid in enumerate(order)}
    vertices = []
    for vid in order:
        v = graph.vertices[vid]
        rec = {"id": new_id[vid], "self_int": v.self_int, "is_L": v.is_L}
        if v.rate is not None:
            rec["rate"] = _rat_str(v.rate)
        if v.mult:
            rec["mult"] = {k: v.mult[k] for k in sorted(v.mult)}
        vertices.append(rec)
    edges = sorted(sorted((new_id[a], new_id[b])) for a, b in graph.edges)
    arrows = []
    for a, m in graph.arrows:
        rec = {"at": new_id[a] if a is not None else None}
        if m is not None:
            rec["mult"] = m
        arrows.append(rec)
    arrows.sort(key=lambda r: (r["at"] is None, r["at"], r.get("mult", 0)))
    body = {
        "schema": doc.schema_version,
        "vertices": vertices,
        "edges": edges,
        "arrows": arrows,
        "provenance": doc.provenance,
    }
    return json.dumps(body, indent=2, sort_keys=True) + "\n"


def from_json(text):
    body = json.loads(text)
    if body.get("schema") != SCHEMA_VERSION:
        raise SchemaVersionMismatch(
            f"expected schema {SCHEMA_VERSION}, got {body.get('schema')!r}"
        )
    vertices = {}
    for rec in body["vertices"]:
        v = DVertex(rec["id"], rec["is_L"], self_int=rec["self_int"])
        if "rate" in rec:
            v.rate = _rat_parse(rec["rate"])
        if "mult" in rec:
            v.mult = dict(rec["mult"])
        vertices[rec["id"]] = v
    edges = [tuple(e) for e in body["edges"]]
    arrows = [(rec["at"], rec.get("mult")) for rec in body["arrows"]]
    mode = body["provenance"].get("mode", "inner")
    graph = DecoratedGraph(mode, vertices, edges, arrows)
    return GraphDocument(graph, body["provenance"], body["schema"])


# ---------------------------------------------------------------------------
# DOT

def to_dot(doc):
    graph = doc.graph
    order = canonical_order(graph)
    new_id = {vid: i + 1 for i, vid in enumerate(order)}
    lines = ["digraph G {", "  edge [dir=none];",
             "  node [shape=circle fontsize=10];"]
    for vid in order:
        v = graph.vertices[vid]
        parts = []
        if v.self_int is not None:
            parts.append(str(v.self_int))
        if v.rate is not None:
            parts.append(_rat_str(v.rate))
        if v.mult:
            parts.append(" ".join(f"{k}:{v.mult[k]}" for k in sorted(v.mult)))
        label = " / ".join(parts)
        style = " style=filled fillcolor=black fontcolor=white" if v.is_L else ""
        lines.append(f'  v{new_id[vid]} [label="{label}"{style}];')
    for a, b in sorted(sorted((new_id[x], new_id[y])) for x, y in graph.edges):
        lines.append(f"  v{a} -> v{b};")
    for i, (a, m) in enumerate(sorted(
        graph.arrows, key=lambda t: (t[0] is None, t[0] if t[0] is not None
                                     else 0, repr(t[1]))
    )):
        attrs = "dir=forward" if m is None else f'dir=forward label="{m}"'
        lines.append(f'  a{i + 1} [shape=none label=""];')
        src = f"v{new_id[a]}" if a is not None else f"r{i + 1}"
        if a is None:
            lines.append(f"  r{i + 1} [shape=point];")
        lines.append(f"  {src} -> a{i + 1} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# isomorphism

def _iso_label(graph, vid):
    v = graph.vertices[vid]
    arrows = sorted(repr(m) for a, m in graph.arrows if a == vid)
    return (v.is_L, v.self_int, None if v.rate is None else Fraction(v.rate),
            tuple(arrows))


def isomorphic(g1, g2):
    """A decoration-preserving vertex bijection, or None.

    Preserves edges (with multiplicity), arrows, self_int, is_L, and rate.
    Exact backtracking with iterated color-refinement pruning.
    """
    if len(g1.vertices) != len(g2.vertices) or \
            len(g1.edges) != len(g2.edges) or \
            len(g1.arrows) != len(g2.arrows):
        return None

    def colors_of(g):
        colors = {vid: repr(_iso_label(g, vid)) for vid in g.vertices}
        for _ in range(len(g.vertices)):
            nxt = {vid: repr((colors[vid],
                              sorted(colors[u] for u in g.neighbors(vid))))
                   for vid in g.vertices}
            if len(set(nxt.values())) == len(set(colors.values())):
                break
            colors = nxt
        return colors

    c1, c2 = colors_of(g1), colors_of(g2)
    if sorted(c1.values()) != sorted(c2.values()):
        return None

    def edge_count(g, a, b):
        return sum(1 for e in g.edges if sorted(e) == sorted((a, b)))

    order = sorted(g1.vertices, key=lambda vid: (c1[vid], vid))
    mapping = {}
    used = set()

    def extend(i):
        if i == len(order):
            return True
        a = order[i]
        for b in sorted(g2.vertices):
            if b in used or c2[b] != c1[a]:
                continue
            ok = all(
                edge_count(g1, a, x) == edge_count(g2, b, y)
                for x, y in mapping.items()
            )
            if not ok:
                continue
            mapping[a] = b
            used.add(b)
            if extend(i + 1):
                return True
            del mapping[a]
            used.discard(b)
        return False

    return dict(mapping) if extend(0) else None
