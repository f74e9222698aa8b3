"""Shared test helpers: oracles and exact linear algebra."""

from fractions import Fraction

from sislip.poly import MPoly
from sislip.scalar import QQ

AV = ("x", "y", "z")


# ---------------------------------------------------------------------------
# intersection matrices and exact negative-definiteness

def intersection_matrix(vertices, edges):
    """Symmetric matrix from {id: self_int} and an iterable of id pairs."""
    ids = sorted(vertices)
    pos = {vid: i for i, vid in enumerate(ids)}
    n = len(ids)
    M = [[Fraction(0)] * n for _ in range(n)]
    for vid in ids:
        M[pos[vid]][pos[vid]] = Fraction(vertices[vid])
    for e in edges:
        a, b = tuple(e)
        M[pos[a]][pos[b]] += 1
        M[pos[b]][pos[a]] += 1
    return M, ids


def is_negative_definite(M):
    """Exact LDL^T pivots; all must be negative."""
    n = len(M)
    A = [row[:] for row in M]
    for k in range(n):
        if A[k][k] >= 0:
            return False
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            for j in range(k, n):
                A[i][j] -= f * A[k][j]
    return True


def graph_matrix(graph):
    """Intersection matrix of a decorated graph (parallel edges summed)."""
    ids = sorted(graph.vertices)
    pos = {vid: i for i, vid in enumerate(ids)}
    n = len(ids)
    M = [[Fraction(0)] * n for _ in range(n)]
    for vid in ids:
        M[pos[vid]][pos[vid]] = Fraction(graph.vertices[vid].self_int)
    for a, b in graph.edges:
        M[pos[a]][pos[b]] += 1
        M[pos[b]][pos[a]] += 1
    return M, ids


# ---------------------------------------------------------------------------
# independent integer oracle for the resolution of v^p + w^q, gcd(p, q) = 1
#
# Pure subtractive-Euclid bookkeeping: the strict transform of v^p + w^q
# stays binomial in every chart, so the whole resolution is determined by
# the exponent pair.  No polynomial arithmetic is involved.

def binomial_resolution_oracle(p, q):
    """(vertices {id: self_int}, edges set of frozensets, arrow ids, vals)."""
    curves, val, edges, arrows = {}, {}, set(), []
    state = {"next": 1}

    def blow(p, q, a, b):
        for bid in (a, b):
            if bid is not None:
                curves[bid] -= 1
        if a is not None and b is not None:
            edges.discard(frozenset((a, b)))
        nid = state["next"]
        state["next"] += 1
        curves[nid] = -1
        val[nid] = min(p, q) + (val[a] if a else 0) + (val[b] if b else 0)
        for bid in (a, b):
            if bid is not None:
                edges.add(frozenset((nid, bid)))
        if p == q:
            # strict transform 1 + w^q with q = 1: free simple root
            assert p == 1
            arrows.append(nid)
        elif p > q:
            # chart (v, vw): strict v^(p-q) + w^q at the w = 0 corner
            if q == 1 and b is None:
                arrows.append(nid)
            else:
                blow(p - q, q, nid, b)
        if p < q:
            # chart (vw, v): strict v^(q-p) + w^p at the old-axis corner
            if p == 1 and a is None:
                arrows.append(nid)
            else:
                blow(q - p, p, nid, a)
        return nid

    blow(p, q, None, None)
    return curves, edges, arrows, val


# ---------------------------------------------------------------------------
# random linear coordinate changes

def linear_change(F, rng, lo=-2, hi=2):
    """F composed with a random invertible integer change of (x, y, z)."""
    while True:
        M = [[rng.randint(lo, hi) for _ in range(3)] for _ in range(3)]
        det = (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
               - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
               + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))
        if det != 0:
            break
    vs = [MPoly.var(QQ, AV, n) for n in AV]
    env = {
        AV[i]: sum((vs[j] * Fraction(M[i][j]) for j in range(3)),
                   MPoly.zero(QQ, AV))
        for i in range(3)
    }
    return F.evaluate(env)
