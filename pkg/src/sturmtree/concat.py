"""Concatenation of edge-indexed graphs at end vertices.

Two linear edge-indexed graphs can be joined at designated end vertices V and
V' in two ways:

* (i)-concatenation, for 1 <= i < m: V and V' are identified.  It requires
  both ends to carry the same outgoing edge index m and the same loop index l
  (possibly zero); the merged vertex keeps loop l and splits m into side
  indices i and m - i.

* (i,j)-concatenation, for 1 <= i <= l1 and 1 <= j <= l2: the graphs stay
  disjoint and a new edge V-V' is added with indices i(V->V') = i and
  i(V'->V) = j, carved out of the two loops, which drop to l1 - i and l2 - j.

Both operations preserve the degree-sum identity at every vertex.
"""

from __future__ import annotations

from dataclasses import dataclass

from .eig import Edge, Graph, Vertex
from .errors import EndMismatchError, IndexOutOfRangeError


@dataclass(frozen=True)
class ConcatResult:
    graph: Graph
    map1: dict  # vertex id in g1 -> id in result
    map2: dict  # vertex id in g2 -> id in result

    @property
    def joined(self):
        return self.map1, self.map2


def _end_data(g: Graph, vid: int, which: str):
    if g.truncated:
        raise EndMismatchError(f"{which}: operand carries truncation flags")
    nbrs = g.adj(vid)
    if len(nbrs) > 1:
        raise EndMismatchError(f"{which}: vertex {vid} is not an end vertex")
    if g.linear_order() is None:
        raise EndMismatchError(f"{which}: operand is not a linear graph")
    m = nbrs[0][1] if nbrs else None  # outgoing edge index, None for isolated vertex
    return m, g.loop_of(vid), g.color_of(vid)


def _disjoint_map(g1: Graph, g2: Graph):
    base = max(g1.ids, default=-1) + 1
    taken = set(g1.ids)
    out = {}
    nxt = base
    for vid in g2.ids:
        if vid not in taken:
            out[vid] = vid
            taken.add(vid)
        else:
            while nxt in taken:
                nxt += 1
            out[vid] = nxt
            taken.add(nxt)
            nxt += 1
    return out


def concat_i(g1: Graph, v1: int, g2: Graph, v2: int, i: int) -> ConcatResult:
    """(i)-concatenation of g1 and g2 at end vertices (v1, v2), identified."""
    if g1.degree != g2.degree:
        raise EndMismatchError(f"degree {g1.degree} != {g2.degree}")
    m1, l1, c1 = _end_data(g1, v1, "left operand")
    m2, l2, c2 = _end_data(g2, v2, "right operand")
    if m1 is None or m2 is None:
        raise EndMismatchError("(i)-concatenation needs an edge at both joining vertices")
    if m1 != m2:
        raise EndMismatchError(f"edge index {m1} != {m2} at joining vertices")
    if l1 != l2:
        raise EndMismatchError(f"loop index {l1} != {l2} at joining vertices")
    if c1 != c2:
        raise EndMismatchError(f"color {c1} != {c2} at joining vertices")
    if not 1 <= i < m1:
        raise IndexOutOfRangeError(f"need 1 <= i < {m1}, got i={i}")

    map1 = {vid: vid for vid in g1.ids}
    map2 = _disjoint_map(g1, g2)
    map2[v2] = v1  # identify

    vertices = []
    for v in g1.vertices:
        vertices.append(Vertex(v.id, v.color, l1 if v.id == v1 else v.loop))
    for v in g2.vertices:
        if v.id != v2:
            vertices.append(Vertex(map2[v.id], v.color, v.loop))

    edges = []
    for e in g1.edges:
        if v1 in (e.u, e.v):
            # side index at the joining vertex becomes i; far side unchanged
            if e.u == v1:
                edges.append(Edge(e.u, e.v, i, e.rev))
            else:
                edges.append(Edge(e.u, e.v, e.fwd, i))
        else:
            edges.append(e)
    for e in g2.edges:
        u, v = map2[e.u], map2[e.v]
        if v1 in (u, v):
            if u == v1:
                edges.append(Edge(u, v, m1 - i, e.rev))
            else:
                edges.append(Edge(u, v, e.fwd, m1 - i))
        else:
            edges.append(Edge(u, v, e.fwd, e.rev))

    graph = Graph(g1.degree, tuple(vertices), tuple(edges))
    return ConcatResult(graph, map1, map2)


def concat_ij(g1: Graph, v1: int, g2: Graph, v2: int, i: int, j: int) -> ConcatResult:
    """(i,j)-concatenation: disjoint union plus a new edge v1-v2 indexed i/j."""
    if g1.degree != g2.degree:
        raise EndMismatchError(f"degree {g1.degree} != {g2.degree}")
    _, l1, _ = _end_data(g1, v1, "left operand")
    _, l2, _ = _end_data(g2, v2, "right operand")
    if not 1 <= i <= l1:
        raise IndexOutOfRangeError(f"need 1 <= i <= {l1}, got i={i}")
    if not 1 <= j <= l2:
        raise IndexOutOfRangeError(f"need 1 <= j <= {l2}, got j={j}")

    map1 = {vid: vid for vid in g1.ids}
    map2 = _disjoint_map(g1, g2)

    vertices = []
    for v in g1.vertices:
        vertices.append(Vertex(v.id, v.color, v.loop - i if v.id == v1 else v.loop))
    for v in g2.vertices:
        vertices.append(Vertex(map2[v.id], v.color, v.loop - j if v.id == v2 else v.loop))

    edges = [Edge(e.u, e.v, e.fwd, e.rev) for e in g1.edges]
    edges += [Edge(map2[e.u], map2[e.v], e.fwd, e.rev) for e in g2.edges]
    edges.append(Edge(v1, map2[v2], i, j))

    graph = Graph(g1.degree, tuple(vertices), tuple(edges))
    return ConcatResult(graph, map1, map2)
