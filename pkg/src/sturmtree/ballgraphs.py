"""The class-adjacency graph and the two edge-indexed class graphs per level.

At level n the class-adjacency graph has one vertex per radius-n class, an
edge between two classes whenever some pair of adjacent centers realizes
them, and a loop on a class realized at two adjacent centers.

The two edge-indexed class graphs ("A side" and "B side") refine this around
the special class: away from S_n a class X sees a well-defined number
i(X, Y) of Y-classed neighbors; at S_n the count depends on which of the two
(n+1)-extensions the center carries, giving i_A and i_B.  Each side graph is
the part reachable from S_n along positively indexed directions, carries
those counts as edge indices and loops, and marks the special and central
classes.  Index sums at every vertex equal the tree degree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .balls import Analysis
from .eig import Edge, Graph, Vertex
from .errors import HorizonError, NotSturmianError


@dataclass(frozen=True)
class BallGraph:
    """Level-n class adjacency: plain edges, loops, and always-adjacency."""

    n: int
    size: int
    edges: frozenset  # of (i, j) sorted pairs, i < j
    loops: frozenset  # of class indices
    always: frozenset  # of (D, E): every D-center has an E-classed neighbor

    def neighbors(self, i: int) -> set[int]:
        out = set()
        for u, v in self.edges:
            if u == i:
                out.add(v)
            elif v == i:
                out.add(u)
        return out

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))


def build_Gn(analysis: Analysis, n: int) -> BallGraph:
    """Class adjacency at level n, from adjacent-center witnesses."""
    g = analysis.g
    tab = analysis.table(n)
    edges = set()
    loops = set()
    for e in g.edges:
        cu = analysis.class_of(e.u, n)
        cw = analysis.class_of(e.v, n)
        if cu is None or cw is None:
            continue
        if cu == cw:
            loops.add(cu)
        else:
            edges.add((min(cu, cw), max(cu, cw)))
    for v in g.vertices:
        if v.loop > 0:
            cu = analysis.class_of(v.id, n)
            if cu is not None:
                loops.add(cu)
    always = set()
    for d_cls in range(tab.b):
        reps = [x for x in tab.reps[d_cls] if analysis.class_of(x, n + 1) is not None]
        if not reps:
            continue
        common = None
        for x in reps:
            seen = set(analysis.neighbor_counts(x, n))
            common = seen if common is None else (common & seen)
        for e_cls in common:
            always.add((d_cls, e_cls))
    return BallGraph(n, tab.b, frozenset(edges), frozenset(loops), frozenset(always))


def detect_cycle(bg: BallGraph):
    """A cycle of length >= 2 (loops do not count), as a vertex list, or None."""
    parent: dict[int, int | None] = {}
    for root in range(bg.size):
        if root in parent:
            continue
        parent[root] = None
        queue = [root]
        while queue:
            u = queue.pop(0)
            for w in bg.neighbors(u):
                if w not in parent:
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w and parent.get(w) != u:
                    # non-tree edge u-w closes a cycle through their ancestors
                    def chain(x):
                        path = [x]
                        while parent[path[-1]] is not None:
                            path.append(parent[path[-1]])
                        return path
                    pu, pw = chain(u), chain(w)
                    common = next(x for x in pu if x in set(pw))
                    cycle = pu[: pu.index(common) + 1] + pw[: pw.index(common)][::-1]
                    return cycle
    return None


def index_of(analysis: Analysis, n: int, x_cls: int, y_cls: int, side: str = "plain") -> int:
    """Neighbor count i(X, Y) (side="plain", X non-special) or i_A/i_B(S_n, Y)."""
    if side == "plain":
        return analysis.index_plain(n, x_cls, y_cls)
    if side in ("A", "B"):
        if x_cls != analysis.special(n):
            raise ValueError("sided index is only defined at the special class")
        return analysis.index_side(n, side, y_cls)
    raise ValueError(f"unknown side {side!r}")


def build_indexed(analysis: Analysis, n: int, side: str) -> Graph:
    """The side graph at level n as an edge-indexed graph over class indices.

    Vertex ids are class indices, vertex colors are the classes' root colors,
    loops are the self-counts, and the marks "special"/"central" point at S_n
    and C_n.  Level -1 is the one-vertex base graph with a loop of full
    degree.
    """
    if side not in ("A", "B"):
        raise ValueError(f"side must be 'A' or 'B', not {side!r}")
    d = analysis.g.degree
    if n == -1:
        ch0 = analysis.chain(0)
        base_cls = ch0.A if side == "A" else ch0.B
        color = analysis.ball(0, base_cls).root_color
        return Graph(
            d,
            (Vertex(0, color, d),),
            (),
            marks=(("special", 0), ("central", 0)),
        )
    ch = analysis.chain(n)
    s_cls = ch.S

    def idx(x_cls: int, y_cls: int) -> int:
        if x_cls == s_cls:
            return analysis.index_side(n, side, y_cls)
        return analysis.index_plain(n, x_cls, y_cls)

    reach = {s_cls}
    frontier = [s_cls]
    while frontier:
        x = frontier.pop()
        profile = (
            analysis.neighbor_profile(n + 1, analysis.chain(n + 1).A if side == "A" else analysis.chain(n + 1).B, n)
            if x == s_cls
            else analysis.neighbor_profile(n + 1, analysis.extension_of(n, x), n)
        )
        for y, cnt in profile.items():
            if cnt > 0 and y not in reach:
                reach.add(y)
                frontier.append(y)

    order = sorted(reach)
    vertices = tuple(
        Vertex(x, analysis.ball(n, x).root_color, idx(x, x)) for x in order
    )
    edges = []
    for i, x in enumerate(order):
        for y in order[i + 1 :]:
            fwd, rev = idx(x, y), idx(y, x)
            if fwd or rev:
                edges.append(Edge(x, y, fwd, rev))
    for x in order:
        total = idx(x, x) + sum(idx(x, y) for y in order if y != x)
        if total != d:
            raise NotSturmianError(n, f"index sum {total} != degree {d} at class {x} in side {side}")
    marks = [("special", s_cls)]
    if ch.C is not None:
        if ch.C not in reach:
            raise NotSturmianError(n, f"central class {ch.C} missing from side {side}")
        marks.append(("central", ch.C))
    return Graph(d, vertices, tuple(edges), marks=tuple(marks))


def side_graphs(analysis: Analysis, n: int) -> tuple[Graph, Graph]:
    return build_indexed(analysis, n, "A"), build_indexed(analysis, n, "B")
