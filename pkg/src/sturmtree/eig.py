"""Edge-indexed colored graphs.

An edge-indexed colored graph is a finite graph with a color on every vertex,
a non-negative loop index on every vertex, and a pair of integer indices on
every edge, one per orientation.  Such a graph is the quotient of a colored
d-regular tree exactly when, at every vertex, the loop index plus the indices
of the oriented edges leaving the vertex sum to d; the tree is recovered by
unfolding (see `cover`).

Linear graphs may carry truncation flags: a flag on an end means the stored
graph is a finite prefix of an infinite quotient ray or line, and data at the
flagged end vertex is provisional.  The left end of a linear graph is the path
end whose vertex is declared first in the vertex list.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import (
    DuplicateVertexError,
    EigSyntaxError,
    UnknownVertexError,
)

COLORS = ("a", "b")


@dataclass(frozen=True)
class Vertex:
    id: int
    color: str
    loop: int = 0


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    fwd: int  # index of the orientation u -> v
    rev: int  # index of the orientation v -> u


@dataclass(eq=False)
class Graph:
    """Immutable by convention; all operations return new graphs."""

    degree: int
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    truncated: frozenset[str] = frozenset()
    marks: tuple[tuple[str, int], ...] = ()
    _adj: dict | None = field(default=None, repr=False, compare=False)
    _caches: dict = field(default_factory=dict, repr=False, compare=False)

    # -- basic accessors -------------------------------------------------

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(v.id for v in self.vertices)

    def vertex(self, vid: int) -> Vertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise UnknownVertexError(f"vertex {vid} not in graph")

    def has_vertex(self, vid: int) -> bool:
        return any(v.id == vid for v in self.vertices)

    def color_of(self, vid: int) -> str:
        return self.vertex(vid).color

    def loop_of(self, vid: int) -> int:
        return self.vertex(vid).loop

    def adj(self, vid: int) -> tuple[tuple[int, int, int], ...]:
        """Non-loop neighbors of `vid` as (other, out_index, in_index)."""
        if self._adj is None:
            table: dict[int, list] = {v.id: [] for v in self.vertices}
            for e in self.edges:
                table[e.u].append((e.v, e.fwd, e.rev))
                table[e.v].append((e.u, e.rev, e.fwd))
            object.__setattr__(self, "_adj", {k: tuple(xs) for k, xs in table.items()})
        try:
            return self._adj[vid]
        except KeyError:
            raise UnknownVertexError(f"vertex {vid} not in graph") from None

    def out_index(self, u: int, v: int) -> int:
        for w, fwd, _ in self.adj(u):
            if w == v:
                return fwd
        return 0

    def degree_sum(self, vid: int) -> int:
        return self.loop_of(vid) + sum(fwd for _, fwd, _ in self.adj(vid))

    def mark(self, name: str) -> int | None:
        for key, vid in self.marks:
            if key == name:
                return vid
        return None

    def with_marks(self, **marks: int) -> "Graph":
        kept = tuple((k, v) for k, v in self.marks if k not in marks)
        return replace(self, marks=kept + tuple(marks.items()), _adj=None, _caches={})

    # -- linear structure -------------------------------------------------

    def linear_order(self) -> list[int] | None:
        """Vertex ids in path order, or None if the graph is not a path.

        The first-listed end is placed leftmost.  Loops are ignored.
        """
        n = len(self.vertices)
        if n == 0:
            return None
        if any(len(self.adj(v.id)) > 2 for v in self.vertices):
            return None
        ends = [v.id for v in self.vertices if len(self.adj(v.id)) <= 1]
        if n == 1:
            return [self.vertices[0].id]
        if len(ends) != 2:
            return None
        decl = {v.id: i for i, v in enumerate(self.vertices)}
        start = min(ends, key=decl.__getitem__)
        order = [start]
        prev = None
        while True:
            nexts = [w for w, _, _ in self.adj(order[-1]) if w != prev]
            if not nexts:
                break
            prev = order[-1]
            order.append(nexts[0])
        return order if len(order) == n else None

    def truncated_vertex_ids(self) -> frozenset[int]:
        """Vertices whose data is provisional because an end is truncated."""
        if not self.truncated:
            return frozenset()
        order = self.linear_order()
        if order is None:
            return frozenset()
        out = set()
        if "left" in self.truncated:
            out.add(order[0])
        if "right" in self.truncated:
            out.add(order[-1])
        return frozenset(out)

    # -- structural equality (marks excluded: presentation metadata) ------

    def _key(self):
        vs = frozenset((v.id, v.color, v.loop) for v in self.vertices)
        es = frozenset(
            (e.u, e.v, e.fwd, e.rev) if e.u <= e.v else (e.v, e.u, e.rev, e.fwd)
            for e in self.edges
        )
        return (self.degree, vs, es, self.truncated)

    def __eq__(self, other):
        return isinstance(other, Graph) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


def make_graph(degree, vertices, edges=(), truncated=(), marks=()) -> Graph:
    """Build a graph from (id, color, loop) and (u, v, fwd, rev) tuples."""
    vs = []
    seen = set()
    for spec in vertices:
        vid, color, loop = spec if len(spec) == 3 else (*spec, 0)
        if vid in seen:
            raise DuplicateVertexError(0, f"duplicate vertex {vid}")
        seen.add(vid)
        vs.append(Vertex(vid, color, loop))
    es = []
    pairs = set()
    for u, v, fwd, rev in edges:
        if u not in seen or v not in seen:
            raise UnknownVertexError(f"edge {u}-{v} references unknown vertex")
        if u == v:
            raise ValueError("loops are stored on the vertex, not as edges")
        key = (min(u, v), max(u, v))
        if key in pairs:
            raise ValueError(f"parallel edge {u}-{v}")
        pairs.add(key)
        es.append(Edge(u, v, fwd, rev))
    return Graph(degree, tuple(vs), tuple(es), frozenset(truncated), tuple(marks))


# -- validation ------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str  # DegreeMismatch | ZeroIndexEdge | BadColor | BadLoop | BadTruncation
    subject: object
    expected: object = None
    actual: object = None

    def __str__(self):
        extra = ""
        if self.expected is not None or self.actual is not None:
            extra = f" (expected {self.expected}, got {self.actual})"
        return f"{self.kind}: {self.subject}{extra}"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]


def validate_graph(g: Graph) -> ValidationReport:
    """Check that `g` is covered by a colored `degree`-regular tree.

    Vertices at truncated ends are exempt from the degree-sum check, since
    their missing continuation would supply the balance.
    """
    bad: list[Violation] = []
    for v in g.vertices:
        if v.color not in COLORS:
            bad.append(Violation("BadColor", v.id, COLORS, v.color))
        if v.loop < 0:
            bad.append(Violation("BadLoop", v.id, ">= 0", v.loop))
    for e in g.edges:
        if e.fwd < 1:
            bad.append(Violation("ZeroIndexEdge", (e.u, e.v), ">= 1", e.fwd))
        if e.rev < 1:
            bad.append(Violation("ZeroIndexEdge", (e.v, e.u), ">= 1", e.rev))
    if g.truncated and g.linear_order() is None:
        bad.append(Violation("BadTruncation", tuple(sorted(g.truncated)), "linear graph", "non-linear"))
    exempt = g.truncated_vertex_ids()
    for v in g.vertices:
        if v.id in exempt:
            continue
        s = g.degree_sum(v.id)
        if s != g.degree:
            bad.append(Violation("DegreeMismatch", v.id, g.degree, s))
    return ValidationReport(not bad, tuple(bad))


# -- isomorphism -------------------------------------------------------------


def find_isomorphism(g1: Graph, g2: Graph, color_match=None, candidates=None):
    """A color/loop/index-preserving vertex bijection, or None.

    `color_match(c1, c2)` overrides literal color equality.  `candidates`
    optionally restricts the images of selected g1 vertices (a mapping from
    vertex id to a set of g2 vertex ids); vertices absent from it are
    unrestricted.  Truncated ends must map to truncated ends.
    """
    if g1.degree != g2.degree:
        return None
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None
    same = color_match or (lambda c1, c2: c1 == c2)
    t1, t2 = g1.truncated_vertex_ids(), g2.truncated_vertex_ids()

    def profile(g, vid):
        return tuple(sorted((f, r) for _, f, r in g.adj(vid)))

    cand: dict[int, list[int]] = {}
    for v in g1.vertices:
        allowed = candidates.get(v.id) if candidates else None
        cs = [
            w.id
            for w in g2.vertices
            if same(v.color, w.color)
            and v.loop == w.loop
            and profile(g1, v.id) == profile(g2, w.id)
            and ((v.id in t1) == (w.id in t2))
            and (allowed is None or w.id in allowed)
        ]
        if not cs:
            return None
        cand[v.id] = cs

    order = sorted(cand, key=lambda vid: len(cand[vid]))
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def consistent(vid, wid):
        for u, fwd, rev in g1.adj(vid):
            if u in mapping:
                hit = [(x, f, r) for x, f, r in g2.adj(wid) if x == mapping[u]]
                if not hit or hit[0][1] != fwd or hit[0][2] != rev:
                    return False
        # mapped g1-non-neighbors must not become neighbors
        nbrs1 = {u for u, _, _ in g1.adj(vid)}
        for u, w in mapping.items():
            if u not in nbrs1 and any(x == w for x, _, _ in g2.adj(wid)):
                return False
        return True

    def search(i):
        if i == len(order):
            return True
        vid = order[i]
        for wid in cand[vid]:
            if wid in used or not consistent(vid, wid):
                continue
            mapping[vid] = wid
            used.add(wid)
            if search(i + 1):
                return True
            del mapping[vid]
            used.discard(wid)
        return False

    return dict(mapping) if search(0) else None


def graphs_isomorphic(g1: Graph, g2: Graph, color_match=None) -> tuple[bool, dict | None]:
    witness = find_isomorphism(g1, g2, color_match=color_match)
    return witness is not None, witness


# -- .eig text format --------------------------------------------------------


def parse_eig(text: str) -> Graph:
    """Parse the `.eig` line format.

    Statements, one per line (`#` starts a comment):
        degree <d>
        truncated left|right|left right
        v <id> <a|b> [loop=<n>]
        e <u> <v> <i(u->v)> <i(v->u)>
    """
    degree = None
    truncated: set[str] = set()
    vertices: list[tuple[int, str, int]] = []
    edges: list[tuple[int, int, int, int]] = []
    seen: set[int] = set()
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind, args = parts[0], parts[1:]
        if kind == "degree":
            if degree is not None:
                raise EigSyntaxError(ln, "duplicate degree statement")
            if len(args) != 1 or not args[0].isdigit():
                raise EigSyntaxError(ln, "usage: degree <d>")
            degree = int(args[0])
        elif kind == "truncated":
            if not args or any(side not in ("left", "right") for side in args):
                raise EigSyntaxError(ln, "usage: truncated left|right|left right")
            truncated.update(args)
        elif kind == "v":
            if degree is None:
                raise EigSyntaxError(ln, "degree must come first")
            if len(args) < 2:
                raise EigSyntaxError(ln, "usage: v <id> <color> [loop=<n>]")
            try:
                vid = int(args[0])
            except ValueError:
                raise EigSyntaxError(ln, f"bad vertex id {args[0]!r}") from None
            if vid in seen:
                raise DuplicateVertexError(ln, f"duplicate vertex {vid}")
            seen.add(vid)
            color = args[1]
            loop = 0
            for opt in args[2:]:
                if opt.startswith("loop="):
                    try:
                        loop = int(opt[5:])
                    except ValueError:
                        raise EigSyntaxError(ln, f"bad loop index {opt!r}") from None
                else:
                    raise EigSyntaxError(ln, f"unknown option {opt!r}")
            vertices.append((vid, color, loop))
        elif kind == "e":
            if len(args) != 4:
                raise EigSyntaxError(ln, "usage: e <u> <v> <fwd> <rev>")
            try:
                u, v, fwd, rev = (int(x) for x in args)
            except ValueError:
                raise EigSyntaxError(ln, "edge fields must be integers") from None
            if u not in seen or v not in seen:
                raise UnknownVertexError(f"line {ln}: edge {u}-{v} references undeclared vertex")
            edges.append((u, v, fwd, rev))
        else:
            raise EigSyntaxError(ln, f"unknown statement {kind!r}")
    if degree is None:
        raise EigSyntaxError(0, "missing degree statement")
    return make_graph(degree, vertices, edges, truncated)


def serialize_eig(g: Graph) -> str:
    """Canonical text form; `parse_eig(serialize_eig(g)) == g`."""
    lines = [f"degree {g.degree}"]
    if g.truncated:
        lines.append("truncated " + " ".join(sorted(g.truncated)))
    for v in g.vertices:
        loop = f" loop={v.loop}" if v.loop else ""
        lines.append(f"v {v.id} {v.color}{loop}")
    for e in g.edges:
        lines.append(f"e {e.u} {e.v} {e.fwd} {e.rev}")
    return "\n".join(lines) + "\n"


# -- DOT export --------------------------------------------------------------

_FILL = {"a": ("white", "black"), "b": ("black", "white")}


def to_dot(g: Graph, name: str = "G") -> str:
    """Undirected DOT rendering; edges labeled fwd/rev, loops by their index."""
    lines = [f"graph {name} {{", "  node [style=filled];"]
    for v in g.vertices:
        fill, font = _FILL.get(v.color, ("lightgray", "black"))
        lines.append(
            f'  {v.id} [label="{v.color}{v.id}" fillcolor="{fill}" fontcolor="{font}"];'
        )
        if v.loop:
            lines.append(f'  {v.id} -- {v.id} [label="{v.loop}"];')
    for e in g.edges:
        lines.append(f'  {e.u} -- {e.v} [label="{e.fwd}/{e.rev}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
