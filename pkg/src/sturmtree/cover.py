"""Unfolding a quotient graph into colored balls of its covering tree.

A vertex v of an edge-indexed colored graph lifts to a vertex of the covering
d-regular tree.  The radius-n ball around any lift of v is determined by the
graph alone, by the unfolding rule: the lift of v has i(e) neighbors over the
far end of every non-loop edge e out of v, and loop(v) neighbors over v
itself; a child entered along an oriented edge owes one of its backward
indices to its parent.

Balls are kept in canonical form: a node is (color, multiset of child forms),
hash-consed so that equal subtrees are one shared object.  Equality of
canonical forms is exactly color-preserving rooted isomorphism of balls.
Forms are content-addressed (children ordered by digest), so canonical ids
are stable across processes.  Balls that would read data at a truncated end
vertex are marked incomplete; an incomplete region is a cut node.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .eig import Graph
from .errors import RadiusError, TruncationHitError, UnknownVertexError


class BallForm:
    """Interned canonical form node.  Compare by identity."""

    __slots__ = ("color", "children", "digest", "complete", "size")

    def __init__(self, color, children, digest, complete, size):
        self.color = color
        self.children = children  # tuple[BallForm, ...] | None (cut node)
        self.digest = digest
        self.complete = complete
        self.size = size

    def __repr__(self):
        return f"<form {self.color}:{self.digest.hex()[:8]}>"


_INTERN: dict[bytes, BallForm] = {}


def _make_form(color: str, children) -> BallForm:
    """children: iterable of BallForm, or None for a cut node."""
    h = hashlib.blake2b(digest_size=16)
    h.update(color.encode())
    if children is None:
        h.update(b"?")
        digest = h.digest()
        node = _INTERN.get(digest)
        if node is None:
            node = _INTERN.setdefault(digest, BallForm(color, None, digest, False, 1))
        return node
    kids = tuple(sorted(children, key=lambda c: c.digest))
    for c in kids:
        h.update(c.digest)
    digest = h.digest()
    node = _INTERN.get(digest)
    if node is None:
        complete = all(c.complete for c in kids)
        size = 1 + sum(c.size for c in kids)
        node = _INTERN.setdefault(digest, BallForm(color, kids, digest, complete, size))
    return node


def render_form(form: BallForm, max_nodes: int = 4096) -> str:
    """Deterministic text form "(color;{child,child,...})"; digests past `max_nodes`."""
    if form.size > max_nodes:
        return f"({form.color};#{form.digest.hex()[:12]})"
    memo: dict[int, str] = {}

    def go(f: BallForm) -> str:
        got = memo.get(id(f))
        if got is not None:
            return got
        if f.children is None:
            s = f"({f.color};?)"
        elif not f.children:
            s = f.color
        else:
            s = f"({f.color};{{{','.join(sorted(go(c) for c in f.children))}}})"
        memo[id(f)] = s
        return s

    return go(form)


@dataclass(frozen=True)
class ColoredBall:
    """A class of colored radius-n balls, in canonical form."""

    radius: int
    form: BallForm = field(compare=True)

    @property
    def root_color(self) -> str:
        return self.form.color

    @property
    def complete(self) -> bool:
        return self.form.complete

    @property
    def digest(self) -> str:
        return self.form.digest.hex()[:12]

    def render(self, max_nodes: int = 4096) -> str:
        return render_form(self.form, max_nodes)

    def __repr__(self):
        flag = "" if self.complete else " incomplete"
        return f"<ball r={self.radius} {self.render(64)}{flag}>"


# incoming-direction tags for the unfolding recursion
_ROOT = None
_LOOP = ("L",)


def unfold_ball(g: Graph, vid: int, n: int) -> ColoredBall:
    """Canonical radius-n ball around any lift of `vid` in the covering tree."""
    if not g.has_vertex(vid):
        raise UnknownVertexError(f"vertex {vid} not in graph")
    cache = g._caches.setdefault("unfold", {})
    flagged = g._caches.get("flagged")
    if flagged is None:
        flagged = g.truncated_vertex_ids()
        g._caches["flagged"] = flagged

    def sub(x: int, inc, depth: int) -> BallForm:
        key = (x, inc, depth)
        got = cache.get(key)
        if got is not None:
            return got
        color = g.color_of(x)
        if depth == 0:
            form = _make_form(color, ())
        elif x in flagged:
            form = _make_form(color, None)
        else:
            kids: list[BallForm] = []
            nloop = g.loop_of(x) - (1 if inc == _LOOP else 0)
            if nloop > 0:
                kids.extend([sub(x, _LOOP, depth - 1)] * nloop)
            for w, fwd, _ in g.adj(x):
                cnt = fwd - (1 if inc == ("E", w) else 0)
                if cnt > 0:
                    kids.extend([sub(w, ("E", x), depth - 1)] * cnt)
            form = _make_form(color, kids)
        cache[key] = form
        return form

    return ColoredBall(n, sub(vid, _ROOT, n))


def restrict_ball(ball: ColoredBall, m: int) -> ColoredBall:
    """The concentric radius-m ball inside `ball`."""
    if m > ball.radius:
        raise RadiusError(f"cannot restrict radius {ball.radius} to {m}")
    memo: dict[tuple[int, int], BallForm] = {}

    def go(f: BallForm, depth: int) -> BallForm:
        key = (id(f), depth)
        got = memo.get(key)
        if got is not None:
            return got
        if depth == 0:
            out = _make_form(f.color, ())
        elif f.children is None:
            out = _make_form(f.color, None)
        else:
            out = _make_form(f.color, [go(c, depth - 1) for c in f.children])
        memo[key] = out
        return out

    return ColoredBall(m, go(ball.form, m))


# -- explicit-cover oracle ---------------------------------------------------


class CoverNode:
    """A literal tree vertex of the explicit cover."""

    __slots__ = ("color", "proj", "children")

    def __init__(self, color: str, proj: int):
        self.color = color
        self.proj = proj
        self.children: list[CoverNode] = []

    def count(self) -> int:
        return 1 + sum(c.count() for c in self.children)


def brute_force_cover(g: Graph, vid: int, radius: int, rng=None) -> CoverNode:
    """Build the radius-R ball as a literal tree by breadth-first lifting.

    Exponential in `radius`; intended as an independent oracle for
    `unfold_ball` at small radii.  Raises TruncationHitError if the ball
    would need data at a truncated end.  If `rng` is given, child lists are
    shuffled, which must not affect the canonical form.
    """
    if not g.has_vertex(vid):
        raise UnknownVertexError(f"vertex {vid} not in graph")
    flagged = g.truncated_vertex_ids()
    root = CoverNode(g.color_of(vid), vid)
    frontier: list[tuple[CoverNode, object]] = [(root, _ROOT)]
    for _ in range(radius):
        next_frontier = []
        for node, inc in frontier:
            x = node.proj
            if x in flagged:
                raise TruncationHitError(f"ball reaches truncated vertex {x}")
            kids: list[tuple[CoverNode, object]] = []
            nloop = g.loop_of(x) - (1 if inc == _LOOP else 0)
            for _ in range(max(nloop, 0)):
                kids.append((CoverNode(g.color_of(x), x), _LOOP))
            for w, fwd, _ in g.adj(x):
                cnt = fwd - (1 if inc == ("E", w) else 0)
                for _ in range(max(cnt, 0)):
                    kids.append((CoverNode(g.color_of(w), w), ("E", x)))
            if rng is not None:
                rng.shuffle(kids)
            node.children = [child for child, _ in kids]
            next_frontier.extend(kids)
        frontier = next_frontier
    return root


def canonical_of_cover(node: CoverNode) -> str:
    """Naive canonical string of an explicit tree (independent of BallForm)."""
    if not node.children:
        return node.color
    inner = ",".join(sorted(canonical_of_cover(c) for c in node.children))
    return f"({node.color};{{{inner}}})"
