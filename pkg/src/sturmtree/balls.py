"""Ball-class census over a quotient graph: complexity and the special chain.

For a valid quotient graph g and a level n, the distinct canonical radius-n
balls over the usable (complete) vertices form the level-n class table.  For
a coloring of minimal unbounded complexity the class counts satisfy
b_n = n + 2, exactly one class per level extends concentrically to two
(n+1)-classes (the special class S_n), the two extensions are named A_{n+1}
and B_{n+1} (A_{n+1} is the one seeing more A_n-classed neighbors), and C_n
denotes the concentric restriction of S_{n+1}.

All neighbor-count indices are derived from class representatives and checked
for representative independence.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .cover import ColoredBall, restrict_ball, unfold_ball
from .eig import Graph, validate_graph
from .errors import (
    AmbiguousAssignmentError,
    HorizonError,
    IllDefinedIndexError,
    NotSturmianError,
)


@dataclass
class LevelTable:
    """All radius-n classes realized at complete vertices of the graph."""

    n: int
    balls: list[ColoredBall]  # ordered by canonical digest
    reps: list[list[int]]  # representative vertex ids per class
    skipped: tuple[int, ...]  # window vertices with incomplete balls
    window: tuple[int, ...]
    saturated: bool

    @property
    def b(self) -> int:
        return len(self.balls)

    def index_of_form(self, form) -> int | None:
        return self._by_form.get(form)

    def __post_init__(self):
        self._by_form = {ball.form: i for i, ball in enumerate(self.balls)}


@dataclass(frozen=True)
class ChainLevel:
    """Class indices of S_n, A_n, B_n and C_n at one level."""

    n: int
    S: int
    A: int
    B: int
    C: int | None  # None when level n+1 is beyond the horizon


def classify_balls(g: Graph, n: int, window=None) -> LevelTable:
    """Census of radius-n classes over `window` (default: all vertices).

    Vertices whose ball is incomplete are skipped and recorded.  The table is
    saturated when enlarging the window to every usable vertex of g adds no
    class; for a truncated prefix this means saturated within the prefix.
    """
    all_ids = g.ids
    window = tuple(window) if window is not None else all_ids
    groups: dict[object, list[int]] = {}
    ball_of: dict[object, ColoredBall] = {}
    skipped = []
    for vid in window:
        ball = unfold_ball(g, vid, n)
        if not ball.complete:
            skipped.append(vid)
            continue
        groups.setdefault(ball.form, []).append(vid)
        ball_of[ball.form] = ball
    full_forms = set(groups)
    if set(window) != set(all_ids):
        full_forms = set()
        for vid in all_ids:
            ball = unfold_ball(g, vid, n)
            if ball.complete:
                full_forms.add(ball.form)
    order = sorted(groups, key=lambda f: f.digest)
    return LevelTable(
        n=n,
        balls=[ball_of[f] for f in order],
        reps=[groups[f] for f in order],
        skipped=tuple(skipped),
        window=window,
        saturated=set(groups) == full_forms,
    )


class Analysis:
    """Lazy per-level analysis of one quotient graph.

    Level tables, extension maps, the S/A/B/C chain and neighbor-count
    indices are computed on demand and cached.  `n_max` bounds the deepest
    level table this analysis will compute; requests beyond it, or at levels
    with no complete vertices, raise HorizonError.
    """

    def __init__(self, g: Graph, n_max: int):
        report = validate_graph(g)
        if not report.ok:
            raise ValueError(f"invalid graph: {report.violations[0]}")
        self.g = g
        self.n_max = n_max
        self._tables: dict[int, LevelTable] = {}
        self._ext: dict[int, dict[int, list[int]]] = {}
        self._special: dict[int, int | None] = {}
        self._chains: dict[int, ChainLevel] = {}
        self._profiles: dict[tuple, Counter] = {}

    # -- tables and classes ------------------------------------------------

    def table(self, n: int) -> LevelTable:
        if n > self.n_max:
            raise HorizonError(f"level {n} beyond analysis horizon {self.n_max}")
        tab = self._tables.get(n)
        if tab is None:
            tab = classify_balls(self.g, n)
            if not tab.balls:
                raise HorizonError(f"no complete radius-{n} balls in the prefix")
            self._tables[n] = tab
        return tab

    def max_complete_level(self) -> int:
        """Largest n <= n_max at which some vertex has a complete ball."""
        best = -1
        for n in range(self.n_max + 1):
            tab = classify_balls(self.g, n)
            if not tab.balls:
                break
            best = n
        return best

    def class_of(self, vid: int, n: int) -> int | None:
        ball = unfold_ball(self.g, vid, n)
        if not ball.complete:
            return None
        return self.table(n).index_of_form(ball.form)

    def ball(self, n: int, idx: int) -> ColoredBall:
        return self.table(n).balls[idx]

    def label(self, n: int, idx: int) -> str:
        return f"n{n}#{idx}:{self.ball(n, idx).digest}"

    def restrict_class(self, n: int, idx: int) -> int:
        """Class index at level n-1 of the concentric restriction."""
        smaller = restrict_ball(self.ball(n, idx), n - 1)
        out = self.table(n - 1).index_of_form(smaller.form)
        if out is None:
            raise HorizonError(f"restriction of class {idx} at level {n} unseen at {n - 1}")
        return out

    # -- extensions and the special class -----------------------------------

    def extensions(self, n: int) -> dict[int, list[int]]:
        """Map level-n class -> the level-(n+1) classes extending it."""
        ext = self._ext.get(n)
        if ext is None:
            up = self.table(n + 1)
            ext = {i: [] for i in range(self.table(n).b)}
            for j in range(up.b):
                ext[self.restrict_class(n + 1, j)].append(j)
            self._ext[n] = ext
        return ext

    def special(self, n: int) -> int | None:
        """The unique doubly-extended class at level n, if any."""
        if n in self._special:
            return self._special[n]
        ext = self.extensions(n)
        missing = [i for i, es in ext.items() if not es]
        if missing:
            raise HorizonError(
                f"level {n}: classes {missing} have no observed extension (prefix too short)"
            )
        wide = [i for i, es in ext.items() if len(es) >= 3]
        if wide:
            raise NotSturmianError(n, f"class {wide[0]} has {len(ext[wide[0]])} extensions")
        doubles = [i for i, es in ext.items() if len(es) == 2]
        if len(doubles) > 1:
            raise NotSturmianError(n, f"multiple doubly-extended classes {doubles}")
        out = doubles[0] if doubles else None
        self._special[n] = out
        return out

    def is_sturmian_through(self, n: int) -> bool:
        return all(self.table(m).b == m + 2 for m in range(n + 1))

    # -- neighbor profiles (the index machinery) -----------------------------

    def neighbor_counts(self, vid: int, t: int) -> Counter:
        """Classes (level t) of the tree-neighbors of a lift of `vid`."""
        c: Counter = Counter()
        for w, fwd, _ in self.g.adj(vid):
            cls = self.class_of(w, t)
            if cls is None:
                raise HorizonError(f"neighbor {w} has incomplete radius-{t} ball")
            c[cls] += fwd
        loop = self.g.loop_of(vid)
        if loop:
            cls = self.class_of(vid, t)
            if cls is None:
                raise HorizonError(f"vertex {vid} has incomplete radius-{t} ball")
            c[cls] += loop
        return c

    def neighbor_profile(self, m: int, cls: int, t: int) -> Counter:
        """Neighbor class counts at level t < m around centers of class `cls` (level m).

        Checked across every representative; disagreement means the class
        does not determine its neighborhood, which signals a bug or an
        unusable window.
        """
        if not t < m:
            raise ValueError("profile level must be below the class level")
        key = (m, cls, t)
        got = self._profiles.get(key)
        if got is not None:
            return got
        reps = self.table(m).reps[cls]
        profiles = [self.neighbor_counts(x, t) for x in reps]
        for p in profiles[1:]:
            if p != profiles[0]:
                raise IllDefinedIndexError(
                    f"level-{m} class {cls}: representatives disagree on level-{t} neighbors"
                )
        self._profiles[key] = profiles[0]
        return profiles[0]

    def extension_of(self, n: int, idx: int) -> int:
        es = self.extensions(n)[idx]
        if len(es) != 1:
            raise ValueError(f"class {idx} at level {n} has {len(es)} extensions")
        return es[0]

    def index_plain(self, n: int, x_cls: int, y_cls: int) -> int:
        """i(X_n, Y_n) for non-special X: neighbors of an X-center classed Y."""
        if x_cls == self.special(n):
            raise ValueError("plain index undefined for the special class; use index_side")
        return self.neighbor_profile(n + 1, self.extension_of(n, x_cls), n)[y_cls]

    def index_side(self, n: int, side: str, y_cls: int) -> int:
        """i_A/i_B(S_n, Y_n): Y-classed neighbors of S_n seen inside A_{n+1}/B_{n+1}."""
        ch = self.chain(n + 1)
        up = ch.A if side == "A" else ch.B
        return self.neighbor_profile(n + 1, up, n)[y_cls]

    # -- the S/A/B/C chain ---------------------------------------------------

    def chain(self, n: int) -> ChainLevel:
        got = self._chains.get(n)
        if got is not None:
            return got
        if not self.is_sturmian_through(n):
            raise NotSturmianError(n, "class counts break the b_n = n + 2 pattern")
        if n == 0:
            s0 = self.special(0)
            if s0 is None:
                raise NotSturmianError(0, "no doubly-extended color")
            others = [i for i in range(self.table(0).b) if i != s0]
            a0, b0 = s0, others[0]
            ch = ChainLevel(0, S=s0, A=a0, B=b0, C=self._central(0))
        else:
            prev = self.chain(n - 1)
            sn = self.special(n)
            if sn is None:
                raise NotSturmianError(n, "no doubly-extended class")
            e1, e2 = self.extensions(n - 1)[prev.S]
            c1 = self.neighbor_profile(n, e1, n - 1)[prev.A]
            c2 = self.neighbor_profile(n, e2, n - 1)[prev.A]
            if c1 == c2:
                raise AmbiguousAssignmentError(
                    n, f"extensions {e1},{e2} of the special class see {c1} A-neighbors each"
                )
            a_n, b_n = (e1, e2) if c1 > c2 else (e2, e1)
            ch = ChainLevel(n, S=sn, A=a_n, B=b_n, C=self._central(n))
        self._chains[n] = ch
        return ch

    def _central(self, n: int) -> int | None:
        """C_n = concentric restriction of S_{n+1}, when level n+1 is reachable."""
        try:
            s_up = self.special(n + 1)
        except HorizonError:
            return None
        if s_up is None:
            return None
        return self.restrict_class(n + 1, s_up)


# -- spec-level operations ----------------------------------------------------


@dataclass
class ComplexityProfile:
    bs: list[int]
    saturated: list[bool]
    is_sturmian_up_to: int  # largest n with b_m = m + 2 for all m <= n; -1 if none
    stopped_reason: str | None = None

    @property
    def sturmian(self) -> bool:
        return self.is_sturmian_up_to == len(self.bs) - 1 and not self.stopped_reason


def complexity_profile(g: Graph, n_max: int) -> ComplexityProfile:
    """b_0 .. b_{n_max}, cut short with a reason when the prefix runs out."""
    bs: list[int] = []
    sat: list[bool] = []
    reason = None
    for n in range(n_max + 1):
        tab = classify_balls(g, n)
        if not tab.balls:
            reason = f"no complete radius-{n} balls in the prefix"
            break
        bs.append(tab.b)
        sat.append(tab.saturated)
    up_to = -1
    for n, b in enumerate(bs):
        if b == n + 2:
            up_to = n
        else:
            break
    return ComplexityProfile(bs, sat, up_to, reason)


def special_chain(g: Graph, n_max: int, analysis: Analysis | None = None) -> list[ChainLevel]:
    """The (S_n, A_n, B_n, C_n) assignments for n = 0..n_max."""
    analysis = analysis or Analysis(g, n_max + 2)
    return [analysis.chain(n) for n in range(n_max + 1)]


def type_set(g: Graph, vid: int, n_max: int, analysis: Analysis | None = None) -> set[int]:
    """Levels m <= n_max at which the ball at `vid` is the special class."""
    analysis = analysis or Analysis(g, n_max + 2)
    out = set()
    for m in range(n_max + 1):
        cls = analysis.class_of(vid, m)
        if cls is None:
            raise HorizonError(f"vertex {vid} has incomplete radius-{m} ball")
        if cls == analysis.special(m):
            out.add(m)
    return out


def level_report(analysis: Analysis, n: int) -> dict:
    """JSON-ready census report for one level."""
    tab = analysis.table(n)
    try:
        ch = analysis.chain(n)
        s_idx, a_idx, b_idx, c_idx = ch.S, ch.A, ch.B, ch.C
    except (NotSturmianError, HorizonError):
        s_idx = a_idx = b_idx = c_idx = None
    return {
        "n": n,
        "b": tab.b,
        "classes": [ball.render(max_nodes=512) for ball in tab.balls],
        "S": s_idx,
        "A": a_idx,
        "B": b_idx,
        "C": c_idx,
        "saturated": tab.saturated,
    }
