"""The forward induction: reading the index sequence off an analyzed coloring.

Level by level, exactly one of the two side graphs changes (or both at the
pivot level K, or neither), and a changed side graph is the concatenation of
the two previous side graphs at their central classes.  The verification is
literal: candidate concatenations are built and matched against the actual
side graph by an isomorphism that is required to act by concentric
restriction on classes.  The extracted data (growth levels n_k, growing side
alpha_k, concatenation indices i_k, and the membership letters beta_k of a
reference vertex) is the input format of the synthesis module, closing the
round trip.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .balls import Analysis
from .ballgraphs import build_Gn, build_indexed, detect_cycle
from .concat import concat_i, concat_ij
from .eig import Graph, find_isomorphism
from .errors import (
    ConcatError,
    DecompositionMismatchError,
    HorizonError,
    NotSturmianError,
    SturmTreeError,
)
from .synthesis import AdmissibleSequence, build_prefix, validate_alpha_i


class CyclicInputError(SturmTreeError):
    """Induction traces are defined for acyclic colorings only."""


@dataclass
class StepReport:
    """Outcome of verifying one level transition n-1 -> n."""

    n: int
    grew: dict  # side -> bool
    kinds: dict  # side -> "i" | "ij" | None
    indices: dict  # side -> extracted tuple | None


@dataclass
class BoundednessReport:
    verdict: str  # "bounded" | "unbounded-within-horizon"
    cyclic: bool
    cycle_level: int | None
    cycle: list | None
    stable_side: str | None
    stable_run: int
    checked_to: int

    @property
    def bounded(self) -> bool:
        return self.verdict == "bounded"


@dataclass
class InductionTrace:
    degree: int
    K: int
    n_k: list
    alpha: str
    i_seq: list
    cases: list
    beta: str
    beta_vertex: int | None
    bounded: str
    cyclic: bool

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema": "stree-trace/1",
                "d": self.degree,
                "K": self.K,
                "nk": list(self.n_k),
                "alpha": self.alpha,
                "i": [list(t) for t in self.i_seq],
                "cases": list(self.cases),
                "beta": self.beta,
                "beta_vertex": self.beta_vertex,
                "bounded": self.bounded,
                "cyclic": self.cyclic,
            },
            indent=2,
        )


def _other(side: str) -> str:
    return "B" if side == "A" else "A"


def _restriction_is_isomorphism(analysis: Analysis, n: int, side: str) -> bool:
    """Does concentric restriction map the level-n side graph onto level n-1?"""
    cur = build_indexed(analysis, n, side)
    prev = build_indexed(analysis, n - 1, side)
    if len(cur.vertices) != len(prev.vertices):
        return False
    mapping = {}
    for x in cur.ids:
        xr = analysis.restrict_class(n, x) if n >= 1 else 0
        if not prev.has_vertex(xr):
            return False
        mapping[x] = xr
    if len(set(mapping.values())) != len(mapping):
        return False
    for x in cur.ids:
        y = mapping[x]
        if cur.color_of(x) != prev.color_of(y) or cur.loop_of(x) != prev.loop_of(y):
            return False
        for w, fwd, rev in cur.adj(x):
            hits = [(z, f, r) for z, f, r in prev.adj(y) if z == mapping[w]]
            if not hits or hits[0][1] != fwd or hits[0][2] != rev:
                return False
        if len(cur.adj(x)) != len(prev.adj(y)):
            return False
    return True


def _growth_kind(analysis: Analysis, n: int, side: str) -> str | None:
    """None if the side is expected to stay; else the concatenation kind."""
    ch = analysis.chain(n)
    tau = ch.A if side == "B" else ch.B  # the opposite side's class
    if ch.C is None:
        raise HorizonError(f"level {n}: central class unknown, prefix too short")
    if tau == ch.S:
        return "ij"
    if tau == ch.C:
        if n == 0:
            return "ij"  # the empty-ball level below has S = C
        prev = analysis.chain(n - 1)
        if prev.C is None:
            raise HorizonError(f"level {n - 1}: central class unknown")
        return "ij" if prev.S == prev.C else "i"
    return None


def _allowed_images(analysis: Analysis, n: int, x_cls: int, eig_a, eig_b, res):
    if n == 0:
        return {res.map1[eig_a.ids[0]], res.map2[eig_b.ids[0]]}
    xr = analysis.restrict_class(n, x_cls)
    out = set()
    if eig_a.has_vertex(xr):
        out.add(res.map1[xr])
    if eig_b.has_vertex(xr):
        out.add(res.map2[xr])
    return out


def _extract_growth(analysis: Analysis, n: int, side: str, kind: str):
    """Find the unique concatenation reproducing the grown side graph."""
    eig_a = build_indexed(analysis, n - 1, "A")
    eig_b = build_indexed(analysis, n - 1, "B")
    va, vb = eig_a.mark("central"), eig_b.mark("central")
    if va is None or vb is None:
        raise HorizonError(f"level {n - 1}: central class unknown, prefix too short")
    cur = build_indexed(analysis, n, side)

    if kind == "i":
        nbrs = eig_a.adj(va)
        if len(nbrs) != 1:
            raise DecompositionMismatchError(n, "joining class is not an end vertex")
        m = nbrs[0][1]
        candidates = [(i,) for i in range(1, m)]
    else:
        l1, l2 = eig_a.loop_of(va), eig_b.loop_of(vb)
        candidates = [(i, j) for i in range(1, l1 + 1) for j in range(1, l2 + 1)]

    matches = []
    for cand in candidates:
        try:
            if kind == "i":
                res = concat_i(eig_a, va, eig_b, vb, cand[0])
            else:
                res = concat_ij(eig_a, va, eig_b, vb, cand[0], cand[1])
        except ConcatError as exc:
            raise DecompositionMismatchError(n, f"concatenation precondition failed: {exc}")
        allowed = {
            x: _allowed_images(analysis, n, x, eig_a, eig_b, res) for x in cur.ids
        }
        if any(not imgs for imgs in allowed.values()):
            continue
        witness = find_isomorphism(cur, res.graph, candidates=allowed)
        if witness is not None:
            matches.append(cand)
    if not matches:
        raise DecompositionMismatchError(
            n, f"no ({kind})-concatenation reproduces side {side} at level {n}"
        )
    if len(matches) > 1:
        raise DecompositionMismatchError(
            n, f"ambiguous concatenation indices {matches} for side {side}"
        )
    return matches[0]


def verify_step_decomposition(g_or_analysis, n: int) -> StepReport:
    """Check the level n-1 -> n transition on both sides and extract indices."""
    analysis = (
        g_or_analysis
        if isinstance(g_or_analysis, Analysis)
        else Analysis(g_or_analysis, n + 2)
    )
    rep = StepReport(n, {}, {}, {})
    for side in "AB":
        kind = _growth_kind(analysis, n, side)
        rep.kinds[side] = kind
        if kind is None:
            if not _restriction_is_isomorphism(analysis, n, side):
                raise DecompositionMismatchError(
                    n, f"side {side} changed although no growth was predicted"
                )
            rep.grew[side] = False
            rep.indices[side] = None
        else:
            if _restriction_is_isomorphism(analysis, n, side):
                raise DecompositionMismatchError(
                    n, f"side {side} was predicted to grow but did not change"
                )
            rep.grew[side] = True
            rep.indices[side] = _extract_growth(analysis, n, side, kind)
    return rep


def extract_trace(g_or_analysis, n_max: int, beta_vertex: int | None = None) -> InductionTrace:
    """Extract (K, n_k, alpha_k, i_k) plus a reference beta sequence.

    Requires the coloring to be Sturmian and acyclic through the horizon;
    every level transition is verified against its predicted concatenation.
    """
    analysis = (
        g_or_analysis
        if isinstance(g_or_analysis, Analysis)
        else Analysis(g_or_analysis, n_max + 2)
    )
    if not analysis.is_sturmian_through(n_max + 1):
        raise NotSturmianError(n_max + 1, "class counts break the b_n = n + 2 pattern")
    for n in range(n_max + 1):
        if detect_cycle(build_Gn(analysis, n)) is not None:
            raise CyclicInputError(f"class adjacency at level {n} contains a cycle")

    # pivot level: the S = A = C chain holds strictly below K
    K = None
    for n in range(n_max + 1):
        ch = analysis.chain(n)
        if not (ch.S == ch.A and ch.C is not None and ch.C == ch.S):
            K = n
            break
    if K is None:
        raise HorizonError(f"pivot level beyond horizon {n_max}")

    n_k: list[int] = []
    alpha: list[str] = []
    i_seq: list[tuple[int, ...]] = []
    cases: list[str] = []
    for n in range(n_max + 1):
        rep = verify_step_decomposition(analysis, n)
        if not (rep.grew["A"] or rep.grew["B"]):
            continue
        n_k.append(n)
        if rep.grew["A"] and rep.grew["B"]:
            if n != K:
                raise DecompositionMismatchError(n, "both sides grew away from the pivot level")
            ia, ja = rep.indices["A"]
            ib, jb = rep.indices["B"]
            if ja != jb:
                raise DecompositionMismatchError(n, f"pivot j indices differ: {ja} != {jb}")
            if not ia < ib:
                raise DecompositionMismatchError(n, f"pivot indices not increasing: {ia} >= {ib}")
            alpha.append("A")
            i_seq.append((ia, ib, ja))
            cases.append("2a")
        else:
            side = "A" if rep.grew["A"] else "B"
            alpha.append(side)
            i_seq.append(rep.indices[side])
            if n < K:
                if side != "B":
                    raise DecompositionMismatchError(n, "growth below the pivot must be on side B")
                cases.append("1")
            elif n == K:
                if side != "A":
                    raise DecompositionMismatchError(n, "single-sided growth at the pivot must be on side A")
                cases.append("2b")
            else:
                cases.append("3")

    if n_k[: K + 1] != list(range(K + 1)):
        raise DecompositionMismatchError(K, f"growth levels {n_k} do not start 0..{K}")

    check = validate_alpha_i(
        AdmissibleSequence(analysis.g.degree, "".join(alpha), tuple(i_seq), "".join(alpha))
    )
    if not check.ok:
        raise DecompositionMismatchError(-1, f"extracted sequence inadmissible: {check.message}")

    boundedness = classify_boundedness(analysis, n_max)
    if beta_vertex is None:
        beta_vertex = _default_beta_vertex(analysis, n_k)
    beta = beta_letters(analysis, n_k, "".join(alpha), beta_vertex)
    return InductionTrace(
        degree=analysis.g.degree,
        K=K,
        n_k=n_k,
        alpha="".join(alpha),
        i_seq=i_seq,
        cases=cases,
        beta=beta,
        beta_vertex=beta_vertex,
        bounded=boundedness.verdict,
        cyclic=boundedness.cyclic,
    )


def _default_beta_vertex(analysis: Analysis, n_k: list) -> int:
    """Leftmost vertex whose ball at the deepest growth level is complete."""
    need = n_k[-1] if n_k else 0
    order = analysis.g.linear_order() or [v.id for v in analysis.g.vertices]
    for vid in order:
        if analysis.class_of(vid, need) is not None:
            return vid
    raise HorizonError(f"no vertex has a complete radius-{need} ball")


def beta_letters(analysis: Analysis, n_k: list, alpha: str, vid: int) -> str:
    """beta_0 .. beta_{T-2} for the vertex: beta_{k-1} records which side
    graph at level n_k contains the vertex's ball class."""
    beta: list[str] = []
    for k in range(1, len(n_k)):
        nk = n_k[k]
        cls = analysis.class_of(vid, nk)
        if cls is None:
            raise HorizonError(f"vertex {vid}: radius-{nk} ball incomplete")
        bar = _other(alpha[k])
        in_bar = build_indexed(analysis, nk, bar).has_vertex(cls)
        beta.append(bar if in_bar else alpha[k])
    for k in range(1, len(beta)):
        if beta[k] not in (alpha[k], beta[k - 1]):
            raise DecompositionMismatchError(
                n_k[k], f"beta letter {beta[k]} violates the admissibility recurrence"
            )
    for k, letter in enumerate(beta):
        cls = analysis.class_of(vid, n_k[k])
        if not build_indexed(analysis, n_k[k], letter).has_vertex(cls):
            raise DecompositionMismatchError(
                n_k[k], "vertex ball class missing from its beta side graph"
            )
    return "".join(beta)


def classify_boundedness(g_or_analysis, n_max: int) -> BoundednessReport:
    """Bounded type evidence: a cycle at some level, or a stabilized side."""
    analysis = (
        g_or_analysis
        if isinstance(g_or_analysis, Analysis)
        else Analysis(g_or_analysis, n_max + 2)
    )
    cycle_level = None
    cycle = None
    for n in range(n_max + 1):
        found = detect_cycle(build_Gn(analysis, n))
        if found is not None:
            cycle_level, cycle = n, found
            break
    run = max(3, n_max // 4)
    stable_side = None
    stable_run = 0
    for side in "AB":
        count = 0
        for n in range(n_max, 0, -1):
            cur = build_indexed(analysis, n, side)
            prev = build_indexed(analysis, n - 1, side)
            if find_isomorphism(cur, prev) is None:
                break
            count += 1
        if count > stable_run:
            stable_side, stable_run = side, count
    bounded = cycle_level is not None or stable_run >= run
    return BoundednessReport(
        verdict="bounded" if bounded else "unbounded-within-horizon",
        cyclic=cycle_level is not None,
        cycle_level=cycle_level,
        cycle=cycle,
        stable_side=stable_side if stable_run >= run else None,
        stable_run=stable_run,
        checked_to=n_max,
    )


# -- round trips ---------------------------------------------------------------


@dataclass
class RoundTripReport:
    ok: bool
    detail: str
    k_recovered: int = -1
    beta_agree_from: int | None = None


def roundtrip_sequence(seq: AdmissibleSequence, k_max: int | None = None) -> RoundTripReport:
    """Synthesize, re-analyze, and compare the recovered index data."""
    from .synthesis import strip_truncation

    pre = build_prefix(seq, k_max)
    g = strip_truncation(pre.graph)
    cap = pre.n_guaranteed - 2
    if cap < 1:
        return RoundTripReport(False, "prefix too short to re-analyze")
    trace = extract_trace(g, cap)
    t = len(trace.i_seq)
    if trace.K != seq.K:
        return RoundTripReport(False, f"pivot K mismatch: {trace.K} != {seq.K}")
    if trace.alpha != seq.alpha[:t]:
        return RoundTripReport(False, f"alpha mismatch: {trace.alpha} != {seq.alpha[:t]}")
    for k in range(t):
        if tuple(trace.i_seq[k]) != tuple(seq.i_seq[k]):
            return RoundTripReport(
                False, f"index mismatch at k = {k}: {trace.i_seq[k]} != {seq.i_seq[k]}", k
            )
    limit = min(len(trace.beta), len(seq.beta))
    agree_from = None
    for k0 in range(limit + 1):
        if all(trace.beta[k] == seq.beta[k] for k in range(k0, limit)):
            agree_from = k0
            break
    if agree_from is None or agree_from == limit:
        return RoundTripReport(False, f"beta tails disagree: {trace.beta} vs {seq.beta[:limit]}", t)
    return RoundTripReport(True, f"recovered k = 0..{t - 1}", t, agree_from)


def ray_overlap_equal(g1: Graph, g2: Graph) -> tuple[bool, int, str]:
    """Compare two linear prefixes from their left ends.

    All vertex colors, loops and edge indices must agree on the common
    stretch; the last shared position is compared by color only, since a
    truncated end vertex carries provisional data.
    """
    o1, o2 = g1.linear_order(), g2.linear_order()
    if o1 is None or o2 is None:
        return False, 0, "not linear"
    n = min(len(o1), len(o2))
    for i in range(n):
        u, v = o1[i], o2[i]
        if g1.color_of(u) != g2.color_of(v):
            return False, i, f"color differs at position {i}"
        if i == n - 1:
            break
        if g1.loop_of(u) != g2.loop_of(v):
            return False, i, f"loop differs at position {i}"
        f1 = g1.out_index(u, o1[i + 1])
        r1 = g1.out_index(o1[i + 1], u)
        f2 = g2.out_index(v, o2[i + 1])
        r2 = g2.out_index(o2[i + 1], v)
        if (f1, r1) != (f2, r2):
            return False, i, f"edge indices differ at position {i}"
    return True, n, f"prefixes agree on {n} positions"


def roundtrip_graph(g: Graph, n_max: int) -> RoundTripReport:
    """Analyze, re-synthesize from the trace, and compare the prefixes."""
    trace = extract_trace(g, n_max)
    t = len(trace.i_seq)
    if t < 2 or not trace.beta:
        return RoundTripReport(False, "trace too short to resynthesize")
    length = len(trace.beta)
    seq = AdmissibleSequence(
        trace.degree,
        trace.alpha[:length],
        tuple(tuple(x) for x in trace.i_seq[:length]),
        trace.beta,
    )
    pre = build_prefix(seq)
    ok, overlap, detail = ray_overlap_equal(g, pre.graph)
    return RoundTripReport(ok, detail, length - 1)
