"""Synthesis of quotient-graph prefixes from admissible index sequences.

A sequence is given by a degree d, a side letter alpha_k in {A, B} per step,
an index tuple i_k per step, and a side letter beta_k per step.  Writing
K = min{k : alpha_k = A}, admissibility requires:

* for k < K:  i_k = (i, j) with 1 <= i < d and 1 <= j <= d - i_{k-1}
  (with i_{-1} = 0);
* for k = K:  i_K = (i, i', j) with 1 <= i < i' <= d, or (for K >= 1)
  i_K = (i, j) with 1 <= i <= d; in both cases 1 <= j <= d - i_{K-1};
  three entries are mandatory when K = 0;
* for k > K:  i_k = (i) with 1 <= i < c, or i_k = (i, j) with
  1 <= i, j <= d - c, where c is the current common-end index.

The end-index triple (end_A, end_B, end_C) starts at K from the base rule
and evolves by: end_C' = old end of the stagnant side, stagnant side's
end' = old end_C, growing side's end unchanged.  d - end_C is the loop at
the common (gluing) end vertices, and end_C is their outgoing edge index, so
a validated sequence never violates a concatenation precondition.

Two frame graphs are grown by concatenation, one per side letter; the
growing side at step k is alpha_k (both grow at K when i_K has three
entries).  The emitted prefix is the frame selected by the final beta
letter.  A k-step prefix realizes exactly n + 2 radius-n ball classes for
every n up to its frame level (frame size minus two), and these agree with
the ball classes of the infinite extension, so analyses within that radius
may treat the prefix as a complete quotient.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from .concat import concat_i, concat_ij
from .eig import Edge, Graph, Vertex
from .errors import AdmissibilityError


@dataclass(frozen=True)
class AdmissibleSequence:
    degree: int
    alpha: str  # letters A/B, one per step k = 0..k_max
    i_seq: tuple[tuple[int, ...], ...]
    beta: str  # letters A/B, same length

    def __post_init__(self):
        if not (len(self.alpha) == len(self.i_seq) == len(self.beta)):
            raise ValueError("alpha, i_seq and beta must have equal lengths")
        if any(c not in "AB" for c in self.alpha + self.beta):
            raise ValueError("side letters must be 'A' or 'B'")

    @property
    def k_max(self) -> int:
        return len(self.i_seq) - 1

    @property
    def K(self) -> int | None:
        k = self.alpha.find("A")
        return k if k >= 0 else None

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema": "stree-seq/1",
                "d": self.degree,
                "alpha": self.alpha,
                "i": [list(t) for t in self.i_seq],
                "beta": self.beta,
            },
            indent=2,
        )

    @staticmethod
    def from_json(text: str) -> "AdmissibleSequence":
        data = json.loads(text)
        return AdmissibleSequence(
            degree=int(data["d"]),
            alpha=str(data["alpha"]),
            i_seq=tuple(tuple(int(x) for x in t) for t in data["i"]),
            beta=str(data["beta"]),
        )


@dataclass(frozen=True)
class SequenceReport:
    ok: bool
    k_fail: int | None
    message: str | None
    ends: tuple  # per-step (end_A, end_B, end_C), None before K


def validate_alpha_i(seq: AdmissibleSequence) -> SequenceReport:
    """Check every index constraint; report the first failure and end triples."""
    d = seq.degree
    K = seq.K
    ends: list[tuple[int, int, int] | None] = []
    prev_i = 0  # i_{-1}

    def fail(k, msg):
        return SequenceReport(False, k, f"step {k}: {msg}", tuple(ends))

    for k, ik in enumerate(seq.i_seq):
        if K is None or k < K:
            if len(ik) != 2:
                return fail(k, f"expected (i, j) before the first A step, got arity {len(ik)}")
            i, j = ik
            if not 1 <= i < d:
                return fail(k, f"need 1 <= i < d = {d}, got i = {i}")
            if not 1 <= j <= d - prev_i:
                return fail(k, f"need 1 <= j <= d - i_(k-1) = {d - prev_i}, got j = {j}")
            ends.append(None)
            prev_i = i
        elif k == K:
            if len(ik) == 3:
                i, ip, j = ik
                if not 1 <= i < ip <= d:
                    return fail(k, f"need 1 <= i_K < i'_K <= d = {d}, got ({i}, {ip})")
                end_a, end_b = i, ip
            elif len(ik) == 2:
                if K == 0:
                    return fail(k, "a three-entry index tuple is required when K = 0")
                i, j = ik
                if not 1 <= i <= d:
                    return fail(k, f"need 1 <= i <= d = {d}, got i = {i}")
                end_a, end_b = i, prev_i
            else:
                return fail(k, f"expected arity 2 or 3 at the first A step, got {len(ik)}")
            if not 1 <= j <= d - prev_i:
                return fail(k, f"need 1 <= j <= d - i_(K-1) = {d - prev_i}, got j = {j}")
            ends.append((end_a, end_b, seq.i_seq[0][-1]))
        else:
            end_a, end_b, end_c = ends[-1]
            if len(ik) == 1:
                (i,) = ik
                if not 1 <= i < end_c:
                    return fail(k, f"need 1 <= i < {end_c}, got i = {i}")
            elif len(ik) == 2:
                i, j = ik
                bound = d - end_c
                if not 1 <= i <= bound:
                    return fail(k, f"need 1 <= i <= d - {end_c} = {bound}, got i = {i}")
                if not 1 <= j <= bound:
                    return fail(k, f"need 1 <= j <= d - {end_c} = {bound}, got j = {j}")
            else:
                return fail(k, f"expected arity 1 or 2 past the first A step, got {len(ik)}")
            if seq.alpha[k] == "A":
                ends.append((end_a, end_c, end_b))
            else:
                ends.append((end_c, end_b, end_a))
    return SequenceReport(True, None, None, tuple(ends))


def validate_beta(alpha: str, beta: str) -> bool:
    """beta_k must equal alpha_k or beta_{k-1}; beta_{-1} is unconstrained."""
    if len(alpha) != len(beta):
        return False
    return all(
        beta[k] == alpha[k] or (k >= 1 and beta[k] == beta[k - 1]) or k == 0
        for k in range(len(beta))
    )


def validate_sequence(seq: AdmissibleSequence) -> SequenceReport:
    rep = validate_alpha_i(seq)
    if not rep.ok:
        return rep
    if not validate_beta(seq.alpha, seq.beta):
        return SequenceReport(False, None, "beta is not admissible for alpha", rep.ends)
    return rep


# -- frame construction -------------------------------------------------------


@dataclass(frozen=True)
class Frame:
    """Both side graphs after step k, with their distinguished end vertices.

    emb_a / emb_b give, per source side letter, the embedding of that side's
    previous graph into the new fa / fb (only for sides actually embedded).
    """

    k: int
    fa: Graph
    fb: Graph
    common_a: int
    common_b: int
    noncommon_a: int
    noncommon_b: int
    n_level: int  # |V| - 2 of the last grown side graph
    emb_a: dict
    emb_b: dict


def synth_start(degree: int) -> Frame:
    fa = Graph(degree, (Vertex(0, "a", degree),), ())
    fb = Graph(degree, (Vertex(0, "b", degree),), ())
    return Frame(-1, fa, fb, 0, 0, 0, 0, -1, {"A": {0: 0}}, {"B": {0: 0}})


def synth_step(frame: Frame, alpha_k: str, ik: tuple[int, ...], K: int | None) -> Frame:
    """One induction step; assumes the sequence was validated."""
    k = frame.k + 1
    if K is None or k < K:
        return _step_pre_k(frame, k, *ik)
    if k == K:
        return _step_at_k(frame, k, ik)
    return _step_post_k(frame, k, alpha_k, ik)


def _step_pre_k(frame: Frame, k: int, i: int, j: int) -> Frame:
    # glue the one-vertex A graph onto the B chain, at the A-copy added last
    res = concat_ij(frame.fa, frame.common_a, frame.fb, frame.common_b, i, j)
    return Frame(
        k,
        frame.fa,
        res.graph,
        common_a=frame.common_a,
        common_b=res.map1[frame.common_a],
        noncommon_a=frame.noncommon_a,
        noncommon_b=res.map2[frame.noncommon_b],
        n_level=len(res.graph.vertices) - 2,
        emb_a={"A": {v: v for v in frame.fa.ids}},
        emb_b={"A": dict(res.map1), "B": dict(res.map2)},
    )


def _step_at_k(frame: Frame, k: int, ik: tuple[int, ...]) -> Frame:
    # the end of the B chain away from the gluing site becomes the common
    # end of both new graphs
    far_b = frame.noncommon_b
    if len(ik) == 3:
        i, ip, j = ik
        res_a = concat_ij(frame.fa, frame.common_a, frame.fb, frame.common_b, i, j)
        res_b = concat_ij(frame.fa, frame.common_a, frame.fb, frame.common_b, ip, j)
        return Frame(
            k,
            res_a.graph,
            res_b.graph,
            common_a=res_a.map2[far_b],
            common_b=res_b.map2[far_b],
            noncommon_a=res_a.map1[frame.common_a],
            noncommon_b=res_b.map1[frame.common_a],
            n_level=len(res_a.graph.vertices) - 2,
            emb_a={"A": dict(res_a.map1), "B": dict(res_a.map2)},
            emb_b={"A": dict(res_b.map1), "B": dict(res_b.map2)},
        )
    i, j = ik
    res_a = concat_ij(frame.fa, frame.common_a, frame.fb, frame.common_b, i, j)
    return Frame(
        k,
        res_a.graph,
        frame.fb,
        common_a=res_a.map2[far_b],
        common_b=far_b,
        noncommon_a=res_a.map1[frame.common_a],
        noncommon_b=frame.common_b,
        n_level=len(res_a.graph.vertices) - 2,
        emb_a={"A": dict(res_a.map1), "B": dict(res_a.map2)},
        emb_b={"B": {v: v for v in frame.fb.ids}},
    )


def _step_post_k(frame: Frame, k: int, alpha_k: str, ik: tuple[int, ...]) -> Frame:
    if len(ik) == 1:
        res = concat_i(frame.fa, frame.common_a, frame.fb, frame.common_b, ik[0])
    else:
        res = concat_ij(frame.fa, frame.common_a, frame.fb, frame.common_b, ik[0], ik[1])
    grown = res.graph
    level = len(grown.vertices) - 2
    emb_grown = {"A": dict(res.map1), "B": dict(res.map2)}
    if alpha_k == "A":
        return Frame(
            k,
            grown,
            frame.fb,
            common_a=res.map2[frame.noncommon_b],
            common_b=frame.noncommon_b,
            noncommon_a=res.map1[frame.noncommon_a],
            noncommon_b=frame.common_b,
            n_level=level,
            emb_a=emb_grown,
            emb_b={"B": {v: v for v in frame.fb.ids}},
        )
    return Frame(
        k,
        frame.fa,
        grown,
        common_a=frame.noncommon_a,
        common_b=res.map1[frame.noncommon_a],
        noncommon_a=frame.common_a,
        noncommon_b=res.map2[frame.noncommon_b],
        n_level=level,
        emb_a={"A": {v: v for v in frame.fa.ids}},
        emb_b=emb_grown,
    )


def run_synthesis(seq: AdmissibleSequence, k_max: int | None = None) -> list[Frame]:
    """Frames for k = -1 .. k_max (default: the whole sequence)."""
    rep = validate_sequence(seq)
    if not rep.ok:
        raise AdmissibilityError(rep.message)
    k_max = seq.k_max if k_max is None else k_max
    if k_max > seq.k_max:
        raise AdmissibilityError(f"k_max {k_max} exceeds sequence length {seq.k_max}")
    frames = [synth_start(seq.degree)]
    for k in range(k_max + 1):
        frames.append(synth_step(frames[-1], seq.alpha[k], seq.i_seq[k], seq.K))
    return frames


@dataclass(frozen=True)
class PrefixResult:
    graph: Graph  # ray/line prefix, vertex ids 0..N-1 left to right
    frames: tuple[Frame, ...]
    inclusions: tuple[dict, ...]  # per step k: beta_k-side graph ids -> prefix ids
    n_guaranteed: int  # ball classes of radius <= this agree with the extension


def _tail_settled(seq: AdmissibleSequence, k_max: int) -> bool:
    """Horizon extrapolation: does the prefix look like a one-ended ray?"""
    if seq.beta[k_max] != seq.alpha[k_max]:
        return False
    return k_max >= 1 and seq.alpha[k_max - 1] == seq.alpha[k_max]


def build_prefix(seq: AdmissibleSequence, k_max: int | None = None) -> PrefixResult:
    """The quotient prefix carried by the beta-selected frame chain.

    The gluing end keeps growing and is flagged truncated (the right end);
    the opposite end is flagged too unless the side letters settle, within
    the horizon, into the one-ended pattern.
    """
    frames = run_synthesis(seq, k_max)
    k_last = frames[-1].k
    beta_last = seq.beta[k_last]
    final = frames[-1]
    g = final.fa if beta_last == "A" else final.fb
    common = final.common_a if beta_last == "A" else final.common_b

    order = g.linear_order()
    if order is None or (order[0] != common and order[-1] != common):
        raise AdmissibilityError("internal: synthesized frame is not a marked path")
    if order[0] == common:
        order = order[::-1]  # gluing end to the right

    renum = {vid: i for i, vid in enumerate(order)}
    truncated = {"right"}
    if not _tail_settled(seq, k_last):
        truncated.add("left")
    vertices = tuple(
        Vertex(renum[vid], g.color_of(vid), g.loop_of(vid)) for vid in sorted(order, key=renum.get)
    )
    edges = tuple(Edge(renum[e.u], renum[e.v], e.fwd, e.rev) for e in g.edges)
    prefix = Graph(g.degree, vertices, edges, frozenset(truncated))

    # inclusion of each step's beta-side graph into the final prefix
    acc = {vid: renum[vid] for vid in g.ids}
    maps = [dict(acc)]
    for k in range(k_last, 0, -1):
        step = frames[k + 1]  # frames[0] is k = -1
        src_side = seq.beta[k - 1]
        dst_side = seq.beta[k]
        emb = (step.emb_a if dst_side == "A" else step.emb_b)[src_side]
        acc = {v: acc[w] for v, w in emb.items() if w in acc}
        maps.append(dict(acc))
    maps.reverse()
    return PrefixResult(prefix, tuple(frames), tuple(maps), n_guaranteed=max(final.n_level, 0))


def strip_truncation(g: Graph) -> Graph:
    """The same graph viewed as a complete finite quotient."""
    return replace(g, truncated=frozenset(), _adj=None, _caches={})


# -- random sequences (for property tests and the acceptance suite) -----------


def random_admissible(rng, degree: int, k_max: int, beta_equals_alpha: bool = True) -> AdmissibleSequence:
    d = degree
    K = rng.randint(0, min(2, k_max))
    alpha = ["B"] * K + ["A"]
    i_seq: list[tuple[int, ...]] = []
    prev_i = 0
    for _ in range(K):
        i = rng.randint(1, d - 1)
        j = rng.randint(1, d - prev_i)
        i_seq.append((i, j))
        prev_i = i
    if K == 0 or rng.random() < 0.7:
        i = rng.randint(1, d - 1)
        ip = rng.randint(i + 1, d)
        j = rng.randint(1, d - prev_i)
        i_seq.append((i, ip, j))
        ends = (i, ip, i_seq[0][-1])
    else:
        i = rng.randint(1, d)
        j = rng.randint(1, d - prev_i)
        i_seq.append((i, j))
        ends = (i, prev_i, i_seq[0][-1])
    while len(i_seq) <= k_max:
        end_a, end_b, end_c = ends
        side = rng.choice("AB")
        kinds = (["i"] if end_c >= 2 else []) + (["ij"] if d - end_c >= 1 else [])
        kind = rng.choice(kinds)
        if kind == "i":
            i_seq.append((rng.randint(1, end_c - 1),))
        else:
            bound = d - end_c
            i_seq.append((rng.randint(1, bound), rng.randint(1, bound)))
        alpha.append(side)
        ends = (end_a, end_c, end_b) if side == "A" else (end_c, end_b, end_a)
    alpha_s = "".join(alpha)
    beta_s = alpha_s if beta_equals_alpha else _random_beta(rng, alpha_s)
    seq = AdmissibleSequence(d, alpha_s, tuple(i_seq), beta_s)
    rep = validate_sequence(seq)
    if not rep.ok:
        raise AssertionError(f"random sequence invalid: {rep.message}")
    return seq


def _random_beta(rng, alpha: str) -> str:
    beta = []
    for k, a in enumerate(alpha):
        pool = {"A", "B"} if k == 0 else {a, beta[-1]}
        beta.append(rng.choice(sorted(pool)))
    return "".join(beta)
