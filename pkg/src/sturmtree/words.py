"""Binary words of minimal complexity: mechanical words, two-interval
induction, factor complexity and factor graphs.

The mechanical word of slope theta and intercept rho has letters
s_n = floor((n+1) theta + rho) - floor(n theta + rho) (or the ceiling
variant), emitted here for n = 0, 1, 2, ...  Slopes and intercepts are exact:
either rationals or quadratic numbers (p + q sqrt(D)) / r, so no floating
point ever decides a floor.

The induction pair starts at (u, v) = (0, 1) and evolves by
R(u, v) = (u, uv) and L(u, v) = (vu, v); applying R^(a1 - 1), then L^(a2),
then R^(a3), ... for the continued fraction [0; a1, a2, ...] of the slope
makes both components converge to the mechanical word with rho = theta.

The factor graph at order n has the distinct length-n factors as vertices
and an edge u -> v whenever uy = xv is a factor of length n + 1.  For words
of complexity n + 1 it is a union of two directed cycles whose intersection
is a single vertex or a directed segment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import PrecisionInsufficientError, PrefixTooShortError


@dataclass(frozen=True)
class Quadratic:
    """Exact (p + q*sqrt(d)) / r with integer p, q, r (r > 0), d >= 0."""

    p: int
    q: int
    d: int
    r: int = 1

    def __post_init__(self):
        if self.r == 0:
            raise ZeroDivisionError("zero denominator")
        if self.d < 0:
            raise ValueError("negative radicand")
        if self.r < 0:
            object.__setattr__(self, "p", -self.p)
            object.__setattr__(self, "q", -self.q)
            object.__setattr__(self, "r", -self.r)
        g = math.gcd(math.gcd(abs(self.p), abs(self.q)), self.r)
        if g > 1:
            object.__setattr__(self, "p", self.p // g)
            object.__setattr__(self, "q", self.q // g)
            object.__setattr__(self, "r", self.r // g)

    @staticmethod
    def from_fraction(x: Fraction, d: int = 0) -> "Quadratic":
        return Quadratic(x.numerator, 0, d, x.denominator)

    def _coerce(self, other) -> "Quadratic":
        if isinstance(other, Quadratic):
            if other.q and self.q and other.d != self.d:
                raise ValueError(f"mixed radicands {self.d} and {other.d}")
            d = self.d if self.q else (other.d if other.q else self.d)
            return Quadratic(other.p, other.q, d, other.r)
        if isinstance(other, int):
            other = Fraction(other)
        if isinstance(other, Fraction):
            return Quadratic.from_fraction(other, self.d)
        raise TypeError(f"cannot combine Quadratic with {type(other)!r}")

    def __add__(self, other) -> "Quadratic":
        o = self._coerce(other)
        d = self.d if self.q else o.d
        return Quadratic(self.p * o.r + o.p * self.r, self.q * o.r + o.q * self.r, d, self.r * o.r)

    __radd__ = __add__

    def __mul__(self, n: int) -> "Quadratic":
        if not isinstance(n, int):
            raise TypeError("only integer scaling is needed or supported")
        return Quadratic(self.p * n, self.q * n, self.d, self.r)

    __rmul__ = __mul__

    def is_rational(self) -> bool:
        return self.q == 0 or self.d in (0, 1) or math.isqrt(self.d) ** 2 == self.d

    def as_fraction(self) -> Fraction:
        if self.q == 0 or self.d == 0:
            return Fraction(self.p, self.r)
        root = math.isqrt(self.d)
        if root * root != self.d:
            raise ValueError("irrational value")
        return Fraction(self.p + self.q * root, self.r)

    def floor(self) -> int:
        if self.is_rational():
            return math.floor(self.as_fraction())
        # sign of p - m r + q sqrt(d) decides m <= value
        approx = (self.p + self.q * math.sqrt(self.d)) / self.r
        m = math.floor(approx)
        while _sign_with_root(self.p - m * self.r, self.q, self.d) < 0:
            m -= 1
        while _sign_with_root(self.p - (m + 1) * self.r, self.q, self.d) >= 0:
            m += 1
        return m

    def ceil(self) -> int:
        if self.is_rational():
            return math.ceil(self.as_fraction())
        return self.floor() + 1  # an irrational value is never an integer

    def __neg__(self) -> "Quadratic":
        return Quadratic(-self.p, -self.q, self.d, self.r)


def _sign_with_root(a: int, b: int, d: int) -> int:
    """Sign of a + b*sqrt(d) for integers a, b and non-square d > 0."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    lhs, rhs = a * a, b * b * d
    if a > 0:  # b < 0: compare a against |b| sqrt(d)
        return (lhs > rhs) - (lhs < rhs)
    return (rhs > lhs) - (rhs < lhs)


def _as_exact(x):
    if isinstance(x, Quadratic):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    raise TypeError("slope and intercept must be Fraction or Quadratic")


def mechanical_word(theta, rho, length: int, mode: str = "floor") -> str:
    """Letters s_0 .. s_{length-1} of the mechanical word.

    A rational slope needs denominator > length**2, so that no lattice
    ambiguity can occur within the emitted prefix.
    """
    if mode not in ("floor", "ceil"):
        raise ValueError("mode must be 'floor' or 'ceil'")
    theta, rho = _as_exact(theta), _as_exact(rho)
    if isinstance(theta, Fraction) and theta.denominator <= length * length:
        raise PrecisionInsufficientError(
            f"rational slope denominator {theta.denominator} <= length^2 = {length * length}"
        )

    def value(n: int):
        return theta * n + rho

    def step(x) -> int:
        if isinstance(x, Fraction):
            return math.floor(x) if mode == "floor" else math.ceil(x)
        return x.floor() if mode == "floor" else x.ceil()

    letters = []
    prev = step(value(0))
    for n in range(1, length + 1):
        cur = step(value(n))
        letters.append(str(cur - prev))
        prev = cur
    word = "".join(letters)
    if any(c not in "01" for c in word):
        raise ValueError("slope outside (0, 1) produced non-binary letters")
    return word


# -- two-interval induction ----------------------------------------------------


def induction_R(u: str, v: str) -> tuple[str, str]:
    return u, u + v


def induction_L(u: str, v: str) -> tuple[str, str]:
    return v + u, v


def cf_induction(quotients) -> tuple[str, str]:
    """Apply R^(a1 - 1), L^(a2), R^(a3), ... to (u, v) = ("0", "1")."""
    u, v = "0", "1"
    for pos, a in enumerate(quotients):
        if a < 1:
            raise ValueError("partial quotients must be >= 1")
        reps = a - 1 if pos == 0 else a
        op = induction_R if pos % 2 == 0 else induction_L
        for _ in range(reps):
            u, v = op(u, v)
    return u, v


def cf_word(quotients, length: int) -> str:
    """Length-`length` prefix of the limit of the induction pair."""
    u, v = cf_induction(quotients)
    longer = u if len(u) >= len(v) else v
    shorter = v if longer is u else u
    if not longer.startswith(shorter):
        raise ValueError("induction pair lost the common-prefix property")
    if len(longer) < length:
        raise ValueError(
            f"only {len(longer)} letters available; supply more partial quotients"
        )
    return longer[:length]


# -- factor statistics ---------------------------------------------------------


def factors(w: str, n: int) -> set[str]:
    return {w[i : i + n] for i in range(len(w) - n + 1)}


def word_complexity(w: str, n: int, infinite: bool = False) -> int:
    """Number of distinct length-n factors of w.

    With infinite=True the count is asserted to be that of the infinite word
    the prefix came from, which needs len(w) >= 10 n + 100.
    """
    if n > len(w):
        raise PrefixTooShortError(f"no length-{n} factor in a length-{len(w)} word")
    if infinite and len(w) < 10 * n + 100:
        raise PrefixTooShortError(f"need at least {10 * n + 100} letters, have {len(w)}")
    return len(factors(w, n))


@dataclass(frozen=True)
class RauzyGraph:
    n: int
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    case: str | None  # "i" | "ii" | None when the two-cycle shape fails
    cycles: tuple[tuple[str, ...], tuple[str, ...]] | None


def word_rauzy_graph(w: str, n: int) -> RauzyGraph:
    """Factor graph of order n, with its two-cycle decomposition.

    Case "i": the two cycles share exactly one vertex (a bispecial factor).
    Case "ii": they share a directed segment from the left-special to the
    right-special factor.
    """
    if n < 1:
        raise ValueError("factor graphs are defined for n >= 1 here")
    if len(w) < 10 * n + 100:
        raise PrefixTooShortError(f"need at least {10 * n + 100} letters, have {len(w)}")
    verts = tuple(sorted(factors(w, n)))
    edges = tuple(sorted({(f[:-1], f[1:]) for f in factors(w, n + 1)}))
    out: dict[str, list[str]] = {v: [] for v in verts}
    inn: dict[str, list[str]] = {v: [] for v in verts}
    for u, v in edges:
        out[u].append(v)
        inn[v].append(u)

    case = None
    cycles = None
    right = [v for v in verts if len(out[v]) == 2]
    left = [v for v in verts if len(inn[v]) == 2]
    plain = all(len(out[v]) in (1, 2) and len(inn[v]) in (1, 2) for v in verts)
    if len(right) == 1 and len(left) == 1 and plain and len(edges) == len(verts) + 1:
        start = right[0]

        def walk(first: str) -> tuple[str, ...] | None:
            path = [start, first]
            while path[-1] != start:
                nxt = out[path[-1]]
                if len(nxt) != 1:
                    return None  # revisited the branch vertex improperly
                path.append(nxt[0])
                if len(path) > len(edges) + 1:
                    return None
            return tuple(path)

        c1, c2 = walk(out[start][0]), walk(out[start][1])
        if c1 and c2:
            e1 = {(c1[i], c1[i + 1]) for i in range(len(c1) - 1)}
            e2 = {(c2[i], c2[i + 1]) for i in range(len(c2) - 1)}
            if e1 | e2 == set(edges):
                cycles = (c1, c2)
                case = "i" if right == left else "ii"
    return RauzyGraph(n, verts, edges, case, cycles)


def rauzy_to_dot(g: RauzyGraph) -> str:
    lines = [f"digraph rauzy_{g.n} {{"]
    if g.case:
        lines.append(f'  label="order {g.n}, case ({g.case})";')
    for v in g.vertices:
        lines.append(f'  "{v or "e"}";')
    for u, v in g.edges:
        lines.append(f'  "{u or "e"}" -> "{v or "e"}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
