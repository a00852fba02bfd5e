"""Root systems, weights, and Weyl-orbit combinatorics in exact arithmetic.

Simple roots are given in explicit rational coordinates ("ε-coordinates"),
one table per family, normalized so long roots have squared length 2.  The
simple-root numbering follows the Onishchik–Vinberg textbook convention
throughout the package (a conversion table to Bourbaki numbering is in the
README); tests pin each label through the Weyl dimension formula.

Weights are plain integer tuples of marks: entry i is the pairing of the
weight with the i-th simple coroot.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from functools import lru_cache
from math import factorial

from .linalg import Vec, dot, inverse, matvec

FAMILIES = "ABCDEFG"

DEFAULT_ORBIT_CAP = 10 ** 6


class CapExceeded(RuntimeError):
    """A configured resource cap (orbit size, subset enumeration) was hit."""


@dataclass(frozen=True, order=True)
class SimpleType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError("unknown family %r" % (self.family,))
        if self.rank < 1:
            raise ValueError("rank must be positive, got %d" % self.rank)

    def __str__(self) -> str:
        return "%s%d" % (self.family, self.rank)


@dataclass(frozen=True)
class GroupDescriptor:
    """A product of simple factors, each carrying a dominant weight."""

    factors: tuple[tuple[SimpleType, tuple[int, ...]], ...]

    def __post_init__(self):
        for st, marks in self.factors:
            if len(marks) != st.rank:
                raise ValueError(
                    "factor %s carries %d marks, expected %d"
                    % (st, len(marks), st.rank))
            if any(m < 0 for m in marks):
                raise ValueError("marks must be nonnegative: %s" % (marks,))

    def __str__(self) -> str:
        return format_descriptor(self)


def height(obj) -> int:
    """Sum of all marks: of a mark tuple, or of every factor of a descriptor."""
    if isinstance(obj, GroupDescriptor):
        return sum(sum(marks) for _, marks in obj.factors)
    return sum(obj)


# ---------------------------------------------------------------------------
# descriptor text grammar:  E8[0,0,0,0,0,0,1,0]   A2xC3[1,0|0,1,0]


def parse_descriptor(text: str) -> GroupDescriptor:
    """Parse `A2xC3[1,0|0,1,0]`-style text.

    Lenient about low-rank aliases (B1, C1, D2) so that canonicalize can
    normalize them away; strict about the shape of the grammar and about
    mark counts matching ranks.
    """
    s = text.strip()
    if "[" not in s or not s.endswith("]"):
        raise ValueError("descriptor %r: expected NAME[marks]" % text)
    head, _, tail = s.partition("[")
    body = tail[:-1]
    type_tokens = [t.strip() for t in head.strip().split("x")]
    mark_groups = [g.strip() for g in body.split("|")]
    if len(type_tokens) != len(mark_groups):
        raise ValueError(
            "descriptor %r: %d factors but %d mark groups"
            % (text, len(type_tokens), len(mark_groups)))
    factors = []
    for tok, grp in zip(type_tokens, mark_groups):
        if len(tok) < 2 or tok[0] not in FAMILIES or not tok[1:].isdigit():
            raise ValueError("descriptor %r: bad factor name %r" % (text, tok))
        st = SimpleType(tok[0], int(tok[1:]))
        parts = [p.strip() for p in grp.split(",")] if grp else []
        try:
            marks = tuple(int(p) for p in parts)
        except ValueError:
            raise ValueError("descriptor %r: bad marks %r" % (text, grp)) from None
        if len(marks) != st.rank:
            raise ValueError(
                "descriptor %r: factor %s needs %d marks, got %d"
                % (text, st, st.rank, len(marks)))
        if any(m < 0 for m in marks):
            raise ValueError("descriptor %r: negative mark" % text)
        factors.append((st, marks))
    return GroupDescriptor(tuple(factors))


def format_descriptor(g: GroupDescriptor) -> str:
    head = "x".join(str(st) for st, _ in g.factors)
    body = "|".join(",".join(str(m) for m in marks) for _, marks in g.factors)
    return "%s[%s]" % (head, body)


# ---------------------------------------------------------------------------
# simple-root coordinate tables


def _basis(n: int):
    def e(i: int) -> list[Q]:
        v = [Q(0)] * n
        v[i - 1] = Q(1)
        return v
    return e


def _diff(n, i, j) -> Vec:
    e = _basis(n)
    return tuple(a - b for a, b in zip(e(i), e(j)))


def _e8_simple_roots() -> list[Vec]:
    e = _basis(8)
    roots = [
        _diff(8, 7, 6),   # α1
        _diff(8, 6, 5),   # α2
        _diff(8, 5, 4),   # α3
        _diff(8, 4, 3),   # α4
        _diff(8, 3, 2),   # α5
        _diff(8, 2, 1),   # α6
    ]
    a7 = [Q(1, 2)] * 8
    for i in range(1, 7):
        a7[i] = Q(-1, 2)
    roots.append(tuple(a7))  # α7 = (e1 + e8 - e2 - ... - e7)/2
    roots.append(tuple(a + b for a, b in zip(e(1), e(2))))  # α8 = e1 + e2
    return roots


def _simple_root_table(st: SimpleType) -> tuple[list[Vec], Q]:
    """(simple roots in ε-coordinates, form scale).

    The bilinear form on the ambient space is `scale * (standard dot)`,
    chosen so long roots get squared length 2.
    """
    fam, n = st.family, st.rank
    if fam == "A":
        return [_diff(n + 1, i, i + 1) for i in range(1, n + 1)], Q(1)
    if fam == "B":
        e = _basis(n)
        roots = [_diff(n, i, i + 1) for i in range(1, n)]
        roots.append(tuple(e(n)))
        return roots, Q(1)
    if fam == "C":
        e = _basis(n)
        roots = [_diff(n, i, i + 1) for i in range(1, n)]
        roots.append(tuple(2 * x for x in e(n)))
        return roots, Q(1, 2)
    if fam == "D":
        e = _basis(n)
        roots = [_diff(n, i, i + 1) for i in range(1, n)]
        roots.append(tuple(a + b for a, b in zip(e(n - 1), e(n))))
        return roots, Q(1)
    if fam == "E":
        e8 = _e8_simple_roots()
        return e8[8 - n:], Q(1)
    if fam == "F":
        e = _basis(4)
        a1 = tuple(Q(1, 2) * x for x in
                   (Q(1), Q(-1), Q(-1), Q(-1)))
        return [a1, tuple(e(4)), _diff(4, 3, 4), _diff(4, 2, 3)], Q(1)
    if fam == "G":
        e = _basis(3)
        a1 = _diff(3, 1, 2)
        a2 = tuple(Q(c) for c in (-2, 1, 1))
        return [a1, a2], Q(1, 3)
    raise ValueError("unknown family %r" % fam)


_RANK_BOUNDS = {"A": (1, None), "B": (2, None), "C": (2, None), "D": (3, None),
                "E": (6, 8), "F": (4, 4), "G": (2, 2)}

_ROOT_COUNTS = {
    "A": lambda n: n * (n + 1),
    "B": lambda n: 2 * n * n,
    "C": lambda n: 2 * n * n,
    "D": lambda n: 2 * n * (n - 1),
    "E": lambda n: {6: 72, 7: 126, 8: 240}[n],
    "F": lambda n: 48,
    "G": lambda n: 12,
}


class RootSystem:
    """Root system of one simple type, with its invariant bilinear form.

    Roots are rational coordinate tuples; positive roots are those whose
    expansion over the simple roots has nonnegative integer coefficients.
    """

    def __init__(self, st: SimpleType):
        lo, hi = _RANK_BOUNDS[st.family]
        if st.rank < lo or (hi is not None and st.rank > hi):
            raise ValueError(
                "no root system for %s: rank out of range (%s)"
                % (st, "%d..%s" % (lo, hi if hi is not None else "∞")))
        self.type = st
        simple, scale = _simple_root_table(st)
        self.simple_roots: tuple[Vec, ...] = tuple(simple)
        self.scale: Q = scale
        self.ndim = len(simple[0])
        self.roots: frozenset[Vec] = self._generate_roots()
        expected = _ROOT_COUNTS[st.family](st.rank)
        if len(self.roots) != expected:
            raise AssertionError(
                "generated %d roots for %s, expected %d"
                % (len(self.roots), st, expected))
        self._coeffs = self._expand_all()
        pos = [r for r in self.roots if sum(self._coeffs[r]) > 0]
        pos.sort(key=lambda r: (sum(self._coeffs[r]), self._coeffs[r]))
        self.positive_roots: tuple[Vec, ...] = tuple(pos)
        self.cartan: tuple[tuple[int, ...], ...] = tuple(
            tuple(int(2 * self.inner(a, b) / self.inner(a, a))
                  for b in self.simple_roots)
            for a in self.simple_roots)
        self._fw: tuple[Vec, ...] | None = None

    # -- form and pairings

    def inner(self, u, v) -> Q:
        return self.scale * dot(u, v)

    def coroot_pairing(self, v, i: int) -> Q:
        """⟨v, αᵢ∨⟩ = 2(v,αᵢ)/(αᵢ,αᵢ) for the i-th simple root (0-based i)."""
        a = self.simple_roots[i]
        return 2 * self.inner(v, a) / self.inner(a, a)

    # -- construction

    def _generate_roots(self) -> frozenset[Vec]:
        seen = set(self.simple_roots)
        frontier = list(seen)
        norms = [dot(a, a) for a in self.simple_roots]
        while frontier:
            nxt = []
            for r in frontier:
                for a, na in zip(self.simple_roots, norms):
                    c = 2 * dot(r, a) / na
                    img = tuple(x - c * y for x, y in zip(r, a))
                    if img not in seen:
                        seen.add(img)
                        nxt.append(img)
            frontier = nxt
        full = set(seen)
        for r in seen:
            full.add(tuple(-x for x in r))
        return frozenset(full)

    def _expand_all(self) -> dict[Vec, tuple[int, ...]]:
        gram = [[self.inner(a, b) for b in self.simple_roots]
                for a in self.simple_roots]
        ginv = inverse(gram)
        out = {}
        for r in self.roots:
            rhs = [self.inner(r, a) for a in self.simple_roots]
            c = matvec(ginv, rhs)
            ints = []
            for x in c:
                if x.denominator != 1:
                    raise AssertionError("non-integer root coefficient for %s" % (r,))
                ints.append(int(x))
            out[r] = tuple(ints)
        return out

    # -- derived data

    def root_coeffs(self, root: Vec) -> tuple[int, ...]:
        return self._coeffs[root]

    def root_height(self, root: Vec) -> int:
        return sum(self._coeffs[root])

    @property
    def highest_root(self) -> Vec:
        return self.positive_roots[-1]

    @property
    def highest_root_marks(self) -> tuple[int, ...]:
        th = self.highest_root
        marks = [self.coroot_pairing(th, i) for i in range(self.type.rank)]
        assert all(m.denominator == 1 for m in marks)
        return tuple(int(m) for m in marks)

    @property
    def fundamental_weights(self) -> tuple[Vec, ...]:
        if self._fw is None:
            # π_i = Σ_k C[i][k] α_k  with  C = (cartan matrix)^{-T}
            a = [[Q(x) for x in row] for row in self.cartan]
            c = inverse([list(col) for col in zip(*a)])
            fws = []
            for i in range(self.type.rank):
                v = [Q(0)] * self.ndim
                for k, ak in enumerate(self.simple_roots):
                    for t in range(self.ndim):
                        v[t] += c[i][k] * ak[t]
                fws.append(tuple(v))
            self._fw = tuple(fws)
        return self._fw

    def weight_vec(self, marks) -> Vec:
        """ε-coordinates of the weight with the given marks."""
        fw = self.fundamental_weights
        v = [Q(0)] * self.ndim
        for m, w in zip(marks, fw):
            if m:
                for t in range(self.ndim):
                    v[t] += m * w[t]
        return tuple(v)


@lru_cache(maxsize=None)
def build_root_system(st: SimpleType) -> RootSystem:
    """Construct (and memoize) the root system of one simple type."""
    return RootSystem(st)


# ---------------------------------------------------------------------------
# Weyl orbit and dimension


def weyl_orbit(marks, sys: RootSystem, cap: int = DEFAULT_ORBIT_CAP):
    """All distinct images of a weight under the Weyl group, as mark tuples.

    Breadth-first closure under simple reflections acting on marks:
    s_i(m) = m - m[i] * (column i of the Cartan matrix).
    Raises CapExceeded if the orbit grows past `cap`.
    """
    n = sys.type.rank
    cartan = sys.cartan
    cols = [tuple(cartan[j][i] for j in range(n)) for i in range(n)]
    start = tuple(marks)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for m in frontier:
            for i in range(n):
                mi = m[i]
                if mi == 0:
                    continue
                img = tuple(x - mi * c for x, c in zip(m, cols[i]))
                if img not in seen:
                    seen.add(img)
                    if len(seen) > cap:
                        raise CapExceeded(
                            "Weyl orbit of %s in %s exceeds cap %d"
                            % (marks, sys.type, cap))
                    nxt.append(img)
        frontier = nxt
    return frozenset(seen)


def weyl_dim(st: SimpleType, marks) -> int:
    """Dimension of the irreducible module with the given highest weight."""
    sys = build_root_system(st)
    lam = sys.weight_vec(marks)
    rho = sys.weight_vec((1,) * st.rank)
    num = Q(1)
    den = Q(1)
    for b in sys.positive_roots:
        num *= sys.inner(tuple(x + y for x, y in zip(lam, rho)), b)
        den *= sys.inner(rho, b)
    d = num / den
    assert d.denominator == 1 and d > 0
    return int(d)


def weyl_group_order(st: SimpleType) -> int:
    fam, n = st.family, st.rank
    if fam == "A":
        return factorial(n + 1)
    if fam in "BC":
        return (2 ** n) * factorial(n)
    if fam == "D":
        return (2 ** (n - 1)) * factorial(n)
    return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600,
            ("F", 4): 1152, ("G", 2): 12}[(fam, n)]


# ---------------------------------------------------------------------------
# canonical form of descriptors


def canonicalize(g: GroupDescriptor) -> GroupDescriptor:
    """Normalize a descriptor: resolve low-rank coincidences, drop factors
    with zero marks, sort factors.

    Relabelings (marks transported along the diagram isomorphism):
      B1, C1 → A1;  D2 → A1 x A1;  D3 → A3 (middle node first);  B2 → C2.
    """
    out: list[tuple[SimpleType, tuple[int, ...]]] = []
    for st, marks in g.factors:
        fam, n = st.family, st.rank
        if fam in "BC" and n == 1:
            out.append((SimpleType("A", 1), marks))
        elif fam == "D" and n == 2:
            # orthogonal pair of A1's; each spin label is one factor's weight
            out.append((SimpleType("A", 1), (marks[0],)))
            out.append((SimpleType("A", 1), (marks[1],)))
        elif fam == "D" and n == 3:
            # chain is α2 - α1 - α3, so the vector label becomes the middle mark
            out.append((SimpleType("A", 3), (marks[1], marks[0], marks[2])))
        elif fam == "B" and n == 2:
            # same diagram read from the other end
            out.append((SimpleType("C", 2), (marks[1], marks[0])))
        else:
            out.append((st, marks))
    kept = [(st, marks) for st, marks in out if any(marks)]
    kept.sort(key=lambda f: (f[0].family, f[0].rank, f[1]))
    return GroupDescriptor(tuple(kept))
