"""Diagram chopping and the automatic search for wildness certificates.

Chopping removes vertices from the marked Dynkin diagram of a pair
(group, highest weight) and keeps the connected components of what is
left, with the marks restricted.  Wildness descends along chopping: if a
chopped pair is wild, so is the original.  A certificate is therefore a
chain of chopping steps ending in a registered wild base case; replaying
the chain verifies the wildness claim mechanically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .rootsys import (
    CapExceeded,
    GroupDescriptor,
    SimpleType,
    build_root_system,
    canonicalize,
    format_descriptor,
    height,
    parse_descriptor,
)

# ---------------------------------------------------------------------------
# positions whose fundamental module is "dense": the group acts transitively
# on the projective space of the module.  Exactly the natural modules of
# special linear factors (first or last vertex) and of symplectic factors
# (first vertex).


def dense_position(family: str, rank: int, pos: int) -> bool:
    """1-based vertex `pos` carries a projectively-dense fundamental module."""
    if family == "A":
        return pos == 1 or pos == rank
    if family == "C":
        return pos == 1
    return False


def _unit_marks(g: GroupDescriptor) -> list[tuple[int, int, str, int]]:
    """Each unit of each mark as (factor index, 1-based vertex, family, rank)."""
    units = []
    for fi, (st, marks) in enumerate(g.factors):
        for pos, m in enumerate(marks, start=1):
            units.extend([(fi, pos, st.family, st.rank)] * m)
    return units


def height2_tame(g: GroupDescriptor) -> bool:
    """Height-2 rule: tame iff the weight is a sum of two dense fundamentals."""
    units = _unit_marks(g)
    assert len(units) == 2
    return all(dense_position(fam, rk, pos) for _, pos, fam, rk in units)


def height2_failing_factors(g: GroupDescriptor) -> list[int]:
    return sorted({fi for fi, pos, fam, rk in _unit_marks(g)
                   if not dense_position(fam, rk, pos)})


# ---------------------------------------------------------------------------
# chopping proper


def _normalize_removed(g: GroupDescriptor, removed) -> tuple[tuple[int, ...], ...]:
    nf = len(g.factors)
    per_factor: list[set[int]] = [set() for _ in range(nf)]
    if isinstance(removed, dict):
        items = removed.items()
        for fi, verts in items:
            if not 0 <= fi < nf:
                raise ValueError("factor index %r out of range" % (fi,))
            per_factor[fi].update(int(v) for v in verts)
    else:
        seq = list(removed)
        if nf == 1 and all(isinstance(v, int) for v in seq):
            per_factor[0].update(seq)
        else:
            if len(seq) != nf:
                raise ValueError(
                    "removed vertex selection has %d groups for %d factors"
                    % (len(seq), nf))
            for fi, verts in enumerate(seq):
                per_factor[fi].update(int(v) for v in verts)
    for fi, verts in enumerate(per_factor):
        rank = g.factors[fi][0].rank
        for v in verts:
            if not 1 <= v <= rank:
                raise ValueError(
                    "removed vertex %d out of range 1..%d in factor %s"
                    % (v, rank, g.factors[fi][0]))
    return tuple(tuple(sorted(v)) for v in per_factor)


def _factor_components(cartan, kept: list[int]) -> list[list[int]]:
    """Connected components of the induced subdiagram, vertices 1-based."""
    kept_set = set(kept)
    seen: set[int] = set()
    comps = []
    for start in kept:
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        stack = [start]
        while stack:
            v = stack.pop()
            for w in kept_set:
                if w not in seen and cartan[v - 1][w - 1] != 0:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _candidate_types(r: int) -> list[SimpleType]:
    out = [SimpleType("A", r)]
    if r >= 2:
        out.append(SimpleType("B", r))
        out.append(SimpleType("C", r))
    if r >= 4:
        out.append(SimpleType("D", r))
    if r in (6, 7, 8):
        out.append(SimpleType("E", r))
    if r == 4:
        out.append(SimpleType("F", 4))
    if r == 2:
        out.append(SimpleType("G", 2))
    return out


def _diagram_bijections(sub, target):
    """All vertex bijections sigma with target[i][j] == sub[sigma[i]][sigma[j]]."""
    r = len(sub)
    used = [False] * r
    sigma = [0] * r
    def bt(i):
        if i == r:
            yield tuple(sigma)
            return
        for v in range(r):
            if used[v]:
                continue
            if target[i][i] != sub[v][v]:
                continue
            ok = True
            for j in range(i):
                if target[i][j] != sub[v][sigma[j]] or target[j][i] != sub[sigma[j]][v]:
                    ok = False
                    break
            if ok:
                used[v] = True
                sigma[i] = v
                yield from bt(i + 1)
                used[v] = False
    yield from bt(0)


def _identify_component(sub_cartan, comp_marks) -> tuple[SimpleType, tuple[int, ...]]:
    """Recognize a connected sub-Cartan matrix and transport the marks.

    Families are tried in alphabetical order; among the diagram automorphisms
    of the match, the lexicographically smallest transported mark vector is
    chosen, so the result is deterministic.
    """
    r = len(sub_cartan)
    for st in _candidate_types(r):
        target = build_root_system(st).cartan
        best = None
        for sigma in _diagram_bijections(sub_cartan, target):
            marks = tuple(comp_marks[v] for v in sigma)
            if best is None or marks < best:
                best = marks
        if best is not None:
            return st, best
    raise AssertionError("unrecognized connected diagram: %r" % (sub_cartan,))


def chop(g: GroupDescriptor, removed) -> GroupDescriptor:
    """Remove vertices (1-based, per factor) and canonicalize what is left.

    `removed` is an iterable of vertex numbers for single-factor descriptors,
    or one iterable per factor (or a {factor index: vertices} dict) for
    products.  Marks are restricted to the kept vertices; components with no
    marks are dropped by canonicalization, so chopping away every marked
    vertex yields the empty (trivial) descriptor.
    """
    removed_norm = _normalize_removed(g, removed)
    pieces: list[tuple[SimpleType, tuple[int, ...]]] = []
    for (st, marks), rm in zip(g.factors, removed_norm):
        sys = build_root_system(st)
        kept = [v for v in range(1, st.rank + 1) if v not in rm]
        for comp in _factor_components(sys.cartan, kept):
            sub = [[sys.cartan[a - 1][b - 1] for b in comp] for a in comp]
            comp_marks = [marks[v - 1] for v in comp]
            pieces.append(_identify_component(sub, comp_marks))
    return canonicalize(GroupDescriptor(tuple(pieces)))


@dataclass(frozen=True)
class Chopping:
    """One chopping step: parent descriptor, removed vertices, canonical result."""

    parent: GroupDescriptor
    removed: tuple[tuple[int, ...], ...]
    result: GroupDescriptor

    def replay(self) -> bool:
        return chop(self.parent, self.removed) == self.result


# ---------------------------------------------------------------------------
# wild base cases
#
# The registry is declarative data.  Each entry has a matching rule (kind +
# parameters) and a self-contained mathematical justification; the search
# below reduces everything else to these by chopping.


@dataclass(frozen=True)
class BaseCase:
    id: str
    kind: str            # exact | c-pi3 | adjoint | height3 | h2fail
    citation: str
    family: str = ""
    rank: int = 0
    min_rank: int = 0
    marks_options: tuple[tuple[int, ...], ...] = ()

    def matches(self, g: GroupDescriptor) -> bool:
        if self.kind == "height3":
            return height(g) >= 3
        if self.kind == "h2fail":
            return height(g) == 2 and not height2_tame(g)
        if len(g.factors) != 1:
            return False
        st, marks = g.factors[0]
        if self.kind == "exact":
            return (st.family == self.family and st.rank == self.rank
                    and marks in self.marks_options)
        if self.kind == "c-pi3":
            return (st.family == "C" and st.rank >= 3
                    and marks == tuple(1 if i == 2 else 0 for i in range(st.rank)))
        if self.kind == "adjoint":
            if st.family != self.family:
                return False
            if self.rank and st.rank != self.rank:
                return False
            if st.rank < self.min_rank:
                return False
            return marks == build_root_system(st).highest_root_marks
        raise AssertionError("unknown base-case kind %r" % self.kind)


def _exact(id_, family, rank, marks_options, citation):
    return BaseCase(id=id_, kind="exact", family=family, rank=rank,
                    marks_options=tuple(marks_options), citation=citation)


_ADJOINT_CITATION = (
    "the adjoint module of a simple group of type %s: outside types A and C "
    "the second secant variety of the adjoint variety (the projectivized "
    "minimal nilpotent orbit) contains nilpotent elements of rank 3, so rank "
    "and border rank differ and the module is wild")

BASE_CASES: tuple[BaseCase, ...] = (
    _exact(
        "wedge3-sl6", "A", 5, [(0, 0, 1, 0, 0)],
        "alternating 3-tensors on F^6 under SL6: the tangent vector "
        "e4^e2^e3 + e1^e5^e3 + e1^e2^e6 is a limit of rank-2 sums (border "
        "rank 2) but has rank 3, so the second secant variety of Gr(3,6) "
        "contains exceptional vectors and the module is 2-wild"),
    BaseCase(
        id="wedge3-sp-family", kind="c-pi3",
        citation=(
            "primitive alternating 3-tensors on F^(2n), n >= 3, under the "
            "symplectic group: the vector z1^z2^z4 + z1^z5^z3 + z6^z2^z3, "
            "built from a standard symplectic basis of a 6-dimensional "
            "symplectic subspace, pairs to zero with the symplectic form, "
            "is a sum of three isotropic decomposables of border rank 2 and "
            "rank 3, so the second secant variety contains exceptional "
            "vectors for every n >= 3")),
    _exact(
        "halfspin-d6", "D", 6, [(0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)],
        "the 32-dimensional half-spin module of Spin12: the second secant "
        "variety of the 15-dimensional spinor variety contains tangent "
        "vectors of rank 3, hence exceptional vectors"),
    _exact(
        "spin-b5", "B", 5, [(0, 0, 0, 0, 1)],
        "the 32-dimensional spin module of Spin11: its closed orbit is the "
        "same 15-dimensional spinor variety as for Spin12, so the rank-3 "
        "tangent vectors in the second secant variety persist and the "
        "module is wild"),
    BaseCase(id="adjoint-b", kind="adjoint", family="B", min_rank=3,
             citation=_ADJOINT_CITATION % "B"),
    BaseCase(id="adjoint-d", kind="adjoint", family="D", min_rank=4,
             citation=_ADJOINT_CITATION % "D"),
    BaseCase(id="adjoint-e6", kind="adjoint", family="E", rank=6,
             citation=_ADJOINT_CITATION % "E6"),
    BaseCase(id="adjoint-e7", kind="adjoint", family="E", rank=7,
             citation=_ADJOINT_CITATION % "E7"),
    BaseCase(id="adjoint-e8", kind="adjoint", family="E", rank=8,
             citation=_ADJOINT_CITATION % "E8"),
    BaseCase(id="adjoint-f4", kind="adjoint", family="F", rank=4,
             citation=_ADJOINT_CITATION % "F4"),
    BaseCase(id="adjoint-g2", kind="adjoint", family="G", rank=2,
             citation=_ADJOINT_CITATION % "G2"),
    _exact(
        "f4-second-fundamental", "F", 4, [(0, 1, 0, 0)],
        "the 273-dimensional second fundamental module of F4 (primitive "
        "alternating squares of traceless octonion-Hermitian 3x3 matrices): "
        "it contains vectors whose invariant-form image statistics "
        "(dimension, rank of the restricted form) equal (4,1), which no sum "
        "of two closed-orbit points attains, so the second secant variety "
        "contains exceptional vectors"),
    _exact(
        "e7-56dim", "E", 7, [(1, 0, 0, 0, 0, 0, 0)],
        "the 56-dimensional module of E7: its second secant variety is the "
        "whole space, while sums of two highest-weight-line vectors, viewed "
        "inside the 1-graded piece of the E8 Lie algebra, have E8-orbit "
        "dimension 58, 92 or 114; the module contains a vector of orbit "
        "dimension 112, which therefore has border rank 2 but rank 3"),
    BaseCase(
        id="height3", kind="height3",
        citation=(
            "the highest weight has mark-sum at least 3; every tame pair "
            "has mark-sum at most 2, so the pair is wild")),
    BaseCase(
        id="height2-dense-failure", kind="h2fail",
        citation=(
            "the highest weight has mark-sum 2 but is not a sum of two "
            "fundamental weights of projectively-dense modules (the natural "
            "modules of SL and Sp factors); every tame height-2 pair is "
            "such a sum, so the pair is wild")),
)

_BASE_BY_ID = {bc.id: bc for bc in BASE_CASES}


def match_base_case(g: GroupDescriptor) -> BaseCase | None:
    """First registered wild base case matching the canonical descriptor."""
    for bc in BASE_CASES:
        if bc.matches(g):
            return bc
    return None


@dataclass(frozen=True)
class Certificate:
    """A replayable wildness proof: chopping chain into a wild base case."""

    root: GroupDescriptor
    chain: tuple[Chopping, ...]
    base_case: str
    citation: str

    @property
    def final(self) -> GroupDescriptor:
        return self.chain[-1].result if self.chain else self.root


def replay_certificate(cert: Certificate) -> bool:
    """Re-run every chopping step and re-match the base case; True iff valid."""
    current = cert.root
    for step in cert.chain:
        if step.parent != current:
            return False
        if chop(step.parent, step.removed) != step.result:
            return False
        current = step.result
    bc = _BASE_BY_ID.get(cert.base_case)
    if bc is None or bc.citation != cert.citation:
        return False
    return bc.matches(current)


def _removal_subsets(rank: int):
    """Nonempty proper-or-full vertex subsets, smallest and lexicographic first."""
    verts = list(range(1, rank + 1))
    from itertools import combinations
    for size in range(1, rank + 1):
        yield from combinations(verts, size)


def find_wild_certificate(
        g: GroupDescriptor, max_depth: int = 3,
        max_states: int = 1 << 16) -> Certificate | None:
    """Search for a wildness certificate for a canonical effective descriptor.

    Height >= 3 and failing height-2 weights certify directly from the
    height rules.  Fundamental (height-1) weights are matched against the
    registry and otherwise reduced by breadth-first search over chopping
    steps (shortest chain first, deterministic tie-breaking).  Returns None
    when no certificate exists, which is the expected outcome for tame pairs.
    """
    g = canonicalize(g)
    h = height(g)
    if h == 0:
        return None
    if h >= 3:
        bc = _BASE_BY_ID["height3"]
        return Certificate(root=g, chain=(), base_case=bc.id, citation=bc.citation)
    if h == 2:
        if height2_tame(g):
            return None
        bc = _BASE_BY_ID["height2-dense-failure"]
        return Certificate(root=g, chain=(), base_case=bc.id, citation=bc.citation)

    # height 1: a single factor carrying one fundamental mark
    bc = match_base_case(g)
    if bc is not None:
        return Certificate(root=g, chain=(), base_case=bc.id, citation=bc.citation)

    seen = {g}
    frontier: list[tuple[GroupDescriptor, tuple[Chopping, ...]]] = [(g, ())]
    for _ in range(max_depth):
        nxt: list[tuple[GroupDescriptor, tuple[Chopping, ...]]] = []
        for state, chain in frontier:
            assert len(state.factors) == 1  # fundamental chops stay fundamental
            st, _marks = state.factors[0]
            for subset in _removal_subsets(st.rank):
                result = chop(state, subset)
                if height(result) == 0 or result in seen:
                    continue
                seen.add(result)
                if len(seen) > max_states:
                    raise CapExceeded(
                        "certificate search exceeded %d states" % max_states)
                step = Chopping(parent=state, removed=(subset,), result=result)
                new_chain = chain + (step,)
                hit = match_base_case(result)
                if hit is not None:
                    return Certificate(root=g, chain=new_chain,
                                       base_case=hit.id, citation=hit.citation)
                nxt.append((result, new_chain))
        frontier = nxt
    return None


# ---------------------------------------------------------------------------
# JSON serialization (the `chop-tree` CLI command pretty-prints this)


def certificate_to_json(cert: Certificate) -> dict:
    return {
        "root": format_descriptor(cert.root),
        "chain": [
            {
                "parent": format_descriptor(step.parent),
                "removed": [list(v) for v in step.removed],
                "result": format_descriptor(step.result),
            }
            for step in cert.chain
        ],
        "base_case": cert.base_case,
        "citation": cert.citation,
    }


def certificate_from_json(doc: dict) -> Certificate:
    chain = tuple(
        Chopping(
            parent=parse_descriptor(step["parent"]),
            removed=tuple(tuple(int(v) for v in verts) for verts in step["removed"]),
            result=parse_descriptor(step["result"]),
        )
        for step in doc["chain"]
    )
    return Certificate(
        root=parse_descriptor(doc["root"]),
        chain=chain,
        base_case=doc["base_case"],
        citation=doc["citation"],
    )


def certificate_to_text(cert: Certificate) -> str:
    lines = ["root: %s" % format_descriptor(cert.root)]
    for i, step in enumerate(cert.chain, start=1):
        removed = "; ".join(
            "factor %d: {%s}" % (fi, ",".join(map(str, verts)))
            for fi, verts in enumerate(step.removed) if verts)
        lines.append("step %d: remove %s -> %s"
                     % (i, removed or "{}", format_descriptor(step.result)))
    lines.append("base case: %s" % cert.base_case)
    lines.append("why wild: %s" % cert.citation)
    return "\n".join(lines)


def dump_certificate(cert: Certificate) -> str:
    return json.dumps(certificate_to_json(cert), indent=2, sort_keys=True)
