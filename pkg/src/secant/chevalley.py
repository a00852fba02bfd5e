"""Exact Lie algebra arithmetic in a Chevalley basis.

Builds the simple Lie algebras of rank <= 8 over the rationals with integer
structure constants, computes weight gradings and orbit dimensions by exact
rank computations, and packages two families of invariants used by the
wildness witnesses: the adjoint-orbit dimensions attached to sums of root
vectors in the largest exceptional algebra, and image statistics of skew
bilinear coforms on a quadratic space (dimension of the image, rank of the
restricted symmetric form).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction as Q

from .linalg import (
    IntEchelon,
    dot,
    int_row_basis,
    inverse,
    matmul,
    rank,
    transpose,
)
from .rootsys import (
    DEFAULT_ORBIT_CAP,
    RootSystem,
    SimpleType,
    build_root_system,
    weyl_group_order,
    weyl_orbit,
)

__all__ = [
    "ChevalleyAlgebra",
    "GradedDecomposition",
    "E7WitnessReport",
    "build_chevalley",
    "grade_by_fundamental",
    "orbit_dim",
    "exp_ad_apply",
    "e7_wild_witness",
    "partition_im_stats",
    "so_nilpotent_realization",
    "coform_of_operator",
    "random_so_conjugate",
    "skew_im_stats",
    "isotropic_pair_case",
    "split_symmetric_form",
    "sample_isotropic_plane",
    "SecantOrbitRep",
    "secant_orbit_reps",
]


# ---------------------------------------------------------------------------
# Chevalley algebra construction


class ChevalleyAlgebra:
    """Simple Lie algebra over Q with an integral root-vector basis.

    Basis indices: 0..l-1 are the simple coroot generators h_1..h_l;
    l + k is the root vector e_alpha for alpha = self.root_list[k]
    (positive roots in height-lex order, then their negatives in the
    same order).  Elements are sparse dicts {basis index: coefficient}.
    """

    def __init__(self, system: RootSystem, sign_fn=None):
        self.system = system
        self.type = system.type
        l = self.type.rank
        pos = list(system.positive_roots)
        neg = [tuple(-c for c in r) for r in pos]
        self.root_list: tuple = tuple(pos + neg)
        self.root_index = {r: i for i, r in enumerate(self.root_list)}
        self.dim = l + len(self.root_list)
        self._root_set = set(self.root_list)
        self._n = _structure_constants(system, sign_fn)
        # pairing of each root with the simple coroots: [h_i, e_a] = <a, a_i^v> e_a
        self._h_action = []
        for r in self.root_list:
            row = []
            for i in range(l):
                c = system.coroot_pairing(r, i)
                assert c.denominator == 1
                row.append(int(c))
            self._h_action.append(tuple(row))
        # [e_a, e_{-a}] = sum_i m_i (a_i,a_i)/(a,a) h_i  for a = sum_i m_i a_i
        self._coroot = []
        for r in self.root_list:
            coeffs = system.root_coeffs(r)
            rr = system.inner(r, r)
            entry = {}
            for i, m in enumerate(coeffs):
                if m:
                    ai = system.simple_roots[i]
                    c = Q(m) * system.inner(ai, ai) / rr
                    assert c.denominator == 1
                    entry[i] = int(c)
            self._coroot.append(entry)

    # -- naming

    def basis_name(self, k: int) -> str:
        l = self.type.rank
        if k < l:
            return "h%d" % (k + 1)
        return "e%d" % (k - l)

    def root_of_basis(self, k: int):
        """Simple-root coefficient tuple of the root vector at basis index k."""
        l = self.type.rank
        if k < l:
            raise ValueError("basis index %d is a Cartan generator" % k)
        return self.system.root_coeffs(self.root_list[k - l])

    def root_basis_index(self, root) -> int:
        """Basis index of e_alpha for a root given as an epsilon-vector."""
        return self.type.rank + self.root_index[root]

    # -- bracket

    def bracket(self, x: dict, y: dict) -> dict:
        l = self.type.rank
        out: dict = {}

        def add(k, c):
            if not c:
                return
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)

        for i, xi in x.items():
            if not xi:
                continue
            for j, yj in y.items():
                c = xi * yj
                if not c:
                    continue
                if i < l and j < l:
                    continue
                if i < l:  # [h_i, e_b]
                    add(j, c * self._h_action[j - l][i])
                elif j < l:  # [e_a, h_j] = -[h_j, e_a]
                    add(i, -c * self._h_action[i - l][j])
                else:
                    ra = self.root_list[i - l]
                    rb = self.root_list[j - l]
                    s = tuple(p + q for p, q in zip(ra, rb))
                    if not any(s):
                        for hi, hc in self._coroot[i - l].items():
                            add(hi, c * hc)
                    elif s in self._root_set:
                        add(l + self.root_index[s], c * self._n[(ra, rb)])
        return out


def _structure_constants(system: RootSystem, sign_fn=None) -> dict:
    """Integer constants N(a,b) for all root pairs with a+b a root.

    Signs are pinned on one distinguished ("extraspecial") decomposition of
    each positive non-simple root -- the decomposition whose first summand
    comes earliest in the height-lex order -- where N = +(p+1) with p the
    length of the descending root string.  All other constants follow from
    the Jacobi identity.  `sign_fn` (coeff tuple -> +-1) overrides the
    extraspecial sign per root, for convention-independence tests.
    """
    pos = list(system.positive_roots)
    pidx = {r: i for i, r in enumerate(pos)}
    roots = system.roots
    inner = system.inner

    def string_down(a, b) -> int:
        # largest k with b - k*a a root
        k = 0
        cur = tuple(x - y for x, y in zip(b, a))
        while cur in roots:
            k += 1
            cur = tuple(x - y for x, y in zip(cur, a))
        return k

    table: dict = {}  # (a, b) with pidx[a] < pidx[b] -> N(a,b)

    def npos(a, b) -> int:
        if pidx[a] < pidx[b]:
            return table[(a, b)]
        return -table[(b, a)]

    def nval(a, b) -> Q:
        ha = system.root_height(a)
        hb = system.root_height(b)
        if ha > 0 and hb > 0:
            return Q(npos(a, b))
        if ha < 0 and hb < 0:
            na = tuple(-x for x in a)
            nb = tuple(-x for x in b)
            return -Q(npos(na, nb))
        if ha < 0:  # normalize to (positive, negative)
            return -nval(b, a)
        xi, mu = a, tuple(-x for x in b)
        nu = tuple(p + q for p, q in zip(a, b))
        if system.root_height(nu) > 0:
            return -inner(nu, nu) / inner(xi, xi) * npos(mu, nu)
        rho = tuple(-x for x in nu)
        return -inner(rho, rho) / inner(mu, mu) * npos(xi, rho)

    by_height: dict = {}
    for g in pos:
        by_height.setdefault(system.root_height(g), []).append(g)

    for h in sorted(by_height):
        if h < 2:
            continue
        for g in by_height[h]:
            specials = []
            for a in pos:
                if pidx[a] >= pidx[g]:
                    break
                b = tuple(x - y for x, y in zip(g, a))
                if b in roots and system.root_height(b) > 0 and pidx[a] < pidx[b]:
                    specials.append((a, b))
            specials.sort(key=lambda p: pidx[p[0]])
            a1, b1 = specials[0]
            sign = 1 if sign_fn is None else sign_fn(system.root_coeffs(g))
            if sign not in (1, -1):
                raise ValueError("sign function must return +1 or -1")
            n11 = sign * (string_down(a1, b1) + 1)
            table[(a1, b1)] = n11
            for a, b in specials[1:]:
                na = tuple(-x for x in a)
                d1 = tuple(x - y for x, y in zip(b1, a))
                d2 = tuple(x - y for x, y in zip(a1, a))
                t = Q(0)
                if d1 in roots:
                    t += nval(b1, na) * nval(d1, a1)
                if d2 in roots:
                    t += nval(na, a1) * nval(d2, b1)
                val = inner(g, g) / inner(b, b) * t / n11
                assert val.denominator == 1 and val != 0, (a, b, g)
                table[(a, b)] = int(val)

    full: dict = {}
    for a in roots:
        for b in roots:
            s = tuple(p + q for p, q in zip(a, b))
            if s in roots:
                v = nval(a, b)
                assert v.denominator == 1 and v != 0
                full[(a, b)] = int(v)
    return full


_CACHE: dict = {}


def build_chevalley(t: SimpleType) -> ChevalleyAlgebra:
    """Construct (and memoize) the Chevalley-basis Lie algebra of type t."""
    if t.rank > 8:
        raise ValueError("chevalley construction capped at rank 8, got %s" % (t,))
    if t not in _CACHE:
        _CACHE[t] = ChevalleyAlgebra(build_root_system(t))
    return _CACHE[t]


def build_chevalley_with_signs(t: SimpleType, sign_fn) -> ChevalleyAlgebra:
    """Uncached variant with an explicit extraspecial sign convention."""
    return ChevalleyAlgebra(build_root_system(t), sign_fn)


# ---------------------------------------------------------------------------
# Gradings


@dataclass(frozen=True)
class GradedDecomposition:
    """Partition of the basis by an integer grading."""

    components: dict  # degree -> sorted tuple of basis indices

    @property
    def dims(self) -> dict:
        return {d: len(v) for d, v in self.components.items()}

    @property
    def total_dim(self) -> int:
        return sum(len(v) for v in self.components.values())

    def degrees(self) -> tuple:
        return tuple(sorted(self.components))


def grade_by_fundamental(alg: ChevalleyAlgebra, vertex: int) -> GradedDecomposition:
    """Grade the algebra by the coefficient of the chosen simple root.

    The degree of e_alpha is the coefficient of the vertex's simple root in
    alpha (an integer); the Cartan subalgebra sits in degree 0.  For a
    cominuscule vertex this is the eigenvalue grading of the corresponding
    one-parameter subgroup.
    """
    l = alg.type.rank
    if not 1 <= vertex <= l:
        raise ValueError("vertex %d out of range 1..%d" % (vertex, l))
    comps: dict = {0: list(range(l))}
    for k, r in enumerate(alg.root_list):
        d = alg.system.root_coeffs(r)[vertex - 1]
        comps.setdefault(d, []).append(l + k)
    return GradedDecomposition({d: tuple(sorted(v)) for d, v in comps.items()})


# ---------------------------------------------------------------------------
# Orbit dimensions


def _clear_denominators(x: dict) -> dict:
    mult = 1
    for v in x.values():
        if isinstance(v, Q) and v.denominator != 1:
            mult = mult * v.denominator // _gcd(mult, v.denominator)
    out = {}
    for k, v in x.items():
        w = v * mult
        if isinstance(w, Q):
            assert w.denominator == 1
            w = int(w)
        if w:
            out[k] = w
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def orbit_dim(alg: ChevalleyAlgebra, x: dict) -> int:
    """Dimension of the adjoint orbit through x: rank of t |-> [t, x]."""
    x = _clear_denominators(x)
    if not x:
        return 0
    ech = IntEchelon()
    for k in range(alg.dim):
        row = alg.bracket({k: 1}, x)
        if row:
            ech.insert(row)
    return ech.rank


def exp_ad_apply(alg: ChevalleyAlgebra, n: dict, x: dict, max_terms: int = 30) -> dict:
    """exp(ad n) applied to x, for ad-nilpotent n (e.g. a root vector)."""
    out = dict(x)
    term = dict(x)
    for m in range(1, max_terms + 1):
        term = alg.bracket(n, term)
        if not term:
            return out
        for k, v in term.items():
            c = out.get(k, 0) + Q(v, 1) / _factorial(m)
            if c:
                out[k] = c
            else:
                out.pop(k, None)
    raise ValueError("exp_ad_apply: ad-nilpotency not reached; is n nilpotent?")


def _factorial(m: int) -> int:
    out = 1
    for i in range(2, m + 1):
        out *= i
    return out


# ---------------------------------------------------------------------------
# The 56-dimensional wildness witness inside the largest exceptional algebra


@dataclass(frozen=True)
class E7WitnessReport:
    """Adjoint-orbit dimensions certifying a border-rank-2 gap.

    The degree-1 component of the 5-graded largest exceptional algebra is
    the 56-dimensional module.  Sums of one or two extreme vectors fall in
    orbits of dimension 58, 92 or 114 (indexed by the inner product of the
    two roots); the reported element is a sum of three root vectors on a
    common isotropic configuration whose orbit dimension 112 matches none
    of them, so it lies outside the first two secant loci while its degree
    forces it into the closure of the second.
    """

    quadruple: tuple  # coeff tuples: (-highest root, a1, a2, a3), a D4 diagram
    element_roots: tuple  # coeff tuples of the three summands
    element: dict  # basis index -> coefficient
    single_dim: int
    pair_dims: dict  # inner product value -> orbit dim
    pair_reps: dict  # inner product value -> (coeff tuple, coeff tuple)
    witness_dim: int

    def as_dict(self) -> dict:
        return {
            "quadruple": [list(c) for c in self.quadruple],
            "element_roots": [list(c) for c in self.element_roots],
            "element": {str(k): v for k, v in sorted(self.element.items())},
            "single_dim": self.single_dim,
            "pair_dims": {str(k): v for k, v in sorted(self.pair_dims.items())},
            "pair_reps": {
                str(k): [list(a), list(b)]
                for k, (a, b) in sorted(self.pair_reps.items())
            },
            "witness_dim": self.witness_dim,
        }


def e7_wild_witness() -> E7WitnessReport:
    """Build the rank-3/border-rank-2 witness in the 56-dimensional module.

    Works inside the rank-8 exceptional algebra graded by its adjoint
    vertex; returns orbit dimensions for a single extreme vector, for one
    representative pair per inner-product class, and for the three-term
    witness supported on pairwise orthogonal degree-1 roots.
    """
    alg = build_chevalley(SimpleType("E", 8))
    sysm = alg.system
    grading = grade_by_fundamental(alg, 1)
    l = alg.type.rank
    theta = sysm.highest_root
    delta1 = [alg.root_list[k - l] for k in grading.components[1]]
    delta1_idx = [alg.root_index[r] + l for r in delta1]
    for r in delta1:
        assert sysm.inner(r, theta) == 1

    single_dim = orbit_dim(alg, {delta1_idx[0]: 1})

    pair_dims: dict = {2: single_dim}
    pair_reps: dict = {
        2: (sysm.root_coeffs(delta1[0]), sysm.root_coeffs(delta1[0]))
    }
    for i, j in itertools.combinations(range(len(delta1)), 2):
        v = sysm.inner(delta1[i], delta1[j])
        assert v.denominator == 1
        v = int(v)
        assert v in (1, 0, -1)
        if v in pair_dims:
            continue
        pair_dims[v] = orbit_dim(alg, {delta1_idx[i]: 1, delta1_idx[j]: 1})
        pair_reps[v] = (sysm.root_coeffs(delta1[i]), sysm.root_coeffs(delta1[j]))
        if len(pair_dims) == 4:
            break

    triple = None
    for i, j, k in itertools.combinations(range(len(delta1)), 3):
        if (sysm.inner(delta1[i], delta1[j]) == 0
                and sysm.inner(delta1[i], delta1[k]) == 0
                and sysm.inner(delta1[j], delta1[k]) == 0):
            triple = (i, j, k)
            break
    if triple is None:
        raise AssertionError(
            "no pairwise orthogonal degree-1 root triple: root table bug")
    i, j, k = triple
    for t in (i, j, k):  # the quadruple with -theta forms a D4 diagram
        assert sysm.inner(tuple(-c for c in theta), delta1[t]) == -1
    element = {delta1_idx[i]: 1, delta1_idx[j]: 1, delta1_idx[k]: 1}
    witness_dim = orbit_dim(alg, element)

    minus_theta = tuple(-c for c in sysm.root_coeffs(theta))
    return E7WitnessReport(
        quadruple=(minus_theta,
                   sysm.root_coeffs(delta1[i]),
                   sysm.root_coeffs(delta1[j]),
                   sysm.root_coeffs(delta1[k])),
        element_roots=(sysm.root_coeffs(delta1[i]),
                       sysm.root_coeffs(delta1[j]),
                       sysm.root_coeffs(delta1[k])),
        element=element,
        single_dim=single_dim,
        pair_dims=pair_dims,
        pair_reps=pair_reps,
        witness_dim=witness_dim,
    )


# ---------------------------------------------------------------------------
# Image statistics of skew coforms on a quadratic space


def partition_im_stats(parts) -> tuple:
    """(sum of max(d-1,0), sum of max(d-2,0)) over the partition's parts.

    These are the dimension of the image and the rank of the restricted
    symmetric form for a nilpotent element of an orthogonal Lie algebra
    with the given Jordan type.
    """
    parts = list(parts)
    if any(int(d) != d or d < 1 for d in parts):
        raise ValueError("partition parts must be positive integers")
    if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise ValueError("partition parts must be weakly decreasing")
    return (sum(max(d - 1, 0) for d in parts),
            sum(max(d - 2, 0) for d in parts))


def so_nilpotent_realization(parts) -> tuple:
    """Integer matrices (A, G): G a nondegenerate symmetric form, A a
    G-skew nilpotent operator with Jordan type the given partition.

    Odd parts are realized by single shift blocks with the alternating
    anti-diagonal form; even parts (which must occur with even
    multiplicity) by hyperbolically paired shift blocks.
    """
    parts = list(parts)
    partition_im_stats(parts)  # validates shape
    counts: dict = {}
    for d in parts:
        counts[d] = counts.get(d, 0) + 1
    for d, m in counts.items():
        if d % 2 == 0 and m % 2 != 0:
            raise ValueError(
                "even part %d has odd multiplicity %d: not an orthogonal "
                "partition" % (d, m))
    n = sum(parts)
    A = [[0] * n for _ in range(n)]
    G = [[0] * n for _ in range(n)]
    off = 0

    def shift_block(start, d):
        for i in range(d - 1):
            A[start + i + 1][start + i] = 1  # A w_i = w_{i+1}

    for d, m in sorted(counts.items(), reverse=True):
        if d % 2 == 1:
            for _ in range(m):
                shift_block(off, d)
                for i in range(d):
                    G[off + i][off + d - 1 - i] = (-1) ** i
                off += d
        else:
            for _ in range(m // 2):
                u, v = off, off + d
                shift_block(u, d)
                shift_block(v, d)
                for i in range(d):
                    G[u + i][v + d - 1 - i] = (-1) ** i
                    G[v + d - 1 - i][u + i] = (-1) ** i
                off += 2 * d
    assert off == n
    return A, G


def coform_of_operator(A, G):
    """The skew coform W = A G^{-1} of a G-skew operator A."""
    W = matmul(A, inverse(G))
    for i in range(len(W)):
        for j in range(len(W)):
            assert W[i][j] == -W[j][i], "operator is not skew for this form"
    return W


def random_so_conjugate(A, G, rng: random.Random, passes: int = 2) -> tuple:
    """Transport (A, G) along a random integer change of basis."""
    n = len(A)
    P = [[Q(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for _ in range(passes):
        for i in range(n):
            j = rng.randrange(n)
            if i == j:
                continue
            c = rng.randint(-2, 2)
            if not c:
                continue
            for k in range(n):
                P[i][k] += c * P[j][k]
    Pinv = inverse(P)
    A2 = matmul(matmul(P, [[Q(x) for x in row] for row in A]), Pinv)
    Pit = transpose(Pinv)
    G2 = matmul(matmul(Pit, [[Q(x) for x in row] for row in G]), Pinv)
    return A2, G2


def _column_space_basis(W):
    """Indices of a set of columns of W spanning its column space."""
    cols = transpose(W)
    scaled = []
    for col in cols:
        mult = 1
        for v in col:
            if isinstance(v, Q) and v.denominator != 1:
                mult = mult * v.denominator // _gcd(mult, v.denominator)
        scaled.append([int(v * mult) for v in col])
    return int_row_basis(scaled)


def skew_im_stats(omega, sym) -> tuple:
    """(dim Im, rank of the symmetric form on Im) for a skew coform.

    `omega` is the matrix of a skew bivector (mapping covectors to vectors
    in the coordinates where `sym` is the matrix of the ambient symmetric
    form); the ambient form must be nondegenerate.
    """
    n = len(omega)
    for i in range(n):
        for j in range(n):
            if omega[i][j] != -omega[j][i]:
                raise ValueError("coform matrix is not skew-symmetric")
            if sym[i][j] != sym[j][i]:
                raise ValueError("ambient form matrix is not symmetric")
    if rank([list(r) for r in sym]) != n:
        raise ValueError("ambient symmetric form is degenerate")
    cols = _column_space_basis(omega)
    dim_im = len(cols)
    basis = [[omega[i][c] for i in range(n)] for c in cols]
    gram = [[sum(Q(u[i]) * sym[i][j] * v[j] for i in range(n) for j in range(n)
                 if sym[i][j])
             for v in basis] for u in basis]
    return dim_im, rank(gram)


_CASE_TABLE = {
    (4, 4): "a",
    (4, 2): "b",
    (4, 0): "c",
    (2, 1): "d",
    (2, 0): "e",
    (0, 0): "f",
}


def isotropic_pair_case(x1, x2, y1, y2, sym) -> str:
    """Case label (a-f) of the coform x1^x2 + y1^y2 of two isotropic planes.

    Classifies by (dim Im, rank of the restricted form); for genuine pairs
    of isotropic 2-planes the statistics always land in the six-row table
    {(4,4),(4,2),(4,0),(2,1),(2,0),(0,0)}.
    """
    n = len(sym)
    for u, v in ((x1, x2), (y1, y2)):
        gram = [[sum(Q(a[i]) * sym[i][j] * b[j]
                     for i in range(n) for j in range(n) if sym[i][j])
                 for b in (u, v)] for a in (u, v)]
        if any(gram[i][j] != 0 for i in range(2) for j in range(2)):
            raise ValueError("input plane is not isotropic")
        if rank([list(u), list(v)]) != 2:
            raise ValueError("input vectors do not span a 2-plane")
    W = [[Q(x1[i]) * x2[j] - Q(x2[i]) * x1[j]
          + Q(y1[i]) * y2[j] - Q(y2[i]) * y1[j]
          for j in range(n)] for i in range(n)]
    stats = skew_im_stats(W, sym)
    if stats not in _CASE_TABLE:
        raise ValueError(
            "image statistics %s outside the isotropic-pair table" % (stats,))
    return _CASE_TABLE[stats]


def split_symmetric_form(n: int):
    """Matrix of the split symmetric form on F^n.

    Basis ordering: hyperbolic pairs (a_1, b_1, .., a_m, b_m) with
    (a_i, b_i) = 1, followed by one unit vector if n is odd.
    """
    G = [[0] * n for _ in range(n)]
    m = n // 2
    for i in range(m):
        G[2 * i][2 * i + 1] = 1
        G[2 * i + 1][2 * i] = 1
    if n % 2:
        G[n - 1][n - 1] = 1
    return G


def sample_isotropic_plane(n: int, rng: random.Random, bound: int = 9) -> tuple:
    """Two rational vectors spanning an isotropic plane for the split form.

    Sampling works in the hyperbolic chart: free integer coordinates with
    one (for the first vector) or two (for the second) linear equations
    solved exactly for leftover hyperbolic coordinates.
    """
    m = n // 2
    extra = n % 2
    if m < 3:
        raise ValueError("need at least 3 hyperbolic pairs to sample planes")

    def assemble(p, q, w):
        v = []
        for i in range(m):
            v.extend((p[i], q[i]))
        v.extend(w)
        return tuple(v)

    while True:
        p = [Q(rng.randint(-bound, bound)) for _ in range(m)]
        if not p[0]:
            continue
        w = [Q(rng.randint(-bound, bound)) for _ in range(extra)]
        q = [Q(rng.randint(-bound, bound)) for _ in range(m)]
        # (u,u) = 2 sum p_i q_i + sum w_j^2 = 0, solved for q_0
        q[0] = -(sum(p[i] * q[i] for i in range(1, m))
                 + sum((x * x for x in w), Q(0)) / 2) / p[0]
        u = assemble(p, q, w)

        r = [Q(rng.randint(-bound, bound)) for _ in range(m)]
        z = [Q(rng.randint(-bound, bound)) for _ in range(extra)]
        s = [Q(rng.randint(-bound, bound)) for _ in range(m)]
        det = r[0] * p[1] - r[1] * p[0]
        if not det:
            continue
        # (v,v) = 0 and (u,v) = 0, solved for s_0, s_1:
        #   2(r_0 s_0 + r_1 s_1) = -2 sum_{i>=2} r_i s_i - sum z_j^2
        #   p_0 s_0 + p_1 s_1 = -sum_{i>=2} p_i s_i - sum q_i r_i - sum w_j z_j
        c1 = -(sum(r[i] * s[i] for i in range(2, m))
               + sum((x * x for x in z), Q(0)) / 2)
        c2 = -(sum(p[i] * s[i] for i in range(2, m))
               + sum(q[i] * r[i] for i in range(m))
               + sum((a * b for a, b in zip(w, z)), Q(0)))
        s[0] = (c1 * p[1] - c2 * r[1]) / det
        s[1] = (r[0] * c2 - p[0] * c1) / det
        v = assemble(r, s, z)
        if rank([list(u), list(v)]) != 2:
            continue
        return u, v


# ---------------------------------------------------------------------------
# Weyl-orbit pair representatives


@dataclass(frozen=True)
class SecantOrbitRep:
    """Representative v^lambda + v^mu of a pair class of extreme vectors.

    `value` is the invariant inner product (lambda, mu); `partner` holds the
    marks of mu = w lambda.
    """

    value: Q
    partner: tuple


def secant_orbit_reps(marks, sys: RootSystem,
                      cap: int = DEFAULT_ORBIT_CAP) -> list:
    """One representative per inner-product class of pairs (lambda, w lambda).

    w ranges over non-identity Weyl elements, so the degenerate class with
    w lambda = lambda appears exactly when the stabilizer of lambda is
    nontrivial.  Sorted by decreasing inner product.
    """
    marks = tuple(int(m) for m in marks)
    orbit = weyl_orbit(marks, sys, cap)
    lam = sys.weight_vec(marks)
    stab_nontrivial = len(orbit) < weyl_group_order(sys.type)
    best: dict = {}
    for mu in sorted(orbit, reverse=True):
        if mu == marks and not stab_nontrivial:
            continue
        val = sys.inner(lam, sys.weight_vec(mu))
        if val not in best:
            best[val] = mu
    return [SecantOrbitRep(value=v, partner=best[v])
            for v in sorted(best, reverse=True)]
