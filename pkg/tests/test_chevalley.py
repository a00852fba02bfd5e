from __future__ import annotations

import itertools
import random
from collections import Counter
from fractions import Fraction as Q

import pytest

from secant.chevalley import (
    build_chevalley,
    build_chevalley_with_signs,
    coform_of_operator,
    e7_wild_witness,
    exp_ad_apply,
    grade_by_fundamental,
    isotropic_pair_case,
    orbit_dim,
    partition_im_stats,
    random_so_conjugate,
    sample_isotropic_plane,
    secant_orbit_reps,
    skew_im_stats,
    so_nilpotent_realization,
    split_symmetric_form,
)
from secant.linalg import rank
from secant.rootsys import SimpleType, build_root_system


def jacobi_defect(alg, i, j, k):
    a = alg.bracket(alg.bracket({i: 1}, {j: 1}), {k: 1})
    b = alg.bracket(alg.bracket({j: 1}, {k: 1}), {i: 1})
    c = alg.bracket(alg.bracket({k: 1}, {i: 1}), {j: 1})
    tot: dict = {}
    for d in (a, b, c):
        for key, v in d.items():
            tot[key] = tot.get(key, 0) + v
    return {k2: v for k2, v in tot.items() if v}


def test_sl2_relations():
    alg = build_chevalley(SimpleType("A", 1))
    assert alg.dim == 3
    e, f, h = {1: 1}, {2: 1}, {0: 1}
    assert alg.bracket(e, f) == {0: 1}
    assert alg.bracket(h, e) == {1: 2}
    assert alg.bracket(h, f) == {2: -2}
    assert alg.bracket(e, e) == {}


@pytest.mark.parametrize("fam,n,dim", [
    ("A", 2, 8), ("G", 2, 14), ("B", 3, 21), ("C", 3, 21),
    ("D", 4, 28), ("F", 4, 52), ("E", 6, 78), ("E", 7, 133), ("E", 8, 248),
])
def test_dimensions(fam, n, dim):
    assert build_chevalley(SimpleType(fam, n)).dim == dim


def test_rank_cap():
    with pytest.raises(ValueError):
        build_chevalley(SimpleType("A", 9))


@pytest.mark.parametrize("fam,n", [
    ("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 3), ("D", 4), ("G", 2),
])
def test_jacobi_exhaustive(fam, n):
    alg = build_chevalley(SimpleType(fam, n))
    for i, j, k in itertools.product(range(alg.dim), repeat=3):
        assert not jacobi_defect(alg, i, j, k), (fam, n, i, j, k)


def test_jacobi_exhaustive_f4():
    alg = build_chevalley(SimpleType("F", 4))
    for i, j, k in itertools.product(range(alg.dim), repeat=3):
        assert not jacobi_defect(alg, i, j, k), (i, j, k)


@pytest.mark.parametrize("fam,n,count", [
    ("A", 4, 4000), ("B", 4, 4000), ("C", 4, 4000),
    ("E", 6, 4000), ("E", 7, 4000), ("E", 8, 4000),
])
def test_jacobi_random(fam, n, count):
    alg = build_chevalley(SimpleType(fam, n))
    rng = random.Random(fam + str(n))
    for _ in range(count):
        i, j, k = (rng.randrange(alg.dim) for _ in range(3))
        assert not jacobi_defect(alg, i, j, k), (fam, n, i, j, k)


@pytest.mark.parametrize("fam,n", [
    ("A", 3), ("B", 3), ("C", 3), ("G", 2), ("F", 4), ("D", 4),
])
def test_structure_constant_magnitudes(fam, n):
    # every constant has magnitude p+1, the descending root-string length
    alg = build_chevalley(SimpleType(fam, n))
    sysm = alg.system
    for a in sysm.roots:
        for b in sysm.roots:
            s = tuple(p + q for p, q in zip(a, b))
            if s in sysm.roots:
                k = 0
                cur = tuple(x - y for x, y in zip(b, a))
                while cur in sysm.roots:
                    k += 1
                    cur = tuple(x - y for x, y in zip(cur, a))
                assert abs(alg._n[(a, b)]) == k + 1, (a, b)


def test_antisymmetry_of_constants():
    alg = build_chevalley(SimpleType("C", 3))
    for (a, b), v in alg._n.items():
        assert alg._n[(b, a)] == -v
        na = tuple(-x for x in a)
        nb = tuple(-x for x in b)
        assert alg._n[(na, nb)] == -v


def test_cartan_acts_diagonally():
    alg = build_chevalley(SimpleType("B", 3))
    sysm = alg.system
    l = alg.type.rank
    for k, r in enumerate(alg.root_list):
        for i in range(l):
            got = alg.bracket({i: 1}, {l + k: 1})
            expect = int(sysm.coroot_pairing(r, i))
            assert got == ({l + k: expect} if expect else {})


def test_sign_convention_independence():
    # flipping the pinned signs gives another valid Chevalley basis with
    # identical invariants
    t = SimpleType("A", 3)
    alt = build_chevalley_with_signs(
        t, lambda coeffs: -1 if sum(coeffs) % 2 == 0 else 1)
    ref = build_chevalley(t)
    for (a, b), v in ref._n.items():
        assert abs(alt._n[(a, b)]) == abs(v)
    for i, j, k in itertools.product(range(alt.dim), repeat=3):
        assert not jacobi_defect(alt, i, j, k)
    x = {alt.type.rank + 0: 1, alt.type.rank + 2: 1}
    assert orbit_dim(alt, x) == orbit_dim(ref, x)
    g_alt = grade_by_fundamental(alt, 2)
    g_ref = grade_by_fundamental(ref, 2)
    assert g_alt.dims == g_ref.dims


def test_grading_partitions_basis():
    alg = build_chevalley(SimpleType("A", 2))
    g = grade_by_fundamental(alg, 1)
    # independent count: degree = first simple-root coefficient
    expect = Counter()
    expect[0] = alg.type.rank
    for r in alg.root_list:
        expect[alg.system.root_coeffs(r)[0]] += 1
    assert g.dims == dict(expect)
    assert g.dims == {-1: 2, 0: 4, 1: 2}
    assert g.total_dim == alg.dim
    with pytest.raises(ValueError):
        grade_by_fundamental(alg, 0)
    with pytest.raises(ValueError):
        grade_by_fundamental(alg, 3)


def test_e8_grading_dims():
    alg = build_chevalley(SimpleType("E", 8))
    g = grade_by_fundamental(alg, 1)
    assert {d: g.dims[d] for d in sorted(g.dims)} == \
        {-2: 1, -1: 56, 0: 134, 1: 56, 2: 1}
    assert g.degrees() == (-2, -1, 0, 1, 2)


def test_orbit_dim_basics():
    a1 = build_chevalley(SimpleType("A", 1))
    assert orbit_dim(a1, {1: 1}) == 2  # nilpotent cone of sl2
    assert orbit_dim(a1, {}) == 0
    assert orbit_dim(a1, {0: 1}) == 2  # regular semisimple
    # scaling does not change the orbit dimension
    assert orbit_dim(a1, {1: Q(3, 7)}) == 2


def test_orbit_dim_conjugation_invariance():
    alg = build_chevalley(SimpleType("A", 3))
    l = alg.type.rank
    x = {l + 0: 1, l + 5: 1}
    base = orbit_dim(alg, x)
    rng = random.Random(3)
    for _ in range(8):
        k = rng.randrange(len(alg.root_list))
        y = exp_ad_apply(alg, {l + k: 1}, x)
        assert orbit_dim(alg, y) == base


def test_witness_report():
    rep = e7_wild_witness()
    assert rep.single_dim == 58
    assert dict(sorted(rep.pair_dims.items())) == {-1: 114, 0: 92, 1: 58, 2: 58}
    assert rep.witness_dim == 112
    # the quadruple forms a D4 diagram: norms 2, center pairing -1, arms
    # orthogonal
    sysm = build_root_system(SimpleType("E", 8))
    vecs = []
    for coeffs in rep.quadruple:
        v = [Q(0)] * sysm.ndim
        for c, a in zip(coeffs, sysm.simple_roots):
            for t in range(sysm.ndim):
                v[t] += c * a[t]
        vecs.append(tuple(v))
    center, arms = vecs[0], vecs[1:]
    assert sysm.inner(center, center) == 2
    for a in arms:
        assert sysm.inner(a, a) == 2
        assert sysm.inner(center, a) == -1
    for a, b in itertools.combinations(arms, 2):
        assert sysm.inner(a, b) == 0
    # report is JSON-shaped
    d = rep.as_dict()
    assert d["witness_dim"] == 112 and len(d["quadruple"]) == 4


PARTITIONS_13 = [
    ((3, 3, 1, 1, 1, 1, 1, 1, 1), (4, 2)),
    ((3, 2, 2, 1, 1, 1, 1, 1, 1), (4, 1)),
    ((2, 2, 2, 2, 1, 1, 1, 1, 1), (4, 0)),
    ((3,) + (1,) * 10, (2, 1)),
    ((2, 2) + (1,) * 9, (2, 0)),
]


@pytest.mark.parametrize("parts,expected", PARTITIONS_13)
def test_partition_im_stats(parts, expected):
    assert partition_im_stats(parts) == expected


def test_partition_im_stats_edges():
    assert partition_im_stats((1,) * 9) == (0, 0)
    assert partition_im_stats((5, 1, 1)) == (4, 3)
    with pytest.raises(ValueError):
        partition_im_stats((1, 2))
    with pytest.raises(ValueError):
        partition_im_stats((2, 0))


def jordan_type(A):
    """Partition of a nilpotent matrix from the ranks of its powers."""
    n = len(A)
    ranks = [n]
    M = [[Q(x) for x in row] for row in A]
    P = [row[:] for row in M]
    while True:
        r = rank(P)
        ranks.append(r)
        if r == 0:
            break
        P = [[sum(P[i][k] * M[k][j] for k in range(n)) for j in range(n)]
             for i in range(n)]
    # number of blocks of size >= k is ranks[k-1] - ranks[k]
    sizes = []
    for k in range(1, len(ranks)):
        sizes.append(ranks[k - 1] - ranks[k])
    parts = []
    for d in range(len(sizes), 0, -1):
        parts.extend([d] * (sizes[d - 1] - (sizes[d] if d < len(sizes) else 0)))
    return tuple(sorted(parts, reverse=True))


@pytest.mark.parametrize("parts,expected", PARTITIONS_13)
def test_so_nilpotent_realization(parts, expected):
    A, G = so_nilpotent_realization(parts)
    n = len(A)
    assert sum(parts) == n
    # A is G-skew
    for i in range(n):
        for j in range(n):
            assert sum(A[k][i] * G[k][j] for k in range(n)) + \
                sum(G[i][k] * A[k][j] for k in range(n)) == 0
    assert jordan_type(A) == tuple(sorted(parts, reverse=True))
    W = coform_of_operator(A, G)
    assert skew_im_stats(W, G) == expected


def test_so_realization_rejects_odd_even_multiplicity():
    with pytest.raises(ValueError):
        so_nilpotent_realization((2, 1, 1))
    so_nilpotent_realization((2, 2, 1))  # fine


def test_randomized_realizations_keep_stats():
    rng = random.Random(11)
    for parts, expected in PARTITIONS_13[:3]:
        A, G = so_nilpotent_realization(parts)
        for _ in range(4):
            A2, G2 = random_so_conjugate(A, G, rng)
            W2 = coform_of_operator(A2, G2)
            assert skew_im_stats(W2, G2) == expected


def test_skew_im_stats_validation():
    G = split_symmetric_form(4)
    with pytest.raises(ValueError):
        skew_im_stats([[0, 1], [1, 0]], [[1, 0], [0, 1]])  # not skew
    with pytest.raises(ValueError):
        skew_im_stats([[0, 1], [-1, 0]], [[1, 0], [0, 0]])  # degenerate form
    assert skew_im_stats([[0, 0], [0, 0]], [[1, 0], [0, 1]]) == (0, 0)
    W = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]
    assert skew_im_stats(W, G) == (2, 2)


def hyperbolic_vec(n, **coords):
    v = [Q(0)] * n
    for name, c in coords.items():
        kind, idx = name[0], int(name[1:]) - 1
        v[2 * idx + (0 if kind == "a" else 1)] = Q(c)
    return tuple(v)


def test_isotropic_pair_cases_constructed():
    n = 12
    G = split_symmetric_form(n)
    a1 = hyperbolic_vec(n, a1=1)
    a2 = hyperbolic_vec(n, a2=1)
    a3 = hyperbolic_vec(n, a3=1)
    a4 = hyperbolic_vec(n, a4=1)
    b1 = hyperbolic_vec(n, b1=1)
    b2 = hyperbolic_vec(n, b2=1)
    assert isotropic_pair_case(a1, a2, b1, b2, G) == "a"
    assert isotropic_pair_case(a1, a2, b1, a3, G) == "b"
    assert isotropic_pair_case(a1, a2, a3, a4, G) == "c"
    assert isotropic_pair_case(a1, a2, b2, a1, G) == "d"
    assert isotropic_pair_case(a1, a2, a1, a3, G) == "e"
    assert isotropic_pair_case(a1, a2, a2, a1, G) == "f"
    with pytest.raises(ValueError):
        isotropic_pair_case(a1, b1, a3, a4, G)  # non-isotropic plane
    with pytest.raises(ValueError):
        isotropic_pair_case(a1, a1, a3, a4, G)  # not a plane


def test_isotropic_pair_sampling_stays_in_table():
    rng = random.Random(5)
    for n in (10, 13):
        G = split_symmetric_form(n)
        cases = Counter()
        for _ in range(150):
            x1, x2 = sample_isotropic_plane(n, rng)
            y1, y2 = sample_isotropic_plane(n, rng)
            cases[isotropic_pair_case(x1, x2, y1, y2, G)] += 1
        assert set(cases) <= set("abcdef")
        # random disjoint planes are overwhelmingly in the dim-4 rows
        assert set(cases) <= {"a", "b", "c"}


def test_sampled_planes_are_isotropic():
    rng = random.Random(9)
    n = 11
    G = split_symmetric_form(n)
    for _ in range(40):
        u, v = sample_isotropic_plane(n, rng)
        for x in (u, v):
            assert sum(Q(x[i]) * G[i][j] * x[j]
                       for i in range(n) for j in range(n)) == 0
        assert sum(Q(u[i]) * G[i][j] * v[j]
                   for i in range(n) for j in range(n)) == 0
        assert rank([list(u), list(v)]) == 2


def test_secant_orbit_reps():
    a1 = build_root_system(SimpleType("A", 1))
    reps = secant_orbit_reps((1,), a1)
    assert [(r.value, r.partner) for r in reps] == [(Q(-1, 2), (-1,))]

    b2 = build_root_system(SimpleType("B", 2))
    reps = secant_orbit_reps((1, 0), b2)
    assert [r.value for r in reps] == [1, 0, -1]
    assert reps[0].partner == (1, 0)
    assert reps[-1].partner == (-1, 0)

    e8 = build_root_system(SimpleType("E", 8))
    reps = secant_orbit_reps(e8.highest_root_marks, e8)
    assert [r.value for r in reps] == [2, 1, 0, -1, -2]
    # deterministic
    again = secant_orbit_reps(e8.highest_root_marks, e8)
    assert reps == again
