"""Exact linear algebra: rationals, integer fraction-free elimination, prime fields.

Everything here is exact.  Rational routines use `fractions.Fraction`;
integer routines stay in Z with per-row gcd normalization so entries do not
blow up; prime-field routines work on plain ints reduced mod p.  No floats.
"""

from __future__ import annotations

from fractions import Fraction as Q
from math import gcd, isqrt

Vec = tuple[Q, ...]
Mat = list[list[Q]]


# ---------------------------------------------------------------------------
# rational elimination


def row_reduce(mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form over the rationals.

    Returns (rref rows, pivot column indices).  Accepts any nested iterable
    of Fraction/int entries; rows of the result are lists of Fractions.
    """
    rows = [[Q(x) for x in row] for row in mat]
    pivots: list[int] = []
    if not rows:
        return rows, pivots
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = rows[r][c]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                ref = rows[r]
                rows[i] = [a - f * b for a, b in zip(rows[i], ref)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(mat) -> int:
    return len(row_reduce(mat)[1])


def nullspace(mat) -> list[Vec]:
    """Basis of the right kernel {v : mat @ v = 0}, as tuples of Fractions."""
    rows = [list(row) for row in mat]
    if not rows:
        return []
    ncols = len(rows[0])
    rref, pivots = row_reduce(rows)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [Q(0)] * ncols
        v[fc] = Q(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][fc]
        basis.append(tuple(v))
    return basis


def solve(mat, rhs) -> list[Q] | None:
    """One exact solution of mat @ x = rhs, or None if inconsistent."""
    rows = [list(row) + [Q(b)] for row, b in zip(mat, rhs)]
    if not rows:
        return []
    ncols = len(rows[0]) - 1
    rref, pivots = row_reduce(rows)
    if ncols in pivots:
        return None
    x = [Q(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = rref[r][ncols]
    return x


def inverse(mat) -> Mat:
    """Exact inverse of a square rational matrix; raises on singular input."""
    n = len(mat)
    aug = [list(row) + [Q(1) if i == j else Q(0) for j in range(n)]
           for i, row in enumerate(mat)]
    rref, pivots = row_reduce(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in rref[:n]]


# ---------------------------------------------------------------------------
# small vector/matrix helpers


def dot(u, v) -> Q:
    return sum((a * b for a, b in zip(u, v)), Q(0))


def matvec(mat, v):
    return tuple(dot(row, v) for row in mat)


def matmul(a, b):
    bt = list(zip(*b))
    return [[dot(row, col) for col in bt] for row in a]


def transpose(mat):
    return [list(col) for col in zip(*mat)]


def eye(n) -> Mat:
    return [[Q(1) if i == j else Q(0) for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# integer fraction-free elimination
#
# Incremental echelon form with dict-of-column sparse rows.  Each reduction
# step is a cross-multiplication (keeps everything in Z) followed by a gcd
# division, so entries stay small on the structured matrices we feed it.


class IntEchelon:
    """Incremental integer echelon basis; insert rows, read off the rank."""

    def __init__(self) -> None:
        self.rows: dict[int, dict[int, int]] = {}  # lead column -> row

    def reduce(self, row: dict[int, int]) -> dict[int, int]:
        """Eliminate existing lead columns from `row`; returns the remainder."""
        while row:
            lead = min(row)
            ech = self.rows.get(lead)
            if ech is None:
                return row
            a, b = ech[lead], row[lead]
            g = gcd(a, b)
            ca, cb = a // g, b // g
            new = {c: ca * v for c, v in row.items()}
            for c, v in ech.items():
                w = new.get(c, 0) - cb * v
                if w:
                    new[c] = w
                elif c in new:
                    del new[c]
            row = new
        return row

    def insert(self, row) -> bool:
        """Insert a row (dict or iterable of ints); True iff it was independent."""
        if not isinstance(row, dict):
            row = {c: int(v) for c, v in enumerate(row) if v}
        else:
            row = {c: v for c, v in row.items() if v}
        row = self.reduce(row)
        if not row:
            return False
        g = 0
        for v in row.values():
            g = gcd(g, v)
        if g > 1:
            row = {c: v // g for c, v in row.items()}
        self.rows[min(row)] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def int_rank(mat) -> int:
    """Rank of an integer matrix (rows = iterables of ints or sparse dicts)."""
    ech = IntEchelon()
    for row in mat:
        ech.insert(row)
    return ech.rank


def int_row_basis(mat) -> list[int]:
    """Indices of a maximal linearly independent subset of the rows, greedily."""
    ech = IntEchelon()
    out = []
    for i, row in enumerate(mat):
        if ech.insert(row):
            out.append(i)
    return out


# ---------------------------------------------------------------------------
# prime fields


def modp_row_reduce(mat, p: int) -> tuple[list[list[int]], list[int]]:
    """RREF over F_p.  Returns (rows, pivot columns); input rows unchanged."""
    rows = [[x % p for x in row] for row in mat]
    pivots: list[int] = []
    if not rows:
        return rows, pivots
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                ref = rows[r]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], ref)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def modp_rank(mat, p: int) -> int:
    return len(modp_row_reduce(mat, p)[1])


def modp_nullspace(mat, p: int) -> list[list[int]]:
    rows = [list(row) for row in mat]
    if not rows:
        return []
    ncols = len(rows[0])
    rref, pivots = modp_row_reduce(rows, p)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-rref[r][fc]) % p
        basis.append(v)
    return basis


def modp_solve(mat, rhs, p: int) -> list[int] | None:
    rows = [list(row) + [b % p] for row, b in zip(mat, rhs)]
    if not rows:
        return []
    ncols = len(rows[0]) - 1
    rref, pivots = modp_row_reduce(rows, p)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = rref[r][ncols]
    return x


def modp_inverse(mat, p: int) -> list[list[int]]:
    n = len(mat)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)]
           for i, row in enumerate(mat)]
    rref, pivots = modp_row_reduce(aug, p)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular mod %d" % p)
    return [row[n:] for row in rref[:n]]


# ---------------------------------------------------------------------------
# quadratic extensions Q(sqrt(d))


def rational_sqrt(x) -> Q | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    x = Q(x)
    if x < 0:
        return None
    num, den = x.numerator, x.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Q(rn, rd)
    return None


class QuadExt:
    """Element a + b*sqrt(d) of Q(sqrt(d)), d a fixed positive rational non-square.

    Supports mixed arithmetic with ints and Fractions.  Used where a rank-2
    element must be split into two rank-1 pieces: the splitting field is a
    real quadratic extension in general.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=None):
        if d is None:
            raise ValueError("QuadExt needs the discriminant d")
        self.a = Q(a)
        self.b = Q(b)
        self.d = Q(d)

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError("mixed discriminants %s and %s" % (self.d, other.d))
            return other
        if isinstance(other, (int, Q)):
            return QuadExt(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a * o.a + self.b * o.b * self.d,
                       self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.a * o.a - o.b * o.b * o.d
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(%s))" % self.d)
        conj = QuadExt(o.a / n, -o.b / n, self.d)
        return self * conj

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o / self

    def __eq__(self, other):
        if isinstance(other, (int, Q)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadExt):
            if other.d != self.d:
                return self.b == 0 and other.b == 0 and self.a == other.a
            return self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        if self.b == 0:
            return "QuadExt(%s, d=%s)" % (self.a, self.d)
        return "QuadExt(%s + %s*sqrt(%s))" % (self.a, self.b, self.d)


def sqrt_element(x):
    """sqrt of a positive rational: a Fraction if x is a perfect square,
    otherwise the QuadExt sqrt(x) in Q(sqrt(x))."""
    x = Q(x)
    if x <= 0:
        raise ValueError("sqrt_element needs a positive rational")
    r = rational_sqrt(x)
    if r is not None:
        return r
    return QuadExt(0, 1, x)
