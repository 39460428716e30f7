"""Exact number tower and exact linear algebra.

Values are either ``fractions.Fraction`` or :class:`Quad`, an element
a + b*sqrt(d) of a real quadratic field.  All comparisons and all branch
decisions are made in exact rational arithmetic; floats never enter any
decision path (they only appear as display approximations).

Matrices and vectors are plain tuples of Fractions.  The surfaces handled
by this package have Picard rank at most nine, so naive Gaussian
elimination over the rationals is entirely adequate.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence, Union

from .errors import (
    DimensionMismatch,
    MixedRadicands,
    NoRealRoot,
    NotSymmetric,
    SingularMatrix,
)

Rational = Union[int, Fraction]
Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected exact rational, got {type(x).__name__}")


def _square_free(n: int) -> tuple[int, int]:
    """Write n = s^2 * m with m squarefree; return (s, m).

    Trial division is fine here: radicands come from discriminants of
    small quadratics with modest integer entries.
    """
    s, m, p = 1, 1, 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            m *= p
        p += 1 if p == 2 else 2
    return s, m * n


class Quad:
    """Exact element a + b*sqrt(d) with a, b rational and d a squarefree
    integer >= 2.  Instances are normalized (b != 0) and immutable; use
    :func:`quad` to construct values, which collapses degenerate cases to
    plain Fractions.

    The sign of a + b*sqrt(d) is decided rationally: when a and b have
    opposite signs the comparison a^2 vs b^2*d settles it (equality is
    impossible since d is not a square).
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Fraction, b: Fraction, d: int):
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, *args):
        raise AttributeError("Quad is immutable")

    # -- arithmetic -------------------------------------------------

    def _coerce(self, other) -> tuple[Fraction, Fraction]:
        """Return (a, b) of ``other`` viewed in this value's field."""
        if isinstance(other, Quad):
            if other.d != self.d:
                raise MixedRadicands(f"sqrt({self.d}) vs sqrt({other.d})")
            return other.a, other.b
        if isinstance(other, (int, Fraction)):
            return _frac(other), Fraction(0)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        ab = self._coerce(other)
        if ab is NotImplemented:
            return NotImplemented
        return quad(self.a + ab[0], self.b + ab[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return Quad(-self.a, -self.b, self.d)

    def __sub__(self, other):
        ab = self._coerce(other)
        if ab is NotImplemented:
            return NotImplemented
        return quad(self.a - ab[0], self.b - ab[1], self.d)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        ab = self._coerce(other)
        if ab is NotImplemented:
            return NotImplemented
        oa, ob = ab
        return quad(self.a * oa + self.b * ob * self.d,
                    self.a * ob + self.b * oa, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        ab = self._coerce(other)
        if ab is NotImplemented:
            return NotImplemented
        oa, ob = ab
        norm = oa * oa - ob * ob * self.d
        if norm == 0:
            raise ZeroDivisionError("division by zero scalar")
        return self.__mul__(Quad(oa / norm, -ob / norm, self.d))

    def __rtruediv__(self, other):
        inv = Quad(Fraction(1), Fraction(0), self.d).__truediv__(self)
        return inv.__mul__(other)

    # -- ordering ---------------------------------------------------

    def _sign(self) -> int:
        a, b = self.a, self.b
        if a == 0:
            return 1 if b > 0 else -1
        if b == 0:  # cannot happen for normalized values
            return 1 if a > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare |a| vs |b|*sqrt(d) via squares
        if a * a > b * b * self.d:
            return 1 if a > 0 else -1
        return 1 if b > 0 else -1

    def _cmp(self, other) -> int:
        diff = self.__sub__(other)
        if diff is NotImplemented:
            raise TypeError(f"cannot compare Quad with {type(other).__name__}")
        if isinstance(diff, Fraction):
            return (diff > 0) - (diff < 0)
        return diff._sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, Quad):
            return self.d == other.d and self.a == other.a and self.b == other.b
        # a normalized Quad is irrational, never equal to a rational
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"({self.a} + {self.b}*sqrt({self.d}))"


ExactScalar = Union[Fraction, Quad]


def quad(a, b, d) -> ExactScalar:
    """Normalize a + b*sqrt(d); returns a Fraction when the value is rational.

    ``d`` may be any non-negative rational: the radicand is rewritten with a
    squarefree integer under the root so that values of the same field always
    share the same ``d`` (sqrt(8) and 2*sqrt(2) unify).
    """
    a, b, d = _frac(a), _frac(b), _frac(d)
    if d < 0:
        raise NoRealRoot(f"negative radicand {d}")
    if b == 0 or d == 0:
        return a
    # sqrt(p/q) = sqrt(p*q)/q
    n = d.numerator * d.denominator
    s, m = _square_free(n)
    if m == 1:
        return a + b * Fraction(s, d.denominator)
    return Quad(a, b * Fraction(s, d.denominator), m)


def rational_sqrt(x) -> ExactScalar:
    """Exact non-negative square root of a non-negative rational."""
    return quad(0, 1, x)


def scalar_sign(x: ExactScalar) -> int:
    if isinstance(x, Quad):
        return x._sign()
    return (x > 0) - (x < 0)


def as_fraction(x: ExactScalar) -> Fraction:
    """Demand rationality; raises if the value has an irrational part."""
    if isinstance(x, Quad):
        raise MixedRadicands(f"expected rational value, got {x!r}")
    return _frac(x)


def positive_quadratic_root(c2, c1, c0, lower=0) -> ExactScalar:
    """Smallest root of c2*t^2 + c1*t + c0 = 0 that is >= ``lower``.

    Returns a Fraction when the discriminant is a perfect square, a Quad
    otherwise.  Degenerates gracefully to the linear case when c2 = 0.
    """
    c2, c1, c0 = _frac(c2), _frac(c1), _frac(c0)
    lower = _frac(lower)
    if c2 == 0:
        if c1 == 0:
            raise NoRealRoot("constant polynomial has no root")
        t = -c0 / c1
        if t >= lower:
            return t
        raise NoRealRoot(f"linear root {t} below {lower}")
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        raise NoRealRoot("negative discriminant")
    sq = rational_sqrt(disc)
    r1, r2 = ((-c1 - sq) / (2 * c2), (-c1 + sq) / (2 * c2))
    if r1 > r2:
        r1, r2 = r2, r1
    if r1 >= lower:
        return r1
    if r2 >= lower:
        return r2
    raise NoRealRoot(f"no root >= {lower}")


# ----------------------------------------------------------------------
# vectors and matrices over the rationals
# ----------------------------------------------------------------------

def vector(xs: Sequence) -> Vector:
    return tuple(_frac(x) for x in xs)


def matrix(rows: Sequence[Sequence]) -> Matrix:
    rows = tuple(vector(r) for r in rows)
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise DimensionMismatch("ragged matrix")
    return rows


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vec_scale(c, v: Vector) -> Vector:
    c = _frac(c)
    return tuple(c * x for x in v)


def vec_dot(u: Vector, v: Vector) -> Fraction:
    return sum((a * b for a, b in zip(u, v, strict=True)), Fraction(0))


def mat_vec(m: Matrix, v: Vector) -> Vector:
    return tuple(vec_dot(row, v) for row in m)


def solve_linear(g: Sequence[Sequence], rhs: Sequence) -> Vector:
    """Exact solution of the square system g * x = rhs.

    Gaussian elimination with first-nonzero pivoting; over the rationals
    there is no stability concern, only a singularity check.
    """
    n = len(g)
    if any(len(row) != n for row in g) or len(rhs) != n:
        raise DimensionMismatch("solve_linear needs a square system")
    aug = [list(vector(row)) + [_frac(b)] for row, b in zip(g, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise SingularMatrix("zero pivot column")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(row[n] for row in aug)


def determinant(g: Sequence[Sequence]) -> Fraction:
    n = len(g)
    a = [list(vector(row)) for row in g]
    if any(len(row) != n for row in a):
        raise DimensionMismatch("determinant needs a square matrix")
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def rank(rows: Sequence[Sequence]) -> int:
    a = [list(vector(row)) for row in rows]
    if not a:
        return 0
    m, n = len(a), len(a[0])
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == m:
            break
    return r


def inverse(g: Sequence[Sequence]) -> Matrix:
    n = len(g)
    cols = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        cols.append(solve_linear(g, e))
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def is_negative_definite(g: Sequence[Sequence]) -> bool:
    """Sylvester test: (-1)^k det(G_k) > 0 for all leading minors."""
    m = matrix(g)
    n = len(m)
    if any(len(r) != n for r in m):
        raise DimensionMismatch("definiteness needs a square matrix")
    for i in range(n):
        for j in range(i):
            if m[i][j] != m[j][i]:
                raise NotSymmetric(f"entries ({i},{j}) and ({j},{i}) differ")
    for k in range(1, n + 1):
        minor = determinant([row[:k] for row in m[:k]])
        if (-1) ** k * minor <= 0:
            return False
    return True


def signature(g: Sequence[Sequence]) -> tuple[int, int, int]:
    """Inertia (positive, negative, zero) of a symmetric rational form.

    Symmetric Gaussian congruence with exact pivots; a zero diagonal with a
    nonzero off-diagonal entry is repaired by adding the partner row/column,
    which preserves inertia.
    """
    m = [list(vector(row)) for row in g]
    n = len(m)
    if any(len(r) != n for r in m):
        raise DimensionMismatch("signature needs a square matrix")
    for i in range(n):
        for j in range(i):
            if m[i][j] != m[j][i]:
                raise NotSymmetric(f"entries ({i},{j}) and ({j},{i}) differ")
    pos = neg = zero = 0

    def swap(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        m[i], m[j] = m[j], m[i]

    k = 0
    while k < n:
        if m[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if m[i][i] != 0), None)
            if piv is not None:
                swap(k, piv)
            else:
                off = next((i for i in range(k + 1, n) if m[k][i] != 0), None)
                if off is None:
                    zero += 1
                    k += 1
                    continue
                # add row/col ``off`` into k: diagonal becomes 2*m[k][off]
                for j in range(n):
                    m[k][j] += m[off][j]
                for i in range(n):
                    m[i][k] += m[i][off]
        p = m[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            if m[i][k] != 0:
                f = m[i][k] / p
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
                for j in range(k, n):
                    m[j][i] = m[i][j]
        k += 1
    return pos, neg, zero


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to primitive integers, preserving
    direction."""
    fr = vector(v)
    if all(x == 0 for x in fr):
        raise ValueError("zero vector has no primitive form")
    lcm = 1
    for x in fr:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in fr]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    return tuple(x // g for x in ints)
