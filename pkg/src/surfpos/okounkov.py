"""Newton-Okounkov polygons of big classes on a surface model.

The polygon of D with respect to an admissible flag (C, x) is the region
{nu <= t <= mu, alpha(t) <= y <= beta(t)} where, writing D - tC = P_t + N_t
for the Zariski decomposition, alpha(t) is the local multiplicity of N_t
along C at x and beta(t) = alpha(t) + (P_t . C).

Between walls the negative-part support is constant, so the coefficients of
N_t solve a fixed Gram system with right-hand side affine in t; alpha and
beta are therefore piecewise affine and the whole polygon is computed by an
exact chamber walk.  Walls occur where P_t stops pairing positively with a
new curve; the walk terminates where (P_t)^2 vanishes, the only breakpoint
that may be a quadratic irrational.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import scalars, zariski
from .errors import (
    FlagCurveReenters,
    ModelInconsistency,
    NotBig,
    NoRealRoot,
    OutOfRange,
)
from .lattice import DivisorClass, PointSpec, SurfaceModel, pairing
from .scalars import ExactScalar, positive_quadratic_root, vector

Affine = tuple[Fraction, Fraction]  # value c0 + c1 * t

Point = tuple[ExactScalar, ExactScalar]


def _ev(f: Affine, t) -> ExactScalar:
    return f[0] + f[1] * t


@dataclass(frozen=True)
class PolygonPiece:
    t_lo: Fraction
    t_hi: ExactScalar
    alpha: Affine
    beta: Affine
    support: tuple[str, ...]


@dataclass(frozen=True)
class NOPolygon:
    nu: Fraction
    mu: ExactScalar
    pieces: tuple[PolygonPiece, ...]
    flag_curve: str
    vertices: tuple[Point, ...]

    def piece_at(self, t) -> PolygonPiece:
        if t < self.nu or t > self.mu:
            raise OutOfRange(f"t={t} outside [{self.nu}, {self.mu}]")
        for p in self.pieces:
            if t <= p.t_hi:
                return p
        return self.pieces[-1]

    def alpha(self, t) -> ExactScalar:
        return _ev(self.piece_at(t).alpha, t)

    def beta(self, t) -> ExactScalar:
        return _ev(self.piece_at(t).beta, t)


class Classification(enum.Enum):
    CERTIFIED_INTERIOR = "certified-interior"
    CERTIFIED_HORIZONTAL = "certified-horizontal"
    CERTIFIED_VERTICAL = "certified-vertical"
    CERTIFIED_DIAGONAL = "certified-diagonal"
    BOUNDARY_UNKNOWN = "boundary-unknown"
    OUTSIDE = "outside"


# ----------------------------------------------------------------------
# chamber walk internals
# ----------------------------------------------------------------------

class _Chamber:
    """Affine Zariski data on an interval of the walk."""

    def __init__(self, model: SurfaceModel, d: DivisorClass,
                 flag: DivisorClass, support: tuple[str, ...]):
        self.model = model
        self.support = support
        classes = [model.curve_class(n) for n in support]
        if support:
            gram = model.gram_submatrix(support)
            if not scalars.is_negative_definite(gram):
                raise ModelInconsistency(
                    f"support {support} has non-negative-definite Gram matrix")
            rhs0 = [pairing(model, d, c) for c in classes]
            rhs1 = [-pairing(model, flag, c) for c in classes]
            sol0 = scalars.solve_linear(gram, rhs0)
            sol1 = scalars.solve_linear(gram, rhs1)
        else:
            sol0 = sol1 = ()
        self.coeffs: dict[str, Affine] = {
            n: (sol0[i], sol1[i]) for i, n in enumerate(support)}
        # positive part P_t = P0 + t * P1
        p0 = d
        p1 = vector([-x for x in flag])
        for n, c in zip(support, classes):
            a0, a1 = self.coeffs[n]
            p0 = scalars.vec_sub(p0, scalars.vec_scale(a0, c))
            p1 = scalars.vec_sub(p1, scalars.vec_scale(a1, c))
        self.p0, self.p1 = p0, p1

    def coeff(self, name: str) -> Affine:
        return self.coeffs.get(name, (Fraction(0), Fraction(0)))

    def pair_affine(self, cls: DivisorClass) -> Affine:
        return (pairing(self.model, self.p0, cls),
                pairing(self.model, self.p1, cls))

    def vol_quadratic(self) -> tuple[Fraction, Fraction, Fraction]:
        """(P_t)^2 as c2 t^2 + c1 t + c0."""
        m = self.model
        return (pairing(m, self.p1, self.p1),
                2 * pairing(m, self.p0, self.p1),
                pairing(m, self.p0, self.p0))


def _nonneg_just_past(value, slope) -> bool:
    return value > 0 or (value == 0 and slope >= 0)


def _transition(model: SurfaceModel, d: DivisorClass, flag: DivisorClass,
                flag_name: str, support: tuple[str, ...],
                t: Fraction) -> _Chamber:
    """Support for the chamber immediately to the right of t.

    Curves whose pairing with the current positive part vanishes at t are
    offered to the fixpoint together; a candidate subset is valid when all
    negative-part coefficients and all remaining pairings stay non-negative
    just past the wall.  The valid subset is unique (uniqueness of Zariski
    decompositions); the greedy slope-dropping loop finds it in practice and
    an exhaustive subset sweep backs it up.
    """
    base = _Chamber(model, d, flag, support)
    offered = []
    for c in model.curves:
        if c.name in support:
            continue
        val = _ev(base.pair_affine(model.curve_class(c.name)), t)
        if val == 0:
            offered.append(c.name)
        elif val < 0:
            raise ModelInconsistency(
                f"pairing with {c.name} negative at wall t={t}")
    if not offered:
        return base

    def try_subset(extra: list[str]) -> Optional[_Chamber]:
        names = [c.name for c in model.curves
                 if c.name in support or c.name in extra]
        try:
            ch = _Chamber(model, d, flag, tuple(names))
        except (ModelInconsistency, scalars.SingularMatrix):
            return None
        for n in names:
            c0, c1 = ch.coeff(n)
            if not _nonneg_just_past(_ev((c0, c1), t), c1):
                return None
        for c in model.curves:
            if c.name in names:
                continue
            a = ch.pair_affine(model.curve_class(c.name))
            if not _nonneg_just_past(_ev(a, t), a[1]):
                return None
        return ch

    # greedy: offer everything, drop offered curves whose coefficient
    # fails to become positive, repeat
    extra = list(offered)
    for _ in range(len(offered) + 1):
        ch = try_subset(extra)
        if ch is not None:
            active = [n for n in extra
                      if not (ch.coeff(n)[1] <= 0 and _ev(ch.coeff(n), t) == 0)]
            if set(active) != set(extra):
                reduced = try_subset(active)
                if reduced is not None and _check_flag(reduced, flag_name, t):
                    return reduced
                extra = active
                continue
            if _check_flag(ch, flag_name, t):
                return ch
        if not extra:
            break
        # drop the offered curve with the most negative slope
        drop = None
        probe = _Chamber(model, d, flag,
                         tuple(c.name for c in model.curves
                               if c.name in support or c.name in extra)) \
            if _gram_ok(model, support, extra) else None
        if probe is not None:
            worst = None
            for n in extra:
                s = probe.coeff(n)[1]
                if worst is None or s < worst[0]:
                    worst = (s, n)
            drop = worst[1]
        else:
            drop = extra[-1]
        extra = [n for n in extra if n != drop]
    # exhaustive fallback over subsets of the offered curves
    from itertools import combinations
    for size in range(len(offered), -1, -1):
        for combo in combinations(offered, size):
            ch = try_subset(list(combo))
            if ch is not None and _check_flag(ch, flag_name, t):
                return ch
    raise ModelInconsistency(f"no consistent chamber to the right of t={t}")


def _gram_ok(model, support, extra) -> bool:
    names = [c.name for c in model.curves
             if c.name in support or c.name in extra]
    try:
        return scalars.is_negative_definite(model.gram_submatrix(names))
    except Exception:
        return False


def _check_flag(ch: _Chamber, flag_name: str, t: Fraction) -> bool:
    if flag_name in ch.support:
        c0, c1 = ch.coeff(flag_name)
        if _ev((c0, c1), t) > 0 or c1 > 0:
            raise FlagCurveReenters(
                f"flag curve {flag_name} acquires a positive coefficient "
                f"past t={t}; model data is inconsistent with the flag")
        return False
    return True


def okounkov_polygon(model: SurfaceModel, d: Sequence, flag_curve: str,
                     point: PointSpec) -> NOPolygon:
    """Exact Newton-Okounkov polygon of a big class for the flag (C, x)."""
    d = model.divisor(d)
    if not zariski.is_big(model, d):
        raise NotBig("polygon needs a big class")
    flag = model.curve_class(flag_curve)
    start = zariski.zariski_decompose(model, d)
    nu = start.N_coeffs.get(flag_curve, Fraction(0))
    support = tuple(n for n in start.support if n != flag_curve)
    chamber = _transition(model, d, flag, flag_curve, support, nu)

    pieces: list[PolygonPiece] = []
    t0 = nu
    guard = len(model.curves) * (model.rank + 2) + 4
    for _ in range(guard):
        walls: list[Fraction] = []
        for c in model.curves:
            if c.name in chamber.support:
                continue
            a = chamber.pair_affine(model.curve_class(c.name))
            v0 = _ev(a, t0)
            if v0 > 0 and a[1] < 0:
                walls.append(-a[0] / a[1])
        for n in chamber.support:
            # coefficients are non-decreasing on consistent data; a zero
            # crossing is treated as a wall so the transition can diagnose it
            c0, c1 = chamber.coeff(n)
            if c1 < 0 and _ev((c0, c1), t0) > 0:
                walls.append(-c0 / c1)
        c2, c1, c0 = chamber.vol_quadratic()
        mu_candidate: Optional[ExactScalar]
        try:
            mu_candidate = positive_quadratic_root(c2, c1, c0, t0)
        except NoRealRoot:
            mu_candidate = None
        next_wall = min(walls) if walls else None
        alpha = (sum((chamber.coeff(n)[0] * point.mult(n)
                      for n in chamber.support), Fraction(0)),
                 sum((chamber.coeff(n)[1] * point.mult(n)
                      for n in chamber.support), Fraction(0)))
        blen = chamber.pair_affine(flag)
        beta = (alpha[0] + blen[0], alpha[1] + blen[1])
        if mu_candidate is not None and (next_wall is None
                                         or mu_candidate <= next_wall):
            pieces.append(PolygonPiece(t0, mu_candidate, alpha, beta,
                                       chamber.support))
            mu = mu_candidate
            break
        if next_wall is None:
            raise ModelInconsistency(
                "chamber walk found neither a wall nor a volume root")
        pieces.append(PolygonPiece(t0, next_wall, alpha, beta,
                                   chamber.support))
        chamber = _transition(model, d, flag, flag_curve,
                              chamber.support, next_wall)
        if not set(pieces[-1].support) <= set(chamber.support):
            raise ModelInconsistency("negative-part support decreased")
        t0 = next_wall
    else:
        raise ModelInconsistency("chamber walk did not terminate")
    verts = _vertices(nu, mu, pieces)
    return NOPolygon(nu=nu, mu=mu, pieces=tuple(pieces),
                     flag_curve=flag_curve, vertices=verts)


def _vertices(nu, mu, pieces: list[PolygonPiece]) -> tuple[Point, ...]:
    lower: list[Point] = []
    upper: list[Point] = []
    for p in pieces:
        lower.append((p.t_lo, _ev(p.alpha, p.t_lo)))
        upper.append((p.t_lo, _ev(p.beta, p.t_lo)))
    last = pieces[-1]
    lower.append((mu, _ev(last.alpha, mu)))
    upper.append((mu, _ev(last.beta, mu)))
    cycle = lower + upper[::-1]
    # dedupe then drop collinear triples, all with exact arithmetic
    out: list[Point] = []
    for pt in cycle:
        if not out or out[-1] != pt:
            out.append(pt)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    changed = True
    while changed and len(out) > 2:
        changed = False
        for i in range(len(out)):
            a, b, c = out[i - 1], out[i], out[(i + 1) % len(out)]
            cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            if cross == 0:
                out.pop(i)
                changed = True
                break
    return tuple(out)


# ----------------------------------------------------------------------
# derived quantities
# ----------------------------------------------------------------------

def mu_sup(model: SurfaceModel, d: Sequence, flag_curve: str) -> ExactScalar:
    """sup{t > 0 : D - tC big}, the right endpoint of the chamber walk."""
    poly = okounkov_polygon(model, d, flag_curve,
                            PointSpec(on_curve=flag_curve, generic=True))
    return poly.mu


def polygon_area(poly: NOPolygon) -> ExactScalar:
    total = 0
    v = poly.vertices
    for i in range(len(v)):
        x1, y1 = v[i]
        x2, y2 = v[(i + 1) % len(v)]
        total = total + (x1 * y2 - x2 * y1)
    area = total / 2
    return -area if scalars.scalar_sign(area) < 0 else area


def vertical_slice(poly: NOPolygon, t) -> tuple[ExactScalar, ExactScalar]:
    if t < poly.nu or t > poly.mu:
        raise OutOfRange(f"t={t} outside [{poly.nu}, {poly.mu}]")
    return poly.alpha(t), poly.beta(t)


def polygon_contains(poly: NOPolygon, pt: Point) -> bool:
    t, y = pt
    if t < poly.nu or t > poly.mu:
        return False
    return poly.alpha(t) <= y <= poly.beta(t)


def polygon_interior_contains(poly: NOPolygon, pt: Point) -> bool:
    t, y = pt
    if not (poly.nu < t < poly.mu):
        return False
    return poly.alpha(t) < y < poly.beta(t)


def polygon_equal(p1: NOPolygon, p2: NOPolygon) -> bool:
    return set(p1.vertices) == set(p2.vertices)


def alpha_zero_prefix(poly: NOPolygon) -> ExactScalar:
    """sup of the initial interval on which alpha vanishes identically."""
    for p in poly.pieces:
        v = _ev(p.alpha, p.t_lo)
        if v > 0:
            return p.t_lo
        if v < 0:
            raise ModelInconsistency("alpha went negative")
        if p.alpha[1] > 0:
            return p.t_lo
        if p.alpha[1] < 0:
            raise ModelInconsistency("alpha decreasing")
    return poly.mu


def largest_simplex(poly: NOPolygon) -> ExactScalar:
    """Largest lambda with the standard simplex of size lambda inside.

    Requires nu = 0.  The binding constraints are the end of the alpha = 0
    prefix and beta(t) + t >= lambda on [0, lambda].  Writing M(l) for the
    running minimum of g = beta + t over [0, l], the map M(l) - l is
    strictly decreasing, so its unique root (or mu, whichever is smaller)
    is found piece by piece: on each affine segment of M the root is a
    rational division.
    """
    if poly.nu != 0:
        return Fraction(0)
    t_alpha = alpha_zero_prefix(poly)

    def solve_segment(lo, hi, c0, c1) -> Optional[ExactScalar]:
        # root of c0 + c1*l = l within [lo, hi]; c1 < 1 always here
        cand = c0 / (1 - c1)
        if lo <= cand < hi:
            return cand
        return None

    running = _ev(poly.pieces[0].beta, Fraction(0))  # g(0)
    lam: Optional[ExactScalar] = None
    for p in poly.pieces:
        g0, g1 = p.beta[0], p.beta[1] + 1  # g(t) = g0 + g1*t
        lo, hi = p.t_lo, p.t_hi
        segments: list[tuple] = []
        if g1 >= 0:
            # g does not dip below its value at lo; M constant
            segments.append((lo, hi, min(running, _ev((g0, g1), lo)),
                             Fraction(0)))
        else:
            g_lo = _ev((g0, g1), lo)
            if g_lo >= running:
                t_cross = lo + (g_lo - running) / (-g1)
                if t_cross >= hi:
                    segments.append((lo, hi, running, Fraction(0)))
                else:
                    segments.append((lo, t_cross, running, Fraction(0)))
                    segments.append((t_cross, hi, g0, g1))
            else:
                segments.append((lo, hi, g0, g1))
        for s_lo, s_hi, c0, c1 in segments:
            lam = solve_segment(s_lo, s_hi, c0, c1)
            if lam is not None:
                break
            running = min(running, _ev((c0, c1), s_hi)) \
                if isinstance(s_hi, Fraction) else running
        if lam is not None:
            break
    if lam is None:
        lam = poly.mu
    return t_alpha if t_alpha <= lam else lam


def largest_inverted_simplex(poly: NOPolygon) -> ExactScalar:
    """Largest xi with {0 <= t <= xi, 0 <= y <= t} inside the polygon."""
    if poly.nu != 0:
        return Fraction(0)
    t_alpha = alpha_zero_prefix(poly)
    t_beta: ExactScalar = poly.mu
    for p in poly.pieces:
        h_lo = _ev(p.beta, p.t_lo) - p.t_lo
        slope = p.beta[1] - 1
        if h_lo < 0:
            t_beta = p.t_lo
            break
        if slope < 0:
            root = p.t_lo + h_lo / (-slope)
            if root < p.t_hi:
                t_beta = root
                break
    xi = t_alpha if t_alpha <= t_beta else t_beta
    return xi if xi <= poly.mu else poly.mu


def criterion_at_point(model: SurfaceModel, d: Sequence, flag_curve: str,
                       point: PointSpec) -> dict:
    """Origin membership and the largest inscribed standard simplex.

    origin_in detects the point being off the negative locus; lambda > 0
    detects it being off the null locus.
    """
    poly = okounkov_polygon(model, d, flag_curve, point)
    origin_in = poly.nu == 0 and poly.alpha(Fraction(0)) == 0
    lam = largest_simplex(poly) if origin_in else Fraction(0)
    return {"origin_in": origin_in, "lambda": lam, "polygon": poly}


def classify_valuative(poly: NOPolygon, point: tuple[Fraction, Fraction], *,
                       lam=None, lam_prime=None, xi=None,
                       infinitesimal: bool = False) -> Classification:
    """Classify a rational point of the plane against the polygon.

    Certification labels follow the valuative-point regions: interior
    rational points; the open horizontal/vertical segments when a simplex
    of size (lam, lam_prime) fits; the open diagonal and horizontal
    segments of an infinitesimal polygon containing an inverted simplex
    of size xi.
    """
    t, y = Fraction(point[0]), Fraction(point[1])
    if not polygon_contains(poly, (t, y)):
        return Classification.OUTSIDE
    if polygon_interior_contains(poly, (t, y)):
        return Classification.CERTIFIED_INTERIOR
    if lam is not None and lam_prime is None:
        lam_prime = lam
    if lam is not None and lam > 0 and lam_prime > 0:
        tri = [(Fraction(0), Fraction(0)), (Fraction(lam), Fraction(0)),
               (Fraction(0), Fraction(lam_prime))]
        if all(polygon_contains(poly, v) for v in tri):
            if y == 0 and 0 <= t < lam:
                return Classification.CERTIFIED_HORIZONTAL
            if t == 0 and 0 <= y < lam_prime:
                return Classification.CERTIFIED_VERTICAL
    if infinitesimal and xi is not None and xi > 0:
        tri = [(Fraction(0), Fraction(0)), (Fraction(xi), Fraction(0)),
               (Fraction(xi), Fraction(xi))]
        if all(polygon_contains(poly, v) for v in tri):
            if y == t and 0 <= t < xi:
                return Classification.CERTIFIED_DIAGONAL
            if y == 0 and 0 <= t < xi:
                return Classification.CERTIFIED_HORIZONTAL
    return Classification.BOUNDARY_UNKNOWN


def truncate_left(poly: NOPolygon, t0: Fraction) -> tuple[Point, ...]:
    """Vertices of the part of the polygon with t >= t0."""
    if t0 <= poly.nu:
        return poly.vertices
    if t0 > poly.mu:
        return ()
    pieces = []
    for p in poly.pieces:
        if p.t_hi <= t0:
            continue
        lo = max(p.t_lo, t0)
        pieces.append(PolygonPiece(lo, p.t_hi, p.alpha, p.beta, p.support))
    return _vertices(t0, poly.mu, pieces)


def shift_check(model: SurfaceModel, d: Sequence, flag_curve: str,
                point: PointSpec, t0: Fraction) -> bool:
    """Truncating the polygon at t >= t0 equals shifting the polygon of
    D - t0*C by (t0, 0)."""
    d = model.divisor(d)
    flag = model.curve_class(flag_curve)
    shifted = model.divisor(scalars.vec_sub(d, scalars.vec_scale(t0, flag)))
    if not zariski.is_big(model, d) or not zariski.is_big(model, shifted):
        raise NotBig("shift comparison needs both classes big")
    poly = okounkov_polygon(model, d, flag_curve, point)
    poly2 = okounkov_polygon(model, shifted, flag_curve, point)
    left = set(truncate_left(poly, Fraction(t0)))
    right = {(v[0] + t0, v[1]) for v in poly2.vertices}
    return left == right
