"""Surface models, divisor classes, the intersection pairing, and exact
rational polyhedral cone computations.

A :class:`SurfaceModel` is the finite combinatorial stand-in for a smooth
projective surface: a unimodular-free lattice of rank rho with a symmetric
integer Gram matrix of signature (1, rho-1), a finite list of curve records
declared to generate the effective cone, and a reference ample class.
Divisor classes are plain tuples of Fractions in the model basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import scalars
from .errors import (
    DimensionMismatch,
    InvariantViolation,
    NotFullDimensional,
)
from .scalars import Matrix, primitive, rank, vector

DivisorClass = tuple[Fraction, ...]


@dataclass(frozen=True)
class CurveRecord:
    """A named curve class.  Negative records stand for the unique
    irreducible curve in their class; non-negative ones for a movable
    family whose generic member avoids any previously unseen point."""

    name: str
    cls: tuple[int, ...]
    self_int: int
    is_rational: Optional[bool] = None


@dataclass(frozen=True)
class GenericFamily:
    """A movable class with a member of multiplicity ``mult`` through a
    generic point; consumed by blow-ups to complete the curve list."""

    cls: tuple[int, ...]
    mult: int
    name_hint: str


@dataclass(frozen=True)
class PointSpec:
    """Combinatorial position of a point x on a flag curve.

    ``local_mults[E]`` is the local intersection number (E.C)_x of the
    record E with the flag curve at x; omitted names mean zero.  A generic
    point meets none of the listed curves.
    """

    on_curve: str
    local_mults: Mapping[str, int] = field(default_factory=dict)
    generic: bool = True

    def mult(self, name: str) -> int:
        return int(self.local_mults.get(name, 0))

    def through(self) -> frozenset[str]:
        """Names of listed curves passing through x (flag curve excluded)."""
        return frozenset(n for n, m in self.local_mults.items() if m > 0)


@dataclass(frozen=True)
class SurfaceModel:
    rank: int
    basis_labels: tuple[str, ...]
    gram: tuple[tuple[int, ...], ...]
    curves: tuple[CurveRecord, ...]
    ample_ref: DivisorClass
    canonical: Optional[DivisorClass] = None
    effective_generators: Optional[tuple[DivisorClass, ...]] = None
    completeness_declared: bool = True
    ample_ref_is_ample: bool = True
    points: Mapping[str, PointSpec] = field(default_factory=dict)
    generic_families: tuple[GenericFamily, ...] = ()
    metadata: Mapping[str, str] = field(default_factory=dict)

    # -- structural helpers ----------------------------------------

    def curve(self, name: str) -> CurveRecord:
        for c in self.curves:
            if c.name == name:
                return c
        raise KeyError(f"no curve named {name!r}")

    def has_curve(self, name: str) -> bool:
        return any(c.name == name for c in self.curves)

    def curve_class(self, name: str) -> DivisorClass:
        return vector(self.curve(name).cls)

    def divisor(self, coords: Sequence) -> DivisorClass:
        v = vector(coords)
        if len(v) != self.rank:
            raise DimensionMismatch(
                f"expected {self.rank} coordinates, got {len(v)}")
        return v

    def effective_gens(self) -> tuple[DivisorClass, ...]:
        if self.effective_generators is not None:
            return self.effective_generators
        return tuple(vector(c.cls) for c in self.curves)

    def gram_submatrix(self, names: Sequence[str]) -> Matrix:
        classes = [self.curve_class(n) for n in names]
        return tuple(tuple(pairing(self, a, b) for b in classes)
                     for a in classes)

    def resolve(self, name: str) -> DivisorClass:
        """A basis label or curve name as a divisor class."""
        if name in self.basis_labels:
            i = self.basis_labels.index(name)
            return vector([int(j == i) for j in range(self.rank)])
        if self.has_curve(name):
            return self.curve_class(name)
        raise KeyError(name)


def pairing(model: SurfaceModel, d1: Sequence, d2: Sequence) -> Fraction:
    """Intersection number d1^T . gram . d2, exact."""
    v1, v2 = vector(d1), vector(d2)
    if len(v1) != model.rank or len(v2) != model.rank:
        raise DimensionMismatch("divisor dimension does not match model rank")
    total = Fraction(0)
    for i, a in enumerate(v1):
        if a == 0:
            continue
        row = model.gram[i]
        total += a * sum((row[j] * b for j, b in enumerate(v2) if b != 0),
                         Fraction(0))
    return total


def self_intersection(model: SurfaceModel, d: Sequence) -> Fraction:
    return pairing(model, d, d)


def validate_model(model: SurfaceModel) -> None:
    """Re-check every structural invariant; raises InvariantViolation."""
    rho = model.rank
    if len(model.basis_labels) != rho or len(set(model.basis_labels)) != rho:
        raise InvariantViolation("basis labels", "need rho distinct labels")
    if len(model.gram) != rho or any(len(r) != rho for r in model.gram):
        raise InvariantViolation("gram shape", f"expected {rho}x{rho}")
    for i in range(rho):
        for j in range(rho):
            if model.gram[i][j] != model.gram[j][i]:
                raise InvariantViolation("gram symmetric",
                                         f"entries ({i},{j}) != ({j},{i})")
    sig = scalars.signature(model.gram)
    if sig != (1, rho - 1, 0):
        raise InvariantViolation("Hodge signature",
                                 f"expected (1,{rho - 1},0), got {sig}")
    names = [c.name for c in model.curves]
    if len(set(names)) != len(names):
        raise InvariantViolation("curve names", "duplicate names")
    neg_classes = [c.cls for c in model.curves if c.self_int < 0]
    if len(set(neg_classes)) != len(neg_classes):
        raise InvariantViolation("negative curves",
                                 "a negative class appears twice")
    for c in model.curves:
        if self_intersection(model, vector(c.cls)) != c.self_int:
            raise InvariantViolation("curve self-intersection",
                                     f"{c.name} cached value is wrong")
    if self_intersection(model, model.ample_ref) <= 0:
        raise InvariantViolation("ample reference", "non-positive square")
    if model.ample_ref_is_ample:
        for c in model.curves:
            if pairing(model, model.ample_ref, vector(c.cls)) <= 0:
                raise InvariantViolation(
                    "ample reference", f"non-positive against {c.name}")
    for p in model.points.values():
        if not model.has_curve(p.on_curve):
            raise InvariantViolation("point spec",
                                     f"unknown flag curve {p.on_curve!r}")
        for n, m in p.local_mults.items():
            if m < 0 or not model.has_curve(n):
                raise InvariantViolation("point spec",
                                         f"bad local multiplicity for {n!r}")
            if n != p.on_curve:
                glob = pairing(model, model.curve_class(n),
                               model.curve_class(p.on_curve))
                if m > glob:
                    raise InvariantViolation(
                        "point spec",
                        f"local mult of {n} exceeds global intersection")


# ----------------------------------------------------------------------
# exact LP feasibility: membership in a finitely generated cone
# ----------------------------------------------------------------------

def cone_contains(generators: Sequence[Sequence], v: Sequence) -> bool:
    """True iff v is a non-negative rational combination of the generators.

    Phase-one simplex with Bland's rule over exact rationals; the systems
    here are tiny (rank <= 9, a few hundred generators at most).
    """
    gens = [vector(g) for g in generators]
    target = vector(v)
    if all(x == 0 for x in target):
        return True
    if not gens:
        return False
    m = len(target)
    n = len(gens)
    # rows: equality constraints; make rhs non-negative
    rows = []
    rhs = []
    for i in range(m):
        coeffs = [g[i] for g in gens]
        b = target[i]
        if b < 0:
            coeffs = [-c for c in coeffs]
            b = -b
        rows.append(coeffs)
        rhs.append(b)
    # tableau with artificial basis
    width = n + m
    tab = [rows[i] + [Fraction(int(j == i)) for j in range(m)] + [rhs[i]]
           for i in range(m)]
    basis = [n + i for i in range(m)]
    # phase-1 objective: sum of artificials, expressed in non-basic terms
    obj = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(width + 1):
            obj[j] += tab[i][j]
    while True:
        # Bland's rule; artificial columns never re-enter
        enter = next((j for j in range(n)
                      if j not in basis and obj[j] > 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][width] / tab[i][enter]
                if best is None or ratio < best[0] or \
                        (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            break  # unbounded cannot happen in phase 1, defensive
        _, piv = best
        pr = tab[piv]
        inv = 1 / pr[enter]
        tab[piv] = [x * inv for x in pr]
        for i in range(m):
            if i != piv and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[piv])]
        f = obj[enter]
        obj = [x - f * y for x, y in zip(obj, tab[piv])]
        basis[piv] = enter
    return obj[width] == 0


# ----------------------------------------------------------------------
# double description: dual cone and facet structure
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PolyCone:
    """A rational polyhedral cone given by extreme rays and, dually, by the
    primitive classes whose pairing hyperplanes support its facets."""

    generators: tuple[tuple[int, ...], ...]
    facet_normals: tuple[tuple[int, ...], ...]


def dual_cone(generators: Sequence[Sequence], model: SurfaceModel) -> PolyCone:
    """Extreme rays and facet data of {w : (w . g) >= 0 for all g}.

    Incremental double description over exact rationals.  The pairing
    halfspace of g has standard normal gram . g; adjacency of rays is
    decided combinatorially through their zero sets.
    """
    gens = [vector(g) for g in generators]
    rho = model.rank
    gram = scalars.matrix(model.gram)
    normals = []
    seen = set()
    for g in gens:
        n = primitive(scalars.mat_vec(gram, g))
        if n not in seen:
            seen.add(n)
            normals.append(n)
    if rank(normals) < rho:
        raise NotFullDimensional(
            "generators do not span; dual cone is not pointed")
    # order so the first rho normals are independent
    chosen: list[tuple[int, ...]] = []
    rest: list[tuple[int, ...]] = []
    for n in normals:
        if len(chosen) < rho and rank(chosen + [n]) > len(chosen):
            chosen.append(n)
        else:
            rest.append(n)
    ordered = chosen + rest
    # initial simplicial cone: rays are columns of the inverse of the
    # first rho normals, so ray j is tight on every normal except j
    base = scalars.inverse(chosen)
    rays = []
    for j in range(rho):
        r = primitive([base[i][j] for i in range(rho)])
        zero = frozenset(k for k in range(rho) if k != j)
        rays.append((r, zero))
    for idx in range(rho, len(ordered)):
        a = vector(ordered[idx])
        vals = [scalars.vec_dot(vector(r), a) for r, _ in rays]
        if all(v >= 0 for v in vals):
            rays = [(r, z | {idx} if vals[i] == 0 else z)
                    for i, (r, z) in enumerate(rays)]
            continue
        plus = [i for i, v in enumerate(vals) if v > 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        minus = [i for i, v in enumerate(vals) if v < 0]
        new_rays = []
        for i in plus:
            for j in minus:
                meet = rays[i][1] & rays[j][1]
                adjacent = not any(k != i and k != j and meet <= rays[k][1]
                                   for k in range(len(rays)))
                if not adjacent:
                    continue
                ri, rj = vector(rays[i][0]), vector(rays[j][0])
                comb = scalars.vec_sub(scalars.vec_scale(vals[i], rj),
                                       scalars.vec_scale(vals[j], ri))
                r = primitive(comb)
                z = frozenset(
                    k for k in range(idx + 1)
                    if scalars.vec_dot(vector(r), vector(ordered[k])) == 0)
                new_rays.append((r, z))
        kept = [(rays[i][0], rays[i][1]) for i in plus]
        kept += [(rays[i][0], rays[i][1] | {idx}) for i in zero]
        dedup = {}
        for r, z in kept + new_rays:
            dedup[r] = z
        rays = list(dedup.items())
    ray_vecs = sorted(r for r, _ in rays)
    # facets of the dual cone correspond to generators whose hyperplane
    # touches the dual in dimension rho - 1
    facets = []
    for n, g in zip([primitive(scalars.mat_vec(gram, g)) for g in gens], gens):
        tight = [r for r in ray_vecs
                 if scalars.vec_dot(vector(r), vector(n)) == 0]
        if rank(tight) == rho - 1:
            facets.append(primitive(g))
    facets = sorted(set(facets))
    return PolyCone(generators=tuple(ray_vecs), facet_normals=tuple(facets))
