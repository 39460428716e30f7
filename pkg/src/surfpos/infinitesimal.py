"""Blow-up construction and infinitesimal Newton-Okounkov invariants.

A blow-up of a model at a combinatorially specified point extends the
lattice by an exceptional class E with E^2 = -1 orthogonal to pullbacks;
curve records become strict transforms class - mult * E.  Infinitesimal
polygons are ordinary polygons on the blow-up with respect to flags (E, y),
and the local positivity invariants (the asymptotic multiplicity mu', the
largest inverted simplex xi, moving Seshadri constants) are read off them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import models as models_mod
from . import okounkov, scalars, zariski
from .errors import (
    InconsistentMultiplicities,
    ModelInconsistency,
    NotBig,
    PointInNegLocus,
)
from .lattice import (
    CurveRecord,
    DivisorClass,
    PointSpec,
    SurfaceModel,
    pairing,
    validate_model,
)
from .okounkov import NOPolygon
from .scalars import ExactScalar


@dataclass(frozen=True)
class BlowupSpec:
    """Point to blow up, described by curve multiplicities.

    ``mults`` assigns each listed curve its multiplicity at the point
    (omitted names mean the curve misses it).  New negative curves that
    appear only after blowing up (in the extended basis, with the
    exceptional coordinate last) go in ``extra_curves``; set
    ``extra_complete`` when that list is known to complete the effective
    cone.  ``renames`` relabels strict transforms.
    """

    mults: dict[str, int] = field(default_factory=dict)
    extra_curves: tuple[tuple[str, tuple[int, ...]], ...] = ()
    extra_complete: bool = False
    exceptional_name: Optional[str] = None
    renames: dict[str, str] = field(default_factory=dict)

    @property
    def generic(self) -> bool:
        return all(m == 0 for m in self.mults.values()) \
            and not self.extra_curves


@dataclass(frozen=True)
class InfFlagSpec:
    """Point y on the exceptional curve: generic, or the intersection with
    a named strict transform (which must actually meet E)."""

    on: Optional[str] = None
    mult: int = 1

    @property
    def generic(self) -> bool:
        return self.on is None


GENERIC_POINT = BlowupSpec()
GENERIC_Y = InfFlagSpec()


def point_on_exceptional_spec(model: SurfaceModel) -> BlowupSpec:
    """Blow-up point on the exceptional curve of bl1p2, with the line in
    the tangent direction declared; produces the two-step construction."""
    if not model.has_curve("E"):
        raise ModelInconsistency("model has no curve named E")
    return BlowupSpec(
        mults={"E": 1},
        extra_curves=(("E3", (1, -1, -1)),),
        extra_complete=True,
        exceptional_name="E1",
        renames={"E": "E2"},
    )


def _fresh_name(taken, base="E") -> str:
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def blow_up(model: SurfaceModel, spec: BlowupSpec = GENERIC_POINT
            ) -> tuple[SurfaceModel, Callable[[Sequence], DivisorClass], str]:
    """Blow up the model at the specified point.

    Returns (new model, pullback map on divisor classes, exceptional name).
    At a generic point of a del Pezzo model the complete list of new
    (-1)-classes is enumerated automatically; at special points the caller
    declares the new negative curves.
    """
    rho = model.rank
    for name, m in spec.mults.items():
        if m < 0 or not model.has_curve(name):
            raise InconsistentMultiplicities(f"bad multiplicity for {name!r}")
    listed = {n: m for n, m in spec.mults.items() if m > 0}
    for n1 in listed:
        for n2 in listed:
            if n1 < n2:
                glob = pairing(model, model.curve_class(n1),
                               model.curve_class(n2))
                if glob < listed[n1] * listed[n2]:
                    raise InconsistentMultiplicities(
                        f"{n1} and {n2} cannot both have these "
                        f"multiplicities at one point")
    taken = set(model.basis_labels) | {c.name for c in model.curves}
    taken |= {spec.renames.get(c.name, c.name) for c in model.curves}
    taken |= {n for n, _ in spec.extra_curves}
    exc = spec.exceptional_name or _fresh_name(taken)
    labels = model.basis_labels + (exc,)
    gram = tuple(tuple(row) + (0,) for row in model.gram)
    gram += (tuple([0] * rho) + (-1,),)

    def pullback(d: Sequence) -> DivisorClass:
        return tuple(scalars.vector(d)) + (Fraction(0),)

    curves: list[CurveRecord] = []
    for c in model.curves:
        m = spec.mults.get(c.name, 0)
        cls = tuple(c.cls) + (-m,)
        curves.append(CurveRecord(
            name=spec.renames.get(c.name, c.name), cls=cls,
            self_int=c.self_int - m * m, is_rational=c.is_rational))
    curves.append(CurveRecord(name=exc, cls=(0,) * rho + (1,),
                              self_int=-1, is_rational=True))

    def new_self_int(cls) -> int:
        total = sum(Fraction(x) * gram[i][j] * Fraction(y)
                    for i, x in enumerate(cls)
                    for j, y in enumerate(cls) if x and y)
        if total.denominator != 1:
            raise InconsistentMultiplicities(f"non-integral class {cls}")
        return total.numerator

    for name, cls in spec.extra_curves:
        if len(cls) != rho + 1:
            raise InconsistentMultiplicities(
                f"extra curve {name!r} must live in the blown-up basis")
        curves.append(CurveRecord(name=name, cls=tuple(int(x) for x in cls),
                                  self_int=new_self_int(cls),
                                  is_rational=None))

    # nine or more general points give infinitely many negative curves;
    # past r = 7 the generic blow-up is no longer a catalogued del Pezzo
    is_dp = model.metadata.get("family") == "del-pezzo" \
        and int(model.metadata.get("r", "9")) <= 7
    ample_is_ample = False
    ample = pullback(model.ample_ref)
    if spec.generic:
        # movable families acquire a member through the point
        present = {c.cls for c in curves}
        for fam in model.generic_families:
            cls = tuple(fam.cls) + (-fam.mult,)
            if cls in present:
                continue
            name = _fresh_name({c.name for c in curves}, fam.name_hint)
            curves.append(CurveRecord(name=name, cls=cls,
                                      self_int=new_self_int(cls),
                                      is_rational=None))
            present.add(cls)
        if is_dp:
            r_new = int(model.metadata["r"]) + 1
            for cls in models_mod.enumerate_minus_one_curves(r_new):
                if cls not in present:
                    name = _fresh_name({c.name for c in curves}, "C")
                    curves.append(CurveRecord(name=name, cls=cls,
                                              self_int=-1, is_rational=True))
                    present.add(cls)
            ample = tuple(map(Fraction, (3,) + (-1,) * r_new))
            ample_is_ample = True
    canonical = None
    if model.canonical is not None:
        canonical = tuple(model.canonical) + (Fraction(1),)
    complete = model.completeness_declared and (spec.generic
                                                or spec.extra_complete)
    if model.metadata.get("family") == "del-pezzo" and not is_dp \
            and spec.generic:
        complete = False  # blow-up of bl8p2: negative curves not listable
    if is_dp and spec.generic:
        metadata = {"family": "del-pezzo",
                    "r": str(int(model.metadata["r"]) + 1)}
    else:
        metadata = {"family": "blow-up",
                    "base": model.metadata.get("family", "?")}
    new_model = SurfaceModel(
        rank=rho + 1,
        basis_labels=labels,
        gram=gram,
        curves=tuple(curves),
        ample_ref=ample,
        canonical=canonical,
        completeness_declared=complete,
        ample_ref_is_ample=ample_is_ample,
        points={"generic": PointSpec(on_curve=exc, generic=True)},
        generic_families=(),
        metadata=metadata,
    )
    validate_model(new_model)
    return new_model, pullback, exc


def _flag_point(bm: SurfaceModel, exc: str, y: InfFlagSpec) -> PointSpec:
    if y.generic:
        return PointSpec(on_curve=exc, generic=True)
    if not bm.has_curve(y.on):
        raise InconsistentMultiplicities(f"no curve named {y.on!r}")
    meet = pairing(bm, bm.curve_class(y.on), bm.curve_class(exc))
    if meet < y.mult or y.mult < 1:
        raise InconsistentMultiplicities(
            f"{y.on} does not meet the exceptional curve with "
            f"multiplicity {y.mult}")
    return PointSpec(on_curve=exc, local_mults={y.on: y.mult}, generic=False)


def infinitesimal_polygon(model: SurfaceModel, d: Sequence,
                          x: BlowupSpec = GENERIC_POINT,
                          y: InfFlagSpec = GENERIC_Y) -> NOPolygon:
    """Polygon of the pullback with respect to the flag (E, y)."""
    bm, pullback, exc = blow_up(model, x)
    return okounkov.okounkov_polygon(bm, pullback(model.divisor(d)), exc,
                                     _flag_point(bm, exc, y))


def mu_prime(model: SurfaceModel, d: Sequence,
             x: BlowupSpec = GENERIC_POINT) -> ExactScalar:
    """Largest t with pullback(D) - tE big: the asymptotic multiplicity."""
    d = model.divisor(d)
    if not zariski.is_big(model, d):
        raise NotBig("mu' needs a big class")
    bm, pullback, exc = blow_up(model, x)
    return okounkov.mu_sup(bm, pullback(d), exc)


def _neg_through(model: SurfaceModel, d, x: BlowupSpec) -> list[str]:
    pair = zariski.zariski_decompose(model, d)
    return [n for n in pair.support if x.mults.get(n, 0) > 0]


def exceptional_directions(bm: SurfaceModel, exc: str) -> list[str]:
    """Strict transforms actually meeting the exceptional curve."""
    e = bm.curve_class(exc)
    return [c.name for c in bm.curves
            if c.name != exc and pairing(bm, c.cls, e) >= 1
            and c.self_int < 0]


def xi(model: SurfaceModel, d: Sequence,
       x: BlowupSpec = GENERIC_POINT) -> ExactScalar:
    """Largest xi with the inverted simplex of size xi inside every
    infinitesimal polygon at x; independent of the point y on E.

    Computed at a generic y and re-verified at every special direction.
    """
    d = model.divisor(d)
    if not zariski.is_big(model, d):
        raise NotBig("xi needs a big class")
    through = _neg_through(model, d, x)
    if through:
        raise PointInNegLocus(f"point lies on negative curves {through}")
    bm, pullback, exc = blow_up(model, x)
    dd = pullback(d)
    poly = okounkov.okounkov_polygon(bm, dd, exc,
                                     PointSpec(on_curve=exc, generic=True))
    value = okounkov.largest_inverted_simplex(poly)
    for name in exceptional_directions(bm, exc):
        special = okounkov.okounkov_polygon(
            bm, dd, exc,
            PointSpec(on_curve=exc, local_mults={name: 1}, generic=False))
        if okounkov.largest_inverted_simplex(special) != value:
            raise ModelInconsistency(
                f"xi depends on the direction {name}; model data is wrong")
    return value


class SeshadriStatus(enum.Enum):
    IN_NEG = "in-neg"
    IN_NULL_NOT_NEG = "in-null-not-neg"
    POSITIVE = "positive"


@dataclass(frozen=True)
class MovingSeshadri:
    status: SeshadriStatus
    value: Optional[ExactScalar] = None


def moving_seshadri(model: SurfaceModel, d: Sequence,
                    x: BlowupSpec = GENERIC_POINT) -> MovingSeshadri:
    """Moving Seshadri constant of a big class at x, as a tagged status:
    on the negative locus, on the null locus only (value zero), or
    positive with value xi."""
    d = model.divisor(d)
    if not zariski.is_big(model, d):
        raise NotBig("moving Seshadri constant needs a big class")
    report = zariski.loci(model, d)
    if any(x.mults.get(n, 0) > 0 for n in report.neg_curves):
        return MovingSeshadri(SeshadriStatus.IN_NEG)
    if any(x.mults.get(n, 0) > 0 for n in report.null_curves):
        return MovingSeshadri(SeshadriStatus.IN_NULL_NOT_NEG,
                              value=Fraction(0))
    return MovingSeshadri(SeshadriStatus.POSITIVE, value=xi(model, d, x))


def generic_infinitesimal_polygon(model: SurfaceModel, d: Sequence,
                                  x: BlowupSpec = GENERIC_POINT) -> NOPolygon:
    """Infinitesimal polygon at a generic y; its base is the whole segment
    [0, mu'] on the t-axis."""
    d = model.divisor(d)
    if not zariski.is_big(model, d):
        raise NotBig("polygon needs a big class")
    poly = infinitesimal_polygon(model, d, x, GENERIC_Y)
    if okounkov.alpha_zero_prefix(poly) != poly.mu:
        raise ModelInconsistency(
            "generic infinitesimal polygon does not rest on the t-axis")
    return poly


def vertex_t_coordinates(poly: NOPolygon) -> list[ExactScalar]:
    """Sorted distinct t-coordinates of the polygon vertices; these agree
    across all choices of y on the exceptional curve."""
    seen: list[ExactScalar] = []
    for t, _ in poly.vertices:
        if not any(t == s for s in seen):
            seen.append(t)
    return sorted(seen)
