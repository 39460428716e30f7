"""Zariski decomposition and positivity predicates.

The decomposition D = P + N is computed by the classical fixpoint: seed the
support with every declared curve D pairs negatively with, solve the Gram
system for the negative-part coefficients, and re-seed with any curve the
candidate positive part still pairs negatively with, until stable.  With a
complete curve list this terminates in at most #curves rounds and the
result is the unique decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import scalars
from .errors import (
    ModelInconsistency,
    NotBigNef,
    NotPseudoEffective,
    PointInNegLocus,
)
from .lattice import (
    DivisorClass,
    SurfaceModel,
    cone_contains,
    pairing,
    self_intersection,
)
from .scalars import is_negative_definite, solve_linear, vector


@dataclass(frozen=True)
class ZariskiPair:
    P: DivisorClass
    N_coeffs: dict[str, Fraction]
    support: tuple[str, ...]
    relative: bool = False

    def negative_part(self, model: SurfaceModel) -> DivisorClass:
        n = vector([0] * model.rank)
        for name, a in self.N_coeffs.items():
            n = scalars.vec_add(n, scalars.vec_scale(a, model.curve_class(name)))
        return n


@dataclass(frozen=True)
class LocusReport:
    null_curves: frozenset[str]
    neg_curves: frozenset[str]
    relative: bool = False


def is_pseudo_effective(model: SurfaceModel, d: Sequence) -> bool:
    return cone_contains(model.effective_gens(), model.divisor(d))


def _fixpoint(model: SurfaceModel, d: DivisorClass) -> tuple[DivisorClass, dict[str, Fraction]]:
    """Run the decomposition fixpoint; returns (P, coefficients)."""
    names = [c.name for c in model.curves]
    classes = {c.name: model.divisor(c.cls) for c in model.curves}
    support = [n for n in names if pairing(model, d, classes[n]) < 0]
    coeffs: dict[str, Fraction] = {}
    p = d
    for _ in range(len(names) + 1):
        if not support:
            return d, {}
        gram = model.gram_submatrix(support)
        if not is_negative_definite(gram):
            raise ModelInconsistency(
                "support Gram matrix not negative definite for "
                f"{support}; curve list is incomplete or wrong")
        rhs = [pairing(model, d, classes[n]) for n in support]
        sol = solve_linear(gram, rhs)
        if any(a < 0 for a in sol):
            raise ModelInconsistency(
                f"negative coefficient in candidate negative part on {support}")
        coeffs = dict(zip(support, sol))
        p = d
        for n, a in coeffs.items():
            p = scalars.vec_sub(p, scalars.vec_scale(a, classes[n]))
        entering = [n for n in names if n not in support
                    and pairing(model, p, classes[n]) < 0]
        if not entering:
            break
        support += entering
    else:
        raise ModelInconsistency("decomposition fixpoint failed to stabilize")
    return p, {n: a for n, a in coeffs.items() if a != 0}


def zariski_decompose(model: SurfaceModel, d: Sequence) -> ZariskiPair:
    d = model.divisor(d)
    if not is_pseudo_effective(model, d):
        coords = ", ".join(str(x) for x in d)
        raise NotPseudoEffective(f"({coords}) is not in the effective cone")
    p, coeffs = _fixpoint(model, d)
    order = [c.name for c in model.curves if c.name in coeffs]
    return ZariskiPair(P=p, N_coeffs={n: coeffs[n] for n in order},
                       support=tuple(order),
                       relative=not model.completeness_declared)


def loci(model: SurfaceModel, d: Sequence) -> LocusReport:
    pair = zariski_decompose(model, d)
    null = frozenset(c.name for c in model.curves
                     if pairing(model, pair.P, model.divisor(c.cls)) == 0)
    return LocusReport(null_curves=null,
                       neg_curves=frozenset(pair.support),
                       relative=pair.relative)


def is_nef(model: SurfaceModel, d: Sequence) -> bool:
    d = model.divisor(d)
    if self_intersection(model, d) < 0:
        return False
    if pairing(model, d, model.ample_ref) < 0:
        return False
    return all(pairing(model, d, model.divisor(c.cls)) >= 0
               for c in model.curves)


def is_ample(model: SurfaceModel, d: Sequence) -> bool:
    """Nakai-Moishezon against the declared curve list."""
    d = model.divisor(d)
    if self_intersection(model, d) <= 0:
        return False
    if pairing(model, d, model.ample_ref) <= 0:
        return False
    return all(pairing(model, d, model.divisor(c.cls)) > 0
               for c in model.curves)


def volume(model: SurfaceModel, d: Sequence) -> Fraction:
    """vol(D) = (P_D)^2 for pseudo-effective D."""
    pair = zariski_decompose(model, d)
    return self_intersection(model, pair.P)


def is_big(model: SurfaceModel, d: Sequence) -> bool:
    d = model.divisor(d)
    if not is_pseudo_effective(model, d):
        return False
    return volume(model, d) > 0


def ample_perturbation(model: SurfaceModel, p: Sequence):
    """Coefficients a with Gram(Null) . a entrywise negative, and a verified
    scale s such that P - s * sum(a_i E_i) is ample.

    Mirrors the ample-perturbation construction: a = -A^(-1) . 1 where A is
    the Gram matrix of the null curves (A^(-1) is entrywise non-positive, so
    a >= 0), and s is found by halving from 1 until the Nakai test passes.
    """
    p = model.divisor(p)
    if not is_nef(model, p):
        raise NotBigNef("perturbation needs a nef class")
    null = [c.name for c in model.curves
            if pairing(model, p, model.divisor(c.cls)) == 0]
    if not null:
        if not is_ample(model, p):
            raise NotBigNef("nef class with empty null locus but zero square")
        return {}, Fraction(0)
    gram = model.gram_submatrix(null)
    if not is_negative_definite(gram):
        raise ModelInconsistency(
            f"Gram matrix of null curves {null} is not negative definite; "
            "the class is not big")
    if self_intersection(model, p) <= 0:
        raise NotBigNef("perturbation needs a big class")
    inv = scalars.inverse(gram)
    ones = vector([1] * len(null))
    a = tuple(-x for x in scalars.mat_vec(inv, ones))
    if any(x < 0 for x in a):
        raise ModelInconsistency("inverse Gram has a positive entry")
    direction = vector([0] * model.rank)
    for name, coef in zip(null, a):
        direction = scalars.vec_add(direction,
                                    scalars.vec_scale(coef, model.curve_class(name)))
    s = Fraction(1)
    for _ in range(64):
        candidate = scalars.vec_sub(p, scalars.vec_scale(s, direction))
        if is_ample(model, candidate):
            return dict(zip(null, a)), s
        s /= 2
    raise ModelInconsistency("no ample perturbation found by halving")


def neg_curves_through(model: SurfaceModel, pair: ZariskiPair,
                       mults: dict[str, int]) -> list[str]:
    """Support curves passing through the point described by ``mults``."""
    return [n for n in pair.support if mults.get(n, 0) > 0]


def pullback_zariski_check(model: SurfaceModel, blowup_model: SurfaceModel,
                           pullback, d: Sequence,
                           point_mults: dict[str, int],
                           rename: Optional[dict[str, str]] = None) -> bool:
    """Check that the pullback of a decomposition is again the decomposition.

    ``pullback`` maps base classes to blow-up classes; ``point_mults`` gives
    the multiplicity of each base curve at the blown-up point; ``rename``
    maps base curve names to their strict-transform names.
    """
    rename = rename or {}
    base = zariski_decompose(model, d)
    through = neg_curves_through(model, base, point_mults)
    if through:
        raise PointInNegLocus(
            f"point lies on negative curves {through}")
    up = zariski_decompose(blowup_model, pullback(model.divisor(d)))
    expect_p = pullback(base.P)
    expect_n = {rename.get(n, n): a for n, a in base.N_coeffs.items()}
    return tuple(up.P) == tuple(expect_p) and up.N_coeffs == expect_n
