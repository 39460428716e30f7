"""Shared fixtures: the model/flag/class test matrix and the independent
per-t decomposition oracle used to cross-check chamber walks."""

from __future__ import annotations

import random
from fractions import Fraction

import surfpos as sp
from surfpos.lattice import PointSpec

MATRIX_MODELS = ["p2", "bl1p2", "bl2p2", "bl3p2", "hirzebruch-2",
                 "example-interesting"]

GEN = PointSpec  # shorthand in tables below

FLAGS = {
    "p2": [("L", PointSpec(on_curve="L", generic=True))],
    "bl1p2": [("E", PointSpec(on_curve="E", generic=True)),
              ("F", PointSpec(on_curve="F", generic=True)),
              ("L", PointSpec(on_curve="L", generic=True))],
    "bl2p2": [("E1", PointSpec(on_curve="E1", generic=True)),
              ("L12", PointSpec(on_curve="L12", generic=True)),
              ("L", PointSpec(on_curve="L", generic=True))],
    "bl3p2": [("E1", PointSpec(on_curve="E1", generic=True)),
              ("L23", PointSpec(on_curve="L23", generic=True))],
    "hirzebruch-2": [("C0", PointSpec(on_curve="C0", generic=True)),
                     ("f", PointSpec(on_curve="f", generic=True))],
    "example-interesting": [
        ("E1", PointSpec(on_curve="E1", local_mults={"E2": 1},
                         generic=False)),
        ("E1", PointSpec(on_curve="E1", local_mults={"E3": 1},
                         generic=False)),
        ("E1", PointSpec(on_curve="E1", generic=True)),
        ("E2", PointSpec(on_curve="E2", local_mults={"E1": 1},
                         generic=False)),
    ],
}

BIG_CLASSES = {
    "p2": [(1,), (2,)],
    "bl1p2": [(1, 0), (2, -1), (3, 1)],
    "bl2p2": [(3, -1, -1), (1, 0, 0), (3, 1, 0)],
    "bl3p2": [(3, -1, -1, -1), (2, -1, 0, 0)],
    "hirzebruch-2": [(1, 3), (2, 3), (1, 1)],
    "example-interesting": [(2, 1, 1), (5, 2, 4), (3, 1, 2)],
}


def matrix_configs():
    """(model, big class, flag curve, point spec) across the test matrix."""
    out = []
    for name in MATRIX_MODELS:
        model = sp.builtin(name)
        for cls in BIG_CLASSES[name]:
            d = model.divisor(cls)
            assert sp.is_big(model, d), (name, cls)
            for flag_curve, point in FLAGS[name]:
                out.append((name, model, d, flag_curve, point))
    return out


def oracle_alpha_beta(model, d, flag_curve, point, t):
    """alpha(t), beta(t) from a fresh Zariski decomposition of D - tC,
    independent of the chamber walk."""
    c = model.curve_class(flag_curve)
    shifted = tuple(x - Fraction(t) * y for x, y in zip(d, c))
    pair = sp.zariski_decompose(model, shifted)
    assert flag_curve not in pair.N_coeffs
    alpha = sum((a * point.mult(n) for n, a in pair.N_coeffs.items()),
                Fraction(0))
    beta = alpha + sp.pairing(model, pair.P, c)
    return alpha, beta


def random_pseff(model, rng, ample_bump=0):
    """Random non-negative combination of effective generators, optionally
    bumped along the reference ample class."""
    gens = model.effective_gens()
    coeffs = [Fraction(rng.randrange(0, 5), rng.randrange(1, 4))
              for _ in gens]
    if all(c == 0 for c in coeffs):
        coeffs[rng.randrange(len(coeffs))] = Fraction(1)
    d = tuple(Fraction(0) for _ in range(model.rank))
    for c, g in zip(coeffs, gens):
        d = tuple(x + c * y for x, y in zip(d, g))
    if ample_bump:
        d = tuple(x + Fraction(ample_bump) * y
                  for x, y in zip(d, model.ample_ref))
    return d


def random_big(model, rng):
    for _ in range(100):
        d = random_pseff(model, rng, ample_bump=Fraction(rng.randrange(1, 3),
                                                         4))
        if sp.is_big(model, d):
            return d
    raise AssertionError("could not sample a big class")


def seeded_rng(salt: str) -> random.Random:
    return random.Random(f"surfpos-{salt}")


def grid_points(poly, step=Fraction(1, 64)):
    """Multiples of step inside [nu, mu], plus mu itself when rational."""
    k = (poly.nu / step).__ceil__()
    t = k * step
    out = []
    while t <= poly.mu:
        out.append(t)
        t += step
    if isinstance(poly.mu, Fraction) and (not out or out[-1] != poly.mu):
        out.append(poly.mu)
    return out


def assert_grid_oracle(configs, step=Fraction(1, 64)):
    """Chamber-walk alpha/beta match fresh per-t decompositions, exactly."""
    for name, model, d, flag_curve, point in configs:
        poly = sp.okounkov_polygon(model, d, flag_curve, point)
        for t in grid_points(poly, step):
            a, b = oracle_alpha_beta(model, d, flag_curve, point, t)
            assert poly.alpha(t) == a, (name, d, flag_curve, t)
            assert poly.beta(t) == b, (name, d, flag_curve, t)
