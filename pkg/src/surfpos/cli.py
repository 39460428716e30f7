"""Command-line front end.

Subcommands cover every computation; outputs are deterministic JSON
(sorted keys, canonical rational strings), optional SVG renderings, and
per-chamber CSV tables.  Exit codes: 0 success, 1 domain error (with a
machine-readable error object on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import infinitesimal, lattice, models, okounkov, seshadri, zariski
from .errors import ParseError, SurfposError, UnknownSymbol
from .infinitesimal import BlowupSpec, GENERIC_POINT, InfFlagSpec
from .lattice import PointSpec, SurfaceModel
from .okounkov import NOPolygon
from .scalars import Quad


# ----------------------------------------------------------------------
# divisor expression parsing
# ----------------------------------------------------------------------

_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | set("0123456789")


def parse_divisor(text: str, model: SurfaceModel):
    """Parse a linear combination like "2H - 3/2*E1 + E2".

    Grammar: expr := ['+'|'-'] term (('+'|'-') term)*;
             term := [rational ['*']] ident; rational := int | int '/' int.
    Whitespace is removed up front; error offsets refer to the condensed
    text.
    """
    s = "".join(text.split())
    pos = 0

    def peek():
        return s[pos] if pos < len(s) else ""

    def number():
        nonlocal pos
        start = pos
        while peek().isdigit():
            pos += 1
        if start == pos:
            raise ParseError(pos, "integer")
        num = int(s[start:pos])
        if peek() == "/":
            pos += 1
            dstart = pos
            while peek().isdigit():
                pos += 1
            if dstart == pos:
                raise ParseError(pos, "denominator")
            den = int(s[dstart:pos])
            if den == 0:
                raise ParseError(dstart, "non-zero denominator")
            return Fraction(num, den)
        return Fraction(num)

    def ident():
        nonlocal pos
        start = pos
        if peek() not in _IDENT_START:
            raise ParseError(pos, "name")
        pos += 1
        while peek() in _IDENT_CONT:
            pos += 1
        return s[start:pos], start

    def term():
        nonlocal pos
        coef = Fraction(1)
        if peek().isdigit():
            coef = number()
            if peek() == "*":
                pos += 1
        name, at = ident()
        try:
            cls = model.resolve(name)
        except KeyError:
            raise UnknownSymbol(name, at) from None
        return tuple(coef * x for x in cls)

    if not s:
        raise ParseError(0, "expression")
    total = (Fraction(0),) * model.rank
    sign = Fraction(1)
    if peek() in "+-":
        sign = Fraction(-1) if peek() == "-" else Fraction(1)
        pos += 1
    t = term()
    total = tuple(a + sign * b for a, b in zip(total, t))
    while pos < len(s):
        op = peek()
        if op not in "+-":
            raise ParseError(pos, "'+' or '-'")
        pos += 1
        sign = Fraction(-1) if op == "-" else Fraction(1)
        t = term()
        total = tuple(a + sign * b for a, b in zip(total, t))
    return total


# ----------------------------------------------------------------------
# serialization helpers
# ----------------------------------------------------------------------

def enc_scalar(x):
    if isinstance(x, Quad):
        return {"a": enc_scalar(x.a), "b": enc_scalar(x.b), "d": str(x.d),
                "approx": float(x)}
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 \
        else f"{x.numerator}/{x.denominator}"


def enc_vec(v):
    return [enc_scalar(x) for x in v]


def enc_polygon(poly: NOPolygon, extra=None) -> dict:
    doc = {
        "flag_curve": poly.flag_curve,
        "nu": enc_scalar(poly.nu),
        "mu": enc_scalar(poly.mu),
        "vertices": [[enc_scalar(t), enc_scalar(y)]
                     for t, y in _canonical_vertices(poly)],
        "area": enc_scalar(okounkov.polygon_area(poly)),
        "pieces": [
            {"t_lo": enc_scalar(p.t_lo), "t_hi": enc_scalar(p.t_hi),
             "alpha": enc_vec(p.alpha), "beta": enc_vec(p.beta),
             "support": list(p.support)}
            for p in poly.pieces
        ],
    }
    if extra:
        doc.update(extra)
    return doc


def _canonical_vertices(poly: NOPolygon):
    """Counterclockwise cycle starting at the smallest vertex (exact
    lexicographic comparison)."""
    verts = list(poly.vertices)
    start = 0
    for i in range(1, len(verts)):
        t, y = verts[i]
        t0, y0 = verts[start]
        if t < t0 or (t == t0 and y < y0):
            start = i
    return verts[start:] + verts[:start]


def emit(doc: dict, args) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    target = getattr(args, "json", None) or "-"
    if target == "-":
        sys.stdout.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")


def emit_csv(poly: NOPolygon, path: str) -> None:
    rows = ["t_lo,t_hi,alpha0,alpha1,beta0,beta1,support"]
    for p in poly.pieces:
        t_hi = enc_scalar(p.t_hi)
        if isinstance(t_hi, dict):
            t_hi = f"{t_hi['a']}+{t_hi['b']}*sqrt({t_hi['d']})"
        rows.append(",".join([
            enc_scalar(p.t_lo), t_hi,
            enc_scalar(p.alpha[0]), enc_scalar(p.alpha[1]),
            enc_scalar(p.beta[0]), enc_scalar(p.beta[1]),
            ";".join(p.support)]))
    text = "\n".join(rows) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def emit_svg(poly: NOPolygon, path: str, overlay=None) -> None:
    """Render the polygon; floats appear here only, never upstream."""
    pts = [(float(t), float(y)) for t, y in poly.vertices]
    max_t = max(p[0] for p in pts) or 1.0
    max_y = max(max(p[1] for p in pts), max_t) or 1.0
    scale = 360.0 / max(max_t, max_y)
    pad = 20.0
    H = max_y * scale + 2 * pad

    def fmt(x, y):
        return f"{pad + x * scale:.3f},{H - pad - y * scale:.3f}"

    path_d = "M " + " L ".join(fmt(x, y) for x, y in pts) + " Z"
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{max_t * scale + 2 * pad:.0f}" height="{H:.0f}">',
        f'<line x1="{pad:.3f}" y1="{H - pad:.3f}" x2="{pad + max_t * scale:.3f}" y2="{H - pad:.3f}" stroke="#888"/>',
        f'<line x1="{pad:.3f}" y1="{H - pad:.3f}" x2="{pad:.3f}" y2="{pad:.3f}" stroke="#888"/>',
        f'<line x1="{pad:.3f}" y1="{H - pad:.3f}" x2="{fmt(min(max_t, max_y), min(max_t, max_y))}" stroke="#bbb" stroke-dasharray="4"/>',
        f'<path d="{path_d}" fill="#9ecae1" fill-opacity="0.6" stroke="#3182bd"/>',
    ]
    if overlay:
        kind, size = overlay
        size = float(size)
        if size > 0:
            if kind == "simplex":
                tri = [(0.0, 0.0), (size, 0.0), (0.0, size)]
            else:
                tri = [(0.0, 0.0), (size, 0.0), (size, size)]
            d = "M " + " L ".join(fmt(x, y) for x, y in tri) + " Z"
            parts.append(f'<path d="{d}" fill="none" stroke="#e6550d" '
                         f'stroke-width="1.5"/>')
    parts.append("</svg>")
    text = "\n".join(parts) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


# ----------------------------------------------------------------------
# argument plumbing
# ----------------------------------------------------------------------

def _flag_curve(model: SurfaceModel, name: str) -> str:
    if not model.has_curve(name):
        raise UnknownSymbol(name)
    return name


def _resolve_point(arg, model: SurfaceModel, flag_curve: str) -> PointSpec:
    if arg in (None, "generic"):
        return PointSpec(on_curve=flag_curve, generic=True)
    if arg.startswith("named:"):
        name = arg.split(":", 1)[1]
        if name not in model.points:
            raise UnknownSymbol(name)
        ps = model.points[name]
        if ps.on_curve != flag_curve:
            raise SurfposError(
                f"point {name!r} lies on {ps.on_curve}, not {flag_curve}")
        return ps
    doc = json.loads(Path(arg).read_text(encoding="utf-8"))
    return PointSpec(on_curve=doc.get("on_curve", flag_curve),
                     local_mults={str(k): int(v) for k, v in
                                  doc.get("local_mults", {}).items()},
                     generic=bool(doc.get("generic", False)))


def _resolve_blowup_point(arg, model: SurfaceModel) -> BlowupSpec:
    if arg is None:
        if model.metadata.get("default_point") == "on-E-tangent":
            return infinitesimal.point_on_exceptional_spec(model)
        return GENERIC_POINT
    if arg == "generic":
        return GENERIC_POINT
    doc = json.loads(Path(arg).read_text(encoding="utf-8"))
    return BlowupSpec(
        mults={str(k): int(v) for k, v in doc.get("mults", {}).items()},
        extra_curves=tuple((str(c["name"]), tuple(int(x) for x in c["class"]))
                           for c in doc.get("extra_curves", [])),
        extra_complete=bool(doc.get("extra_complete", False)),
        exceptional_name=doc.get("exceptional_name"),
        renames={str(k): str(v) for k, v in doc.get("renames", {}).items()},
    )


def _resolve_y(arg) -> InfFlagSpec:
    if arg in (None, "generic"):
        return InfFlagSpec()
    if arg.startswith("on:"):
        return InfFlagSpec(on=arg.split(":", 1)[1])
    raise SurfposError(f"bad --y value {arg!r}; use generic or on:<curve>")


def _add_common(sp, divisor=True, flag=False, point=False, y=False):
    sp.add_argument("--model", required=True,
                    help="builtin:<name> or a model JSON path")
    if divisor:
        sp.add_argument("--divisor", required=True,
                        help="expression like '2H - 3/2*E'")
    if flag:
        sp.add_argument("--flag-curve", required=True, dest="flag_curve")
    if point:
        sp.add_argument("--point", default=None,
                        help="generic, named:<name>, or a spec JSON path")
    if y:
        sp.add_argument("--y", default=None, help="generic or on:<curve>")
    sp.add_argument("--json", default=None, help="output path or -")
    sp.add_argument("--svg", default=None)
    sp.add_argument("--csv", default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="surfpos",
        description="Exact Zariski decompositions, Newton-Okounkov "
                    "polygons, and Seshadri-type invariants on surface "
                    "models.")
    sub = ap.add_subparsers(dest="command", required=True)

    _add_common(sub.add_parser("zariski", help="Zariski decomposition"))
    _add_common(sub.add_parser("loci", help="null and negative loci"))
    _add_common(sub.add_parser("polygon", help="Newton-Okounkov polygon"),
                flag=True, point=True)
    _add_common(sub.add_parser("infinitesimal",
                               help="infinitesimal polygon at a point"),
                point=True, y=True)
    _add_common(sub.add_parser("seshadri", help="Seshadri constant"),
                point=True)
    _add_common(sub.add_parser("moving-seshadri",
                               help="moving Seshadri constant"), point=True)
    _add_common(sub.add_parser("lambda", help="largest simplex constant"),
                flag=True, point=True)
    _add_common(sub.add_parser("nefcone", help="dual of the effective cone"),
                divisor=False)
    _add_common(sub.add_parser("freemult",
                               help="base-point-free multiple bound"))
    gb = sub.add_parser("genericbound",
                        help="very-general-point Seshadri bound")
    gb.add_argument("--deg", required=True, help="(A^2) as a rational")
    gb.add_argument("--target", required=True, help="target bound tau")
    gb.add_argument("--exclude-q1", action="store_true", dest="exclude_q1")
    gb.add_argument("--json", default=None)
    _add_common(sub.add_parser("blowup", help="blow up a model at a point"),
                divisor=False, point=True)
    _add_common(sub.add_parser("check", help="re-run model invariants"),
                divisor=False)
    return ap


def _scalar_or_status(result):
    if result.value is not None:
        return enc_scalar(result.value)
    return None


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    model = None
    if getattr(args, "model", None):
        model = models.resolve_model(args.model)
    cmd = args.command

    if cmd == "zariski":
        d = parse_divisor(args.divisor, model)
        pair = zariski.zariski_decompose(model, d)
        emit({"P": enc_vec(pair.P),
              "N": {n: enc_scalar(a) for n, a in pair.N_coeffs.items()},
              "support": list(pair.support),
              "relative": pair.relative,
              "volume": enc_scalar(zariski.volume(model, d)),
              "nef": zariski.is_nef(model, d),
              "ample": zariski.is_ample(model, d),
              "big": zariski.is_big(model, d)}, args)
    elif cmd == "loci":
        d = parse_divisor(args.divisor, model)
        rep = zariski.loci(model, d)
        emit({"null": sorted(rep.null_curves),
              "neg": sorted(rep.neg_curves),
              "relative": rep.relative}, args)
    elif cmd == "polygon":
        d = parse_divisor(args.divisor, model)
        flag = _flag_curve(model, args.flag_curve)
        point = _resolve_point(args.point, model, flag)
        res = okounkov.criterion_at_point(model, d, flag, point)
        poly = res["polygon"]
        emit(enc_polygon(poly, {"origin_in": res["origin_in"],
                                "lambda": enc_scalar(res["lambda"])}), args)
        if args.svg:
            emit_svg(poly, args.svg, overlay=("simplex", res["lambda"]))
        if args.csv:
            emit_csv(poly, args.csv)
    elif cmd == "infinitesimal":
        d = parse_divisor(args.divisor, model)
        x = _resolve_blowup_point(args.point, model)
        y = _resolve_y(args.y)
        poly = infinitesimal.infinitesimal_polygon(model, d, x, y)
        extra = {"mu_prime": enc_scalar(poly.mu)}
        try:
            xi_val = infinitesimal.xi(model, d, x)
            extra["xi"] = enc_scalar(xi_val)
        except SurfposError:
            xi_val = None
            extra["xi"] = None
        emit(enc_polygon(poly, extra), args)
        if args.svg:
            emit_svg(poly, args.svg,
                     overlay=("inverted", xi_val or 0))
        if args.csv:
            emit_csv(poly, args.csv)
    elif cmd == "seshadri":
        d = parse_divisor(args.divisor, model)
        x = _resolve_blowup_point(args.point, model)
        emit({"epsilon": enc_scalar(seshadri.seshadri_direct(model, d, x))},
             args)
    elif cmd == "moving-seshadri":
        d = parse_divisor(args.divisor, model)
        x = _resolve_blowup_point(args.point, model)
        res = infinitesimal.moving_seshadri(model, d, x)
        emit({"status": res.status.value,
              "value": _scalar_or_status(res)}, args)
    elif cmd == "lambda":
        d = parse_divisor(args.divisor, model)
        flag = _flag_curve(model, args.flag_curve)
        point = _resolve_point(args.point, model, flag)
        lam = seshadri.largest_simplex_flag(model, d, flag, point)
        emit({"lambda": enc_scalar(lam)}, args)
    elif cmd == "nefcone":
        cone = lattice.dual_cone(model.effective_gens(), model)
        emit({"rays": [list(r) for r in cone.generators],
              "facet_normals": [list(f) for f in cone.facet_normals]}, args)
    elif cmd == "freemult":
        b = parse_divisor(args.divisor, model)
        cone = lattice.dual_cone(model.effective_gens(), model)
        emit({"m": seshadri.free_multiple(cone, b, model)}, args)
    elif cmd == "genericbound":
        query = seshadri.GenericBoundQuery(
            degree=Fraction(args.deg), target=Fraction(args.target),
            exclude_q1=args.exclude_q1)
        res = seshadri.generic_seshadri_bound(query)
        emit({"holds": res.holds,
              "witnesses": [list(w) for w in res.witnesses],
              "q_range": list(res.q_range)}, args)
    elif cmd == "blowup":
        x = _resolve_blowup_point(args.point, model)
        bm, _, exc = infinitesimal.blow_up(model, x)
        doc = models.model_to_dict(bm)
        doc["exceptional"] = exc
        emit(doc, args)
    elif cmd == "check":
        checks = run_checks(model)
        emit({"ok": all(ok for _, ok in checks),
              "checks": [{"name": n, "ok": ok} for n, ok in checks]}, args)
    return 0


def run_checks(model: SurfaceModel) -> list[tuple[str, bool]]:
    checks = []
    try:
        lattice.validate_model(model)
        checks.append(("invariants", True))
    except SurfposError:
        checks.append(("invariants", False))
    gens = model.effective_gens()
    if len(gens) <= 40 and model.rank <= 7:
        try:
            cone = lattice.dual_cone(gens, model)
            back = lattice.dual_cone(
                [tuple(map(Fraction, r)) for r in cone.generators], model)
            ok = all(lattice.cone_contains(gens, tuple(map(Fraction, r)))
                     for r in back.generators)
            ok = ok and all(
                lattice.cone_contains(
                    [tuple(map(Fraction, r)) for r in back.generators], g)
                for g in gens)
            checks.append(("dual-cone-round-trip", ok))
        except SurfposError:
            checks.append(("dual-cone-round-trip", False))
    return checks


def main(argv=None) -> int:
    try:
        return run(argv)
    except SurfposError as e:
        sys.stderr.write(json.dumps(
            {"error": e.code, "message": str(e)}, sort_keys=True) + "\n")
        return 1
    except OSError as e:
        sys.stderr.write(json.dumps(
            {"error": "io-error", "message": str(e)}, sort_keys=True) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
