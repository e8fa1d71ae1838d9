"""JSON documents: a version tag, a payload kind and a payload body.

Exact numbers are written as JSON integers when integral and as ``"p/q"``
strings otherwise; floats only occur in semi-flat documents.  Output is
deterministic: keys are sorted and every list comes from a sorted source.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any, NamedTuple

import jsonschema

from . import linalg as la
from .complexes import Fan, PolyhedralComplex, is_cone_cell
from .errors import SchemaError
from .plfunctions import PLFunction, pl_from_ray_values, regular_subdivision_from_heights
from .polyhedra import Cone, Polyhedron
from .potential import ExpWeight, LaurentPotential, Term
from .tropman import TropicalManifold

VERSION = "tropdlt/1"
INPUT_KINDS = ("cone", "polyhedron", "tropical_manifold", "fan_with_pl", "mirror_request",
               "semiflat_request")
KINDS = INPUT_KINDS + ("polyhedral_complex", "potential", "report")


# ---------------------------------------------------------------------------
# schema


@lru_cache(maxsize=None)
def schema() -> dict:
    text = resources.files("tropdlt").joinpath("schemas/tropdlt-1.schema.json").read_text()
    return json.loads(text)


@lru_cache(maxsize=None)
def _validator(kind: str):
    s = schema()
    sub = {"$ref": f"#/$defs/{kind}", "$defs": s["$defs"]}
    return jsonschema.Draft202012Validator(sub)


def validate_document(doc: Any) -> None:
    """Raise SchemaError unless ``doc`` is a well-formed document."""
    try:
        jsonschema.validate(doc, schema(), cls=jsonschema.Draft202012Validator)
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"invalid document: {exc.message}") from None
    kind = doc["kind"]
    if kind not in KINDS:
        raise SchemaError(f"unknown document kind {kind!r}")
    err = next(iter(sorted(_validator(kind).iter_errors(doc["payload"]), key=str)), None)
    if err is not None:
        path = "/".join(str(p) for p in err.absolute_path)
        raise SchemaError(f"invalid {kind} payload at '{path}': {err.message}")


def document(kind: str, payload: dict) -> dict:
    return {"version": VERSION, "kind": kind, "payload": payload}


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not JSON: {exc}") from None
    validate_document(doc)
    return doc


# ---------------------------------------------------------------------------
# numbers


def encode_q(x) -> int | str:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def decode_q(v) -> Fraction:
    if isinstance(v, bool) or isinstance(v, float):
        raise SchemaError(f"exact value expected, got {v!r}")
    try:
        return la.as_fraction(v)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise SchemaError(f"bad rational {v!r}") from exc


def encode_vec(v) -> list:
    return [encode_q(x) for x in v]


def decode_vec(v) -> tuple[Fraction, ...]:
    return tuple(decode_q(x) for x in v)


def _vecs(vs) -> list:
    return [encode_vec(v) for v in vs]


def _check_dim(vectors, dim, what):
    for v in vectors:
        if len(v) != dim:
            raise SchemaError(f"{what} {list(v)} does not have length {dim}")


# ---------------------------------------------------------------------------
# payloads


def cone_payload(c: Cone) -> dict:
    return {"dim": c.dim, "rays": _vecs(c.rays), "lines": _vecs(c.lines),
            "inequalities": _vecs(c.facets), "equations": _vecs(c.equations)}


def parse_cone(p: dict) -> Cone:
    dim = p["dim"]
    if "rays" in p or "lines" in p:
        rays = [decode_vec(r) for r in p.get("rays", [])]
        lines = [decode_vec(l) for l in p.get("lines", [])]
        _check_dim(rays + lines, dim, "generator")
        return Cone.from_generators(rays, lines, dim)
    if "inequalities" in p or "equations" in p:
        ineqs = [decode_vec(r) for r in p.get("inequalities", [])]
        eqs = [decode_vec(r) for r in p.get("equations", [])]
        _check_dim(ineqs + eqs, dim, "normal")
        return Cone.from_inequalities(ineqs, eqs, dim)
    raise SchemaError("a cone needs generators or inequalities")


def polyhedron_payload(p: Polyhedron, hrep: bool = True) -> dict:
    out = {"dim": p.dim, "vertices": _vecs(p.vertices), "rays": _vecs(p.rays),
           "lines": _vecs(p.lines)}
    if hrep:
        out["inequalities"] = [{"normal": encode_vec(a), "offset": encode_q(b)}
                               for a, b in p.inequalities]
        out["equations"] = [{"normal": encode_vec(a), "offset": encode_q(b)}
                            for a, b in p.equations]
    return out


def parse_polyhedron(p: dict) -> Polyhedron:
    dim = p["dim"]
    if "vertices" in p:
        verts = [decode_vec(v) for v in p["vertices"]]
        rays = [decode_vec(r) for r in p.get("rays", [])]
        lines = [decode_vec(l) for l in p.get("lines", [])]
        _check_dim(verts + rays + lines, dim, "vector")
        return Polyhedron.from_vrep(verts, rays, lines, dim)
    if "rays" in p or "lines" in p:
        raise SchemaError("rays or lines given without vertices")
    ineqs = [(decode_vec(a["normal"]), decode_q(a["offset"])) for a in p.get("inequalities", [])]
    eqs = [(decode_vec(a["normal"]), decode_q(a["offset"])) for a in p.get("equations", [])]
    _check_dim([a for a, _ in ineqs + eqs], dim, "normal")
    return Polyhedron.from_hrep(ineqs, eqs, dim)


def complex_payload(P: PolyhedralComplex) -> dict:
    return {"dim": P.ambient_dim,
            "cells": [polyhedron_payload(c, hrep=False) for c in P.maximal_cells]}


def parse_complex(p: dict) -> PolyhedralComplex:
    return PolyhedralComplex(parse_polyhedron(c) for c in p["cells"])


def _is_fan(P: PolyhedralComplex) -> bool:
    return all(is_cone_cell(c) for c in P.maximal_cells)


def manifold_payload(T: TropicalManifold) -> dict:
    out = complex_payload(T.P)
    out["phi"] = [{"slope": encode_vec(T.phi.pieces[s][0]), "const": encode_q(T.phi.pieces[s][1])}
                  for s in T.P.maximal_cells]
    out["vertex_values"] = [{"point": encode_vec(v.vertices[0]), "value": encode_q(T.phi(v.vertices[0]))}
                            for v in T.P.vertices]
    if _is_fan(T.P):
        rays = sorted({r for c in T.P.cells if c.dimension == 1 and not c.lines for r in c.rays})
        out["ray_values"] = [{"point": encode_vec(r), "value": encode_q(T.phi(r))} for r in rays]
    if T.B != T.P.support_hull:
        out["B"] = polyhedron_payload(T.B, hrep=False)
    return out


def parse_manifold(p: dict, heights=None, check: bool = True) -> TropicalManifold:
    dim = p["dim"]
    if "points" in p:
        if "cells" in p:
            raise SchemaError("give either cells or points, not both")
        pts = [decode_vec(x) for x in p["points"]]
        _check_dim(pts, dim, "point")
        hs = heights if heights is not None else p.get("heights")
        if hs is not None:
            hs = [decode_q(h) for h in hs]
            if len(hs) != len(pts):
                raise SchemaError(f"{len(hs)} heights for {len(pts)} points")
        P, phi = regular_subdivision_from_heights(pts, hs)
        return TropicalManifold(P, phi, check=check)
    if "cells" not in p:
        raise SchemaError("a tropical manifold needs cells or points")
    if heights is not None:
        raise SchemaError("heights apply to point configurations only")
    cells = [parse_polyhedron(c) for c in p["cells"]]
    P = PolyhedralComplex(cells)
    B = parse_polyhedron(p["B"]) if "B" in p else None
    if "phi" in p:
        if len(p["phi"]) != len(cells):
            raise SchemaError("one phi piece per cell is required")
        pieces = {}
        for c, piece in zip(cells, p["phi"]):
            slope = decode_vec(piece["slope"])
            _check_dim([slope], dim, "slope")
            pieces[c] = (slope, decode_q(piece["const"]))
        if set(pieces) != set(P.maximal_cells):
            raise SchemaError("phi pieces must be given on the maximal cells")
        phi = PLFunction(P, pieces)
    elif "vertex_values" in p:
        vals = {decode_vec(x["point"]): decode_q(x["value"]) for x in p["vertex_values"]}
        try:
            phi = PLFunction.from_vertex_values(P, vals)
        except KeyError as exc:
            raise SchemaError(f"no value for vertex {exc}") from None
    elif "ray_values" in p:
        if not _is_fan(P):
            raise SchemaError("ray values need a fan")
        fan = Fan(P.maximal_cells)
        phi = _phi_from_ray_values(fan, p["ray_values"])
        P = fan
    else:
        phi = PLFunction.zero(P)
    return TropicalManifold(P, phi, B, check=check)


def _phi_from_ray_values(fan: Fan, items) -> PLFunction:
    vals = {}
    for x in items:
        r = decode_vec(x["point"])
        if la.is_zero(r):
            raise SchemaError("ray values need nonzero points")
        # phi is homogeneous, so a value at k * p fixes the value at p
        vals[la.primitive(r)] = decode_q(x["value"]) / _ratio(r)
    missing = [r for r in fan.rays if r not in vals]
    if missing:
        raise SchemaError(f"no value for ray {list(missing[0])}")
    phi = pl_from_ray_values(fan, vals)
    if phi is None:
        raise SchemaError("ray values are not linear on some cone")
    return phi


def _ratio(r) -> Fraction:
    p = la.primitive(r)
    i = next(i for i, x in enumerate(p) if x)
    return Fraction(r[i]) / p[i]


class FanWithPL(NamedTuple):
    fan: Fan
    phi: PLFunction | None


def fan_payload(fan: Fan, phi: PLFunction | None = None) -> dict:
    out = {"dim": fan.ambient_dim,
           "cones": [{"dim": c.dim, "rays": _vecs(c.rays), "lines": _vecs(c.lines)}
                     for c in fan.maximal_cones]}
    if phi is not None:
        out["ray_values"] = [{"point": encode_vec(r), "value": encode_q(phi(r))} for r in fan.rays]
    return out


def parse_fan(p: dict) -> FanWithPL:
    cones = [parse_cone(c) for c in p["cones"]]
    for c in cones:
        if c.dim != p["dim"]:
            raise SchemaError("cone dimension differs from the fan dimension")
    fan = Fan.from_cones(cones)
    phi = _phi_from_ray_values(fan, p["ray_values"]) if "ray_values" in p else None
    return FanWithPL(fan, phi)


def _encode_coef(c):
    if isinstance(c, ExpWeight):
        return {"exp_weight": encode_q(c.alpha)}
    return encode_q(c)


def _decode_coef(c):
    if isinstance(c, dict):
        return ExpWeight(decode_q(c["exp_weight"]))
    return decode_q(c)


def potential_payload(W: LaurentPotential) -> dict:
    terms = []
    for t in W.terms:
        d = {"exp": list(t.exponent), "t": encode_q(t.t_exponent)}
        if not (isinstance(t.coefficient, Fraction) and t.coefficient == 1):
            d["coeff"] = _encode_coef(t.coefficient)
        terms.append(d)
    return {"dim": W.dim, "terms": terms}


def parse_potential(p: dict) -> LaurentPotential:
    terms = [Term(decode_q(t["t"]), tuple(t["exp"]),
                  _decode_coef(t["coeff"]) if "coeff" in t else Fraction(1)) for t in p["terms"]]
    return LaurentPotential(terms, p["dim"])


@dataclass
class MirrorRequest:
    cone: Cone
    Sigma: FanWithPL | None = None
    Sigma_check: FanWithPL | None = None
    star_rays: list = field(default_factory=list)
    star_rays_check: list = field(default_factory=list)
    coefficients: dict = field(default_factory=dict)


def mirror_request_payload(r: MirrorRequest) -> dict:
    out = {"cone": cone_payload(r.cone)}
    if r.Sigma is not None:
        out["Sigma"] = fan_payload(*r.Sigma)
    if r.Sigma_check is not None:
        out["Sigma_check"] = fan_payload(*r.Sigma_check)
    if r.star_rays:
        out["star_rays"] = _vecs(r.star_rays)
    if r.star_rays_check:
        out["star_rays_check"] = _vecs(r.star_rays_check)
    if r.coefficients:
        out["coefficients"] = [{"exp": list(e), "coeff": _encode_coef(c)}
                               for e, c in sorted(r.coefficients.items())]
    return out


def parse_mirror_request(p: dict) -> MirrorRequest:
    return MirrorRequest(
        parse_cone(p["cone"]),
        parse_fan(p["Sigma"]) if "Sigma" in p else None,
        parse_fan(p["Sigma_check"]) if "Sigma_check" in p else None,
        [la.primitive(decode_vec(r)) for r in p.get("star_rays", [])],
        [la.primitive(decode_vec(r)) for r in p.get("star_rays_check", [])],
        {tuple(c["exp"]): _decode_coef(c["coeff"]) for c in p.get("coefficients", [])})


@dataclass
class SemiflatRequest:
    a: list
    potential: str = "toric"
    task: str = "pl_limit"
    y: list | None = None
    w: list | None = None
    h: float = 1e-5
    r: float = 1.0
    mode: str = "scaled"
    r_list: list = field(default_factory=lambda: [100.0, 200.0])
    window: list = field(default_factory=list)
    num: int = 41


_SF_FIELDS = ("a", "potential", "task", "y", "w", "h", "r", "mode", "r_list", "window", "num")


def semiflat_payload(r: SemiflatRequest) -> dict:
    out = {}
    for k in _SF_FIELDS:
        v = getattr(r, k)
        if v is None or (k == "window" and not v):
            continue
        out[k] = v
    return out


def parse_semiflat(p: dict) -> SemiflatRequest:
    req = SemiflatRequest(**{k: p[k] for k in _SF_FIELDS if k in p})
    width = len(req.a[0])
    if any(len(row) != width for row in req.a):
        raise SchemaError("exponent rows must have equal length")
    for name in ("y", "w"):
        v = getattr(req, name)
        if v is not None and len(v) != width:
            raise SchemaError(f"{name} must have length {width}")
    if req.window and len(req.window) != width:
        raise SchemaError(f"window must have {width} intervals")
    return req


# ---------------------------------------------------------------------------
# dispatch


_PARSERS = {
    "cone": parse_cone,
    "polyhedron": parse_polyhedron,
    "polyhedral_complex": parse_complex,
    "tropical_manifold": parse_manifold,
    "fan_with_pl": parse_fan,
    "potential": parse_potential,
    "mirror_request": parse_mirror_request,
    "semiflat_request": parse_semiflat,
    "report": lambda p: p,
}


def from_document(doc: dict):
    """Validate ``doc`` and build the corresponding object."""
    validate_document(doc)
    return _PARSERS[doc["kind"]](doc["payload"])


def to_document(obj, kind: str | None = None) -> dict:
    if isinstance(obj, Cone):
        return document("cone", cone_payload(obj))
    if isinstance(obj, Polyhedron):
        return document("polyhedron", polyhedron_payload(obj))
    if isinstance(obj, TropicalManifold):
        return document("tropical_manifold", manifold_payload(obj))
    if isinstance(obj, FanWithPL):
        return document("fan_with_pl", fan_payload(*obj))
    if isinstance(obj, Fan) and kind == "fan_with_pl":
        return document("fan_with_pl", fan_payload(obj))
    if isinstance(obj, PolyhedralComplex):
        return document("polyhedral_complex", complex_payload(obj))
    if isinstance(obj, LaurentPotential):
        return document("potential", potential_payload(obj))
    if isinstance(obj, MirrorRequest):
        return document("mirror_request", mirror_request_payload(obj))
    if isinstance(obj, SemiflatRequest):
        return document("semiflat_request", semiflat_payload(obj))
    if isinstance(obj, dict):
        return document(kind or "report", obj)
    raise TypeError(f"no document kind for {type(obj).__name__}")
