"""Command-line entry point: ``tropdlt <command> [options] [input]``.

Every command reads one JSON document from a file or stdin and writes a
document (or SVG/CSV) to stdout or ``--out``.  Exit codes: 0 success,
2 validation failure, 1 internal error, 64 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
import traceback
from fractions import Fraction

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_USAGE = 0, 1, 2, 64

COMMANDS = {
    "dualcone": "dual cone of a cone document",
    "dlt": "discrete Legendre transform of a tropical manifold",
    "bary": "barycentric subdivision of a tropical manifold or complex",
    "degenerate": "total space, asymptotic fan, central fibre and duality check",
    "charts": "chart monoids at the vertices of the total-space polyhedron",
    "potential": "potential reconstructed from the unbounded ray classes",
    "fano": "potential of a lattice polytope, one term per facet",
    "mirror-pair": "both potentials of a cone and its dual",
    "kodaira": "interior points and the combinatorial Kodaira dimension",
    "semiflat": "semi-flat numerics: moment map, gradients, PL limit, sweeps",
    "render": "SVG picture of a 1-D/2-D document or CSV of a sweep",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _threads_from_env():
    """Cap BLAS threads before numpy is imported."""
    val = os.environ.get("TROPDLT_THREADS")
    if not val:
        return
    try:
        n = int(val)
    except ValueError:
        raise UsageError(f"TROPDLT_THREADS must be a positive integer, got {val!r}") from None
    if n < 1:
        raise UsageError("TROPDLT_THREADS must be a positive integer")
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ[var] = str(n)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tropdlt", description="Exact tropical geometry toolkit.")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    for name, help_ in COMMANDS.items():
        s = sub.add_parser(name, help=help_, description=help_)
        s.add_argument("input", nargs="?", default="-", help="input document (default: stdin)")
        s.add_argument("--out", help="write the result here instead of stdout")
        s.add_argument("--format", choices=("json", "svg", "csv"), default=None)
        if name in ("dualcone", "dlt"):
            s.add_argument("--negate", action="store_true", help="reflect the result through 0")
        if name in ("dlt", "bary", "degenerate", "charts", "potential"):
            s.add_argument("--heights", help="comma-separated heights for a point configuration")
        if name in ("mirror-pair", "fano"):
            s.add_argument("--coeffs", help="coefficients as 'e1,e2=c;...' (c rational)")
        if name in ("semiflat", "render"):
            s.add_argument("--window", help="sample window 'lo:hi,lo:hi,...'")
            s.add_argument("--r-list", dest="r_list", help="comma-separated values of r")
        if name == "render":
            s.add_argument("--labels", action="store_true")
            s.add_argument("--phi-graph", dest="phi_graph", action="store_true")
            s.add_argument("--viewport", help="xmin,xmax[,ymin,ymax]")
    return p


# ---------------------------------------------------------------------------
# flag parsing


def _rational(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {s!r}") from None


def parse_heights(s: str | None):
    if s is None:
        return None
    return [_rational(x) for x in s.split(",") if x.strip()]


def parse_coeffs(s: str | None) -> dict:
    if not s:
        return {}
    out = {}
    for item in s.split(";"):
        if not item.strip():
            continue
        if "=" not in item:
            raise UsageError(f"coefficient {item!r} is not of the form 'e1,e2=c'")
        e, c = item.split("=", 1)
        try:
            exp = tuple(int(x) for x in e.split(","))
        except ValueError:
            raise UsageError(f"bad exponent {e!r}") from None
        out[exp] = _rational(c)
    return out


def parse_window(s: str | None):
    if s is None:
        return None
    out = []
    for part in s.split(","):
        try:
            lo, hi = (float(x) for x in part.split(":"))
        except ValueError:
            raise UsageError(f"bad window interval {part!r}, expected lo:hi") from None
        if not lo < hi:
            raise UsageError(f"empty window interval {part!r}")
        out.append([lo, hi])
    return out


def parse_r_list(s: str | None):
    if s is None:
        return None
    try:
        rs = [float(x) for x in s.split(",")]
    except ValueError:
        raise UsageError(f"bad r list {s!r}") from None
    if any(r <= 0 for r in rs):
        raise UsageError("r values must be positive")
    return rs


# ---------------------------------------------------------------------------
# commands


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _expect(doc, *kinds):
    from .errors import SchemaError
    if doc["kind"] not in kinds:
        raise SchemaError(f"expected a {' or '.join(kinds)} document, got {doc['kind']}")


def _manifold(doc, args):
    from . import documents as D
    from .tropman import TropicalManifold
    _expect(doc, "tropical_manifold", "fan_with_pl")
    if doc["kind"] == "fan_with_pl":
        # a fan with a homogeneous polarization is a manifold with conical cells
        fan, phi = D.parse_fan(doc["payload"])
        if phi is None:
            raise UsageError("the fan document carries no ray values")
        return TropicalManifold(fan, phi)
    return D.parse_manifold(doc["payload"], parse_heights(getattr(args, "heights", None)))


def cmd_dualcone(doc, args):
    from . import documents as D
    _expect(doc, "cone")
    c = D.parse_cone(doc["payload"])
    d = c.dual()
    return d.negate() if args.negate else d


def cmd_dlt(doc, args):
    from .tropman import dlt
    return dlt(_manifold(doc, args), negate=args.negate)


def cmd_bary(doc, args):
    from . import documents as D
    from .tropman import barycentric
    if doc["kind"] == "polyhedral_complex":
        P = D.parse_complex(doc["payload"])
        return barycentric(P.support_hull, P)
    T = _manifold(doc, args)
    return barycentric(T.B, T.P)


def _strata(d: dict, picture: str):
    from . import documents as D
    out = []
    for cell, st in sorted(d.items(), key=lambda kv: kv[0]):
        item = {"cell": D.polyhedron_payload(cell, hrep=False), "dim": st.dim}
        if picture == "fan":
            item["fan"] = D.fan_payload(st.toric)
        out.append(item)
    return out


def cmd_degenerate(doc, args):
    from . import documents as D
    from .degeneration import asymptotic_fan, central_fiber, duality_check, total_space
    T = _manifold(doc, args)
    data = total_space(T)
    cf = central_fiber(T)
    rep = duality_check(T)
    return {
        "command": "degenerate",
        "delta": D.polyhedron_payload(data.delta),
        "asymptotic_fan": D.fan_payload(asymptotic_fan(data)),
        "total_space_fan": D.fan_payload(data.sigma_fan),
        "cone_picture": _strata(cf.cone_picture, "cone"),
        "fan_picture": _strata(cf.fan_picture, "fan"),
        "inclusions": [[D.encode_vec(t.barycenter), D.encode_vec(s.barycenter)]
                       for t, s in sorted(cf.inclusions)],
        "duality": {"poset_ok": rep.poset_ok, "toric_ok": rep.toric_ok,
                    "dimension_ok": rep.dimension_ok, "ok": rep.ok,
                    "mismatches": [str(m) for m in rep.mismatches]},
    }


def cmd_charts(doc, args):
    from . import documents as D
    from .degeneration import chart_rings
    T = _manifold(doc, args)
    out = []
    for ring in chart_rings(T):
        out.append({"vertex": D.encode_vec(ring.vertex),
                    "hilbert_basis": [list(h) for h in ring.hilbert_basis],
                    "t_vector": list(ring.t_vector), "t_element": list(ring.t_element),
                    "free": ring.is_free})
    return {"command": "charts", "charts": out}


def cmd_potential(doc, args):
    from .potential import reconstructed_potential
    return reconstructed_potential(_manifold(doc, args))


def cmd_fano(doc, args):
    from . import documents as D
    from .potential import fano_potential
    _expect(doc, "polyhedron")
    W = fano_potential(D.parse_polyhedron(doc["payload"]))
    coeffs = parse_coeffs(args.coeffs)
    return W.with_coefficients(coeffs) if coeffs else W


def cmd_mirror_pair(doc, args):
    from . import documents as D
    from .potential import cross_check_dual_polyhedron, mirror_pair, star_subdivision
    _expect(doc, "mirror_request")
    req = D.parse_mirror_request(doc["payload"])
    Sigma, phi = req.Sigma if req.Sigma else (None, None)
    Sigma_c, phi_c = req.Sigma_check if req.Sigma_check else (None, None)
    for r in req.star_rays:
        Sigma = star_subdivision(Sigma or req.cone, r)
        phi = None
    for r in req.star_rays_check:
        Sigma_c = star_subdivision(Sigma_c or req.cone.dual(), r)
        phi_c = None
    coeffs = dict(req.coefficients)
    coeffs.update(parse_coeffs(args.coeffs))
    mp = mirror_pair(req.cone, Sigma, Sigma_c, coeffs, phi, phi_c)
    return {
        "command": "mirror-pair",
        "sigma": D.cone_payload(mp.sigma),
        "sigma_check": D.cone_payload(mp.sigma_check),
        "Sigma": D.fan_payload(mp.Sigma, mp.phi),
        "Sigma_check": D.fan_payload(mp.Sigma_check, mp.phi_check),
        "P": D.polyhedron_payload(mp.P),
        "P_check": D.polyhedron_payload(mp.P_check),
        "W": D.potential_payload(mp.W),
        "W_check": D.potential_payload(mp.W_check),
        "cross_check": cross_check_dual_polyhedron(mp),
    }


def cmd_kodaira(doc, args):
    from . import documents as D
    from .potential import gorenstein_report
    _expect(doc, "polyhedron")
    rep = gorenstein_report(D.parse_polyhedron(doc["payload"]))
    return {"command": "kodaira",
            "interior_points": [D.encode_vec(p) for p in rep.interior_points],
            "delta_prime_dim": rep.delta_prime_dim, "kappa": rep.kappa,
            "divisor_index_set": [D.encode_vec(p) for p in rep.divisor_index_set],
            "notes": rep.notes}


def _semiflat_request(doc, args):
    from . import documents as D
    _expect(doc, "semiflat_request")
    req = D.parse_semiflat(doc["payload"])
    w = parse_window(getattr(args, "window", None))
    if w is not None:
        req.window = w
    rl = parse_r_list(getattr(args, "r_list", None))
    if rl is not None:
        req.r_list = rl
    if req.window and len(req.window) != len(req.a[0]):
        raise UsageError(f"window needs {len(req.a[0])} intervals")
    return req


def run_semiflat(req):
    """Evaluate a semi-flat request; returns a report dict (rows for sweeps)."""
    import numpy as np

    from . import semiflat as S
    from .errors import SchemaError
    K = S.Quadratic(len(req.a[0])) if req.potential == "quadratic" else S.ToricPotential(req.a)
    out = {"command": "semiflat", "task": req.task}

    def need(name):
        v = getattr(req, name)
        if v is None or (name == "window" and not v):
            raise SchemaError(f"task {req.task} needs '{name}'")
        return v

    if req.task == "moment":
        out["moment"] = S.moment_map(req.a, need("w")).tolist()
    elif req.task == "gradient":
        rep = S.gradient_identity_check(K, need("y"), req.h)
        out.update(applicable=rep.applicable, note=rep.note,
                   max_deviation=rep.max_deviation if rep.applicable else None,
                   numeric=None if rep.numeric is None else rep.numeric.tolist(),
                   moment=None if rep.moment is None else rep.moment.tolist())
    elif req.task == "legendre":
        yc, val = S.legendre_dual(K, need("y"))
        out.update(dual=yc.tolist(), dual_value=val)
    elif req.task == "rescale":
        R = S.rescale_family(K, req.r, req.mode)
        y = np.asarray(need("y"), dtype=float)
        out.update(value=R.value(y), gradient=R.gradient(y).tolist(), r=req.r, mode=req.mode)
    elif req.task == "pl_limit":
        rep = S.pl_limit_check(req.a, req.r_list, need("window"), req.num)
        out.update(r_list=rep.r_list, errors=rep.errors, bounds=rep.bounds,
                   within_bound=rep.within_bound, decreasing=rep.decreasing,
                   fitted_C=rep.fitted_C, samples=rep.samples, per_r_ok=rep.per_r_ok)
    elif req.task == "sweep":
        out.update(dim=len(req.a[0]), rows=S.sweep(K, S.sample_window(need("window"), req.num)))
    return out


def cmd_semiflat(doc, args):
    return run_semiflat(_semiflat_request(doc, args))


def _renderable(doc, args):
    """The object behind a document, as something render_svg accepts."""
    from . import documents as D
    from .complexes import Fan, PolyhedralComplex
    from .errors import SchemaError
    kind = doc["kind"]
    p = doc["payload"]
    if kind == "tropical_manifold":
        T = D.parse_manifold(p, check=False)
        return T.P, T.phi
    if kind == "polyhedral_complex":
        return D.parse_complex(p), None
    if kind == "polyhedron":
        return PolyhedralComplex([D.parse_polyhedron(p)]), None
    if kind == "cone":
        return Fan.from_cones([D.parse_cone(p)]), None
    if kind == "fan_with_pl":
        f = D.parse_fan(p)
        return f.fan, f.phi
    raise SchemaError(f"cannot draw a {kind} document")


def _viewport(s):
    if s is None:
        return None
    vals = [_rational(x) for x in s.split(",")]
    if len(vals) not in (2, 4):
        raise UsageError("viewport needs xmin,xmax or xmin,xmax,ymin,ymax")
    if len(vals) == 2:
        vals += [Fraction(-1), Fraction(1)]
    if not (vals[0] < vals[1] and vals[2] < vals[3]):
        raise UsageError("empty viewport")
    return tuple(vals)


def cmd_render(doc, args):
    from .render import RenderSpec, render_svg, sweep_csv
    fmt = args.format or ("csv" if doc["kind"] == "semiflat_request" else "svg")
    if fmt == "csv":
        req = _semiflat_request(doc, args)
        req.task = "sweep"
        rep = run_semiflat(req)
        return sweep_csv(rep["rows"], rep["dim"])
    if fmt != "svg":
        raise UsageError("render writes svg or csv")
    P, phi = _renderable(doc, args)
    return render_svg(P, RenderSpec("svg", _viewport(args.viewport), args.labels, args.phi_graph),
                      phi)


HANDLERS = {
    "dualcone": cmd_dualcone, "dlt": cmd_dlt, "bary": cmd_bary, "degenerate": cmd_degenerate,
    "charts": cmd_charts, "potential": cmd_potential, "fano": cmd_fano,
    "mirror-pair": cmd_mirror_pair, "kodaira": cmd_kodaira, "semiflat": cmd_semiflat,
    "render": cmd_render,
}


def _serialize(result, args) -> str:
    from . import documents as D
    from .complexes import PolyhedralComplex
    from .render import render_svg, sweep_csv
    from .tropman import TropicalManifold
    if isinstance(result, str):
        return result
    fmt = args.format or "json"
    if fmt == "svg":
        if isinstance(result, TropicalManifold):
            return render_svg(result.P, phi=result.phi)
        if isinstance(result, PolyhedralComplex):
            return render_svg(result)
        raise UsageError(f"{args.command} output cannot be drawn; use render")
    if fmt == "csv":
        if isinstance(result, dict) and "rows" in result:
            return sweep_csv(result["rows"], result["dim"])
        raise UsageError("csv output is only available for semiflat sweeps")
    doc = D.to_document(result)
    D.validate_document(doc)
    return D.dumps(doc)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        _threads_from_env()
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("tropdlt: a command is required (" + ", ".join(COMMANDS) + ")")
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE

    from . import documents as D
    from .errors import InvalidManifold, TropError
    try:
        doc = D.loads(_read(args.input))
        text = _serialize(HANDLERS[args.command](doc, args), args)
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except InvalidManifold as exc:
        print(f"invalid: {exc}", file=stderr)
        return EXIT_INVALID
    except TropError as exc:
        print(f"{type(exc).__name__}: {exc}", file=stderr)
        for w in getattr(exc, "witnesses", []) or []:
            print(f"  witness: {w}", file=stderr)
        return EXIT_INVALID
    except ValueError as exc:  # inconsistent input caught by a generic check
        print(f"invalid input: {exc}", file=stderr)
        return EXIT_INVALID
    except Exception:  # noqa: BLE001 - report anything unexpected as internal
        traceback.print_exc(file=stderr)
        return EXIT_INTERNAL
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run())
