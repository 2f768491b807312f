"""Command-line driver.

Subcommands cover the whole pipeline: catalog queries, pair certification,
grid construction with file output, superconformality and dual-pair
verification, inversion and duality checks, quadric classification,
space-form projection tests, and the bundled self-test suite.

Reports are single-line canonical JSON on stdout.  Exit codes: 0 ok,
2 usage/precondition error, 3 a check failed or the run degenerated,
4 file I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import catalog
from .errors import (DomainError, ExpressionError, PreconditionError,
                     SuperconfError, UnknownEntryError)
from .export import (canonical_json, drop_projector, mesh_dict, sample_grid,
                     stereo_projector, summarize, write_csv, write_json,
                     write_obj)
from .minimal import Domain, HolomorphicCurve, MinimalPair, certify
from .moebius import (Inversion, Stereographic, duality, pair_transform_check,
                      quadric_classification, superminimal_test)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

SIGN_WORDS = {"+": "plus", "-": "minus"}
DEFAULT_INLINE_DOMAIN = Domain(-1.0, 1.0, -1.0, 1.0)


def _clean(x):
    """JSON-safe copy: numpy scalars/arrays unwrapped, non-finite -> None."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_clean(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if np.isfinite(x) else None
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, complex):
        return {"re": _clean(x.real), "im": _clean(x.imag)}
    return x


def _emit(obj) -> None:
    sys.stdout.write(canonical_json(_clean(obj)))


def _parse_floats(text, n, what):
    parts = text.split(",")
    if len(parts) != n:
        raise PreconditionError(f"{what} wants {n} comma-separated numbers")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise PreconditionError(f"{what} is not numeric: {text!r}")


def _parse_domain(text) -> Domain:
    a, b, c, d = _parse_floats(text, 4, "--domain")
    if not (a < b and c < d):
        raise PreconditionError("--domain rectangle is degenerate")
    return Domain(a, b, c, d)


def _parse_grid(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise PreconditionError("--grid wants nu,nv")
    try:
        nu, nv = int(parts[0]), int(parts[1])
    except ValueError:
        raise PreconditionError(f"--grid is not integral: {text!r}")
    if nu < 2 or nv < 2:
        raise PreconditionError("--grid dimensions must be at least 2")
    return nu, nv


def _parse_points(text):
    out = []
    for chunk in text.split(";"):
        re_, im_ = _parse_floats(chunk, 2, "--points entry")
        out.append(complex(re_, im_))
    if not out:
        raise PreconditionError("--points is empty")
    return out


def _parse_signs(text):
    try:
        return {"plus": ("+",), "minus": ("-",), "both": ("+", "-")}[text]
    except KeyError:
        raise PreconditionError(f"--sign must be plus|minus|both, got {text!r}")


def _parse_projector(text):
    if text == "stereo":
        return stereo_projector(), "stereo from pole (0,0,0,1)"
    if text.startswith("stereo:"):
        pole = _parse_floats(text[len("stereo:"):], 4, "--project stereo pole")
        return stereo_projector(pole), f"stereo from pole ({text[7:]})"
    if text.startswith("drop:"):
        try:
            k = int(text[len("drop:"):])
        except ValueError:
            raise PreconditionError(f"--project drop index not integral: {text!r}")
        return drop_projector(k), f"drop coordinate {k}"
    raise PreconditionError(
        f"--project must be drop:k or stereo[:p0,p1,p2,p3], got {text!r}")


def _is_expression(text) -> bool:
    return text.lstrip().startswith("(")


def _resolve(args):
    """(pair, domain, stem) from --curve plus optional --domain."""
    override = _parse_domain(args.domain) if getattr(args, "domain", None) else None
    if _is_expression(args.curve):
        dom = override or DEFAULT_INLINE_DOMAIN
        curve = HolomorphicCurve("inline", args.curve, dom)
        return MinimalPair(curve), dom, "inline"
    entry = catalog.get(args.curve)
    pair = entry.pair or entry.aux.get("pair")
    if pair is None:
        raise PreconditionError(
            f"entry {entry.name} has no minimal pair; use `catalog show` "
            "or the project command for surface entries")
    dom = override or entry.domain or getattr(pair, "domain", None)
    if dom is None:
        raise PreconditionError(f"entry {entry.name} has no domain; pass --domain")
    return pair, dom, entry.name


def cmd_catalog(args) -> int:
    if args.action == "list":
        rows = [{"name": n, "kind": catalog.get(n).kind,
                 "description": catalog.get(n).description}
                for n in catalog.names()]
        _emit({"entries": rows})
        return EXIT_OK
    if not args.name:
        raise PreconditionError("catalog show wants an entry name")
    entry = catalog.get(args.name)
    info = {"name": entry.name, "kind": entry.kind,
            "description": entry.description,
            "ambient": {"kind": entry.ambient.kind,
                        "radius": entry.ambient.radius}}
    if entry.domain is not None:
        info["domain"] = {"u": [entry.domain.u_min, entry.domain.u_max],
                          "v": [entry.domain.v_min, entry.domain.v_max],
                          "excluded": [[{"re": complex(c).real,
                                         "im": complex(c).imag}, r]
                                       for (c, r) in entry.domain.excluded]}
    if entry.pair is not None:
        info["expression"] = entry.expression_text()
    info["expected"] = sorted(entry.expected)
    info["aux"] = sorted(entry.aux)
    _emit(info)
    return EXIT_OK


def cmd_certify(args) -> int:
    pair, dom, stem = _resolve(args)
    nu, nv = _parse_grid(args.grid)
    grid = dom.grid(nu, nv, margin=args.margin)
    rep = certify(pair, grid=grid)
    ok = (rep["isotropy_max"] < args.tol and rep["minimality_max"] < args.tol
          and rep["regularity_min"] > args.regularity_floor)
    _emit({"curve": stem, "ok": ok, **rep})
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_construct(args) -> int:
    pair, dom, stem = _resolve(args)
    nu, nv = _parse_grid(args.grid)
    signs = _parse_signs(args.sign)
    projector = _parse_projector(args.project) if args.project else None
    os.makedirs(args.out, exist_ok=True)

    summary = {"curve": stem, "grid": [nu, nv],
               "domain": [dom.u_min, dom.u_max, dom.v_min, dom.v_max],
               "signs": {}}
    files = []
    ok = True
    for sign in signs:
        word = SIGN_WORDS[sign]
        samples = sample_grid(pair, dom, nu, nv, sign)
        agg = summarize(samples)
        summary["signs"][word] = agg
        ok = ok and agg["n_clear"] > 0
        base = os.path.join(args.out, f"{stem}-{word}")
        write_csv(samples, base + ".csv")
        write_json(mesh_dict(samples, nu, nv), base + ".mesh.json")
        files.extend([base + ".csv", base + ".mesh.json"])
        if projector is not None:
            write_obj(samples, nu, nv, base + ".obj", projector[0],
                      projector[1])
            files.append(base + ".obj")
    spath = os.path.join(args.out, f"{stem}-summary.json")
    write_json(_clean(summary), spath)
    files.append(spath)
    _emit({**summary, "ok": ok, "files": files})
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_verify(args) -> int:
    from .construct import dual_pair_report

    pair, dom, stem = _resolve(args)
    nu, nv = _parse_grid(args.grid)
    signs = _parse_signs(args.sign)

    report = {"curve": stem, "grid": [nu, nv], "signs": {}}
    ok = True
    for sign in signs:
        samples = sample_grid(pair, dom, nu, nv, sign)
        agg = summarize(samples)
        report["signs"][SIGN_WORDS[sign]] = agg
        sign_ok = (agg["n_clear"] > 0
                   and agg["max_res_orth"] < args.tol
                   and agg["max_res_len"] < args.tol
                   and agg["max_wintgen_rel"] < args.tol)
        ok = ok and sign_ok

    grid = [z for z in dom.grid(nu, nv) if pair.domain.contains(z)]
    stride = max(1, len(grid) // max(1, args.dual_samples))
    worst = {"center": 0.0, "conformal": 0.0, "tangency": 0.0, "metric": 0.0}
    n_dual = 0
    for z in grid[::stride]:
        try:
            rep = dual_pair_report(pair, z)
        except (PreconditionError, SuperconfError):
            continue
        n_dual += 1
        worst["center"] = max(worst["center"], *rep.center_residual.values())
        conf = [c for c in rep.conformal_residual.values() if np.isfinite(c)]
        if conf:
            worst["conformal"] = max(worst["conformal"], *conf)
        worst["tangency"] = max(worst["tangency"],
                                *rep.tangency_residual.values())
        worst["metric"] = max(worst["metric"], rep.metric_relation_residual)
    report["dual_pair"] = {"n_points": n_dual, **worst}
    ok = ok and n_dual > 0 and all(v < args.dual_tol for v in worst.values())
    _emit({**report, "ok": ok})
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_invert(args) -> int:
    pair, dom, stem = _resolve(args)
    nu, nv = _parse_grid(args.grid)
    center = _parse_floats(args.center, 4, "--center")
    inv = Inversion(center=center, radius=args.radius)
    rep = pair_transform_check(pair, inv, dom.grid(nu, nv))
    ok = rep.sup < args.tol
    _emit({"curve": stem, "center": center, "radius": args.radius,
           "sup_g": rep.sup_g, "sup_h": rep.sup_h, "sup": rep.sup,
           "h_convention": rep.h_convention, "n_points": rep.n_points,
           "n_skipped": rep.n_skipped, "ok": ok})
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_dual(args) -> int:
    if _is_expression(args.curve):
        dom = _parse_domain(args.domain) if args.domain else Domain(
            -3.0, 3.0, -3.0, 3.0)
        curve = HolomorphicCurve("inline", args.curve, dom)
        stem = "inline"
    else:
        entry = catalog.get(args.curve)
        curve = entry.aux.get("graph_curve")
        if curve is None:
            raise PreconditionError(
                f"entry {entry.name} has no two-component graph curve")
        stem = entry.name
    points = _parse_points(args.points)
    worst = {"antiholo": 0.0, "involution": 0.0, "conformality": 0.0}
    first_value = None
    for z in points:
        rep = duality(curve, z)
        if first_value is None:
            first_value = rep.value
        worst["antiholo"] = max(worst["antiholo"], rep.antiholo)
        worst["involution"] = max(worst["involution"], rep.involution)
        worst["conformality"] = max(worst["conformality"], rep.conformality)
    ok = all(v < args.tol for v in worst.values())
    _emit({"curve": stem, "n_points": len(points), **worst,
           "value_at_first": first_value, "ok": ok})
    return EXIT_OK if ok else EXIT_NUMERIC


_QUADRIC_LABELS = {"null": "Q_0", "non-constant": "not on any quadric",
                   "constant-complex": "constant complex invariant"}


def cmd_quadric(args) -> int:
    pair, dom, stem = _resolve(args)
    nu, nv = _parse_grid(args.grid)
    points = dom.grid(nu, nv, margin=args.margin)
    rep = quadric_classification(pair, points)
    label = (f"Q_k with k = {rep.k:.12g}" if rep.kind == "constant-real"
             else _QUADRIC_LABELS[rep.kind])
    _emit({"curve": stem, "kind": rep.kind, "label": label,
           "mean": rep.mean, "max_deviation": rep.max_deviation,
           "k": rep.k, "radius": rep.radius, "sign": rep.sign})
    return EXIT_OK


def cmd_project(args) -> int:
    entry = catalog.get(args.entry)
    if entry.surface is None or entry.ambient.kind == "r4":
        raise PreconditionError(
            f"entry {entry.name} is not a space-form immersion")
    nu, nv = _parse_grid(args.grid)
    us, vs = entry.domain.linspace(nu, nv, margin=args.margin)
    points = [(u, v) for u in us for v in vs]
    rep = superminimal_test(entry.surface, entry.ambient, points,
                            h_tol=args.h_tol, circ_tol=args.circ_tol)

    space = "sphere" if entry.ambient.kind == "sphere" else "hyperbolic"
    st = Stereographic(entry.ambient.radius, space)
    round_trip = 0.0
    for (u, v) in points:
        P = entry.sample(u, v).values()
        x = st.to_R4(P)
        round_trip = max(round_trip,
                         float(np.linalg.norm(st.from_R4(x) - P)))
    ok = rep.verdict.startswith("superminimal")
    _emit({"entry": entry.name, "verdict": rep.verdict,
           "max_mean_curvature": rep.max_mean_curvature,
           "max_circularity": rep.max_circularity,
           "max_mu": rep.max_mu, "min_mu": rep.min_mu,
           "degenerate": rep.degenerate, "n_points": rep.n_points,
           "stereo_round_trip": round_trip, "ok": ok})
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_selftest(args) -> int:
    from . import acceptance

    results = acceptance.run_all()
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = f"{status} criterion {r.key}: {r.title}"
        if r.detail:
            line += f" [{r.detail}]"
        print(line)
    n_fail = sum(not r.passed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} criteria passed")
    return EXIT_OK if n_fail == 0 else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="superconf",
        description="Construct and verify superconformal surfaces in R4")
    sub = p.add_subparsers(dest="command", required=True)

    def curve_opts(sp, grid="9,9"):
        sp.add_argument("--curve", required=True,
                        help="catalog name or inline expression like "
                             "'(cos(z), sin(z), -i*z, 0)'")
        sp.add_argument("--domain", help="u_min,u_max,v_min,v_max")
        sp.add_argument("--grid", default=grid, help="nu,nv")

    sp = sub.add_parser("catalog", help="list or show bundled entries")
    sp.add_argument("action", choices=("list", "show"))
    sp.add_argument("name", nargs="?")
    sp.set_defaults(func=cmd_catalog)

    sp = sub.add_parser("certify",
                        help="certify a conjugate minimal pair on a grid")
    curve_opts(sp)
    sp.add_argument("--margin", type=float, default=0.05)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--regularity-floor", type=float, default=1e-10)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("construct",
                        help="build the surfaces over a grid and write files")
    curve_opts(sp, grid="32,32")
    sp.add_argument("--sign", default="both")
    sp.add_argument("--out", default=".", help="output directory")
    sp.add_argument("--project",
                    help="also write OBJ: drop:k or stereo[:p0,p1,p2,p3]")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify",
                        help="superconformality and shared-geometry residuals")
    curve_opts(sp, grid="16,16")
    sp.add_argument("--sign", default="both")
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--dual-tol", type=float, default=1e-7)
    sp.add_argument("--dual-samples", type=int, default=16)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("invert",
                        help="check the sphere-inversion transform of a pair")
    curve_opts(sp, grid="20,20")
    sp.add_argument("--center", required=True, help="c0,c1,c2,c3")
    sp.add_argument("--radius", type=float, default=1.0)
    sp.add_argument("--tol", type=float, default=1e-5)
    sp.set_defaults(func=cmd_invert)

    sp = sub.add_parser("dual", help="duality-map checks for a graph curve")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--domain", help="u_min,u_max,v_min,v_max")
    sp.add_argument("--points", default="0.8,0.4;-1.1,0.9;1.6,-1.2",
                    help="re,im;re,im;...")
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.set_defaults(func=cmd_dual)

    sp = sub.add_parser("quadric",
                        help="classify the quadric the curve lies on")
    curve_opts(sp)
    sp.add_argument("--margin", type=float, default=0.05)
    sp.set_defaults(func=cmd_quadric)

    sp = sub.add_parser("project",
                        help="stereographic bridge and space-form minimality")
    sp.add_argument("--entry", required=True, help="space-form catalog entry")
    sp.add_argument("--grid", default="9,9", help="nu,nv")
    sp.add_argument("--margin", type=float, default=0.08)
    sp.add_argument("--h-tol", type=float, default=1e-9)
    sp.add_argument("--circ-tol", type=float, default=1e-8)
    sp.set_defaults(func=cmd_project)

    sp = sub.add_parser("selftest", help="run the full acceptance suite")
    sp.set_defaults(func=cmd_selftest)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ExpressionError, DomainError, UnknownEntryError,
            PreconditionError) as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})
        return EXIT_USAGE
    except OSError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})
        return EXIT_IO
    except SuperconfError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
