"""Built-in acceptance suite: every check the package certifies itself with.

Each criterion function measures one published property of the construction
at its stated tolerance and returns a result object; run_all executes the
whole list.  The suite is honest: two known discrepancies between the
recorded closed-form displays and the actual geometry are asserted at face
value and fail, each with a companion measurement pinning down the exact
mismatch.  See the test suite for the same checks run under pytest.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import catalog
from .construct import (build_phi_pair, dual_pair_report,
                        reflection_pair_check, translation_check)
from .errors import ExpressionError, FrameDegenerateError, SingularSampleError
from .expr import parse_curve, print_node
from .export import canonical_json, csv_text, mesh_dict, sample_grid, summarize
from .geometry import fundamental_data, superconformality_test
from .jets import fd_crosscheck
from .minimal import (Domain, HolomorphicCurve, MinimalPair,
                      associated_family, certify)
from .moebius import (Inversion, Stereographic, degenerate_collapse_check,
                      duality, invert, normal_transform_check,
                      pair_transform_check, quadric_classification,
                      recover_complex_structure, superminimal_test,
                      transformed_curve)

CAT_GRID_U = (0.2, 2.0 * np.pi - 0.2, 64)
CAT_GRID_V = (-1.5, 1.5, 64)


@dataclass(frozen=True)
class CriterionResult:
    key: str
    title: str
    passed: bool
    detail: str


def _cat_grid():
    us = np.linspace(*CAT_GRID_U)
    vs = np.linspace(*CAT_GRID_V)
    return [complex(u, v) for u in us for v in vs]


def criterion_1() -> CriterionResult:
    """Constructed catenoid/helicoid surfaces equal the closed form."""
    entry = catalog.get("catenoid-helicoid")
    pair = entry.pair
    grid = _cat_grid()

    z0 = grid[0]
    built0 = {ps.sign: ps.phi.values() for ps in build_phi_pair(pair, z0)}
    exp0 = catalog.expected_eval(entry, "phi", "+", z0.real, z0.imag)
    swapped = (np.linalg.norm(built0["+"] - exp0)
               > np.linalg.norm(built0["-"] - exp0))
    label = {"+": "-", "-": "+"} if swapped else {"+": "+", "-": "-"}

    sup = 0.0
    for z in grid:
        for ps in build_phi_pair(pair, z):
            want = catalog.expected_eval(entry, "phi", label[ps.sign],
                                         z.real, z.imag)
            sup = max(sup, float(np.linalg.norm(ps.phi.values() - want)))
    # the global label swap is part of the frozen convention
    passed = sup < 1e-9 and swapped
    return CriterionResult(
        "1", "catenoid/helicoid closed form on a 64x64 grid", passed,
        f"sup {sup:.3e} (tol 1e-9), labels swapped globally: "
        f"{'yes' if swapped else 'no'} (recorded: yes)")


def criterion_2() -> CriterionResult:
    """Both constructed surfaces are superconformal; product torus is not."""
    worst = 0.0
    counts = {}
    for name in ("catenoid-helicoid", "whitney", "q0-trig-perturbed"):
        pair = catalog.get(name).pair
        n_clear = 0
        for z in pair.domain.grid(16, 16, margin=0.02):
            try:
                built = build_phi_pair(pair, z)
            except (FrameDegenerateError, SingularSampleError):
                continue
            for ps in built:
                if ps.flags.bitmask:
                    continue
                st = superconformality_test(fundamental_data(ps.phi))
                worst = max(worst, abs(st["res_orth"]), abs(st["res_len"]),
                            st["wintgen_defect_rel"])
                n_clear += 1
        counts[name] = n_clear
        if n_clear == 0:
            return CriterionResult(
                "2", "superconformality of the constructed surfaces", False,
                f"no unflagged samples for {name}")

    torus = catalog.get("torus")
    us, vs = torus.domain.linspace(12, 12, margin=0.02)
    min_defect = min(
        superconformality_test(fundamental_data(torus.sample(u, v)))
        ["wintgen_defect"]
        for u in us for v in vs)

    passed = worst < 1e-8 and min_defect > 0.1
    return CriterionResult(
        "2", "superconformality of the constructed surfaces", passed,
        f"worst residual {worst:.3e} (tol 1e-8) over "
        f"{sum(counts.values())} samples; torus control min defect "
        f"{min_defect:.3f} (> 0.1)")


def criterion_3() -> CriterionResult:
    """Shared central sphere, conformal factor, metric relation, and rigid
    translation of the conjugate member."""
    pair = catalog.get("catenoid-helicoid").pair
    grid = _cat_grid()
    worst = {"center": 0.0, "conformal": 0.0, "metric": 0.0}
    for z in grid:
        rep = dual_pair_report(pair, z)
        worst["center"] = max(worst["center"], *rep.center_residual.values())
        for c in rep.conformal_residual.values():
            # a nan entry (conformal factor undefined) fails the criterion
            worst["conformal"] = max(
                worst["conformal"], c if np.isfinite(c) else float("inf"))
        worst["metric"] = max(worst["metric"], rep.metric_relation_residual)
    offset = np.array([0.3, -0.2, 0.5, 0.1])
    shift = translation_check(pair, offset, grid)
    passed = (max(worst.values()) < 1e-7 and shift < 1e-9)
    return CriterionResult(
        "3", "shared geometry of the two constructed surfaces", passed,
        f"center {worst['center']:.2e}, conformal {worst['conformal']:.2e}, "
        f"metric {worst['metric']:.2e} (tol 1e-7); translation defect "
        f"{shift:.2e} (tol 1e-9)")


def criterion_4() -> CriterionResult:
    """Sphere inversion of the built surfaces matches the transformed
    holomorphic curve, both routes."""
    pair = catalog.get("catenoid-helicoid").pair
    inv = Inversion(center=(0.0, 0.0, 0.0, 5.0), radius=1.0)
    rep = pair_transform_check(pair, inv, pair.domain.grid(20, 20))
    passed = rep.sup < 1e-5
    return CriterionResult(
        "4", "inversion transform of a conjugate pair, dual routes", passed,
        f"sup {rep.sup:.3e} (tol 1e-5) over {rep.n_points} samples; "
        f"matched conjugate-member convention: {rep.h_convention!r}")


def criterion_5() -> CriterionResult:
    """The transformed curve is again an isotropic conjugate pair."""
    pair = catalog.get("catenoid-helicoid").pair
    tc = transformed_curve(pair.curve, 1.0, center=(0, 0, 0, 5j))
    tpair = MinimalPair(tc)
    grid = tc.domain.grid(12, 12, margin=0.02)
    rep = certify(tpair, grid=grid)
    conj = 0.0
    for z in grid:
        s = tpair.samples_at(z)
        scale = max(np.linalg.norm(s.g_u.values()),
                    np.linalg.norm(s.g_v.values()), 1e-300)
        conj = max(conj,
                   np.linalg.norm(s.h.du() + s.g_v.values()) / scale,
                   np.linalg.norm(s.h.dv() - s.g_u.values()) / scale)
    passed = (rep["isotropy_max"] < 1e-8 and conj < 1e-8
              and rep["minimality_max"] < 1e-8)
    return CriterionResult(
        "5", "transformed curve re-certifies as a conjugate pair", passed,
        f"isotropy {rep['isotropy_max']:.2e}, conjugacy {conj:.2e}, "
        f"minimality {rep['minimality_max']:.2e} (tol 1e-8)")


def criterion_6() -> CriterionResult:
    """Duality of graph surfaces: anti-holomorphic, involutive, conformal."""
    fixtures = [
        ("(z, 1/z)", Domain(-2.0, 2.0, -2.0, 2.0, excluded=((0j, 0.4),))),
        ("(z, z^2)", Domain(-2.0, 2.0, -2.0, 2.0)),
        ("(z, exp(z))", Domain(-2.0, 2.0, -2.0, 2.0)),
    ]
    worst = {"antiholo": 0.0, "involution": 0.0, "conformality": 0.0}
    for text, dom in fixtures:
        curve = HolomorphicCurve("probe", text, dom)
        # even grid counts keep the origin (dual undefined there) off the
        # lattice
        for z in dom.grid(8, 8, margin=0.05):
            rep = duality(curve, z)
            worst["antiholo"] = max(worst["antiholo"], rep.antiholo)
            worst["involution"] = max(worst["involution"], rep.involution)
            worst["conformality"] = max(worst["conformality"],
                                        rep.conformality)
    graph = catalog.get("whitney").aux["graph_curve"]
    value = duality(graph, 1.0 + 0j).value
    value_err = float(np.max(np.abs(value - np.array([0.25, 0.0, 0.25, 0.0]))))
    passed = (worst["antiholo"] < 1e-8 and worst["involution"] < 1e-9
              and worst["conformality"] < 1e-8 and value_err < 1e-12)
    return CriterionResult(
        "6", "duality of graph surfaces", passed,
        f"anti-holo {worst['antiholo']:.2e} (1e-8), involution "
        f"{worst['involution']:.2e} (1e-9), conformality "
        f"{worst['conformality']:.2e} (1e-8); dual value at 1: err "
        f"{value_err:.1e}")


def criterion_7() -> CriterionResult:
    """On the null quadric the recovered rotation is an orthogonal complex
    structure and one surface collapses to the constant it should."""
    details = []
    passed = True
    for name in ("q0-line", "q0-trig"):
        pair = catalog.get(name).pair
        points = pair.domain.grid(6, 6, margin=0.05)
        rec = recover_complex_structure(pair, points)
        col = degenerate_collapse_check(pair, points)
        res = max(rec.square_residual, rec.orthogonality_residual,
                  rec.fit_residual, rec.constancy_residual)
        passed = passed and res < 1e-9 and col.variation < 1e-9 \
            and col.companion_residual < 1e-9
        details.append(f"{name}: structure {res:.1e}, collapse "
                       f"{col.variation:.1e}/{col.companion_residual:.1e} "
                       f"(sign {col.collapsed_sign})")
    return CriterionResult(
        "7", "complex-structure recovery and degenerate collapse", passed,
        "; ".join(details) + " (tol 1e-9)")


def criterion_8a() -> CriterionResult:
    """The surviving surface of the reciprocal-graph pair equals the
    inverted graph pointwise."""
    entry = catalog.get("whitney")
    pair = entry.pair
    sample = entry.aux["graph_sample"]
    inv = Inversion(center=np.zeros(4), radius=1.0)
    sup = 0.0
    n = 0
    for z in pair.domain.grid(12, 12, margin=0.02):
        survivors = [ps for ps in build_phi_pair(pair, z)
                     if not ps.flags.bitmask]
        if [ps.sign for ps in survivors] != ["-"]:
            return CriterionResult(
                "8a", "inverted graph equals the built surface", False,
                f"unexpected surviving signs at {z}")
        image = invert(sample(z), inv).values()
        sup = max(sup, float(np.linalg.norm(
            survivors[0].phi.values() - image)))
        n += 1
    passed = sup < 1e-8
    return CriterionResult(
        "8a", "inverted graph equals the built surface", passed,
        f"sup {sup:.3e} (tol 1e-8) over {n} points")


def criterion_8b() -> CriterionResult:
    """Inverted graph vs the recorded compact-sphere display (known red).

    The two surfaces are related by a conformal, not an ambient, isometry:
    no rigid motion matches them, so the recorded identification fails at
    any tolerance.  The detail quantifies the best rigid fit.
    """
    entry = catalog.get("whitney")
    sample = entry.aux["graph_sample"]
    inv = Inversion(center=np.zeros(4), radius=1.0)
    grid = entry.pair.domain.grid(12, 12, margin=0.02)
    X = np.array([invert(sample(z), inv).values() for z in grid])
    Y = np.array([catalog.expected_eval(entry, "display", z) for z in grid])
    sup = float(np.max(np.linalg.norm(X - Y, axis=1)))

    Xc = X - X.mean(axis=0)
    Yc = Y - Y.mean(axis=0)
    U, _, Vt = np.linalg.svd(Xc.T @ Yc)
    Q = U @ Vt
    best = Xc @ Q - Yc
    rms = float(np.sqrt(np.mean(np.sum(best ** 2, axis=1))))
    passed = sup < 1e-8
    return CriterionResult(
        "8b", "inverted graph vs compact-sphere display", passed,
        f"direct sup {sup:.3e} (tol 1e-8); best rigid alignment still "
        f"leaves rms {rms:.3e}: the surfaces are conformally, not "
        "isometrically, equivalent")


def criterion_9a() -> CriterionResult:
    """The degree-2 sphere is superminimal in the round 4-sphere."""
    entry = catalog.get("veronese")
    us, vs = entry.domain.linspace(10, 10, margin=0.05)
    rep = superminimal_test(entry.surface, entry.ambient,
                            [(u, v) for u in us for v in vs])
    passed = (rep.verdict == "superminimal"
              and rep.max_mean_curvature < 1e-9
              and rep.max_circularity < 1e-8)
    return CriterionResult(
        "9a", "degree-2 sphere superminimality", passed,
        f"|H| {rep.max_mean_curvature:.2e} (1e-9), circularity "
        f"{rep.max_circularity:.2e} (1e-8), verdict {rep.verdict}")


def criterion_9b() -> CriterionResult:
    """Pair metric vs the recorded display (known red: factor 4/3)."""
    rep = catalog.certify_veronese(n_theta=10, n_phi=10)
    passed = rep["metric_vs_expected"] < 1e-9
    return CriterionResult(
        "9b", "degree-2 pair metric vs recorded display", passed,
        f"relative deviation {rep['metric_vs_expected']:.3e} (tol 1e-9); "
        f"measured metric = 4/3 x display exactly (companion check)")


def criterion_9b_companion() -> CriterionResult:
    """The 9b mismatch is exactly the squared prefactor 4/3."""
    rep = catalog.certify_veronese(n_theta=10, n_phi=10)
    passed = rep["metric_vs_expected_scaled"] < 1e-9
    return CriterionResult(
        "9b-companion", "metric equals 4/3 x recorded display", passed,
        f"relative deviation after restoring the factor: "
        f"{rep['metric_vs_expected_scaled']:.3e} (tol 1e-9)")


def criterion_9c() -> CriterionResult:
    """The degree-2 pair's curve invariant is a real constant of size 4."""
    entry = catalog.get("veronese")
    pair = entry.aux["pair"]
    points = entry.domain.grid(8, 8, margin=0.05)
    rep = quadric_classification(pair, points)
    passed = (rep.kind == "constant-real"
              and rep.max_deviation < 1e-8 * (1.0 + abs(rep.mean))
              and abs(abs(rep.k) - 4.0) < 1e-8)
    return CriterionResult(
        "9c", "degree-2 pair lies on a real quadric of size 4", passed,
        f"kind {rep.kind}, |k| = {abs(rep.k):.12f} (tol 1e-8), measured "
        f"sign {rep.sign:+d} (recorded, not asserted)")


def criterion_10() -> CriterionResult:
    """Inversion transport of unit normals and shape operators, both
    signatures, and stereographic round trips."""
    pair = catalog.get("catenoid-helicoid").pair
    inv = Inversion(center=(0.0, 0.0, 0.0, 5.0), radius=1.0)
    worst_e = 0.0
    for z in (1.0 + 1.0j, 2.0 - 0.5j, 4.0 + 0.8j):
        smp = build_phi_pair(pair, z)[0].phi
        fd = fundamental_data(smp)
        for xi in (fd.n1, fd.n2):
            worst_e = max(worst_e, normal_transform_check(smp, xi, inv)["max"])

    entry = catalog.get("h4-flat-torus")
    sig = np.array([1.0, 1.0, 1.0, 1.0, -1.0])
    worst_l = 0.0
    for center in (np.zeros(5), np.array([0.0, 0.0, 0.0, 0.0, -1.0])):
        linv = Inversion(center=center, radius=1.0, signature="lorentzian")
        for (u, v) in ((0.7, 1.3), (2.1, 0.4)):
            smp = entry.sample(u, v)
            Xu, Xv = smp.du(), smp.dv()
            E = np.sum(sig * Xu * Xu)
            F = np.sum(sig * Xu * Xv)
            G = np.sum(sig * Xv * Xv)
            seed = np.eye(5)[0]
            a, b = np.linalg.solve(
                [[E, F], [F, G]],
                [np.sum(sig * seed * Xu), np.sum(sig * seed * Xv)])
            n = seed - a * Xu - b * Xv
            n = n / np.sqrt(np.sum(sig * n * n))
            worst_l = max(worst_l, normal_transform_check(smp, n, linv)["max"])

    rng = np.random.default_rng(17)
    round_trip = 0.0
    sphere = Stereographic(1.0, "sphere")
    hyper = Stereographic(1.0, "hyperbolic")
    for _ in range(30):
        x = rng.normal(size=4) * 2.5
        round_trip = max(round_trip, float(np.linalg.norm(
            sphere.to_R4(sphere.from_R4(x)) - x)))
        d = rng.normal(size=4)
        y = d / np.linalg.norm(d) * 1.9 * rng.random()
        round_trip = max(round_trip, float(np.linalg.norm(
            hyper.to_R4(hyper.from_R4(y)) - y)))

    passed = worst_e < 1e-7 and worst_l < 1e-7 and round_trip < 1e-11
    return CriterionResult(
        "10", "normal transport under inversion and stereographic bridges",
        passed,
        f"transport residual {worst_e:.2e} euclidean / {worst_l:.2e} "
        f"lorentzian (tol 1e-7); stereo round trip {round_trip:.2e} "
        f"(tol 1e-11)")


def criterion_11() -> CriterionResult:
    """For pairs inside a hyperplane the two surfaces are mirror images."""
    details = []
    passed = True
    for name in ("catenoid-helicoid", "enneper-r3"):
        pair = catalog.get(name).pair
        res = reflection_pair_check(pair, pair.domain.grid(10, 10, margin=0.05))
        passed = passed and res < 1e-10
        details.append(f"{name} {res:.2e}")
    return CriterionResult(
        "11", "reflection symmetry of the constructed surfaces", passed,
        ", ".join(details) + " (tol 1e-10)")


def criterion_12() -> CriterionResult:
    """Every member of the associated family builds superconformal
    surfaces."""
    pair = catalog.get("catenoid-helicoid").pair
    dom = Domain(0.2, 2.0 * np.pi - 0.2, -1.5, 1.5)
    worst = 0.0
    n_clear = 0
    for k in range(8):
        fam = associated_family(pair, k * np.pi / 8.0)
        for z in dom.grid(8, 8):
            try:
                built = build_phi_pair(fam, z)
            except (FrameDegenerateError, SingularSampleError):
                continue
            for ps in built:
                if ps.flags.bitmask:
                    continue
                st = superconformality_test(fundamental_data(ps.phi))
                worst = max(worst, abs(st["res_orth"]), abs(st["res_len"]),
                            st["wintgen_defect_rel"])
                n_clear += 1
    passed = worst < 1e-8 and n_clear > 0
    return CriterionResult(
        "12", "associated family stays superconformal", passed,
        f"worst residual {worst:.3e} (tol 1e-8) over {n_clear} samples, "
        f"8 phases")


GOLDEN_EXPRESSIONS = (
    "(cos(z), sin(z), -i*z, 0)",
    "(z, 1/z)",
    "(z - z^3/3, i*(z + z^3/3), z^2, 0)",
    "(1/(4*z), i/(4*z), z/4, i*z/4)",
    "(sin(z), i*sin(z), cos(z), i*cos(z))",
    "(z, i*z, 0, 0)",
    "(exp(z), log(z + 3), sqrt(z + 2), sinh(z))",
    "(cosh(z), z^-2, 2.5*z, 0.125)",
    "(z^2^3, -z^2, (-z)^2, -(z + 1))",
    "(1e-3*z, 0)",
    "(z*(z + 1)*(z - 1), z/(z*z), 0, 0)",
    "(i, -i, 2*i, -2*i)",
    "(z - 1 - 2, z - (1 - 2), 0, 0)",
    "(z/2/3, z/(2/3), 0, 0)",
    "(5*i/(-24 - z^2), cos(2*z), 0.25*z, 1)",
    "(sqrt(z + 5), log(exp(z)), 0, 0)",
    "(z + i*z + 3, 1 + 2*i, 0, 0)",
    "(-z^-3, z^10, 0, 0)",
    "(sin(z)*cos(z), sin(z)/cos(z), 0, 0)",
    "(0.5, .25*z, 1.25e2, 0)",
)

MALFORMED_EXPRESSIONS = (
    ("(z, ", 1, 5),
    ("(z", 1, 3),
    ("z", 1, 1),
    ("(z, w)", 1, 5),
    ("(z, 1/)", 1, 7),
    ("(z, z, z)", 1, 1),
    ("(z^z, 0)", 1, 4),
    ("(z^1.5, 0)", 1, 4),
    ("(z + , 0)", 1, 6),
    ("(z, 0) extra", 1, 8),
)


def criterion_13() -> CriterionResult:
    """Finite-difference cross-check of the jets, byte determinism of grid
    output across thread counts, and the parser golden suite."""
    pair = catalog.get("catenoid-helicoid").pair
    torus = catalog.get("torus")
    veronese = catalog.get("veronese")

    def phi_plus(u, v):
        return build_phi_pair(pair, complex(u, v))[0].phi

    fd_worst = 0.0
    for surface, pts in (
            (phi_plus, ((1.0, 1.0), (2.0, -0.5), (4.5, 0.8))),
            (torus.surface, ((0.7, 1.9), (3.0, 4.0))),
            (veronese.surface, ((1.0, 1.2), (2.5, 0.8)))):
        for p in pts:
            fd_worst = max(fd_worst, fd_crosscheck(surface, p)["max"])

    seq = sample_grid(pair, pair.domain, 5, 5, "+", threads=1)
    par = sample_grid(pair, pair.domain, 5, 5, "+", threads=4)
    deterministic = (csv_text(seq) == csv_text(par)
                     and canonical_json(mesh_dict(seq, 5, 5))
                     == canonical_json(mesh_dict(par, 5, 5))
                     and canonical_json(summarize(seq))
                     == canonical_json(summarize(par)))

    parser_ok = True
    for text in GOLDEN_EXPRESSIONS:
        printed = print_node(parse_curve(text))
        parser_ok = parser_ok and parse_curve(printed) == parse_curve(text)
    for text, line, col in MALFORMED_EXPRESSIONS:
        try:
            parse_curve(text)
            parser_ok = False
        except ExpressionError as exc:
            parser_ok = parser_ok and (exc.line, exc.col) == (line, col)

    passed = fd_worst < 1e-6 and deterministic and parser_ok
    return CriterionResult(
        "13", "jet cross-check, output determinism, parser goldens", passed,
        f"fd deviation {fd_worst:.2e} (tol 1e-6); deterministic: "
        f"{deterministic}; parser goldens: "
        f"{'green' if parser_ok else 'RED'}")


CRITERIA = (
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8a, criterion_8b, criterion_9a,
    criterion_9b, criterion_9b_companion, criterion_9c, criterion_10,
    criterion_11, criterion_12, criterion_13,
)


def run_all() -> list:
    """Run every criterion; unexpected exceptions become failed results."""
    out = []
    for fn in CRITERIA:
        try:
            out.append(fn())
        except Exception as exc:     # an acceptance run must always report
            key = fn.__name__.replace("criterion_", "").replace("_", "-")
            out.append(CriterionResult(
                key, fn.__doc__.strip().split("\n")[0] if fn.__doc__ else key,
                False, f"raised {type(exc).__name__}: {exc}"))
    return out
