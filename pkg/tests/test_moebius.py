"""Inversions, duality, stereographic bridges, quadric classification."""

import numpy as np
import pytest

from superconf import catalog
from superconf.construct import build_phi, build_phi_pair, extract_minimal_pair
from superconf.errors import (DualitySingularError, InversionSingularError,
                              NotNullCurveError, PreconditionError,
                              ProjectionError, QuadricSingularError)
from superconf.geometry import fundamental_data
from superconf.minimal import Domain, HolomorphicCurve, MinimalPair, certify
from superconf.moebius import (Inversion, J_AMB, Stereographic,
                               degenerate_collapse_check, duality,
                               holomorphic_inversion, invert,
                               inversion_differential,
                               inversion_pair_of_holomorphic,
                               normal_transform_check, pair_transform_check,
                               quadric_classification,
                               recover_complex_structure, superminimal_test,
                               transformed_curve)

GENERIC = [1.0 + 1.0j, 2.0 - 0.5j, 4.0 + 0.8j]


@pytest.fixture(scope="module")
def catenoid():
    return catalog.get("catenoid-helicoid").pair


@pytest.fixture(scope="module")
def shifted_inversion():
    return Inversion(center=(0.0, 0.0, 0.0, 5.0), radius=1.0)


# -- inversions of flat space -------------------------------------------------


def test_inversion_validation():
    with pytest.raises(PreconditionError):
        Inversion(center=np.zeros(4), radius=0.0)
    with pytest.raises(PreconditionError):
        Inversion(center=np.zeros(4), signature="riemannian")
    with pytest.raises(PreconditionError):
        Inversion(center=np.zeros(3))
    # the lorentzian product needs the fifth coordinate
    with pytest.raises(PreconditionError):
        Inversion(center=np.zeros(4), signature="lorentzian")


def test_invert_is_involutive_and_fixes_the_sphere():
    rng = np.random.default_rng(3)
    inv = Inversion(center=(0.5, -1.0, 2.0, 0.0), radius=1.7)
    for _ in range(20):
        x = rng.normal(size=4) * 3.0
        assert np.linalg.norm(invert(invert(x, inv), inv) - x) < 1e-12
    d = rng.normal(size=4)
    on_sphere = inv.center + inv.radius * d / np.linalg.norm(d)
    assert np.linalg.norm(invert(on_sphere, inv) - on_sphere) < 1e-12


def test_invert_lorentzian_involutive():
    inv = Inversion(center=np.zeros(5), radius=1.3, signature="lorentzian")
    rng = np.random.default_rng(4)
    for _ in range(20):
        x = rng.normal(size=5)
        q = x[:4] @ x[:4] - x[4] ** 2
        if abs(q) < 0.3:
            continue
        assert np.linalg.norm(invert(invert(x, inv), inv) - x) < 1e-10


def test_invert_singular_at_center_and_cone():
    inv = Inversion(center=np.zeros(4), radius=1.0)
    with pytest.raises(InversionSingularError):
        invert(np.zeros(4), inv)
    linv = Inversion(center=np.zeros(5), radius=1.0, signature="lorentzian")
    with pytest.raises(InversionSingularError):
        invert(np.array([1.0, 0.0, 0.0, 0.0, 1.0]), linv)


def test_invert_vec_matches_points_and_chain_rule(catenoid, shifted_inversion):
    for z in GENERIC:
        smp = build_phi(catenoid, "+", z).phi
        image = invert(smp, shifted_inversion)
        assert np.linalg.norm(
            image.values() - invert(smp.values(), shifted_inversion)) < 1e-12
        # jets transform by the differential of the point map
        for w, got in ((smp.du(), image.du()), (smp.dv(), image.dv())):
            want = inversion_differential(smp.values(), w, shifted_inversion)
            assert np.linalg.norm(got - want) < 1e-10


def test_inversion_is_conformal():
    rng = np.random.default_rng(11)
    inv = Inversion(center=(1.0, 0.0, -2.0, 0.5), radius=2.0)
    for _ in range(25):
        x = rng.normal(size=4) * 2.5
        w1, w2 = rng.normal(size=4), rng.normal(size=4)
        p1 = inversion_differential(x, w1, inv)
        p2 = inversion_differential(x, w2, inv)
        before = (w1 @ w2) / (np.linalg.norm(w1) * np.linalg.norm(w2))
        after = (p1 @ p2) / (np.linalg.norm(p1) * np.linalg.norm(p2))
        assert abs(after - before) < 1e-10


# -- normal and shape-operator transport --------------------------------------


def test_normal_transform_euclidean(catenoid, shifted_inversion):
    for z in GENERIC:
        smp = build_phi(catenoid, "+", z).phi
        fd = fundamental_data(smp)
        for xi in (fd.n1, fd.n2):
            rep = normal_transform_check(smp, xi, shifted_inversion)
            assert rep["max"] < 1e-7


def test_normal_transform_lorentzian():
    entry = catalog.get("h4-flat-torus")
    sig = np.array([1.0, 1.0, 1.0, 1.0, -1.0])
    for center in (np.zeros(5), np.array([0.0, 0.0, 0.0, 0.0, -1.0])):
        inv = Inversion(center=center, radius=1.0, signature="lorentzian")
        for (u, v) in ((0.7, 1.3), (2.1, 0.4)):
            smp = entry.surface(u, v)
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
            rep = normal_transform_check(smp, n, inv)
            assert rep["max"] < 1e-7


def test_normal_transform_rejects_bad_normals(catenoid, shifted_inversion):
    smp = build_phi(catenoid, "+", 1.0 + 1.0j).phi
    tangent = smp.du() / np.linalg.norm(smp.du())
    with pytest.raises(PreconditionError):
        normal_transform_check(smp, tangent, shifted_inversion)
    fd = fundamental_data(smp)
    with pytest.raises(PreconditionError):
        normal_transform_check(smp, 2.0 * fd.n1, shifted_inversion)


# -- quadratic inversion of curves --------------------------------------------


def test_holomorphic_inversion_maps_quadric_levels(catenoid):
    curves = [catenoid.curve,
              catalog.get("enneper-r3").pair.curve,
              catalog.get("q0-trig-perturbed").pair.curve]
    rng = np.random.default_rng(5)
    for curve in curves:
        for radius in (1.0, 2.0):
            for _ in range(5):
                z = complex(rng.uniform(0.3, 1.2), rng.uniform(-0.4, 0.4))
                if not curve.domain.contains(z):
                    continue
                Z = curve.eval(z)
                k = complex(np.sum(Z * Z))
                if abs(k) < 1e-6:
                    continue
                W = holomorphic_inversion(Z, radius)
                target = radius ** 4 / k
                assert abs(complex(np.sum(W * W)) - target) < 1e-10 * abs(target)


def test_holomorphic_inversion_rejects_null_vectors():
    with pytest.raises(QuadricSingularError):
        holomorphic_inversion(np.array([1.0, 1.0j, 0.0, 0.0]))


def test_transformed_curve_matches_hand_composition(catenoid):
    tc = transformed_curve(catenoid.curve, 1.0, center=(0, 0, 0, 5j))
    fixture = HolomorphicCurve(
        "hand",
        "(cos(z)/(-24 - z^2), sin(z)/(-24 - z^2), -i*z/(-24 - z^2), "
        "-5*i/(-24 - z^2))",
        catenoid.domain)
    for z in GENERIC:
        assert np.max(np.abs(tc.eval(z) - fixture.eval(z))) < 1e-14


def test_transformed_curve_is_involutive(catenoid):
    back = transformed_curve(transformed_curve(catenoid.curve, 1.0), 1.0)
    for z in GENERIC:
        assert np.max(np.abs(back.eval(z) - catenoid.curve.eval(z))) < 1e-12


def test_transformed_pairs_recertify():
    # pairs off the null quadric stay conjugate minimal pairs after the
    # quadratic inversion; q0-* entries sit on the quadric and are excluded
    for name in ("catenoid-helicoid", "enneper-r3"):
        pair = catalog.get(name).pair
        tc = transformed_curve(pair.curve, 1.0)
        rep = certify(MinimalPair(tc), nu=7, nv=7, margin=0.05)
        assert rep["isotropy_max"] < 1e-8
        assert rep["minimality_max"] < 1e-8
        assert rep["regularity_min"] > 1e-10


# -- duality of graph surfaces ------------------------------------------------


def test_duality_closed_form_value():
    graph = catalog.get("whitney").aux["graph_curve"]
    rep = duality(graph, 1.0 + 0j)
    assert rep.value == pytest.approx(np.array([0.25, 0.0, 0.25, 0.0]),
                                      abs=1e-12)


def test_duality_residuals_on_three_curves():
    dom = Domain(-3.0, 3.0, -3.0, 3.0, excluded=(((0.0 + 0.0j), 0.05),))
    for text in ("(z, 1/z)", "(z, z^2)", "(z, exp(z))"):
        curve = HolomorphicCurve("probe", text, dom)
        for z in (0.8 + 0.4j, -1.1 + 0.9j, 1.6 - 1.2j):
            rep = duality(curve, z)
            assert rep.antiholo < 1e-9
            assert rep.involution < 1e-9
            assert rep.conformality < 1e-9


def test_duality_singular_and_arity_errors():
    dom = Domain(-2.0, 2.0, -2.0, 2.0)
    flat = HolomorphicCurve("flat", "(z, 0)", dom)
    with pytest.raises(DualitySingularError):
        duality(flat, 0.5 + 0.3j)
    four = HolomorphicCurve("four", "(z, z, z, z)", dom)
    with pytest.raises(PreconditionError):
        duality(four, 0.5 + 0.3j)


# -- closed-form pair of an inverted graph ------------------------------------


def test_inverted_pair_matches_catalog_closed_forms():
    graph = catalog.get("whitney").aux["graph_curve"]
    wpair = catalog.get("whitney").pair
    inv = Inversion(center=np.zeros(4), radius=1.0)
    for z in (1.0 + 0j, 0.7 + 0.5j, -1.2 + 0.8j):
        g, h = inversion_pair_of_holomorphic(graph, inv, z)
        assert np.linalg.norm(g - wpair.sample_g(z).values()) < 1e-12
        assert np.linalg.norm(h - wpair.sample_h(z).values()) < 1e-12


def test_inverted_pair_cross_route_extraction():
    graph = catalog.get("whitney").aux["graph_curve"]
    sample = catalog.get("whitney").aux["graph_sample"]
    inv = Inversion(center=np.zeros(4), radius=1.0)
    for z in (1.0 + 0j, 0.7 + 0.5j):
        g, h = inversion_pair_of_holomorphic(graph, inv, z)
        ext = extract_minimal_pair(invert(sample(z), inv))
        assert np.linalg.norm(ext.g - g) < 1e-6
        assert min(np.linalg.norm(ext.h - h), np.linalg.norm(ext.h + h)) < 1e-6


def test_inverted_graph_is_the_surviving_envelope():
    # the whitney pair sits on the null quadric: one constructed surface
    # collapses and the other reproduces the inverted graph pointwise
    wpair = catalog.get("whitney").pair
    sample = catalog.get("whitney").aux["graph_sample"]
    inv = Inversion(center=np.zeros(4), radius=1.0)
    for z in (1.0 + 0j, 0.7 + 0.5j, -1.2 + 0.8j):
        image = invert(sample(z), inv).values()
        survivors = [ps for ps in build_phi_pair(wpair, z)
                     if not ps.flags.bitmask]
        assert [ps.sign for ps in survivors] == ["-"]
        assert np.linalg.norm(survivors[0].phi.values() - image) < 1e-8


def test_inverted_pair_radius_scaling():
    graph = catalog.get("whitney").aux["graph_curve"]
    z = 0.7 + 0.5j
    g1, h1 = inversion_pair_of_holomorphic(
        graph, Inversion(center=np.zeros(4), radius=1.0), z)
    g2, h2 = inversion_pair_of_holomorphic(
        graph, Inversion(center=np.zeros(4), radius=2.0), z)
    assert np.linalg.norm(g2 - 4.0 * g1) < 1e-12
    assert np.linalg.norm(h2 - 4.0 * h1) < 1e-12


# -- dual-route pair transformation -------------------------------------------


def test_pair_transform_dual_routes(catenoid, shifted_inversion):
    points = catenoid.domain.grid(20, 20, margin=0.0)
    rep = pair_transform_check(catenoid, shifted_inversion, points)
    assert rep.sup < 1e-9
    assert rep.h_convention in ("+", "-")
    assert rep.n_points == 2 * len(points)
    assert rep.n_skipped == 0


def test_pair_transform_huge_radius(catenoid):
    inv = Inversion(center=(0.0, 0.0, 0.0, 5.0), radius=1e3)
    points = catenoid.domain.grid(6, 6, margin=0.05)
    rep = pair_transform_check(catenoid, inv, points)
    assert rep.sup < 1e-6


def test_pair_transform_rejects_null_quadric_pairs():
    wpair = catalog.get("whitney").pair
    inv = Inversion(center=np.zeros(4), radius=1.0)
    with pytest.raises(PreconditionError):
        pair_transform_check(wpair, inv, wpair.domain.grid(4, 4, margin=0.1))


# -- complex structure recovery -----------------------------------------------


def test_recover_structure_plane_pair():
    line = catalog.get("q0-line").pair
    points = line.domain.grid(5, 5, margin=0.1)
    rep = recover_complex_structure(line, points)
    assert rep.rank == 2
    assert np.allclose(rep.matrix, J_AMB, atol=1e-9)
    assert rep.square_residual < 1e-9
    assert rep.orthogonality_residual < 1e-9
    assert rep.fit_residual < 1e-9
    assert rep.constancy_residual < 1e-9


def test_recover_structure_full_rank_pair():
    trig = catalog.get("q0-trig").pair
    points = trig.domain.grid(5, 5, margin=0.1)
    rep = recover_complex_structure(trig, points)
    assert rep.rank == 4
    assert rep.square_residual < 1e-9
    assert rep.orthogonality_residual < 1e-9
    assert rep.fit_residual < 1e-9
    assert rep.constancy_residual < 1e-9


def test_recover_structure_is_deterministic():
    trig = catalog.get("q0-trig").pair
    points = trig.domain.grid(4, 4, margin=0.1)
    a = recover_complex_structure(trig, points).matrix
    b = recover_complex_structure(trig, points).matrix
    assert np.array_equal(a, b)


def test_recover_structure_rejects_non_null_curves(catenoid):
    with pytest.raises(NotNullCurveError):
        recover_complex_structure(catenoid,
                                  catenoid.domain.grid(3, 3, margin=0.2))


def test_degenerate_collapse(catenoid):
    trig = catalog.get("q0-trig").pair
    points = trig.domain.grid(5, 5, margin=0.1)
    rep = degenerate_collapse_check(trig, points)
    assert rep.collapsed_sign == "+"
    assert rep.variation < 1e-9
    assert np.linalg.norm(rep.center) < 1e-9
    assert rep.companion_residual < 1e-9
    with pytest.raises(NotNullCurveError):
        degenerate_collapse_check(catenoid,
                                  catenoid.domain.grid(3, 3, margin=0.2))


def test_degenerate_collapse_plane():
    line = catalog.get("q0-line").pair
    rep = degenerate_collapse_check(line, line.domain.grid(4, 4, margin=0.1))
    assert rep.variation < 1e-12
    assert rep.companion_residual < 1e-12


# -- stereographic bridges ----------------------------------------------------


def test_sphere_bridge_known_points():
    st = Stereographic(1.0, "sphere")
    assert st.to_R4(np.array([1.0, 0, 0, 0, 1.0])) == pytest.approx(
        np.array([2.0, 0, 0, 0]), abs=1e-12)
    assert st.to_R4(np.zeros(5)) == pytest.approx(np.zeros(4), abs=1e-12)
    assert st.from_R4(np.zeros(4)) == pytest.approx(np.zeros(5), abs=1e-12)


def test_sphere_bridge_round_trip():
    rng = np.random.default_rng(7)
    for radius in (1.0, 2.5):
        st = Stereographic(radius, "sphere")
        for _ in range(25):
            x = rng.normal(size=4) * 3.0
            assert np.linalg.norm(st.to_R4(st.from_R4(x)) - x) < 1e-11
            P = st.from_R4(x)
            assert st.ambient.on_manifold_residual(P) < 1e-11


def test_hyperbolic_bridge_round_trip_and_ball():
    rng = np.random.default_rng(9)
    st = Stereographic(1.0, "hyperbolic")
    P = st.from_R4(np.array([1.99, 0.0, 0.0, 0.0]))
    q = P[:4] @ P[:4] - (P[4] + 1.0) ** 2
    assert abs(q + 1.0) < 1e-10
    for _ in range(25):
        d = rng.normal(size=4)
        x = d / np.linalg.norm(d) * 1.95 * rng.random()
        assert np.linalg.norm(st.to_R4(st.from_R4(x)) - x) < 1e-11
    with pytest.raises(ProjectionError):
        st.from_R4(np.array([2.0, 0.0, 0.0, 0.2]))


def test_bridge_rejects_bad_points():
    st = Stereographic(1.0, "sphere")
    with pytest.raises(ProjectionError):
        st.to_R4(np.array([0.5, 0, 0, 0, 1.0]))   # off the sphere
    with pytest.raises(ProjectionError):
        st.to_R4(np.array([0.0, 0, 0, 0, 2.0]))   # opposite pole
    hy = Stereographic(1.0, "hyperbolic")
    lower = np.array([0.5, 0.0, 0.0, 0.0, -1.0 - np.sqrt(1.25)])
    with pytest.raises(ProjectionError):
        hy.to_R4(lower)                            # wrong sheet


# -- space-form minimality ----------------------------------------------------


def _grid(entry, nu=6, nv=6, margin=0.08):
    us, vs = entry.domain.linspace(nu, nv, margin)
    return [(u, v) for u in us for v in vs]


def test_superminimal_veronese():
    entry = catalog.get("veronese")
    rep = superminimal_test(entry.surface, entry.ambient, _grid(entry))
    assert rep.verdict == "superminimal"
    assert rep.max_mean_curvature < 1e-9
    assert rep.max_circularity < 1e-8
    assert not rep.degenerate


def test_superminimal_degenerate_great_sphere():
    entry = catalog.get("great-sphere-s4")
    rep = superminimal_test(entry.surface, entry.ambient, _grid(entry))
    assert rep.verdict == "superminimal-degenerate"
    assert rep.degenerate


def test_superminimal_rejects_torus():
    entry = catalog.get("clifford-torus-s4")
    rep = superminimal_test(entry.surface, entry.ambient, _grid(entry))
    assert rep.verdict == "not-minimal"
    assert rep.max_mean_curvature == pytest.approx(7.0 / 24.0, abs=1e-9)


def test_superminimal_off_manifold_errors():
    entry = catalog.get("veronese")

    def shifted(u, v):
        smp = entry.surface(u, v)
        from superconf.jets import Jet2, Vec
        return Vec([smp[0] + Jet2(0.1)] + list(smp.c[1:]))

    with pytest.raises(ProjectionError):
        superminimal_test(shifted, entry.ambient, _grid(entry, 2, 2))


# -- quadric classification ---------------------------------------------------


def test_quadric_kinds(catenoid):
    assert quadric_classification(
        catenoid, catenoid.domain.grid(4, 4, margin=0.2)).kind == "non-constant"
    trig = catalog.get("q0-trig").pair
    assert quadric_classification(
        trig, trig.domain.grid(4, 4, margin=0.2)).kind == "null"
    line = catalog.get("q0-line").pair
    assert quadric_classification(
        line, line.domain.grid(4, 4, margin=0.2)).kind == "null"
    dom = Domain(-1.0, 1.0, -1.0, 1.0)
    skew = MinimalPair(HolomorphicCurve("skew", "(1 + i, 2, z, i*z)", dom))
    assert quadric_classification(
        skew, dom.grid(4, 4, margin=0.2)).kind == "constant-complex"


def test_quadric_veronese_with_cross_validation():
    entry = catalog.get("veronese")
    pair = entry.aux["pair"]
    us, vs = entry.domain.linspace(6, 6, margin=0.08)
    points = [complex(u, v) for u in us for v in vs]
    rep = quadric_classification(pair, points, immersion=entry.surface,
                                 ambient=entry.ambient)
    assert rep.kind == "constant-real"
    assert abs(rep.k) == pytest.approx(4.0, abs=1e-9)
    assert rep.sign == -1            # measured orientation of the constant
    assert rep.radius == pytest.approx(1.0, abs=1e-9)
    cv = rep.cross_validation
    assert cv["radius_matches"]
    assert cv["space_form"].verdict == "superminimal"
    assert cv["surface_residual"] < 1e-8
    assert cv["surface_sign"] in ("+", "-")
