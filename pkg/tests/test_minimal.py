"""Conjugate-pair splitting, domains, certification, associated family."""

import numpy as np
import pytest

from superconf.errors import DomainError, PreconditionError
from superconf.expr import CurveExpr
from superconf.jets import Vec
from superconf.minimal import (
    Domain,
    HolomorphicCurve,
    MinimalPair,
    associated_family,
    certify,
    split,
)

CAT_DOM = Domain(-2.0, 2.0, -1.5, 1.5)


def catenoid_pair():
    return MinimalPair(HolomorphicCurve(
        "catenoid-helicoid", "(cos(z), sin(z), -i*z, 0)", CAT_DOM))


class TestDomain:
    def test_rectangle_membership(self):
        d = Domain(-1, 1, 0, 2)
        assert d.contains(complex(0.5, 1.0))
        assert not d.contains(complex(1.5, 1.0))
        assert not d.contains(complex(0.0, -0.1))

    def test_excluded_disc(self):
        d = Domain(-1, 1, -1, 1, excluded=((0j, 0.25),))
        assert not d.contains(0.2 + 0.1j)
        assert d.contains(0.3 + 0.2j)

    def test_grid_skips_exclusions(self):
        d = Domain(-1, 1, -1, 1, excluded=((0j, 0.25),))
        pts = d.grid(5, 5)
        assert 0j not in pts
        assert len(pts) == 24

    def test_empty_rectangle_rejected(self):
        with pytest.raises(ValueError):
            Domain(1, 1, 0, 2)


class TestSplit:
    def test_catenoid_and_helicoid_values(self):
        s = split(catenoid_pair(), complex(0.7, -0.4))
        u, v = 0.7, -0.4
        np.testing.assert_allclose(
            s.g.values(),
            [np.cos(u) * np.cosh(v), np.sin(u) * np.cosh(v), v, 0.0],
            atol=1e-15)
        np.testing.assert_allclose(
            s.h.values(),
            [-np.sin(u) * np.sinh(v), np.cos(u) * np.sinh(v), -u, 0.0],
            atol=1e-15)

    def test_conjugate_norm_at_1_1(self):
        s = split(catenoid_pair(), complex(1.0, 1.0))
        assert s.h.norm().v == pytest.approx(np.cosh(1.0), rel=1e-14)

    def test_conjugacy_is_slot_exact(self):
        s = split(catenoid_pair(), complex(0.3, 0.8))
        for a, b in zip(s.h_u, -s.g_v):
            assert a == b
        for a, b in zip(s.h_v, s.g_u):
            assert a == b

    def test_derivative_fields_match_position_jets(self):
        s = split(catenoid_pair(), complex(-0.6, 0.2))
        np.testing.assert_allclose(s.g_u.values(), s.g.du(), atol=1e-15)
        np.testing.assert_allclose(s.g_v.values(), s.g.dv(), atol=1e-15)
        np.testing.assert_allclose(s.g_u.dv(), s.g_v.du(), atol=1e-15)

    def test_domain_violation(self):
        with pytest.raises(DomainError):
            catenoid_pair().samples_at(complex(3.0, 0.0))

    def test_h_offset_translates_conjugate_only(self):
        pair = catenoid_pair()
        moved = pair.translated([0.0, 1.0, -2.0, 0.5])
        z = complex(0.4, 0.6)
        s0, s1 = pair.samples_at(z), moved.samples_at(z)
        np.testing.assert_allclose(s1.g.values(), s0.g.values(), atol=1e-15)
        np.testing.assert_allclose(
            s1.h.values() - s0.h.values(), [0.0, 1.0, -2.0, 0.5], atol=1e-15)
        np.testing.assert_allclose(s1.h.du(), s0.h.du(), atol=1e-15)


class TestCertify:
    def test_catenoid_certificate(self):
        rep = certify(catenoid_pair())
        assert rep["isotropy_max"] < 1e-14
        assert rep["minimality_max"] < 1e-12
        assert rep["regularity_min"] > 1e-3

    def test_flat_plane_certificate(self):
        dom = Domain(-1, 1, -1, 1)
        rep = certify(HolomorphicCurve("line", "(z, i*z, 0, 0)", dom))
        assert rep["isotropy_max"] < 1e-15
        assert rep["minimality_max"] < 1e-14

    def test_non_isotropic_curve_flagged(self):
        dom = Domain(-1, 1, -1, 1)
        rep = certify(HolomorphicCurve("skew", "(z, 2*i*z, 0, 0)", dom))
        assert rep["isotropy_max"] > 0.5

    def test_empty_grid_rejected(self):
        with pytest.raises(PreconditionError):
            certify(catenoid_pair(), grid=[])


class TestAssociatedFamily:
    def test_quarter_turn_swaps_the_pair(self):
        pair = catenoid_pair()
        rot = associated_family(pair, np.pi / 2)
        z = complex(0.5, -0.3)
        s0, s1 = pair.samples_at(z), rot.samples_at(z)
        np.testing.assert_allclose(s1.g.values(), s0.h.values(), atol=1e-12)
        np.testing.assert_allclose(s1.h.values(), -s0.g.values(), atol=1e-12)

    def test_metric_is_preserved(self):
        pair = catenoid_pair()
        z = complex(0.4, 0.7)
        s0 = pair.samples_at(z)
        for theta in (np.pi / 8, 3 * np.pi / 8):
            s = associated_family(pair, theta).samples_at(z)
            assert Vec.dot(s.g_u, s.g_u).v == pytest.approx(
                Vec.dot(s0.g_u, s0.g_u).v, rel=1e-12)

    def test_family_member_still_isotropic(self):
        rep = certify(associated_family(catenoid_pair(), 0.37), nu=5, nv=5)
        assert rep["isotropy_max"] < 1e-13
        assert rep["minimality_max"] < 1e-12


def test_curve_text_round_trip():
    c = HolomorphicCurve("t", "(cos(z), sin(z), -i*z, 0)", CAT_DOM)
    assert c.to_text() == CurveExpr.parse(c.to_text()).to_text()


def test_programmatic_expression_accepted():
    expr = CurveExpr.parse("(z, i*z, 0, 0)")
    c = HolomorphicCurve("prog", expr, Domain(-1, 1, -1, 1))
    np.testing.assert_allclose(
        c.eval(0.5 + 0.5j).astype(complex),
        [0.5 + 0.5j, -0.5 + 0.5j, 0, 0], atol=1e-15)
