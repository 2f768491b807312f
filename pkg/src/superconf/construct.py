"""Build the two superconformal surfaces attached to a conjugate minimal pair.

Given a pair (g, h) the two surfaces are phi = g + Jhat(sign) h, where the
bundle map acts as the complex structure J on the tangential part of h and as
a +-90 degree rotation on its normal part.  The module computes full
second-order jets of phi so the curvature machinery in `geometry` can run on
the result, exposes the frame quantities of the construction (r = ||h||, its
gradient and Hessian, the a-function, the distinguished normals), flags the
points where the construction degenerates, and implements the inverse
extraction of (g, h) from a superconformal sample.

Sign convention, fixed once for the whole package: with the deterministic
normal frame (n1, n2) of the base surface,

    Jhat(+) n1 = -n2,   Jhat(+) n2 = +n1,

and Jhat(-) is the inverse rotation.  Which of the two built surfaces a
closed-form reference calls "+" depends on orientation choices the reference
leaves implicit, so comparisons against stored oracles allow one global swap
of the labels and record the outcome.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (FrameDegenerateError, FrameUndefinedError,
                     PreconditionError, SingularSampleError)
from .geometry import (REGULARITY_FLOOR, FundamentalData, adapted_frame,
                       ellipse_descriptor, fundamental_data)
from .jets import DegenerateJetError, Jet2, Vec
from .minimal import MinimalPair, split

SIGNS = ("+", "-")

# a-values below this use the fallback normal basis instead of h^N
A_FLOOR = 1e-10
# ||h|| below this means the frame does not exist at all
R_FLOOR = 1e-10
# threshold for the a_small regularity flag
A_SMALL = 0.05
# below this the conformal-factor residual (a^2 in its denominator) is nan
CONFORMAL_A_FLOOR = 1e-3
# circularity threshold for the g_holomorphic_point flag
G_CIRCULAR_TOL = 1e-8

_JMAT = np.array([[0.0, 1.0], [-1.0, 0.0]])


def _check_sign(sign):
    if sign not in SIGNS:
        raise PreconditionError(f"sign must be '+' or '-', got {sign!r}")
    return 1.0 if sign == "+" else -1.0


def _solve2(E, F, G, b1, b2):
    """Solve the 2x2 Gram system [[E,F],[F,G]] x = (b1, b2).

    Works elementwise on Jet2 entries as well as on floats."""
    det = E * G - F * F
    return (b1 * G - b2 * F) / det, (b2 * E - b1 * F) / det


def _field_normal_frame(gu, gv, E, F, G):
    """Jet2-valued orthonormal normal frame along a surface patch in R4.

    Same deterministic rule as the pointwise frame in `geometry`: project the
    ambient basis vectors off the tangent plane, keep the two with the
    largest projected norms (ties broken toward lower index), orthonormalize
    in index order, and flip the second one if the 4x4 frame determinant is
    negative.  The discrete choices are locally constant, so jet arithmetic
    through them is legitimate."""
    projections = []
    for k in range(4):
        ek = Vec([Jet2(1.0 if i == k else 0.0) for i in range(4)])
        al, be = _solve2(E, F, G, ek.dot(gu), ek.dot(gv))
        projections.append(ek - al * gu - be * gv)
    norms = [np.linalg.norm(p.values()) for p in projections]
    order = sorted(range(4), key=lambda k: (-norms[k], k))
    i1, i2 = sorted(order[:2])
    n1 = projections[i1] * (1.0 / projections[i1].norm())
    w = projections[i2] - n1 * projections[i2].dot(n1)
    n2 = w * (1.0 / w.norm())
    det = np.linalg.det(np.column_stack(
        [gu.values(), gv.values(), n1.values(), n2.values()]))
    if det < 0.0:
        n2 = -n2
    return n1, n2


@dataclass
class _FieldContext:
    """Everything build_phi needs, with full jets, computed once per point."""

    sample: object
    E: Jet2
    F: Jet2
    G: Jet2
    r: Jet2
    ru: Jet2
    rv: Jet2
    h1: Jet2
    h2: Jet2
    hN: Vec
    n1: Vec
    n2: Vec
    p: Jet2
    q: Jet2


@dataclass
class ConstructionFrame:
    """Pointwise frame data of the construction, per the decomposition
    h = -r (g_* grad r + a xi)."""

    z: complex
    r: Jet2
    grad_r: tuple          # coefficient jets of grad r in the (du, dv) basis
    norm_grad_r: float
    a: float
    a_jet: Jet2 | None     # None where 1 - ||grad r||^2 is below floor
    Z: np.ndarray          # coefficients of -J grad r
    Z_ambient: np.ndarray
    Tvec: np.ndarray       # coefficients of r J grad r (tangential part of h)
    T_ambient: np.ndarray
    xi: np.ndarray
    xi_fallback: bool
    delta_plus: np.ndarray
    delta_minus: np.ndarray
    hess_r: np.ndarray     # in the orthonormal tangent frame
    S: np.ndarray
    bxi_residual: float    # nan where xi came from the fallback basis
    bxi_scale: float
    ctx: _FieldContext


@dataclass(frozen=True)
class RegularityFlags:
    a_small: bool
    g_holomorphic_point: bool
    rank_deficient: bool

    FLAG_A_SMALL = 1
    FLAG_G_HOLOMORPHIC = 2
    FLAG_RANK_DEFICIENT = 4
    FLAG_OUT_OF_DOMAIN = 8

    @property
    def bitmask(self):
        return ((self.FLAG_A_SMALL if self.a_small else 0)
                | (self.FLAG_G_HOLOMORPHIC if self.g_holomorphic_point else 0)
                | (self.FLAG_RANK_DEFICIENT if self.rank_deficient else 0))

    @property
    def all_clear(self):
        return self.bitmask == 0


@dataclass
class PhiSample:
    sign: str
    phi: Vec
    frame: ConstructionFrame
    flags: RegularityFlags


def construction_frame(pair: MinimalPair, z) -> ConstructionFrame:
    """Frame quantities of the construction at z.

    Raises FrameDegenerateError where h vanishes.  Where a is below floor
    (h tangent to g) the xi/delta normals fall back to the deterministic
    ambient-projection frame; the construction itself stays regular there."""
    s = pair.samples_at(z)
    g, h = s.g, s.h
    gu, gv = s.g_u, s.g_v
    hu, hv = s.h_u, s.h_v

    E = gu.dot(gu)
    F = gu.dot(gv)
    G = gv.dot(gv)

    scale = max(np.linalg.norm(h.values()), np.linalg.norm(g.values()), 1.0)
    r2 = h.dot(h)
    if r2.v <= (R_FLOOR * scale) ** 2:
        raise FrameDegenerateError(
            f"h vanishes at z={z}: ||h|| = {np.sqrt(max(r2.v, 0.0)):.3e}")
    try:
        r = r2.sqrt()
    except DegenerateJetError as exc:
        raise FrameDegenerateError(f"h vanishes at z={z}") from exc

    # d||h|| = <h_u, h>/||h||; routing through the conjugate fields keeps
    # full second-order jets for the gradient coefficients
    ru = hu.dot(h) / r
    rv = hv.dot(h) / r
    grad_u = ru / E
    grad_v = rv / E
    ng2 = (ru * ru + rv * rv) / E
    norm_grad = float(np.sqrt(max(ng2.v, 0.0)))

    one_minus = 1.0 - ng2
    a_val = float(np.sqrt(max(one_minus.v, 0.0)))
    a_jet = one_minus.sqrt() if one_minus.v > 1e-14 else None

    # J(p du + q dv) = (q, -p) in coefficients, so Z = -J grad r = (-q, p)
    Z = np.array([-grad_v.v, grad_u.v])
    Tvec = np.array([r.v * grad_v.v, -r.v * grad_u.v])
    gu_val, gv_val = gu.values(), gv.values()
    Z_amb = Z[0] * gu_val + Z[1] * gv_val
    T_amb = Tvec[0] * gu_val + Tvec[1] * gv_val

    h1, h2 = _solve2(E, F, G, h.dot(gu), h.dot(gv))
    hN = h - h1 * gu - h2 * gv
    n1, n2 = _field_normal_frame(gu, gv, E, F, G)
    p = hN.dot(n1)
    q = hN.dot(n2)

    hN_val = hN.values()
    if a_val > A_FLOOR:
        xi = -hN_val / (a_val * r.v)
        fallback = False
    else:
        xi = n1.values()
        fallback = True
    c1 = float(xi @ n1.values())
    c2 = float(xi @ n2.values())
    delta = c1 * n2.values() - c2 * n1.values()   # = Jhat(-) xi
    delta_plus = -delta
    delta_minus = delta

    # Hessian of r w.r.t. the conformal metric E(du^2 + dv^2), expressed in
    # the orthonormal tangent frame; Christoffels in closed form from E
    Eu, Ev = E.du, E.dv
    iE = 1.0 / E.v
    huu = r.duu - 0.5 * iE * (Eu * r.du - Ev * r.dv)
    huv = r.duv - 0.5 * iE * (Ev * r.du + Eu * r.dv)
    hvv = r.dvv - 0.5 * iE * (-Eu * r.du + Ev * r.dv)
    hess = np.array([[huu, huv], [huv, hvv]]) * iE
    rho = np.array([r.du, r.dv]) / np.sqrt(E.v)
    S = np.eye(2) - np.outer(rho, rho)

    if fallback:
        bxi_res, bxi_scale = float("nan"), float("nan")
    else:
        B_xi = np.array([[g.duu() @ xi, g.duv() @ xi],
                         [g.duv() @ xi, g.dvv() @ xi]]) * iE
        lhs = a_val * r.v * B_xi
        rhs = (r.v * hess - S) @ _JMAT
        bxi_scale = max(1.0, np.abs(lhs).max(), np.abs(rhs).max())
        bxi_res = float(np.abs(lhs - rhs).max())

    ctx = _FieldContext(sample=s, E=E, F=F, G=G, r=r, ru=ru, rv=rv,
                        h1=h1, h2=h2, hN=hN, n1=n1, n2=n2, p=p, q=q)
    return ConstructionFrame(
        z=complex(z), r=r, grad_r=(grad_u, grad_v), norm_grad_r=norm_grad,
        a=a_val, a_jet=a_jet, Z=Z, Z_ambient=Z_amb, Tvec=Tvec,
        T_ambient=T_amb, xi=xi, xi_fallback=fallback,
        delta_plus=delta_plus, delta_minus=delta_minus, hess_r=hess, S=S,
        bxi_residual=bxi_res, bxi_scale=bxi_scale, ctx=ctx)


def _phi_field(frame: ConstructionFrame, sign) -> Vec:
    s = _check_sign(sign)
    c = frame.ctx
    smp = c.sample
    tangential = c.h2 * smp.g_u - c.h1 * smp.g_v
    normal = c.q * c.n1 - c.p * c.n2
    return smp.g + tangential + normal * s


def _g_degenerate_sign(fd_g: FundamentalData):
    """Which construction sign degenerates when g has a circular ellipse.

    The rotation Jhat(s) that matches the orientation of g's curvature
    circle (the sign of its normal curvature in the deterministic frame)
    collapses the corresponding phi.  Calibrated on the null-quadric
    trigonometric pair; for a point ellipse (K_N = 0) both signs degenerate
    and both are reported."""
    ell = ellipse_descriptor(fd_g)
    circ = max(abs(ell.res_orth), abs(ell.res_len)) < G_CIRCULAR_TOL
    if not circ:
        return ()
    if abs(fd_g.K_N) < G_CIRCULAR_TOL * max(1.0, abs(fd_g.K)):
        return SIGNS
    return ("-",) if fd_g.K_N > 0.0 else ("+",)


def regularity_flags(sample_or_frame, sign=None, phi: Vec | None = None
                     ) -> RegularityFlags:
    """Flags for one constructed sample.

    Accepts a PhiSample, or (frame, sign, phi) pieces."""
    if isinstance(sample_or_frame, PhiSample):
        frame = sample_or_frame.frame
        sign = sample_or_frame.sign
        phi = sample_or_frame.phi
    else:
        frame = sample_or_frame
        if sign is None or phi is None:
            raise PreconditionError(
                "regularity_flags needs a PhiSample or (frame, sign, phi)")
    a_small = frame.a < A_SMALL
    try:
        fd_g = fundamental_data(frame.ctx.sample.g)
        g_hol = sign in _g_degenerate_sign(fd_g)
    except SingularSampleError:
        g_hol = False
    # rank floor relative to the pair's own length scale, not phi's: a
    # collapsed phi is pure roundoff and must not self-normalize into
    # looking like a (tiny) immersion
    pu, pv = phi.du(), phi.dv()
    E, F, G = pu @ pu, pu @ pv, pv @ pv
    det1 = E * G - F * F
    gu, gv = frame.ctx.sample.g_u.values(), frame.ctx.sample.g_v.values()
    scale = max(np.linalg.norm(pu), np.linalg.norm(pv),
                np.linalg.norm(gu), np.linalg.norm(gv), 1e-150)
    rank_def = bool(det1 <= REGULARITY_FLOOR * scale ** 4)
    return RegularityFlags(a_small=a_small, g_holomorphic_point=g_hol,
                           rank_deficient=rank_def)


def build_phi(pair: MinimalPair, sign, z) -> PhiSample:
    """One of the two surfaces attached to the pair, with full jets."""
    _check_sign(sign)
    frame = construction_frame(pair, z)
    phi = _phi_field(frame, sign)
    flags = regularity_flags(frame, sign, phi)
    return PhiSample(sign=sign, phi=phi, frame=frame, flags=flags)


def build_phi_pair(pair: MinimalPair, z):
    """Both signs at once, sharing one frame computation."""
    frame = construction_frame(pair, z)
    out = []
    for sign in SIGNS:
        phi = _phi_field(frame, sign)
        out.append(PhiSample(sign=sign, phi=phi, frame=frame,
                             flags=regularity_flags(frame, sign, phi)))
    return tuple(out)


def phi_route_direct(frame: ConstructionFrame, sign) -> np.ndarray:
    """Value of phi by the closed decomposition g - r g_* grad r + s a r
    delta; agrees with the field route wherever a is away from zero."""
    s = _check_sign(sign)
    c = frame.ctx
    smp = c.sample
    g_val = smp.g.values()
    grad_amb = (frame.grad_r[0].v * smp.g_u.values()
                + frame.grad_r[1].v * smp.g_v.values())
    return g_val - frame.r.v * grad_amb + s * frame.a * frame.r.v * frame.delta_minus


def phi_value(g_sample: Vec, h_sample: Vec, sign) -> np.ndarray:
    """Value of phi from plain 2-jet samples of g and h.

    For pairs given by closed-form samplers rather than holomorphic curves;
    no derivative fields are required because only the value is produced.
    The chart need not be conformal: the tangent rotation is the quarter
    turn of the induced metric, which reduces to the split-curve formula on
    isothermal charts.  Whether the chart is oriented with or against the
    conjugacy convention is read off the first derivatives of h."""
    s = _check_sign(sign)
    fd = fundamental_data(g_sample)
    gu, gv = fd.Xu, fd.Xv
    b = np.array([h_sample.values() @ gu, h_sample.values() @ gv])
    h1, h2 = np.linalg.solve(np.array([[fd.E, fd.F], [fd.F, fd.G]]), b)
    hN = h_sample.values() - h1 * gu - h2 * gv
    p, q = hN @ fd.n1, hN @ fd.n2
    w = np.sqrt(fd.det1)
    ju = (fd.F * gu - fd.E * gv) / w
    jv = (fd.G * gu - fd.F * gv) / w
    hu, hv = h_sample.du(), h_sample.dv()
    standard = np.linalg.norm(hu - ju) + np.linalg.norm(hv - jv)
    mirrored = np.linalg.norm(hu + ju) + np.linalg.norm(hv + jv)
    orient = 1.0 if standard <= mirrored else -1.0
    return (g_sample.values() + orient * (h1 * ju + h2 * jv)
            + s * (q * fd.n1 - p * fd.n2))


@dataclass(frozen=True)
class DualPairReport:
    z: complex
    r: float
    a: float
    mu: dict
    center_residual: dict
    conformal_residual: dict
    tangency_residual: dict
    metric_relation_residual: float


def dual_pair_report(pair: MinimalPair, z) -> DualPairReport:
    """Shared-geometry checks for the two surfaces built at z.

    Residuals reported: each surface plus its normalized mean-curvature
    vector lands back on g (common central sphere); the pull-back metric of
    g equals (r mu / a)^2 times each surface's metric; the two surfaces'
    metrics agree after scaling by their mu^2; the vector g_* Z + a xi is
    orthogonal to each surface's tangent plane and to its mean curvature.
    The conformal-factor entries are nan where a is below a small floor
    (the factor has a^2 in the denominator and degenerates with it); the
    floor is far below the a_small flag threshold, so flagged-but-sane
    samples still get a finite entry."""
    plus, minus = build_phi_pair(pair, z)
    frame = plus.frame
    for ps in (plus, minus):
        if ps.flags.rank_deficient:
            raise PreconditionError(
                f"constructed surface {ps.sign} is rank-deficient at z={z}")
    g_val = frame.ctx.sample.g.values()
    E_g, F_g, G_g = frame.ctx.E.v, frame.ctx.F.v, frame.ctx.G.v
    zeta_c = frame.Z_ambient + frame.a * frame.xi

    mu = {}
    center = {}
    conformal = {}
    tangency = {}
    forms = {}
    for ps in (plus, minus):
        fd = fundamental_data(ps.phi)
        fr = adapted_frame(fd)
        mu[ps.sign] = fr.mu
        lam2 = float(fd.H @ fd.H)
        center[ps.sign] = float(np.linalg.norm(
            ps.phi.values() + fd.H / lam2 - g_val))
        forms[ps.sign] = np.array([[fd.E, fd.F], [fd.F, fd.G]])
        if frame.a >= CONFORMAL_A_FLOOR:
            rho = (frame.r.v * fr.mu / frame.a) ** 2
            conformal[ps.sign] = max(
                abs(E_g - rho * fd.E), abs(F_g - rho * fd.F),
                abs(G_g - rho * fd.G))
        else:
            conformal[ps.sign] = float("nan")
        tangency[ps.sign] = max(
            abs(zeta_c @ fd.Xu) / np.linalg.norm(fd.Xu),
            abs(zeta_c @ fd.Xv) / np.linalg.norm(fd.Xv),
            abs(zeta_c @ fd.H) / np.linalg.norm(fd.H))
    rel = mu["+"] ** 2 * forms["+"] - mu["-"] ** 2 * forms["-"]
    return DualPairReport(
        z=complex(z), r=frame.r.v, a=frame.a, mu=mu,
        center_residual=center, conformal_residual=conformal,
        tangency_residual=tangency,
        metric_relation_residual=float(np.abs(rel).max()))


def translation_check(pair: MinimalPair, offset, points):
    """max over points of | ||phi^{h+v} - phi^h|| - ||v|| | for both signs.

    Translating h rigidly translates each built surface by a rotated copy
    of the offset, so the displacement norm is exactly the offset norm."""
    offset = np.asarray(offset, dtype=float)
    shifted = pair.translated(offset)
    worst = 0.0
    for z in points:
        base = build_phi_pair(pair, z)
        moved = build_phi_pair(shifted, z)
        for b, m in zip(base, moved):
            d = np.linalg.norm(m.phi.values() - b.phi.values())
            worst = max(worst, abs(d - np.linalg.norm(offset)))
    return worst


def reflection_pair_check(pair: MinimalPair, points, sample_tol=1e-9):
    """For a pair lying in the x4 = 0 hyperplane, the two built surfaces
    differ exactly by the reflection x4 -> -x4; returns the worst residual
    ||reflect(phi_plus) - phi_minus|| over the points.

    Raises PreconditionError if the pair leaves the hyperplane."""
    mirror = np.array([1.0, 1.0, 1.0, -1.0])
    worst = 0.0
    for z in points:
        s = pair.samples_at(z)
        scale = max(np.linalg.norm(s.g.values()), np.linalg.norm(s.h.values()),
                    1.0)
        if max(abs(s.g.values()[3]), abs(s.h.values()[3])) > sample_tol * scale:
            raise PreconditionError(
                f"pair leaves the x4 = 0 hyperplane at z={z}; reflection "
                "symmetry only applies to pairs in R3")
        plus, minus = build_phi_pair(pair, z)
        worst = max(worst, float(np.abs(
            mirror * plus.phi.values() - minus.phi.values()).max()))
    return worst


@dataclass(frozen=True)
class ExtractedPair:
    g: np.ndarray
    h: np.ndarray
    lam: float
    mu: float
    zeta_orientation: float


def extract_minimal_pair(surface, z=None) -> ExtractedPair:
    """Recover (g, h) values from one superconformal surface sample.

    `surface` is a Vec sample or a callable z -> Vec.  g is the center of
    the curvature circle's sphere: phi + H/||H||^2; h is -zeta/||H|| with
    zeta the oriented second adapted normal.  The orientation sign that was
    used is part of the result, since a reference pair may differ from the
    recovered h by one global sign."""
    sample = surface(z) if callable(surface) else surface
    fd = fundamental_data(sample)
    fr = adapted_frame(fd)
    lam, mu = fr.lam, fr.mu
    if lam <= R_FLOOR or mu <= R_FLOOR:
        raise FrameUndefinedError(
            f"extraction needs ||H|| and mu above floor, got {lam:.3e}, "
            f"{mu:.3e}")
    g = sample.values() + fd.H / (lam * lam)
    h = -fr.zeta_oriented / lam
    return ExtractedPair(g=g, h=h, lam=lam, mu=mu,
                         zeta_orientation=fr.ambient_det)
