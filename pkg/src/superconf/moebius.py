"""Conformal transformations: inversions, duality, space-form bridges.

The operations here move surfaces and conjugate pairs through conformal
transformations of the ambient space:

  * inversions of flat R4 and of Lorentzian R5, with the induced transport
    of unit normals and shape operators,
  * the quadratic inversion Z -> r^2 Z / <<Z, Z>> acting on holomorphic
    curves, which realizes the pointwise inversion on the level of
    conjugate pairs,
  * the normal-component dual f -> f^N / (2 ||f^N||^2) of graph surfaces,
  * stereographic bridges identifying the round sphere and the hyperbolic
    space with (part of) flat R4, plus a minimality-and-roundness test for
    space-form immersions,
  * classification of the complex square <<G, G>> of a pair, which decides
    which of the transformation pictures applies.

Conventions.  The ambient complex structure on R4 pairs coordinates as
(x1 + i x2, x3 + i x4).  The Lorentzian inner product on R5 is
x1 y1 + ... + x4 y4 - x5 y5, and the Lorentzian inversion carries a minus
sign on the radius-squared factor.  The conjugate member of a transformed
pair is only determined up to one global sign; checks that compare against
closed forms score both conventions and report the winner.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .construct import (SIGNS, _solve2, build_phi_pair, extract_minimal_pair,
                        phi_value)
from .errors import (DualitySingularError, FrameDegenerateError,
                     FrameUndefinedError, InversionSingularError,
                     NotNullCurveError, PreconditionError, ProjectionError,
                     QuadricSingularError, SingularSampleError)
from .expr import Bin, CurveExpr, Pow, const_node
from .geometry import Ambient, ellipse_descriptor, fundamental_data
from .jets import Vec, graph_surface, split_im, split_re
from .minimal import HolomorphicCurve

# relative floor below which an inversion denominator counts as zero
INV_FLOOR = 1e-13

SIGNATURES = ("euclidean", "lorentzian")

# multiplication by i on R4 = C2 with coordinates paired (x1+ix2, x3+ix4)
J_AMB = np.array([[0.0, -1.0, 0.0, 0.0],
                  [1.0, 0.0, 0.0, 0.0],
                  [0.0, 0.0, 0.0, -1.0],
                  [0.0, 0.0, 1.0, 0.0]])

_E5 = np.eye(5)[4]


@dataclass(frozen=True)
class Inversion:
    """Inversion of flat space in the sphere of given center and radius.

    The euclidean signature inverts R4 or R5 in a round sphere.  The
    lorentzian signature inverts R5 carrying the (+,+,+,+,-) product; there
    the denominator <x - c, x - c> vanishes on a whole cone through the
    center, and the transformed point picks up a minus sign.
    """

    center: np.ndarray
    radius: float = 1.0
    signature: str = "euclidean"

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if self.center.ndim != 1 or len(self.center) not in (4, 5):
            raise PreconditionError("inversion center must be a 4- or 5-vector")
        if not self.radius > 0:
            raise PreconditionError("inversion radius must be positive")
        if self.signature not in SIGNATURES:
            raise PreconditionError(
                f"unknown signature {self.signature!r}; expected one of "
                f"{SIGNATURES}")
        if self.signature == "lorentzian" and len(self.center) != 5:
            raise PreconditionError("lorentzian inversions live in R5")

    @property
    def dim(self):
        return len(self.center)

    def sig(self):
        s = np.ones(self.dim)
        if self.signature == "lorentzian":
            s[-1] = -1.0
        return s

    @property
    def orientation(self):
        """Sign on the radius-squared factor: -1 in the Lorentzian case."""
        return 1.0 if self.signature == "euclidean" else -1.0


def _check_denominator(q, d_values):
    scale = float(np.sum(np.asarray(d_values) ** 2))
    if abs(q) <= INV_FLOOR * max(scale, 1e-300):
        raise InversionSingularError(
            f"point lies on the singular set of the inversion "
            f"(<x - c, x - c> = {q:.3e})")


def invert(x, inv):
    """Image of a point (array) or surface sample (Vec) under the inversion.

    Vec samples are transported with their full second-order jets, so the
    image can be fed straight back into curvature computations."""
    if isinstance(x, Vec):
        if len(x) != inv.dim:
            raise PreconditionError("sample and inversion dimensions disagree")
        sig = tuple(inv.sig())
        center = Vec.of_values(inv.center)
        d = x - center
        q = d.dot(d, signature=sig)
        _check_denominator(q.v, d.values())
        return center + d * ((inv.orientation * inv.radius ** 2) / q)
    x = np.asarray(x, dtype=float)
    if x.shape != (inv.dim,):
        raise PreconditionError("point and inversion dimensions disagree")
    d = x - inv.center
    q = float(np.sum(inv.sig() * d * d))
    _check_denominator(q, d)
    return inv.center + (inv.orientation * inv.radius ** 2 / q) * d


def inversion_differential(x, w, inv):
    """Tangent vector w at x pushed forward through the inversion.

    The differential is the reflection in the hyperplane orthogonal to
    x - c, scaled by the conformal factor radius^2 / <x - c, x - c>."""
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    sig = inv.sig()
    d = x - inv.center
    q = float(np.sum(sig * d * d))
    _check_denominator(q, d)
    refl = w - (2.0 * float(np.sum(sig * w * d)) / q) * d
    return inv.orientation * (inv.radius ** 2 / q) * refl


def _coord_shape_matrix(sample, nu, sig):
    """Shape operator of a Vec sample for the unit normal nu, in the
    coordinate basis, with the flat metric of the given signature."""

    def dot(a, b):
        return float(np.sum(sig * a * b))

    Xu, Xv = sample.du(), sample.dv()
    E, F, G = dot(Xu, Xu), dot(Xu, Xv), dot(Xv, Xv)
    det1 = E * G - F * F
    if not det1 > 1e-12 * max(abs(E * G), 1e-300):
        raise SingularSampleError(
            "sample is not a spacelike immersion; induced metric degenerates")
    B = np.array([[dot(sample.duu(), nu), dot(sample.duv(), nu)],
                  [dot(sample.duv(), nu), dot(sample.dvv(), nu)]])
    return np.linalg.solve(np.array([[E, F], [F, G]]), B)


def normal_transform_check(sample, xi, inv):
    """How a unit normal and its shape operator move through an inversion.

    The reflected normal xi - 2 <xi, x - c> (x - c) / <x - c, x - c> must be
    a unit normal of the inverted sample ("unit", "normal" residuals), and
    the shape operator of the image must equal
    (<x-c, x-c> A_xi + 2 <x-c, xi> Id) / (s radius^2) with s the signature
    orientation ("shape" residual, max entry).  Returns the residual dict
    with a "max" summary.  A tangential or non-unit xi is rejected."""
    sig = inv.sig()
    xi = np.asarray(xi, dtype=float)
    if len(sample) != inv.dim or xi.shape != (inv.dim,):
        raise PreconditionError(
            "sample, normal, and inversion dimensions disagree")

    def dot(a, b):
        return float(np.sum(sig * a * b))

    Xu, Xv = sample.du(), sample.dv()
    unit_defect = abs(dot(xi, xi) - 1.0)
    if unit_defect > 1e-8:
        raise PreconditionError(
            f"xi must be a unit spacelike vector; <xi, xi> = {dot(xi, xi):.6f}")
    tang = max(abs(dot(xi, Xu)) / np.linalg.norm(Xu),
               abs(dot(xi, Xv)) / np.linalg.norm(Xv))
    if tang > 1e-6:
        raise PreconditionError(
            f"xi is not normal to the sample (tangential part {tang:.3e})")

    d = sample.values() - inv.center
    q = dot(d, d)
    _check_denominator(q, d)
    pxi = xi - (2.0 * dot(xi, d) / q) * d
    image = invert(sample, inv)
    iu, iv = image.du(), image.dv()
    res_unit = abs(dot(pxi, pxi) - 1.0)
    res_normal = max(abs(dot(pxi, iu)) / np.linalg.norm(iu),
                     abs(dot(pxi, iv)) / np.linalg.norm(iv))
    A = _coord_shape_matrix(sample, xi, sig)
    A_img = _coord_shape_matrix(image, pxi, sig)
    rhs = (q * A + 2.0 * dot(d, xi) * np.eye(2)) / (
        inv.orientation * inv.radius ** 2)
    res_shape = float(np.max(np.abs(A_img - rhs)))
    out = {"unit": res_unit, "normal": res_normal, "shape": res_shape}
    out["max"] = max(out.values())
    return out


def holomorphic_inversion(Z, radius=1.0):
    """radius^2 Z / <<Z, Z>> with the complex-bilinear square downstairs.

    Sends the quadric of constant level k to the one of level radius^4 / k;
    undefined on the null quadric."""
    Z = np.asarray(Z, dtype=complex)
    k = complex(np.sum(Z * Z))
    scale = float(np.sum(np.abs(Z) ** 2))
    if abs(k) <= INV_FLOOR * max(scale, 1e-300):
        raise QuadricSingularError(
            f"<<Z, Z>> = {k:.3e} vanishes; the quadratic inversion is "
            "undefined on the null quadric")
    return (radius ** 2) * Z / k


def transformed_curve(curve, radius=1.0, center=None, name=None):
    """Holomorphic curve of an inverted pair: r^2 (G - c) / <<G - c, G - c>>.

    The composition is assembled on the expression tree, so the result is an
    ordinary named curve that can be split, certified, and constructed from.
    The center may be complex: its real part shifts the minimal surface and
    its imaginary part the conjugate one.  Points where the shifted curve
    meets the null quadric become poles of the result."""
    comps = curve.expr.ast.components
    if center is None:
        center = np.zeros(len(comps), dtype=complex)
    center = np.asarray(center, dtype=complex)
    if center.shape != (len(comps),):
        raise PreconditionError("center arity does not match the curve")
    shifted = [c if ck == 0 else Bin("-", c, const_node(ck))
               for c, ck in zip(comps, center)]
    quad = reduce(lambda a, b: Bin("+", a, b), [Pow(s, 2) for s in shifted])
    r2 = float(radius) ** 2

    def component(s):
        num = s if r2 == 1.0 else Bin("*", const_node(r2), s)
        return Bin("/", num, quad)

    new = CurveExpr.from_components(
        [component(s) for s in shifted],
        declared_arity=curve.expr.ast.declared_arity)
    return HolomorphicCurve(name or f"{curve.name}-inverted", new, curve.domain)


# -- duality of graph surfaces ------------------------------------------------


def _graph_fields(curve, z):
    """Position and coordinate-derivative fields of the R4 graph of a
    two-component holomorphic map; third-order coefficients of the curve
    feed the second-order jets of the derivative fields."""
    if curve.expr.ast.declared_arity != 2:
        raise PreconditionError(
            f"graph surfaces take two-component curves; {curve.name} "
            f"declares {curve.expr.ast.declared_arity}")
    jets = curve.eval_jets(z)[:2]
    pos = graph_surface(jets)
    sh = [j.shift() for j in jets]
    fu = Vec([split_re(sh[0]), split_im(sh[0]),
              split_re(sh[1]), split_im(sh[1])])
    fv = Vec([-split_im(sh[0]), split_re(sh[0]),
              -split_im(sh[1]), split_re(sh[1])])
    return pos, fu, fv


def _normal_part_fields(w, fu, fv):
    """Component of the field w normal to span{fu, fv}, with jets."""
    E, F, G = fu.dot(fu), fu.dot(fv), fv.dot(fv)
    a, b = _solve2(E, F, G, w.dot(fu), w.dot(fv))
    return w - (fu * a + fv * b)


def _normal_part_values(x, Xu, Xv):
    E, F, G = Xu @ Xu, Xu @ Xv, Xv @ Xv
    a, b = np.linalg.solve(np.array([[E, F], [F, G]]),
                           np.array([x @ Xu, x @ Xv]))
    return x - a * Xu - b * Xv


@dataclass(frozen=True)
class DualityReport:
    z: complex
    value: np.ndarray
    field: Vec
    antiholo: float
    involution: float
    conformality: float


def duality(curve, z):
    """Normal-component dual f^N / (2 ||f^N||^2) of a graph surface.

    The curve must have two components; its R4 graph is dualized at z and
    the defining properties are measured: the dual is anti-holomorphic for
    the paired ambient complex structure, applying it twice returns the
    original point, and its induced metric is conformal.  Undefined where
    the position vector is tangential."""
    pos, fu, fv = _graph_fields(curve, z)
    fN = _normal_part_fields(pos, fu, fv)
    n2 = fN.dot(fN)
    scale = pos.dot(pos).v + fu.dot(fu).v
    if n2.v <= 1e-24 * max(scale, 1e-300):
        raise DualitySingularError(
            f"position vector of {curve.name} is tangential at z = {z}; "
            "the dual is undefined")
    fstar = fN * (0.5 / n2)
    Fu, Fv = fstar.du(), fstar.dv()
    sc = max(np.linalg.norm(Fu), np.linalg.norm(Fv), 1e-300)
    r1 = Fv + J_AMB @ Fu
    r2 = -Fu + J_AMB @ Fv
    antiholo = max(float(np.max(np.abs(r1))), float(np.max(np.abs(r2)))) / sc
    E, F, G = Fu @ Fu, Fu @ Fv, Fv @ Fv
    conformality = max(abs(E - G), 2.0 * abs(F)) / max(E, G, 1e-300)
    FN = _normal_part_values(fstar.values(), Fu, Fv)
    nn = float(FN @ FN)
    if nn <= 1e-24 * max(float(fstar.values() @ fstar.values()), 1e-300):
        raise DualitySingularError(
            f"dual of {curve.name} is itself tangential at z = {z}")
    second = FN / (2.0 * nn)
    involution = float(np.linalg.norm(second - pos.values()))
    return DualityReport(z=complex(z), value=fstar.values(), field=fstar,
                         antiholo=antiholo, involution=involution,
                         conformality=conformality)


def inversion_pair_of_holomorphic(curve, inv, z):
    """Conjugate pair of an inverted graph surface, in closed form.

    For a two-component holomorphic curve with graph f, the minimal pair
    attached to the inversion of f is
    g = c + r^2 (f-c)^N / (2 ||(f-c)^N||^2) and h = J g-part, where the
    normal plane is rotated by the ambient complex structure.  The
    orientation of that rotation is fixed so the recovered pair matches the
    catalog closed forms for the Whitney-type graph; the opposite choice
    merely flips h.  Returns (g, h) values."""
    if inv.signature != "euclidean" or inv.dim != 4:
        raise PreconditionError("pair inversion works in euclidean R4")
    pos, fu, fv = _graph_fields(curve, z)
    d = pos - Vec.of_values(inv.center)
    dN = _normal_part_fields(d, fu, fv)
    n2 = dN.dot(dN).v
    scale = d.dot(d).v + fu.dot(fu).v
    if n2 <= 1e-24 * max(scale, 1e-300):
        raise InversionSingularError(
            f"normal component of f - c vanishes at z = {z}; the inverted "
            "pair is undefined")
    r2 = inv.radius ** 2
    g = inv.center + r2 * dN.values() / (2.0 * n2)
    h = r2 * (J_AMB @ dN.values()) / (2.0 * n2)
    return g, h


# -- pair transformation ------------------------------------------------------


@dataclass(frozen=True)
class PairTransformReport:
    sup_g: float
    sup_h: float
    h_convention: str
    n_points: int
    n_skipped: int

    @property
    def sup(self):
        return max(self.sup_g, self.sup_h)


def pair_transform_check(pair, inv, points):
    """Dual-route check that inversion acts on pairs through their curve.

    Route one builds the constructed surfaces of the pair, inverts each
    sample with full jets, and extracts the dual pair of the image.  Route
    two splits the quadratic inversion of the curve itself.  Both routes
    must produce the same pair.  The extracted conjugate member flips with
    the orientation of the image's adapted frame, so it is normalized by
    the recorded orientation first; the one remaining global sign is scored
    both ways and the better convention reported.  Pairs whose shifted
    curve lies on the null quadric are rejected (the collapse picture
    applies to them instead)."""
    if inv.signature != "euclidean" or inv.dim != 4:
        raise PreconditionError("pair transformation works in euclidean R4")
    pts = list(points)
    if not pts:
        raise PreconditionError("no sample points given")

    center_eff = inv.center.astype(complex) - 1j * pair.h_offset
    qmax, qscale = 0.0, 1e-300
    for z in pts:
        w = pair.curve.eval(z) - center_eff
        qmax = max(qmax, abs(complex(np.sum(w * w))))
        qscale = max(qscale, float(np.sum(np.abs(w) ** 2)))
    if qmax <= 1e-8 * qscale:
        raise PreconditionError(
            f"curve of {pair.name} shifted by the center lies on the null "
            "quadric; the quadratic inversion degenerates there")

    tcurve = transformed_curve(pair.curve, inv.radius, center=center_eff)
    sup_g, d_plus, d_minus = 0.0, 0.0, 0.0
    used, skipped = 0, 0
    for z in pts:
        try:
            built = build_phi_pair(pair, z)
        except (FrameDegenerateError, SingularSampleError):
            skipped += 1
            continue
        w = tcurve.eval(z)
        g_curve = inv.center + w.real
        h_curve = w.imag
        for ps in built:
            if ps.flags.bitmask:
                skipped += 1
                continue
            try:
                image = invert(ps.phi, inv)
                ext = extract_minimal_pair(image)
            except (InversionSingularError, FrameUndefinedError,
                    SingularSampleError):
                skipped += 1
                continue
            used += 1
            h_ext = ext.zeta_orientation * ext.h
            sup_g = max(sup_g, float(np.linalg.norm(ext.g - g_curve)))
            d_plus = max(d_plus, float(np.linalg.norm(h_ext - h_curve)))
            d_minus = max(d_minus, float(np.linalg.norm(h_ext + h_curve)))
    if used == 0:
        raise PreconditionError("every sample point was degenerate")
    if d_minus <= d_plus:
        convention, sup_h = "-", d_minus
    else:
        convention, sup_h = "+", d_plus
    return PairTransformReport(sup_g=sup_g, sup_h=sup_h,
                               h_convention=convention,
                               n_points=used, n_skipped=skipped)


# -- complex structure of null-quadric pairs ----------------------------------


@dataclass(frozen=True)
class ComplexStructureReport:
    matrix: np.ndarray
    rank: int
    square_residual: float
    orthogonality_residual: float
    fit_residual: float
    constancy_residual: float


def recover_complex_structure(pair, points):
    """Constant complex structure J with J g = h and J g_* = g_* i.

    Only pairs whose curve lies on the null quadric admit one; others raise
    NotNullCurveError.  J is found by least squares over the sampled data
    span; when that span is only two-dimensional the structure on the
    orthogonal complement is completed canonically (the two trailing right
    singular vectors, sign-normalized, are rotated into each other), so the
    returned matrix is always a genuine orthogonal complex structure.

    fit_residual is the root-mean-square equation misfit; the constancy
    residual is the worst single-point misfit, certifying that one constant
    matrix serves the whole grid."""
    pts = list(points)
    if not pts:
        raise PreconditionError("no sample points given")
    eqs, per_point = [], []
    qmax, qscale = 0.0, 1.0
    for z in pts:
        s = pair.samples_at(z)
        g, h = s.g.values(), s.h.values()
        gu, gv = s.g_u.values(), s.g_v.values()
        qmax = max(qmax, abs((g @ g - h @ h) + 2j * (g @ h)))
        qscale = max(qscale, g @ g + h @ h)
        point_eqs = [(g, h), (gu, -gv), (gv, gu)]
        eqs.extend(point_eqs)
        per_point.append(point_eqs)
    if qmax > 1e-8 * qscale:
        raise NotNullCurveError(
            f"curve of {pair.name} leaves the null quadric "
            f"(max |<<G, G>>| = {qmax:.3e}); no constant complex structure "
            "pairs g with h")

    A = np.zeros((4 * len(eqs), 16))
    b = np.zeros(4 * len(eqs))
    for r, (x, y) in enumerate(eqs):
        for i in range(4):
            A[4 * r + i, 4 * i:4 * i + 4] = x
            b[4 * r + i] = y[i]
    m, *_ = np.linalg.lstsq(A, b, rcond=None)
    J = m.reshape(4, 4)

    data = np.array([x for x, _ in eqs] + [y for _, y in eqs])
    sv = np.linalg.svd(data, compute_uv=False)
    rank = int(np.sum(sv > 1e-9 * max(sv[0], 1e-300)))
    if rank == 2:
        _, _, vt = np.linalg.svd(data)
        w1, w2 = vt[2], vt[3]
        # sign-normalize so the completion does not depend on SVD phase
        if w1[np.argmax(np.abs(w1))] < 0:
            w1 = -w1
        if w2[np.argmax(np.abs(w2))] < 0:
            w2 = -w2
        J = J + np.outer(w2, w1) - np.outer(w1, w2)

    xscale = np.sqrt(max(float(x @ x) for x, _ in eqs))
    xscale = max(xscale, 1e-300)
    misfits = []
    point_worst = []
    for point_eqs in per_point:
        worst = 0.0
        for x, y in point_eqs:
            r = float(np.linalg.norm(J @ x - y)) / xscale
            misfits.append(r)
            worst = max(worst, r)
        point_worst.append(worst)
    return ComplexStructureReport(
        matrix=J,
        rank=rank,
        square_residual=float(np.max(np.abs(J @ J + np.eye(4)))),
        orthogonality_residual=float(np.max(np.abs(J.T @ J - np.eye(4)))),
        fit_residual=float(np.sqrt(np.mean(np.square(misfits)))),
        constancy_residual=float(np.max(point_worst)))


@dataclass(frozen=True)
class CollapseReport:
    collapsed_sign: str
    center: np.ndarray
    variation: float
    companion_residual: float
    structure: ComplexStructureReport


def degenerate_collapse_check(pair, points):
    """For a null-quadric pair: one constructed surface sits at a point and
    the other doubles the normal component of the minimal surface.

    Requires the constant complex structure to exist (same precondition as
    recover_complex_structure).  Reports which sign collapsed, the constant
    value with its variation across the grid, and the worst distance of the
    companion surface from 2 g^N."""
    pts = list(points)
    structure = recover_complex_structure(pair, pts)
    vals = {s: [] for s in SIGNS}
    companion = {s: 0.0 for s in SIGNS}
    for z in pts:
        built = build_phi_pair(pair, z)
        smp = pair.samples_at(z)
        fd = fundamental_data(smp.g)
        gN = _normal_part_values(smp.g.values(), fd.Xu, fd.Xv)
        for ps in built:
            vals[ps.sign].append(ps.phi.values())
            companion[ps.sign] = max(
                companion[ps.sign],
                float(np.linalg.norm(ps.phi.values() - 2.0 * gN)))
    variation = {
        s: max(float(np.linalg.norm(v - vals[s][0])) for v in vals[s])
        for s in SIGNS}
    collapsed = "+" if variation["+"] <= variation["-"] else "-"
    other = "-" if collapsed == "+" else "+"
    center = np.mean(np.array(vals[collapsed]), axis=0)
    return CollapseReport(collapsed_sign=collapsed, center=center,
                          variation=variation[collapsed],
                          companion_residual=companion[other],
                          structure=structure)


# -- stereographic bridges ----------------------------------------------------


@dataclass(frozen=True)
class Stereographic:
    """Stereographic bridge between a space form and flat R4.

    The round sphere of radius r centered at r e5 maps by restricting the
    R5 inversion centered at 2 r e5 with radius 2 r; the origin is a fixed
    point.  The hyperbolic space (the sheet through the origin of the
    Lorentzian hyperboloid centered at -r e5) maps along straight lines
    through -2 r e5 onto the open ball of radius 2 r."""

    radius: float = 1.0
    space: str = "sphere"

    def __post_init__(self):
        if self.space not in ("sphere", "hyperbolic"):
            raise PreconditionError(f"unknown space form {self.space!r}")
        if not self.radius > 0:
            raise PreconditionError("space-form radius must be positive")

    @property
    def ambient(self):
        return Ambient(self.space, radius=self.radius)

    def _check_on_manifold(self, P):
        amb = self.ambient
        d = P - amb.center_vec()
        res = amb.on_manifold_residual(P)
        if res > 1e-9 * max(1.0, float(d @ d)):
            raise ProjectionError(
                f"point is off the {self.space} space form "
                f"(residual {res:.3e})")

    def to_R4(self, P):
        P = np.asarray(P, dtype=float)
        if P.shape != (5,):
            raise PreconditionError("space-form points are 5-vectors")
        self._check_on_manifold(P)
        r = self.radius
        if self.space == "sphere":
            c = 2.0 * r * _E5
            d = P - c
            q = float(d @ d)
            if q <= INV_FLOOR * max(1.0, r * r):
                raise ProjectionError(
                    "the point opposite the image plane has no image")
            return (c + (4.0 * r * r / q) * d)[:4]
        den = P[4] + 2.0 * r
        if den <= INV_FLOOR * max(1.0, r):
            raise ProjectionError(
                "point sits on the wrong sheet of the hyperboloid")
        return (2.0 * r / den) * P[:4]

    def from_R4(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (4,):
            raise PreconditionError("flat points are 4-vectors")
        r = self.radius
        if self.space == "sphere":
            c = 2.0 * r * _E5
            d = np.append(x, 0.0) - c
            return c + (4.0 * r * r / float(d @ d)) * d
        n2 = float(x @ x)
        if n2 >= 4.0 * r * r:
            raise ProjectionError(
                f"the hyperbolic model fills the open ball of radius "
                f"{2.0 * r:g}; |x| = {np.sqrt(n2):.6g} falls outside")
        s = 4.0 * r * r / (4.0 * r * r - n2)
        return np.append(s * x, 2.0 * r * (s - 1.0))


@dataclass(frozen=True)
class SpaceFormReport:
    max_mean_curvature: float
    max_circularity: float
    max_mu: float
    min_mu: float
    degenerate: bool
    verdict: str
    n_points: int


def superminimal_test(surface, ambient, points, h_tol=1e-9, circ_tol=1e-8):
    """Minimality plus curvature-circle roundness for a space-form immersion.

    surface maps (u, v) to a 5-component Vec whose values must lie on the
    space form; off-manifold samples raise ProjectionError.  Totally
    umbilic immersions carry a point circle at every sample; they pass
    vacuously and the verdict says so."""
    worst_H, worst_circ = 0.0, 0.0
    mus = []
    for u, v in points:
        smp = surface(u, v)
        res = ambient.on_manifold_residual(smp.values())
        if res > 1e-9 * max(1.0, ambient.radius ** 2):
            raise ProjectionError(
                f"sample at ({u:g}, {v:g}) is off the {ambient.kind} "
                f"space form (residual {res:.3e})")
        fd = fundamental_data(smp, ambient)
        ed = ellipse_descriptor(fd)
        worst_H = max(worst_H, fd.lam)
        worst_circ = max(worst_circ, abs(ed.res_orth), abs(ed.res_len))
        mus.append(ed.mu)
    if not mus:
        raise PreconditionError("no sample points given")
    degenerate = max(mus) <= 1e-9 * (1.0 + worst_H)
    minimal = worst_H <= h_tol
    if minimal and degenerate:
        verdict = "superminimal-degenerate"
    elif minimal and worst_circ <= circ_tol:
        verdict = "superminimal"
    elif minimal:
        verdict = "minimal-not-superminimal"
    else:
        verdict = "not-minimal"
    return SpaceFormReport(max_mean_curvature=worst_H,
                           max_circularity=worst_circ,
                           max_mu=max(mus), min_mu=min(mus),
                           degenerate=degenerate, verdict=verdict,
                           n_points=len(mus))


# -- quadric classification ---------------------------------------------------


@dataclass(frozen=True)
class QuadricClassification:
    kind: str
    mean: complex
    max_deviation: float
    k: float | None = None
    radius: float | None = None
    sign: int | None = None
    cross_validation: dict | None = None


def quadric_classification(pair_like, points, immersion=None, ambient=None):
    """Classify the complex square <<G, G>> of a conjugate pair on a grid.

    Kinds: "non-constant"; "null" (identically zero, the collapse picture);
    "constant-real" (the pair belongs to a space form of radius
    sqrt(|k|) / 2, and the sign of k is kept in the report); and
    "constant-complex".  pair_like needs sample_g / sample_h; closed-form
    sample pairs qualify alongside split curves.

    For the constant-real kind a space-form immersion over the same chart
    may be supplied.  It is then run through the minimality-and-roundness
    test, and the surfaces constructed from the pair are compared against
    the stereographic image of the immersion (best of the two signs)."""
    pts = list(points)
    if not pts:
        raise PreconditionError("no sample points given")
    gs, hs, vals = [], [], []
    scale = 1.0
    for z in pts:
        g = pair_like.sample_g(z)
        h = pair_like.sample_h(z)
        gv, hv = g.values(), h.values()
        vals.append(complex((gv @ gv - hv @ hv) + 2j * (gv @ hv)))
        scale = max(scale, float(gv @ gv + hv @ hv))
        gs.append(g)
        hs.append(h)
    vals = np.array(vals)
    mean = complex(vals.mean())
    dev = float(np.max(np.abs(vals - mean)))
    if dev > 1e-8 * (1.0 + abs(mean)):
        return QuadricClassification("non-constant", mean, dev)
    if abs(mean) <= 1e-8 * scale:
        return QuadricClassification("null", mean, dev)
    if abs(mean.imag) > 1e-8 * (1.0 + abs(mean)):
        return QuadricClassification("constant-complex", mean, dev)

    k = float(mean.real)
    radius = float(np.sqrt(abs(k)) / 2.0)
    sign = 1 if k > 0 else -1
    cross = None
    if immersion is not None:
        amb = ambient if ambient is not None else Ambient("sphere",
                                                          radius=radius)
        bridge = Stereographic(radius=amb.radius, space=amb.kind)
        form = superminimal_test(immersion, amb,
                                 [(z.real, z.imag) for z in pts])
        sup = {s: 0.0 for s in SIGNS}
        for z, g, h in zip(pts, gs, hs, strict=True):
            proj = bridge.to_R4(immersion(z.real, z.imag).values())
            for s in SIGNS:
                phi = phi_value(g, h, s)
                sup[s] = max(sup[s], float(np.linalg.norm(phi - proj)))
        best = "+" if sup["+"] <= sup["-"] else "-"
        cross = {"space_form": form,
                 "surface_residual": sup[best],
                 "surface_sign": best,
                 "radius_matches": abs(amb.radius - radius)
                 <= 1e-8 * (1.0 + radius)}
    return QuadricClassification("constant-real", mean, dev, k=k,
                                 radius=radius, sign=sign,
                                 cross_validation=cross)
