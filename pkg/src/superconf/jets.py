"""Exact differentiation substrate.

ComplexJet carries (f, f', f'', f''') of a holomorphic function at a point of
the z = u + iv parameter plane; Jet2 carries (value, du, dv, duu, duv, dvv) of
a real function of (u, v).  split_re / split_im convert the first into the
second through the Cauchy-Riemann relations, slot by slot and exactly.  The
third holomorphic order exists so that the first-derivative fields g_u, g_v
can themselves be seeded as full Jet2 data.  Nothing downstream differentiates
numerically; finite differences appear only in fd_crosscheck, the independent
referee.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import BranchCutError, DegenerateJetError

DIV_FLOOR = 1e-13

_SCALARS = (int, float, complex)


class ComplexJet:
    """Value and first three derivatives of a holomorphic function at a point.

    Slots hold derivative values, not Taylor coefficients; the product rule is
    the Leibniz rule with binomial weights.
    """

    __slots__ = ("c0", "c1", "c2", "c3")

    def __init__(self, c0, c1=0j, c2=0j, c3=0j):
        self.c0 = complex(c0)
        self.c1 = complex(c1)
        self.c2 = complex(c2)
        self.c3 = complex(c3)

    @property
    def coeffs(self):
        return (self.c0, self.c1, self.c2, self.c3)

    @staticmethod
    def constant(c):
        return ComplexJet(c, 0, 0, 0)

    @staticmethod
    def variable(z):
        return ComplexJet(z, 1, 0, 0)

    def __repr__(self):
        return f"ComplexJet{self.coeffs!r}"

    def __eq__(self, other):
        if not isinstance(other, ComplexJet):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if isinstance(other, _SCALARS):
            return ComplexJet(self.c0 + other, self.c1, self.c2, self.c3)
        if isinstance(other, ComplexJet):
            return ComplexJet(self.c0 + other.c0, self.c1 + other.c1,
                              self.c2 + other.c2, self.c3 + other.c3)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return ComplexJet(-self.c0, -self.c1, -self.c2, -self.c3)

    def __sub__(self, other):
        if isinstance(other, _SCALARS):
            return ComplexJet(self.c0 - other, self.c1, self.c2, self.c3)
        if isinstance(other, ComplexJet):
            return ComplexJet(self.c0 - other.c0, self.c1 - other.c1,
                              self.c2 - other.c2, self.c3 - other.c3)
        return NotImplemented

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            return ComplexJet(self.c0 * other, self.c1 * other,
                              self.c2 * other, self.c3 * other)
        if not isinstance(other, ComplexJet):
            return NotImplemented
        f0, f1, f2, f3 = self.coeffs
        g0, g1, g2, g3 = other.coeffs
        return ComplexJet(
            f0 * g0,
            f1 * g0 + f0 * g1,
            f2 * g0 + 2 * f1 * g1 + f0 * g2,
            f3 * g0 + 3 * f2 * g1 + 3 * f1 * g2 + f0 * g3,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            other = ComplexJet.constant(other)
        if not isinstance(other, ComplexJet):
            return NotImplemented
        g0, g1, g2, g3 = other.coeffs
        mag = abs(g0)
        if mag <= DIV_FLOOR:
            raise DegenerateJetError(
                f"jet division floor: |denominator| = {mag:.3e}", magnitude=mag)
        f0, f1, f2, f3 = self.coeffs
        q0 = f0 / g0
        q1 = (f1 - q0 * g1) / g0
        q2 = (f2 - 2 * q1 * g1 - q0 * g2) / g0
        q3 = (f3 - 3 * q2 * g1 - 3 * q1 * g2 - q0 * g3) / g0
        return ComplexJet(q0, q1, q2, q3)

    def __rtruediv__(self, other):
        return ComplexJet.constant(other).__truediv__(self)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return ComplexJet.constant(1) / self.__pow__(-n)
        out = ComplexJet.constant(1)
        base = self
        k = n
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self):
        """Jet of the derivative.  The third slot of the result is unknown and
        stored as 0; consumers may only rely on orders 0..2."""
        return ComplexJet(self.c1, self.c2, self.c3, 0)

    def _compose(self, d0, d1, d2, d3):
        g1, g2, g3 = self.c1, self.c2, self.c3
        return ComplexJet(
            d0,
            d1 * g1,
            d2 * g1 * g1 + d1 * g2,
            d3 * g1 ** 3 + 3 * d2 * g1 * g2 + d1 * g3,
        )

    def exp(self):
        e = cmath.exp(self.c0)
        return self._compose(e, e, e, e)

    def log(self):
        w = self.c0
        mag = abs(w)
        if mag <= DIV_FLOOR:
            raise DegenerateJetError(
                f"log at magnitude floor: |z| = {mag:.3e}", magnitude=mag)
        if w.real < 0 and abs(w.imag) <= 1e-13 * mag:
            raise BranchCutError(f"log evaluated on the branch cut at {w}")
        iw = 1 / w
        return self._compose(cmath.log(w), iw, -iw * iw, 2 * iw ** 3)

    def sqrt(self):
        w = self.c0
        mag = abs(w)
        if mag <= DIV_FLOOR:
            raise DegenerateJetError(
                f"sqrt at magnitude floor: |z| = {mag:.3e}", magnitude=mag)
        if w.real < 0 and abs(w.imag) <= 1e-13 * mag:
            raise BranchCutError(f"sqrt evaluated on the branch cut at {w}")
        s = cmath.sqrt(w)
        return self._compose(s, 0.5 / s, -0.25 / (w * s), 0.375 / (w * w * s))

    def sin(self):
        s, c = cmath.sin(self.c0), cmath.cos(self.c0)
        return self._compose(s, c, -s, -c)

    def cos(self):
        s, c = cmath.sin(self.c0), cmath.cos(self.c0)
        return self._compose(c, -s, -c, s)

    def sinh(self):
        s, c = cmath.sinh(self.c0), cmath.cosh(self.c0)
        return self._compose(s, c, s, c)

    def cosh(self):
        s, c = cmath.sinh(self.c0), cmath.cosh(self.c0)
        return self._compose(c, s, c, s)


class Jet2:
    """Second-order jet of a real function of (u, v).

    duv is stored once; symmetry of mixed partials is structural.
    """

    __slots__ = ("v", "du", "dv", "duu", "duv", "dvv")

    def __init__(self, v, du=0.0, dv=0.0, duu=0.0, duv=0.0, dvv=0.0):
        self.v = float(v)
        self.du = float(du)
        self.dv = float(dv)
        self.duu = float(duu)
        self.duv = float(duv)
        self.dvv = float(dvv)

    @property
    def slots(self):
        return (self.v, self.du, self.dv, self.duu, self.duv, self.dvv)

    @staticmethod
    def constant(x):
        return Jet2(x)

    @staticmethod
    def coordinate_u(u):
        return Jet2(u, 1.0, 0.0)

    @staticmethod
    def coordinate_v(v):
        return Jet2(v, 0.0, 1.0)

    def __repr__(self):
        return f"Jet2{self.slots!r}"

    def __eq__(self, other):
        if not isinstance(other, Jet2):
            return NotImplemented
        return self.slots == other.slots

    def __hash__(self):
        return hash(self.slots)

    def __add__(self, other):
        if isinstance(other, (int, float)):
            return Jet2(self.v + other, self.du, self.dv,
                        self.duu, self.duv, self.dvv)
        if isinstance(other, Jet2):
            return Jet2(self.v + other.v, self.du + other.du,
                        self.dv + other.dv, self.duu + other.duu,
                        self.duv + other.duv, self.dvv + other.dvv)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.v, -self.du, -self.dv, -self.duu, -self.duv, -self.dvv)

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            return Jet2(self.v - other, self.du, self.dv,
                        self.duu, self.duv, self.dvv)
        if isinstance(other, Jet2):
            return Jet2(self.v - other.v, self.du - other.du,
                        self.dv - other.dv, self.duu - other.duu,
                        self.duv - other.duv, self.dvv - other.dvv)
        return NotImplemented

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Jet2(self.v * other, self.du * other, self.dv * other,
                        self.duu * other, self.duv * other, self.dvv * other)
        if not isinstance(other, Jet2):
            return NotImplemented
        a, b = self, other
        return Jet2(
            a.v * b.v,
            a.du * b.v + a.v * b.du,
            a.dv * b.v + a.v * b.dv,
            a.duu * b.v + 2 * a.du * b.du + a.v * b.duu,
            a.duv * b.v + a.du * b.dv + a.dv * b.du + a.v * b.duv,
            a.dvv * b.v + 2 * a.dv * b.dv + a.v * b.dvv,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return self * (1.0 / other)
        if not isinstance(other, Jet2):
            return NotImplemented
        b = other
        mag = abs(b.v)
        if mag <= DIV_FLOOR:
            raise DegenerateJetError(
                f"jet division floor: |denominator| = {mag:.3e}", magnitude=mag)
        q0 = self.v / b.v
        q_du = (self.du - q0 * b.du) / b.v
        q_dv = (self.dv - q0 * b.dv) / b.v
        q_duu = (self.duu - q0 * b.duu - 2 * q_du * b.du) / b.v
        q_duv = (self.duv - q0 * b.duv - q_du * b.dv - q_dv * b.du) / b.v
        q_dvv = (self.dvv - q0 * b.dvv - 2 * q_dv * b.dv) / b.v
        return Jet2(q0, q_du, q_dv, q_duu, q_duv, q_dvv)

    def __rtruediv__(self, other):
        return Jet2.constant(other).__truediv__(self)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return Jet2.constant(1.0) / self.__pow__(-n)
        out = Jet2.constant(1.0)
        base = self
        k = n
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def recip(self):
        return Jet2.constant(1.0) / self

    def _compose(self, d0, d1, d2):
        g = self
        return Jet2(
            d0,
            d1 * g.du,
            d1 * g.dv,
            d2 * g.du * g.du + d1 * g.duu,
            d2 * g.du * g.dv + d1 * g.duv,
            d2 * g.dv * g.dv + d1 * g.dvv,
        )

    def sqrt(self):
        if self.v <= DIV_FLOOR:
            raise DegenerateJetError(
                f"sqrt of jet at floor: value = {self.v:.3e}", magnitude=self.v)
        s = math.sqrt(self.v)
        return self._compose(s, 0.5 / s, -0.25 / (self.v * s))

    def exp(self):
        e = math.exp(self.v)
        return self._compose(e, e, e)

    def log(self):
        if self.v <= DIV_FLOOR:
            raise BranchCutError(f"log of non-positive jet value {self.v:.3e}")
        iv = 1.0 / self.v
        return self._compose(math.log(self.v), iv, -iv * iv)

    def sin(self):
        return self._compose(math.sin(self.v), math.cos(self.v), -math.sin(self.v))

    def cos(self):
        return self._compose(math.cos(self.v), -math.sin(self.v), -math.cos(self.v))

    def sinh(self):
        return self._compose(math.sinh(self.v), math.cosh(self.v), math.sinh(self.v))

    def cosh(self):
        return self._compose(math.cosh(self.v), math.sinh(self.v), math.cosh(self.v))

    def reparam_rot(self, c, s):
        """Jet of the same function precomposed with the parameter rotation
        (w1, w2) -> (c w1 - s w2, s w1 + c w2) about the base point."""
        du = c * self.du + s * self.dv
        dv = -s * self.du + c * self.dv
        duu = c * c * self.duu + 2 * c * s * self.duv + s * s * self.dvv
        duv = -c * s * self.duu + (c * c - s * s) * self.duv + c * s * self.dvv
        dvv = s * s * self.duu - 2 * c * s * self.duv + c * c * self.dvv
        return Jet2(self.v, du, dv, duu, duv, dvv)


class Vec:
    """Tuple of Jet2 components; the surface-sample container.

    4 components for ambient R4 work, 5 for space-form work.  An optional
    signature on dot/norm selects the Lorentzian product (+,+,+,+,-).
    """

    __slots__ = ("c",)

    def __init__(self, components):
        self.c = [x if isinstance(x, Jet2) else Jet2(x) for x in components]

    @staticmethod
    def zeros(n):
        return Vec([Jet2(0.0) for _ in range(n)])

    @staticmethod
    def of_values(values):
        return Vec([Jet2(float(x)) for x in values])

    def __len__(self):
        return len(self.c)

    def __getitem__(self, i):
        return self.c[i]

    def __iter__(self):
        return iter(self.c)

    def __repr__(self):
        return f"Vec({self.c!r})"

    def __add__(self, other):
        if not isinstance(other, Vec):
            return NotImplemented
        return Vec([a + b for a, b in zip(self.c, other.c, strict=True)])

    def __sub__(self, other):
        if not isinstance(other, Vec):
            return NotImplemented
        return Vec([a - b for a, b in zip(self.c, other.c, strict=True)])

    def __neg__(self):
        return Vec([-a for a in self.c])

    def __mul__(self, scalar):
        if isinstance(scalar, (int, float, Jet2)):
            return Vec([a * scalar for a in self.c])
        return NotImplemented

    __rmul__ = __mul__

    def dot(self, other, signature=None):
        if signature is None:
            signature = (1.0,) * len(self.c)
        acc = Jet2(0.0)
        for s, a, b in zip(signature, self.c, other.c, strict=True):
            term = a * b
            acc = acc + (term if s == 1.0 or s == 1 else term * float(s))
        return acc

    def norm(self, signature=None):
        return self.dot(self, signature).sqrt()

    def values(self):
        return np.array([a.v for a in self.c])

    def du(self):
        return np.array([a.du for a in self.c])

    def dv(self):
        return np.array([a.dv for a in self.c])

    def duu(self):
        return np.array([a.duu for a in self.c])

    def duv(self):
        return np.array([a.duv for a in self.c])

    def dvv(self):
        return np.array([a.dvv for a in self.c])

    def transform(self, matrix):
        """Apply a constant linear map to the component tuple, slot-wise."""
        m = np.asarray(matrix, dtype=float)
        out = []
        for i in range(m.shape[0]):
            acc = Jet2(0.0)
            for j, comp in enumerate(self.c):
                coef = m[i, j]
                if coef != 0.0:
                    acc = acc + comp * float(coef)
            out.append(acc)
        return Vec(out)

    def reparam_rot(self, c, s):
        return Vec([a.reparam_rot(c, s) for a in self.c])


def split_re(cj):
    """Jet2 of Re f for a holomorphic jet, via the Cauchy-Riemann relations."""
    return Jet2(cj.c0.real, cj.c1.real, -cj.c1.imag,
                cj.c2.real, -cj.c2.imag, -cj.c2.real)


def split_im(cj):
    """Jet2 of Im f for a holomorphic jet."""
    return Jet2(cj.c0.imag, cj.c1.imag, cj.c1.real,
                cj.c2.imag, cj.c2.real, -cj.c2.imag)


def seed_surface(jets):
    """Split component jets of a holomorphic curve into the conjugate pair of
    real Jet2 bundles (g, h) = (Re, Im)."""
    return (Vec([split_re(j) for j in jets]),
            Vec([split_im(j) for j in jets]))


def seed_first_derivative_fields(jets):
    """Full Jet2 data of the fields g_u and g_v.

    Uses the third holomorphic order: the field u -> Re F'(z) is seeded from
    the shifted jet, and g_v from i times it since dF/dv = iF'.
    """
    g_u = Vec([split_re(j.shift()) for j in jets])
    g_v = Vec([split_re(j.shift() * 1j) for j in jets])
    return g_u, g_v


def graph_surface(jets):
    """Vec of the real surface under a C^2 graph curve (w1(z), w2(z)):
    components (Re w1, Im w1, Re w2, Im w2)."""
    j1, j2 = jets[0], jets[1]
    return Vec([split_re(j1), split_im(j1), split_re(j2), split_im(j2)])


def holo_eval(curve, z):
    """Evaluate a holomorphic curve to its list of component ComplexJets.

    Accepts anything exposing eval_jets(z) (parsed curves, catalog entries) or
    a plain callable z -> list of ComplexJet.
    """
    ev = getattr(curve, "eval_jets", None)
    if ev is not None:
        return ev(z)
    if callable(curve):
        return curve(z)
    raise TypeError(f"cannot jet-evaluate object of type {type(curve)!r}")


def _fd_values(surface, u, v):
    out = surface(u, v)
    if isinstance(out, Vec):
        return out.values()
    if isinstance(out, Jet2):
        return np.array([out.v])
    return np.asarray(out, dtype=float)


def fd_crosscheck(surface, p, step=1e-4):
    """Compare jet-carried first and second partials against fourth-order
    central differences on a 5x5 stencil.

    surface: callable (u, v) -> Vec or Jet2.  Returns a dict with the largest
    absolute deviation per derivative order and overall.  Any domain failure
    raised by the surface propagates.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    u0, v0 = p
    h = float(step)
    center = surface(u0, v0)
    if isinstance(center, Jet2):
        jet_du, jet_dv = np.array([center.du]), np.array([center.dv])
        jet_duu, jet_duv, jet_dvv = (np.array([center.duu]),
                                     np.array([center.duv]),
                                     np.array([center.dvv]))
        f00 = np.array([center.v])
    else:
        jet_du, jet_dv = center.du(), center.dv()
        jet_duu, jet_duv, jet_dvv = center.duu(), center.duv(), center.dvv()
        f00 = center.values()

    F = {}
    for i in (-2, -1, 0, 1, 2):
        for j in (-2, -1, 0, 1, 2):
            if i == 0 and j == 0:
                F[i, j] = f00
            elif i == 0 or j == 0 or abs(i) == abs(j):
                F[i, j] = _fd_values(surface, u0 + i * h, v0 + j * h)

    fd_du = (-F[2, 0] + 8 * F[1, 0] - 8 * F[-1, 0] + F[-2, 0]) / (12 * h)
    fd_dv = (-F[0, 2] + 8 * F[0, 1] - 8 * F[0, -1] + F[0, -2]) / (12 * h)
    fd_duu = (-F[2, 0] + 16 * F[1, 0] - 30 * F[0, 0]
              + 16 * F[-1, 0] - F[-2, 0]) / (12 * h * h)
    fd_dvv = (-F[0, 2] + 16 * F[0, 1] - 30 * F[0, 0]
              + 16 * F[0, -1] - F[0, -2]) / (12 * h * h)
    cross_h = (F[1, 1] - F[1, -1] - F[-1, 1] + F[-1, -1]) / (4 * h * h)
    cross_2h = (F[2, 2] - F[2, -2] - F[-2, 2] + F[-2, -2]) / (16 * h * h)
    fd_duv = (4 * cross_h - cross_2h) / 3

    first = max(np.max(np.abs(fd_du - jet_du)), np.max(np.abs(fd_dv - jet_dv)))
    second = max(np.max(np.abs(fd_duu - jet_duu)),
                 np.max(np.abs(fd_duv - jet_duv)),
                 np.max(np.abs(fd_dvv - jet_dvv)))
    return {"first": float(first), "second": float(second),
            "max": float(max(first, second))}
