"""Minimal surfaces in R4 presented as conjugate pairs.

A holomorphic curve G on a plane domain splits into g = Re G and h = Im G.
Both are (branched) minimal surfaces whenever G' is isotropic for the bilinear
complex product, and they satisfy the conjugacy relations h_u = -g_v,
h_v = g_u.  Everything downstream consumes the pair through SplitSample, which
carries exact second-order jets of g, h and of the first-derivative fields.

The complex structure convention is fixed once: rotating the parameter plane
by +90 degrees sends d/du to -d/dv and d/dv to d/du on the g surface.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .errors import DomainError, PreconditionError
from .expr import Bin, Curve, CurveExpr, const_node
from .jets import Vec, seed_first_derivative_fields, seed_surface


@dataclass(frozen=True)
class Domain:
    """Open parameter rectangle with optional excluded closed discs."""

    u_min: float
    u_max: float
    v_min: float
    v_max: float
    excluded: tuple = ()

    def __post_init__(self):
        if not (self.u_min < self.u_max and self.v_min < self.v_max):
            raise ValueError("domain rectangle is empty")

    def contains(self, z):
        z = complex(z)
        if not (self.u_min <= z.real <= self.u_max
                and self.v_min <= z.imag <= self.v_max):
            return False
        for center, radius in self.excluded:
            if abs(z - complex(center)) <= radius:
                return False
        return True

    def linspace(self, nu, nv, margin=0.0):
        du = margin * (self.u_max - self.u_min)
        dv = margin * (self.v_max - self.v_min)
        return (np.linspace(self.u_min + du, self.u_max - du, nu),
                np.linspace(self.v_min + dv, self.v_max - dv, nv))

    def grid(self, nu, nv, margin=0.0):
        """Contained grid points as complex numbers, u varying slowest."""
        us, vs = self.linspace(nu, nv, margin)
        return [complex(u, v) for u in us for v in vs
                if self.contains(complex(u, v))]


class HolomorphicCurve:
    """Named holomorphic curve restricted to a parameter domain."""

    __slots__ = ("name", "expr", "domain")

    def __init__(self, name, expr, domain):
        if isinstance(expr, str):
            expr = CurveExpr.parse(expr)
        self.name = name
        self.expr = expr
        self.domain = domain

    def to_text(self):
        return self.expr.to_text()

    def check_domain(self, z):
        if not self.domain.contains(z):
            raise DomainError(
                f"point ({complex(z).real:g}, {complex(z).imag:g}) is outside "
                f"the domain of {self.name}",
                reason="domain", where=self.name, z=complex(z))

    def eval_jets(self, z):
        self.check_domain(z)
        return self.expr.eval_jets(z)

    def eval(self, z):
        self.check_domain(z)
        return np.array(self.expr.eval_values(z))

    def __repr__(self):
        return f"HolomorphicCurve({self.name!r}, {self.to_text()!r})"


@dataclass(frozen=True)
class SplitSample:
    """Second-order data of the conjugate pair at one parameter point.

    g, h hold position jets; g_u, g_v hold full jets of the first-derivative
    fields (their own derivatives use third holomorphic order).  h's
    derivative fields come for free from conjugacy.
    """

    z: complex
    g: Vec
    h: Vec
    g_u: Vec
    g_v: Vec

    @property
    def h_u(self):
        return -self.g_v

    @property
    def h_v(self):
        return self.g_u


class MinimalPair:
    """Conjugate minimal pair split off a holomorphic curve.

    h_offset translates the conjugate surface; the split is only defined up to
    that translation and some identities care about the representative.
    """

    __slots__ = ("curve", "h_offset")

    def __init__(self, curve, h_offset=None):
        self.curve = curve
        self.h_offset = (np.zeros(4) if h_offset is None
                         else np.asarray(h_offset, dtype=float))
        if self.h_offset.shape != (4,):
            raise ValueError("h_offset must be a 4-vector")

    @property
    def name(self):
        return self.curve.name

    @property
    def domain(self):
        return self.curve.domain

    def translated(self, v):
        return MinimalPair(self.curve, self.h_offset + np.asarray(v, dtype=float))

    def samples_at(self, z):
        jets = self.curve.eval_jets(z)
        g, h = seed_surface(jets)
        if np.any(self.h_offset):
            h = h + Vec.of_values(self.h_offset)
        g_u, g_v = seed_first_derivative_fields(jets)
        return SplitSample(z=complex(z), g=g, h=h, g_u=g_u, g_v=g_v)

    def sample_g(self, z):
        return self.samples_at(z).g

    def sample_h(self, z):
        return self.samples_at(z).h

    def __repr__(self):
        return f"MinimalPair({self.curve!r})"


def split(pair, z):
    """Jet data of the conjugate pair of `pair` at z."""
    return pair.samples_at(z)


def associated_family(pair, theta):
    """Rotate the pair through its associated family: every component of the
    underlying curve is multiplied by exp(-i theta), trading g for a mix of
    g and h while keeping the induced metric."""
    c = complex(np.cos(theta), -np.sin(theta))
    src = pair.curve.expr.ast
    comps = tuple(Bin("*", const_node(c), comp) for comp in src.components)
    expr = CurveExpr(Curve(comps, declared_arity=src.declared_arity))
    curve = HolomorphicCurve(
        f"{pair.curve.name}@{theta:.6g}", expr, pair.curve.domain)
    return MinimalPair(curve, pair.h_offset)


def certify(pair, grid=None, nu=9, nv=9, margin=0.05):
    """Numeric certificate that the pair is a regular conjugate minimal pair.

    Returns max/min statistics over the grid:
      isotropy_max    |sum G_k'^2| relative to sum |G_k'|^2
      regularity_min  (E G - F^2) / scale^4 of the g surface
      minimality_max  |mean curvature vector| of the g surface
    """
    if isinstance(pair, MinimalPair):
        curve = pair.curve
    elif isinstance(pair, HolomorphicCurve):
        curve, pair = pair, MinimalPair(pair)
    else:
        raise TypeError("certify wants a MinimalPair or HolomorphicCurve")
    if grid is None:
        grid = curve.domain.grid(nu, nv, margin)
    if not grid:
        raise PreconditionError("certification grid is empty")

    iso_max = 0.0
    reg_min = float("inf")
    h_max = 0.0
    for z in grid:
        jets = curve.eval_jets(z)
        d = np.array([j.c1 for j in jets])
        herm = float(np.sum(np.abs(d) ** 2))
        iso = abs(complex(np.sum(d * d)))
        iso_max = max(iso_max, iso / max(herm, 1e-300))

        sample = pair.samples_at(z)
        fd = geometry.fundamental_data(sample.g)
        reg_min = min(reg_min, fd.det1 / max(fd.scale, 1e-150) ** 4)
        h_max = max(h_max, fd.lam)
    return {
        "isotropy_max": iso_max,
        "regularity_min": reg_min,
        "minimality_max": h_max,
        "points": len(grid),
    }
