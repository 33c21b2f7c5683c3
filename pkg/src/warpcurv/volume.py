"""Tube geometry and end volumes of warped metrics.

The cross-section of an end at level r has volume ``2 pi v(r) h(r)^(2n-2) volB``
and the end volume integrates it over ``(-inf, r0]``.  Left tails built from
``exp`` / ``exp + tau`` / constants are integrated in closed form; only the
compact middle uses adaptive Simpson quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParams, NonpositiveRadius, OutOfDomain
from .warpfn import WarpingFunction, eval_jet

SIMPSON_TOL = 1e-12
MAX_DEPTH = 60


@dataclass(frozen=True)
class EndSpec:
    v: WarpingFunction
    h: WarpingFunction
    n: int
    volB: float
    r0: float

    def __post_init__(self):
        if not self.volB > 0:
            raise InvalidParams(f"volB must be positive, got {self.volB}")
        if self.n < 3:
            raise InvalidParams(f"dimension must be >= 3, got {self.n}")
        for f in (self.v, self.h):
            lo, hi = f.domain
            if lo != -math.inf or self.r0 > hi:
                raise InvalidParams("(-inf, r0] must lie in the domain of v and h")

    @property
    def exponent(self) -> int:
        return 2 * self.n - 2


@dataclass(frozen=True)
class Divergent:
    reason: str

    def __str__(self):
        return "divergent"


def tube_geometry(r: float) -> tuple[float, float]:
    """(circumference of the circle factor, scale of the hyperplane factor)
    of the tube at distance r from a codimension-two hyperplane."""
    if not r > 0:
        raise NonpositiveRadius(f"tube radius must be positive, got {r}")
    return 2 * math.pi * math.sinh(r), math.cosh(r)


def cross_section_volume(spec: EndSpec, r: float) -> float:
    if r > spec.r0:
        raise OutOfDomain(f"r={r} beyond the cut level r0={spec.r0}")
    v = eval_jet(spec.v, r).value
    h = eval_jet(spec.h, r).value
    return 2 * math.pi * v * h**spec.exponent * spec.volB


def adaptive_simpson(f, a: float, b: float, tol: float = SIMPSON_TOL,
                     max_depth: int = MAX_DEPTH) -> float:
    """Adaptive Simpson quadrature with absolute tolerance ``tol``."""
    def simpson(fa, fm, fb, a, b):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def rec(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, a, m)
        right = simpson(fm, frm, fb, m, b)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        return (rec(a, m, fa, flm, fm, left, tol / 2, depth - 1)
                + rec(m, b, fm, frm, fb, right, tol / 2, depth - 1))

    if a == b:
        return 0.0
    fa, fb, fm = f(a), f(b), f(0.5 * (a + b))
    return rec(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, max_depth)


def _tail_integral(vk, hk, a: float, p: int) -> float | Divergent:
    """Closed form of the integral of v h^p over (-inf, a]."""
    key = (vk.tag, hk.tag)
    if vk.tag == "const":
        return Divergent("v is constant on an infinite tail, so its integral diverges")
    if key == ("exp", "exp"):
        return math.exp((p + 1) * a) / (p + 1)
    if key == ("exp", "exp_shift"):
        # substitute u = e^r: integral of (u + tau)^p du over (0, e^a]
        tau = hk.tau
        return ((math.exp(a) + tau) ** (p + 1) - tau ** (p + 1)) / (p + 1)
    if key == ("exp", "const"):
        return hk.c**p * math.exp(a)
    raise InvalidParams(f"no closed-form tail integral for ({vk.tag}, {hk.tag})")


def end_volume(spec: EndSpec) -> float | Divergent:
    """Volume of the end ``(-inf, r0]``, or :class:`Divergent`."""
    p = spec.exponent
    pv, ph = spec.v.pieces[0], spec.h.pieces[0]
    a = min(pv.hi, ph.hi, spec.r0)
    tail = _tail_integral(pv.kind, ph.kind, a, p)
    if isinstance(tail, Divergent):
        return tail

    def integrand(r):
        return eval_jet(spec.v, r).value * eval_jet(spec.h, r).value ** p

    middle = 0.0
    if spec.r0 > a:
        # split at the knots so every Simpson panel sees one smooth piece
        cuts = sorted({a, spec.r0} | {k for k in spec.v.knots + spec.h.knots if a < k < spec.r0})
        scale = 1.0 / max(1, len(cuts) - 1)
        for lo, hi in zip(cuts, cuts[1:]):
            middle += adaptive_simpson(integrand, lo, hi, SIMPSON_TOL * scale)
    return 2 * math.pi * spec.volB * (tail + middle)
