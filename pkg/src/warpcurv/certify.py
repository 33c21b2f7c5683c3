"""Curvature-bound certificates for warped metrics ``dr^2 + v^2 dtheta^2 + h^2 g_hyp``.

The curvature operator of these metrics is diagonal in the frame
``(d_r, Y_1, ..., Y_m)``, so the range of sectional curvature is the range of
the four coordinate-plane profiles

    K1 = -h'v'/(hv),  K2 = -h''/h,  K3 = -v''/v,  K4 = -1/h^2 - (h'/h)^2

(K4 only for n >= 4).  A certificate combines exact extremes of the
closed-form tails with interval bounds on the spline middle, built from the
exact extremes of each jet on every polynomial piece.  A 1e-3 sample grid is
kept as a consistency check and reported alongside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CertificationFailed, InvalidParams, OutOfDomain, UnboundedInput
from .metricspec import MetricSpec
from .warpfn import Piece, jet_ranges

GRID_STEP = 1e-3
PROFILE_NAMES = ("K1", "K2", "K3", "K4")

EXACT = "middle bounded by exact jet ranges on each polynomial piece"
NONSTRICT = "nonpositive, not strictly negative"
SUP_NOT_ATTAINED = "supremum not attained"
INF_NOT_ATTAINED = "infimum not attained"


# ---------------------------------------------------------------------------
# profiles

@dataclass(frozen=True)
class ProfileTable:
    """Rows ``(r, K1, ..., K_last)``; n = 3 tables have no K4 column."""

    columns: tuple[str, ...]
    rows: np.ndarray

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]

    def to_csv(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(format(float(x), ".17g") for x in row))
        return "\n".join(lines) + "\n"


def _profile_arrays(spec: MetricSpec, r: np.ndarray) -> np.ndarray:
    """K profiles (one row per profile) at unscaled radii ``r``."""
    v, v1, v2 = spec.v.jets(r)
    h, h1, h2 = spec.h.jets(r)
    if np.any(v <= 0) or np.any(h <= 0):
        raise OutOfDomain("warping function not positive on the requested grid")
    out = [-h1 * v1 / (h * v), -h2 / h, -v2 / v]
    if spec.n >= 4:
        out.append(-1.0 / h**2 - (h1 / h) ** 2)
    return np.array(out) / spec.scale**2


def principal_profiles(spec: MetricSpec, r_grid) -> ProfileTable:
    """Principal sectional curvatures on ``r_grid`` (in the metric spec's radial coordinate)."""
    r = np.atleast_1d(np.asarray(r_grid, dtype=float))
    K = _profile_arrays(spec, r / spec.scale)
    names = PROFILE_NAMES[: K.shape[0]]
    return ProfileTable(("r",) + names, np.column_stack([r, K.T]))


# ---------------------------------------------------------------------------
# closed-form tails

@dataclass(frozen=True)
class _Extreme:
    value: float
    attained: bool


def _tail_formula(vk, hk):
    """(profile function of r, critical points, limits at -inf, limits at +inf)
    for a pair of closed-form kinds; each profile is smooth and its extremes
    over an interval sit at endpoints, listed critical points, or limits."""
    key = (vk.tag, hk.tag)
    if key == ("sinh", "cosh"):
        return (lambda r: (-1.0, -1.0, -1.0, -1.0)), (), (-1.0,) * 4, (-1.0,) * 4
    if key == ("exp", "exp"):
        def f(r):
            return (-1.0, -1.0, -1.0, -1.0 - math.exp(-2 * r))
        return f, (), (-1.0, -1.0, -1.0, -math.inf), (-1.0,) * 4
    if key == ("const", "const"):
        k4 = -1.0 / hk.c**2
        return (lambda r: (0.0, 0.0, 0.0, k4)), (), (0.0, 0.0, 0.0, k4), (0.0, 0.0, 0.0, k4)
    if key == ("exp", "exp_shift"):
        tau = hk.tau

        def f(r):
            e = math.exp(r)
            k = -e / (e + tau)
            return (k, k, -1.0, -(1.0 + e * e) / (e + tau) ** 2)
        # d/du (1+u^2)/(u+tau)^2 vanishes at u = 1/tau
        return f, (-math.log(tau),), (0.0, 0.0, -1.0, -1.0 / tau**2), (-1.0,) * 4
    raise InvalidParams(f"no closed-form tail analysis for ({vk.tag}, {hk.tag})")


def _tail_extremes(vk, hk, lo: float, hi: float, nprof: int):
    f, crit, lim_lo, lim_hi = _tail_formula(vk, hk)
    cands = []  # (values, attained)
    for end, lim in ((lo, lim_lo), (hi, lim_hi)):
        if math.isinf(end):
            cands.append((lim, False))
        else:
            cands.append((f(end), True))
    for c in crit:
        if lo < c < hi:
            cands.append((f(c), True))
    sups, infs = [], []
    for k in range(nprof):
        vals = [(vals[k], att) for vals, att in cands]
        top = max(v for v, _ in vals)
        bot = min(v for v, _ in vals)
        sups.append(_Extreme(top, any(att for v, att in vals if v == top)))
        infs.append(_Extreme(bot, any(att for v, att in vals if v == bot)))
    return sups, infs


def _tails(spec: MetricSpec) -> tuple[list[tuple[Piece, Piece]], tuple[float, float] | None]:
    """Closed-form tail piece pairs and the middle interval (unscaled)."""
    v, h = spec.v.pieces, spec.h.pieces
    lo, hi = spec.v.domain
    if (lo, hi) != spec.h.domain:
        raise InvalidParams("v and h must share a domain")
    if len(v) == 1 and len(h) == 1:
        return [(v[0], h[0])], None
    tails = []
    a, b = lo, hi
    if v[0].hi == h[0].hi and v[0].kind.tag != "quintic_hermite":
        tails.append((v[0], h[0]))
        a = v[0].hi
    if v[-1].lo == h[-1].lo and v[-1].kind.tag != "quintic_hermite":
        tails.append((v[-1], h[-1]))
        b = v[-1].lo
    return tails, (a, b)


# ---------------------------------------------------------------------------
# certificates

@dataclass(frozen=True)
class Unbounded:
    """Marker for curvature unbounded below, with witnesses ``(r, K4, -e^{-2r})``."""

    witness: tuple[tuple[float, float, float], ...] = ()

    def verified(self) -> bool:
        return all(k4 <= bound for _, k4, bound in self.witness)


@dataclass(frozen=True)
class BoundCertificate:
    upper: float
    lower: float | Unbounded
    upper_attained: bool
    lower_attained: bool
    model: str
    n: int
    grid_step: float
    grid_max: float
    grid_min: float
    flags: tuple[str, ...] = field(default_factory=tuple)

    @property
    def strict(self) -> bool:
        """True when every sectional curvature is negative."""
        return self.upper < 0 or (self.upper == 0 and not self.upper_attained)

    @property
    def bounded_below(self) -> bool:
        return not isinstance(self.lower, Unbounded)

    def to_text(self) -> str:
        def fmt(x):
            return format(float(x), ".17g")

        lines = ["# warpcurv curvature certificate",
                 f"model = {self.model}",
                 f"n = {self.n}",
                 f"upper = {fmt(self.upper)}",
                 f"upper_attained = {str(self.upper_attained).lower()}"]
        if self.bounded_below:
            lines += [f"lower = {fmt(self.lower)}",
                      f"lower_attained = {str(self.lower_attained).lower()}"]
        else:
            lines.append("lower = unbounded")
            for r, k4, bound in self.lower.witness:
                lines.append(f"witness = {fmt(r)} {fmt(k4)} {fmt(bound)}")
        lines += [f"strict = {str(self.strict).lower()}",
                  "method = tail-analytic + exact piecewise jet ranges",
                  f"grid_step = {fmt(self.grid_step)}",
                  f"grid_max = {fmt(self.grid_max)}",
                  f"grid_min = {fmt(self.grid_min)}"]
        lines += [f"flag = {f}" for f in self.flags]
        return "\n".join(lines) + "\n"


def _witness(spec: MetricSpec, left_end: float) -> Unbounded:
    pts = []
    for d in (1.0, 5.0, 10.0):
        r = left_end - d
        k4 = float(_profile_arrays(spec, np.array([r]))[3, 0])
        pts.append((r * spec.scale, k4, -math.exp(-2 * r) / spec.scale**2))
    return Unbounded(tuple(pts))


def _imul(x, y):
    c = (x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1])
    return min(c), max(c)


def _idiv(x, y):
    # y is a positive interval
    return _imul(x, (1.0 / y[1], 1.0 / y[0]))


def _isq(x):
    lo, hi = x
    if lo <= 0.0 <= hi:
        return 0.0, max(lo * lo, hi * hi)
    return min(lo * lo, hi * hi), max(lo * lo, hi * hi)


def _middle_bounds(spec: MetricSpec, a: float, b: float, nprof: int) -> tuple[float, float]:
    """Rigorous (max, min) of the profiles over [a, b] from exact jet ranges
    of v and h on every common sub-interval (unscaled)."""
    cuts = sorted({a, b} | {k for k in spec.v.knots + spec.h.knots if a < k < b})
    top, bot = -math.inf, math.inf
    for lo, hi in zip(cuts, cuts[1:]):
        mid = 0.5 * (lo + hi)
        ranges = []
        for f in (spec.v, spec.h):
            piece = f.pieces[int(f._piece_index(np.array([mid]))[0])]
            mins, maxs = jet_ranges(piece.kind, lo, hi)
            ranges.append(list(zip(mins, maxs)))
        (v, v1, v2), (h, h1, h2) = ranges
        if v[0] <= 0 or h[0] <= 0:
            raise CertificationFailed(f"warping function not positive on [{lo}, {hi}]")
        ks = [_idiv(_imul(h1, v1), _imul(h, v)), _idiv(h2, h), _idiv(v2, v)]
        if nprof == 4:
            inv = (1.0 / h[1] ** 2, 1.0 / h[0] ** 2)
            sq = _isq(_idiv(h1, h))
            ks.append((inv[0] + sq[0], inv[1] + sq[1]))
        # the profiles are the negatives of these quantities
        top = max(top, max(-k[0] for k in ks))
        bot = min(bot, min(-k[1] for k in ks))
    return top, bot


def _analyze(spec: MetricSpec, grid_step: float):
    nprof = 4 if spec.n >= 4 else 3
    tails, middle = _tails(spec)
    s2 = spec.scale**2

    up, dn = [], []
    for pv, ph in tails:
        sups, infs = _tail_extremes(pv.kind, ph.kind, pv.lo, pv.hi, nprof)
        up += [_Extreme(e.value / s2, e.attained) for e in sups]
        dn += [_Extreme(e.value / s2, e.attained) for e in infs]

    grid_top = -math.inf
    flags = []
    if middle is not None:
        a, b = middle
        top, bot = _middle_bounds(spec, a, b, nprof)
        up.append(_Extreme(top / s2, True))
        dn.append(_Extreme(bot / s2, True))
        lo = max(a - 1.0, spec.v.domain[0])
        hi = min(b + 1.0, spec.v.domain[1])
        r = np.linspace(lo, hi, int(math.ceil((hi - lo) / grid_step)) + 1)
        K = _profile_arrays(spec, r)
        grid_top = float(np.max(K))
        grid_bot = float(np.min(K))
        inside = (r >= a) & (r <= b)
        slack = 1e-9 * max(1.0, abs(top), abs(bot))
        if (np.max(K[:, inside]) > top / s2 + slack
                or np.min(K[:, inside]) < bot / s2 - slack):
            raise CertificationFailed("sampled curvature escapes the exact piecewise bounds")
        flags.append(EXACT)
    else:
        grid_bot = math.inf
    upper = max(e.value for e in up)
    upper_att = any(e.attained for e in up if e.value == upper)
    lower = min(e.value for e in dn)
    lower_att = any(e.attained for e in dn if e.value == lower)
    return upper, upper_att, lower, lower_att, (grid_top, grid_bot), flags, tails


def certify_upper_bound(spec: MetricSpec, grid_step: float = GRID_STEP) -> BoundCertificate:
    """Certified range of sectional curvature for ``spec``.

    Raises :class:`CertificationFailed` when a model that must be negatively
    curved has a nonnegative middle bound or attained tail value.
    """
    upper, upper_att, lower, lower_att, grid, flags, tails = _analyze(spec, grid_step)
    if spec.requires_strict and upper >= 0 and upper_att:
        raise CertificationFailed(f"curvature bound {upper:.6g} >= 0")
    if not upper_att:
        flags.append(SUP_NOT_ATTAINED)
    if upper == 0 and upper_att:
        flags.append(NONSTRICT)
    if math.isinf(lower):
        low = _witness(spec, _left_end(spec, tails))
    else:
        low = lower
        if not lower_att:
            flags.append(INF_NOT_ATTAINED)
    return BoundCertificate(upper, low, upper_att, lower_att, spec.model, spec.n,
                            grid_step * spec.scale, grid[0], grid[1], tuple(flags))


def _left_end(spec: MetricSpec, tails) -> float:
    for pv, _ in tails:
        if math.isinf(pv.lo):
            return min(pv.hi, 0.0)
    return spec.v.domain[0]


@dataclass(frozen=True)
class Pinching:
    lower: float
    upper: float
    lower_attained: bool
    upper_attained: bool


def pinching(spec: MetricSpec, grid_step: float = GRID_STEP) -> Pinching | Unbounded:
    """Two-sided curvature bounds, or :class:`Unbounded` with K4 witnesses."""
    upper, upper_att, lower, lower_att, _, _, tails = _analyze(spec, grid_step)
    if math.isinf(lower):
        return _witness(spec, _left_end(spec, tails))
    return Pinching(lower, upper, lower_att, upper_att)


@dataclass(frozen=True)
class Rescaling:
    scale: float
    lower: float
    upper: float


def rescale_to_unit_lower_bound(cert: BoundCertificate | Pinching | Unbounded) -> Rescaling:
    """Scale ``s`` with ``s^2 g`` having curvature bounded below by -1."""
    lower = cert if isinstance(cert, Unbounded) else cert.lower
    if isinstance(lower, Unbounded):
        raise UnboundedInput("curvature is unbounded below; no rescaling normalizes it")
    if not lower < 0:
        raise UnboundedInput(f"lower bound must be negative, got {lower}")
    s = math.sqrt(-lower)
    return Rescaling(s, lower / s**2, cert.upper / s**2)
