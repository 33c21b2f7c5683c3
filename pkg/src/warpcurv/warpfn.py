"""Warping functions: piecewise-analytic positive functions of r with 2-jets.

A :class:`WarpingFunction` is an ordered list of pieces, each an interval of
``r`` carrying one of a handful of closed-form kinds (``exp``, ``exp + tau``,
``cosh``, ``sinh``, constants) or a quintic Hermite segment fixed by the
2-jets at its two ends.  The constructors in this module build the pairs
``(v, h)`` used by the warped metric ``dr^2 + v^2 dtheta^2 + h^2 g_hyp``:
exact exponential (or constant / shifted) tails on the left, exact
``sinh``/``cosh`` on the right, and a convex increasing C^2 bridge in
between.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.optimize import linprog

from .errors import ConstructionFailed, InvalidEpsilon, InvalidParams, OutOfDomain

GLUE_TOL = 1e-9
GRID_STEP = 1e-3
RETRY_FACTOR = 1.25
MAX_RETRIES = 40


@dataclass(frozen=True)
class ScalarJet:
    """Value, first and second derivative of a scalar function at a point."""

    value: float
    d1: float
    d2: float

    def __iter__(self) -> Iterator[float]:
        return iter((self.value, self.d1, self.d2))

    def max_abs_diff(self, other: "ScalarJet") -> float:
        return max(abs(a - b) for a, b in zip(self, other))


# ---------------------------------------------------------------------------
# piece kinds

@dataclass(frozen=True)
class Exp:
    tag = "exp"

    def jets(self, r):
        e = np.exp(r)
        return e, e, e

    def params(self) -> tuple[float, ...]:
        return ()


@dataclass(frozen=True)
class ExpShift:
    """``e^r + tau``."""

    tau: float
    tag = "exp_shift"

    def jets(self, r):
        e = np.exp(r)
        return e + self.tau, e, e

    def params(self) -> tuple[float, ...]:
        return (self.tau,)


@dataclass(frozen=True)
class Cosh:
    tag = "cosh"

    def jets(self, r):
        c, s = np.cosh(r), np.sinh(r)
        return c, s, c

    def params(self) -> tuple[float, ...]:
        return ()


@dataclass(frozen=True)
class Sinh:
    tag = "sinh"

    def jets(self, r):
        c, s = np.cosh(r), np.sinh(r)
        return s, c, s

    def params(self) -> tuple[float, ...]:
        return ()


@dataclass(frozen=True)
class Const:
    c: float
    tag = "const"

    def __post_init__(self):
        if not self.c > 0:
            raise InvalidParams(f"constant warping function needs c > 0, got {self.c}")

    def jets(self, r):
        r = np.asarray(r, dtype=float)
        return np.full_like(r, self.c), np.zeros_like(r), np.zeros_like(r)

    def params(self) -> tuple[float, ...]:
        return (self.c,)


@dataclass(frozen=True)
class QuinticHermite:
    """Quintic on ``[a, b]`` matching the 2-jets ``left`` at a and ``right`` at b.

    The six stored numbers are the jets themselves; the monomial coefficients
    in the local variable ``t = (r - a) / (b - a)`` are derived from them.
    """

    a: float
    b: float
    left: tuple[float, float, float]
    right: tuple[float, float, float]
    tag = "quintic_hermite"
    _coef: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.b > self.a:
            raise InvalidParams("quintic Hermite piece needs a < b")
        L = self.b - self.a
        y0, y1, y2 = self.left[0], L * self.left[1], L * L * self.left[2]
        z0, z1, z2 = self.right[0], L * self.right[1], L * L * self.right[2]
        d = z0 - y0
        coef = np.array([
            y0,
            y1,
            y2 / 2.0,
            10.0 * d - 6.0 * y1 - 4.0 * z1 - (3.0 * y2 - z2) / 2.0,
            -15.0 * d + 8.0 * y1 + 7.0 * z1 + (3.0 * y2 - 2.0 * z2) / 2.0,
            6.0 * d - 3.0 * y1 - 3.0 * z1 - (y2 - z2) / 2.0,
        ])
        object.__setattr__(self, "_coef", coef)

    @property
    def coefficients(self) -> np.ndarray:
        """Monomial coefficients in the local variable t on [0, 1]."""
        return self._coef.copy()

    def jets(self, r):
        L = self.b - self.a
        t = (np.asarray(r, dtype=float) - self.a) / L
        c = self._coef
        p = c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))))
        dp = c[1] + t * (2 * c[2] + t * (3 * c[3] + t * (4 * c[4] + t * 5 * c[5])))
        ddp = 2 * c[2] + t * (6 * c[3] + t * (12 * c[4] + t * 20 * c[5]))
        return p, dp / L, ddp / (L * L)

    def params(self) -> tuple[float, ...]:
        return (*self.left, *self.right)

    def exact_minima(self) -> tuple[float, float, float]:
        """Exact minima of (f, f', f'') over the piece via polynomial critical points."""
        return self.exact_ranges()[0]

    def exact_ranges(self, lo: float | None = None,
                     hi: float | None = None) -> tuple[tuple[float, ...], tuple[float, ...]]:
        """Exact (minima, maxima) of (f, f', f'') over ``[lo, hi]`` within the piece."""
        poly = np.polynomial.Polynomial(self._coef)
        L = self.b - self.a
        t0 = 0.0 if lo is None else (lo - self.a) / L
        t1 = 1.0 if hi is None else (hi - self.a) / L
        mins, maxs = [], []
        for order in range(3):
            p = poly.deriv(order) if order else poly
            crit = [t0, t1]
            for root in p.deriv().roots():
                if abs(root.imag) < 1e-12 and t0 < root.real < t1:
                    crit.append(root.real)
            vals = p(np.array(crit)) / L**order
            mins.append(float(vals.min()))
            maxs.append(float(vals.max()))
        return tuple(mins), tuple(maxs)


def jet_ranges(kind, lo: float, hi: float) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Exact (minima, maxima) of the jets of a piece kind over ``[lo, hi]``.

    Endpoints may be infinite; the closed-form kinds are monotone on each
    side of r = 0, so their extremes sit at the ends, at 0, or in the limit.
    """
    if isinstance(kind, QuinticHermite):
        return kind.exact_ranges(lo, hi)
    pts = [x for x in (lo, hi) if math.isfinite(x)]
    if lo < 0.0 < hi:
        pts.append(0.0)
    with np.errstate(over="ignore"):
        vals = [np.asarray(j, dtype=float) for j in kind.jets(np.array(pts))]
        lims = []
        for end in (lo, hi):
            if math.isinf(end):
                lims.append([float(np.ravel(x)[0]) for x in kind.jets(np.array([end]))])
    mins, maxs = [], []
    for k in range(3):
        cand = list(vals[k]) + [lim[k] for lim in lims]
        mins.append(float(min(cand)))
        maxs.append(float(max(cand)))
    return tuple(mins), tuple(maxs)


PieceKind = Exp | ExpShift | Cosh | Sinh | Const | QuinticHermite

_SIMPLE_KINDS = {"exp": Exp, "cosh": Cosh, "sinh": Sinh}


@dataclass(frozen=True)
class Piece:
    lo: float
    hi: float
    kind: PieceKind


class WarpingFunction:
    """Positive piecewise function of r with C^2 gluing at interior knots.

    Pieces cover half-open intervals ``[lo, hi)``; the last piece also owns
    its right endpoint when it is finite.
    """

    def __init__(self, pieces: Sequence[Piece | tuple], check: bool = True):
        ps = tuple(p if isinstance(p, Piece) else Piece(*p) for p in pieces)
        if not ps:
            raise InvalidParams("warping function needs at least one piece")
        for p in ps:
            if not p.hi > p.lo:
                raise InvalidParams(f"empty piece interval [{p.lo}, {p.hi})")
            if isinstance(p.kind, QuinticHermite) and (p.kind.a != p.lo or p.kind.b != p.hi):
                raise InvalidParams("quintic Hermite interval must match its piece interval")
        for p, q in zip(ps, ps[1:]):
            if p.hi != q.lo:
                raise InvalidParams(f"pieces leave a gap or overlap at {p.hi} / {q.lo}")
        self.pieces = ps
        if check:
            worst = self.glue_mismatch()
            if worst > GLUE_TOL:
                raise InvalidParams(f"C2 gluing violated: jet mismatch {worst:.3e} > {GLUE_TOL}")

    @property
    def domain(self) -> tuple[float, float]:
        return self.pieces[0].lo, self.pieces[-1].hi

    @property
    def knots(self) -> list[float]:
        return [p.hi for p in self.pieces[:-1]]

    def __eq__(self, other):
        return isinstance(other, WarpingFunction) and self.pieces == other.pieces

    def __repr__(self):
        kinds = ", ".join(f"[{p.lo:g},{p.hi:g}):{p.kind.tag}" for p in self.pieces)
        return f"WarpingFunction({kinds})"

    def glue_mismatch(self) -> float:
        """Largest componentwise jet disagreement over interior knots, measured
        relative to ``max(1, |jet|)``."""
        worst = 0.0
        for p, q in zip(self.pieces, self.pieces[1:]):
            left = np.array(p.kind.jets(p.hi), dtype=float)
            right = np.array(q.kind.jets(q.lo), dtype=float)
            scale = np.maximum(1.0, np.maximum(np.abs(left), np.abs(right)))
            worst = max(worst, float(np.max(np.abs(left - right) / scale)))
        return worst

    def _piece_index(self, r: np.ndarray) -> np.ndarray:
        lo, hi = self.domain
        if np.any(r < lo) or np.any(r > hi) or np.any(np.isnan(r)):
            bad = r[(r < lo) | (r > hi) | np.isnan(r)]
            raise OutOfDomain(f"r={bad.flat[0]} outside domain [{lo}, {hi}]")
        idx = np.searchsorted(np.array(self.knots), r, side="right")
        return np.minimum(idx, len(self.pieces) - 1)

    def jets(self, r) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Vectorized (f, f', f'') at the points ``r``."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        idx = self._piece_index(r)
        out = np.empty((3, r.size))
        for k in np.unique(idx):
            mask = idx == k
            vals = self.pieces[k].kind.jets(r[mask])
            for j in range(3):
                out[j, mask] = vals[j]
        return out[0], out[1], out[2]

    def __call__(self, r):
        return self.jets(r)[0]


def eval_jet(f: WarpingFunction, r: float) -> ScalarJet:
    """Return ``(f(r), f'(r), f''(r))`` for scalar ``r``."""
    a, b, c = f.jets(float(r))
    return ScalarJet(float(a[0]), float(b[0]), float(c[0]))


def constant(c: float) -> WarpingFunction:
    return WarpingFunction([(-math.inf, math.inf, Const(c))])


def exponential() -> WarpingFunction:
    return WarpingFunction([(-math.inf, math.inf, Exp())])


def shifted_exponential(tau: float) -> WarpingFunction:
    return WarpingFunction([(-math.inf, math.inf, ExpShift(tau))])


def hyperbolic_pair(lo: float = 0.0) -> tuple[WarpingFunction, WarpingFunction]:
    """The model pair ``v = sinh``, ``h = cosh`` on ``(lo, inf)``."""
    return (WarpingFunction([(lo, math.inf, Sinh())]),
            WarpingFunction([(lo, math.inf, Cosh())]))


# ---------------------------------------------------------------------------
# metric variants

@dataclass(frozen=True)
class MetricVariant:
    tag: str
    tau: float | None = None

    PAPER = "paper-negative"
    HEINTZE_SCHROEDER = "heintze-schroeder"
    FUJIWARA = "fujiwara"

    def __post_init__(self):
        if self.tag not in (self.PAPER, self.HEINTZE_SCHROEDER, self.FUJIWARA):
            raise InvalidParams(f"unknown metric variant {self.tag!r}")
        if self.tag == self.FUJIWARA:
            if self.tau is None or not self.tau > 0:
                raise InvalidParams("Fujiwara variant requires tau > 0")
        elif self.tau is not None:
            raise InvalidParams(f"variant {self.tag} takes no tau")

    @classmethod
    def paper_negative(cls) -> "MetricVariant":
        return cls(cls.PAPER)

    @classmethod
    def heintze_schroeder(cls) -> "MetricVariant":
        return cls(cls.HEINTZE_SCHROEDER)

    @classmethod
    def fujiwara(cls, tau: float) -> "MetricVariant":
        return cls(cls.FUJIWARA, tau)

    @property
    def strict(self) -> bool:
        """Whether the bridge must have strictly positive derivatives."""
        return self.tag != self.HEINTZE_SCHROEDER

    def left_tails(self, rho: float) -> tuple[PieceKind, PieceKind]:
        if self.tag == self.PAPER:
            return Exp(), Exp()
        if self.tag == self.HEINTZE_SCHROEDER:
            c = math.exp(-rho)
            return Const(c), Const(c)
        return Exp(), ExpShift(self.tau)


# ---------------------------------------------------------------------------
# choosing rho

def _tangent_pair_ok(rho: float, eps: float) -> bool:
    a = math.exp(-rho)
    for f, fp in ((math.cosh(eps), math.sinh(eps)), (math.sinh(eps), math.cosh(eps))):
        if a >= fp:
            return False
        # tangent to e^r at -rho:  a (r + rho + 1);  tangent at eps: f + fp (r - eps)
        r_star = (f - fp * eps - a * (rho + 1.0)) / (a - fp)
        if not -rho < r_star < eps:
            return False
    return True


def choose_rho(eps: float, resolution: float = 1e-6) -> float:
    """Smallest rho > 0 for which the tangent lines to e^r at -rho and to
    both cosh and sinh at eps meet strictly inside (-rho, eps)."""
    if not eps > 0:
        raise InvalidEpsilon(f"eps must be positive, got {eps}")
    grid = np.geomspace(1e-6, 1e6, 6001)
    prev = 0.0
    for rho in grid:
        if _tangent_pair_ok(float(rho), eps):
            lo, hi = prev, float(rho)
            break
        prev = float(rho)
    else:
        raise InvalidEpsilon(f"no admissible rho found for eps={eps}")
    while hi - lo > resolution / 4:
        mid = 0.5 * (lo + hi)
        if mid > 0 and _tangent_pair_ok(mid, eps):
            hi = mid
        else:
            lo = mid
    return math.ceil(hi / resolution) * resolution


# ---------------------------------------------------------------------------
# convex bridge

def _bridge_nodes(a: float, b: float, uniform: int = 64, cluster: int = 40) -> np.ndarray:
    L = b - a
    pts = set(np.linspace(a, b, uniform + 1).tolist())
    # geometric clustering toward both ends; much shorter segments make the
    # Hermite second derivative lose digits (it scales like 1/L^2)
    for d in np.geomspace(1e-3 * min(1.0, L), L / 2, cluster):
        pts.add(a + d)
        pts.add(b - d)
    t = np.array(sorted(pts))
    keep = np.concatenate([[True], np.diff(t) > 1e-9 * L])
    t = t[keep]
    t[-1] = b
    return t


def _bridge(a: float, b: float, ja: ScalarJet, jb: ScalarJet,
            nodes: np.ndarray | None = None) -> list[Piece] | None:
    """C^2 chain of Hermite pieces from jet ``ja`` at a to ``jb`` at b whose
    second derivative is piecewise linear with positive interior node values.

    Returns None when no such chain exists on the node set.
    """
    t = _bridge_nodes(a, b) if nodes is None else nodes
    hk = np.diff(t)
    K = len(t) - 1
    # contributions of node values s_0..s_K to f'(b) and f(b)
    slope_w = np.zeros(K + 1)
    value_w = np.zeros(K + 1)
    dist = b - t[:-1]
    slope_w[:-1] += hk / 2
    slope_w[1:] += hk / 2
    value_w[:-1] += hk * (dist / 2 - hk / 6)
    value_w[1:] += hk * (dist / 2 - hk / 3)
    L = b - a
    need_slope = jb.d1 - ja.d1 - ja.d2 * slope_w[0] - jb.d2 * slope_w[-1]
    need_value = (jb.value - ja.value - ja.d1 * L
                  - ja.d2 * value_w[0] - jb.d2 * value_w[-1])
    A = np.vstack([slope_w[1:-1], value_w[1:-1]])
    rhs = np.array([need_slope, need_value])
    n = A.shape[1]
    # maximize a common floor delta under sigma_i >= delta
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_eq = np.hstack([A, np.zeros((2, 1))])
    A_ub = np.hstack([-np.eye(n), np.ones((n, 1))])
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(n), A_eq=A_eq, b_eq=rhs,
                  bounds=[(0, None)] * (n + 1), method="highs")
    if res.status != 0 or res.x[-1] <= 0:
        return None
    floor = 0.5 * res.x[-1]
    # keep half the best floor, then flatten the peak of f''
    c_peak = np.zeros(n + 1)
    c_peak[-1] = 1.0
    res = linprog(c_peak, A_ub=np.hstack([np.eye(n), -np.ones((n, 1))]), b_ub=np.zeros(n),
                  A_eq=A_eq, b_eq=rhs, bounds=[(floor, None)] * n + [(0, None)],
                  method="highs")
    if res.status != 0:
        return None
    sigma = res.x[:-1]
    # project onto the equality constraints exactly
    for _ in range(3):
        sigma = sigma + np.linalg.lstsq(A, rhs - A @ sigma, rcond=None)[0]
    if np.min(sigma) <= 0.5 * floor:
        return None
    s = np.concatenate([[ja.d2], sigma, [jb.d2]])
    f, fp = ja.value, ja.d1
    jets = [(f, fp, s[0])]
    for k in range(K):
        h = hk[k]
        f = f + h * fp + h * h * (2 * s[k] + s[k + 1]) / 6
        fp = fp + h * (s[k] + s[k + 1]) / 2
        jets.append((f, fp, s[k + 1]))
    jets[-1] = tuple(jb)
    return [Piece(t[k], t[k + 1], QuinticHermite(t[k], t[k + 1], jets[k], jets[k + 1]))
            for k in range(K)]


def positivity_minima(f: WarpingFunction, lo: float, hi: float,
                      step: float = GRID_STEP) -> tuple[float, float, float]:
    """Sampled minima of (f, f', f'') on a grid of spacing <= step over [lo, hi]."""
    n = int(math.ceil((hi - lo) / step)) + 1
    r = np.linspace(lo, hi, n)
    jets = f.jets(r)
    return tuple(float(np.min(j)) for j in jets)


def exact_minima(f: WarpingFunction, lo: float, hi: float) -> tuple[float, float, float]:
    """Exact minima of (f, f', f'') over the polynomial pieces inside [lo, hi].

    Closed-form pieces are handled through their endpoint values (and r = 0
    when it is interior), which is where the listed kinds attain extrema of
    their jets.
    """
    mins = [math.inf] * 3
    for p in f.pieces:
        a, b = max(p.lo, lo), min(p.hi, hi)
        if a >= b:
            continue
        if isinstance(p.kind, QuinticHermite) and (a, b) == (p.lo, p.hi):
            vals = p.kind.exact_minima()
        else:
            pts = [a, b] + ([0.0] if a < 0.0 < b else [])
            vals = [float(np.min(j)) for j in p.kind.jets(np.array(pts))]
        mins = [min(m, v) for m, v in zip(mins, vals)]
    return tuple(mins)


@dataclass
class Interpolant:
    """Result of :func:`build_interpolant`; unpacks as ``v, h``."""

    v: WarpingFunction
    h: WarpingFunction
    eps: float
    rho: float
    variant: MetricVariant
    retries: int
    grid_step: float
    minima: dict[str, float]

    def __iter__(self):
        return iter((self.v, self.h))


def build_interpolant(eps: float, rho: float, variant: MetricVariant | None = None,
                      grid_step: float = GRID_STEP,
                      max_retries: int = MAX_RETRIES) -> Interpolant:
    """Build the warping pair ``(v, h)`` with exact tails and a C^2 bridge.

    Tails: the variant's left tail on ``(-inf, -rho]``, ``v = sinh`` and
    ``h = cosh`` on ``[eps, inf)``.  The bridge on ``[-rho, eps]`` is checked
    for positivity of all six jet components on a grid of spacing
    ``grid_step`` (strict, except for Heintze-Schroeder where the derivatives
    only need to be nonnegative); on failure rho grows by a factor 1.25.
    """
    variant = variant or MetricVariant.paper_negative()
    if not eps > 0:
        raise InvalidParams(f"eps must be positive, got {eps}")
    if not rho > 0:
        raise InvalidParams(f"rho must be positive, got {rho}")
    if variant.tag == MetricVariant.PAPER and rho < choose_rho(eps) - 1e-12:
        raise InvalidParams(f"rho={rho} below choose_rho({eps})")

    right = {"v": Sinh(), "h": Cosh()}
    for attempt in range(max_retries + 1):
        if math.exp(-rho) == 0.0:
            break
        left = dict(zip("vh", variant.left_tails(rho)))
        funcs = {}
        minima = {}
        for name in "vh":
            ja = ScalarJet(*(float(x) for x in left[name].jets(-rho)))
            jb = ScalarJet(*(float(x) for x in right[name].jets(eps)))
            middle = _bridge(-rho, eps, ja, jb)
            if middle is None:
                break
            f = WarpingFunction([Piece(-math.inf, -rho, left[name]), *middle,
                                 Piece(eps, math.inf, right[name])])
            mins = positivity_minima(f, -rho, eps, grid_step)
            ok = (min(mins) > 0) if variant.strict else (mins[0] > 0 and min(mins[1:]) >= 0)
            if not ok:
                break
            funcs[name] = f
            for label, m in zip(("", "'", "''"), mins):
                minima[name + label] = m
        else:
            return Interpolant(funcs["v"], funcs["h"], eps, rho, variant, attempt,
                               grid_step, minima)
        rho *= RETRY_FACTOR
    raise ConstructionFailed(f"no admissible bridge after {max_retries} retries (rho={rho})")


# ---------------------------------------------------------------------------
# text serialization

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def to_lines(f: WarpingFunction) -> list[str]:
    """Line-oriented listing of pieces, knots and coefficients."""
    out = []
    for p in f.pieces:
        fields = [_fmt(p.lo), _fmt(p.hi), p.kind.tag, *map(_fmt, p.kind.params())]
        out.append("piece = " + " ".join(fields))
    return out


def from_lines(lines: Iterable[str]) -> WarpingFunction:
    pieces = []
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition("=")
        if key.strip() != "piece":
            raise InvalidParams(f"unexpected line in warping function: {raw!r}")
        tok = rest.split()
        lo, hi, tag, params = float(tok[0]), float(tok[1]), tok[2], [float(x) for x in tok[3:]]
        if tag in _SIMPLE_KINDS:
            kind = _SIMPLE_KINDS[tag]()
        elif tag == "exp_shift":
            kind = ExpShift(params[0])
        elif tag == "const":
            kind = Const(params[0])
        elif tag == "quintic_hermite":
            kind = QuinticHermite(lo, hi, tuple(params[:3]), tuple(params[3:6]))
        else:
            raise InvalidParams(f"unknown piece kind {tag!r}")
        pieces.append(Piece(lo, hi, kind))
    return WarpingFunction(pieces)
