"""Coordinate-chart finite-difference Riemann tensor.

This is the independent ground truth for the frame formulas: it knows
nothing about warping functions or brackets, only a metric ``g(x)`` on a
chart.  Christoffel symbols come from 4th-order central differences of
``g``; the curvature from 4th-order central differences of those.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainMargin, FrameNotOrthonormal, InvalidParams
from .warpfn import WarpingFunction, eval_jet

_FD_OFFSETS = (-2, -1, 1, 2)
_FD_WEIGHTS = (1.0, -8.0, 8.0, -1.0)


@dataclass(frozen=True)
class ChartMetric:
    dim: int
    g: Callable[[np.ndarray], np.ndarray]
    domain: Callable[[np.ndarray], bool] = field(default=lambda p: True)
    name: str = "chart"

    def __call__(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if not self.domain(p):
            raise DomainMargin(f"{self.name}: point {p} outside the chart domain")
        return self.g(p)


@dataclass(frozen=True)
class FDConfig:
    step: float = 1e-3

    def __post_init__(self):
        if not self.step > 0:
            raise InvalidParams(f"finite-difference step must be positive, got {self.step}")


def _fd(fun: Callable[[np.ndarray], np.ndarray], p: np.ndarray, k: int, h: float) -> np.ndarray:
    acc = 0.0
    for off, w in zip(_FD_OFFSETS, _FD_WEIGHTS):
        q = p.copy()
        q[k] += off * h
        acc = acc + w * fun(q)
    return acc / (12.0 * h)


def christoffel(chart: ChartMetric, p: np.ndarray, h: float) -> np.ndarray:
    """``Gamma[a, b, c] = Gamma^a_{bc}`` at ``p``."""
    n = chart.dim
    dg = np.array([_fd(chart, p, k, h) for k in range(n)])  # dg[k, i, j] = d_k g_ij
    ginv = np.linalg.inv(chart(p))
    # Gamma_{l,bc} = (d_b g_lc + d_c g_lb - d_l g_bc) / 2
    low = 0.5 * (dg.transpose(1, 0, 2) + dg.transpose(1, 2, 0) - dg)
    return np.einsum("al,lbc->abc", ginv, low)


def riemann_fd(chart: ChartMetric, point: Sequence[float], cfg: FDConfig | None = None) -> np.ndarray:
    """Lowered curvature ``T[i, j, k, l] = <R(d_i, d_j) d_k, d_l>`` at ``point``.

    Every stencil point (reach 4 * step per axis) must lie in the chart
    domain; otherwise :class:`DomainMargin` is raised.
    """
    cfg = cfg or FDConfig()
    p = np.asarray(point, dtype=float)
    n, h = chart.dim, cfg.step
    for k in range(n):
        for off in (-4, 4):
            q = p.copy()
            q[k] += off * h
            if not chart.domain(q):
                raise DomainMargin(f"{chart.name}: stencil at {q} leaves the domain (step {h})")
    G = christoffel(chart, p, h)
    dG = np.array([_fd(lambda q: christoffel(chart, q, h), p, k, h) for k in range(n)])
    # R^a_{b c d} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{ce} G^e_{db} - G^a_{de} G^e_{cb}
    # dG[k, a, b, c] = d_k Gamma^a_{bc}
    Rup = (dG.transpose(1, 3, 0, 2) - dG.transpose(1, 3, 2, 0)
           + np.einsum("ace,edb->abcd", G, G) - np.einsum("ade,ecb->abcd", G, G))
    # <R(d_c, d_d) d_b, d_a> = g_ae R^e_{bcd}
    low = np.einsum("ae,ebcd->abcd", chart(p), Rup)
    return low.transpose(2, 3, 1, 0)


def frame_contract(T: np.ndarray, frame: np.ndarray) -> np.ndarray:
    """Components in a frame whose rows are the frame vectors."""
    E = np.asarray(frame, dtype=float)
    return np.einsum("ijkl,ai,bj,ck,dl->abcd", T, E, E, E, E)


def sectional_coordinate_planes(chart: ChartMetric, T: np.ndarray, p) -> dict[tuple[int, int], float]:
    g = chart(p)
    out = {}
    for i in range(chart.dim):
        for j in range(i + 1, chart.dim):
            area = g[i, i] * g[j, j] - g[i, j] ** 2
            out[(i, j)] = float(T[i, j, j, i] / area)
    return out


# ---------------------------------------------------------------------------
# charts

def _profile_values(f: WarpingFunction, r: float) -> float:
    return eval_jet(f, r).value


def chart_warped_hyperbolic(v: WarpingFunction, h: WarpingFunction, n: int) -> ChartMetric:
    """Coordinates (r, theta, x_1..x_{n-3}, y) with metric
    ``diag(1, v^2, h^2 / y^2, ..., h^2 / y^2)``, y > 0."""
    if n < 3:
        raise InvalidParams(f"warped hyperbolic chart needs n >= 3, got {n}")
    lo, hi = v.domain
    lo2, hi2 = h.domain

    def g(p):
        r, y = p[0], p[-1]
        hv = _profile_values(h, r)
        diag = [1.0, _profile_values(v, r) ** 2] + [hv * hv / (y * y)] * (n - 2)
        return np.diag(diag)

    def domain(p):
        return bool(p[-1] > 0 and max(lo, lo2) <= p[0] <= min(hi, hi2))

    return ChartMetric(n, g, domain, name=f"warped-hyperbolic(n={n})")


def chart_heisenberg(h1: WarpingFunction, h2: WarpingFunction, h3: WarpingFunction) -> ChartMetric:
    """Coordinates (r, x, y, z); coframe dx, dy, dz - x dy scaled by h1, h2, h3."""
    funcs = (h1, h2, h3)
    lo = max(f.domain[0] for f in funcs)
    hi = min(f.domain[1] for f in funcs)

    def g(p):
        r, x = p[0], p[1]
        a, b, c = (_profile_values(f, r) ** 2 for f in funcs)
        return np.array([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, a, 0.0, 0.0],
            [0.0, 0.0, b + x * x * c, -x * c],
            [0.0, 0.0, -x * c, c],
        ])

    return ChartMetric(4, g, lambda p: bool(lo <= p[0] <= hi), name="heisenberg")


def chart_euclidean(n: int) -> ChartMetric:
    return ChartMetric(n, lambda p: np.eye(n), name=f"euclidean(n={n})")


def hyperbolic_frame(chart: ChartMetric, p) -> np.ndarray:
    """Orthonormal frame (d_r, d_theta / v, d_x / h, ...) at a point with y-axis last."""
    g = chart(p)
    return np.diag(1.0 / np.sqrt(np.diag(g)))


def heisenberg_frame(chart: ChartMetric, p) -> np.ndarray:
    """(d_r, d_x / h1, (d_y + x d_z) / h2, d_z / h3) at ``p``."""
    g = chart(p)
    x = p[1]
    h1 = math.sqrt(g[1, 1])
    h3 = math.sqrt(g[3, 3])
    h2 = math.sqrt(g[2, 2] - x * x * g[3, 3])
    return np.array([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0 / h1, 0.0, 0.0],
        [0.0, 0.0, 1.0 / h2, x / h2],
        [0.0, 0.0, 0.0, 1.0 / h3],
    ])


# ---------------------------------------------------------------------------
# comparisons

@dataclass(frozen=True)
class CompareReport:
    max_discrepancy: float
    worst_index: tuple[int, int, int, int]
    oracle: np.ndarray

    def passed(self, tol: float) -> bool:
        return self.max_discrepancy <= tol


def frame_compare(chart: ChartMetric, frame: np.ndarray, point, expected,
                  cfg: FDConfig | None = None, ortho_tol: float = 1e-10) -> CompareReport:
    """Oracle components in ``frame`` versus an expected frame table."""
    p = np.asarray(point, dtype=float)
    E = np.asarray(frame, dtype=float)
    gram = E @ chart(p) @ E.T
    defect = float(np.max(np.abs(gram - np.eye(len(E)))))
    if defect > ortho_tol:
        raise FrameNotOrthonormal(f"frame Gram matrix off identity by {defect:.3e}")
    got = frame_contract(riemann_fd(chart, p, cfg), E)
    exp = expected.R if hasattr(expected, "R") else np.asarray(expected)
    diff = np.abs(got - exp)
    idx = np.unravel_index(int(np.argmax(diff)), diff.shape)
    return CompareReport(float(diff.max()), tuple(int(i) for i in idx), got)


@dataclass(frozen=True)
class ConvergenceReport:
    order: float | None
    errors: tuple[float, float]
    step: float
    reliable: bool
    note: str


def convergence_check(chart: ChartMetric, point, truth: float | None = -1.0,
                      step: float = 0.05, floor: float = 1e-11) -> ConvergenceReport:
    """Observed order of the oracle from runs at ``step`` and ``step / 2``.

    The error is the largest deviation of a coordinate-plane sectional
    curvature from ``truth`` (constant curvature of the model).  Orders
    outside [3.5, 4.5], errors at the round-off floor, or stencils leaving
    the domain are flagged unreliable.
    """
    errs = []
    for h in (step, step / 2):
        try:
            T = riemann_fd(chart, point, FDConfig(h))
        except DomainMargin as exc:
            return ConvergenceReport(None, (math.nan, math.nan), step, False, f"domain margin: {exc}")
        secs = sectional_coordinate_planes(chart, T, point)
        errs.append(max(abs(s - truth) for s in secs.values()))
    e1, e2 = errs
    if e1 < floor or e2 < floor:
        return ConvergenceReport(None, (e1, e2), step, False, "errors at round-off floor; order not measured")
    order = math.log2(e1 / e2)
    ok = 3.5 <= order <= 4.5
    return ConvergenceReport(order, (e1, e2), step, ok,
                             "ok" if ok else "observed order outside [3.5, 4.5]")
