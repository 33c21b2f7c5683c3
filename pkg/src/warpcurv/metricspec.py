"""The warped metric ``dr^2 + v^2 dtheta^2 + h^2 g_hyp`` as a serializable value.

Spec files are line-oriented ``key = value`` text followed by ``[v]`` and
``[h]`` sections listing warping-function pieces::

    # warpcurv metric spec
    model = paper-negative
    n = 4
    eps = 0.10000000000000001
    rho = 12.41603375
    scale = 1
    [v]
    piece = -inf -12.41603375 exp
    ...
    [h]
    ...
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import InvalidParams
from .warpfn import (Interpolant, MetricVariant, WarpingFunction, exponential, from_lines,
                     hyperbolic_pair, to_lines)

HYPERBOLIC = "hyperbolic"
CUSP = "cusp"
MODELS = (MetricVariant.PAPER, MetricVariant.HEINTZE_SCHROEDER, MetricVariant.FUJIWARA,
          HYPERBOLIC, CUSP)


@dataclass(frozen=True)
class MetricSpec:
    v: WarpingFunction
    h: WarpingFunction
    n: int
    model: str
    eps: float | None = None
    rho: float | None = None
    tau: float | None = None
    scale: float = 1.0

    def __post_init__(self):
        if self.n < 3:
            raise InvalidParams(f"dimension must be >= 3, got {self.n}")
        if self.model not in MODELS:
            raise InvalidParams(f"unknown model {self.model!r}")
        if not self.scale > 0:
            raise InvalidParams("scale must be positive")

    @property
    def variant(self) -> MetricVariant | None:
        if self.model == MetricVariant.FUJIWARA:
            return MetricVariant.fujiwara(self.tau)
        if self.model in (MetricVariant.PAPER, MetricVariant.HEINTZE_SCHROEDER):
            return MetricVariant(self.model)
        return None

    @property
    def requires_strict(self) -> bool:
        return self.model in (MetricVariant.PAPER, MetricVariant.FUJIWARA, HYPERBOLIC)

    @property
    def domain(self) -> tuple[float, float]:
        """Domain in the (possibly rescaled) radial coordinate."""
        lo = max(self.v.domain[0], self.h.domain[0])
        hi = min(self.v.domain[1], self.h.domain[1])
        return lo * self.scale, hi * self.scale

    def rescaled(self, s: float) -> "MetricSpec":
        """The metric multiplied by ``s^2``; sectional curvatures scale by ``1/s^2``."""
        return replace(self, scale=self.scale * s)

    @classmethod
    def from_interpolant(cls, ip: Interpolant, n: int) -> "MetricSpec":
        return cls(ip.v, ip.h, n, ip.variant.tag, ip.eps, ip.rho, ip.variant.tau)

    @classmethod
    def hyperbolic(cls, n: int) -> "MetricSpec":
        v, h = hyperbolic_pair(0.0)
        return cls(v, h, n, HYPERBOLIC)

    @classmethod
    def cusp(cls, n: int) -> "MetricSpec":
        return cls(exponential(), exponential(), n, CUSP)

    def to_text(self) -> str:
        lines = ["# warpcurv metric spec", f"model = {self.model}", f"n = {self.n}"]
        for key in ("eps", "rho", "tau"):
            val = getattr(self, key)
            if val is not None:
                lines.append(f"{key} = {format(val, '.17g')}")
        lines.append(f"scale = {format(self.scale, '.17g')}")
        lines.append("[v]")
        lines += to_lines(self.v)
        lines.append("[h]")
        lines += to_lines(self.h)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "MetricSpec":
        header: dict[str, str] = {}
        sections: dict[str, list[str]] = {}
        current = None
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("[") and line.endswith("]"):
                current = line[1:-1].strip()
                sections[current] = []
            elif current is None:
                key, sep, val = line.partition("=")
                if not sep:
                    raise InvalidParams(f"malformed spec line {raw!r}")
                header[key.strip()] = val.strip()
            else:
                sections[current].append(line)
        try:
            n = int(header["n"])
            model = header["model"]
        except KeyError as exc:
            raise InvalidParams(f"spec file missing key {exc}") from None
        if "v" not in sections or "h" not in sections:
            raise InvalidParams("spec file needs [v] and [h] sections")

        def opt(key):
            return float(header[key]) if key in header else None

        return cls(from_lines(sections["v"]), from_lines(sections["h"]), n, model,
                   opt("eps"), opt("rho"), opt("tau"), opt("scale") or 1.0)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path: str | Path) -> "MetricSpec":
        return cls.from_text(Path(path).read_text())


def is_infinite(x: float) -> bool:
    return math.isinf(x)
