"""Baseline distributions F on the nonnegative half-line and aging notions.

Every family is parameterised on its standard scale; location and scale
enter only through :mod:`mixorder.mixture`. All evaluators accept scalars or
arrays and return the same shape.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import ClassVar, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from ._monotone import Monotonicity, classify_sequence
from .exceptions import DomainError

__all__ = [
    "Family",
    "AgingNotion",
    "BaselineDistribution",
    "Exponential",
    "Weibull",
    "Frechet",
    "Power",
    "MonotoneVerdict",
    "make_baseline",
    "evaluate",
    "aging_function",
    "classify_monotone_aging",
]


class Family(str, Enum):
    EXPONENTIAL = "exponential"
    WEIBULL = "weibull"
    FRECHET = "frechet"
    POWER = "power"


class AgingNotion(str, Enum):
    """Defining function whose monotonicity names an aging class.

    ``PDF`` (monotone density, i.e. concave/convex cdf) is not an aging class
    proper but several theorem hypotheses ask for it.
    """

    FR = "fr"
    RFR = "rfr"
    PFR = "pfr"
    PRFR = "prfr"
    PLR = "plr"
    LR = "lr"
    PDF = "pdf"


def _out(values, like):
    return float(values) if np.ndim(like) == 0 else values


@dataclass(frozen=True)
class BaselineDistribution:
    """Closed-form baseline family on ``(support_lo, support_hi)``.

    Subclasses implement the ``_``-prefixed evaluators for points strictly
    inside the support; the public methods apply the conventions outside it.
    """

    params: Tuple[float, ...] = ()

    family: ClassVar[Family]
    n_params: ClassVar[int] = 0
    support_lo: ClassVar[float] = 0.0

    def __post_init__(self):
        params = tuple(float(p) for p in self.params)
        if len(params) != self.n_params:
            raise ValueError(
                f"{self.family.value} takes {self.n_params} parameter(s), got {len(params)}")
        if not all(np.isfinite(p) and p > 0 for p in params):
            raise ValueError(f"{self.family.value} parameters must be positive, got {params}")
        object.__setattr__(self, "params", params)

    @property
    def support_hi(self) -> float:
        return np.inf

    @property
    def bounded(self) -> bool:
        return np.isfinite(self.support_hi)

    @property
    def is_proper(self) -> bool:
        return True

    # -- interior closed forms ------------------------------------------------
    def _cdf(self, t):
        raise NotImplementedError

    def _sf(self, t):
        raise NotImplementedError

    def _pdf(self, t):
        raise NotImplementedError

    def _slope(self, t):
        raise NotImplementedError

    def _quantile(self, p):
        raise NotImplementedError

    def _tail(self, t):
        raise NotImplementedError

    def _hazard(self, t):
        return self._pdf(t) / self._sf(t)

    def _rhazard(self, t):
        return self._pdf(t) / self._cdf(t)

    # -- public evaluators ----------------------------------------------------
    def _piecewise(self, t, inner, below, above):
        t = np.asarray(t, dtype=float)
        inside = (t > self.support_lo) & (t < self.support_hi)
        out = np.where(t >= self.support_hi, above, below).astype(float)
        if inside.any():
            out[inside] = inner(t[inside])
        return out

    def cdf(self, t):
        return _out(self._piecewise(t, self._cdf, 0.0, 1.0), t)

    def sf(self, t):
        return _out(self._piecewise(t, self._sf, 1.0, 0.0), t)

    def pdf(self, t):
        return _out(self._piecewise(t, self._pdf, 0.0, 0.0), t)

    def density_formula(self, t):
        """The density expression applied for every ``t > 0``.

        Differs from :meth:`pdf` only for bounded families, where the formula
        keeps growing past the upper support endpoint.
        """
        return self.pdf(t)

    def hazard(self, t):
        arr = np.asarray(t, dtype=float)
        if np.any(arr >= self.support_hi):
            raise DomainError("hazard undefined where the survival function is 0")
        return _out(self._piecewise(arr, self._hazard, 0.0, np.nan), t)

    def reversed_hazard(self, t):
        arr = np.asarray(t, dtype=float)
        if np.any(arr <= self.support_lo):
            raise DomainError("reversed hazard undefined where the cdf is 0")
        return _out(self._piecewise(arr, self._rhazard, np.nan, 0.0), t)

    def log_density_slope(self, t):
        """f'(t)/f(t) from the closed form; defined inside the support only."""
        arr = np.asarray(t, dtype=float)
        if np.any((arr <= self.support_lo) | (arr >= self.support_hi)):
            raise DomainError("log-density slope is defined inside the support only")
        return _out(self._slope(arr), t)

    def quantile(self, p):
        arr = np.asarray(p, dtype=float)
        if np.any((arr <= 0.0) | (arr >= 1.0)) or np.any(np.isnan(arr)):
            raise DomainError("quantile requires p in (0, 1)")
        return _out(self._quantile(arr), p)

    def tail_integral(self, t):
        """Integrated survival function, the integral of sf over (t, inf)."""
        t = np.asarray(t, dtype=float)
        inner = np.maximum(t, self.support_lo)
        out = np.zeros_like(inner)
        inside = inner < self.support_hi
        if inside.any():
            out[inside] = self._tail(inner[inside])
        out = out + np.maximum(self.support_lo - t, 0.0)
        return _out(out, t)

    integrated_sf = tail_integral

    @property
    def mean(self) -> float:
        return float(self.tail_integral(0.0))

    def to_dict(self) -> dict:
        return {"family": self.family.value, "params": list(self.params)}


@dataclass(frozen=True)
class Exponential(BaselineDistribution):
    """Unit-rate exponential."""

    family: ClassVar[Family] = Family.EXPONENTIAL
    n_params: ClassVar[int] = 0

    def _cdf(self, t):
        return -np.expm1(-t)

    def _sf(self, t):
        return np.exp(-t)

    def _pdf(self, t):
        return np.exp(-t)

    def _hazard(self, t):
        return np.ones_like(t)

    def _rhazard(self, t):
        return 1.0 / np.expm1(t)

    def _slope(self, t):
        return -np.ones_like(t)

    def _quantile(self, p):
        return -np.log1p(-p)

    def _tail(self, t):
        return np.exp(-t)


@dataclass(frozen=True)
class Weibull(BaselineDistribution):
    """F(t) = 1 - exp(-t**alpha)."""

    family: ClassVar[Family] = Family.WEIBULL
    n_params: ClassVar[int] = 1

    @property
    def alpha(self) -> float:
        return self.params[0]

    def _cdf(self, t):
        return -np.expm1(-t ** self.alpha)

    def _sf(self, t):
        return np.exp(-t ** self.alpha)

    def _pdf(self, t):
        a = self.alpha
        return a * t ** (a - 1) * np.exp(-t ** a)

    def _hazard(self, t):
        a = self.alpha
        return a * t ** (a - 1)

    def _rhazard(self, t):
        a = self.alpha
        return a * t ** (a - 1) / np.expm1(t ** a)

    def _slope(self, t):
        a = self.alpha
        return (a - 1) / t - a * t ** (a - 1)

    def _quantile(self, p):
        return (-np.log1p(-p)) ** (1.0 / self.alpha)

    def _tail(self, t):
        a = self.alpha
        return special.gamma(1 + 1 / a) * special.gammaincc(1 / a, t ** a)


@dataclass(frozen=True)
class Frechet(BaselineDistribution):
    """F(t) = exp(-t**(-alpha)); the mean is finite only for alpha > 1."""

    family: ClassVar[Family] = Family.FRECHET
    n_params: ClassVar[int] = 1

    @property
    def alpha(self) -> float:
        return self.params[0]

    def _cdf(self, t):
        return np.exp(-t ** -self.alpha)

    def _sf(self, t):
        return -np.expm1(-t ** -self.alpha)

    def _pdf(self, t):
        a = self.alpha
        return a * t ** (-a - 1) * np.exp(-t ** -a)

    def _hazard(self, t):
        a = self.alpha
        with np.errstate(over="ignore"):  # expm1 -> inf near 0, hazard -> 0
            return a * t ** (-a - 1) / np.expm1(t ** -a)

    def _rhazard(self, t):
        a = self.alpha
        return a * t ** (-a - 1)

    def _slope(self, t):
        a = self.alpha
        return -(a + 1) / t + a * t ** (-a - 1)

    def _quantile(self, p):
        return (-np.log(p)) ** (-1.0 / self.alpha)

    def _tail(self, t):
        a = self.alpha
        if a <= 1:
            return np.full_like(t, np.inf)
        s = 1.0 - 1.0 / a
        with np.errstate(invalid="ignore", divide="ignore"):
            z = t ** -a
            lower = special.gamma(s) * special.gammainc(s, z)
            body = lower + t * np.expm1(-z)
        return np.where(t == 0, special.gamma(s), body)


@dataclass(frozen=True)
class Power(BaselineDistribution):
    """f(t) = a t**(a-1) / b**a on (0, b)."""

    family: ClassVar[Family] = Family.POWER
    n_params: ClassVar[int] = 2

    @property
    def support_hi(self) -> float:
        return self.params[1]

    def _cdf(self, t):
        a, b = self.params
        return (t / b) ** a

    def _sf(self, t):
        a, b = self.params
        return -np.expm1(a * np.log(t / b))

    def _pdf(self, t):
        a, b = self.params
        return a * t ** (a - 1) / b ** a

    def density_formula(self, t):
        a, b = self.params
        arr = np.asarray(t, dtype=float)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(arr > 0, a * np.abs(arr) ** (a - 1) / b ** a, 0.0)
        return _out(out, t)

    def _rhazard(self, t):
        return self.params[0] / t

    def _slope(self, t):
        return (self.params[0] - 1) / t

    def _quantile(self, p):
        a, b = self.params
        return b * p ** (1.0 / a)

    def _tail(self, t):
        a, b = self.params
        return (b - t) - (b ** (a + 1) - t ** (a + 1)) / ((a + 1) * b ** a)


_FAMILIES = {cls.family: cls for cls in (Exponential, Weibull, Frechet, Power)}


def make_baseline(family, params: Sequence[float] = ()) -> BaselineDistribution:
    """Validated baseline from a family id (enum or lowercase string)."""
    try:
        fam = Family(family.lower() if isinstance(family, str) else family)
    except ValueError:
        raise ValueError(f"unknown baseline family {family!r}") from None
    return _FAMILIES[fam](tuple(params))


_FUNCTIONALS = ("pdf", "cdf", "sf", "quantile", "hazard", "reversed_hazard",
                "log_density_slope")


def evaluate(dist, functional: str, point):
    """Dispatch a named functional; works for baselines and mixtures alike."""
    if functional not in _FUNCTIONALS or not hasattr(dist, functional):
        raise ValueError(f"unknown functional {functional!r}")
    return getattr(dist, functional)(point)


def aging_function(baseline: BaselineDistribution, notion, t):
    """The function whose monotonicity defines ``notion``."""
    notion = AgingNotion(notion)
    t = np.asarray(t, dtype=float)
    if notion is AgingNotion.FR:
        return baseline.hazard(t)
    if notion is AgingNotion.RFR:
        return baseline.reversed_hazard(t)
    if notion is AgingNotion.PFR:
        return t * baseline.hazard(t)
    if notion is AgingNotion.PRFR:
        return t * baseline.reversed_hazard(t)
    if notion is AgingNotion.PLR:
        return -t * baseline.log_density_slope(t)
    if notion is AgingNotion.LR:
        return baseline.log_density_slope(t)
    return baseline.pdf(t)


@dataclass(frozen=True)
class MonotoneVerdict:
    """Monotonicity of a sampled function, valid on the probed interval only."""

    classification: Monotonicity
    witness: Optional[Tuple[float, float]] = None
    slack: float = 1e-9
    rel_slack: float = 1e-9
    probe: Optional[Tuple[float, float]] = None

    def satisfies(self, direction) -> bool:
        """Non-strict reading: a constant function is both increasing and decreasing."""
        direction = Monotonicity(direction)
        if self.classification is Monotonicity.CONSTANT:
            return direction is not Monotonicity.NON_MONOTONE
        return self.classification is direction

    def to_dict(self) -> dict:
        return {
            "classification": self.classification.value,
            "witness": list(self.witness) if self.witness else None,
            "slack": self.slack,
            "rel_slack": self.rel_slack,
            "probe": list(self.probe) if self.probe else None,
        }


def default_probe(baseline: BaselineDistribution) -> Tuple[float, float]:
    return (float(baseline.quantile(1e-6)), float(baseline.quantile(1 - 1e-6)))


def classify_monotone_aging(baseline: BaselineDistribution, notion,
                            probe: Optional[Tuple[float, float]] = None,
                            n_points: int = 512, eps_abs: float = 1e-9,
                            eps_rel: float = 1e-9) -> MonotoneVerdict:
    """Classify the monotonicity of an aging function on a log-spaced grid."""
    return _classify_cached(baseline, AgingNotion(notion),
                            default_probe(baseline) if probe is None else tuple(map(float, probe)),
                            int(n_points), float(eps_abs), float(eps_rel))


@lru_cache(maxsize=512)
def _classify_cached(baseline, notion, probe, n_points, eps_abs, eps_rel):
    lo, hi = probe
    if n_points < 16:
        raise ValueError("aging probe needs at least 16 points")
    if not lo < hi:
        raise ValueError(f"degenerate probe interval {probe}")
    if lo <= baseline.support_lo or hi >= baseline.support_hi:
        raise DomainError(f"probe {probe} is not strictly inside the support")
    grid = np.geomspace(lo, hi, n_points)
    values = aging_function(baseline, notion, grid)
    kind, bad = classify_sequence(values, eps_abs, eps_rel)
    witness = None if bad is None else (float(grid[bad]), float(grid[bad + 1]))
    return MonotoneVerdict(kind, witness, eps_abs, eps_rel, (lo, hi))
