"""Grid-based decisions for eight univariate stochastic orders.

``check_order(A, B, relation)`` answers "is A smaller than B?" on a probe
grid. Pointwise relations (st, hr, rh, lorenz, rs) compare a defining
quantity of A against that of B at each grid point; monotone relations
(lr, star, disp) look at the consecutive steps of a ratio or difference.
Either way a signed margin is formed that is positive when the point supports
A <= B, and the outcome follows from which signs occur outside the tie band.

Every verdict is a statement about the probed grid, not a proof.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np

from ._monotone import Monotonicity, scan_steps
from .baselines import MonotoneVerdict
from .exceptions import DomainError, ImproperModelError
from .mixture import integrated_sf, upper_lorenz

__all__ = [
    "Relation",
    "Outcome",
    "GridConfig",
    "Witness",
    "OrderVerdict",
    "check_order",
    "locate_crossing",
    "reciprocal_scale_curve",
    "saunders_derivative_criterion",
    "rs_derivative_criterion",
]

MIN_USABLE = 8


class Relation(str, Enum):
    ST = "st"
    HR = "hr"
    RH = "rh"
    LR = "lr"
    STAR = "star"
    LORENZ = "lorenz"
    DISP = "disp"
    RS = "rs"


class Outcome(str, Enum):
    HOLDS_FORWARD = "holds_forward"
    HOLDS_BACKWARD = "holds_backward"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"
    INCONCLUSIVE = "inconclusive"

    def flipped(self) -> "Outcome":
        swap = {Outcome.HOLDS_FORWARD: Outcome.HOLDS_BACKWARD,
                Outcome.HOLDS_BACKWARD: Outcome.HOLDS_FORWARD}
        return swap.get(self, self)


@dataclass(frozen=True)
class GridConfig:
    n_points: int = 2001
    p_lo: float = 1e-6
    p_hi: float = 1 - 1e-6
    eps_abs: float = 1e-9
    eps_rel: float = 1e-9

    def __post_init__(self):
        if not 0 < self.p_lo < self.p_hi < 1:
            raise ValueError(f"need 0 < p_lo < p_hi < 1, got {self.p_lo}, {self.p_hi}")
        if self.n_points < 32:
            raise ValueError("grid needs at least 32 points")
        if self.eps_abs < 0 or self.eps_rel < 0:
            raise ValueError("tolerances must be nonnegative")

    def p_grid(self) -> np.ndarray:
        return np.linspace(self.p_lo, self.p_hi, self.n_points)

    def tightened(self, factor: float = 10.0) -> "GridConfig":
        return replace(self, eps_abs=self.eps_abs / factor, eps_rel=self.eps_rel / factor)

    def to_dict(self) -> dict:
        return {"n_points": self.n_points, "p_lo": self.p_lo, "p_hi": self.p_hi,
                "eps_abs": self.eps_abs, "eps_rel": self.eps_rel}


@dataclass(frozen=True)
class Witness:
    """A grid point that decides a direction.

    Pointwise relations: ``lhs``/``rhs`` are A's and B's defining quantities
    at ``x``. Monotone relations: ``x`` closes a consecutive pair and
    ``lhs``/``rhs`` are the statistic at the pair's left and right ends.
    ``margin`` is positive when the point supports A <= B; ``tol`` is the
    tie band it had to clear.
    """

    x: float
    lhs: float
    rhs: float
    margin: float
    tol: float

    @property
    def strength(self) -> float:
        return abs(self.margin) / self.tol if self.tol > 0 else np.inf

    def to_dict(self) -> dict:
        return {"x": self.x, "lhs": self.lhs, "rhs": self.rhs}


@dataclass(frozen=True)
class OrderVerdict:
    relation: Relation
    outcome: Outcome
    witnesses: Tuple[Witness, ...]
    probe: GridConfig
    usable_points: int = 0
    curve: Optional[dict] = field(default=None, compare=False, repr=False)

    def supports(self, forward: bool) -> bool:
        """True when the outcome is compatible with A <= B (or A >= B)."""
        want = Outcome.HOLDS_FORWARD if forward else Outcome.HOLDS_BACKWARD
        return self.outcome in (want, Outcome.EQUAL)

    def violation_strength(self, forward: bool) -> float:
        """Largest margin/tolerance ratio among witnesses against a direction."""
        against = [w.strength for w in self.witnesses if (w.margin < 0) == forward]
        return max(against, default=0.0)

    def to_dict(self) -> dict:
        return {"relation": self.relation.value, "outcome": self.outcome.value,
                "witnesses": [w.to_dict() for w in self.witnesses]}


def _outcome(pos: bool, neg: bool) -> Outcome:
    if pos and neg:
        return Outcome.INCOMPARABLE
    if pos:
        return Outcome.HOLDS_FORWARD
    if neg:
        return Outcome.HOLDS_BACKWARD
    return Outcome.EQUAL


def _require_proper(dist):
    if not getattr(dist, "is_proper", True):
        detail = getattr(getattr(dist, "properness", None), "detail", "")
        raise ImproperModelError(f"order checks need proper distributions: {detail}")


def _pointwise(relation, cfg, pts, lhs, rhs, margin, scale) -> OrderVerdict:
    curve = {"point": pts, "lhs": lhs, "rhs": rhs}
    keep = ~np.isnan(margin)
    if keep.sum() < MIN_USABLE:
        return OrderVerdict(relation, Outcome.INCONCLUSIVE, (), cfg, int(keep.sum()), curve)
    pts, lhs, rhs, margin, scale = (a[keep] for a in (pts, lhs, rhs, margin, scale))
    tol = cfg.eps_abs + cfg.eps_rel * np.where(np.isfinite(scale), scale, 0.0)
    pos, neg = margin > tol, margin < -tol
    witnesses = []
    for mask, pick in ((pos, np.argmax), (neg, np.argmin)):
        if mask.any():
            idx = np.flatnonzero(mask)
            k = idx[pick(margin[idx])]
            witnesses.append(Witness(float(pts[k]), float(lhs[k]), float(rhs[k]),
                                     float(margin[k]), float(tol[k])))
    return OrderVerdict(relation, _outcome(pos.any(), neg.any()), tuple(witnesses),
                        cfg, int(keep.sum()), curve)


def _monotone(relation, cfg, pts, stat, scale=None, curve=None) -> OrderVerdict:
    keep = ~np.isnan(stat)
    if keep.sum() < MIN_USABLE:
        return OrderVerdict(relation, Outcome.INCONCLUSIVE, (), cfg, int(keep.sum()), curve)
    pts, stat = pts[keep], stat[keep]
    scan = scan_steps(stat, cfg.eps_abs, cfg.eps_rel,
                      None if scale is None else scale[keep])
    witnesses = []
    for mask, pick in ((scan.up, np.argmax), (scan.down, np.argmin)):
        if mask.any():
            idx = np.flatnonzero(mask)
            k = idx[pick(scan.steps[idx])]
            witnesses.append(Witness(float(pts[k + 1]), float(stat[k]), float(stat[k + 1]),
                                     float(scan.steps[k]), float(scan.tol[k])))
    return OrderVerdict(relation, _outcome(scan.up.any(), scan.down.any()),
                        tuple(witnesses), cfg, int(keep.sum()), curve)


def _x_grid(a, b, cfg) -> np.ndarray:
    p = cfg.p_grid()
    return np.unique(np.concatenate([np.asarray(a.quantile(p)), np.asarray(b.quantile(p))]))


def _log(x):
    with np.errstate(divide="ignore"):
        return np.log(x)


def _check_st(a, b, cfg):
    x = _x_grid(a, b, cfg)
    sa, sb = np.asarray(a.sf(x)), np.asarray(b.sf(x))
    return _pointwise(Relation.ST, cfg, x, sa, sb, sb - sa, np.maximum(sa, sb))


def _check_hr(a, b, cfg):
    x = _x_grid(a, b, cfg)
    sa, sb = np.asarray(a.sf(x)), np.asarray(b.sf(x))
    ok = (sa > 0) & (sb > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ha = np.where(ok, np.asarray(a.pdf(x)) / sa, np.nan)
        hb = np.where(ok, np.asarray(b.pdf(x)) / sb, np.nan)
    return _pointwise(Relation.HR, cfg, x, ha, hb, ha - hb, np.maximum(np.abs(ha), np.abs(hb)))


def _check_rh(a, b, cfg):
    x = _x_grid(a, b, cfg)
    ca, cb = np.asarray(a.cdf(x)), np.asarray(b.cdf(x))
    with np.errstate(divide="ignore", invalid="ignore"):
        ra = np.where(ca > 0, np.asarray(a.pdf(x)) / ca, np.nan)
        rb = np.where(cb > 0, np.asarray(b.pdf(x)) / cb, np.nan)
    margin = rb - ra
    # Where only one cdf has left zero, the cdf ratio F_B/F_A starts at
    # infinity (or at zero): the distribution that starts later is larger.
    margin = np.where((ca == 0) & (cb > 0), -np.inf, margin)
    margin = np.where((cb == 0) & (ca > 0), np.inf, margin)
    return _pointwise(Relation.RH, cfg, x, ra, rb, margin, np.maximum(np.abs(ra), np.abs(rb)))


def _check_lr(a, b, cfg):
    x = _x_grid(a, b, cfg)
    fa, fb = np.asarray(a.pdf(x)), np.asarray(b.pdf(x))
    stat = np.where((fa > 0) | (fb > 0), _log(fb) - _log(fa), np.nan)
    return _monotone(Relation.LR, cfg, x, stat,
                     curve={"point": x, "lhs": fa, "rhs": fb})


def _check_star(a, b, cfg):
    p = cfg.p_grid()
    qa, qb = np.asarray(a.quantile(p)), np.asarray(b.quantile(p))
    stat = np.where((qa > 0) & (qb > 0), _log(qb) - _log(qa), np.nan)
    return _monotone(Relation.STAR, cfg, qa, stat,
                     curve={"point": p, "lhs": qa, "rhs": qb})


def _check_disp(a, b, cfg):
    p = cfg.p_grid()
    qa, qb = np.asarray(a.quantile(p)), np.asarray(b.quantile(p))
    return _monotone(Relation.DISP, cfg, p, qb - qa, np.maximum(np.abs(qa), np.abs(qb)),
                     curve={"point": p, "lhs": qa, "rhs": qb})


def _check_lorenz(a, b, cfg):
    t = np.linspace(0.0, 1.0, cfg.n_points)
    la, lb = np.asarray(upper_lorenz(a, t)), np.asarray(upper_lorenz(b, t))
    return _pointwise(Relation.LORENZ, cfg, t, la, lb, lb - la, np.maximum(la, lb))


def _check_rs(a, b, cfg):
    p = cfg.p_grid()
    wa = np.asarray(integrated_sf(a, np.asarray(a.quantile(p))))
    wb = np.asarray(integrated_sf(b, np.asarray(b.quantile(p))))
    return _pointwise(Relation.RS, cfg, p, wa, wb, wb - wa, np.maximum(wa, wb))


_CHECKS = {
    Relation.ST: _check_st,
    Relation.HR: _check_hr,
    Relation.RH: _check_rh,
    Relation.LR: _check_lr,
    Relation.STAR: _check_star,
    Relation.LORENZ: _check_lorenz,
    Relation.DISP: _check_disp,
    Relation.RS: _check_rs,
}


def check_order(a, b, relation, cfg: Optional[GridConfig] = None) -> OrderVerdict:
    """Decide ``a <= b`` in ``relation`` on the probe grid.

    ``HOLDS_FORWARD`` means a <= b, ``HOLDS_BACKWARD`` means b <= a. Works
    for baselines and proper mixtures alike.
    """
    relation = Relation(relation)
    cfg = cfg or GridConfig()
    _require_proper(a)
    _require_proper(b)
    if relation in (Relation.LORENZ, Relation.RS):
        for d in (a, b):
            if not np.isfinite(d.mean):
                raise DomainError(f"{relation.value} order needs finite means")
    return _CHECKS[relation](a, b, cfg)


def locate_crossing(a, b, lo: float, hi: float, tol: float = 1e-12) -> float:
    """Bisect for a sign change of F_A - F_B on ``[lo, hi]``."""
    g = lambda x: float(a.cdf(x)) - float(b.cdf(x))
    glo, ghi = g(lo), g(hi)
    if glo == 0:
        return float(lo)
    if ghi == 0:
        return float(hi)
    if np.sign(glo) == np.sign(ghi):
        raise ValueError("cdf difference has the same sign at both ends")
    while hi - lo > tol * max(1.0, abs(lo)):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0:
            return mid
        if np.sign(gm) == np.sign(glo):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


# -- derivative criteria ------------------------------------------------------

def reciprocal_scale_curve(baseline, location: float, counts, weights
                           ) -> Callable[[float], object]:
    """lam* -> mixture with scales 1/(1 - lam*) and 1/lam*, common location.

    This is the one-parameter family F_{lam*}(x) = n1 r1 F((x-s)(1-lam*))
    + n2 r2 F((x-s) lam*) obtained by normalising reciprocal scales to sum 1.
    """
    from .mixture import ComponentGroup, build_mixture

    (n1, n2), (r1, r2) = counts, weights

    def model(lam_star: float):
        if not 0 < lam_star < 1:
            raise DomainError("lam* must lie in (0, 1)")
        return build_mixture(baseline, (ComponentGroup(n1, r1, location, 1 / (1 - lam_star)),
                                        ComponentGroup(n2, r2, location, 1 / lam_star)))

    return model


def _fd(fn, lam, h):
    """Central difference in lam plus an error bound (Richardson + rounding)."""
    d1 = (fn(lam + h) - fn(lam - h)) / (2 * h)
    d2 = (fn(lam + 2 * h) - fn(lam - 2 * h)) / (4 * h)
    rounding = 8 * np.finfo(float).eps * np.maximum(1.0, np.abs(fn(lam))) / (2 * h)
    return d1, np.abs(d1 - d2) + rounding


def _criterion_verdict(x, ratio, noise, cfg) -> MonotoneVerdict:
    from ._monotone import classify_sequence

    keep = np.isfinite(ratio)
    probe = (float(x[0]), float(x[-1])) if x.size else None
    if keep.sum() < MIN_USABLE:
        return MonotoneVerdict(Monotonicity.INCONCLUSIVE, None, cfg.eps_abs, cfg.eps_rel, probe)
    xs = x[keep]
    kind, bad = classify_sequence(ratio[keep], cfg.eps_abs, cfg.eps_rel, noise=noise[keep])
    witness = None if bad is None else (float(xs[bad]), float(xs[bad + 1]))
    return MonotoneVerdict(kind, witness, cfg.eps_abs, cfg.eps_rel, probe)


def saunders_derivative_criterion(curve: Callable[[float], object], lam_star: float,
                                  mode: str = "star", cfg: Optional[GridConfig] = None,
                                  h: float = 1e-5) -> MonotoneVerdict:
    """Monotonicity of dF/dlam / (x f) (``star``) or dF/dlam / f (``disp``).

    Decreasing in x is the condition for the family to increase in the
    corresponding order as lam grows.
    """
    if mode not in ("star", "disp"):
        raise ValueError(f"mode must be 'star' or 'disp', got {mode!r}")
    cfg = cfg or GridConfig()
    model = curve(lam_star)
    x = np.asarray(model.quantile(cfg.p_grid()))
    step = h * max(abs(lam_star), 1e-300)
    dF, err = _fd(lambda lam: np.asarray(curve(lam).cdf(x)), lam_star, step)
    f = np.asarray(model.pdf(x))
    denom = f * x if mode == "star" else f
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(denom > 0, dF / denom, np.nan)
        noise = np.where(denom > 0, err / denom, np.nan)
    return _criterion_verdict(x, ratio, noise, cfg)


def rs_derivative_criterion(curve: Callable[[float], object], lam_star: float,
                            cfg: Optional[GridConfig] = None,
                            h: float = 1e-5) -> MonotoneVerdict:
    """Monotonicity of dW/dlam / sf, W the integrated survival function.

    Increasing in x is the condition for the family to increase in the
    right-spread order as lam grows.
    """
    cfg = cfg or GridConfig()
    model = curve(lam_star)
    x = np.asarray(model.quantile(cfg.p_grid()))
    step = h * max(abs(lam_star), 1e-300)
    dW, err = _fd(lambda lam: np.asarray(integrated_sf(curve(lam), x)), lam_star, step)
    sf = np.asarray(model.sf(x))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(sf > 0, dW / sf, np.nan)
        noise = np.where(sf > 0, err / sf, np.nan)
    return _criterion_verdict(x, ratio, noise, cfg)
