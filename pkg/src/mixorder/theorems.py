"""Encoded comparison theorems for two-group location-scale mixtures.

Each theorem is a set of hypothesis predicates plus a claimed order between
U (built from ``u_groups``) and V (built from ``v_groups``). A scenario is
audited by evaluating the predicates, running the order check, and comparing
the grid verdict with the claimed direction. ``sweep`` draws many
hypothesis-respecting scenarios from a seed and tallies the outcome.

Statements are encoded as written. Where a statement lists alternatives
(a parenthetical "(or ...)" branch), each alternative is a variant and the
report names the one that fired.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ._monotone import Monotonicity
from .baselines import AgingNotion, BaselineDistribution, classify_monotone_aging, make_baseline
from .exceptions import InfeasibleScenarioError
from .majorization import Chamber, MajorizationMode, chamber_of, compare_vectors, expand, scale_ratio_leq
from .mixture import ComponentGroup, ProbeReport, build_mixture
from .orders import GridConfig, OrderVerdict, Outcome, Relation, check_order, locate_crossing

__all__ = [
    "TheoremId",
    "Consistency",
    "Scenario",
    "HypothesisResult",
    "HypothesisSet",
    "TheoremReport",
    "SamplerBounds",
    "SweepSummary",
    "CounterexampleReport",
    "check_hypotheses",
    "check_conclusion",
    "verify",
    "sweep",
    "draw_scenario",
    "reproduce_counterexample",
    "counterexample_models",
    "CONTRADICTION_FACTOR",
]

CONTRADICTION_FACTOR = 10.0
SATISFIED, VIOLATED, INCONCLUSIVE = "satisfied", "violated", "inconclusive"


class TheoremId(str, Enum):
    T4_1_I = "t4_1_i"
    T4_1_II = "t4_1_ii"
    T4_2 = "t4_2"
    T4_3 = "t4_3"
    T4_4 = "t4_4"
    T4_5 = "t4_5"
    T4_6 = "t4_6"
    C_LORENZ = "c_lorenz"
    T4_7 = "t4_7"
    T4_8 = "t4_8"

    @classmethod
    def parse(cls, value) -> "TheoremId":
        try:
            return cls(value.lower() if isinstance(value, str) else value)
        except ValueError:
            raise ValueError(f"unknown theorem id {value!r}") from None


class Consistency(str, Enum):
    CONSISTENT = "consistent_with_paper"
    CONTRADICTS = "contradicts_paper"
    HYPOTHESES_NOT_MET = "hypotheses_not_met"
    INCONCLUSIVE = "inconclusive"


# -- scenarios ---------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    baseline: BaselineDistribution
    u_groups: Tuple[ComponentGroup, ComponentGroup]
    v_groups: Tuple[ComponentGroup, ComponentGroup]
    shared_weights: bool = True

    def __post_init__(self):
        if len(self.u_groups) != 2 or len(self.v_groups) != 2:
            raise ValueError("a scenario needs exactly two groups per model")
        object.__setattr__(self, "u_groups", tuple(self.u_groups))
        object.__setattr__(self, "v_groups", tuple(self.v_groups))
        if self.shared_weights:
            ru = tuple(g.weight for g in self.u_groups)
            rv = tuple(g.weight for g in self.v_groups)
            if not np.allclose(ru, rv, rtol=0, atol=1e-12):
                raise InfeasibleScenarioError(f"shared_weights set but r differs: {ru} vs {rv}")

    def u_model(self):
        return build_mixture(self.baseline, self.u_groups)

    def v_model(self):
        return build_mixture(self.baseline, self.v_groups)

    def _field(self, which: str, attr: str) -> np.ndarray:
        groups = self.u_groups if which == "u" else self.v_groups
        return np.array([getattr(g, attr) for g in groups], dtype=float)

    def to_dict(self) -> dict:
        return {"baseline": self.baseline.to_dict(),
                "u_groups": [g.to_dict() for g in self.u_groups],
                "v_groups": [g.to_dict() for g in self.v_groups],
                "shared_weights": self.shared_weights}

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        b = d["baseline"]
        return cls(make_baseline(b["family"], b.get("params", ())),
                   tuple(ComponentGroup.from_dict(g) for g in d["u_groups"]),
                   tuple(ComponentGroup.from_dict(g) for g in d["v_groups"]),
                   bool(d.get("shared_weights", True)))


@dataclass(frozen=True)
class HypothesisResult:
    name: str
    verdict: str
    detail: str = ""
    binding: bool = True

    def to_dict(self) -> dict:
        return {"name": self.name, "verdict": self.verdict, "detail": self.detail,
                "binding": self.binding}


@dataclass(frozen=True)
class HypothesisSet:
    variant: Optional[str]
    results: Tuple[HypothesisResult, ...]

    def __iter__(self):
        return iter(self.results)

    def __len__(self):
        return len(self.results)

    @property
    def binding(self) -> Tuple[HypothesisResult, ...]:
        return tuple(h for h in self.results if h.binding)

    @property
    def all_satisfied(self) -> bool:
        return all(h.verdict == SATISFIED for h in self.binding)

    @property
    def any_violated(self) -> bool:
        return any(h.verdict == VIOLATED for h in self.binding)

    def violated(self) -> List[str]:
        return [h.name for h in self.binding if h.verdict == VIOLATED]

    def to_dict(self) -> dict:
        return {"variant": self.variant, "results": [h.to_dict() for h in self.results]}


@dataclass(frozen=True)
class TheoremReport:
    theorem_id: TheoremId
    scenario: Scenario
    hypotheses: HypothesisSet
    conclusion: OrderVerdict
    expected: Outcome
    consistent: Consistency

    @property
    def hypothesis_results(self) -> Tuple[HypothesisResult, ...]:
        return self.hypotheses.results

    def outcome_fields(self) -> tuple:
        """The fields replay must reproduce exactly."""
        return (self.theorem_id, self.hypotheses.variant,
                tuple((h.name, h.verdict) for h in self.hypotheses),
                self.conclusion.outcome, self.expected, self.consistent)

    def to_dict(self) -> dict:
        return {"theorem_id": self.theorem_id.value,
                "scenario": self.scenario.to_dict(),
                "variant": self.hypotheses.variant,
                "hypotheses": [h.to_dict() for h in self.hypotheses],
                "conclusion": self.conclusion.to_dict(),
                "expected": self.expected.value,
                "consistent": self.consistent.value}


# -- predicates --------------------------------------------------------------

Predicate = Callable[[Scenario], HypothesisResult]


def _flag(name: str, ok: bool, detail: str = "", binding: bool = True) -> HypothesisResult:
    return HypothesisResult(name, SATISFIED if ok else VIOLATED, detail, binding)


_NOTION_LABEL = {
    AgingNotion.FR: "h", AgingNotion.RFR: "h~", AgingNotion.PFR: "t*h",
    AgingNotion.PRFR: "t*h~", AgingNotion.PLR: "-t*f'/f", AgingNotion.LR: "f'/f",
    AgingNotion.PDF: "f",
}


def _aging(name: str, notion: AgingNotion, direction: Monotonicity,
           binding: bool = True) -> Predicate:
    def pred(s: Scenario) -> HypothesisResult:
        v = classify_monotone_aging(s.baseline, notion)
        lo, hi = v.probe
        detail = (f"{_NOTION_LABEL[notion]} is {v.classification.value} "
                  f"on the probe interval [{lo:.6g}, {hi:.6g}]")
        if v.classification is Monotonicity.INCONCLUSIVE:
            return HypothesisResult(name, INCONCLUSIVE, detail, binding)
        return _flag(name, v.satisfies(direction), detail, binding)
    return pred


def _unbounded(s: Scenario) -> HypothesisResult:
    return _flag("baseline has unbounded support", not s.baseline.bounded,
                 f"support upper end {s.baseline.support_hi}")


def _same_counts(s: Scenario) -> HypothesisResult:
    nu, nv = s._field("u", "count"), s._field("v", "count")
    return _flag("n_i = n_i*", bool(np.array_equal(nu, nv)), f"n={nu.tolist()}, n*={nv.tolist()}")


def _different_counts(s: Scenario) -> HypothesisResult:
    nu, nv = s._field("u", "count"), s._field("v", "count")
    return _flag("n_i != n_i* for some i", not np.array_equal(nu, nv),
                 f"n={nu.tolist()}, n*={nv.tolist()}")


def _same_locations(s: Scenario) -> HypothesisResult:
    su, sv = s._field("u", "location"), s._field("v", "location")
    return _flag("sigma_i = mu_i", bool(np.array_equal(su, sv)),
                 f"sigma={su.tolist()}, mu={sv.tolist()}")


def _same_components(s: Scenario) -> HypothesisResult:
    """X^(i) =st Y^(i): identical location and scale per group."""
    ok = all(np.array_equal(s._field("u", a), s._field("v", a)) for a in ("location", "scale"))
    return _flag("X^(i) =st Y^(i)", ok, "locations and scales agree group by group")


def _shared_weights(s: Scenario) -> HypothesisResult:
    ru, rv = s._field("u", "weight"), s._field("v", "weight")
    return _flag("common mixing proportions r", bool(np.allclose(ru, rv, rtol=0, atol=1e-12)),
                 f"r={ru.tolist()}, r*={rv.tolist()}")


def _common_positive_location(s: Scenario) -> HypothesisResult:
    locs = np.concatenate([s._field("u", "location"), s._field("v", "location")])
    ok = bool(np.all(locs == locs[0]) and locs[0] > 0)
    return _flag("sigma_1 = sigma_2 = mu_1 = mu_2 = sigma > 0", ok, f"locations {locs.tolist()}")


def _chamber(which: str, attr: str, symbol: str, chamber: Chamber) -> Predicate:
    def pred(s: Scenario) -> HypothesisResult:
        vec = s._field(which, attr)
        got = chamber_of(vec)
        return _flag(f"{symbol} in {chamber.value}", got.contains(chamber),
                     f"{symbol}={vec.tolist()} is {got.value}")
    return pred


def _weight_relation(which: str, ge: bool) -> Predicate:
    op = ">=" if ge else "<="

    def pred(s: Scenario) -> HypothesisResult:
        m = s._field(which, "count") * s._field(which, "weight")
        ok = m[0] >= m[1] - 1e-12 if ge else m[0] <= m[1] + 1e-12
        return _flag(f"n1*r1 {op} n2*r2", bool(ok), f"n1*r1={m[0]:.12g}, n2*r2={m[1]:.12g}")
    return pred


def _cross_counts(ge: bool) -> Predicate:
    op = ">=" if ge else "<="

    def pred(s: Scenario) -> HypothesisResult:
        (n1, n2), (m1, m2) = s._field("u", "count"), s._field("v", "count")
        lhs, rhs = n1 * m2, m1 * n2
        return _flag(f"n1*n2* {op} n1* n2", bool(lhs >= rhs if ge else lhs <= rhs),
                     f"{lhs:g} vs {rhs:g}")
    return pred


def _aligned_chambers(s: Scenario) -> HypothesisResult:
    lam, sig = s._field("u", "scale"), s._field("u", "location")
    prod = (lam[0] - lam[1]) * (sig[0] - sig[1])
    return _flag("(lambda1 - lambda2)(sigma1 - sigma2) >= 0", bool(prod >= 0), f"product {prod:.6g}")


def _majorization(mode: MajorizationMode) -> Predicate:
    symbol = {MajorizationMode.WEAK_SUB: "<=_w", MajorizationMode.WEAK_SUPER: "<=^w"}[mode]

    def pred(s: Scenario) -> HypothesisResult:
        counts = s._field("u", "count").astype(int)
        lam = expand(s._field("u", "scale"), counts)
        tht = expand(s._field("v", "scale"), counts)
        v = compare_vectors(lam, tht, mode)
        detail = "" if v.holds else f"first failing partial sum at index {v.first_violation}"
        return _flag(f"expanded lambda {symbol} expanded theta", v.holds, detail)
    return pred


def _ratio(s: Scenario) -> HypothesisResult:
    lam, tht = s._field("u", "scale"), s._field("v", "scale")
    a, b = lam.min() / lam.max(), tht.min() / tht.max()
    return _flag("lambda_(1:2)/lambda_(2:2) <= theta_(1:2)/theta_(2:2)",
                 scale_ratio_leq(lam, tht), f"{a:.12g} vs {b:.12g}")


def _group_order(attr: str, symbol: str, binding: bool = True) -> Predicate:
    def pred(s: Scenario) -> HypothesisResult:
        x = s._field("u", attr)
        return _flag(f"{symbol}1 >= {symbol}2", bool(x[0] >= x[1]), f"{symbol}={x.tolist()}", binding)
    return pred


# -- theorem table -----------------------------------------------------------

@dataclass(frozen=True)
class _Theorem:
    relation: Relation
    expected: Callable[[Scenario], Outcome]
    common: Tuple[Predicate, ...]
    variants: Tuple[Tuple[str, Tuple[Predicate, ...]], ...] = ()


def _backward(_):
    return Outcome.HOLDS_BACKWARD


def _forward(_):
    return Outcome.HOLDS_FORWARD


def _t42_expected(s: Scenario) -> Outcome:
    n, m = s._field("u", "count").sum(), s._field("v", "count").sum()
    if n < m:
        return Outcome.HOLDS_FORWARD
    if n > m:
        return Outcome.HOLDS_BACKWARD
    return Outcome.EQUAL


def _dplus(*fields):
    return tuple(_chamber(w, a, sym, Chamber.D_PLUS) for w, a, sym in fields)


def _eplus(*fields):
    return tuple(_chamber(w, a, sym, Chamber.E_PLUS) for w, a, sym in fields)


_LS = (("u", "scale", "lambda"), ("u", "location", "sigma"))
_LT = (("u", "scale", "lambda"), ("v", "scale", "theta"))
_INC, _DEC = Monotonicity.INCREASING, Monotonicity.DECREASING


def _t41(mode: MajorizationMode) -> _Theorem:
    return _Theorem(
        Relation.ST, _backward,
        (_unbounded, _same_counts, _same_locations, _shared_weights,
         _aging("F is IPRFR", AgingNotion.PRFR, _INC), _aligned_chambers, _majorization(mode)),
        (("D+ chambers, n1*r1 <= n2*r2",
          _dplus(*_LS) + (_chamber("v", "scale", "theta", Chamber.D_PLUS), _weight_relation("u", False))),
         ("E+ chambers, n1*r1 >= n2*r2",
          _eplus(*_LS) + (_chamber("v", "scale", "theta", Chamber.E_PLUS), _weight_relation("u", True)))),
    )


def _magnitude(relation: Relation, d_notion, e_notion) -> _Theorem:
    (dn, dnot, ddir), (en, enot, edir) = d_notion, e_notion
    return _Theorem(
        relation, _backward,
        (_unbounded, _same_components, _shared_weights, _different_counts, _cross_counts(True)),
        ((f"{dn}, lambda and sigma in D+", (_aging(f"F is {dn}", dnot, ddir),) + _dplus(*_LS)),
         (f"{en}, lambda and sigma in E+", (_aging(f"F is {en}", enot, edir),) + _eplus(*_LS))),
    )


_CONCAVE_IPLR = (_aging("F is concave (f decreasing)", AgingNotion.PDF, _DEC),
                 _aging("F is IPLR", AgingNotion.PLR, _INC))
_SHAPE_COMMON = (_unbounded, _same_counts, _shared_weights, _common_positive_location)
_PROOF_EXTRAS = (_aging("f decreasing (used in proof)", AgingNotion.PDF, _DEC, binding=False),
                 _group_order("count", "n", binding=False),
                 _group_order("weight", "r", binding=False))

THEOREMS: Dict[TheoremId, _Theorem] = {
    TheoremId.T4_1_I: _t41(MajorizationMode.WEAK_SUB),
    TheoremId.T4_1_II: _t41(MajorizationMode.WEAK_SUPER),
    TheoremId.T4_2: _Theorem(
        Relation.ST, _t42_expected,
        (_unbounded, _same_components, _shared_weights, _different_counts),
        (("r, lambda, sigma in D+",
          _dplus(("u", "weight", "r"), *_LS)),
         ("r, lambda, sigma in E+",
          _eplus(("u", "weight", "r"), *_LS))),
    ),
    TheoremId.T4_3: _magnitude(Relation.HR, ("IFR", AgingNotion.FR, _INC),
                               ("DPFR", AgingNotion.PFR, _DEC)),
    TheoremId.T4_4: _magnitude(Relation.RH, ("DPRFR", AgingNotion.PRFR, _DEC),
                               ("IRFR", AgingNotion.RFR, _INC)),
    TheoremId.T4_5: _magnitude(Relation.LR, ("IPLR", AgingNotion.PLR, _INC),
                               ("DLR", AgingNotion.LR, _INC)),
    TheoremId.T4_6: _Theorem(
        Relation.STAR, _backward,
        _SHAPE_COMMON + _CONCAVE_IPLR + (_weight_relation("u", True),) + _dplus(*_LT)
        + (_ratio,) + _PROOF_EXTRAS,
    ),
    TheoremId.C_LORENZ: _Theorem(
        Relation.LORENZ, _backward,
        _SHAPE_COMMON + _CONCAVE_IPLR + (_group_order("count", "n"), _group_order("weight", "r"))
        + _dplus(*_LT) + (_ratio,),
    ),
    TheoremId.T4_7: _Theorem(
        Relation.DISP, _backward,
        _SHAPE_COMMON + _CONCAVE_IPLR + (_weight_relation("u", True),) + _dplus(*_LT) + (_ratio,),
    ),
    TheoremId.T4_8: _Theorem(
        Relation.RS, _forward,
        _SHAPE_COMMON + (_aging("f decreasing", AgingNotion.PDF, _DEC),
                         _weight_relation("u", False)) + _eplus(*_LT) + (_ratio,),
    ),
}


def _evaluate(preds: Sequence[Predicate], s: Scenario) -> Tuple[HypothesisResult, ...]:
    return tuple(p(s) for p in preds)


def check_hypotheses(theorem_id, scenario: Scenario) -> HypothesisSet:
    """Evaluate every hypothesis of ``theorem_id`` on ``scenario``.

    With alternatives, the first fully satisfied variant is reported; failing
    that, the one with the fewest violations.
    """
    thm = THEOREMS[TheoremId.parse(theorem_id)]
    common = _evaluate(thm.common, scenario)
    if not thm.variants:
        return HypothesisSet(None, common)
    best = None
    for name, preds in thm.variants:
        results = _evaluate(preds, scenario)
        cand = HypothesisSet(name, common + results)
        if cand.all_satisfied:
            return cand
        score = len(cand.violated())
        if best is None or score < best[0]:
            best = (score, cand)
    return best[1]


def check_conclusion(theorem_id, scenario: Scenario, cfg: Optional[GridConfig] = None
                     ) -> OrderVerdict:
    """Order verdict for U versus V in the theorem's relation."""
    thm = THEOREMS[TheoremId.parse(theorem_id)]
    return check_order(scenario.u_model(), scenario.v_model(), thm.relation, cfg)


def _judge(verdict: OrderVerdict, expected: Outcome) -> Consistency:
    if verdict.outcome in (expected, Outcome.EQUAL):
        return Consistency.CONSISTENT
    if verdict.outcome is Outcome.INCONCLUSIVE:
        return Consistency.INCONCLUSIVE
    if expected is Outcome.EQUAL:
        strength = max((w.strength for w in verdict.witnesses), default=0.0)
    else:
        strength = verdict.violation_strength(expected is Outcome.HOLDS_FORWARD)
    return Consistency.CONTRADICTS if strength > CONTRADICTION_FACTOR else Consistency.INCONCLUSIVE


def verify(theorem_id, scenario: Scenario, cfg: Optional[GridConfig] = None) -> TheoremReport:
    """Hypotheses, conclusion and a consistency flag for one scenario.

    The conclusion is computed even when hypotheses fail, for diagnostics.
    """
    tid = TheoremId.parse(theorem_id)
    u, v = scenario.u_model(), scenario.v_model()
    u.require_proper()
    v.require_proper()
    hyps = check_hypotheses(tid, scenario)
    thm = THEOREMS[tid]
    verdict = check_order(u, v, thm.relation, cfg)
    expected = thm.expected(scenario)
    if hyps.any_violated:
        flag = Consistency.HYPOTHESES_NOT_MET
    elif not hyps.all_satisfied:
        flag = Consistency.INCONCLUSIVE
    else:
        flag = _judge(verdict, expected)
    return TheoremReport(tid, scenario, hyps, verdict, expected, flag)


# -- sweeps ------------------------------------------------------------------

@dataclass(frozen=True)
class SamplerBounds:
    """Ranges for random scenarios.

    Locations and scales are log-uniform; counts are uniform integers.
    ``branch`` fixes the chamber ordering of sampled pairs ("D" for
    nonincreasing, "E" for nondecreasing, None to pick per draw).
    """

    family: str = "exponential"
    params: Tuple[float, ...] = ()
    location: Tuple[float, float] = (0.1, 10.0)
    scale: Tuple[float, float] = (0.1, 10.0)
    counts: Tuple[int, int] = (1, 6)
    branch: Optional[str] = None

    def __post_init__(self):
        for name in ("location", "scale"):
            lo, hi = getattr(self, name)
            if not 0 < lo <= hi:
                raise ValueError(f"{name} range must satisfy 0 < lo <= hi")
        if not 1 <= self.counts[0] <= self.counts[1]:
            raise ValueError("counts range must satisfy 1 <= lo <= hi")
        if self.branch not in (None, "D", "E"):
            raise ValueError("branch must be 'D', 'E' or None")
        make_baseline(self.family, self.params)

    def baseline(self) -> BaselineDistribution:
        return make_baseline(self.family, self.params)

    def to_dict(self) -> dict:
        return {"family": self.family, "params": list(self.params),
                "location": list(self.location), "scale": list(self.scale),
                "counts": list(self.counts), "branch": self.branch}

    @classmethod
    def from_dict(cls, d: dict) -> "SamplerBounds":
        kw = dict(d)
        for key in ("params", "location", "scale", "counts"):
            if key in kw:
                kw[key] = tuple(kw[key])
        return cls(**kw)


DEFAULT_BOUNDS: Dict[TheoremId, SamplerBounds] = {
    TheoremId.T4_1_I: SamplerBounds("weibull", (2.0,)),
    TheoremId.T4_1_II: SamplerBounds("weibull", (2.0,)),
    TheoremId.T4_2: SamplerBounds("weibull", (2.0,), branch="D"),
    TheoremId.T4_3: SamplerBounds("weibull", (2.0,), branch="D"),
    TheoremId.T4_4: SamplerBounds("weibull", (2.0,), branch="D"),
    TheoremId.T4_5: SamplerBounds("weibull", (2.0,), branch="D"),
    TheoremId.T4_6: SamplerBounds(branch="D"),
    TheoremId.C_LORENZ: SamplerBounds(branch="D"),
    TheoremId.T4_7: SamplerBounds(branch="D"),
    TheoremId.T4_8: SamplerBounds(branch="E"),
}


@dataclass(frozen=True)
class SweepSummary:
    theorem_id: TheoremId
    seed: int
    attempted: int
    hypothesis_hits: int
    consistent_count: int
    contradiction_scenarios: Tuple[Scenario, ...]
    inconclusive_scenarios: Tuple[Scenario, ...] = ()
    infeasible_draws: int = 0
    violated_hypotheses: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"theorem_id": self.theorem_id.value, "seed": self.seed,
                "attempted": self.attempted, "hypothesis_hits": self.hypothesis_hits,
                "consistent_count": self.consistent_count,
                "contradiction_scenarios": [s.to_dict() for s in self.contradiction_scenarios],
                "inconclusive_scenarios": [s.to_dict() for s in self.inconclusive_scenarios],
                "infeasible_draws": self.infeasible_draws,
                "violated_hypotheses": dict(sorted(self.violated_hypotheses.items()))}


def _log_uniform(rng, bounds, size=None):
    lo, hi = bounds
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size))


def _ordered_pair(rng, bounds, branch):
    pair = np.sort(_log_uniform(rng, bounds, 2))
    return pair[::-1] if branch == "D" else pair


def _groups(counts, weights, locations, scales):
    return tuple(ComponentGroup(int(n), float(r), float(s), float(l))
                 for n, r, s, l in zip(counts, weights, locations, scales))


def _free_weights(rng, counts):
    """r1 uniform on the feasible interval, r2 solved from n1 r1 + n2 r2 = 1."""
    n1, n2 = counts
    r1 = rng.uniform(0.0, 1.0 / n1)
    return np.array([r1, (1.0 - n1 * r1) / n2])


def _shared_count_weights(counts, counts_star):
    """Weights satisfying both n.r = 1 and n*.r = 1, or None if infeasible."""
    (n1, n2), (m1, m2) = counts, counts_star
    det = m1 * n2 - n1 * m2
    if det == 0:
        return None
    r1 = (n2 - m2) / det
    r2 = (1.0 - n1 * r1) / n2
    if not (r1 > 0 and r2 > 0):
        return None
    if abs(m1 * r1 + m2 * r2 - 1.0) > 1e-12:
        return None
    return np.array([r1, r2])


def draw_scenario(theorem_id, bounds: SamplerBounds, rng: np.random.Generator
                  ) -> Optional[Scenario]:
    """One random scenario shaped by the theorem's set-up, or None if infeasible.

    Draws are shaped by structural constraints (equal counts, shared
    components, common location, chamber ordering) but not filtered by the
    remaining hypotheses; ``sweep`` does that through ``check_hypotheses``.
    """
    tid = TheoremId.parse(theorem_id)
    base = bounds.baseline()
    branch = bounds.branch or ("D" if rng.random() < 0.5 else "E")
    counts = rng.integers(bounds.counts[0], bounds.counts[1] + 1, 2)

    if tid in (TheoremId.T4_1_I, TheoremId.T4_1_II):
        r = _free_weights(rng, counts)
        sig = _ordered_pair(rng, bounds.location, branch)
        lam = _ordered_pair(rng, bounds.scale, branch)
        tht = _ordered_pair(rng, bounds.scale, branch)
        return Scenario(base, _groups(counts, r, sig, lam), _groups(counts, r, sig, tht))

    if tid in (TheoremId.T4_2, TheoremId.T4_3, TheoremId.T4_4, TheoremId.T4_5):
        counts_star = rng.integers(bounds.counts[0], bounds.counts[1] + 1, 2)
        r = _shared_count_weights(counts, counts_star)
        if r is None:
            return None
        sig = _ordered_pair(rng, bounds.location, branch)
        lam = _ordered_pair(rng, bounds.scale, branch)
        return Scenario(base, _groups(counts, r, sig, lam), _groups(counts_star, r, sig, lam))

    r = _free_weights(rng, counts)
    sigma = float(_log_uniform(rng, bounds.location))
    lam = _ordered_pair(rng, bounds.scale, branch)
    tht = _ordered_pair(rng, bounds.scale, branch)
    return Scenario(base, _groups(counts, r, (sigma, sigma), lam),
                    _groups(counts, r, (sigma, sigma), tht))


def _threads() -> int:
    raw = os.environ.get("MIXORDER_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"MIXORDER_THREADS must be an integer, got {raw!r}") from None
    return (os.cpu_count() or 1) if n <= 0 else n


def sweep(theorem_id, bounds: Optional[SamplerBounds] = None, seed: int = 0,
          count: int = 200, cfg: Optional[GridConfig] = None) -> SweepSummary:
    """Draw ``count`` scenarios from ``seed`` and audit those meeting the hypotheses.

    Scenario generation is sequential; evaluation may run on a thread pool
    (``MIXORDER_THREADS``) without changing the result.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    tid = TheoremId.parse(theorem_id)
    bounds = bounds or DEFAULT_BOUNDS[tid]
    rng = np.random.default_rng(seed)
    drawn = [draw_scenario(tid, bounds, rng) for _ in range(count)]
    feasible = [s for s in drawn if s is not None]

    def audit(s: Scenario):
        hyps = check_hypotheses(tid, s)
        if not hyps.all_satisfied:
            return hyps, None
        return hyps, verify(tid, s, cfg)

    workers = _threads()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(audit, feasible))
    else:
        results = [audit(s) for s in feasible]

    hits = consistent = 0
    contradictions, inconclusive, violated = [], [], {}
    for s, (hyps, report) in zip(feasible, results):
        for name in hyps.violated():
            violated[name] = violated.get(name, 0) + 1
        if report is None:
            continue
        hits += 1
        if report.consistent is Consistency.CONSISTENT:
            consistent += 1
        elif report.consistent is Consistency.CONTRADICTS:
            contradictions.append(s)
        else:
            inconclusive.append(s)
    return SweepSummary(tid, seed, count, hits, consistent, tuple(contradictions),
                        tuple(inconclusive), count - len(feasible), violated)


# -- counterexamples ---------------------------------------------------------

class CounterexampleId(str, Enum):
    IMPROPER_PDF = "improper-pdf"
    WEIBULL_CROSSING = "weibull-crossing"
    FRECHET_CROSSING = "frechet-crossing"


@dataclass(frozen=True)
class CounterexampleReport:
    ce_id: CounterexampleId
    properness: Optional[ProbeReport] = None
    verdict: Optional[OrderVerdict] = None
    certificate: Optional[object] = None
    crossing: Optional[float] = None
    curve: Optional[dict] = None

    def csv_rows(self) -> List[Tuple[float, float, float]]:
        if self.curve is None:
            return []
        return list(zip(self.curve["x"], self.curve["F_U"], self.curve["F_V"]))

    def to_dict(self) -> dict:
        out = {"id": self.ce_id.value}
        if self.properness is not None:
            out["properness"] = self.properness.to_dict()
        if self.verdict is not None:
            out["verdict"] = self.verdict.to_dict()
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
        if self.crossing is not None:
            out["crossing"] = self.crossing
        return out


def counterexample_models(ce_id):
    """The built-in configurations as (baseline, u_groups, v_groups)."""
    ce = CounterexampleId(ce_id)
    if ce is CounterexampleId.IMPROPER_PDF:
        return (make_baseline("power", (3.0, 2.0)),
                (ComponentGroup(3, 0.1, 4.0, 12.0), ComponentGroup(2, 0.35, 2.0, 8.0)), None)
    if ce is CounterexampleId.WEIBULL_CROSSING:
        base = make_baseline("weibull", (2.0,))
        r = (0.17, 0.245)
        return (base,
                (ComponentGroup(3, r[0], 6.0, 2.0), ComponentGroup(2, r[1], 8.0, 4.0)),
                (ComponentGroup(3, r[0], 4.0, 2.0), ComponentGroup(2, r[1], 12.0, 4.0)))
    base = make_baseline("frechet", (3.0,))
    return (base,
            (ComponentGroup(4, 0.1, 9.0, 6.0), ComponentGroup(3, 0.2, 6.0, 5.0)),
            (ComponentGroup(4, 0.1, 15.0, 6.0), ComponentGroup(3, 0.2, 2.0, 5.0)))


_CROSSING_RANGE = {CounterexampleId.WEIBULL_CROSSING: (0.0, 25.0),
                   CounterexampleId.FRECHET_CROSSING: (0.0, 60.0)}


def reproduce_counterexample(ce_id, cfg: Optional[GridConfig] = None,
                             n_curve: int = 501) -> CounterexampleReport:
    ce = CounterexampleId(ce_id)
    base, ug, vg = counterexample_models(ce)
    if ce is CounterexampleId.IMPROPER_PDF:
        return CounterexampleReport(ce, properness=build_mixture(base, ug).properness)
    u, v = build_mixture(base, ug), build_mixture(base, vg)
    verdict = check_order(u, v, Relation.ST, cfg)
    counts = [g.count for g in ug]
    cert = compare_vectors(expand([g.location for g in ug], counts),
                           expand([g.location for g in vg], counts), MajorizationMode.WEAK_SUB)
    lo, hi = _CROSSING_RANGE[ce]
    x = np.linspace(lo, hi, n_curve)
    curve = {"x": x, "F_U": np.asarray(u.cdf(x)), "F_V": np.asarray(v.cdf(x))}
    fwd = [w.x for w in verdict.witnesses if w.margin > 0]
    bwd = [w.x for w in verdict.witnesses if w.margin < 0]
    crossing = None
    if fwd and bwd:
        a, b = sorted((fwd[0], bwd[0]))
        crossing = locate_crossing(u, v, a, b)
    return CounterexampleReport(ce, verdict=verdict, certificate=cert,
                                crossing=crossing, curve=curve)
