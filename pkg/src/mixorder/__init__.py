"""Stochastic comparisons of two-group location-scale mixture models."""

from .baselines import (AgingNotion, BaselineDistribution, Family, MonotoneVerdict,
                        classify_monotone_aging, evaluate, make_baseline)
from .exceptions import DomainError, ImproperModelError, InfeasibleScenarioError, MixorderError
from .majorization import Chamber, MajorizationMode, chamber_of, compare_vectors, expand
from .mixture import (ComponentGroup, MixtureModel, ProbeReport, build_mixture, integrated_sf,
                      mixture_eval, mixture_quantile, upper_lorenz, validate_properness)
from .orders import GridConfig, OrderVerdict, Outcome, Relation, check_order
from .theorems import (Consistency, SamplerBounds, Scenario, TheoremId, TheoremReport,
                       check_conclusion, check_hypotheses, reproduce_counterexample, sweep,
                       verify)

__version__ = "0.1.0"
