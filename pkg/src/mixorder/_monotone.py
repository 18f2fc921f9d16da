"""Tolerance-aware monotonicity of sampled sequences.

Shared by the aging classifier and the monotone-type order checks so both
judge ties the same way.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np


class Monotonicity(str, Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    CONSTANT = "constant"
    NON_MONOTONE = "non_monotone"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class StepScan:
    """Signed consecutive steps of a sequence with their tie bands."""

    steps: np.ndarray
    tol: np.ndarray

    @property
    def up(self) -> np.ndarray:
        return self.steps > self.tol

    @property
    def down(self) -> np.ndarray:
        return self.steps < -self.tol

    def classify(self) -> Monotonicity:
        up, down = self.up.any(), self.down.any()
        if up and down:
            return Monotonicity.NON_MONOTONE
        if up:
            return Monotonicity.INCREASING
        if down:
            return Monotonicity.DECREASING
        return Monotonicity.CONSTANT

    def first_violation(self) -> Optional[int]:
        """Index of the first strict step against the first strict direction."""
        strict = np.flatnonzero(self.up | self.down)
        if strict.size == 0:
            return None
        against = self.down if self.up[strict[0]] else self.up
        hits = np.flatnonzero(against)
        return int(hits[0]) if hits.size else None


def scan_steps(values, eps_abs: float = 1e-9, eps_rel: float = 1e-9,
               scale=None, noise=None) -> StepScan:
    """Consecutive differences of ``values`` and their tie tolerances.

    ``scale`` overrides the magnitude used for the relative part of the band
    (for a difference of two large quantities the band should follow the
    operands, not the difference). ``noise`` is a per-point error bound on the
    values themselves (e.g. from finite differencing); a step's band grows by
    the bounds at both ends. Infinite endpoints are allowed: a step from
    a finite value to ``+inf`` is a strict increase, equal infinities tie.
    """
    v = np.asarray(values, dtype=float)
    with np.errstate(invalid="ignore"):
        steps = np.diff(v)
    steps = np.where(np.isnan(steps), 0.0, steps)
    mag = np.abs(v) if scale is None else np.abs(np.asarray(scale, dtype=float))
    mag = np.where(np.isfinite(mag), mag, 0.0)
    tol = eps_abs + eps_rel * np.maximum(mag[:-1], mag[1:])
    if noise is not None:
        err = np.abs(np.asarray(noise, dtype=float))
        tol = tol + err[:-1] + err[1:]
    return StepScan(steps=steps, tol=tol)


def classify_sequence(values, eps_abs: float = 1e-9, eps_rel: float = 1e-9,
                      scale=None, noise=None) -> Tuple[Monotonicity, Optional[int]]:
    scan = scan_steps(values, eps_abs, eps_rel, scale, noise)
    kind = scan.classify()
    return kind, (scan.first_violation() if kind is Monotonicity.NON_MONOTONE else None)
