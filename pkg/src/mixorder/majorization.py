"""Majorization, weak super/submajorization and parameter chambers.

Vectors are compared through partial sums of their increasing arrangements.
Ties count as satisfying an inequality (expanded parameter vectors repeat
entries, so exact ties are the common case, not an edge case).
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "MajorizationMode",
    "MajorizationVerdict",
    "Chamber",
    "compare_vectors",
    "chamber_of",
    "scale_ratio_leq",
    "expand",
]

SUM_TOL = 1e-12


class MajorizationMode(str, Enum):
    M = "m"
    WEAK_SUPER = "wsuper"
    WEAK_SUB = "wsub"


class Chamber(str, Enum):
    D_PLUS = "D+"
    E_PLUS = "E+"
    BOTH = "both"
    NEITHER = "neither"

    def contains(self, other: "Chamber") -> bool:
        """Whether a vector classified as ``self`` lies in chamber ``other``."""
        return self is other or (self is Chamber.BOTH and other is not Chamber.NEITHER)


@dataclass(frozen=True)
class MajorizationVerdict:
    """Outcome with the partial sums that certify it.

    For ``M`` and ``WEAK_SUPER`` the sums run over the smallest ``j`` entries;
    for ``WEAK_SUB`` over the largest ``j`` entries (``j = 1..n``).
    """

    holds: bool
    mode: MajorizationMode
    partial_sums_u: tuple
    partial_sums_v: tuple
    first_violation: Optional[int] = None

    def to_dict(self) -> dict:
        return {"holds": self.holds, "mode": self.mode.value,
                "partial_sums_u": list(self.partial_sums_u),
                "partial_sums_v": list(self.partial_sums_v),
                "first_violation": self.first_violation}


def _leq(a, b):
    return a <= b + SUM_TOL * (1.0 + max(abs(a), abs(b)))


def compare_vectors(u: Sequence[float], v: Sequence[float], mode) -> MajorizationVerdict:
    """Decide whether ``u`` is (weakly) majorized by ``v`` in ``mode``."""
    mode = MajorizationMode(mode)
    u = np.sort(np.asarray(u, dtype=float).ravel())
    v = np.sort(np.asarray(v, dtype=float).ravel())
    if u.size == 0 or v.size == 0:
        raise ValueError("vectors must be nonempty")
    if u.size != v.size:
        raise ValueError(f"length mismatch: {u.size} vs {v.size}")
    n = u.size
    if mode is MajorizationMode.WEAK_SUB:
        su, sv = np.cumsum(u[::-1]), np.cumsum(v[::-1])
        checks = [(k, _leq(su[k], sv[k])) for k in range(n)]
    else:
        su, sv = np.cumsum(u), np.cumsum(v)
        last = n if mode is MajorizationMode.WEAK_SUPER else n - 1
        checks = [(k, _leq(sv[k], su[k])) for k in range(last)]
        if mode is MajorizationMode.M:
            checks.append((n - 1, _leq(su[-1], sv[-1]) and _leq(sv[-1], su[-1])))
    bad = next((k for k, ok in checks if not ok), None)
    return MajorizationVerdict(bad is None, mode, tuple(su.tolist()), tuple(sv.tolist()), bad)


def chamber_of(u: Sequence[float]) -> Chamber:
    u = np.asarray(u, dtype=float).ravel()
    if u.size == 0:
        raise ValueError("vector must be nonempty")
    if not np.all(u > 0):
        return Chamber.NEITHER
    steps = np.diff(u)
    dec, inc = np.all(steps <= 0), np.all(steps >= 0)
    if dec and inc:
        return Chamber.BOTH
    if dec:
        return Chamber.D_PLUS
    if inc:
        return Chamber.E_PLUS
    return Chamber.NEITHER


def scale_ratio_leq(lam: Sequence[float], tht: Sequence[float]) -> bool:
    """min(lam)/max(lam) <= min(tht)/max(tht) for two positive pairs."""
    lam, tht = np.asarray(lam, dtype=float), np.asarray(tht, dtype=float)
    if lam.size != 2 or tht.size != 2:
        raise ValueError("scale ratio compares two pairs")
    if np.any(lam <= 0) or np.any(tht <= 0):
        raise ValueError("scales must be positive")
    return bool(lam.min() * tht.max() <= tht.min() * lam.max() * (1 + SUM_TOL))


def expand(values: Sequence[float], counts: Sequence[int]) -> np.ndarray:
    """Repeat ``values[i]`` ``counts[i]`` times, e.g. (6, 8), (3, 2) -> (6,6,6,8,8)."""
    return np.repeat(np.asarray(values, dtype=float), np.asarray(counts, dtype=int))
