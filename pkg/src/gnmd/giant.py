"""Phase classification and giant-component size prediction.

For a degree distribution (p_0, ..., p_d) with mean D = sum i p_i, the
component exploration of the associated random graph is governed by

    frontier(x) = D - 2x - sum_{i=1}^{d} i p_i (1 - 2x/D)^(i/2)

for x in [0, D/2]: to first order it is the expected number of half-edges
sitting on reached-but-unexplored vertices after x n edges have been
exposed.  The function vanishes at both endpoints and its slope at zero is
Q/D, where Q = sum i(i-2) p_i is the Molloy-Reed value.  When Q > 0 the
frontier lifts off and its smallest positive root marks the point where
the exploration of the giant component dies out; plugging that root into
the survival identity gives the asymptotic fraction of vertices in the
giant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Sequence

import numpy as np

from . import truncpoisson
from .truncpoisson import DegreeLaw

__all__ = [
    "Phase",
    "PhasePrediction",
    "exploration_frontier",
    "frontier_root",
    "giant_fraction",
    "predict",
    "NEAR_CRITICAL_BAND",
]

#: |mu - critical mean| below which a prediction is flagged as unreliable.
NEAR_CRITICAL_BAND = 1e-6

#: Grid points used to locate the first sign change of the frontier.
_SCAN_POINTS = 10_000


class Phase(str, Enum):
    SUBCRITICAL = "subcritical"
    SUPERCRITICAL = "supercritical"


def _as_probs(law: Any) -> np.ndarray:
    """Accept a DegreeLaw or any probability vector over degrees 0..d."""
    probs = np.asarray(getattr(law, "probs", law), dtype=float)
    if probs.ndim != 1 or probs.size < 2:
        raise ValueError("degree distribution must be a vector over degrees 0..d")
    if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-9:
        raise ValueError("degree distribution must be nonnegative and sum to 1")
    return probs


def _degree_mean(probs: np.ndarray) -> float:
    return float(np.arange(probs.size) @ probs)


def exploration_frontier(law: DegreeLaw | Sequence[float], x: float) -> float:
    """Evaluate the exploration frontier function at x.

    Args:
        law: A DegreeLaw, or a bare probability vector over degrees 0..d
            (degenerate distributions are accepted; only the frontier
            algebra is used).
        x: Exposed-edge density, in [0, D/2] with D the mean degree.

    Raises:
        ValueError: If x falls outside [0, D/2]; half-integer powers of
            1 - 2x/D are undefined past the midpoint.
    """
    probs = _as_probs(law)
    big_d = _degree_mean(probs)
    x = float(x)
    if not (0.0 <= x <= big_d / 2.0 + 1e-15):
        raise ValueError(f"x must lie in [0, {big_d / 2.0}], got {x!r}")
    # (1 - 2x/D)^(i/2) via the square root, exact at both endpoints; the
    # max() guards a one-ulp negative at x = D/2.
    xi = math.sqrt(max(1.0 - 2.0 * x / big_d, 0.0))
    i = np.arange(1, probs.size)
    return big_d - 2.0 * x - float((i * probs[1:]) @ xi**i)


def frontier_root(law: DegreeLaw | Sequence[float]) -> float:
    """Smallest positive root of the exploration frontier.

    Requires a supercritical distribution (Molloy-Reed value Q > 0, i.e.
    the frontier leaves zero with positive slope Q/D).  The root is
    located by a forward scan over _SCAN_POINTS grid points on (0, D/2]
    followed by bisection; if the frontier never turns negative inside the
    interval, D/2 (a root by construction) is returned.  That fallback can
    only happen when p_1 = 0, e.g. for a single-atom degree distribution.

    Raises:
        ValueError: If Q <= 0 (subcritical; no positive root is promised).
    """
    probs = _as_probs(law)
    i = np.arange(probs.size)
    q = float((i * (i - 2)) @ probs)
    if q <= 0:
        raise ValueError(f"frontier root requires Molloy-Reed value > 0, got {q!r}")
    big_d = _degree_mean(probs)
    half = big_d / 2.0

    def g(x: float) -> float:
        return exploration_frontier(probs, x)

    lo = 0.0
    hi = None
    for k in range(1, _SCAN_POINTS + 1):
        x = half * k / _SCAN_POINTS
        if g(x) < 0.0:
            hi = x
            break
        lo = x
    if hi is None:
        return half
    if lo == 0.0:
        # Root sits inside the first grid cell; walk down until the
        # frontier is positive (it must be, since g'(0) = Q/D > 0).
        lo = hi / 2.0
        while g(lo) <= 0.0:
            lo /= 2.0
            if lo < 1e-12:
                # Q sits at float-noise scale, so the lift-off cannot be
                # resolved; the root is indistinguishable from zero.
                return lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    if abs(g(root)) > 1e-10:
        raise ArithmeticError(f"frontier root did not converge: g({root})={g(root)}")
    return root


def giant_fraction(law: DegreeLaw | Sequence[float], root: float) -> float:
    """Asymptotic fraction of vertices in the giant component.

    Computes 1 - sum_{i=0}^{d} p_i (1 - 2 root / D)^(i/2), including the
    i = 0 term: a degree-0 vertex is isolated and never joins the giant,
    so p_0 always stays in the subtracted survival sum.  The result is
    therefore bounded above by 1 - p_0.

    Args:
        law: Degree distribution (DegreeLaw or probability vector).
        root: Positive root of the exploration frontier, in (0, D/2].

    Raises:
        ValueError: If root falls outside (0, D/2].
    """
    probs = _as_probs(law)
    big_d = _degree_mean(probs)
    root = float(root)
    if not (0.0 < root <= big_d / 2.0 + 1e-15):
        raise ValueError(f"root must lie in (0, {big_d / 2.0}], got {root!r}")
    xi = math.sqrt(max(1.0 - 2.0 * root / big_d, 0.0))
    i = np.arange(probs.size)
    return 1.0 - float(probs @ xi**i)


@dataclass(frozen=True)
class PhasePrediction:
    """Analytic phase prediction for graphs with a given (d, mu).

    Attributes:
        d: Maximum degree.
        mu: Mean degree (2m/n).
        lam: Rate of the matching truncated Poisson degree law.
        q: Molloy-Reed value of the law; its sign decides the phase.
        mu_critical: Critical mean degree for this d (math.inf when d = 2).
        degree_mean: Mean degree recomputed from the probability vector;
            agrees with mu to float precision and is kept as a
            consistency diagnostic.
        phase: Subcritical (all components small) or supercritical
            (unique giant component).
        near_critical: True when |mu - mu_critical| < NEAR_CRITICAL_BAND;
            the dichotomy makes no claim at the threshold itself, so the
            prediction is unreliable there.
        frontier_root_x: Smallest positive frontier root (supercritical
            only, else None).
        giant_fraction: Predicted giant-component fraction (supercritical
            only, else None).
        law: The underlying degree law.
    """

    d: int
    mu: float
    lam: float
    q: float
    mu_critical: float
    degree_mean: float
    phase: Phase
    near_critical: bool
    frontier_root_x: float | None
    giant_fraction: float | None
    law: DegreeLaw

    def to_json_dict(self) -> dict[str, Any]:
        """JSON-safe dict; an infinite threshold becomes the string "inf"."""
        return {
            "d": self.d,
            "mu": self.mu,
            "lam": self.lam,
            "q": self.q,
            "mu_critical": "inf" if math.isinf(self.mu_critical) else self.mu_critical,
            "degree_mean": self.degree_mean,
            "phase": self.phase.value,
            "near_critical": self.near_critical,
            "frontier_root": self.frontier_root_x,
            "giant_fraction": self.giant_fraction,
            "probs": [float(p) for p in self.law.probs],
        }


def predict(d: int, mu: float) -> PhasePrediction:
    """Classify the phase at (d, mu) and predict the giant fraction.

    Builds the mean-mu truncated Poisson law, evaluates the Molloy-Reed
    value and the critical mean degree, and, when supercritical, solves
    for the frontier root and giant fraction.

    Raises:
        ValueError: If d < 2 or mu is outside (0, d).
    """
    law = truncpoisson.make_degree_law(d, mu)
    q = truncpoisson.molloy_reed_q(law)
    mu_critical = truncpoisson.critical_mean_degree(d)
    near = math.isfinite(mu_critical) and abs(mu - mu_critical) < NEAR_CRITICAL_BAND
    if q > 0:
        root = frontier_root(law)
        theta = giant_fraction(law, root)
        phase = Phase.SUPERCRITICAL
    else:
        root = None
        theta = None
        phase = Phase.SUBCRITICAL
    return PhasePrediction(
        d=d,
        mu=float(mu),
        lam=law.lam,
        q=q,
        mu_critical=mu_critical,
        degree_mean=law.mu,
        phase=phase,
        near_critical=near,
        frontier_root_x=root,
        giant_fraction=theta,
        law=law,
    )
