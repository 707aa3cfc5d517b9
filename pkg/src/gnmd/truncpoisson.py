"""Truncated Poisson degree laws and the special functions behind them.

A Poisson(lam) variable conditioned on values in {0, ..., d} has pmf
proportional to lam^i / i!.  Everything in this module is built from the
partial exponential sums

    s_d(lam) = sum_{j=0}^{d} lam^j / j!

and the associated mean function

    mean(d, lam) = lam * s_{d-1}(lam) / s_d(lam),

which is exactly the expectation of the d-truncated Poisson law and is
strictly increasing in lam, mapping (0, inf) onto (0, d).  That bijection
is what lets us parameterize degree laws by their mean instead of by the
rate, and it defines the critical mean degree separating the phase with
all components small from the phase with a giant component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DegreeLaw",
    "partial_exp_sum",
    "mean",
    "invert_mean",
    "law_from_rate",
    "make_degree_law",
    "variance",
    "molloy_reed_q",
    "critical_mean_degree",
    "critical_mean_degree_approx",
    "sample_degree",
]

#: Guaranteed absolute tolerance on the rate returned by invert_mean.  The
#: bisection actually runs until float resolution, so achieved accuracy is
#: far better; thresholds are only ever quoted to ~5 decimals anyway.
RATE_TOL = 1e-12


@dataclass(frozen=True)
class DegreeLaw:
    """A truncated Poisson degree distribution on {0, ..., d}.

    Attributes:
        d: Maximum degree (d >= 1).
        lam: Poisson rate parameter (lam > 0).
        mu: Mean of the law; always equals mean(d, lam) and lies in (0, d).
        probs: Probability vector of length d + 1 with
            probs[i] = lam^i / (i! * s_d(lam)).  All entries are positive
            and sum to 1.
    """

    d: int
    lam: float
    mu: float
    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.array(self.probs, dtype=float)  # private copy, frozen below
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        if self.d < 1:
            raise ValueError(f"max degree must be >= 1, got {self.d}")
        if probs.shape != (self.d + 1,):
            raise ValueError(
                f"probs must have length d + 1 = {self.d + 1}, got {probs.shape}"
            )
        if not np.all(probs > 0):
            raise ValueError("all degree-class probabilities must be positive")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError(f"probs must sum to 1, got {probs.sum()!r}")
        mu = float(np.arange(self.d + 1) @ probs)
        if abs(mu - self.mu) > 1e-12:
            raise ValueError(f"mean of probs is {mu!r}, does not match mu={self.mu!r}")

    def cumulative(self) -> np.ndarray:
        """Cumulative probabilities, with the final entry pinned to 1.0."""
        cum = np.cumsum(self.probs)
        cum[-1] = 1.0
        return cum


def _check_rate(lam: float) -> float:
    lam = float(lam)
    if not math.isfinite(lam) or lam <= 0:
        raise ValueError(f"rate must be a positive finite real, got {lam!r}")
    return lam


def partial_exp_sum(d: int, lam: float) -> float:
    """Partial sum of the exponential series: sum_{j=0}^{d} lam^j / j!.

    Terms are accumulated in ascending order with the recurrence
    term_{j+1} = term_j * lam / (j+1), so no factorial is ever formed and
    the computation stays overflow-free for any rate a float can hold.

    Args:
        d: Upper summation index, d >= 0.
        lam: Positive rate.

    Returns:
        The partial sum; always >= 1 (the j = 0 term alone is 1).

    Raises:
        ValueError: If lam <= 0 or d < 0.
    """
    lam = _check_rate(lam)
    if d < 0:
        raise ValueError(f"summation index must be >= 0, got {d}")
    total = 1.0
    term = 1.0
    for j in range(1, d + 1):
        term *= lam / j
        total += term
    return total


def mean(k: int, lam: float) -> float:
    """Mean of the k-truncated Poisson law: lam * s_{k-1}(lam) / s_k(lam).

    Strictly increasing in lam and strictly inside (0, k).

    Raises:
        ValueError: If k < 1 or lam <= 0.
    """
    lam = _check_rate(lam)
    if k < 1:
        raise ValueError(f"truncation degree must be >= 1, got {k}")
    return lam * partial_exp_sum(k - 1, lam) / partial_exp_sum(k, lam)


def invert_mean(k: int, target: float) -> float:
    """Rate lam at which the k-truncated Poisson law has mean `target`.

    The mean function is strictly increasing from (0, inf) onto (0, k), so
    the preimage exists and is unique.  The root is bracketed by doubling
    the upper endpoint until the mean exceeds the target, then bisected to
    an absolute rate tolerance of RATE_TOL.

    Args:
        k: Truncation degree, k >= 1.
        target: Desired mean, strictly inside (0, k).  target == k has no
            finite preimage and is rejected.

    Raises:
        ValueError: If target is outside (0, k).
    """
    if k < 1:
        raise ValueError(f"truncation degree must be >= 1, got {k}")
    target = float(target)
    if not (0.0 < target < k):
        raise ValueError(f"target mean must lie strictly in (0, {k}), got {target!r}")
    lo = 0.0
    hi = 1.0
    while mean(k, hi) < target:
        lo = hi
        hi *= 2.0
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # float resolution exhausted
            break
        if mean(k, mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def law_from_rate(d: int, lam: float) -> DegreeLaw:
    """Build the d-truncated Poisson law directly from its rate.

    Accepts d >= 1; use make_degree_law to parameterize by the mean.
    """
    lam = _check_rate(lam)
    if d < 1:
        raise ValueError(f"max degree must be >= 1, got {d}")
    terms = np.empty(d + 1)
    terms[0] = 1.0
    for j in range(1, d + 1):
        terms[j] = terms[j - 1] * lam / j
    probs = terms / terms.sum()
    mu = float(np.arange(d + 1) @ probs)
    return DegreeLaw(d=d, lam=lam, mu=mu, probs=probs)


def make_degree_law(d: int, mu: float) -> DegreeLaw:
    """Degree law with maximum degree d and mean degree mu.

    Solves mean(d, lam) = mu for the rate, then fills in the probability
    vector.  The mean is the natural handle because a graph on n vertices
    with m edges has average degree 2m/n.

    Args:
        d: Maximum degree, d >= 2.
        mu: Mean degree, strictly inside (0, d).

    Raises:
        ValueError: If d < 2 or mu is outside (0, d) (such an instance is
            degenerate or infeasible as a degree distribution).
    """
    if d < 2:
        raise ValueError(f"max degree must be >= 2, got {d}")
    return law_from_rate(d, invert_mean(d, mu))


def variance(law: DegreeLaw) -> float:
    """Variance of the degree law, computed from raw moments of probs.

    Equals E Z(Z-1) - mu^2 + mu; never exceeds the mean (a consequence of
    the log-concavity of the partial exponential sums) and never drops
    below zero.
    """
    i = np.arange(law.d + 1)
    return float((i * i) @ law.probs - law.mu**2)


def molloy_reed_q(law: DegreeLaw) -> float:
    """Molloy-Reed criterion value Q = sum_i i(i-2) probs[i].

    The sign of Q classifies the phase of a random graph with this degree
    distribution: Q < 0 means all components stay small, Q > 0 means a
    giant component emerges.  Q also has the closed form
    mean(d, lam) * (mean(d-1, lam) - 1), which agrees with the moment sum
    to full precision and is exercised by the test suite.

    Raises:
        ValueError: If law.d < 2.
    """
    if law.d < 2:
        raise ValueError(f"phase classification needs max degree >= 2, got {law.d}")
    i = np.arange(law.d + 1)
    return float((i * (i - 2)) @ law.probs)


def molloy_reed_q_closed_form(law: DegreeLaw) -> float:
    """Closed form of the Molloy-Reed value: mean_d * (mean_{d-1} - 1)."""
    if law.d < 2:
        raise ValueError(f"phase classification needs max degree >= 2, got {law.d}")
    return mean(law.d, law.lam) * (mean(law.d - 1, law.lam) - 1.0)


def critical_mean_degree(d: int) -> float:
    """Critical mean degree at which the giant component appears.

    For maximum degree d >= 3 this is mean(d, lam1) where lam1 is the rate
    at which the (d-1)-truncated law has mean exactly 1.  For d = 2 the
    (d-1)-truncated mean is bounded above by 1 and never reaches it, so no
    finite threshold exists and math.inf is returned: a max-degree-2 graph
    is a union of paths and cycles and never has a giant component.

    Raises:
        ValueError: If d < 2.
    """
    if d < 2:
        raise ValueError(f"max degree must be >= 2, got {d}")
    if d == 2:
        return math.inf
    return mean(d, invert_mean(d - 1, 1.0))


def critical_mean_degree_approx(d: int) -> float:
    """Large-d factorial-series approximation to the critical mean degree.

    Returns 1 + 1/(e (d-1)!) - 1/(e d!); the true threshold differs from
    this by O(1/(d-1)!^2).  Useful as a side-by-side column in threshold
    tables; the approximation is poor for d <= 4.
    """
    if d < 2:
        raise ValueError(f"max degree must be >= 2, got {d}")
    return 1.0 + 1.0 / (math.e * math.factorial(d - 1)) - 1.0 / (
        math.e * math.factorial(d)
    )


def sample_degree(law: DegreeLaw, uniform_draw: float) -> int:
    """Map one uniform draw in [0, 1) to a degree by inverse CDF.

    Returns the smallest i whose cumulative probability is >= the draw.
    Deterministic given the draw, so callers control the random stream.
    """
    u = float(uniform_draw)
    if not (0.0 <= u < 1.0):
        raise ValueError(f"uniform draw must lie in [0, 1), got {u!r}")
    cum = law.cumulative()
    return int(np.searchsorted(cum, u, side="left"))
