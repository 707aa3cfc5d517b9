"""Exactly uniform sampling of graphs with m edges and max degree at most d.

The sampler runs the classic two-stage scheme:

1. Draw a degree sequence: n i.i.d. truncated Poisson degrees conditioned
   on summing to exactly 2m.  The rate is mean-matched to 2m/n, which
   maximizes the conditioning acceptance rate (any positive rate yields
   the same conditional law, so this is pure efficiency).  The conditional
   law weights a sequence x proportionally to 1/prod(x_i!).
2. Pair half-edges: each vertex gets one token per unit of degree, the
   2m tokens are shuffled uniformly, and consecutive tokens become edges.
   Conditional on the result being simple (no loops, no parallel edges),
   this is uniform over simple graphs with that exact degree sequence.

On a simplicity failure the whole attempt restarts with a FRESH degree
sequence.  This full restart is what makes the output exactly uniform:
per attempt, P(sequence x) is proportional to 1/prod(x_i!) and every
simple graph with degrees x arises from exactly prod(x_i!) of the
(2m-1)!! half-edge matchings, so each simple graph is hit with the same
per-attempt probability and rejection preserves the proportionality.
Re-pairing a kept sequence would instead bias graphs by the sequence's
simplicity probability.

The conditioning step is implemented through the degree histogram: the
class counts of an i.i.d. degree vector are multinomial, the sum
constraint depends on the histogram alone, and conditionally on the
histogram the vector is a uniformly random arrangement.  Drawing
(histogram, then arrangement) is therefore distributionally identical to
vector-level rejection while costing O(d) instead of O(n) per rejected
attempt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import truncpoisson

__all__ = [
    "DegreeSequence",
    "Multigraph",
    "SimpleGraph",
    "SamplerStats",
    "SamplingError",
    "sample_degree_sequence",
    "pair_configuration",
    "is_simple",
    "sample_graph",
    "sample_edge_codes",
    "alpha_diagnostic",
    "write_graph",
    "read_graph",
]

#: Histogram draws allowed per degree sequence: ceil(SEQUENCE_CAP_FACTOR * sqrt(n)).
#: The conditioning acceptance rate is of order 1/sqrt(n), so this allows
#: roughly 10^4 expected lifetimes before giving up.
SEQUENCE_CAP_FACTOR = 10_000

#: Simplicity restarts allowed per sampled graph.  The simplicity
#: acceptance probability is bounded away from zero in n for fixed (d, mu),
#: so hitting this cap indicates a pathological parameterization.
SIMPLICITY_CAP = 1_000

_HISTOGRAM_BATCH = 256


class SamplingError(RuntimeError):
    """A retry budget was exhausted; carries a diagnostic message."""


@dataclass(frozen=True)
class DegreeSequence:
    """Degrees for n labeled vertices, each in [0, d], summing to 2m."""

    degrees: np.ndarray
    n: int
    m: int
    d: int

    def __post_init__(self) -> None:
        degrees = np.array(self.degrees, dtype=np.int64)  # private copy
        degrees.setflags(write=False)
        object.__setattr__(self, "degrees", degrees)
        if degrees.shape != (self.n,):
            raise ValueError(f"expected {self.n} degrees, got shape {degrees.shape}")
        if degrees.min(initial=0) < 0 or degrees.max(initial=0) > self.d:
            raise ValueError(f"degrees must lie in [0, {self.d}]")
        if int(degrees.sum()) != 2 * self.m:
            raise ValueError(
                f"degrees sum to {int(degrees.sum())}, expected 2m = {2 * self.m}"
            )


@dataclass(frozen=True)
class Multigraph:
    """m unordered vertex pairs; loops and repeated pairs allowed."""

    edges: np.ndarray  # shape (m, 2), labels in [0, n)
    n: int

    def __post_init__(self) -> None:
        edges = np.array(self.edges, dtype=np.int64).reshape(-1, 2)
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        if edges.size and (edges.min() < 0 or edges.max() >= self.n):
            raise ValueError(f"vertex labels must lie in [0, {self.n})")

    @property
    def m(self) -> int:
        return self.edges.shape[0]


@dataclass(frozen=True)
class SimpleGraph:
    """Simple labeled graph with max degree at most d.

    Edges are stored normalized (u < v) and sorted lexicographically, so
    the edge array doubles as the graph's canonical form.
    """

    n: int
    m: int
    d: int
    edges: np.ndarray  # shape (m, 2), u < v, lexicographically sorted

    def __post_init__(self) -> None:
        edges = np.array(self.edges, dtype=np.int64).reshape(-1, 2)
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        if edges.shape[0] != self.m:
            raise ValueError(f"expected {self.m} edges, got {edges.shape[0]}")
        if self.m:
            if edges.min() < 0 or edges.max() >= self.n:
                raise ValueError(f"vertex labels must lie in [0, {self.n})")
            if np.any(edges[:, 0] >= edges[:, 1]):
                raise ValueError("edges must be normalized with u < v")
            codes = edges[:, 0] * self.n + edges[:, 1]
            if np.any(np.diff(codes) <= 0):
                raise ValueError("edges must be sorted and duplicate-free")
        if self.degrees().max(initial=0) > self.d:
            raise ValueError(f"a vertex exceeds the degree bound {self.d}")

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n)

    def adjacency(self) -> list[list[int]]:
        """Per-vertex sorted neighbor lists (built on demand)."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[int(u)].append(int(v))
            adj[int(v)].append(int(u))
        for neighbors in adj:
            neighbors.sort()
        return adj


@dataclass
class SamplerStats:
    """Counters accumulated across sampling attempts.

    alpha is sum_i x_i(x_i - 1) / (2m) of an attempted degree sequence;
    its running mean tracks the quantity that controls the simplicity
    acceptance probability, which is why it is logged per attempt.
    """

    histogram_draws: int = 0
    pairings: int = 0
    simple: int = 0
    alpha_total: float = 0.0
    alphas: list[float] = field(default_factory=list, repr=False)

    def record_pairing(self, alpha: float, accepted: bool) -> None:
        self.pairings += 1
        self.simple += int(accepted)
        self.alpha_total += alpha
        self.alphas.append(alpha)

    @property
    def alpha_mean(self) -> float:
        return self.alpha_total / self.pairings if self.pairings else math.nan

    @property
    def simplicity_rate(self) -> float:
        return self.simple / self.pairings if self.pairings else math.nan


def _check_instance(n: int, m: int, d: int) -> None:
    if n < 1:
        raise ValueError(f"need at least one vertex, got n={n}")
    if m < 1:
        raise ValueError(f"need at least one edge, got m={m}")
    if d < 1:
        raise ValueError(f"degree bound must be >= 1, got d={d}")
    if 2 * m > d * n:
        raise ValueError(
            f"infeasible instance: 2m = {2 * m} exceeds d*n = {d * n}"
        )


def _conditioned_histogram(
    n: int,
    target_sum: int,
    probs: np.ndarray,
    rng: np.random.Generator,
    stats: SamplerStats | None,
) -> np.ndarray:
    """Multinomial histogram of n draws conditioned on weighted sum."""
    weights = np.arange(probs.size)
    cap = math.ceil(SEQUENCE_CAP_FACTOR * math.sqrt(n))
    draws = 0
    while draws < cap:
        batch = min(_HISTOGRAM_BATCH, cap - draws)
        counts = rng.multinomial(n, probs, size=batch)
        draws += batch
        hits = np.nonzero(counts @ weights == target_sum)[0]
        if hits.size:
            if stats is not None:
                stats.histogram_draws += draws
            return counts[hits[0]]
    if stats is not None:
        stats.histogram_draws += draws
    raise SamplingError(
        f"no degree histogram with sum {target_sum} found in {draws} draws "
        f"(n={n}, d={probs.size - 1}); the instance is extremely atypical"
    )


def sample_degree_sequence(
    n: int,
    m: int,
    d: int,
    rng: np.random.Generator,
    stats: SamplerStats | None = None,
) -> DegreeSequence:
    """Draw a degree sequence from the conditioned truncated Poisson law.

    The result is distributed as n i.i.d. truncated Poisson degrees
    conditioned on summing to 2m, equivalently as the box occupancies of
    2m balls dropped into n boxes of capacity d: P(x) is proportional to
    1/prod(x_i!).

    Raises:
        ValueError: If 2m > d*n (infeasible) or n, m, d are out of range.
        SamplingError: If the conditioning retry budget (about 10^4 sqrt(n)
            histogram draws, versus an expected O(sqrt(n))) is exhausted.
    """
    _check_instance(n, m, d)
    if 2 * m == d * n:
        # The constraint pins every degree to d; the conditional law is a
        # point mass and no mean-matched rate exists (2m/n = d is not an
        # attainable truncated Poisson mean).
        degrees = np.full(n, d, dtype=np.int64)
        return DegreeSequence(degrees=degrees, n=n, m=m, d=d)
    law = truncpoisson.make_degree_law(d, 2 * m / n)
    histogram = _conditioned_histogram(n, 2 * m, law.probs, rng, stats)
    values = np.repeat(np.arange(d + 1), histogram)
    degrees = rng.permutation(values)
    return DegreeSequence(degrees=degrees, n=n, m=m, d=d)


def pair_configuration(x: DegreeSequence, rng: np.random.Generator) -> Multigraph:
    """Uniform configuration pairing of the sequence's half-edges.

    Lays out x_i tokens for vertex i, shuffles all 2m tokens uniformly,
    and pairs consecutive tokens.  Every perfect matching of the tokens is
    equally likely.
    """
    tokens = np.repeat(np.arange(x.n), x.degrees)
    rng.shuffle(tokens)
    return Multigraph(edges=tokens.reshape(-1, 2), n=x.n)


def is_simple(g: Multigraph) -> bool:
    """True iff the multigraph has no loop and no repeated pair."""
    if g.m == 0:
        return True
    lo = g.edges.min(axis=1)
    hi = g.edges.max(axis=1)
    if np.any(lo == hi):
        return False
    codes = np.sort(lo * g.n + hi)
    return not np.any(np.diff(codes) == 0)


def alpha_diagnostic(x: DegreeSequence) -> float:
    """sum_i x_i(x_i - 1) / (2m), in [0, d].

    Vanishes when all degrees are 0 or 1 and controls the asymptotic
    simplicity acceptance probability of the configuration pairing.
    """
    deg = x.degrees
    return float((deg * (deg - 1)).sum() / (2 * x.m))


def _simple_graph_from_multigraph(g: Multigraph, d: int) -> SimpleGraph:
    lo = g.edges.min(axis=1)
    hi = g.edges.max(axis=1)
    order = np.lexsort((hi, lo))
    edges = np.column_stack((lo[order], hi[order]))
    return SimpleGraph(n=g.n, m=g.m, d=d, edges=edges)


def sample_graph(
    n: int,
    m: int,
    d: int,
    rng: np.random.Generator,
    stats: SamplerStats | None = None,
) -> SimpleGraph:
    """Sample a uniform graph on n vertices with m edges and max degree <= d.

    Repeats {fresh degree sequence; fresh pairing} until the pairing is
    simple.  Determinism: identical (n, m, d) and generator state produce
    the identical graph.

    Args:
        stats: Optional SamplerStats accumulator; records histogram draws,
            pairing attempts, and per-attempt alpha diagnostics.

    Raises:
        ValueError: If the instance is infeasible (2m > dn).
        SamplingError: If a retry budget is exhausted (pathological
            parameters, e.g. an instance whose rare feasible sequences
            almost never pair simply).
    """
    _check_instance(n, m, d)
    for _ in range(SIMPLICITY_CAP):
        x = sample_degree_sequence(n, m, d, rng, stats)
        g = pair_configuration(x, rng)
        ok = is_simple(g)
        if stats is not None:
            stats.record_pairing(alpha_diagnostic(x), ok)
        if ok:
            return _simple_graph_from_multigraph(g, d)
    raise SamplingError(
        f"no simple pairing in {SIMPLICITY_CAP} restarts for "
        f"(n={n}, m={m}, d={d}); the simple graphs of this instance are "
        "vanishingly rare under the configuration pairing"
    )


def sample_edge_codes(
    n: int,
    m: int,
    d: int,
    count: int,
    rng: np.random.Generator,
    chunk_rows: int | None = None,
) -> np.ndarray:
    """Bulk-sample `count` uniform graphs, returned as sorted edge codes.

    Row k holds the k-th sampled graph as its m edge codes u*n + v
    (u < v), sorted ascending -- the same canonical form SimpleGraph uses.
    The sampling process is the one sample_graph runs (fresh sequence and
    pairing per attempt, keep the simple ones, in attempt order), executed
    on whole batches of attempts at once so that tiny instances can be
    sampled millions of times in vectorized numpy.

    Intended for uniformity testing at small n; memory per chunk scales
    with chunk_rows * n.
    """
    _check_instance(n, m, d)
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if chunk_rows is None:
        chunk_rows = max(64, min(8192, 4_000_000 // max(n, 2 * m)))
    regular = 2 * m == d * n
    if not regular:
        law = truncpoisson.make_degree_law(d, 2 * m / n)
        weights = np.arange(d + 1)
    vertex_row = np.arange(n)

    out = np.empty((count, m), dtype=np.int64)
    filled = 0
    attempts = 0
    # Budget mirrors the scalar caps: conditioning draws per kept sequence
    # times simplicity restarts per kept graph.
    budget = SIMPLICITY_CAP * math.ceil(SEQUENCE_CAP_FACTOR * math.sqrt(n))
    while filled < count:
        if attempts > budget and filled == 0:
            raise SamplingError(
                f"no graph produced after {attempts} bulk attempts for "
                f"(n={n}, m={m}, d={d})"
            )
        attempts += chunk_rows
        if regular:
            degmat = np.full((chunk_rows, n), d, dtype=np.int64)
        else:
            counts = rng.multinomial(n, law.probs, size=chunk_rows)
            ok = np.nonzero(counts @ weights == 2 * m)[0]
            if ok.size == 0:
                continue
            counts = counts[ok]
            k = counts.shape[0]
            degmat = np.repeat(
                np.tile(np.arange(d + 1), k), counts.ravel()
            ).reshape(k, n)
            degmat = rng.permuted(degmat, axis=1)
        k = degmat.shape[0]
        tokens = np.repeat(np.tile(vertex_row, k), degmat.ravel()).reshape(k, 2 * m)
        tokens = rng.permuted(tokens, axis=1)
        u = tokens[:, 0::2]
        v = tokens[:, 1::2]
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        codes = np.sort(lo * n + hi, axis=1)
        loops = np.any(lo == hi, axis=1)
        if m > 1:
            dups = np.any(np.diff(codes, axis=1) == 0, axis=1)
        else:
            dups = np.zeros(k, dtype=bool)
        good = codes[~(loops | dups)]
        take = min(good.shape[0], count - filled)
        out[filled : filled + take] = good[:take]
        filled += take
    return out


def write_graph(path: str | Path, g: SimpleGraph) -> None:
    """Write the text edge-list format: header "n m d", then "u v" lines.

    Edge lines have u < v and appear in lexicographic order; vertices are
    0-indexed.  This is the interchange format the components CLI reads.
    """
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.m} {g.d}\n")
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")


def read_graph(path: str | Path) -> SimpleGraph:
    """Read the edge-list format written by write_graph, with validation."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 3:
            raise ValueError(f"{path}: header must be 'n m d'")
        n, m, d = (int(t) for t in header)
        edges = np.loadtxt(fh, dtype=np.int64, ndmin=2) if m else np.empty((0, 2), int)
    if edges.shape != (m, 2):
        raise ValueError(f"{path}: expected {m} edge lines, got {edges.shape}")
    return SimpleGraph(n=n, m=m, d=d, edges=edges)
