"""Tests for degree-sequence sampling, pairing, and graph sampling."""

import itertools
import math
from collections import Counter

import numpy as np
import pytest

from gnmd import oracle, sampler, truncpoisson as tp
from gnmd.seeding import make_rng, trial_rng


class TestSampleDegreeSequence:
    def test_tiny_instance_support(self):
        # n=2, m=1, d=3: the only vectors summing to 2.
        seen = set()
        for seed in range(40):
            x = sampler.sample_degree_sequence(2, 1, 3, make_rng(seed))
            seen.add(tuple(x.degrees))
        assert seen <= {(1, 1), (2, 0), (0, 2)}
        assert (1, 1) in seen  # overwhelmingly the most likely

    def test_sum_always_two_m(self):
        for seed in range(20):
            x = sampler.sample_degree_sequence(50, 40, 4, make_rng(seed))
            assert int(x.degrees.sum()) == 80
            assert x.degrees.max() <= 4

    def test_regular_boundary_is_point_mass(self):
        x = sampler.sample_degree_sequence(6, 6, 2, make_rng(0))
        assert (x.degrees == 2).all()

    def test_infeasible_instance_rejected(self):
        with pytest.raises(ValueError):
            sampler.sample_degree_sequence(4, 5, 2, make_rng(0))

    @pytest.mark.parametrize("n,m,d", [(0, 1, 2), (4, 0, 2), (4, 2, 0)])
    def test_degenerate_parameters_rejected(self, n, m, d):
        with pytest.raises(ValueError):
            sampler.sample_degree_sequence(n, m, d, make_rng(0))

    def test_exact_sequence_distribution(self):
        # For n=3, d=2, sum 4 the conditional law weights each sequence x
        # by 1/prod(x_i!).  Independent oracle: enumerate and normalize.
        weights = {}
        for seq in itertools.product(range(3), repeat=3):
            if sum(seq) == 4:
                weights[seq] = 1.0 / math.prod(math.factorial(v) for v in seq)
        total = sum(weights.values())
        exact = {seq: w / total for seq, w in weights.items()}

        rng = make_rng(777)
        trials = 40_000
        counts = Counter(
            tuple(sampler.sample_degree_sequence(3, 2, 2, rng).degrees)
            for _ in range(trials)
        )
        assert set(counts) <= set(exact)
        for seq, p in exact.items():
            assert counts[seq] / trials == pytest.approx(p, abs=0.01)

    def test_marginal_matches_conditional_oracle(self):
        # Degree-class frequencies against the exact conditional marginal
        # P(Z_1 = k | sum = 2m) from the convolution-power oracle.
        n, m, d = 10_000, 6_000, 4
        lam = tp.invert_mean(d, 2 * m / n)
        exact = oracle.conditional_marginal(n, 2 * m, d, lam)
        totals = np.zeros(d + 1)
        samples = 200
        for t in range(samples):
            x = sampler.sample_degree_sequence(n, m, d, trial_rng(99, t))
            totals += np.bincount(x.degrees, minlength=d + 1)
        freqs = totals / (samples * n)
        np.testing.assert_allclose(freqs, exact, atol=0.01)


class TestPairConfiguration:
    def test_forced_single_edge(self):
        x = sampler.DegreeSequence(degrees=np.array([1, 1]), n=2, m=1, d=3)
        g = sampler.pair_configuration(x, make_rng(0))
        assert sorted(g.edges[0].tolist()) == [0, 1]

    def test_forced_loop(self):
        x = sampler.DegreeSequence(degrees=np.array([2, 0]), n=2, m=1, d=3)
        g = sampler.pair_configuration(x, make_rng(0))
        assert g.edges[0].tolist() == [0, 0]
        assert not sampler.is_simple(g)

    def test_uniform_over_perfect_matchings(self):
        # Four degree-1 vertices admit exactly three matchings, each of
        # probability 1/3.
        x = sampler.DegreeSequence(degrees=np.array([1, 1, 1, 1]), n=4, m=2, d=1)
        rng = make_rng(5)
        counts = Counter()
        trials = 100_000
        for _ in range(trials):
            g = sampler.pair_configuration(x, rng)
            key = tuple(sorted(tuple(sorted(e)) for e in g.edges.tolist()))
            counts[key] += 1
        matchings = {
            ((0, 1), (2, 3)),
            ((0, 2), (1, 3)),
            ((0, 3), (1, 2)),
        }
        assert set(counts) == matchings
        for key in matchings:
            assert counts[key] / trials == pytest.approx(1 / 3, abs=0.01)


class TestIsSimple:
    def test_loop_detected(self):
        g = sampler.Multigraph(edges=np.array([[0, 0]]), n=2)
        assert not sampler.is_simple(g)

    def test_parallel_edges_detected(self):
        g = sampler.Multigraph(edges=np.array([[0, 1], [1, 0]]), n=2)
        assert not sampler.is_simple(g)

    def test_path_is_simple(self):
        g = sampler.Multigraph(edges=np.array([[0, 1], [1, 2]]), n=3)
        assert sampler.is_simple(g)


class TestAlphaDiagnostic:
    def test_zero_when_no_degree_exceeds_one(self):
        x = sampler.DegreeSequence(degrees=np.array([1, 1, 0, 0]), n=4, m=1, d=2)
        assert sampler.alpha_diagnostic(x) == 0.0

    def test_hand_computed_value(self):
        x = sampler.DegreeSequence(degrees=np.array([2, 2]), n=2, m=2, d=2)
        assert sampler.alpha_diagnostic(x) == pytest.approx(1.0)

    def test_typical_value_tracks_shifted_mean(self):
        # For law-typical sequences alpha concentrates around
        # mean(d-1, lam), since E Z(Z-1)/E Z = mean(d-1, lam).
        n, m, d = 10_000, 6_000, 4
        lam = tp.invert_mean(d, 2 * m / n)
        expected = tp.mean(d - 1, lam)
        x = sampler.sample_degree_sequence(n, m, d, make_rng(3))
        assert sampler.alpha_diagnostic(x) == pytest.approx(expected, abs=0.05)


class TestSampleGraph:
    def test_unique_simple_graph_always_returned(self):
        for seed in range(10):
            g = sampler.sample_graph(2, 1, 3, make_rng(seed))
            assert g.edges.tolist() == [[0, 1]]

    def test_deterministic_given_seed(self):
        a = sampler.sample_graph(300, 200, 4, make_rng(123))
        b = sampler.sample_graph(300, 200, 4, make_rng(123))
        assert (a.edges == b.edges).all()
        c = sampler.sample_graph(300, 200, 4, make_rng(124))
        assert a.edges.shape != c.edges.shape or not (a.edges == c.edges).all()

    def test_invariants_hold(self):
        g = sampler.sample_graph(500, 400, 4, make_rng(8))
        assert g.m == 400
        assert g.degrees().max() <= 4
        assert (g.edges[:, 0] < g.edges[:, 1]).all()
        codes = g.edges[:, 0] * g.n + g.edges[:, 1]
        assert (np.diff(codes) > 0).all()

    def test_adjacency_consistent_with_edges(self):
        g = sampler.sample_graph(30, 25, 4, make_rng(1))
        adj = g.adjacency()
        rebuilt = set()
        for u, neighbors in enumerate(adj):
            for v in neighbors:
                rebuilt.add((min(u, v), max(u, v)))
        assert rebuilt == {tuple(e) for e in g.edges.tolist()}

    def test_stats_accumulate(self):
        stats = sampler.SamplerStats()
        sampler.sample_graph(200, 150, 4, make_rng(2), stats)
        assert stats.pairings >= 1
        assert stats.simple >= 1
        assert stats.histogram_draws >= 1
        assert 0.0 <= stats.alpha_mean <= 4.0

    def test_empty_ensemble_trips_retry_cap(self):
        # n=1, m=1, d=2 forces a loop every time; no simple graph exists.
        with pytest.raises(sampler.SamplingError):
            sampler.sample_graph(1, 1, 2, make_rng(0))

    def test_infeasible_instance_rejected(self):
        with pytest.raises(ValueError):
            sampler.sample_graph(3, 4, 2, make_rng(0))


class TestBulkSampler:
    def test_codes_are_canonical_and_deterministic(self):
        codes = sampler.sample_edge_codes(6, 5, 3, 500, make_rng(17))
        again = sampler.sample_edge_codes(6, 5, 3, 500, make_rng(17))
        assert (codes == again).all()
        assert (np.diff(codes, axis=1) > 0).all()

    def test_codes_stay_inside_enumerated_support(self):
        ens = oracle.enumerate_graphs(5, 4, 2)
        codes = sampler.sample_edge_codes(5, 4, 2, 2_000, make_rng(4))
        support = {row.tobytes() for row in ens.edge_codes}
        assert all(row.tobytes() in support for row in codes)

    def test_scalar_and_bulk_paths_agree_in_distribution(self):
        # Same frequencies (up to noise) from sample_graph and the bulk
        # path on a 16-graph ensemble.
        ens = oracle.enumerate_graphs(4, 3, 2)
        index = {row.tobytes(): i for i, row in enumerate(ens.edge_codes)}
        trials = 4_000
        scalar = np.zeros(ens.count)
        rng = make_rng(31)
        for _ in range(trials):
            g = sampler.sample_graph(4, 3, 2, rng)
            key = (g.edges[:, 0] * 4 + g.edges[:, 1]).tobytes()
            scalar[index[key]] += 1
        bulk = np.zeros(ens.count)
        for row in sampler.sample_edge_codes(4, 3, 2, trials, make_rng(32)):
            bulk[index[row.tobytes()]] += 1
        np.testing.assert_allclose(scalar / trials, bulk / trials, atol=0.03)
        np.testing.assert_allclose(scalar / trials, 1 / ens.count, atol=0.03)

    def test_regular_instance(self):
        codes = sampler.sample_edge_codes(8, 12, 3, 50, make_rng(9))
        for row in codes:
            u, v = row // 8, row % 8
            degrees = np.bincount(np.concatenate([u, v]), minlength=8)
            assert (degrees == 3).all()


class TestGraphFileFormat:
    def test_round_trip(self, tmp_path):
        g = sampler.sample_graph(40, 30, 4, make_rng(6))
        path = tmp_path / "graph.txt"
        sampler.write_graph(path, g)
        back = sampler.read_graph(path)
        assert back.n == g.n and back.m == g.m and back.d == g.d
        assert (back.edges == g.edges).all()

    def test_format_layout(self, tmp_path):
        g = sampler.sample_graph(2, 1, 3, make_rng(0))
        path = tmp_path / "tiny.txt"
        sampler.write_graph(path, g)
        assert path.read_text() == "2 1 3\n0 1\n"

    def test_read_rejects_malformed_header(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("3 1\n0 1\n")
        with pytest.raises(ValueError):
            sampler.read_graph(path)

    def test_read_rejects_unsorted_edges(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("3 2 2\n1 2\n0 1\n")
        with pytest.raises(ValueError):
            sampler.read_graph(path)
