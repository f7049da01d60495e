"""Exact counting: backtracking oracles, closed walks, fast counters."""

import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sslab import (
    aut_order,
    closed_walk_count,
    count_c2t,
    count_ktt,
    hom_complete_bipartite,
    hom_count,
    inj_count,
)
from sslab.graphs import (
    Graph,
    complete,
    complete_bipartite,
    cycle,
    path,
    sample_gnm,
    split_graph,
    star,
)
from sslab.homcounts import (
    BudgetExceededError,
    CountError,
    PatternTooLargeError,
    _enumerate_c2t,
)
from conftest import random_graph


class TestBacktracking:
    def test_hom_k2_is_big_m(self):
        for s in range(20):
            g = random_graph(s, 9, allow_empty=True)
            assert hom_count(path(2), g).value == g.big_m

    def test_hom_p3_is_degree_squares(self):
        for s in range(20):
            g = random_graph(40 + s, 9)
            assert hom_count(path(3), g).value == sum(d * d for d in g.degrees)

    def test_inj_triangles(self):
        g = complete(5)
        assert inj_count(cycle(3), g).value == 5 * 4 * 3

    def test_known_aut_orders(self):
        assert aut_order(cycle(6)) == 12
        assert aut_order(complete_bipartite(3, 3)) == 72
        assert aut_order(path(4)) == 2
        assert aut_order(complete(4)) == 24

    def test_method_tag(self):
        assert hom_count(path(2), path(2)).method == "backtracking"

    def test_pattern_limit(self):
        with pytest.raises(PatternTooLargeError):
            hom_count(path(11), path(3))

    def test_monotone_under_edge_addition(self):
        rng = random.Random(8)
        h = cycle(4)
        for s in range(15):
            g = random_graph(200 + s, 8)
            non_edges = [
                (u, v)
                for u in range(g.n)
                for v in range(u + 1, g.n)
                if not g.has_edge(u, v)
            ]
            if not non_edges:
                continue
            u, v = rng.choice(non_edges)
            g2 = Graph.from_edges(g.n, list(g.edges) + [(u, v)])
            assert hom_count(h, g2).value >= hom_count(h, g).value


class TestClosedWalks:
    def test_matches_hom_of_even_cycles(self):
        for s in range(50):
            g = random_graph(2000 + s, 7, allow_empty=True)
            for t in (2, 3):
                assert (
                    closed_walk_count(g, 2 * t).value
                    == hom_count(cycle(2 * t), g).value
                )

    def test_length_two_is_big_m(self):
        g = random_graph(3, 8)
        assert closed_walk_count(g, 2).value == g.big_m

    def test_bigint_path_agrees_with_float_path(self):
        g = split_graph(2, 60)
        a = g.adjacency_matrix()
        # length large enough to force the exact integer route
        val = closed_walk_count(g, 40).value
        lam = np.max(np.linalg.eigvalsh(a))
        assert val > 2**52  # genuinely out of float64-exact range
        assert abs(val / lam**40 - 1) < 0.5  # dominated by the top eigenvalue

    def test_small_bigint_crosscheck(self):
        g = complete(4)
        want = int(round(np.trace(np.linalg.matrix_power(g.adjacency_matrix(), 9))))
        assert closed_walk_count(g, 9).value == want

    def test_bad_length(self):
        with pytest.raises(CountError):
            closed_walk_count(path(2), 0)


class TestCompleteBipartite:
    def test_hom_matches_backtracking(self):
        for s in range(25):
            g = random_graph(700 + s, 7, allow_empty=True)
            for t in (2, 3):
                assert (
                    hom_complete_bipartite(g, t)
                    == hom_count(complete_bipartite(t, t), g).value
                )

    def test_count_ktt_vs_inj(self):
        for s in range(40):
            g = random_graph(5000 + s, 8, allow_empty=True)
            for t in (2, 3):
                inj = inj_count(complete_bipartite(t, t), g).value
                denom = 2 * math.factorial(t) ** 2
                assert inj % denom == 0
                assert count_ktt(g, t).value == inj // denom

    def test_ktt_clique_closed_form(self):
        # K22 copies in K_n: 3 C(n,4)
        for n in (4, 5, 6, 8):
            assert count_ktt(complete(n), 2).value == 3 * math.comb(n, 4)

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            count_ktt(complete(30), 5, budget=10)

    def test_method_tag(self):
        assert count_ktt(complete(5), 2).method == "codegree"


class TestEvenCycles:
    def test_count_c2t_vs_inj(self):
        for s in range(40):
            g = random_graph(6000 + s, 8, allow_empty=True)
            for t in (2, 3):
                inj = inj_count(cycle(2 * t), g).value
                assert inj % (4 * t) == 0
                assert count_c2t(g, t).value == inj // (4 * t)

    def test_moebius_vs_enumeration_t3_t4(self):
        for s in range(12):
            g = random_graph(8000 + s, 9)
            for t in (3, 4):
                assert count_c2t(g, t).value == _enumerate_c2t(g, t, 10**9)

    def test_c4_in_split_closed_form(self):
        # 4-cycles of S_{2,m} with r=0: pairs of independent vertices, C(q,2)
        g = split_graph(2, 21)  # q=10
        assert count_c2t(g, 2).value == math.comb(10, 2)
        assert count_c2t(g, 2).value == inj_count(cycle(4), g).value // 8

    def test_methods(self):
        assert count_c2t(complete(6), 2).method == "codegree"
        assert count_c2t(complete(8), 3).method == "walk-moebius"
        # quotients of the 8-cycle include a width-3 pattern; falls back
        assert count_c2t(complete(9), 4).method == "cycle-enum"

    def test_zero_small_hosts(self):
        assert count_c2t(path(3), 2).value == 0
        assert count_c2t(complete(5), 3).value == 0  # needs 6 distinct vertices
        assert count_c2t(cycle(5), 3).value == 0

    def test_cycle_hosts(self):
        assert count_c2t(cycle(6), 3).value == 1
        assert count_c2t(cycle(8), 4).value == 1
        assert count_c2t(cycle(8), 2).value == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2**31))
def test_counters_agree_property(seed):
    rng = random.Random(seed)
    n = rng.randint(4, 8)
    m = rng.randint(3, n * (n - 1) // 2)
    g = sample_gnm(n, m, seed)
    t = rng.choice([2, 3])
    inj_k = inj_count(complete_bipartite(t, t), g).value
    assert count_ktt(g, t).value == inj_k // (2 * math.factorial(t) ** 2)
    inj_c = inj_count(cycle(2 * t), g).value
    assert count_c2t(g, t).value == inj_c // (4 * t)
    assert closed_walk_count(g, 2 * t).value == hom_count(cycle(2 * t), g).value
