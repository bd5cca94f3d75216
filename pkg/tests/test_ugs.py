import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import chisquare

from graphlets import oracle
from graphlets.errors import EmptyInstanceError, UsageError
from graphlets.graph import gen_clique, gen_empty, gen_erdos_renyi, gen_path, gen_star
from graphlets.ugs import UgsSampler


def test_star_bucket_law_and_acceptance():
    s = UgsSampler(gen_star(3), 3)
    assert s.beta_k == Fraction(1, 54)
    for S in [(0, 1, 2), (0, 1, 3), (0, 2, 3)]:
        assert s.prob(S) == pytest.approx(1 / 3)
        assert s.acceptance(S) == pytest.approx(1 / 18)
    assert s.order.p(0) == 1.0


def test_triangle_prob_is_one():
    s = UgsSampler(gen_clique(3), 3)
    assert s.prob((0, 1, 2)) == pytest.approx(1.0)
    v = int(s.order.order[0])
    assert s.rand_grow(v, 0).vertices == (0, 1, 2)


def test_p3_middle_returns_path():
    s = UgsSampler(gen_path(3), 3)
    tr = s.rand_grow(1, 5, check_bounds=True)
    assert tr.vertices == (0, 1, 2)
    assert tr.v == 1 and len(tr.sets) == 3


def test_prob_errors():
    s = UgsSampler(gen_path(4), 3)
    with pytest.raises(UsageError):
        s.prob((0, 1, 3))
    with pytest.raises(UsageError):
        s.prob((0, 1, 2), v=2)
    with pytest.raises(UsageError):
        s.rand_grow(0)


def test_p4_prob_matches_growth_frequency():
    s = UgsSampler(gen_path(4), 3)
    N = 100_000
    sets, probs = s.grow_many(1, N, seed=4)
    hit = np.mean([tuple(sorted(r)) == (0, 1, 2) for r in sets.tolist()])
    p = s.prob((0, 1, 2))
    assert abs(hit - p) <= 3 * math.sqrt(p * (1 - p) / N)


def test_star_growth_law():
    s = UgsSampler(gen_star(3), 3)
    law = oracle.exact_sampling_law(s, 0)
    assert all(abs(p - 1 / 3) < 1e-12 for p in law.values())
    sets, _ = s.grow_many(0, 30000, seed=1)
    emp = oracle.empirical_law(np.sort(sets, axis=1))
    assert oracle.tv_distance(emp, law) <= oracle.noise_allowance(3, 30000)


def test_k4_triangles_uniform():
    g = gen_clique(4)
    s = UgsSampler(g, 3)
    out, stats = s.sample(100_000, seed=9)
    idx = oracle.enumerate_graphlets(g, 3)
    counts = oracle.counts_over(idx, out)
    assert chisquare(counts).pvalue > 0.01
    assert stats.mean_trials >= 1


def test_empty_instance():
    s = UgsSampler(gen_empty(5), 3)
    with pytest.raises(EmptyInstanceError):
        s.sample(1)
    with pytest.raises(EmptyInstanceError):
        s.sample_uniform(0)


def test_trial_count_matches_acceptance_rate():
    s = UgsSampler(gen_star(3), 3)
    _, stats = s.sample(20000, seed=2)
    # acceptance 1/18 per trial: geometric mean 18
    assert abs(stats.mean_trials - 18) < 0.6


def test_jobs_do_not_change_output():
    g = gen_erdos_renyi(40, 0.2, 3)
    s = UgsSampler(g, 4)
    a, _ = s.sample(2000, seed=5, jobs=1)
    b, _ = s.sample(2000, seed=5, jobs=4)
    assert np.array_equal(a, b)


def test_cross_backend_bit_identity(backend):
    g = gen_erdos_renyi(40, 0.2, 3)
    ref = UgsSampler(g, 4, backend="python")
    s = UgsSampler(g, 4, ref.order, backend=backend)
    a, sa = ref.sample(700, seed=13)
    b, sb = s.sample(700, seed=13)
    assert np.array_equal(a, b) and np.array_equal(sa.trials, sb.trials)
    assert np.array_equal(sa.queries, sb.queries)
    x, px = ref.grow_many(int(ref.order.order[0]), 300, seed=2)
    y, py = s.grow_many(int(ref.order.order[0]), 300, seed=2)
    assert np.array_equal(x, y) and np.array_equal(px, py)


def test_samples_are_graphlets_and_sorted():
    g = gen_erdos_renyi(30, 0.2, 1)
    out, _ = UgsSampler(g, 4).sample(500, seed=0)
    assert np.all(np.diff(out, axis=1) > 0)
    assert all(g.induced_connected(r) for r in out.tolist())


def test_growth_cut_bounds_hold():
    g = gen_erdos_renyi(30, 0.3, 2)
    s = UgsSampler(g, 4)
    rng = np.random.default_rng(0)
    for v in np.flatnonzero(s.order.b_base > 0).tolist():
        for _ in range(20):
            s.rand_grow(v, rng, check_bounds=True)


def test_k_limits():
    with pytest.raises(UsageError):
        UgsSampler(gen_clique(4), 1)
    with pytest.raises(UsageError):
        UgsSampler(gen_clique(12), 11)
