import numpy as np
import pytest

from graphlets import oracle
from graphlets.apx import ApxUgsConfig, ApxUgsSampler
from graphlets.errors import EmptyInstanceError, UsageError
from graphlets.graph import gen_clique, gen_empty, gen_erdos_renyi, gen_path, gen_star
from graphlets.order import compute_apx_dd

# sampled mode with a small, explicit h: exercises the estimators rather than exact reads
SAMPLED = dict(exhaustive=False, h_override=2000, ell_override=1)


def sampler(g, k, eps=0.2, seed=0, **cfg):
    return ApxUgsSampler(g, k, eps, seed, config=ApxUgsConfig(k, eps, **cfg))


def test_config_derivations():
    c = ApxUgsConfig(3, 0.2)
    assert c.beta == pytest.approx(0.1)
    assert c.alpha == pytest.approx(0.1 ** 0.5 / 162)
    assert c.gamma == pytest.approx(0.008 / 27) and c.rho == c.gamma
    assert c.coef == pytest.approx(0.1 * 3 ** -0.75)
    with pytest.raises(UsageError):
        ApxUgsConfig(3, 0.0)


def test_literal_h_without_exhaustive_reads_is_refused():
    with pytest.raises(UsageError):
        sampler(gen_star(3), 3, exhaustive=False)


def test_first_vertex_cut_is_its_degree():
    s = sampler(gen_star(3), 3, **SAMPLED)
    est = s.estimate_cuts(0, [0], 0)
    assert est.c_hat[0] == 3.0


def test_zero_cut_estimates_zero():
    s = sampler(gen_star(3), 3, **SAMPLED)
    est = s.estimate_cuts(0, [0, 1], 0)
    assert est.c_hat[1] == 0.0


@pytest.mark.parametrize("cfg", [{}, SAMPLED])
def test_star_cut_coverage(cfg):
    s = sampler(gen_star(3), 3, **cfg)
    delta = 0.1
    hits = sum(abs(s.estimate_cuts(0, [0, 1], seed, delta=delta).c_hat[0] - 2) <= delta * 3
               for seed in range(200))
    assert hits >= 190


def test_triangle_growth_unique():
    g = gen_clique(3)
    s = sampler(g, 3, **SAMPLED)
    v = int(np.flatnonzero(s.order.b_base > 0)[0])
    for seed in range(50):
        S = s.apx_rand_grow(v, seed)
        assert S is None or sorted(S) == [0, 1, 2]


@pytest.mark.parametrize("cfg", [{}, SAMPLED])
def test_star_growth_close_to_exact(cfg):
    s = sampler(gen_star(3), 3, **cfg)
    out = s.grow_many(0, 100_000, seed=1)
    ok = out[out[:, 0] >= 0]
    emp = oracle.empirical_law(np.sort(ok, axis=1))
    law = {g: 1 / 3 for g in [(0, 1, 2), (0, 1, 3), (0, 2, 3)]}
    assert oracle.tv_distance(emp, law) <= 0.1 + oracle.noise_allowance(3, len(ok))


def test_tiny_h_fails_sometimes_never_wrong():
    g = gen_path(3)
    s = sampler(g, 3, exhaustive=False, h_override=4, ell_override=1)
    res = [s.apx_rand_grow(1, seed) for seed in range(100)]
    fails = sum(r is None for r in res)
    assert 0 < fails < 50
    assert all(sorted(r) == [0, 1, 2] for r in res if r is not None)


def test_triangle_prob_within_rho():
    g = gen_clique(3)
    s = sampler(g, 3)
    rho = s.config.rho
    good = sum(abs(s.apx_prob((0, 1, 2), seed)[0] - 1.0) <= rho for seed in range(200))
    assert good >= 190


@pytest.mark.parametrize("S,true", [((0, 1, 2), 1 / 3), ((0, 1, 3), 1 / 3)])
def test_star_prob_sampled(S, true):
    s = sampler(gen_star(3), 3, **SAMPLED)
    good = sum(0.3 <= s.apx_prob(S, seed)[0] <= 0.3667 for seed in range(200))
    assert good >= 190


def test_p3_prob_exact_value():
    s = sampler(gen_path(3), 3)
    p, degraded = s.apx_prob((0, 1, 2), 0)
    assert abs(p - 1.0) <= s.config.rho and not degraded


def test_star_eps_uniform():
    s = sampler(gen_star(3), 3, eps=0.2)
    out, st = s.sample(100_000, seed=3)
    idx = oracle.enumerate_graphlets(s.graph, 3)
    tv = oracle.tv_distance(oracle.counts_over(idx, out) / len(out), idx.uniform())
    assert tv <= 0.2
    assert st.fails == 0


def test_er_eps_uniform_quick():
    g = gen_erdos_renyi(30, 0.25, 0)
    s = sampler(g, 4, eps=0.25, seed=1)
    N = 20_000
    out, _ = s.sample(N, seed=1)
    idx = oracle.enumerate_graphlets(g, 4)
    tv = oracle.tv_distance(oracle.counts_over(idx, out) / N, idx.uniform())
    assert tv <= 0.25 + oracle.noise_allowance(idx.N_k, N)


def test_empty():
    s = sampler(gen_empty(4), 3)
    with pytest.raises(EmptyInstanceError):
        s.sample(1)


def test_needs_apx_order():
    from graphlets.order import compute_dd
    g = gen_star(3)
    with pytest.raises(UsageError):
        ApxUgsSampler(g, 3, 0.2, order=compute_dd(g, 3))


@pytest.mark.parametrize("cfg", [{}, dict(SAMPLED, h_override=60)])
def test_cross_backend_bit_identity(backend, cfg):
    g = gen_erdos_renyi(25, 0.3, 4)
    order = compute_apx_dd(g, 3, 0.1, seed=2)
    conf = ApxUgsConfig(3, 0.2, **cfg)
    ref = ApxUgsSampler(g, 3, 0.2, config=conf, order=order, backend="python")
    s = ApxUgsSampler(g, 3, 0.2, config=conf, order=order, backend=backend)
    a, sa = ref.sample(150, seed=7)
    b, sb = s.sample(150, seed=7)
    assert np.array_equal(a, b) and np.array_equal(sa.trials, sb.trials)
    assert (sa.fails, sa.degraded) == (sb.fails, sb.degraded)
    assert np.array_equal(sa.queries, sb.queries)
    v = int(np.flatnonzero(order.b_base > 0)[0])
    assert np.array_equal(ref.grow_many(v, 200, seed=3), s.grow_many(v, 200, seed=3))


def test_ugs_compare_uniform_on_kept_buckets():
    g = gen_erdos_renyi(30, 0.25, 0)
    order = compute_apx_dd(g, 3, 0.1, seed=0)
    cmp = oracle.ugs_compare(g, order)
    idx = oracle.enumerate_graphlets(g, 3)
    kept = [x for v, B in idx.buckets(order.rank).items() if order.b_base[v] > 0 for x in B]
    for S in kept:
        assert 0 < cmp.acceptance(S) <= 1
    N = 50_000
    out, _ = cmp.sample(N, seed=0)
    emp = oracle.empirical_law(out)
    ref = {x: 1 / len(kept) for x in kept}
    assert oracle.tv_distance(emp, ref) <= oracle.noise_allowance(len(kept), N)
