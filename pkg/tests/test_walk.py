import numpy as np
import pytest

from graphlets import oracle
from graphlets.errors import EmptyInstanceError, UsageError
from graphlets.graph import Graph, gen_clique, gen_empty, gen_erdos_renyi, gen_path, gen_star
from graphlets.walk import (RandomWalkSampler, WalkConfig, WalkState, compute_T, find_start,
                            oracle_t_mix, sample_rw, walk_step)


def test_find_start():
    assert find_start(gen_path(3), 2, np.random.default_rng(0)).vertices in [(0, 1), (1, 2)]
    g = find_start(gen_clique(4), 3, np.random.default_rng(1))
    assert len(g.vertices) == 3
    with pytest.raises(EmptyInstanceError):
        find_start(gen_empty(4), 2, np.random.default_rng(0))


def test_triangle_edge_transitions():
    g = gen_clique(3)
    rng = np.random.default_rng(0)
    st = WalkState((0, 1), rng=rng)
    N = 40000
    seen = {}
    for _ in range(N):
        nxt = tuple(sorted(walk_step(g, st).current))
        seen[nxt] = seen.get(nxt, 0) + 1
    law = {(0, 1): 0.5, (0, 2): 0.25, (1, 2): 0.25}
    assert oracle.tv_distance({k: v / N for k, v in seen.items()}, law) <= oracle.noise_allowance(3, N)


def test_triangle_transitions_match_chain(backend):
    g = gen_clique(3)
    chain = oracle.build_Gk(g, 2)
    rw = RandomWalkSampler(g, WalkConfig(3, 1), backend=backend)
    i = chain.states.index((0, 1))
    out = rw.steps_from((0, 1), 40000, seed=1)
    emp = np.zeros(3)
    for r in out.tolist():
        emp[chain.states.index(tuple(r))] += 1
    assert chain.P[i].tolist() == [0.5, 0.25, 0.25]
    assert oracle.tv_distance(emp / 40000, chain.P[i]) <= oracle.noise_allowance(3, 40000)


def test_p3_chain_mixes_to_uniform():
    chain = oracle.build_Gk(gen_path(3), 2)
    assert chain.size == 2 and chain.n_edges == 1
    assert np.allclose(chain.pi, [0.5, 0.5])
    assert oracle.relaxation_time(chain) == pytest.approx(1.0)


def test_isolated_state_flagged():
    g = gen_path(2)
    with pytest.raises(EmptyInstanceError):
        walk_step(g, WalkState((0, 1), rng=np.random.default_rng(0)))
    with pytest.raises(EmptyInstanceError):
        RandomWalkSampler(g, WalkConfig(3, 5)).sample(1, seed=0)


@pytest.mark.parametrize("g,k,T", [(gen_clique(3), 3, 3), (gen_path(3), 3, 1), (gen_star(3), 4, 3)])
def test_compute_T(g, k, T):
    assert compute_T(g, range(g.n)) == T


def test_k4_triangles_uniform():
    g = gen_clique(4)
    out = RandomWalkSampler(g, WalkConfig(3, 200)).sample(100_000, seed=2)
    idx = oracle.enumerate_graphlets(g, 3)
    assert oracle.tv_distance(oracle.counts_over(idx, out) / len(out), idx.uniform()) <= 0.05


def test_p4_two_paths_even():
    g = gen_path(4)
    out = RandomWalkSampler(g, WalkConfig(3, 500)).sample(20000, seed=3)
    frac = np.mean(out[:, 0] == 0)
    assert abs(frac - 0.5) < 0.02


def test_outputs_are_graphlets():
    g = gen_erdos_renyi(15, 0.3, 1)
    rw = RandomWalkSampler(g, WalkConfig(4, 10))
    out = rw.sample(500, seed=0)
    assert out.shape == (500, 4)
    assert all(g.induced_connected(r) for r in out.tolist())
    one = sample_rw(g, WalkConfig(4, 10), np.random.default_rng(0))
    assert g.induced_connected(one.vertices) and len(one.vertices) == 4


def test_disconnected_warns():
    g = Graph.from_edges(6, np.array([[0, 1], [1, 2], [3, 4], [4, 5]]))
    with pytest.warns(UserWarning):
        RandomWalkSampler(g, WalkConfig(3, 5))


def test_config_validation():
    with pytest.raises(UsageError):
        WalkConfig(1, 5)
    with pytest.raises(UsageError):
        WalkConfig(3, 0)


def test_t_sum_identity():
    for g in (gen_path(4), gen_clique(4), gen_erdos_renyi(12, 0.4, 0), gen_star(4)):
        for k in (3, 4):
            total, edges = oracle.t_sum_matches(g, k)
            assert total == edges


def test_oracle_t_mix(frozen):
    assert oracle_t_mix(gen_clique(4), 3, 0.2) == frozen["walk"]["clique:4"]["t_mix"]


def test_cross_backend_bit_identity(backend):
    g = gen_erdos_renyi(15, 0.3, 1)
    a = RandomWalkSampler(g, WalkConfig(4, 7), backend="python")
    b = RandomWalkSampler(g, WalkConfig(4, 7), backend=backend)
    assert np.array_equal(a.sample(300, seed=4), b.sample(300, seed=4))
    assert a.steps == b.steps and a.state == b.state and np.array_equal(a.attempts, b.attempts)
    g0 = find_start(g, 3, np.random.default_rng(0)).vertices
    assert np.array_equal(a.steps_from(g0, 500, seed=1), b.steps_from(g0, 500, seed=1))
