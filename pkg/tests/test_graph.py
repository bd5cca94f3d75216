import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphlets.errors import ParseError, UsageError
from graphlets.graph import (Graph, Graphlet, QueryLedger, from_spec, gen_clique, gen_erdos_renyi,
                             gen_fat_lollipop, gen_path, gen_star, load_edge_list)


def parse(text, **kw):
    return load_edge_list(io.StringIO(text), **kw)


def test_load_path():
    g = parse("0 1\n1 2")
    assert (g.n, g.m) == (3, 2)
    assert g.pair(0, 1) and not g.pair(0, 2)


@pytest.mark.parametrize("text,line,needle", [
    ("0 1\n0 1", 2, "duplicate"),
    ("0 0", 1, "self-loop"),
    ("0 1\n1 x", 2, "non-integer"),
    ("0 1 2", 1, "two"),
    ("0 -1", 1, "negative"),
])
def test_load_errors_name_line(text, line, needle):
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert exc.value.line == line
    assert needle in str(exc.value)


def test_id_beyond_declared_n():
    with pytest.raises(ParseError) as exc:
        parse("0 1\n1 5", n=4)
    assert exc.value.line == 2


def test_duplicates_collapse_on_request():
    g = parse("0 1\n1 0\n1 2", allow_duplicates=True)
    assert g.m == 2


def test_comments_and_blank_lines():
    g = parse("# header\n\n0 1\n  \n1 2\n")
    assert g.m == 2


def test_neighbor_queries():
    s = gen_star(3)
    assert s.neighbor(0, 2) == 2
    assert s.neighbor(1, 2) is None
    t = gen_clique(3)
    assert t.neighbor(0, 1) == 1
    with pytest.raises(UsageError):
        s.neighbor(9, 1)


def test_pair_queries():
    assert gen_clique(3).pair(0, 2)
    assert not gen_path(3).pair(0, 2)
    assert not gen_path(3).pair(1, 1)


def test_ledger_counts_every_query():
    g = gen_star(3)
    g.ledger.reset()
    g.neighbor(0, 1)
    g.pair(0, 1)
    g.degree(0)
    g.degree(1)
    assert g.ledger.snapshot() == {"neighbor_queries": 1, "pair_queries": 1, "degree_queries": 2, "total": 4}
    other = QueryLedger()
    other.add(neighbor=5)
    g.ledger.merge(other)
    assert g.ledger.total == 9


def test_generators():
    assert gen_star(3).degrees.tolist() == [3, 1, 1, 1]
    assert gen_clique(4).m == 6
    a, b = gen_erdos_renyi(25, 0.25, 7), gen_erdos_renyi(25, 0.25, 7)
    assert np.array_equal(a.edges(), b.edges())


@pytest.mark.parametrize("D,d,k,n", [(3, 6, 3, 30), (1, 1, 3, 6), (4, 2, 3, 16)])
def test_lollipop_sizes(D, d, k, n):
    g = gen_fat_lollipop(D, d, k)
    assert g.n == n
    assert g.is_connected()


def test_lollipop_degenerate_is_path():
    g = gen_fat_lollipop(1, 1, 3)
    assert sorted(g.degrees.tolist()) == [1, 1, 2, 2, 2, 2]
    assert g.m == g.n - 1


def test_from_spec():
    assert from_spec("path:4").m == 3
    with pytest.raises(UsageError):
        from_spec("nope:3")
    with pytest.raises(UsageError):
        from_spec("er:3")


def test_graphlet_validation():
    g = gen_path(4)
    assert Graphlet.of(g, [2, 1, 0]).vertices == (0, 1, 2)
    with pytest.raises(UsageError):
        Graphlet.of(g, [0, 2])


def test_roundtrip_edge_list():
    g = gen_erdos_renyi(20, 0.3, 1)
    h = parse(g.to_edge_list(), n=g.n)
    assert g.fingerprint() == h.fingerprint()


edges_st = st.lists(st.tuples(st.integers(0, 14), st.integers(0, 14)), max_size=60)


@settings(max_examples=60, deadline=None)
@given(edges_st)
def test_csr_matches_edge_set(edges):
    E = {tuple(sorted(e)) for e in edges if e[0] != e[1]}
    g = Graph.from_edges(15, np.array(sorted(E), dtype=np.int64).reshape(-1, 2))
    assert g.m == len(E)
    for v in range(15):
        nb = g.adj(v).tolist()
        assert nb == sorted(nb)
        assert set(nb) == {b if a == v else a for a, b in E if v in (a, b)}
    for u in range(15):
        for v in range(15):
            assert g.has_edge(u, v) == ((min(u, v), max(u, v)) in E)


@settings(max_examples=40, deadline=None)
@given(edges_st, st.randoms(use_true_random=False))
def test_relabel_preserves_structure(edges, rnd):
    E = {tuple(sorted(e)) for e in edges if e[0] != e[1]}
    g = Graph.from_edges(15, np.array(sorted(E), dtype=np.int64).reshape(-1, 2))
    perm = list(range(15))
    rnd.shuffle(perm)
    h = g.relabel(np.array(perm))
    assert h.m == g.m
    assert sorted(h.degrees.tolist()) == sorted(g.degrees.tolist())
    for a, b in E:
        assert h.has_edge(perm[a], perm[b])
