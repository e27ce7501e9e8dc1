import itertools

import pytest
from hypothesis import given, strategies as st

from ucdnf.errors import EmptyEdgeSet, SizeCapExceeded, VertexOutOfRange
from ucdnf.hypergraph import (
    Colouring,
    Hypergraph,
    dumps_hg,
    is_hitting_set,
    is_intersecting,
    loads_hg,
    min_monochromatic_hitting_set,
    rank,
    read_col,
    triangle,
    write_col,
)


def test_rank_examples():
    assert rank(triangle()) == 2
    assert rank(Hypergraph(5, [range(1, 6)])) == 5
    with pytest.raises(EmptyEdgeSet):
        rank(Hypergraph(3, []))


def test_intersecting_examples():
    assert is_intersecting(triangle())
    assert not is_intersecting(Hypergraph(2, [{1}, {2}]))


def test_hitting_set_examples():
    T = triangle()
    assert not is_hitting_set(T, {2})
    assert is_hitting_set(T, {1, 2})
    assert is_hitting_set(T, {1, 2, 3})
    with pytest.raises(VertexOutOfRange):
        is_hitting_set(T, {4})


def test_min_mono_examples():
    assert min_monochromatic_hitting_set(triangle(), Colouring("000")) == (2, (1, 2))
    assert min_monochromatic_hitting_set(Hypergraph(2, [{1}, {2}]), Colouring("01")) is None


def test_size_cap():
    G = Hypergraph(4, [{1, 2}, {3, 4}])
    assert min_monochromatic_hitting_set(G, Colouring("0000"), cap=2) == (2, (1, 3))
    with pytest.raises(SizeCapExceeded):
        min_monochromatic_hitting_set(G, Colouring("0000"), cap=1)


def test_dedup_explicit():
    G = Hypergraph(3, [{1, 2}, {2, 1}, {3}])
    assert G.has_duplicates and len(G) == 3
    assert len(G.dedup()) == 2 and not G.dedup().has_duplicates


def test_hg_round_trip(tmp_path):
    G = Hypergraph(4, [{1, 2}, {2, 3, 4}])
    text = dumps_hg(G, ["comment"])
    assert "p hg 4 2" in text
    assert loads_hg(text) == G
    write_col(Colouring("0110"), tmp_path / "c.col")
    assert str(read_col(tmp_path / "c.col")) == "0110"


def _brute_mono(G, c):
    best = None
    V = range(1, G.vertex_count + 1)
    for k in range(G.vertex_count + 1):
        for U in itertools.combinations(V, k):
            if len({c[v] for v in U}) <= 1 and is_hitting_set(G, U):
                return (k, U)
    return best


hypergraphs = st.integers(1, 6).flatmap(
    lambda v: st.tuples(
        st.just(v),
        st.lists(st.sets(st.integers(1, v), min_size=1), min_size=1, max_size=6),
        st.lists(st.integers(0, 1), min_size=v, max_size=v),
    )
)


@given(hypergraphs)
def test_min_mono_matches_brute_force(data):
    v, edges, cols = data
    G, c = Hypergraph(v, edges), Colouring(cols)
    assert min_monochromatic_hitting_set(G, c) == _brute_mono(G, c)


@given(hypergraphs)
def test_intersecting_edges_are_hitting_sets(data):
    v, edges, cols = data
    G = Hypergraph(v, edges)
    if is_intersecting(G):
        assert all(is_hitting_set(G, e) for e in G.edges)


@given(hypergraphs)
def test_min_mono_at_most_smallest_mono_edge(data):
    v, edges, cols = data
    G, c = Hypergraph(v, edges), Colouring(cols)
    if not is_intersecting(G):
        return
    mono = [len(e) for e in G.edges if len({c[u] for u in e}) == 1]
    if mono:
        assert min_monochromatic_hitting_set(G, c)[0] <= min(mono)
