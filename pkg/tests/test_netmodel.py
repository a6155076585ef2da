import json

import pytest
from hypothesis import given, settings, strategies as st

from qnutility import (NetworkError, NetworkSpec, load_network, make_chain, make_dumbbell,
                       save_network, split_node)


def test_chain_three_nodes():
    net = make_chain(3, 0.6, 0.9, 0.0)
    assert net.rates == {(0, 1): 0.6, (1, 2): 0.6}
    assert net.rate(0, 2) == 0.0
    assert net.swap_eff == (0.9, 0.9, 0.9)


def test_chain_two_nodes():
    net = make_chain(2, 1.0, 0.5)
    assert net.links == [(0, 1)] and net.rate(1, 0) == 1.0


def test_chain_reference_parameters():
    net = make_chain(12, 0.6, 0.9, 0.01)
    assert len(net.links) == 11
    assert all(q == 0.9 for q in net.swap_eff)
    assert net.epsilon_eff == 0.01


def test_chain_rejects_short():
    with pytest.raises(NetworkError):
        make_chain(1, 0.6, 0.9)


@pytest.mark.parametrize("M", [2, 5, 17])
def test_chain_is_a_path(M):
    adj = make_chain(M, 0.6, 0.9).adjacency()
    assert sorted(len(v) for v in adj.values()) == [1, 1] + [2] * (M - 2)
    assert all(abs(a - b) == 1 for a in adj for b in adj[a])


def test_dumbbell_layout():
    net = make_dumbbell(3, 0.6, 0.6, 0.9)
    assert net.num_nodes == 8 and len(net.links) == 7
    assert net.rate(0, 1) == 0.6
    assert {b for (a, b) in net.links if a == 0} == {1, 2, 3, 4}
    assert {b for (a, b) in net.links if a == 1} == {5, 6, 7}


def test_dumbbell_minimal():
    net = make_dumbbell(1, 1.0, 1.0, 1.0, 0.0)
    assert net.num_nodes == 4 and net.links == [(0, 1), (0, 2), (1, 3)]


def test_dumbbell_bar_ratio():
    net = make_dumbbell(3, 0.6, 60.0, 0.9, 0.01)
    assert net.rate(0, 1) / net.rate(0, 2) == pytest.approx(100)


@pytest.mark.parametrize("side", [1, 2, 5])
def test_dumbbell_is_tree(side):
    net = make_dumbbell(side, 0.6, 0.6, 0.9)
    M = net.num_nodes
    assert len(net.links) == M - 1
    seen, stack = {0}, [0]
    adj = net.adjacency()
    while stack:
        for v in adj[stack.pop()] - seen:
            seen.add(v)
            stack.append(v)
    assert len(seen) == M


def test_dumbbell_rejects_no_spokes():
    with pytest.raises(NetworkError):
        make_dumbbell(0, 0.6, 0.6, 0.9)


def test_split_two_node_hub():
    net = NetworkSpec((0.9, 0.8), {(0, 1): 1.0})
    out = split_node(net, 0, 2, 10.0)
    assert out.num_nodes == 3
    assert out.rates == {(0, 1): 1.0, (0, 2): 10.0}
    assert out.swap_eff == (0.9, 0.8, 0.9)


def test_split_rejects_single_copy():
    with pytest.raises(NetworkError):
        split_node(make_chain(2, 1.0, 1.0), 0, 1, 10.0)


def test_split_unknown_node():
    with pytest.raises(NetworkError):
        split_node(make_chain(2, 1.0, 1.0), 5, 2, 10.0)


def test_split_middle_of_chain():
    out = split_node(make_chain(3, 0.6, 0.9), 1, 2, 100.0)
    # hand-drawn: 0 - 1 - 2 with the new copy 3 hanging off 1
    assert out.adjacency() == {0: {1}, 1: {0, 2, 3}, 2: {1}, 3: {1}}
    assert out.rate(1, 3) == 100.0


def test_ebar_sets_epsilon():
    net = NetworkSpec((1.0, 1.0), {(0, 1): 1.0}, ebar=0.005)
    assert net.epsilon_eff == 2 * 0.005


@pytest.mark.parametrize("kwargs", [
    dict(swap_eff=(1.2, 0.5), rates={(0, 1): 1.0}),
    dict(swap_eff=(1.0, 0.5), rates={(0, 1): -1.0}),
    dict(swap_eff=(1.0, 0.5), rates={(0, 0): 1.0}),
    dict(swap_eff=(1.0, 0.5), rates={(0, 2): 1.0}),
    dict(swap_eff=(1.0, 0.5), rates={(0, 1): 1.0, (1, 0): 2.0}),
    dict(swap_eff=(1.0, 0.5), rates={(0, 1): 1.0}, epsilon_eff=-0.1),
    dict(swap_eff=(1.0,), rates={}),
])
def test_invalid_networks(kwargs):
    with pytest.raises(NetworkError):
        NetworkSpec(**kwargs)


def test_symmetric_keys():
    net = NetworkSpec((1.0, 1.0, 1.0), {(1, 0): 0.5, (2, 1): 0.25})
    assert net.rates == {(0, 1): 0.5, (1, 2): 0.25}


rates_st = st.floats(min_value=1e-6, max_value=1e3, allow_nan=False, allow_subnormal=False)


@settings(max_examples=50, deadline=None)
@given(M=st.integers(2, 8), data=st.data())
def test_round_trip_is_exact(tmp_path_factory, M, data):
    pairs = [(a, b) for a in range(M) for b in range(a + 1, M)]
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True))
    rates = {p: data.draw(rates_st) for p in chosen}
    q = data.draw(st.lists(st.floats(0, 1), min_size=M, max_size=M))
    use_ebar = data.draw(st.booleans())
    err = data.draw(st.floats(0, 0.1))
    net = NetworkSpec(tuple(q), rates, **({"ebar": err} if use_ebar else {"epsilon_eff": err}))
    path = tmp_path_factory.mktemp("net") / "net.json"
    save_network(net, path)
    back = load_network(path)
    assert back == net
    assert back.rates == net.rates and back.swap_eff == net.swap_eff
    assert back.epsilon_eff == net.epsilon_eff


def test_file_schema(tmp_path):
    path = tmp_path / "n.json"
    save_network(make_chain(3, 0.6, 0.9, 0.01), path)
    doc = json.loads(path.read_text())
    assert doc == {
        "nodes": [{"id": 0, "q": 0.9}, {"id": 1, "q": 0.9}, {"id": 2, "q": 0.9}],
        "links": [{"a": 0, "b": 1, "rate": 0.6}, {"a": 1, "b": 2, "rate": 0.6}],
        "epsilon_eff": 0.01,
    }


@pytest.mark.parametrize("doc", [
    "not json",
    json.dumps({"links": []}),
    json.dumps({"nodes": [{"id": 0, "q": 1}, {"id": 2, "q": 1}], "links": []}),
    json.dumps({"nodes": [{"id": 0, "q": 1}, {"id": 1, "q": 1}],
                "links": [{"a": 0, "b": 1, "rate": 1}, {"a": 1, "b": 0, "rate": 2}]}),
    json.dumps({"nodes": [{"id": 0, "q": 1.5}, {"id": 1, "q": 1}], "links": []}),
    json.dumps({"nodes": [{"id": 0, "q": 1}, {"id": 1, "q": 1}], "links": [{"a": 0, "rate": 1}]}),
])
def test_load_rejects_malformed(tmp_path, doc):
    path = tmp_path / "bad.json"
    path.write_text(doc)
    with pytest.raises(NetworkError):
        load_network(path)


def test_load_ebar_document(tmp_path):
    path = tmp_path / "e.json"
    path.write_text(json.dumps({"nodes": [{"id": 0, "q": 1}, {"id": 1, "q": 1}],
                                "links": [{"a": 0, "b": 1, "rate": 0.6}], "ebar": 0.005}))
    assert load_network(path).epsilon_eff == 0.01
