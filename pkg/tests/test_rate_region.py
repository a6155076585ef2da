import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qnutility import (NetworkSpec, UtilityModel, build_rate_constraints, check_feasible,
                       lemma1_transform, make_chain, make_dumbbell, max_scale, noswap_utility)
from qnutility.rate_region import all_pairs, pair_index

from conftest import random_network, random_tree


def test_pair_index_matches_enumeration():
    for M in range(2, 9):
        assert [pair_index(a, b, M) for a, b in all_pairs(M)] == list(range(M * (M - 1) // 2))
    assert pair_index(3, 1, 5) == pair_index(1, 3, 5)


def test_three_chain_constraint_shapes():
    cons = build_rate_constraints(make_chain(3, 0.6, 0.9))
    assert cons.pairs == [(0, 1), (0, 2), (1, 2)]
    assert cons.flows == [(0, 1, 2), (0, 2, 1), (1, 2, 0)]
    np.testing.assert_allclose(cons.G.toarray(), [[0.9, -1, -1], [-1, 0.9, -1], [-1, -1, 0.9]])
    np.testing.assert_allclose(cons.capacity, [0.6, 0, 0.6])


@pytest.mark.parametrize("M", range(2, 9))
def test_flow_count(M):
    assert build_rate_constraints(make_chain(M, 1.0, 0.5)).num_flows == M * (M - 1) * (M - 2) // 2


def test_three_chain_end_to_end_limit():
    net = make_chain(3, 0.6, 0.9)
    assert max_scale(net, {(0, 2): 1.0}) == pytest.approx(0.54, abs=1e-12)
    ok = check_feasible(net, {(0, 2): 0.54})
    assert ok and ok.flows is not None
    bad = check_feasible(net, {(0, 2): 0.55})
    assert not bad and bad.violation > 1e-3 and bad.flows is None


def test_witness_flows_satisfy_rows():
    net = make_chain(4, 0.6, 0.9)
    R = {(0, 3): 0.2, (0, 1): 0.1, (1, 2): 0.05}
    res = check_feasible(net, R)
    assert res.feasible
    cons = build_rate_constraints(net)
    assert cons.slack(R, res.flows).min() >= -1e-9 and res.flows.min() >= 0


def test_perfect_swaps_route_at_bottleneck():
    net = NetworkSpec(swap_eff=[1.0, 1.0, 1.0], rates={(0, 1): 0.7, (1, 2): 0.4})
    assert max_scale(net, {(0, 2): 1.0}) == pytest.approx(0.4, abs=1e-12)


def test_no_swapping_collapses_to_links():
    net = random_network(np.random.default_rng(3), 6, p_edge=0.4, q_range=(0.0, 0.0))
    for a, b in all_pairs(6):
        assert max_scale(net, {(a, b): 1.0}) == pytest.approx(net.rate(a, b), abs=1e-12)


def test_two_nodes_have_no_flows():
    net = make_chain(2, 0.6, 0.9)
    assert check_feasible(net, {(0, 1): 0.6}).feasible
    assert not check_feasible(net, {(0, 1): 0.6 + 1e-6}).feasible


def test_negative_rates_rejected():
    with pytest.raises(ValueError):
        check_feasible(make_chain(3, 0.6, 0.9), {(0, 1): -0.1})
    with pytest.raises(ValueError):
        max_scale(make_chain(3, 0.6, 0.9), {(0, 1): -1.0})


def test_zero_direction_is_unbounded():
    assert max_scale(make_chain(3, 0.6, 0.9), {}) == float("inf")


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), M=st.integers(2, 6))
def test_zero_rates_always_feasible(seed, M):
    net = random_network(np.random.default_rng(seed), M)
    res = check_feasible(net, {})
    assert res.feasible and res.violation == 0.0


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), M=st.integers(3, 6), lam=st.floats(0.0, 1.0))
def test_region_is_down_closed_and_scales_with_links(seed, M, lam):
    rng = np.random.default_rng(seed)
    net = random_network(rng, M)
    direction = {p: float(rng.uniform(0, 1)) for p in all_pairs(M)}
    t = max_scale(net, direction)
    edge = {p: t * v for p, v in direction.items()}
    assert check_feasible(net, edge).feasible
    assert check_feasible(net, {p: lam * v for p, v in edge.items()}).feasible
    # homogeneity: doubling every link rate doubles the region
    assert max_scale(net.scaled(2.0), direction) == pytest.approx(2 * t, rel=1e-8)
    assert not check_feasible(net, {p: 1.01 * v for p, v in edge.items()}).feasible


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), M=st.integers(3, 6), dq=st.floats(0.0, 0.5))
def test_better_swaps_never_shrink_region(seed, M, dq):
    rng = np.random.default_rng(seed)
    net = random_network(rng, M, q_range=(0.0, 0.5))
    better = net.with_params(swap_eff=[q + dq for q in net.swap_eff])
    direction = {p: float(rng.uniform(0, 1)) for p in all_pairs(M)}
    assert max_scale(better, direction) >= max_scale(net, direction) - 1e-9


# baseline

def test_noswap_examples():
    assert noswap_utility(make_chain(5, 0.6, 0.9)) == pytest.approx(2.4, abs=1e-12)
    assert noswap_utility(make_chain(5, 0.6, 0.9), UtilityModel(3.0)) == pytest.approx(4 * 0.6 * 9 / 4)
    assert noswap_utility(NetworkSpec(swap_eff=[0.9, 0.9], rates={})) == 0.0
    assert noswap_utility(make_dumbbell(2, 0.6, 1.2, 0.9)) == pytest.approx(0.6 * 4 + 1.2)


def test_noswap_zero_when_two_node_tasks_infeasible():
    assert noswap_utility(make_chain(4, 0.6, 0.9, 0.6)) == 0.0


# pair splitting

def test_lemma1_moves_rate():
    out = lemma1_transform({(0, 3): 0.5, (0, 1): 0.1}, 0, 1, 3, 0.2)
    assert out == {(0, 3): pytest.approx(0.3), (0, 1): pytest.approx(0.3), (1, 3): pytest.approx(0.2)}
    assert lemma1_transform({(0, 2): 0.5}, 0, 1, 2, 0.0) == {(0, 2): 0.5}


@pytest.mark.parametrize("args", [(0, 2, 1, 0.1), (1, 1, 2, 0.1), (0, 1, 2, 0.6), (0, 1, 2, -0.1)])
def test_lemma1_rejects(args):
    with pytest.raises(ValueError):
        lemma1_transform({(0, 2): 0.5}, *args)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), M=st.integers(3, 6), frac=st.floats(0.0, 1.0),
       boundary=st.booleans())
def test_lemma1_preserves_feasibility_on_chains(seed, M, frac, boundary):
    rng = np.random.default_rng(seed)
    net = make_chain(M, float(rng.uniform(0.2, 1.0)), float(rng.uniform(0.3, 1.0)))
    direction = {p: float(rng.uniform(0, 1)) for p in all_pairs(M)}
    scale = max_scale(net, direction) * (1.0 if boundary else float(rng.uniform(0, 1)))
    R = {p: scale * v for p, v in direction.items()}
    l, k, j = sorted(rng.choice(M, 3, replace=False).tolist())
    R2 = lemma1_transform(R, l, k, j, frac * R[(l, j)])
    assert check_feasible(net, R2).feasible
