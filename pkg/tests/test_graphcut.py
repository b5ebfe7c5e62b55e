import numpy as np
import pytest

from objcut import FlowNetwork, max_flow_min_cut
from oracles import min_cut_bruteforce, random_flow_network


def test_single_arc():
    net = FlowNetwork(2, source=0, sink=1)
    net.add_arc(0, 1, 7.0)
    flow, side = max_flow_min_cut(net)
    assert flow == 7.0
    assert side.tolist() == [True, False]


def test_small_network_flow_five():
    # s=0, a=1, b=2, t=3; brute-force over the 4 cuts gives 5
    net = FlowNetwork(4, source=0, sink=3)
    for u, v, c in [(0, 1, 3), (0, 2, 2), (1, 3, 2), (1, 2, 1), (2, 3, 3)]:
        net.add_arc(u, v, c)
    flow, side = max_flow_min_cut(net)
    assert flow == 5.0
    assert side[0] and not side[3]
    assert flow == min_cut_bruteforce(4, 0, 3, net.arcs())


def test_disconnected_sink():
    net = FlowNetwork(4, source=0, sink=3)
    net.add_arc(0, 1, 5.0)
    net.add_arc(1, 2, 5.0)
    flow, side = max_flow_min_cut(net)
    assert flow == 0.0
    assert side.tolist() == [True, True, True, False]


def test_empty_network():
    net = FlowNetwork(3, source=0, sink=2)
    flow, side = max_flow_min_cut(net)
    assert flow == 0.0
    assert side.tolist() == [True, False, False]


def test_arc_validation():
    net = FlowNetwork(3, source=0, sink=2)
    with pytest.raises(ValueError):
        net.add_arc(1, 0, 1.0)  # into source
    with pytest.raises(ValueError):
        net.add_arc(2, 1, 1.0)  # out of sink
    with pytest.raises(ValueError):
        net.add_arc(0, 1, -2.0)
    with pytest.raises(ValueError):
        net.add_arc(1, 1, 1.0)
    with pytest.raises(ValueError):
        FlowNetwork(3, source=1, sink=1)


def test_matches_bruteforce_on_random_networks():
    rng = np.random.default_rng(99)
    for _ in range(40):
        n, s, t, arcs = random_flow_network(rng)
        net = FlowNetwork(n, source=s, sink=t)
        for u, v, c in arcs:
            net.add_arc(u, v, c)
        flow, side = max_flow_min_cut(net)
        assert flow == min_cut_bruteforce(n, s, t, arcs)
        assert side[s] and not side[t]
        # the reachable-set cut itself must realize the flow value
        cut_value = sum(c for u, v, c in arcs if side[u] and not side[v])
        assert cut_value == pytest.approx(flow, abs=1e-9)


def test_deterministic():
    rng = np.random.default_rng(5)
    n, s, t, arcs = random_flow_network(rng)
    results = []
    for _ in range(2):
        net = FlowNetwork(n, source=s, sink=t)
        for u, v, c in arcs:
            net.add_arc(u, v, c)
        results.append(max_flow_min_cut(net))
    assert results[0][0] == results[1][0]
    assert np.array_equal(results[0][1], results[1][1])


def test_float_capacities():
    net = FlowNetwork(4, source=0, sink=3)
    for u, v, c in [(0, 1, 0.25), (0, 2, 1.5), (1, 3, 2.0), (2, 3, 0.75)]:
        net.add_arc(u, v, c)
    flow, _ = max_flow_min_cut(net)
    assert flow == pytest.approx(1.0)


def test_optimality_certificate_on_grid_graphs():
    # weak duality: any s-t cut is >= max flow, so flow == capacity of the
    # returned cut certifies both are optimal, at sizes brute force can't reach
    rng = np.random.default_rng(77)
    for h, w in ((12, 12), (24, 24)):
        n = h * w + 2
        source, sink = h * w, h * w + 1
        net = FlowNetwork(n, source=source, sink=sink)
        ids = np.arange(h * w, dtype=np.int64)
        net.add_arcs(np.full(h * w, source), ids, rng.random(h * w) * 20.0)
        net.add_arcs(ids, np.full(h * w, sink), rng.random(h * w) * 20.0)
        grid = ids.reshape(h, w)
        for p, q in ((grid[:, 1:], grid[:, :-1]), (grid[1:, :], grid[:-1, :])):
            caps = rng.random(p.size) * 8.0
            net.add_arcs(p.ravel(), q.ravel(), caps)
            net.add_arcs(q.ravel(), p.ravel(), caps)
        flow, side = max_flow_min_cut(net)
        tails, heads, caps = (np.array(x) for x in zip(*net.arcs()))
        crossing = float(caps[side[tails] & ~side[heads]].sum())
        assert flow == pytest.approx(crossing, rel=1e-9)
