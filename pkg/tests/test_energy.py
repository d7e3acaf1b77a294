import math
import random

import pytest

from tcnet.algorithms import parse_algorithm
from tcnet.energy import (ACTIVE_ONLY, ALL_LINKS, LifetimeRecord, PowerModel,
                          charge_path, expected_remaining_lifetime_link,
                          expected_remaining_lifetime_node,
                          expected_remaining_lifetime_topology, gossip_step,
                          messaging_cost, required_power)
from tcnet.engine import run_tc
from tcnet.topology import LinkState, Topology

from conftest import make_random_topology

MODEL = PowerModel(0.01)


def test_required_power():
    t = Topology()
    a = t.add_node((0, 0), 100)
    b = t.add_node((1, 0), 100)
    lid = t.add_link(a, b, 30.0)
    assert required_power(MODEL, t.links[lid]) == pytest.approx(9.0)
    t.links[lid].weight = 60.0
    assert required_power(MODEL, t.links[lid]) == pytest.approx(36.0)
    with pytest.raises(ValueError):
        PowerModel(0.0)


def test_link_lifetime():
    assert expected_remaining_lifetime_link(108, 9) == 12
    assert expected_remaining_lifetime_link(0, 9) == 0
    assert expected_remaining_lifetime_link(90, 0.01 * 900) == \
        pytest.approx(10.0)
    with pytest.raises(ValueError):
        expected_remaining_lifetime_link(10, 0)


def star_topology():
    t = Topology()
    center = t.add_node((0, 0), 108)
    far = t.add_node((30, 0), 100)
    near = t.add_node((0, 20), 100)
    l1 = t.add_link(center, far, 30.0)   # p = 9, r = 12
    l2 = t.add_link(center, near, 20.0)  # p = 4, r = 27
    return t, center, (l1, l2)


def test_node_lifetime_modes():
    t, center, (l1, l2) = star_topology()
    t.set_state(l2, LinkState.ACTIVE)
    assert expected_remaining_lifetime_node(
        t, MODEL, center, ACTIVE_ONLY) == pytest.approx(27.0)
    assert expected_remaining_lifetime_node(
        t, MODEL, center, ALL_LINKS) == pytest.approx(12.0)
    # all-links mode minimizes over a superset, so it is never larger
    assert expected_remaining_lifetime_node(t, MODEL, center, ALL_LINKS) <= \
        expected_remaining_lifetime_node(t, MODEL, center, ACTIVE_ONLY)
    isolated = t.add_node((50, 50), 10)
    assert expected_remaining_lifetime_node(
        t, MODEL, isolated, ALL_LINKS) == math.inf


def test_topology_lifetime():
    t, center, (l1, l2) = star_topology()
    for lid in (l1, l2):
        t.set_state(lid, LinkState.ACTIVE)
    assert expected_remaining_lifetime_topology(t, MODEL) == \
        pytest.approx(12.0)
    single = Topology()
    single.add_node((0, 0), 5)
    assert expected_remaining_lifetime_topology(single, MODEL) == math.inf


def test_gossip_step():
    t, center, (l1, l2) = star_topology()
    t.set_state(l1, LinkState.ACTIVE)
    t.set_state(l2, LinkState.ACTIVE)
    assert gossip_step(t, MODEL) == []
    assert t.nodes[center].energy == pytest.approx(99.0)  # 108 - 9
    for _ in range(11):
        deaths = gossip_step(t, MODEL)
    assert deaths == [center]
    assert t.nodes[center].energy == 0
    # dead node does not revive or go negative
    gossip_step(t, MODEL)
    assert t.nodes[center].energy == 0


def test_gossip_idle_node_loses_nothing():
    t, center, (l1, l2) = star_topology()
    t.set_state(l1, LinkState.INACTIVE)
    gossip_step(t, MODEL)
    assert t.nodes[center].energy == 108.0


def test_death_times_match_link_lifetime(rng):
    """Under static gossip, each node dies after ceil(r) steps."""
    for _ in range(10):
        t = make_random_topology(rng, max_nodes=6, max_links=12)
        run_tc(t, parse_algorithm("ktc(k=1.41)"))
        predictions = {}
        for nid in t.nodes:
            cost = max((required_power(MODEL, l) for l in t.out_links(nid)
                        if l.state is LinkState.ACTIVE), default=0.0)
            if cost > 0:
                predictions[nid] = math.ceil(t.nodes[nid].energy / cost)
        deaths = {}
        horizon = max(predictions.values(), default=0) + 2
        for step in range(1, horizon):
            for nid in gossip_step(t, MODEL):
                deaths[nid] = step
            if len(deaths) == len(predictions):
                break
        assert deaths == predictions


def test_messaging_cost():
    t = Topology()
    ids = [t.add_node((i, 0), 100) for i in range(4)]
    model = PowerModel(0.01, t_unit=1.0)
    hop30 = t.add_link(ids[0], ids[3], 30.0)
    hop10 = t.add_link(ids[0], ids[1], 10.0)
    hop20 = t.add_link(ids[1], ids[3], 20.0)
    assert messaging_cost(model, []) == 0.0
    assert messaging_cost(model, [t.links[hop30]]) == pytest.approx(9.0)
    two_hop = messaging_cost(model, [t.links[hop10], t.links[hop20]])
    assert two_hop == pytest.approx(5.0)
    assert two_hop < 9.0  # multi-hop beats the long direct link


def test_charge_path():
    t = Topology()
    a = t.add_node((0, 0), 0.1)
    b = t.add_node((1, 0), 100)
    lid = t.add_link(a, b, 30.0)
    model = PowerModel(0.01, t_unit=1.0)
    deaths = charge_path(t, model, [t.links[lid]])
    assert deaths == [a]
    assert t.nodes[a].energy == 0.0


def test_lifetime_record():
    record = LifetimeRecord({1: 30.0, 2: 10.0, 3: 50.0}, 4)
    assert record.l1 == 10.0
    assert record.lifetime(2) == 30.0
    assert record.l50 == 30.0  # ceil(4 * 0.5) = 2 dead
    assert math.isnan(record.l100)
    assert record.lifetime(0) == 0.0
    assert record.l1 <= record.l50


def test_lifetime_preservation(rng):
    """Running the lifetime-aware variant never shortens the minimum
    expected remaining lifetime of the topology."""
    algorithm = parse_algorithm("ektc(k=1.41)")
    for _ in range(100):
        t = make_random_topology(rng, max_nodes=7, max_links=16)
        for lid in t.links:
            t.set_state(lid, LinkState.ACTIVE)
        baseline = expected_remaining_lifetime_topology(t, MODEL)
        for lid in t.links:
            t.set_state(lid, LinkState.UNCLASSIFIED)
        run_tc(t, algorithm)
        assert expected_remaining_lifetime_topology(t, MODEL) >= baseline
