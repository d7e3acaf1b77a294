import random

import pytest

from tcnet.algorithms import parse_algorithm
from tcnet.constraints import (ConsistencyLevel, ConstraintKind,
                               check_active_link, check_inactive_link,
                               check_no_unclassified, classify_consistency,
                               is_a_connected, is_au_connected)
from tcnet.engine import run_tc
from tcnet.topology import LinkState, Topology

from conftest import make_connected_topology, make_random_topology

KTC2 = parse_algorithm("ktc(k=2)")


def triangle(states=("U", "U", "U"), weights=(30, 10, 20)):
    t = Topology()
    a = t.add_node((0, 0), 100)
    b = t.add_node((10, 0), 100)
    c = t.add_node((5, 5), 100)
    ab = t.add_link(a, b, weights[0])
    ac = t.add_link(a, c, weights[1])
    cb = t.add_link(c, b, weights[2])
    for lid, letter in zip((ab, ac, cb), states):
        t.links[lid].state = LinkState.from_letter(letter)
    return t, (ab, ac, cb)


def test_check_no_unclassified():
    t, lids = triangle(("A", "A", "A"))
    assert check_no_unclassified(t) == []
    t.set_state(lids[1], LinkState.UNCLASSIFIED)
    assert len(check_no_unclassified(t)) == 1
    fresh, _ = triangle()
    assert len(check_no_unclassified(fresh)) == 3


def test_check_inactive_link():
    t, _ = triangle(("I", "A", "A"))
    assert check_inactive_link(t, KTC2) == []
    t2, _ = triangle(("I", "A", "U"))
    violations = check_inactive_link(t2, KTC2)
    assert len(violations) == 1
    assert violations[0].constraint is ConstraintKind.INACTIVE_LINK

    isolated = Topology()
    a = isolated.add_node((0, 0), 1)
    b = isolated.add_node((1, 1), 1)
    lid = isolated.add_link(a, b, 5.0)
    isolated.set_state(lid, LinkState.INACTIVE)
    assert len(check_inactive_link(isolated, KTC2)) == 1


def test_check_active_link():
    t, lids = triangle(("A", "A", "A"))
    violations = check_active_link(t, KTC2)
    assert len(violations) == 1
    assert violations[0].witness == lids[0]
    assert violations[0].triangle is not None
    t2, _ = triangle(("A", "A", "U"))
    assert check_active_link(t2, KTC2) == []
    path = Topology()
    a = path.add_node((0, 0), 1)
    b = path.add_node((1, 0), 1)
    c = path.add_node((2, 0), 1)
    for lid in (path.add_link(a, b, 1), path.add_link(b, c, 1)):
        path.set_state(lid, LinkState.ACTIVE)
    assert check_active_link(path, KTC2) == []


def test_classify_consistency():
    fresh, _ = triangle()
    assert classify_consistency(fresh, KTC2) is \
        ConsistencyLevel.WEAKLY_CONSISTENT
    bad, _ = triangle(("A", "A", "A"))
    assert classify_consistency(bad, KTC2) is ConsistencyLevel.INCONSISTENT
    good, _ = triangle(("I", "A", "A"))
    assert classify_consistency(good, KTC2) is \
        ConsistencyLevel.STRONGLY_CONSISTENT


def test_engine_output_strongly_consistent(rng):
    for _ in range(30):
        t = make_random_topology(rng)
        run_tc(t, KTC2)
        assert classify_consistency(t, KTC2) is \
            ConsistencyLevel.STRONGLY_CONSISTENT


def test_connectivity_trivial():
    single = Topology()
    single.add_node((0, 0), 1)
    assert is_a_connected(single) and is_au_connected(single)


def test_connectivity_all_active(rng):
    t = make_connected_topology(rng)
    for lid in t.links:
        t.set_state(lid, LinkState.ACTIVE)
    assert is_a_connected(t)
    assert is_au_connected(t)


def test_connectivity_restricted_to_reachable_pairs():
    # two separate components: full-graph unreachable pairs don't count
    t = Topology()
    a = t.add_node((0, 0), 1)
    b = t.add_node((1, 0), 1)
    c = t.add_node((50, 50), 1)
    d = t.add_node((51, 50), 1)
    for lid in (t.add_link(a, b, 1), t.add_link(c, d, 1)):
        t.set_state(lid, LinkState.ACTIVE)
    assert is_a_connected(t)
    # inactivating a needed link breaks A-connectivity but not A-U
    t.set_state(t.link_between(a, b), LinkState.UNCLASSIFIED)
    assert not is_a_connected(t)
    assert is_au_connected(t)
    t.set_state(t.link_between(a, b), LinkState.INACTIVE)
    assert not is_au_connected(t)


def brute_force_reachability(t: Topology, states):
    nodes = list(t.nodes)
    reach = {n: {n} for n in nodes}
    changed = True
    while changed:
        changed = False
        for link in t.links.values():
            if link.state not in states:
                continue
            for n in nodes:
                if link.source in reach[n] and link.target not in reach[n]:
                    reach[n].add(link.target)
                    changed = True
    return reach


def test_connectivity_matches_brute_force(rng):
    from tcnet.constraints import _adjacency, _reachable_from
    for _ in range(40):
        t = make_random_topology(rng, max_nodes=8, max_links=20)
        for lid in t.links:
            t.set_state(lid, rng.choice(list(LinkState)))
        states = (LinkState.ACTIVE,)
        expected = brute_force_reachability(t, states)
        adj = _adjacency(t, states)
        for nid in t.nodes:
            assert _reachable_from(adj, nid) == expected[nid]


def test_tc_output_a_connected(rng):
    """Strongly consistent output of TC on a connected unclassified
    input stays connected on active links alone."""
    for spec in ("ktc(k=1.41)", "gg", "rng", "ektc(k=1.41)"):
        algorithm = parse_algorithm(spec)
        for _ in range(25):
            t = make_connected_topology(rng)
            assert is_au_connected(t)
            run_tc(t, algorithm)
            assert is_a_connected(t)
