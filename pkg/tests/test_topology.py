import io
import math
import random

import pytest

from tcnet.topology import (LinkState, Topology, TopologyError, euclidean,
                            read_snapshot, structurally_equal, write_snapshot)

from conftest import make_random_topology


def triangle_topology():
    t = Topology()
    a = t.add_node((0, 0), 100)
    b = t.add_node((10, 0), 100)
    c = t.add_node((5, 5), 100)
    ab = t.add_link(a, b, 30)
    ac = t.add_link(a, c, 10)
    cb = t.add_link(c, b, 20)
    return t, (a, b, c), (ab, ac, cb)


def test_add_node_isolated():
    t = Topology()
    nid = t.add_node((0.0, 0.0), 130.0)
    assert len(t.nodes) == 1 and len(t.links) == 0
    assert t.nodes[nid].hop_count == -1
    assert t.nodes[nid].energy == 130.0


def test_node_ids_unique():
    t = Topology()
    ids = [t.add_node((i, i), 1.0) for i in range(3)]
    assert len(set(ids)) == 3


def test_add_remove_node_structurally_equal():
    t = Topology()
    t.add_node((1, 2), 50)
    reference = Topology()
    reference.add_node((1, 2), 50)
    extra = t.add_node((3, 4), 60)
    t.remove_node(extra)
    assert structurally_equal(t, reference)


def test_remove_node_returns_incident_links():
    t = Topology()
    center = t.add_node((0, 0), 1)
    spokes = [t.add_node((i + 1, 0), 1) for i in range(4)]
    lids = [t.add_link(center, s, 1.0) for s in spokes]
    lids += [t.add_link(spokes[0], center, 2.0)]
    removed = t.remove_node(center)
    assert sorted(removed) == sorted(lids)
    assert not t.links
    t.check_integrity()


def test_remove_isolated_node_empty_list():
    t = Topology()
    nid = t.add_node((0, 0), 1)
    assert t.remove_node(nid) == []


def test_remove_unknown_node_errors():
    t = Topology()
    with pytest.raises(TopologyError):
        t.remove_node(99)


def test_added_link_is_unclassified():
    t = Topology()
    a = t.add_node((0, 0), 1)
    b = t.add_node((1, 1), 1)
    lid = t.add_link(a, b, 30.0)
    assert t.links[lid].state is LinkState.UNCLASSIFIED


def test_link_errors():
    t = Topology()
    a = t.add_node((0, 0), 1)
    b = t.add_node((1, 1), 1)
    t.add_link(a, b, 1.0)
    with pytest.raises(TopologyError):
        t.add_link(a, b, 2.0)  # duplicate ordered pair
    with pytest.raises(TopologyError):
        t.add_link(a, a, 1.0)  # loop
    with pytest.raises(TopologyError):
        t.add_link(a, 77, 1.0)  # unknown endpoint
    with pytest.raises(TopologyError):
        t.add_link(b, a, 0.0)  # non-positive weight


def test_both_directions_allowed():
    t = Topology()
    a = t.add_node((0, 0), 1)
    b = t.add_node((1, 1), 1)
    t.add_link(a, b, 1.0)
    t.add_link(b, a, 1.0)
    assert len(t.links) == 2


def test_triangles_containing_basic():
    t, _, (ab, ac, cb) = triangle_topology()
    tris = t.triangles_containing(ab)
    assert len(tris) == 1
    assert (tris[0].e_ab, tris[0].e_ac, tris[0].e_cb) == (ab, ac, cb)
    assert t.triangles_containing(ac) == []


def test_triangles_in_k4():
    t = Topology()
    ids = [t.add_node((i, i * i), 1) for i in range(4)]
    for a in ids:
        for b in ids:
            if a != b:
                t.add_link(a, b, 1.0)
    for lid in t.links:
        assert len(t.triangles_containing(lid)) == 2


def brute_force_triangles(t: Topology, lid: int):
    link = t.links[lid]
    found = []
    for other in t.links.values():
        if other.source == link.source:
            third = t.link_between(other.target, link.target)
            if third is not None and other.id != lid:
                found.append((lid, other.id, third))
    return sorted(found)


def test_triangles_match_brute_force(rng):
    for _ in range(50):
        t = make_random_topology(rng, max_nodes=7, max_links=20)
        for lid in t.links:
            got = sorted((tri.e_ab, tri.e_ac, tri.e_cb)
                         for tri in t.triangles_containing(lid))
            assert got == brute_force_triangles(t, lid)


def test_side_role_triangles_consistent(rng):
    for _ in range(30):
        t = make_random_topology(rng, max_nodes=6, max_links=16)
        all_tris = {(tri.e_ab, tri.e_ac, tri.e_cb)
                    for lid in t.links
                    for tri in t.triangles_containing(lid)}
        for lid in t.links:
            for tri in t.triangles_with_link_as_side(lid):
                assert lid in (tri.e_ac, tri.e_cb)
                assert (tri.e_ab, tri.e_ac, tri.e_cb) in all_tris


def test_lsm_counter():
    t = Topology()
    a = t.add_node((0, 0), 1)
    b = t.add_node((1, 1), 1)
    lid = t.add_link(a, b, 1.0)
    assert t.lsm_count == 0
    t.set_state(lid, LinkState.ACTIVE)
    assert t.lsm_count == 1
    t.set_state(lid, LinkState.ACTIVE)
    assert t.lsm_count == 1
    t.set_state(lid, LinkState.UNCLASSIFIED)
    t.set_state(lid, LinkState.INACTIVE)
    assert t.lsm_count == 3


def test_link_angle_convention():
    t = Topology()
    a = t.add_node((0, 0), 1)
    b = t.add_node((0, 1), 1)
    lid = t.add_link(a, b, 1.0)
    back = t.add_link(b, a, 1.0)
    assert t.link_angle(lid) == pytest.approx(0.0)
    assert abs(t.link_angle(lid) - t.link_angle(back)) == pytest.approx(180.0)


def test_link_angle_rotation():
    for base in (0.0, 17.0, 123.0):
        t = Topology()
        a = t.add_node((0, 0), 1)
        rad = math.radians(base)
        b = t.add_node((math.sin(rad), math.cos(rad)), 1)
        rad90 = math.radians(base + 90)
        c = t.add_node((math.sin(rad90), math.cos(rad90)), 1)
        ab = t.add_link(a, b, 1.0)
        ac = t.add_link(a, c, 1.0)
        delta = (t.link_angle(ac) - t.link_angle(ab)) % 360.0
        assert delta == pytest.approx(90.0)


def test_link_angle_coincident_errors():
    t = Topology()
    a = t.add_node((3, 3), 1)
    b = t.add_node((3, 3), 1)
    lid = t.add_link(a, b, 1.0)
    with pytest.raises(TopologyError):
        t.link_angle(lid)


def test_invariants_after_random_operations(rng):
    t = Topology()
    nodes = [t.add_node((rng.random(), rng.random()), 1.0) for _ in range(6)]
    for _ in range(300):
        op = rng.random()
        ids = [n for n in nodes if n in t.nodes]
        if op < 0.3 or len(ids) < 2:
            nodes.append(t.add_node((rng.random(), rng.random()), 1.0))
        elif op < 0.5:
            a, b = rng.sample(ids, 2)
            if t.link_between(a, b) is None:
                t.add_link(a, b, rng.uniform(0.1, 9))
        elif op < 0.7 and t.links:
            t.remove_link(rng.choice(list(t.links)))
        elif op < 0.8:
            t.remove_node(rng.choice(ids))
        elif t.links:
            t.set_state(rng.choice(list(t.links)),
                        rng.choice(list(LinkState)))
    t.check_integrity()


def test_snapshot_round_trip(rng):
    for _ in range(20):
        t = make_random_topology(rng, max_nodes=8, max_links=20)
        for lid in t.links:
            t.set_state(lid, rng.choice(list(LinkState)))
        buffer = io.StringIO()
        write_snapshot(t, buffer)
        buffer.seek(0)
        back = read_snapshot(buffer)
        assert structurally_equal(t, back)
        back.check_integrity()


def test_snapshot_rejects_garbage():
    with pytest.raises(TopologyError):
        read_snapshot(io.StringIO("bogus header\n"))
    with pytest.raises(TopologyError):
        read_snapshot(io.StringIO("nodes 1 links 0\nX 0 0 0 0 0\n"))


def test_euclidean():
    t = Topology()
    a = t.add_node((0, 0), 1)
    b = t.add_node((3, 4), 1)
    assert euclidean(t.nodes[a], t.nodes[b]) == 5.0
