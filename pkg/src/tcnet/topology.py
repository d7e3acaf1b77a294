"""Attributed directed simple-graph model of sensor network topologies.

Nodes carry position, remaining energy and a hop count; links carry a
positive weight and a classification state (active / inactive /
unclassified).  The graph is simple: no loops, at most one link per
ordered node pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, TextIO


class LinkState(Enum):
    ACTIVE = "A"
    INACTIVE = "I"
    UNCLASSIFIED = "U"

    @classmethod
    def from_letter(cls, letter: str) -> "LinkState":
        for s in cls:
            if s.value == letter:
                return s
        raise TopologyError(f"unknown link state {letter!r}")


#: Link states that count as classified.
CLASSIFIED = (LinkState.ACTIVE, LinkState.INACTIVE)

#: Sentinel hop count for "no known route to the base station".
UNDEFINED_HOP_COUNT = -1


class TopologyError(ValueError):
    """Raised on violations of the structural contract (unknown ids,
    duplicate links, loops, non-positive weights)."""


@dataclass
class Node:
    id: int
    latitude: float
    longitude: float
    energy: float
    hop_count: int = UNDEFINED_HOP_COUNT


@dataclass
class Link:
    id: int
    source: int
    target: int
    weight: float
    state: LinkState = LinkState.UNCLASSIFIED


@dataclass(frozen=True)
class Triangle:
    """A directed triangle: e_ab from a to b, e_ac from a to c, e_cb
    from c to b.  All predicates treat e_ab as the candidate link."""

    e_ab: int
    e_ac: int
    e_cb: int


class Topology:
    """Mutable topology with adjacency indices and a modification counter.

    Link ids are assigned from a per-topology monotone counter, which
    makes the id-based tie-breaking deterministic for a given insertion
    history.  ``lsm_count`` counts effective link state modifications;
    ``unclassification_count`` additionally counts every time a link
    enters the unclassified state (including creation).
    """

    def __init__(self) -> None:
        self.nodes: dict[int, Node] = {}
        self.links: dict[int, Link] = {}
        # adjacency: per node, {neighbour id: link id}
        self._out: dict[int, dict[int, int]] = {}
        self._in: dict[int, dict[int, int]] = {}
        self._next_node_id = 0
        self._next_link_id = 0
        self.lsm_count = 0
        self.unclassification_count = 0

    # -- nodes ---------------------------------------------------------

    def add_node(self, position: tuple[float, float], energy: float,
                 hop_count: int = UNDEFINED_HOP_COUNT) -> int:
        if energy < 0:
            raise TopologyError("energy must be >= 0")
        if hop_count < UNDEFINED_HOP_COUNT:
            raise TopologyError("hop_count must be >= -1")
        nid = self._next_node_id
        self._next_node_id += 1
        self.nodes[nid] = Node(nid, position[0], position[1], energy, hop_count)
        self._out[nid] = {}
        self._in[nid] = {}
        return nid

    def remove_node(self, nid: int) -> list[int]:
        """Remove a node and all incident links; returns the removed link ids."""
        self._require_node(nid)
        removed = list(self._out[nid].values()) + list(self._in[nid].values())
        for lid in removed:
            self.remove_link(lid)
        del self.nodes[nid]
        del self._out[nid]
        del self._in[nid]
        return removed

    def node(self, nid: int) -> Node:
        self._require_node(nid)
        return self.nodes[nid]

    # -- links ---------------------------------------------------------

    def add_link(self, source: int, target: int, weight: float) -> int:
        self._require_node(source)
        self._require_node(target)
        if source == target:
            raise TopologyError("loops are not allowed")
        if target in self._out[source]:
            raise TopologyError(f"duplicate link {source}->{target}")
        if not weight > 0:
            raise TopologyError("link weight must be > 0")
        lid = self._next_link_id
        self._next_link_id += 1
        self.links[lid] = Link(lid, source, target, weight)
        self._out[source][target] = lid
        self._in[target][source] = lid
        self.unclassification_count += 1
        return lid

    def remove_link(self, lid: int) -> None:
        link = self.link(lid)
        del self._out[link.source][link.target]
        del self._in[link.target][link.source]
        del self.links[lid]

    def link(self, lid: int) -> Link:
        if lid not in self.links:
            raise TopologyError(f"unknown link id {lid}")
        return self.links[lid]

    def link_between(self, source: int, target: int) -> int | None:
        out = self._out.get(source)
        return None if out is None else out.get(target)

    def out_links(self, nid: int) -> Iterator[Link]:
        self._require_node(nid)
        return (self.links[lid] for lid in self._out[nid].values())

    def in_links(self, nid: int) -> Iterator[Link]:
        self._require_node(nid)
        return (self.links[lid] for lid in self._in[nid].values())

    def set_state(self, lid: int, state: LinkState) -> None:
        link = self.link(lid)
        if link.state is state:
            return
        link.state = state
        self.lsm_count += 1
        if state is LinkState.UNCLASSIFIED:
            self.unclassification_count += 1

    def set_weight(self, lid: int, weight: float) -> None:
        if not weight > 0:
            raise TopologyError("link weight must be > 0")
        self.link(lid).weight = weight

    # -- triangle queries ----------------------------------------------

    def triangles_containing(self, lid: int) -> list[Triangle]:
        """All directed triangles in which the link plays the e_ab role."""
        link = self.link(lid)
        a, b = link.source, link.target
        out_a, in_b = self._out[a], self._in[b]
        tris = []
        for c in out_a.keys() & in_b.keys():
            tris.append(Triangle(lid, out_a[c], in_b[c]))
        return tris

    def triangles_with_link_as_side(self, lid: int) -> list[Triangle]:
        """Directed triangles in which the link plays the e_ac or e_cb role."""
        link = self.link(lid)
        tris = []
        # e_ac role: link is a->c; need b with a->b and c->b
        a, c = link.source, link.target
        out_a, out_c = self._out[a], self._out[c]
        for b in out_a.keys() & out_c.keys():
            tris.append(Triangle(out_a[b], lid, out_c[b]))
        # e_cb role: link is c->b; need a with a->c and a->b
        c, b = link.source, link.target
        in_c, in_b = self._in[c], self._in[b]
        for a in in_c.keys() & in_b.keys():
            tris.append(Triangle(in_b[a], in_c[a], lid))
        return tris

    def triangles_any_role(self, lid: int) -> list[Triangle]:
        return self.triangles_containing(lid) + self.triangles_with_link_as_side(lid)

    # -- geometry ------------------------------------------------------

    def link_angle(self, lid: int) -> float:
        """Angle of a link in degrees, in [0, 360).

        Computed as atan2 of the (latitude, longitude) differences of the
        endpoints plus 180 degrees; the convention is fixed so that Yao
        cone indices are reproducible.
        """
        link = self.link(lid)
        a = self.nodes[link.source]
        b = self.nodes[link.target]
        dlat = a.latitude - b.latitude
        dlon = a.longitude - b.longitude
        if dlat == 0.0 and dlon == 0.0:
            raise TopologyError("link endpoints coincide; angle undefined")
        return (math.degrees(math.atan2(dlat, dlon)) + 180.0) % 360.0

    # -- misc ----------------------------------------------------------

    def states(self) -> dict[int, LinkState]:
        return {lid: link.state for lid, link in self.links.items()}

    def unclassified_links(self) -> list[int]:
        return [lid for lid, link in self.links.items()
                if link.state is LinkState.UNCLASSIFIED]

    def size(self) -> int:
        """Topology size metric: node count plus link count."""
        return len(self.nodes) + len(self.links)

    def check_integrity(self) -> None:
        """Verify the adjacency index against the link set (test helper)."""
        out: dict[int, dict[int, int]] = {nid: {} for nid in self.nodes}
        inc: dict[int, dict[int, int]] = {nid: {} for nid in self.nodes}
        for lid, link in self.links.items():
            assert link.source in self.nodes and link.target in self.nodes
            assert link.source != link.target
            assert link.weight > 0
            assert link.target not in out[link.source], "parallel link"
            out[link.source][link.target] = lid
            inc[link.target][link.source] = lid
        assert out == self._out and inc == self._in

    def _require_node(self, nid: int) -> None:
        if nid not in self.nodes:
            raise TopologyError(f"unknown node id {nid}")


# -- snapshot serialization -------------------------------------------

def write_snapshot(topology: Topology, stream: TextIO) -> None:
    """Line-oriented snapshot: header, N-lines, L-lines."""
    stream.write(f"nodes {len(topology.nodes)} links {len(topology.links)}\n")
    for node in sorted(topology.nodes.values(), key=lambda n: n.id):
        stream.write(f"N {node.id} {node.latitude!r} {node.longitude!r} "
                     f"{node.energy!r} {node.hop_count}\n")
    for link in sorted(topology.links.values(), key=lambda l: l.id):
        stream.write(f"L {link.id} {link.source} {link.target} "
                     f"{link.weight!r} {link.state.value}\n")


def read_snapshot(stream: TextIO) -> Topology:
    header = stream.readline().split()
    if len(header) != 4 or header[0] != "nodes" or header[2] != "links":
        raise TopologyError("malformed snapshot header")
    n_nodes, n_links = int(header[1]), int(header[3])
    topo = Topology()
    for _ in range(n_nodes):
        parts = stream.readline().split()
        if len(parts) != 6 or parts[0] != "N":
            raise TopologyError("malformed node line")
        nid = int(parts[1])
        topo.nodes[nid] = Node(nid, float(parts[2]), float(parts[3]),
                               float(parts[4]), int(parts[5]))
        topo._out[nid] = {}
        topo._in[nid] = {}
        topo._next_node_id = max(topo._next_node_id, nid + 1)
    for _ in range(n_links):
        parts = stream.readline().split()
        if len(parts) != 6 or parts[0] != "L":
            raise TopologyError("malformed link line")
        lid, src, tgt = int(parts[1]), int(parts[2]), int(parts[3])
        weight = float(parts[4])
        state = LinkState.from_letter(parts[5])
        if src not in topo.nodes or tgt not in topo.nodes:
            raise TopologyError("link references unknown node")
        if src == tgt or tgt in topo._out[src] or not weight > 0:
            raise TopologyError("invalid link in snapshot")
        topo.links[lid] = Link(lid, src, tgt, weight, state)
        topo._out[src][tgt] = lid
        topo._in[tgt][src] = lid
        topo._next_link_id = max(topo._next_link_id, lid + 1)
    return topo


def structurally_equal(a: Topology, b: Topology) -> bool:
    """Equality up to renumbering of node and link ids.

    Ids are canonicalized by increasing original id, which is enough for
    histories that only differ by id offsets.
    """
    if len(a.nodes) != len(b.nodes) or len(a.links) != len(b.links):
        return False
    amap = {nid: i for i, nid in enumerate(sorted(a.nodes))}
    bmap = {nid: i for i, nid in enumerate(sorted(b.nodes))}

    def node_key(topo: Topology, m: dict[int, int]) -> list[tuple]:
        return sorted((m[n.id], n.latitude, n.longitude, n.energy, n.hop_count)
                      for n in topo.nodes.values())

    def link_key(topo: Topology, m: dict[int, int]) -> list[tuple]:
        order = {lid: i for i, lid in enumerate(sorted(topo.links))}
        return sorted((order[l.id], m[l.source], m[l.target], l.weight, l.state.value)
                      for l in topo.links.values())

    return (node_key(a, amap) == node_key(b, bmap)
            and link_key(a, amap) == link_key(b, bmap))


def euclidean(a: Node, b: Node) -> float:
    return math.hypot(a.latitude - b.latitude, a.longitude - b.longitude)
