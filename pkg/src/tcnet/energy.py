"""Transmission-power and lifetime model with synthetic workloads.

Power follows the free-space law p(e) = c * w(e)^2; the expected
remaining lifetime of a link is the number of depletion steps its source
node can sustain at that power.  Receiving is free: transmission
consumes energy only at the sending node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .topology import Link, LinkState, Topology

#: Active-only versus all-outgoing-links node lifetime.
ACTIVE_ONLY = "active_only"
ALL_LINKS = "all_links"


@dataclass(frozen=True)
class PowerModel:
    """p(e) = coefficient * w(e)^2, in watts."""

    coefficient: float = 0.01
    #: airtime of one message in seconds (1 kB at 1 Mb/s)
    t_unit: float = 0.008

    def __post_init__(self) -> None:
        if not self.coefficient > 0:
            raise ValueError("power coefficient must be > 0")


def required_power(model: PowerModel, link: Link) -> float:
    return model.coefficient * link.weight ** 2


def expected_remaining_lifetime_link(node_energy: float,
                                     power: float) -> float:
    if not power > 0:
        raise ValueError("power must be > 0")
    return node_energy / power


def link_lifetime(topology: Topology, model: PowerModel, lid: int) -> float:
    link = topology.link(lid)
    return expected_remaining_lifetime_link(
        topology.nodes[link.source].energy, required_power(model, link))


def expected_remaining_lifetime_node(topology: Topology, model: PowerModel,
                                     node: int, mode: str = ALL_LINKS,
                                     ) -> float:
    """Minimum link lifetime over the node's outgoing links; infinite
    when the selected link set is empty."""
    if mode not in (ACTIVE_ONLY, ALL_LINKS):
        raise ValueError(f"unknown mode {mode!r}")
    best = math.inf
    for link in topology.out_links(node):
        if mode == ACTIVE_ONLY and link.state is not LinkState.ACTIVE:
            continue
        best = min(best, expected_remaining_lifetime_link(
            topology.nodes[node].energy, required_power(model, link)))
    return best


def expected_remaining_lifetime_topology(topology: Topology,
                                         model: PowerModel) -> float:
    """Minimum over nodes of the active-only node lifetime."""
    return min((expected_remaining_lifetime_node(topology, model, nid,
                                                 ACTIVE_ONLY)
                for nid in topology.nodes), default=math.inf)


def gossip_step(topology: Topology, model: PowerModel) -> list[int]:
    """One depletion step: every alive node pays the largest required
    power among its active outgoing links.  Returns nodes that died."""
    deaths = []
    for nid, node in topology.nodes.items():
        if node.energy <= 0:
            continue
        cost = max((required_power(model, link)
                    for link in topology.out_links(nid)
                    if link.state is LinkState.ACTIVE), default=0.0)
        if cost <= 0:
            continue
        node.energy = max(0.0, node.energy - cost)
        if node.energy == 0:
            deaths.append(nid)
    return deaths


def messaging_cost(model: PowerModel, path: list[Link]) -> float:
    """Energy for one message along a path, paid at each hop's sender."""
    return sum(required_power(model, link) * model.t_unit for link in path)


def charge_path(topology: Topology, model: PowerModel,
                path: list[Link]) -> list[int]:
    """Deplete each hop's sender for one message; returns nodes that died."""
    deaths = []
    for link in path:
        node = topology.nodes[link.source]
        if node.energy <= 0:
            continue
        node.energy = max(
            0.0, node.energy - required_power(model, link) * model.t_unit)
        if node.energy == 0:
            deaths.append(node.id)
    return deaths


@dataclass
class LifetimeRecord:
    """Death times per node and the derived d-lifetimes."""

    death_times: dict[int, float]
    initial_node_count: int

    def lifetime(self, dead_count: int) -> float:
        """First time at which at least the given number of nodes are
        dead; NaN if never reached."""
        if dead_count <= 0:
            return 0.0
        times = sorted(self.death_times.values())
        if len(times) < dead_count:
            return math.nan
        return times[dead_count - 1]

    @property
    def l1(self) -> float:
        return self.lifetime(1)

    @property
    def l50(self) -> float:
        return self.lifetime(math.ceil(self.initial_node_count * 0.5))

    @property
    def l100(self) -> float:
        return self.lifetime(self.initial_node_count)
