"""Context events and repair handlers that restore weak consistency.

Repair is monotone: it only unclassifies links.  An inactive link whose
last witness triangle was destroyed by an event (or by an earlier repair
step) is unclassified, recursively, until the inactive-link and
active-link constraints hold again.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, TextIO

from .algorithms import AlgorithmSpec
from .constraints import has_witness_triangle
from .topology import LinkState, Topology, TopologyError


class EventKind(Enum):
    NODE_ADD = "NodeAdd"
    NODE_REMOVE = "NodeRemove"
    LINK_ADD = "LinkAdd"
    LINK_REMOVE = "LinkRemove"
    NODE_ATTR_MOD = "NodeAttrMod"
    LINK_ATTR_MOD = "LinkAttrMod"


NODE_ATTRIBUTES = ("energy", "latitude", "longitude", "hop_count")


@dataclass(frozen=True)
class ContextEvent:
    kind: EventKind
    node: int | None = None
    link: int | None = None
    source: int | None = None
    target: int | None = None
    position: tuple[float, float] | None = None
    energy: float | None = None
    weight: float | None = None
    attr: str | None = None
    value: float | None = None

    @classmethod
    def node_add(cls, position: tuple[float, float],
                 energy: float) -> "ContextEvent":
        return cls(EventKind.NODE_ADD, position=position, energy=energy)

    @classmethod
    def node_remove(cls, node: int) -> "ContextEvent":
        return cls(EventKind.NODE_REMOVE, node=node)

    @classmethod
    def link_add(cls, source: int, target: int,
                 weight: float) -> "ContextEvent":
        return cls(EventKind.LINK_ADD, source=source, target=target,
                   weight=weight)

    @classmethod
    def link_remove(cls, link: int) -> "ContextEvent":
        return cls(EventKind.LINK_REMOVE, link=link)

    @classmethod
    def node_attr_mod(cls, node: int, attr: str, value: float) -> "ContextEvent":
        if attr not in NODE_ATTRIBUTES:
            raise ValueError(f"unknown node attribute {attr!r}")
        return cls(EventKind.NODE_ATTR_MOD, node=node, attr=attr, value=value)

    @classmethod
    def link_attr_mod(cls, link: int, weight: float) -> "ContextEvent":
        return cls(EventKind.LINK_ATTR_MOD, link=link, weight=weight)


@dataclass
class HandlerReport:
    unclassified_links: list[int] = field(default_factory=list)
    cascades: int = 0
    created_node: int | None = None
    created_link: int | None = None


def _cascade(topology: Topology, algorithm: AlgorithmSpec,
             frontier: list[int], report: HandlerReport) -> None:
    """Unclassify inactive links that lost every witness triangle,
    spreading outwards until a fixpoint is reached."""
    while frontier:
        next_frontier: list[int] = []
        progressed = False
        for lid in dict.fromkeys(frontier):
            if lid not in topology.links:
                continue
            if topology.links[lid].state is not LinkState.INACTIVE:
                continue
            if has_witness_triangle(topology, algorithm, lid):
                continue
            topology.set_state(lid, LinkState.UNCLASSIFIED)
            report.unclassified_links.append(lid)
            progressed = True
            for tri in topology.triangles_with_link_as_side(lid):
                next_frontier.append(tri.e_ab)
        if progressed:
            report.cascades += 1
        frontier = next_frontier


def _dependents(topology: Topology, lid: int) -> list[int]:
    """Links whose witness triangles use the given link as a side."""
    return [tri.e_ab for tri in topology.triangles_with_link_as_side(lid)]


def unclassify_link(topology: Topology, lid: int,
                    algorithm: AlgorithmSpec) -> HandlerReport:
    """Set a link unclassified and repair dependent inactive links."""
    report = HandlerReport()
    link = topology.link(lid)
    if link.state is LinkState.UNCLASSIFIED:
        return report
    topology.set_state(lid, LinkState.UNCLASSIFIED)
    report.unclassified_links.append(lid)
    _cascade(topology, algorithm, _dependents(topology, lid), report)
    return report


def _unclassify_many(topology: Topology, algorithm: AlgorithmSpec,
                     lids: Iterable[int], report: HandlerReport) -> None:
    frontier: list[int] = []
    for lid in lids:
        if topology.link(lid).state is LinkState.UNCLASSIFIED:
            continue
        topology.set_state(lid, LinkState.UNCLASSIFIED)
        report.unclassified_links.append(lid)
        frontier.extend(_dependents(topology, lid))
    _cascade(topology, algorithm, frontier, report)


def _write_node_attr(topology: Topology, event: ContextEvent):
    node = topology.node(event.node)
    if event.attr == "hop_count":
        value = int(event.value)
        if value < -1:
            raise TopologyError("hop_count must be >= -1")
        node.hop_count = value
    elif event.attr == "energy":
        if event.value < 0:
            raise TopologyError("energy must be >= 0")
        node.energy = event.value
    elif event.attr == "latitude":
        node.latitude = event.value
    elif event.attr == "longitude":
        node.longitude = event.value
    else:
        raise TopologyError(f"unknown node attribute {event.attr!r}")
    return node


def apply_event(topology: Topology, event: ContextEvent,
                algorithm: AlgorithmSpec) -> HandlerReport:
    """Apply a context event and repair back to weak consistency.

    Attribute modifications irrelevant to the algorithm are applied
    without any unclassification.
    """
    report = HandlerReport()
    kind = event.kind

    if kind is EventKind.NODE_ADD:
        report.created_node = topology.add_node(event.position, event.energy)

    elif kind is EventKind.NODE_REMOVE:
        incident = (list(topology._out[topology.node(event.node).id].values())
                    + list(topology._in[event.node].values()))
        frontier: list[int] = []
        for lid in incident:
            frontier.extend(_dependents(topology, lid))
        topology.remove_node(event.node)
        _cascade(topology, algorithm, frontier, report)

    elif kind is EventKind.LINK_ADD:
        report.created_link = topology.add_link(
            event.source, event.target, event.weight)

    elif kind is EventKind.LINK_REMOVE:
        frontier = _dependents(topology, topology.link(event.link).id)
        topology.remove_link(event.link)
        _cascade(topology, algorithm, frontier, report)

    elif kind is EventKind.LINK_ATTR_MOD:
        topology.set_weight(event.link, event.weight)
        if "weight" in algorithm.relevant_attributes:
            _unclassify_many(topology, algorithm, [event.link], report)

    elif kind is EventKind.NODE_ATTR_MOD:
        node = _write_node_attr(topology, event)
        if event.attr in algorithm.relevant_attributes:
            incident = (list(topology._out[node.id].values())
                        + list(topology._in[node.id].values()))
            _unclassify_many(topology, algorithm, incident, report)

    else:  # pragma: no cover
        raise TopologyError(f"unknown event kind {kind}")
    return report


_ATTR_KINDS = (EventKind.NODE_ATTR_MOD, EventKind.LINK_ATTR_MOD)


def _apply_attr_batch(topology: Topology, batch: list[ContextEvent],
                      algorithm: AlgorithmSpec, total: HandlerReport) -> None:
    """Apply a run of attribute modifications with one shared cascade."""
    dirty: dict[int, None] = {}
    for event in batch:
        if event.kind is EventKind.LINK_ATTR_MOD:
            topology.set_weight(event.link, event.weight)
            if "weight" in algorithm.relevant_attributes:
                dirty[event.link] = None
        else:
            _write_node_attr(topology, event)
            if event.attr in algorithm.relevant_attributes:
                node = event.node
                for lid in (*topology._out[node].values(),
                            *topology._in[node].values()):
                    dirty[lid] = None
    _unclassify_many(topology, algorithm, dirty, total)


def apply_events(topology: Topology, events: Iterable[ContextEvent],
                 algorithm: AlgorithmSpec) -> HandlerReport:
    """Apply events in order; contiguous attribute modifications are
    batched so their repair cascade runs once."""
    total = HandlerReport()
    batch: list[ContextEvent] = []
    for event in events:
        if event.kind in _ATTR_KINDS:
            batch.append(event)
            continue
        if batch:
            _apply_attr_batch(topology, batch, algorithm, total)
            batch = []
        report = apply_event(topology, event, algorithm)
        total.unclassified_links.extend(report.unclassified_links)
        total.cascades += report.cascades
    if batch:
        _apply_attr_batch(topology, batch, algorithm, total)
    return total


# -- trace serialization ----------------------------------------------

def format_event(event: ContextEvent) -> str:
    k = event.kind
    if k is EventKind.NODE_ADD:
        lat, lon = event.position
        return f"EV NodeAdd {lat!r} {lon!r} {event.energy!r}"
    if k is EventKind.NODE_REMOVE:
        return f"EV NodeRemove {event.node}"
    if k is EventKind.LINK_ADD:
        return f"EV LinkAdd {event.source} {event.target} {event.weight!r}"
    if k is EventKind.LINK_REMOVE:
        return f"EV LinkRemove {event.link}"
    if k is EventKind.NODE_ATTR_MOD:
        return f"EV NodeAttrMod {event.node} {event.attr} {event.value!r}"
    return f"EV LinkAttrMod {event.link} {event.weight!r}"


def parse_event(line: str) -> ContextEvent:
    parts = line.split()
    if len(parts) < 2 or parts[0] != "EV":
        raise ValueError(f"malformed event line {line!r}")
    kind = parts[1]
    try:
        if kind == "NodeAdd":
            return ContextEvent.node_add(
                (float(parts[2]), float(parts[3])), float(parts[4]))
        if kind == "NodeRemove":
            return ContextEvent.node_remove(int(parts[2]))
        if kind == "LinkAdd":
            return ContextEvent.link_add(
                int(parts[2]), int(parts[3]), float(parts[4]))
        if kind == "LinkRemove":
            return ContextEvent.link_remove(int(parts[2]))
        if kind == "NodeAttrMod":
            return ContextEvent.node_attr_mod(
                int(parts[2]), parts[3], float(parts[4]))
        if kind == "LinkAttrMod":
            return ContextEvent.link_attr_mod(int(parts[2]), float(parts[3]))
    except (IndexError, ValueError) as exc:
        raise ValueError(f"malformed event line {line!r}") from exc
    raise ValueError(f"unknown event kind {kind!r}")


def write_trace(events: Iterable[ContextEvent], stream: TextIO) -> None:
    for event in events:
        stream.write(format_event(event) + "\n")


def read_trace(stream: TextIO) -> list[ContextEvent]:
    return [parse_event(line) for line in stream if line.strip()]
