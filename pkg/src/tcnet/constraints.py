"""Executable graph constraints, consistency levels and connectivity.

A topology is weakly consistent when every inactive link has a witness
triangle and no active link sits in a predicate-true triangle of
classified links; strong consistency additionally forbids unclassified
links.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

from .algorithms import AlgorithmSpec
from .topology import CLASSIFIED, LinkState, Topology, Triangle


class ConsistencyLevel(Enum):
    STRONGLY_CONSISTENT = "strong"
    WEAKLY_CONSISTENT = "weak"
    INCONSISTENT = "inconsistent"


class ConstraintKind(Enum):
    NO_UNCLASSIFIED = "no-unclassified"
    INACTIVE_LINK = "inactive-link"
    ACTIVE_LINK = "active-link"


@dataclass(frozen=True)
class ConstraintViolation:
    constraint: ConstraintKind
    witness: int
    triangle: Triangle | None = None

    def __str__(self) -> str:
        extra = ""
        if self.triangle is not None:
            t = self.triangle
            extra = f" triangle=({t.e_ab},{t.e_ac},{t.e_cb})"
        return f"{self.constraint.value} link={self.witness}{extra}"


def check_no_unclassified(topology: Topology) -> list[ConstraintViolation]:
    return [ConstraintViolation(ConstraintKind.NO_UNCLASSIFIED, lid)
            for lid in topology.unclassified_links()]


def has_witness_triangle(topology: Topology, algorithm: AlgorithmSpec,
                         lid: int) -> bool:
    """True if some triangle with the link in the e_ab role has both
    side links classified and the predicate true."""
    for tri in topology.triangles_containing(lid):
        if (topology.link(tri.e_ac).state in CLASSIFIED
                and topology.link(tri.e_cb).state in CLASSIFIED
                and algorithm.holds(topology, tri)):
            return True
    return False


def check_inactive_link(topology: Topology, algorithm: AlgorithmSpec,
                        links: list[int] | None = None,
                        ) -> list[ConstraintViolation]:
    """Each inactive link needs a witness triangle justifying it."""
    if links is None:
        links = list(topology.links)
    violations = []
    for lid in links:
        if topology.link(lid).state is not LinkState.INACTIVE:
            continue
        if not has_witness_triangle(topology, algorithm, lid):
            violations.append(
                ConstraintViolation(ConstraintKind.INACTIVE_LINK, lid))
    return violations


def check_active_link(topology: Topology, algorithm: AlgorithmSpec,
                      links: list[int] | None = None,
                      ) -> list[ConstraintViolation]:
    """No active link may head a predicate-true triangle of classified links."""
    if links is None:
        links = list(topology.links)
    violations = []
    for lid in links:
        if topology.link(lid).state is not LinkState.ACTIVE:
            continue
        for tri in topology.triangles_containing(lid):
            if (topology.link(tri.e_ac).state in CLASSIFIED
                    and topology.link(tri.e_cb).state in CLASSIFIED
                    and algorithm.holds(topology, tri)):
                violations.append(ConstraintViolation(
                    ConstraintKind.ACTIVE_LINK, lid, tri))
                break
    return violations


def classify_consistency(topology: Topology,
                         algorithm: AlgorithmSpec) -> ConsistencyLevel:
    if check_inactive_link(topology, algorithm) or \
            check_active_link(topology, algorithm):
        return ConsistencyLevel.INCONSISTENT
    if check_no_unclassified(topology):
        return ConsistencyLevel.WEAKLY_CONSISTENT
    return ConsistencyLevel.STRONGLY_CONSISTENT


def all_violations(topology: Topology,
                   algorithm: AlgorithmSpec) -> list[ConstraintViolation]:
    return (check_no_unclassified(topology)
            + check_inactive_link(topology, algorithm)
            + check_active_link(topology, algorithm))


# -- connectivity -----------------------------------------------------

def _reachable_from(adjacency: dict[int, list[int]], start: int) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for nxt in adjacency.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def _adjacency(topology: Topology,
               states: tuple[LinkState, ...]) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {nid: [] for nid in topology.nodes}
    for link in topology.links.values():
        if link.state in states:
            adj[link.source].append(link.target)
    return adj


def _restricted_connected(topology: Topology,
                          states: tuple[LinkState, ...]) -> bool:
    """Every ordered pair reachable in the full graph must stay
    reachable over links in the given states."""
    full = _adjacency(topology, tuple(LinkState))
    restricted = _adjacency(topology, states)
    for nid in topology.nodes:
        full_reach = _reachable_from(full, nid)
        if len(full_reach) == 1:
            continue
        sub_reach = _reachable_from(restricted, nid)
        if not full_reach <= sub_reach:
            return False
    return True


def is_a_connected(topology: Topology) -> bool:
    return _restricted_connected(topology, (LinkState.ACTIVE,))


def is_au_connected(topology: Topology) -> bool:
    return _restricted_connected(
        topology, (LinkState.ACTIVE, LinkState.UNCLASSIFIED))
