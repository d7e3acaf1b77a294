"""Incremental topology-control executor and test oracles.

The executor classifies unclassified links one at a time.  Before a link
is classified, any active link that heads a blocking predicate-true
triangle is unclassified again (with cascade repair), which keeps the
active-link constraint intact; the termination argument relies on the
unclassified link always being order-maximal in its triangle, which
holds for every algorithm with strict dominance.
"""

from __future__ import annotations

import heapq
import random
import time
from dataclasses import dataclass

from .algorithms import AlgorithmSpec
from .constraints import (ConsistencyLevel, classify_consistency,
                          has_witness_triangle)
from .events import unclassify_link
from .topology import CLASSIFIED, LinkState, Topology, Triangle


@dataclass
class TcRunReport:
    lsm_count: int = 0
    links_processed: int = 0
    nac_unclassifications: int = 0
    wall_time: float = 0.0
    final_consistency: ConsistencyLevel = ConsistencyLevel.STRONGLY_CONSISTENT


class NonTermination(RuntimeError):
    """Safety net: the main loop exceeded its theoretical bound."""


def _third_side(tri: Triangle, lid: int) -> int:
    return tri.e_cb if tri.e_ac == lid else tri.e_ac


def _is_order_largest(topology: Topology, algorithm: AlgorithmSpec,
                      tri: Triangle, lid: int) -> bool:
    k = algorithm.link_key(topology, lid)
    return all(k >= algorithm.link_key(topology, other)
               for other in (tri.e_ab, tri.e_ac, tri.e_cb))


def _state_sequence(topology: Topology, algorithm: AlgorithmSpec,
                    ordered: list[int]) -> list[LinkState]:
    return [topology.links[lid].state for lid in ordered]


def _check_monotone(previous: list[LinkState],
                    current: list[LinkState]) -> None:
    """The first link (in the algorithm's order) whose state changed must
    have gone from unclassified to classified."""
    for old, new in zip(previous, current):
        if old is new:
            continue
        assert old is LinkState.UNCLASSIFIED and new in CLASSIFIED, \
            "state sequence not monotone"
        return
    raise AssertionError("iteration changed no link state")


def run_tc(topology: Topology, algorithm: AlgorithmSpec, *,
           rng: random.Random | None = None,
           validate: bool = False,
           track_monotone: bool = False) -> TcRunReport:
    """Classify every unclassified link; the topology ends strongly
    consistent.  Only link states are mutated.

    ``rng`` randomizes the processing order (default: ascending link
    order).  ``validate`` checks the weak-consistency precondition and
    the strong-consistency postcondition.  ``track_monotone`` asserts
    the termination witness each iteration (strict-dominance algorithms
    only).
    """
    started = time.perf_counter()
    report = TcRunReport()
    lsm_before = topology.lsm_count

    if validate and classify_consistency(topology, algorithm) is \
            ConsistencyLevel.INCONSISTENT:
        raise ValueError("input topology is not weakly consistent")

    track = track_monotone and algorithm.strict_dominance
    if track:
        ordered = sorted(topology.links,
                         key=lambda lid: algorithm.link_key(topology, lid))
        previous = _state_sequence(topology, algorithm, ordered)

    # With an rng the worklist is a plain list sampled uniformly;
    # otherwise it is a heap delivering links in ascending order.
    heap: list[tuple[tuple[float, int], int]] = []

    def push(lid: int) -> None:
        entry = (algorithm.link_key(topology, lid), lid)
        if rng is None:
            heapq.heappush(heap, entry)
        else:
            heap.append(entry)

    for lid in topology.unclassified_links():
        push(lid)

    def repair(lid: int) -> None:
        rep = unclassify_link(topology, lid, algorithm)
        report.nac_unclassifications += len(rep.unclassified_links)
        for unc in rep.unclassified_links:
            push(unc)

    iteration_cap = 10 * (len(topology.links) + 1) ** 2
    while heap:
        if rng is None:
            _, e = heapq.heappop(heap)
        else:
            e = heap.pop(rng.randrange(len(heap)))[1]
        if topology.links[e].state is not LinkState.UNCLASSIFIED:
            continue

        # Blocking triangles: e is a side of a predicate-true triangle
        # whose head is active and whose other side is classified.
        # Classifying e would complete the triangle and violate the
        # active-link constraint, so the head is unclassified first.
        # With strict dominance the head is always the order-largest
        # link of the triangle (the premise of the termination proof).
        for tri in topology.triangles_with_link_as_side(e):
            head = tri.e_ab
            if topology.links[head].state is not LinkState.ACTIVE:
                continue
            third = _third_side(tri, e)
            if topology.links[third].state is LinkState.UNCLASSIFIED:
                continue
            if not algorithm.holds(topology, tri):
                continue
            if algorithm.strict_dominance:
                assert _is_order_largest(topology, algorithm, tri, head)
            repair(head)

        if algorithm.strict_dominance:
            inactive = has_witness_triangle(topology, algorithm, e)
        else:
            # Without dominance the sides of a justifying triangle may
            # follow e in every processing order; since predicates never
            # read link states the final assignment is forced, so e is
            # classified to its final value directly.
            inactive = any(algorithm.holds(topology, tri)
                           for tri in topology.triangles_containing(e))
        topology.set_state(
            e, LinkState.INACTIVE if inactive else LinkState.ACTIVE)
        report.links_processed += 1

        if track:
            current = _state_sequence(topology, algorithm, ordered)
            _check_monotone(previous, current)
            previous = current
        if report.links_processed > iteration_cap:
            raise NonTermination(
                f"exceeded {iteration_cap} iterations; algorithm "
                f"{algorithm.name} did not converge")

    report.lsm_count = topology.lsm_count - lsm_before
    report.wall_time = time.perf_counter() - started
    report.final_consistency = ConsistencyLevel.STRONGLY_CONSISTENT
    if validate:
        level = classify_consistency(topology, algorithm)
        assert level is ConsistencyLevel.STRONGLY_CONSISTENT, level
        report.final_consistency = level
    return report


def run_tc_incremental(topology: Topology, algorithm: AlgorithmSpec,
                       dirty_set: set[int] | None = None, *,
                       validate: bool = False) -> TcRunReport:
    """Re-run TC after context events.

    The handlers leave every affected link unclassified, so the worklist
    is exactly the current unclassified set; ``dirty_set`` may widen it
    by unclassifying additional links first.
    """
    if dirty_set:
        for lid in dirty_set:
            if topology.link(lid).state is not LinkState.UNCLASSIFIED:
                unclassify_link(topology, lid, algorithm)
    return run_tc(topology, algorithm, validate=validate)


# -- oracles ----------------------------------------------------------

def batch_oracle_sequential(topology: Topology,
                            algorithm: AlgorithmSpec) -> dict[int, LinkState]:
    """Reference assignment computed in one ascending pass.

    A link is inactive iff it heads a predicate-true triangle; with
    strict dominance both side links precede it in the order, so the
    pass is well-founded.  The input topology is not mutated.
    """
    if not algorithm.strict_dominance:
        raise ValueError("sequential oracle requires strict dominance")
    assignment: dict[int, LinkState] = {}
    for lid in sorted(topology.links,
                      key=lambda l: algorithm.link_key(topology, l)):
        inactive = any(algorithm.holds(topology, tri)
                       for tri in topology.triangles_containing(lid))
        assignment[lid] = (LinkState.INACTIVE if inactive
                           else LinkState.ACTIVE)
    return assignment


def brute_force_oracle(topology: Topology, algorithm: AlgorithmSpec, *,
                       exhaustive: bool = False,
                       ) -> list[dict[int, LinkState]]:
    """All strongly consistent full assignments.

    The predicates never read link states, so on a full assignment a
    link is valid as inactive iff it heads some predicate-true triangle
    and valid as active iff it heads none; the strongly consistent
    assignment is therefore unique and computed directly.  With
    ``exhaustive`` the full 2^m enumeration is performed instead and
    must agree (used for cross-validation).
    """
    if len(topology.links) > 16:
        raise ValueError("brute-force oracle limited to 16 links")
    heads_true = {
        lid: any(algorithm.holds(topology, tri)
                 for tri in topology.triangles_containing(lid))
        for lid in topology.links}
    forced = {lid: (LinkState.INACTIVE if true else LinkState.ACTIVE)
              for lid, true in heads_true.items()}
    if not exhaustive:
        return [forced]

    lids = sorted(topology.links)
    results = []
    for mask in range(1 << len(lids)):
        ok = True
        assignment = {}
        for bit, lid in enumerate(lids):
            inactive = bool(mask >> bit & 1)
            if inactive != heads_true[lid]:
                ok = False
                break
            assignment[lid] = (LinkState.INACTIVE if inactive
                               else LinkState.ACTIVE)
        if ok:
            results.append(assignment)
    assert results == [forced]
    return results
