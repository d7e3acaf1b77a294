"""Incremental topology control for wireless sensor networks.

Core pieces: an attributed directed graph model (:mod:`tcnet.topology`),
the triangle-predicate algorithm family (:mod:`tcnet.algorithms`),
consistency constraints (:mod:`tcnet.constraints`), the incremental
executor (:mod:`tcnet.engine`), context-event repair
(:mod:`tcnet.events`), an energy/lifetime model (:mod:`tcnet.energy`)
and a desk-scale scenario simulator (:mod:`tcnet.simulator`).
"""

from .algorithms import AlgorithmSpec, make_algorithm, parse_algorithm
from .constraints import ConsistencyLevel, classify_consistency
from .energy import PowerModel
from .engine import (batch_oracle_sequential, brute_force_oracle, run_tc,
                     run_tc_incremental)
from .events import ContextEvent, apply_event, unclassify_link
from .simulator import ScenarioConfig, compare_runs, run_scenario
from .topology import Link, LinkState, Node, Topology, Triangle

__all__ = [
    "AlgorithmSpec", "make_algorithm", "parse_algorithm",
    "ConsistencyLevel", "classify_consistency",
    "PowerModel",
    "batch_oracle_sequential", "brute_force_oracle", "run_tc",
    "run_tc_incremental",
    "ContextEvent", "apply_event", "unclassify_link",
    "ScenarioConfig", "compare_runs", "run_scenario",
    "Link", "LinkState", "Node", "Topology", "Triangle",
]

__version__ = "1.0.0"
