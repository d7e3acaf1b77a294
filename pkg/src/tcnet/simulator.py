"""Discrete-time scenario runner.

Nodes are placed uniformly at random, move under a Gauss-Markov mobility
model, and drain their batteries under a configurable workload.  Links
exist for node pairs whose distance lies within the configured band
[w_min, transmission_radius]; topology control runs periodically on the
batched context events.
"""

from __future__ import annotations

import json
import math
import random
import time
from collections import deque
from dataclasses import dataclass, field
from typing import TextIO

from . import energy as energy_mod
from .algorithms import AlgorithmSpec, parse_algorithm
from .energy import LifetimeRecord, PowerModel
from .engine import run_tc
from .events import ContextEvent, apply_events
from .topology import (LinkState, Topology, UNDEFINED_HOP_COUNT, euclidean)

WORKLOADS = ("gossip", "messaging", "collection")

METRICS_HEADER = "sim_time_min,alive_nodes,topology_size,lsm_count,tc_wall_ms"


@dataclass
class ScenarioConfig:
    node_count: int = 100
    world_side: float = 500.0
    transmission_radius: float = 130.0
    sim_duration_min: float = 1500.0
    tc_interval_min: float = 10.0
    algorithm: str = "ktc(k=1.41)"
    w_min: float = 0.0
    seed: int = 1
    mobility_alpha: float = 0.2
    mean_speed: float = 0.005
    speed_sigma: float | None = None
    direction_sigma: float = 0.4
    battery_capacity: float = 130.0
    battery_init_low: float = 0.3
    battery_init_high: float = 1.0
    workload: str = "gossip"
    message_interval_s: float = 30.0
    message_bytes: int = 1000
    # calibrated so that battery lifetimes fall inside a 25 h scenario
    power_coefficient: float = 5e-4
    t_unit: float = 0.008
    weight_epsilon: float = 1.0
    use_base_station: bool = False

    def validate(self) -> None:
        def positive(name: str) -> None:
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")

        for name in ("node_count", "world_side", "transmission_radius",
                     "sim_duration_min", "tc_interval_min",
                     "battery_capacity", "message_interval_s",
                     "power_coefficient", "t_unit"):
            positive(name)
        if self.mean_speed < 0 or self.w_min < 0 or self.weight_epsilon < 0:
            raise ValueError("mean_speed, w_min, weight_epsilon must be >= 0")
        if not 0 <= self.mobility_alpha <= 1:
            raise ValueError("mobility_alpha must be in [0, 1]")
        if not 0 < self.battery_init_low <= self.battery_init_high <= 1:
            raise ValueError("battery init range must satisfy "
                             "0 < low <= high <= 1")
        if self.workload not in WORKLOADS:
            raise ValueError(f"workload must be one of {WORKLOADS}")
        ratio = self.sim_duration_min / self.tc_interval_min
        if abs(ratio - round(ratio)) > 1e-9:
            raise ValueError("tc_interval_min must divide sim_duration_min")
        parse_algorithm(self.algorithm)  # raises on malformed spec

    @property
    def rows(self) -> int:
        return round(self.sim_duration_min / self.tc_interval_min)

    def power_model(self) -> PowerModel:
        return PowerModel(self.power_coefficient, self.t_unit)

    def make_algorithm(self) -> AlgorithmSpec:
        return parse_algorithm(self.algorithm, self.power_coefficient)


@dataclass
class RunMetrics:
    name: str
    rows: list[tuple[float, int, int, int, float]] = field(default_factory=list)
    lifetime: LifetimeRecord | None = None

    def mean(self, index: int) -> float:
        if not self.rows:
            return math.nan
        return sum(row[index] for row in self.rows) / len(self.rows)

    @property
    def mean_topology_size(self) -> float:
        return self.mean(2)

    @property
    def mean_lsm(self) -> float:
        return self.mean(3)

    @property
    def mean_wall_ms(self) -> float:
        return self.mean(4)

    def write_csv(self, stream: TextIO) -> None:
        stream.write(METRICS_HEADER + "\n")
        for t, alive, size, lsm, wall in self.rows:
            stream.write(f"{t:g},{alive},{size},{lsm},{wall:.3f}\n")

    def summary(self) -> dict:
        def finite(x: float) -> float | None:
            return None if math.isnan(x) else x

        life = self.lifetime
        return {
            "name": self.name,
            "rows": len(self.rows),
            "l1_min": finite(life.l1) if life else None,
            "l50_min": finite(life.l50) if life else None,
            "l100_min": finite(life.l100) if life else None,
            "mean_topology_size": finite(self.mean_topology_size),
            "mean_lsm": finite(self.mean_lsm),
            "mean_wall_ms": finite(self.mean_wall_ms),
        }

    def write_summary(self, stream: TextIO) -> None:
        json.dump(self.summary(), stream, indent=2)
        stream.write("\n")


# -- placement --------------------------------------------------------

def place_uniform(config: ScenarioConfig, rng: random.Random) -> Topology:
    """Uniform node placement with distance-band link creation."""
    topo = Topology()
    for _ in range(config.node_count):
        lat = rng.uniform(0.0, config.world_side)
        lon = rng.uniform(0.0, config.world_side)
        frac = rng.uniform(config.battery_init_low, config.battery_init_high)
        topo.add_node((lat, lon), config.battery_capacity * frac)
    ids = list(topo.nodes)
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            dist = euclidean(topo.nodes[a], topo.nodes[b])
            if config.w_min <= dist <= config.transmission_radius and dist > 0:
                topo.add_link(a, b, dist)
                topo.add_link(b, a, dist)
    return topo


# -- mobility ---------------------------------------------------------

class MobilityModel:
    """First-order autoregressive (Gauss-Markov) speed and direction.

    State is kept per original node slot; noise is drawn for every slot
    each step — including removed nodes — so random streams stay aligned
    across configurations that only differ in link filtering or deaths.
    """

    def __init__(self, config: ScenarioConfig, node_ids: list[int],
                 rng: random.Random) -> None:
        self.config = config
        self.node_ids = list(node_ids)
        sigma = config.speed_sigma
        self.speed_sigma = (config.mean_speed / 4.0 if sigma is None
                            else sigma)
        self.speed = {nid: config.mean_speed for nid in node_ids}
        self.direction = {nid: rng.uniform(0.0, 2 * math.pi)
                          for nid in node_ids}
        self.mean_direction = dict(self.direction)

    def step(self, topology: Topology, dt: float,
             rng: random.Random) -> None:
        """Advance all node positions by dt seconds (no event emission)."""
        cfg = self.config
        alpha = cfg.mobility_alpha
        noise_scale = math.sqrt(max(0.0, 1.0 - alpha * alpha))
        world = cfg.world_side
        for nid in self.node_ids:
            speed_noise = rng.gauss(0.0, self.speed_sigma)
            dir_noise = rng.gauss(0.0, cfg.direction_sigma)
            if nid not in topology.nodes:
                continue
            s = (alpha * self.speed[nid] + (1 - alpha) * cfg.mean_speed
                 + noise_scale * speed_noise)
            d = (alpha * self.direction[nid]
                 + (1 - alpha) * self.mean_direction[nid]
                 + noise_scale * dir_noise)
            s = max(0.0, s)
            self.speed[nid], self.direction[nid] = s, d
            node = topology.nodes[nid]
            lat = node.latitude + s * math.sin(d) * dt
            lon = node.longitude + s * math.cos(d) * dt
            lat, bounced_lat = _reflect(lat, world)
            lon, bounced_lon = _reflect(lon, world)
            if bounced_lat or bounced_lon:
                self.direction[nid] = math.atan2(
                    -math.sin(d) if bounced_lat else math.sin(d),
                    -math.cos(d) if bounced_lon else math.cos(d))
                self.mean_direction[nid] = self.direction[nid]
            node.latitude, node.longitude = lat, lon


def _reflect(x: float, world: float) -> tuple[float, bool]:
    bounced = False
    while x < 0 or x > world:
        if x < 0:
            x = -x
        else:
            x = 2 * world - x
        bounced = True
    return x, bounced


def link_events(topology: Topology, config: ScenarioConfig,
                ) -> list[ContextEvent]:
    """Context events reconciling link existence and weights with the
    current node positions.

    Sub-epsilon weight drift is written silently; larger changes are
    emitted as attribute-modification events so repair runs.
    """
    events: list[ContextEvent] = []
    ids = sorted(topology.nodes)
    lo, hi = config.w_min, config.transmission_radius
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            dist = euclidean(topology.nodes[a], topology.nodes[b])
            in_band = lo <= dist <= hi and dist > 0
            for src, tgt in ((a, b), (b, a)):
                lid = topology.link_between(src, tgt)
                if lid is None:
                    if in_band:
                        events.append(ContextEvent.link_add(src, tgt, dist))
                elif not in_band:
                    events.append(ContextEvent.link_remove(lid))
                elif abs(dist - topology.links[lid].weight) > \
                        config.weight_epsilon:
                    events.append(ContextEvent.link_attr_mod(lid, dist))
                elif dist != topology.links[lid].weight:
                    topology.links[lid].weight = dist
    return events


# -- routing / hop counts ---------------------------------------------

def _active_adjacency(topology: Topology, reverse: bool = False,
                      ) -> dict[int, list[tuple[int, int]]]:
    adj: dict[int, list[tuple[int, int]]] = {nid: [] for nid in topology.nodes}
    for lid, link in topology.links.items():
        if link.state is LinkState.ACTIVE:
            if reverse:
                adj[link.target].append((link.source, lid))
            else:
                adj[link.source].append((link.target, lid))
    return adj


def bfs_hops(topology: Topology, root: int, reverse: bool = False,
             ) -> dict[int, int]:
    """Hop distance from the root over active links (optionally against
    link direction, i.e. hops towards the root)."""
    adj = _active_adjacency(topology, reverse)
    hops = {root: 0}
    queue = deque([root])
    while queue:
        node = queue.popleft()
        for nxt, _ in adj[node]:
            if nxt not in hops:
                hops[nxt] = hops[node] + 1
                queue.append(nxt)
    return hops


def shortest_active_path(topology: Topology, source: int,
                         target: int) -> list[int] | None:
    """Link ids of a shortest active path, or None if unreachable."""
    if source == target:
        return []
    adj = _active_adjacency(topology)
    parent: dict[int, tuple[int, int]] = {}
    queue = deque([source])
    seen = {source}
    while queue:
        node = queue.popleft()
        for nxt, lid in adj[node]:
            if nxt in seen:
                continue
            seen.add(nxt)
            parent[nxt] = (node, lid)
            if nxt == target:
                path = []
                cur = target
                while cur != source:
                    cur, plid = parent[cur]
                    path.append(plid)
                return path[::-1]
            queue.append(nxt)
    return None


# -- scenario ---------------------------------------------------------

def _deplete(topology: Topology, config: ScenarioConfig, model: PowerModel,
             base_station: int | None, interval_start_min: float,
             rng: random.Random, death_times: dict[int, float]) -> list[int]:
    """Drain batteries for one TC interval; returns nodes that died."""
    rounds = max(1, round(config.tc_interval_min * 60.0
                          / config.message_interval_s))
    round_min = config.tc_interval_min / rounds
    all_deaths: list[int] = []

    def record(deaths: list[int], at: float) -> None:
        for nid in deaths:
            death_times.setdefault(nid, at)
        all_deaths.extend(deaths)

    if config.workload == "gossip":
        for r in range(rounds):
            per_step = PowerModel(model.coefficient * model.t_unit,
                                  model.t_unit)
            deaths = energy_mod.gossip_step(topology, per_step)
            record(deaths, interval_start_min + (r + 1) * round_min)
            if all(n.energy <= 0 for n in topology.nodes.values()):
                break
    elif config.workload == "messaging":
        alive = [nid for nid, n in topology.nodes.items() if n.energy > 0]
        targets = {nid: rng.choice(alive) for nid in alive if len(alive) > 1}
        paths = {nid: shortest_active_path(topology, nid, tgt)
                 for nid, tgt in targets.items()}
        for r in range(rounds):
            for nid, path in paths.items():
                if path:
                    links = [topology.links[lid] for lid in path
                             if lid in topology.links]
                    deaths = energy_mod.charge_path(topology, model, links)
                    record(deaths, interval_start_min + (r + 1) * round_min)
    else:  # collection
        root = base_station if base_station in topology.nodes else None
        if root is not None:
            for r in range(rounds):
                for nid, node in list(topology.nodes.items()):
                    if nid == root or node.energy <= 0:
                        continue
                    path = shortest_active_path(topology, nid, root)
                    if path:
                        links = [topology.links[lid] for lid in path]
                        deaths = energy_mod.charge_path(topology, model, links)
                        record(deaths, interval_start_min + (r + 1) * round_min)
    return sorted(set(all_deaths))


def _hop_count_events(topology: Topology, base_station: int,
                      ) -> list[ContextEvent]:
    hops = bfs_hops(topology, base_station, reverse=True)
    events = []
    for nid, node in topology.nodes.items():
        new = hops.get(nid, UNDEFINED_HOP_COUNT)
        if new != node.hop_count:
            events.append(ContextEvent.node_attr_mod(nid, "hop_count", new))
    return events


def run_scenario(config: ScenarioConfig, *, validate: bool = False,
                 ) -> RunMetrics:
    """Execute one scenario: bootstrap TC, then one TC run per interval
    with mobility, depletion and repair in between."""
    config.validate()
    rng = random.Random(config.seed)
    algorithm = config.make_algorithm()
    model = config.power_model()
    topology = place_uniform(config, rng)

    needs_hops = algorithm.name.startswith("lktc")
    needs_base = needs_hops or config.workload == "collection" \
        or config.use_base_station
    base_station = min(topology.nodes) if needs_base else None

    if needs_hops and base_station is not None:
        # seed hop counts from the full graph before any classification
        saved = {lid: link.state for lid, link in topology.links.items()}
        for link in topology.links.values():
            link.state = LinkState.ACTIVE
        hops = bfs_hops(topology, base_station, reverse=True)
        for lid, state in saved.items():
            topology.links[lid].state = state
        for nid, node in topology.nodes.items():
            node.hop_count = hops.get(nid, UNDEFINED_HOP_COUNT)

    mobility = MobilityModel(config, list(topology.nodes), rng)
    run_tc(topology, algorithm, validate=validate)

    metrics = RunMetrics(name=config.algorithm)
    death_times: dict[int, float] = {}
    dt = config.tc_interval_min * 60.0

    for step in range(config.rows):
        t_start = step * config.tc_interval_min
        t_end = t_start + config.tc_interval_min

        mobility.step(topology, dt, rng)
        events = link_events(topology, config)
        deaths = _deplete(topology, config, model, base_station,
                          t_start, rng, death_times)
        if "energy" in algorithm.relevant_attributes:
            for nid, node in topology.nodes.items():
                if nid not in deaths:
                    events.append(ContextEvent.node_attr_mod(
                        nid, "energy", node.energy))
        events.extend(ContextEvent.node_remove(nid) for nid in deaths)

        lsm_before = topology.lsm_count
        apply_events(topology, events, algorithm)
        t0 = time.perf_counter()
        run_tc(topology, algorithm, validate=validate)
        wall_ms = (time.perf_counter() - t0) * 1000.0
        lsm = topology.lsm_count - lsm_before

        if needs_hops and base_station in topology.nodes:
            hop_events = _hop_count_events(topology, base_station)
            if hop_events:
                apply_events(topology, hop_events, algorithm)
                run_tc(topology, algorithm, validate=validate)

        alive = sum(1 for n in topology.nodes.values() if n.energy > 0)
        metrics.rows.append((t_end, alive, topology.size(), lsm, wall_ms))

    metrics.lifetime = LifetimeRecord(death_times, config.node_count)
    return metrics


def compare_runs(metrics_list: list[RunMetrics],
                 baseline_name: str) -> dict[str, dict[str, float]]:
    """Per-run metric ratios against the named baseline run."""
    baseline = next((m for m in metrics_list if m.name == baseline_name),
                    None)
    if baseline is None:
        raise ValueError(f"no run named {baseline_name!r}")

    def ratio(value: float, base: float) -> float:
        if math.isnan(value) or math.isnan(base) or base == 0:
            return math.nan
        return value / base

    base_life = baseline.lifetime
    table = {}
    for metrics in metrics_list:
        life = metrics.lifetime
        table[metrics.name] = {
            "l1": ratio(life.l1, base_life.l1),
            "l50": ratio(life.l50, base_life.l50),
            "l100": ratio(life.l100, base_life.l100),
            "topology_size": ratio(metrics.mean_topology_size,
                                   baseline.mean_topology_size),
            "wall_time": ratio(metrics.mean_wall_ms, baseline.mean_wall_ms),
            "lsm": ratio(metrics.mean_lsm, baseline.mean_lsm),
        }
    return table
