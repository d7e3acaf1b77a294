"""Sweep the minimum link weight and watch the topology shrink.

Raising w_min drops short links from the input topology, trading
density (and routing slack) for a smaller graph that is cheaper to
maintain.
"""

from tcnet.simulator import ScenarioConfig, run_scenario


def main():
    print(f"{'w_min':>6}  {'mean size':>10}  {'mean lsm':>9}")
    for w_min in (0.0, 20.0, 40.0, 60.0, 80.0):
        config = ScenarioConfig(node_count=30, world_side=260.0,
                                sim_duration_min=300.0,
                                tc_interval_min=10.0, w_min=w_min,
                                algorithm="ktc(k=1.41)", seed=3)
        metrics = run_scenario(config)
        print(f"{w_min:>6g}  {metrics.mean_topology_size:>10.1f}  "
              f"{metrics.mean_lsm:>9.1f}")


if __name__ == "__main__":
    main()
