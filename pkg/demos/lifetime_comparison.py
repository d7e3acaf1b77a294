"""Compare network lifetime across algorithms on a small scenario.

Runs the same mobile scenario under no topology control, the
weight-based variant, and the energy-aware variant, then prints the
lifetime and cost metrics relative to the uncontrolled baseline.
"""

from tcnet.simulator import ScenarioConfig, compare_runs, run_scenario

ALGORITHMS = ("maxpower", "ktc(k=1.41)", "ektc(k=1.41)")


def main():
    runs = []
    for algorithm in ALGORITHMS:
        config = ScenarioConfig(node_count=30, world_side=260.0,
                                sim_duration_min=1200.0,
                                tc_interval_min=10.0,
                                power_coefficient=2e-3,
                                algorithm=algorithm, seed=3)
        metrics = run_scenario(config)
        runs.append(metrics)
        l1 = metrics.lifetime.l1
        print(f"{algorithm:<12} first death at "
              f"{'never' if l1 != l1 else f'{l1:g} min'}  "
              f"mean size {metrics.mean_topology_size:.0f}  "
              f"mean lsm {metrics.mean_lsm:.1f}")

    print("\nrelative to maxpower:")
    table = compare_runs(runs, "maxpower")
    for name, ratios in table.items():
        cells = "  ".join(f"{key}={value:.2f}"
                          for key, value in ratios.items())
        print(f"  {name:<12} {cells}")


if __name__ == "__main__":
    main()
