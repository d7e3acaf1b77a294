"""Command-line front end: run, check, tc, report, sweep."""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import math
import os
import re
import sys
from pathlib import Path

from .algorithms import parse_algorithm
from .constraints import ConsistencyLevel, all_violations, classify_consistency
from .engine import run_tc
from .simulator import RunMetrics, ScenarioConfig, compare_runs, run_scenario
from .topology import read_snapshot, write_snapshot

log = logging.getLogger("tcnet")

_CONFIG_FIELDS = {f.name: f for f in dataclasses.fields(ScenarioConfig)}
_SWEEP_KEYS = ("algorithms", "w_mins", "ks", "seeds")


def _convert(name: str, raw: str):
    kind = _CONFIG_FIELDS[name].type
    try:
        if "int" in kind and "float" not in kind:
            return int(raw)
        if "float" in kind:
            return float(raw)
        if "bool" in kind:
            return raw.lower() in ("1", "true", "yes")
        return raw
    except ValueError as exc:
        raise ValueError(f"config field {name}: bad value {raw!r}") from exc


def load_config(path: str) -> tuple[ScenarioConfig, dict[str, list[str]]]:
    """Parse a key=value config file; returns the scenario config plus
    any sweep axes (algorithms, w_mins, ks, seeds)."""
    config = ScenarioConfig()
    axes: dict[str, list[str]] = {}
    with open(path) as stream:
        for lineno, line in enumerate(stream, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or not key or not value:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            if key in _SWEEP_KEYS:
                axes[key] = [v.strip() for v in value.split(",") if v.strip()]
            elif key in _CONFIG_FIELDS:
                setattr(config, key, _convert(key, value))
            else:
                raise ValueError(f"{path}:{lineno}: unknown config key "
                                 f"{key!r}")
    config.validate()
    return config, axes


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", text).strip("_")


def _result_stem(config: ScenarioConfig) -> str:
    return (f"run_{_slug(config.algorithm)}_wmin{config.w_min:g}"
            f"_seed{config.seed}")


def _write_results(metrics: RunMetrics, config: ScenarioConfig,
                   out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = _result_stem(config)
    with open(out_dir / f"{stem}.csv", "w") as stream:
        metrics.write_csv(stream)
    summary = metrics.summary()
    summary.update(algorithm=config.algorithm, w_min=config.w_min,
                   seed=config.seed)
    tmp = out_dir / f"{stem}.json.tmp"
    with open(tmp, "w") as stream:
        json.dump(summary, stream, indent=2)
        stream.write("\n")
    tmp.replace(out_dir / f"{stem}.json")
    log.info("wrote %s", out_dir / f"{stem}.json")


def _base_config(args) -> tuple[ScenarioConfig, dict[str, list[str]]]:
    if args.config:
        config, axes = load_config(args.config)
    else:
        config, axes = ScenarioConfig(), {}
    if getattr(args, "seed", None) is not None:
        config.seed = args.seed
    if getattr(args, "algorithm", None):
        config.algorithm = args.algorithm
    config.validate()
    return config, axes


def cmd_run(args) -> int:
    config, _ = _base_config(args)
    metrics = run_scenario(config)
    _write_results(metrics, config, Path(args.out))
    return 0


def cmd_sweep(args) -> int:
    config, axes = _base_config(args)
    algorithms = axes.get("algorithms", [config.algorithm])
    w_mins = [float(w) for w in axes.get("w_mins", [str(config.w_min)])]
    seeds = [int(s) for s in axes.get("seeds", [str(config.seed)])]
    ks = axes.get("ks")
    cells = []
    for algo in algorithms:
        specs = ([re.sub(r"k=[0-9.]+", f"k={k}", algo) for k in ks]
                 if ks and "k=" in algo else [algo])
        for spec in specs:
            for w_min in w_mins:
                for seed in seeds:
                    cells.append((spec, w_min, seed))
    for spec, w_min, seed in cells:
        cell = dataclasses.replace(config, algorithm=spec, w_min=w_min,
                                   seed=seed)
        cell.validate()
        log.info("sweep cell algorithm=%s w_min=%g seed=%d",
                 spec, w_min, seed)
        metrics = run_scenario(cell)
        _write_results(metrics, cell, Path(args.out))
    return 0


def cmd_check(args) -> int:
    with open(args.snapshot) as stream:
        topology = read_snapshot(stream)
    algorithm = parse_algorithm(args.algorithm)
    for violation in all_violations(topology, algorithm):
        print(violation)
    level = classify_consistency(topology, algorithm)
    if level is ConsistencyLevel.STRONGLY_CONSISTENT and \
            not topology.unclassified_links():
        return 0
    return 1


def cmd_tc(args) -> int:
    with open(args.snapshot) as stream:
        topology = read_snapshot(stream)
    algorithm = parse_algorithm(args.algorithm)
    report = run_tc(topology, algorithm, validate=True)
    out = args.out or args.snapshot
    with open(out, "w") as stream:
        write_snapshot(topology, stream)
    print(f"lsm_count={report.lsm_count}")
    print(f"links_processed={report.links_processed}")
    print(f"nac_unclassifications={report.nac_unclassifications}")
    print(f"wall_time_ms={report.wall_time * 1000.0:.3f}")
    print(f"final_consistency={report.final_consistency.value}")
    return 0


_REPORT_COLUMNS = ("l1_min", "l50_min", "l100_min", "mean_topology_size",
                   "mean_lsm", "mean_wall_ms")


def _aggregate(out_dir: Path) -> dict[tuple[str, float], dict[str, float]]:
    """Mean metrics per (algorithm, w_min) over seeds."""
    groups: dict[tuple[str, float], list[dict]] = {}
    for path in sorted(out_dir.glob("*.json")):
        with open(path) as stream:
            summary = json.load(stream)
        key = (summary["algorithm"], float(summary.get("w_min", 0.0)))
        groups.setdefault(key, []).append(summary)
    table = {}
    for key, summaries in groups.items():
        row = {}
        for col in _REPORT_COLUMNS:
            values = [s[col] for s in summaries]
            if any(v is None for v in values):
                row[col] = math.nan
            else:
                row[col] = sum(values) / len(values)
        row["seeds"] = len(summaries)
        table[key] = row
    return table


def cmd_report(args) -> int:
    out_dir = Path(args.out)
    table = _aggregate(out_dir)
    if not table:
        print("no result files found", file=sys.stderr)
        return 1
    baseline_key = next(
        (key for key in table if key[0] == args.baseline), None)
    if args.baseline and baseline_key is None:
        print(f"baseline {args.baseline!r} not found", file=sys.stderr)
        return 1

    header = ["algorithm", "w_min", "seeds"] + list(_REPORT_COLUMNS)
    if baseline_key:
        header += [f"rel_{c}" for c in _REPORT_COLUMNS]
    lines = [header]
    for (algo, w_min), row in sorted(table.items()):
        cells = [algo, f"{w_min:g}", str(row["seeds"])]
        cells += [f"{row[c]:.3f}" for c in _REPORT_COLUMNS]
        if baseline_key:
            base = table[baseline_key]
            for col in _REPORT_COLUMNS:
                denom = base[col]
                rel = row[col] / denom if denom else math.nan
                cells.append(f"{rel:.3f}")
        lines.append(cells)

    with open(out_dir / "report.csv", "w") as stream:
        for cells in lines:
            stream.write(",".join(cells) + "\n")
    widths = [max(len(row[i]) for row in lines) for i in range(len(header))]
    for cells in lines:
        print("  ".join(cell.ljust(w) for cell, w in zip(cells, widths)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tcnet",
        description="Topology-control engine and sensor-network simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute one scenario")
    run_p.add_argument("--config", help="key=value scenario config file")
    run_p.add_argument("--out", default="results", help="output directory")
    run_p.add_argument("--seed", type=int)
    run_p.add_argument("--algorithm")
    run_p.set_defaults(func=cmd_run)

    sweep_p = sub.add_parser("sweep", help="execute the configured sweep")
    sweep_p.add_argument("--config", help="config file with sweep axes")
    sweep_p.add_argument("--out", default="results")
    sweep_p.add_argument("--seed", type=int)
    sweep_p.add_argument("--algorithm")
    sweep_p.set_defaults(func=cmd_sweep)

    check_p = sub.add_parser("check", help="check snapshot consistency")
    check_p.add_argument("snapshot")
    check_p.add_argument("--algorithm", required=True)
    check_p.set_defaults(func=cmd_check)

    tc_p = sub.add_parser("tc", help="run topology control on a snapshot")
    tc_p.add_argument("snapshot")
    tc_p.add_argument("--algorithm", required=True)
    tc_p.add_argument("--out", help="output snapshot (default: in place)")
    tc_p.set_defaults(func=cmd_tc)

    report_p = sub.add_parser("report", help="aggregate run results")
    report_p.add_argument("--out", default="results",
                          help="directory with run results")
    report_p.add_argument("--baseline", help="algorithm name to normalize by")
    report_p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("TCNET_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
