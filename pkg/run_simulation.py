#!/usr/bin/env python3
"""
Smart Lighting Simulation Tool - Annual energy and techno-economic study of
residential lighting control scenarios.

Subcommands:
- simulate: sweep locations x scenarios from a study config and write reports
- reproduce-paper: run the bundled two-city reference study and grade it
- validate-config: check a study config and list every violation
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from config import DEFAULT_CONFIG, load_config, read_document
from errors import ConfigError, SimulationError
from manifest import ManifestFile, RunManifest
from report import evaluate_study, write_results
from reproduce import reproduce
from schemas import validate_config


EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


def parse_weather(values: Optional[List[str]]) -> Dict[str, str]:
    """Parse repeated --weather NAME=EPW options."""
    overrides = {}
    for value in values or []:
        name, sep, path = value.partition("=")
        if not sep or not name or not path:
            raise ConfigError(f"expected NAME=EPW, got {value!r}", "--weather")
        overrides[name] = path
    return overrides


def parse_scenarios(value: Optional[str]) -> Optional[List[str]]:
    if value is None:
        return None
    labels = [label.strip() for label in value.split(",") if label.strip()]
    if not labels:
        raise ConfigError("empty scenario list", "--scenarios")
    return labels


def write_manifest(study, out_dir: Path, config_path: Path):
    manifest = RunManifest(
        config_path=str(Path(config_path).resolve()),
        weather_paths={loc.name: loc.weather_source for loc in study.locations},
        mode=study.simulation.mode.value,
        seed=study.simulation.seed,
        timestep_minutes=study.simulation.timestep_minutes,
        output_dir=str(out_dir.resolve()),
    ).compute_digests()
    ManifestFile(out_dir / "manifest.json").write(manifest)


def run_simulate(args) -> int:
    """Run a config-driven sweep and write results.csv/json, summary.md and manifest.json."""
    study = load_config(args.config)
    study = study.with_weather(parse_weather(args.weather))
    study = study.with_simulation(mode=args.mode, seed=args.seed, timestep_minutes=args.timestep)
    labels = parse_scenarios(args.scenarios)

    print("=" * 70)
    print("SMART LIGHTING SIMULATION")
    print("=" * 70)
    print(f"Config:         {args.config}")
    print(f"Locations:      {', '.join(loc.name for loc in study.locations)}")
    print(f"Mode:           {study.simulation.mode.value}")
    print(f"Seed:           {study.simulation.seed}")
    print(f"Timestep:       {study.simulation.timestep_minutes} min")
    print(f"Scenarios:      {', '.join(labels) if labels else 'all'}")
    print(f"Output:         {args.out}")

    results = evaluate_study(study, labels, n_jobs=args.jobs)
    out_dir = Path(args.out)
    write_results(results.reports, out_dir)
    write_manifest(study, out_dir, args.config)

    print("\n" + "-" * 70)
    for r in results.reports:
        print(f"  {r.location:<12} {r.scenario_id:<18} {r.annual_energy:>9.2f} kWh  {r.annual_cost:>9.2f} EUR")
    print("\n" + "=" * 70)
    print(f"✓ Wrote {len(results.reports)} result rows to {out_dir}")
    print("=" * 70)
    return EXIT_OK


def run_reproduce_paper(args) -> int:
    """Run the reference study; exit 1 when any acceptance check fails."""
    print("=" * 70)
    print("REFERENCE STUDY REPRODUCTION")
    print("=" * 70)

    out_dir = Path(args.out)
    outcome = reproduce(out_dir, config_path=Path(args.config), n_jobs=args.jobs)
    write_manifest(outcome.study, out_dir, args.config)

    print(f"\n✓ {len(outcome.results.reports)} cells evaluated")
    for path in outcome.files:
        print(f"✓ Wrote {path.name}")

    print("\n" + "-" * 70)
    print("CHECKS")
    print("-" * 70)
    for check in outcome.checks:
        mark = "✓" if check.passed else "✗"
        print(f"  {mark} [{check.criterion}] {check.name:<40} {check.location:<10} "
              f"{check.computed:>12.4f}  target {check.target}")

    failed = sum(1 for check in outcome.checks if not check.passed)
    print("\n" + "=" * 70)
    if failed:
        print(f"✗ {failed} of {len(outcome.checks)} checks failed")
    else:
        print(f"✓ All {len(outcome.checks)} checks passed")
    print("=" * 70)
    return EXIT_FAILED if failed else EXIT_OK


def run_validate_config(args) -> int:
    """Print OK, or one '<pointer>: <message>' line per violation."""
    violations = validate_config(read_document(args.path))
    if not violations:
        print("OK")
        return EXIT_OK
    for violation in violations:
        print(violation)
    return EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Simulate annual lighting energy and economics of smart-lighting scenarios",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Scenarios:
  Baseline, DH, DH+Dim, then Sched/MD for the 1st and 2nd occupancy
  profiles, each alone, +DH and +DH+Dim (15 in total)

Exit codes:
  0  success
  1  acceptance check failed (reproduce-paper) or a simulation cell failed
  2  invalid input (config, weather file, arguments)

Examples:
  %(prog)s simulate --config config/default.json --out out/            # Full 2 x 15 sweep
  %(prog)s simulate --out out/ --scenarios Baseline,"MD 2nd+DH+Dim"     # Two scenarios only
  %(prog)s simulate --out out/ --mode stochastic --seed 7 --jobs 4      # Sampled occupancy
  %(prog)s simulate --out out/ --weather Stuttgart=my_stuttgart.epw     # Own weather file
  %(prog)s reproduce-paper --out repro/                                 # Reference study + checks
  %(prog)s validate-config config/default.json                          # Check a config
        """
    )
    parser.add_argument(
        "--verbose",
        action="store_true",
        help="Log debug output (per-cell timings, calibration) to stderr"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    simulate = subparsers.add_parser("simulate", help="Run a config-driven scenario sweep")
    simulate.add_argument(
        "--config",
        default=str(DEFAULT_CONFIG),
        help="Study config JSON (default: bundled two-city study)"
    )
    simulate.add_argument(
        "--weather",
        action="append",
        metavar="NAME=EPW",
        help="Use an EPW file for the named location (can be used multiple times)"
    )
    simulate.add_argument(
        "--mode",
        choices=["expected", "stochastic"],
        help="Occupancy mode: probabilities (expected) or seeded samples (stochastic)"
    )
    simulate.add_argument("--seed", type=int, help="Root random seed")
    simulate.add_argument("--timestep", type=int, metavar="MIN", help="Timestep in minutes, must divide 30")
    simulate.add_argument("--scenarios", metavar="A,B", help="Comma-separated scenario labels to report")
    simulate.add_argument("--out", required=True, help="Output directory")
    simulate.add_argument("--jobs", type=int, default=1, help="Parallel sweep workers (default: 1)")
    simulate.set_defaults(handler=run_simulate)

    repro = subparsers.add_parser("reproduce-paper", help="Run the reference study and grade the checks")
    repro.add_argument("--out", required=True, help="Output directory")
    repro.add_argument("--config", default=str(DEFAULT_CONFIG), help=argparse.SUPPRESS)
    repro.add_argument("--jobs", type=int, default=1, help="Parallel sweep workers (default: 1)")
    repro.set_defaults(handler=run_reproduce_paper)

    validate = subparsers.add_parser("validate-config", help="Check a study config")
    validate.add_argument("path", help="Study config JSON")
    validate.set_defaults(handler=run_validate_config)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        return args.handler(args)
    except SimulationError as e:
        print(f"error: {e.kind}: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: io: {e}", file=sys.stderr)
        return EXIT_INPUT
    except KeyboardInterrupt:
        print("\n\n⚠ Simulation interrupted by user", file=sys.stderr)
        return EXIT_FAILED
    except Exception as e:
        print(f"error: internal: {e}", file=sys.stderr)
        import traceback
        traceback.print_exc()
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
