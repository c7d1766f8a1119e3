#!/usr/bin/env python3
# PYTHON_ARGCOMPLETE_OK

import argparse
import argcomplete
import logging
import sys
from dataclasses import replace

import numpy as np
import pandas as pd
from rich.markup import escape

from .analysis import analyze, analyzer_for, mark
from .config import load_settings
from .errors import (ConsensusObsError, ConsistencyError, InvalidInputError, NotFoundError, SimulationError,
                     VerificationError)
from .graphs import GraphKind, GraphTopology, NodeSet
from .reporter import (ConsensusReporter, ReportDocument, console, err_console, marking_dot,
                       marking_json, marking_text, oracle_summary)
from .self_check import SelfCheckRunner
from .simulator import SimConfig, SimMode, indistinguishability_demo, simulate, steering_demo
from .verifier import SweepRunner, check

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_UNOBSERVABLE = 3
EXIT_DISAGREEMENT = 4
EXIT_SIMULATION = 5


def build_topology(kind, n, settings):
    if kind == GraphKind.CYCLE.value:
        g = GraphTopology.cycle(n)
    else:
        g = GraphTopology.path(n)
    return g.check_size(settings.max_n)


def parse_sizes(text):
    try:
        sizes = [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise InvalidInputError(f"Subset sizes must be comma-separated integers, got {text!r}")
    if not sizes or any(s < 1 for s in sizes):
        raise InvalidInputError(f"Subset sizes must be positive, got {text!r}")
    return sizes


def parse_vector(text, n):
    try:
        values = np.array([float(part) for part in text.split(',')])
    except ValueError:
        raise InvalidInputError(f"Vector must be comma-separated numbers, got {text!r}")
    if values.shape != (n,):
        raise InvalidInputError(f"Vector needs {n} entries, got {values.size}")
    return values


def command_echo(args):
    return {"name": args.command, "args": {k: v for k, v in vars(args).items() if k not in ('command', 'config')}}


# --- commands ---------------------------------------------------------------

def cmd_analyze(args, settings):
    g = build_topology(args.kind, args.n, settings)
    nodes = NodeSet.parse(args.nodes, g.n)
    report = analyze(g, nodes, settings, oracle_check=False if args.no_oracle else None)
    if args.format == 'table':
        ConsensusReporter().print_report(report)
    else:
        doc = ReportDocument(command_echo(args), report, oracle=oracle_summary(report))
        print(doc.serialize())
    return EXIT_OK if report.observable else EXIT_UNOBSERVABLE


def cmd_mark(args, settings):
    g = build_topology(args.kind, args.n, settings)
    marking = mark(g, settings)
    if args.format == 'dot':
        text = marking_dot(marking)
    elif args.format == 'json':
        text = marking_json(marking)
    elif args.format == 'table':
        ConsensusReporter().print_marking(marking)
        return EXIT_OK
    else:
        text = marking_text(marking)

    if args.out:
        with open(args.out, 'w') as f:
            f.write(text + "\n")
        console.print(f"Marking saved to: [bold green]{args.out}[/]")
    else:
        print(text)
    return EXIT_OK


def cmd_verify(args, settings):
    sizes = parse_sizes(args.subset_sizes)
    runner = SweepRunner(settings, workers=args.workers)
    reporter = ConsensusReporter()
    frames = []
    if args.kind in ('path', 'both'):
        frames.append(("Path sweep", runner.path_sweep(args.max_n, sizes, duality=args.duality,
                                                       internal_only=args.internal_only,
                                                       random_subsets=args.random_subsets)))
    if args.kind in ('cycle', 'both'):
        frames.append(("Cycle sweep", runner.cycle_sweep(args.max_n, sizes, duality=args.duality)))

    for title, frame in frames:
        reporter.print_sweep(frame, title)
    combined = pd.concat([frame for _, frame in frames], ignore_index=True)
    if args.csv:
        combined.to_csv(args.csv, index=False)
        console.print(f"Sweep saved to: [bold green]{args.csv}[/]")
    console.print(f"Configurations tested: [bold]{len(combined)}[/]")

    for title, frame in frames:
        check(frame, title)
    console.print("[success]0 disagreements[/]")
    return EXIT_OK


def cmd_simulate(args, settings):
    g = build_topology(args.kind, args.n, settings)
    mode = SimMode(args.mode)
    # the steering demo runs over the Gramian horizon
    horizon_key = "gramian_horizon" if args.demo == 'steer' else "horizon"
    overrides = {k: v for k, v in ((horizon_key, args.horizon), ("epsilon", args.epsilon), ("dt", args.dt))
                 if v is not None}
    if overrides:
        settings = replace(settings, simulation=replace(settings.simulation, **overrides))

    if args.demo == 'indistinguishable':
        if not args.observers:
            raise InvalidInputError("--observers is required for the indistinguishable demo")
        observers = NodeSet.parse(args.observers, g.n)
        report = analyze(g, observers, settings)
        if report.observable:
            raise SimulationError(f"{g} is observable from {observers}: no witness exists")
        result = indistinguishability_demo(g, observers, report.witness_subspace[0], mode=mode, settings=settings)
        trajectory = result.second
        console.print(f"[success]Outputs indistinguishable[/]: max output gap {result.output_gap:.2e} "
                      f"(tolerance {result.tolerance:g})")
        code = EXIT_OK

    elif args.demo == 'steer':
        if not args.leaders:
            raise InvalidInputError("--leaders is required for the steer demo")
        leaders = NodeSet.parse(args.leaders, g.n)
        if args.target:
            target = parse_vector(args.target, g.n)
        else:
            target = np.random.default_rng(settings.simulation.seed).standard_normal(g.n)
        result = steering_demo(g, leaders, target, settings=settings)
        if not result.reached:
            console.print("[warning]Target is not reachable.[/] Unreachable component:")
            print(np.array2string(result.unreachable_component, precision=6))
            return EXIT_UNOBSERVABLE
        trajectory = result.trajectory
        console.print(f"[success]Target reached[/]: terminal error {result.terminal_error:.2e}")
        code = EXIT_OK

    else:
        nodes = NodeSet.parse(args.observers or args.leaders or "1", g.n)
        cfg = SimConfig.from_settings(g, nodes, mode, settings)
        x0 = parse_vector(args.x0, g.n) if args.x0 else np.random.default_rng(settings.simulation.seed).standard_normal(g.n)
        trajectory = simulate(cfg, x0)
        console.print(f"Final state: {escape(np.array2string(trajectory.states[-1], precision=6))}")
        code = EXIT_OK

    if args.out:
        trajectory.to_csv(args.out)
        console.print(f"Trajectory saved to: [bold green]{args.out}[/]")
    return code


def cmd_select(args, settings):
    g = build_topology(args.kind, args.n, settings)
    analyzer = analyzer_for(g.kind, settings)
    if g.is_path:
        nodes = analyzer.select_observable_set(g.n, args.max_size, internal_only=args.internal_only)
    else:
        nodes = analyzer.select_observable_set(g.n, max(args.max_size, 2))
    print(str(nodes))
    return EXIT_OK


def cmd_self_check(args, settings):
    runner = SelfCheckRunner(settings)
    return EXIT_OK if runner.run() else EXIT_FAILURE


COMMANDS = {
    'analyze': cmd_analyze,
    'mark': cmd_mark,
    'verify': cmd_verify,
    'simulate': cmd_simulate,
    'select': cmd_select,
    'self-check': cmd_self_check,
}


def build_parser():
    desc = """Consensus observability CLI

Exit codes: 0 observable / success, 2 usage, 3 unobservable (or unreachable),
4 verification disagreement, 5 simulation failure.

To enable tab completion (Bash):
  eval "$(register-python-argcomplete consensus-obs)"
"""
    parser = argparse.ArgumentParser(description=desc, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument('--config', help='Path to configuration file')
    subparsers = parser.add_subparsers(dest='command', help='Commands')
    kinds = [k.value for k in GraphKind]

    # 1. Analyze a node set
    analyze_parser = subparsers.add_parser('analyze', help='Decide observability of a node set')
    analyze_parser.add_argument('kind', choices=kinds)
    analyze_parser.add_argument('n', type=int, help='Number of nodes')
    analyze_parser.add_argument('--nodes', required=True, help='Comma-separated 1-based labels, e.g. 2,5')
    analyze_parser.add_argument('--no-oracle', action='store_true', help='Skip the numerical cross-check')
    analyze_parser.add_argument('--format', choices=['json', 'table'], default='json')

    # 2. Node marking
    mark_parser = subparsers.add_parser('mark', help='Print the symbol marking of every node')
    mark_parser.add_argument('kind', choices=kinds)
    mark_parser.add_argument('n', type=int)
    mark_parser.add_argument('--format', choices=['text', 'dot', 'json', 'table'], default='text')
    mark_parser.add_argument('--out', help='Write to file instead of stdout')

    # 3. Oracle sweeps
    verify_parser = subparsers.add_parser('verify', help='Sweep theorem verdicts against the rank oracle')
    verify_parser.add_argument('--max-n', type=int, required=True)
    verify_parser.add_argument('--subset-sizes', default='1,2', help='Comma-separated subset sizes')
    verify_parser.add_argument('--kind', choices=kinds + ['both'], default='both')
    verify_parser.add_argument('--internal-only', action='store_true', help='Paths: internal nodes only')
    verify_parser.add_argument('--random-subsets', type=int, default=0, help='Paths: random 3-subsets per n')
    verify_parser.add_argument('--duality', action='store_true', help='Also compare reachability of (L, B)')
    verify_parser.add_argument('--workers', type=int, help='Parallel worker processes')
    verify_parser.add_argument('--csv', help='Write the sweep table to this CSV file (overwrites)')

    # 4. Simulation demos
    sim_parser = subparsers.add_parser('simulate', help='Run consensus dynamics demonstrations')
    sim_parser.add_argument('kind', choices=kinds)
    sim_parser.add_argument('n', type=int)
    sim_parser.add_argument('--observers', help='Observation nodes')
    sim_parser.add_argument('--leaders', help='Leader (input) nodes')
    sim_parser.add_argument('--demo', choices=['indistinguishable', 'steer', 'free'], default='free')
    sim_parser.add_argument('--mode', choices=[m.value for m in SimMode], default=SimMode.CONTINUOUS_RK4.value)
    sim_parser.add_argument('--target', help='Steering target, comma-separated')
    sim_parser.add_argument('--x0', help='Initial state for the free run, comma-separated')
    sim_parser.add_argument('--horizon', type=float)
    sim_parser.add_argument('--epsilon', type=float)
    sim_parser.add_argument('--dt', type=float)
    sim_parser.add_argument('--out', help='CSV path for the trajectory (t, x_1..x_n, y_1..y_m)')

    # 5. Observable set selection
    select_parser = subparsers.add_parser('select', help='Smallest observable node set')
    select_parser.add_argument('kind', choices=kinds)
    select_parser.add_argument('n', type=int)
    select_parser.add_argument('--max-size', type=int, default=2)
    select_parser.add_argument('--internal-only', action='store_true', help='Paths: skip the external nodes')

    # 6. Self check
    subparsers.add_parser('self-check', help='Reproduce the reference markings and run a small sweep')

    argcomplete.autocomplete(parser)
    return parser


def main(argv=None):
    # Pre-parse args to check for --config before full parsing
    pre_parser = argparse.ArgumentParser(add_help=False)
    pre_parser.add_argument('--config', help='Path to configuration file')
    pre_args, _ = pre_parser.parse_known_args(argv)

    settings = load_settings(pre_args.config)

    # Configure Logging
    logging.basicConfig(
        filename=settings.log_file,
        level=logging.INFO,
        format='%(asctime)s - %(levelname)s - %(message)s',
        force=True,
    )
    logging.info(f"Settings: max_n={settings.max_n}, oracle_max_n={settings.oracle_max_n}, "
                 f"config={pre_args.config or 'search'}")

    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    try:
        return COMMANDS[args.command](args, settings)
    except (InvalidInputError, NotFoundError) as e:
        logging.error(f"{args.command}: {e}")
        err_console.print(f"[error]Error:[/] {escape(str(e))}")
        return EXIT_USAGE if isinstance(e, InvalidInputError) else EXIT_UNOBSERVABLE
    except VerificationError as e:
        logging.error(f"{args.command}: {e}")
        err_console.print(f"[error]DISAGREEMENT:[/] {escape(str(e))}")
        if e.configuration:
            err_console.print(f"Configuration: {escape(str(e.configuration))}")
        return EXIT_DISAGREEMENT
    except ConsistencyError as e:
        logging.error(f"{args.command}: {e}")
        err_console.print(f"[error]INCONSISTENT:[/] {escape(str(e))}")
        return EXIT_DISAGREEMENT
    except SimulationError as e:
        logging.error(f"{args.command}: {e}")
        err_console.print(f"[error]SIMULATION FAILED:[/] {escape(str(e))}")
        return EXIT_SIMULATION
    except ConsensusObsError as e:
        logging.exception(f"{args.command} failed")
        err_console.print(f"[error]Error:[/] {escape(str(e))}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
