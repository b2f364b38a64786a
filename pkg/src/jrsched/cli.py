"""Command line harness: generate, simulate, solve, adversary, experiment.

Exit codes: 0 success, 1 usage error, 2 infeasible input, 3 solver cap refusal.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .adversary import GAMES, AuditError
from .experiment import (
    CSV_FIELDS,
    SUMMARY_HEADER,
    ConfigError,
    ExperimentConfig,
    OPT_METHODS,
    records_to_csv,
    run_experiment,
    summarize,
)
from .generators import GenKind, GenSpec, derive_seed, generate
from .model import (
    InstanceError,
    SolutionError,
    format_instance_line,
    parse_instances,
    solution_to_json,
)
from .offline import (
    SolverCapError,
    block_partition_greedy,
    brute_force_opt,
    threshold_dp_opt,
)
from .online import (
    POLICY_NAMES,
    DivergenceError,
    PolicyProtocolError,
    StreamError,
    make_policy,
    simulate,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_CAP = 3

KIND_NAMES = tuple(k.value for k in GenKind)


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x)

def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x)


def _parse_sweep(text: str) -> tuple[int, ...]:
    """Integer list: '5', '1,2,10', or inclusive range '1..100'."""
    if ".." in text:
        lo, hi = text.split("..")
        return tuple(range(int(lo), int(hi) + 1))
    return _parse_ints(text)


def _load_instances(path: str):
    instances = parse_instances(Path(path).read_text())
    if not instances:
        raise InstanceError(f"no instances found in {path}")
    return instances


def _spec_from_args(args, seed: int) -> GenSpec:
    kind = GenKind(args.kind)
    return GenSpec(kind=kind, n=args.n, K=args.K, p=args.p, beta=args.beta, seed=seed)


def _add_generator_flags(sub, n_required: bool):
    sub.add_argument("--kind", choices=KIND_NAMES, help="generated input class")
    sub.add_argument("--n", type=int, required=n_required, help="number of jobs")
    sub.add_argument("--p", type=int, help="gap parameter, where the kind uses one")
    sub.add_argument("--beta", type=float, help="geometric gap parameter in (0,1)")
    sub.add_argument("--seed", type=int, default=0, help="random seed")


def cmd_generate(args) -> int:
    lines = []
    for i in range(args.count):
        inst = generate(_spec_from_args(args, derive_seed(args.seed, i)))
        lines.append(format_instance_line(inst))
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.file:
        instances = _load_instances(args.file)
    else:
        if not args.kind:
            raise InstanceError("need --file or --kind")
        instances = [generate(_spec_from_args(args, args.seed))]
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["n", "K", "policy", "alg_cost", "alg_q", "f_max"])
    for inst in instances:
        policy = make_policy(args.policy, inst.K)
        _, trace, breakdown = simulate(inst.releases, policy, inst.K)
        writer.writerow(
            [inst.n, inst.K, args.policy, breakdown.total, breakdown.repl_count, breakdown.f_max]
        )
        if args.trace:
            for line in trace.lines():
                sys.stdout.write(line + "\n")
    return EXIT_OK


def cmd_solve(args) -> int:
    instances = _load_instances(args.file)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["cost", "q", "replenishments"])
    for inst in instances:
        if args.method == "auto":
            method = "brute_force" if inst.n <= 16 else "threshold_dp"
        else:
            method = args.method
        if method == "brute_force":
            result = brute_force_opt(inst)
        elif method == "threshold_dp":
            result = threshold_dp_opt(inst)
        else:
            result = block_partition_greedy(inst)
        writer.writerow(
            [result.cost, result.q, " ".join(str(t) for t in result.solution.replenishments)]
        )
        if args.solution:
            sys.stdout.write(solution_to_json(result.solution) + "\n")
    return EXIT_OK


def cmd_adversary(args) -> int:
    game = GAMES[args.game]
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["game", "policy", "K", "releases", "alg_cost", "alg_q", "opt_cost", "ratio"])
    for K in _parse_sweep(args.K):
        report = game(args.policy, K)
        writer.writerow(
            [
                args.game,
                args.policy,
                K,
                " ".join(str(r) for r in report.instance.releases),
                report.alg_cost,
                report.alg_q,
                report.opt_cost,
                f"{report.ratio:.6f}",
            ]
        )
        if args.trace:
            for line in report.transcript:
                sys.stdout.write(line + "\n")
    return EXIT_OK


def cmd_experiment(args) -> int:
    config = ExperimentConfig(
        kind=GenKind(args.kind),
        n_values=_parse_ints(args.n),
        K=args.K,
        p_values=_parse_ints(args.p) if args.p else (),
        beta_values=_parse_floats(args.beta) if args.beta else (),
        replication=args.replication,
        master_seed=args.seed,
        opt_method=args.opt_method,
        jobs=args.jobs,
    )
    records = run_experiment(config)
    text = records_to_csv(records)
    summary_stream = sys.stdout
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
        summary_stream = sys.stderr
    summary_stream.write(SUMMARY_HEADER + "\n")
    for row in summarize(records):
        summary_stream.write(row.line() + "\n")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="jrsched", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("generate", help="emit instances in the text format")
    _add_generator_flags(gen, n_required=True)
    gen.add_argument("--K", type=int, default=1, help="replenishment cost")
    gen.add_argument("--count", type=int, default=1, help="number of instances")
    gen.add_argument("--out", help="output file (default stdout)")
    gen.set_defaults(func=cmd_generate)

    sim = subs.add_parser("simulate", help="run an online policy on one instance")
    sim.add_argument("--file", help="instance file (K;r1,r2,... per line)")
    _add_generator_flags(sim, n_required=False)
    sim.add_argument("--K", type=int, default=1, help="replenishment cost (generated inputs)")
    sim.add_argument("--policy", choices=POLICY_NAMES, default="algorithm1")
    sim.add_argument("--trace", action="store_true", help="also print the decision log")
    sim.set_defaults(func=cmd_simulate)

    solve = subs.add_parser("solve", help="solve instances offline")
    solve.add_argument("--file", required=True, help="instance file")
    solve.add_argument(
        "--method", choices=("auto", "brute_force", "threshold_dp", "greedy"), default="auto"
    )
    solve.add_argument("--solution", action="store_true", help="also print solution JSON")
    solve.set_defaults(func=cmd_solve)

    adv = subs.add_parser("adversary", help="play a lower-bound game against a policy")
    adv.add_argument("--game", choices=tuple(GAMES), required=True)
    adv.add_argument("--policy", choices=POLICY_NAMES, default="algorithm1")
    adv.add_argument("--K", default="1", help="cost sweep: '3', '1,2,5' or '1..100'")
    adv.add_argument("--trace", action="store_true", help="also print game transcripts")
    adv.set_defaults(func=cmd_adversary)

    exp = subs.add_parser("experiment", help="batch policy-vs-optimum trials as CSV")
    exp.add_argument("--kind", choices=KIND_NAMES, required=True)
    exp.add_argument("--n", required=True, help="comma-separated job counts")
    exp.add_argument("--p", help="comma-separated p grid (pregular/pbounded kinds)")
    exp.add_argument("--beta", help="comma-separated beta grid (geometric kind)")
    exp.add_argument("--K", type=int, default=1, help="replenishment cost")
    exp.add_argument("--replication", type=int, default=100, help="instances per cell")
    exp.add_argument("--seed", type=int, default=0, help="master seed")
    exp.add_argument("--opt-method", choices=OPT_METHODS, default="auto")
    exp.add_argument("--out", help="CSV output path (default stdout)")
    exp.add_argument("--jobs", type=int, default=1, help="worker count; results-invariant")
    exp.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SolverCapError as exc:
        print(f"jrsched: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (
        InstanceError,
        SolutionError,
        StreamError,
        PolicyProtocolError,
        DivergenceError,
        AuditError,
        ConfigError,
        OSError,
        ValueError,
    ) as exc:
        print(f"jrsched: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
