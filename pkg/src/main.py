#!/usr/bin/env python3
"""
observa - Main CLI Entry Point

Exit codes: 0 ok, 1 usage error, 2 input format error, 3 witness bounds
exhausted, 4 failed assertion or self-check.
"""

import argparse
import sys
import time
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent))

import logger
from automata import observability, oracle
from automata.core import Dfa, embed, equivalent, minimize
from automata.errors import AlphabetMismatchError, BoundsExhausted, FormatError, SelfCheckError
from automata.language_ops import kleene_plus_steps
from automata.regex import dfa_from_regex
from automata.suite import STEPS, SuiteRunner
from executor import Executor
from settings import Settings, load_settings
from utils import format_words, parse_alphabet, read_source, write_output
from validator import dump_dfa, load_dfa, load_homomorphism

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FORMAT = 2
EXIT_BOUNDS = 3
EXIT_ASSERTION = 4


class UsageError(Exception):
    """Bad command line; reported with exit code 1"""


class Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as exceptions instead of exit code 2"""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _input_options() -> argparse.ArgumentParser:
    """Flags shared by every command that reads automata"""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument(
        '-e', '--expr',
        action='append',
        default=[],
        metavar='REGEX',
        help='Regular expression operand (repeatable); needs -a'
    )
    parent.add_argument(
        '-a', '--alphabet',
        metavar='SIGMA',
        help='Alphabet for -e, e.g. a,b'
    )
    parent.add_argument(
        '--complete',
        action='store_true',
        help='Add a sink for missing transitions instead of rejecting the input'
    )
    return parent


def build_parser() -> Parser:
    """Argument parser for every subcommand"""
    inputs = _input_options()
    parser = Parser(
        prog='observa',
        description='observa - state observability and semi-observability index of regular languages'
    )
    parser.add_argument('-v', '--verbose', action='store_true', help='Print [TAG] diagnostics on stderr')
    commands = parser.add_subparsers(dest='command', metavar='COMMAND', parser_class=Parser)
    commands.required = True

    analyze = commands.add_parser('analyze', parents=[inputs], help='Observability report for one automaton')
    analyze.add_argument('automata', nargs='*', metavar='DFA', help="DFA file, or '-' for stdin")
    analyze.add_argument('--json', action='store_true', help='Emit the report as JSON')

    op = commands.add_parser('op', parents=[inputs], help='Apply a language operation')
    operations = Executor().names
    op.add_argument('operation', choices=operations, metavar='NAME',
                    help=f"One of: {', '.join(operations)}")
    op.add_argument('automata', nargs='*', metavar='DFA', help="Operand files ('-' for stdin); -e operands follow")
    op.add_argument('-m', '--hom', metavar='FILE', help='Homomorphism file for hom/invhom')
    op.add_argument('-o', '--out', metavar='FILE', help='Write the result here instead of stdout')
    op.add_argument('--no-min', action='store_true',
                    help='Keep the raw construction; plus adds # subset comments')

    for name, text in (('min', 'Minimize'), ('show', 'Validate and re-serialize canonically')):
        command = commands.add_parser(name, parents=[inputs], help=text)
        command.add_argument('automata', nargs='*', metavar='DFA')
        command.add_argument('-o', '--out', metavar='FILE')

    eq = commands.add_parser('eq', parents=[inputs], help='Decide language equivalence')
    eq.add_argument('automata', nargs='*', metavar='DFA')

    enum = commands.add_parser('enum', parents=[inputs], help='List accepted words up to a length')
    enum.add_argument('automata', nargs='*', metavar='DFA')
    enum.add_argument('-n', '--max-len', type=int, required=True, metavar='N')

    embed_cmd = commands.add_parser('embed', parents=[inputs], help='Widen an automaton to a larger alphabet')
    embed_cmd.add_argument('automata', nargs='*', metavar='DFA')
    embed_cmd.add_argument('--to', required=True, metavar='SIGMA', help='Target alphabet, e.g. a,b,c')
    embed_cmd.add_argument('-o', '--out', metavar='FILE')

    witness = commands.add_parser('witness', help='Search for a counterexample to a closure claim')
    witness.add_argument('claim', choices=list(oracle.CLAIMS), metavar='CLAIM',
                         help=f"One of: {', '.join(oracle.CLAIMS)}")
    witness.add_argument('--max-states', type=int, metavar='N')
    witness.add_argument('--sigma', metavar='SIGMA')
    witness.add_argument('--max-image', type=int, metavar='M')
    witness.add_argument('--out', metavar='DIR', help='Write witness automata and witness.txt here')
    witness.add_argument('--workers', type=int, metavar='N')
    witness.add_argument('--budget-seconds', type=float, metavar='S')
    witness.add_argument('--json', action='store_true')

    suite = commands.add_parser('suite', help='Run the replication suite')
    suite.add_argument('--budget-seconds', type=float, metavar='S', help='Time budget per witness search')
    suite.add_argument('--max-states', type=int, metavar='N', help='Force witness searches to this bound')
    suite.add_argument('--max-image', type=int, metavar='M', help='Force homomorphism image length bound')
    suite.add_argument('--steps', nargs='+', choices=STEPS, metavar='STEP',
                       help=f"Subset of: {', '.join(STEPS)}")
    suite.add_argument('--samples', type=int, metavar='N', help='Random Kleene plus population size')
    suite.add_argument('--workers', type=int, metavar='N')
    suite.add_argument('--json', action='store_true')

    hierarchy = commands.add_parser('gen-hierarchy', help='Emit an automaton with so_index exactly K')
    hierarchy.add_argument('-k', type=int, required=True, metavar='K')
    hierarchy.add_argument('-o', '--out', metavar='FILE')

    log_cmd = commands.add_parser('log', help='Show recent runs from the run log')
    log_cmd.add_argument('--tail', type=int, default=10, metavar='N',
                         help='Number of log entries to show (default: 10)')
    log_cmd.add_argument('--stats', action='store_true', help='Show run counts by status and command')

    return parser


def load_operands(args) -> List[Dfa]:
    """Automata from file arguments, then from -e expressions"""
    operands = []
    for path in args.automata:
        text, source = read_source(path)
        operands.append(load_dfa(text, source, allow_partial=args.complete))
    if args.expr:
        if not args.alphabet:
            raise UsageError("-e needs -a to declare the alphabet")
        alphabet = parse_alphabet(args.alphabet)
        operands += [dfa_from_regex(text, alphabet) for text in args.expr]
    return operands


def expect_operands(args, count: int) -> List[Dfa]:
    operands = load_operands(args)
    if len(operands) != count:
        raise UsageError(f"{args.command} takes {count} automaton operand(s), got {len(operands)}")
    return operands


def cmd_analyze(args, settings: Settings) -> int:
    dfa, = expect_operands(args, 1)
    report = observability.analyze(dfa)
    write_output(report.to_json() if args.json else report.to_text())
    return EXIT_OK


def cmd_op(args, settings: Settings) -> int:
    executor = Executor(minimize_results=not args.no_min)
    operation = executor.lookup(args.operation)
    operands = load_operands(args)
    if len(operands) != operation.arity:
        raise UsageError(f"op {args.operation} takes {operation.arity} automaton operand(s), got {len(operands)}")

    hom = None
    if operation.needs_hom:
        if not args.hom:
            raise UsageError(f"op {args.operation} needs -m FILE")
        text, source = read_source(args.hom)
        target = operands[0].alphabet if args.operation == 'invhom' else None
        hom = load_homomorphism(text, source, target)

    if args.operation == 'plus' and args.no_min:
        subset_dfa = kleene_plus_steps(operands[0])['subset_dfa']
        write_output(dump_dfa(subset_dfa, label_names=operands[0].names), args.out)
        return EXIT_OK

    result = executor.execute(args.operation, operands, hom)
    write_output(dump_dfa(result), args.out)
    return EXIT_OK


def cmd_min(args, settings: Settings) -> int:
    dfa, = expect_operands(args, 1)
    write_output(dump_dfa(minimize(dfa)), args.out)
    return EXIT_OK


def cmd_show(args, settings: Settings) -> int:
    dfa, = expect_operands(args, 1)
    write_output(dump_dfa(dfa), args.out)
    return EXIT_OK


def cmd_eq(args, settings: Settings) -> int:
    left, right = expect_operands(args, 2)
    write_output(f"equivalent: {'true' if equivalent(left, right) else 'false'}\n")
    return EXIT_OK


def cmd_enum(args, settings: Settings) -> int:
    dfa, = expect_operands(args, 1)
    words = oracle.enumerate_language(dfa, args.max_len, limit=settings.max_enum_length)
    write_output(format_words(words))
    return EXIT_OK


def cmd_embed(args, settings: Settings) -> int:
    dfa, = expect_operands(args, 1)
    write_output(dump_dfa(embed(dfa, parse_alphabet(args.to))), args.out)
    return EXIT_OK


def cmd_gen_hierarchy(args, settings: Settings) -> int:
    write_output(dump_dfa(observability.hierarchy_witness(args.k)), args.out)
    return EXIT_OK


def write_witness(witness: oracle.Witness, directory: Path):
    """Witness automata in the DFA format plus the text report"""
    directory.mkdir(parents=True, exist_ok=True)
    for position, dfa in enumerate(witness.inputs, 1):
        (directory / f"input_{position}.dfa").write_text(dump_dfa(dfa), encoding='utf-8')
    if witness.homomorphism is not None:
        (directory / 'homomorphism.txt').write_text(str(witness.homomorphism), encoding='utf-8')
    (directory / 'result.dfa').write_text(dump_dfa(witness.result), encoding='utf-8')
    (directory / 'witness.txt').write_text(witness.to_text(), encoding='utf-8')


def cmd_witness(args, settings: Settings, run_log: Optional[logger.RunLogger]) -> int:
    if args.sigma is not None:
        parse_alphabet(args.sigma)
    task = oracle.make_task(
        args.claim,
        bounds_file=settings.bounds_file,
        max_states=args.max_states,
        sigma=args.sigma,
        max_image=args.max_image
    )
    logger.log('SEARCH', f"{task.claim_id} at {task.bounds.describe()}")
    start = time.monotonic()
    try:
        witness = oracle.find_witness(
            task,
            workers=args.workers or settings.workers,
            budget_seconds=args.budget_seconds,
            progress=lambda message: logger.log('SEARCH', message)
        )
    except BoundsExhausted as e:
        if run_log is not None:
            run_log.log_run('witness', vars(args), 'exhausted', str(e), time.monotonic() - start)
        raise

    if run_log is not None:
        run_log.log_run('witness', vars(args), 'success',
                        f"after_index {witness.after_index}", time.monotonic() - start)
    if args.out:
        write_witness(witness, Path(args.out))
    write_output(witness.to_json() if args.json else witness.to_text())
    return EXIT_OK


def cmd_suite(args, settings: Settings, run_log: Optional[logger.RunLogger]) -> int:
    runner = SuiteRunner(
        seed=settings.seed,
        random_samples=args.samples if args.samples is not None else settings.random_samples,
        pair_samples=settings.pair_samples,
        sweep_max_states=settings.sweep_max_states,
        budget_seconds=args.budget_seconds if args.budget_seconds is not None else settings.budget_seconds,
        witness_overrides={
            'bounds_file': settings.bounds_file,
            'max_states': args.max_states,
            'max_image': args.max_image,
        },
        workers=args.workers or settings.workers,
        progress=lambda message: logger.log('SUITE', message)
    )
    start = time.monotonic()
    report = runner.run(args.steps)
    if run_log is not None:
        status = 'success' if report.ok else 'error'
        detail = ', '.join(f"{key} {value}" for key, value in report.counts.items())
        run_log.log_run('suite', vars(args), status, detail, time.monotonic() - start)

    write_output(report.to_json() if args.json else report.to_text())
    if not report.ok:
        logger.error(f"suite assertion failed: {report.first_failure}")
        return EXIT_ASSERTION
    return EXIT_OK


def cmd_log(args, settings: Settings, run_log: Optional[logger.RunLogger]) -> int:
    if run_log is None:
        raise UsageError("run log is disabled; set OBSERVA_RUN_LOG to a database path")
    if args.stats:
        stats = run_log.get_statistics()
        lines = [
            f"total_runs: {stats['total_runs']}",
            f"successful: {stats['successful']}",
            f"exhausted: {stats['exhausted']}",
            f"failed: {stats['failed']}",
        ]
        lines += [f"command {command}: {count}" for command, count in stats['commands']]
        write_output(''.join(line + '\n' for line in lines))
        return EXIT_OK

    runs = run_log.get_recent_runs(args.tail)
    lines = [
        f"{run['id']} {run['timestamp']} {run['command']} {run['status']}"
        + (f" {run['detail']}" if run['detail'] else '')
        for run in runs
    ]
    write_output(''.join(line + '\n' for line in lines))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code"""
    load_dotenv()
    parser = build_parser()

    try:
        args = parser.parse_args(argv)
        settings = load_settings()
        logger.set_verbose(args.verbose or settings.verbose)
        run_log = logger.RunLogger(settings.run_log) if settings.run_log else None
        logger.log('CLI', f"command {args.command}")

        handlers = {
            'analyze': cmd_analyze,
            'op': cmd_op,
            'min': cmd_min,
            'show': cmd_show,
            'eq': cmd_eq,
            'enum': cmd_enum,
            'embed': cmd_embed,
            'gen-hierarchy': cmd_gen_hierarchy,
        }
        if args.command in handlers:
            return handlers[args.command](args, settings)
        if args.command == 'witness':
            return cmd_witness(args, settings, run_log)
        if args.command == 'suite':
            return cmd_suite(args, settings, run_log)
        return cmd_log(args, settings, run_log)

    except SystemExit as e:
        # --help and --version exit through argparse
        return e.code if isinstance(e.code, int) else EXIT_OK
    except UsageError as e:
        logger.error(str(e))
        return EXIT_USAGE
    except (FormatError, AlphabetMismatchError) as e:
        logger.error(str(e))
        return EXIT_FORMAT
    except BoundsExhausted as e:
        logger.error(str(e))
        return EXIT_BOUNDS
    except SelfCheckError as e:
        logger.error(f"self-check failed: {e}")
        return EXIT_ASSERTION
    except (ValueError, KeyError) as e:
        logger.error(str(e))
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
