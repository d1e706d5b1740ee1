"""
Command-line entry point for GridWalk.
Subcommands construct, enumerate, check, pairs, length, chain, render and
ledger; JSON results on stdout, diagnostics on stderr.
"""

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from dotenv import load_dotenv

from src.constructor import ConstructionRequest, WalkConstructor
from src.enumerator import EnumerationQuery, WalkEnumerator
from src.exceptions import (
    BoundsError, ChainError, PreconditionError, ResourceLimitError,
    WalkFormatError, WalkValidationError,
)
from src.existence import (
    KNOWN_DISCREPANCIES, audit, classify_pair, current_ledger,
    full_cover_discrepancy, king_count_discrepancies, pairs_report,
)
from src.grid_core import Cell, Direction, GridSpec, MoveSet, require_valid
from src.rectifiable import (
    Chain, concatenate, path_length, polyline_of_walk, step_breakdown, total_variation,
)
from src.svg_renderer import RenderSpec, render_svg
from src.walk_io import load_walk, load_walks, walk_to_dict

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DISAGREEMENT = 1
EXIT_INFEASIBLE = 2
EXIT_RESOURCE = 3
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_SOFTWARE = 70


class UsageError(Exception):
    """Raised instead of argparse's own exit so main() controls the exit code."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: error: {message}")


def _emit(data: Any) -> None:
    print(json.dumps(data))


class GridWalkCli:
    """Runs one subcommand against a constructor and an enumerator."""

    def __init__(self, constructor: Optional[WalkConstructor] = None,
                 enumerator: Optional[WalkEnumerator] = None):
        self.constructor = constructor or WalkConstructor()
        self.enumerator = enumerator or WalkEnumerator()

    def cmd_construct(self, args: argparse.Namespace) -> int:
        request = ConstructionRequest(GridSpec(args.n), args.start, args.dir, args.target)
        walk = self.constructor.construct(request)
        if walk is None:
            print(f"infeasible: no full-cover walk {request.start} -> {request.target} on "
                  f"{args.n}x{args.n}; run `check --n {args.n} --a {args.start.row},{args.start.col} "
                  f"--b {args.target.row},{args.target.col}` to audit this pair", file=sys.stderr)
            return EXIT_INFEASIBLE
        _emit(walk_to_dict(walk))
        return EXIT_OK

    def cmd_enumerate(self, args: argparse.Namespace) -> int:
        grid = GridSpec(args.n, args.moves)
        if args.start is None:
            if args.end is not None:
                raise UsageError("enumerate: --end requires --start")
            _emit(self._breakdown(grid, args))
            return EXIT_OK

        query = EnumerationQuery(grid, args.start, args.end, args.paths, args.limit, args.prune)
        result = self.enumerator.run(query, force=args.force)
        output = result.to_dict(query)

        if grid.moves is MoveSet.ROOK and args.end is None:
            discrepancy = full_cover_discrepancy(grid, args.start, result.max_steps)
            if discrepancy is not None:
                output['discrepancy'] = discrepancy.to_dict()
        _emit(output)
        return EXIT_OK

    def _breakdown(self, grid: GridSpec, args: argparse.Namespace) -> Dict:
        started = time.time()
        summaries = self.enumerator.class_breakdown(grid, prune=args.prune, force=args.force)
        output = {
            'n': grid.n,
            'moves': grid.moves.value,
            'classes': [summary.to_dict() for summary in summaries],
            'total': sum(summary.subtotal for summary in summaries),
        }
        if grid.n == 3 and grid.moves is MoveSet.KING:
            output['discrepancies'] = [d.to_dict() for d in king_count_discrepancies(summaries)]
        logger.info(f"Class breakdown for {grid.n}x{grid.n} {grid.moves.value} "
                    f"in {time.time() - started:.2f}s")
        return output

    def cmd_check(self, args: argparse.Namespace) -> int:
        grid = GridSpec(args.n)
        claim = classify_pair(grid, args.a, args.b)
        verdict = audit(claim, self.enumerator, require=args.force,
                        max_n=args.n if args.force else None)
        _emit(verdict.to_dict())
        return EXIT_DISAGREEMENT if verdict.disagrees else EXIT_OK

    def cmd_pairs(self, args: argparse.Namespace) -> int:
        _emit(pairs_report(args.n))
        return EXIT_OK

    def cmd_length(self, args: argparse.Namespace) -> int:
        walk = require_valid(load_walk(args.walk))
        polyline = polyline_of_walk(walk)
        straight, diagonal = step_breakdown(walk)
        output = {
            'length': path_length(polyline),
            'steps': walk.steps,
            'straight_steps': straight,
            'diagonal_steps': diagonal,
        }
        output.update(total_variation(polyline).to_dict())
        _emit(output)
        return EXIT_OK

    def cmd_chain(self, args: argparse.Namespace) -> int:
        walks = [require_valid(walk) for walk in load_walks(args.walks)]
        chain = Chain(tuple(walks))
        output = concatenate(chain).to_dict()
        output['segments'] = len(chain.segments)
        output['closed'] = chain.is_closed
        _emit(output)
        return EXIT_OK

    def cmd_render(self, args: argparse.Namespace) -> int:
        walk = require_valid(load_walk(args.walk))
        spec = RenderSpec(
            cell_px=args.cell_px,
            show_grid=not args.no_grid,
            start_marker=not args.no_markers,
            end_marker=not args.no_markers,
        )
        svg = render_svg(polyline_of_walk(walk), walk.grid.n, spec)
        if args.out:
            Path(args.out).write_text(svg, encoding='utf-8')
            logger.info(f"Wrote SVG to {args.out}")
            _emit({'out': str(args.out), 'bytes': len(svg.encode('utf-8'))})
        else:
            sys.stdout.write(svg)
        return EXIT_OK

    def cmd_ledger(self, args: argparse.Namespace) -> int:
        ledger = current_ledger(self.enumerator)
        matches = ledger == KNOWN_DISCREPANCIES
        _emit({
            'ledger': [entry.to_dict() for entry in ledger],
            'matches_known': matches,
        })
        if not matches:
            logger.error("Discrepancy ledger differs from the committed one")
            return EXIT_DISAGREEMENT
        return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog='gridwalk', description='Maximum self-avoiding walks on n x n grids')
    commands = parser.add_subparsers(dest='command', required=True)

    construct = commands.add_parser('construct', help='Build a maximum walk')
    construct.add_argument('--n', type=int, required=True)
    construct.add_argument('--start', type=Cell.parse, required=True, metavar='R,C')
    construct.add_argument('--dir', type=Direction.parse, metavar='N|E|S|W')
    construct.add_argument('--target', type=Cell.parse, metavar='R,C')
    construct.set_defaults(handler=GridWalkCli.cmd_construct)

    enumerate_ = commands.add_parser('enumerate', help='Count maximum walks exhaustively')
    enumerate_.add_argument('--n', type=int, required=True)
    enumerate_.add_argument('--moves', type=MoveSet, choices=list(MoveSet), default=MoveSet.ROOK)
    enumerate_.add_argument('--start', type=Cell.parse, metavar='R,C')
    enumerate_.add_argument('--end', type=Cell.parse, metavar='R,C')
    enumerate_.add_argument('--paths', action='store_true', help='Include the maximum walks')
    enumerate_.add_argument('--limit', type=int, help='Cap on included walks')
    enumerate_.add_argument('--prune', action='store_true', help='Count-preserving pruning')
    enumerate_.add_argument('--workers', type=int, help='Process-pool size')
    enumerate_.add_argument('--force', action='store_true', help='Override the resource guard')
    enumerate_.set_defaults(handler=GridWalkCli.cmd_enumerate)

    check = commands.add_parser('check', help='Audit a pair claim against the oracle')
    check.add_argument('--n', type=int, required=True)
    check.add_argument('--a', type=Cell.parse, required=True, metavar='R,C')
    check.add_argument('--b', type=Cell.parse, required=True, metavar='R,C')
    check.add_argument('--force', action='store_true', help='Audit above the size limit')
    check.set_defaults(handler=GridWalkCli.cmd_check)

    pairs = commands.add_parser('pairs', help='Closed-form pair count vs enumeration')
    pairs.add_argument('--n', type=int, required=True)
    pairs.set_defaults(handler=GridWalkCli.cmd_pairs)

    length = commands.add_parser('length', help='Polygonal length of a walk')
    length.add_argument('walk', help="Walk JSON file, or '-' for stdin")
    length.set_defaults(handler=GridWalkCli.cmd_length)

    chain = commands.add_parser('chain', help='Concatenate endpoint-sharing walks')
    chain.add_argument('walks', nargs='+', help='Walk JSON files in chain order')
    chain.set_defaults(handler=GridWalkCli.cmd_chain)

    render = commands.add_parser('render', help='Render a walk as SVG')
    render.add_argument('walk', help="Walk JSON file, or '-' for stdin")
    render.add_argument('--cell-px', type=int, default=40)
    render.add_argument('--no-grid', action='store_true')
    render.add_argument('--no-markers', action='store_true')
    render.add_argument('--out', help='SVG file to write (stdout when omitted)')
    render.set_defaults(handler=GridWalkCli.cmd_render)

    ledger = commands.add_parser('ledger', help='Recompute the known discrepancy ledger')
    ledger.set_defaults(handler=GridWalkCli.cmd_ledger)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, run the subcommand and map errors to exit codes.

    Args:
        argv: Arguments without the program name (sys.argv[1:] when None)

    Returns:
        Process exit code
    """
    load_dotenv()
    logging.basicConfig(
        level=os.getenv('LOG_LEVEL', 'WARNING').upper(),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cli = GridWalkCli(enumerator=WalkEnumerator(workers=getattr(args, 'workers', None)))
        return args.handler(cli, args)

    except UsageError as e:
        print(parser.format_usage(), end='', file=sys.stderr)
        print(str(e), file=sys.stderr)
        return EXIT_USAGE

    except (BoundsError, PreconditionError) as e:
        print(f"error: {str(e)}", file=sys.stderr)
        return EXIT_USAGE

    except WalkValidationError as e:
        print(json.dumps(e.report.to_dict()), file=sys.stderr)
        return EXIT_DATA

    except (WalkFormatError, ChainError) as e:
        print(f"error: {str(e)}", file=sys.stderr)
        return EXIT_DATA

    except ResourceLimitError as e:
        print(f"error: {str(e)}", file=sys.stderr)
        return EXIT_RESOURCE

    except Exception as e:
        logger.error(f"Command failed: {str(e)}")
        return EXIT_SOFTWARE


if __name__ == '__main__':
    sys.exit(main())
