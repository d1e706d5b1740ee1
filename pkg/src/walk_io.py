"""
Walk JSON interchange: {"n": int, "moves": "rook"|"king", "cells": [[row, col], ...]}.
Used by every CLI subcommand for input and output.
"""

import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Sequence, Union

from src.exceptions import PreconditionError, WalkFormatError
from src.grid_core import GridSpec, MoveSet, Walk

logger = logging.getLogger(__name__)


def walk_to_dict(walk: Walk) -> Dict:
    """
    Serialize a walk with a fixed field order.

    Args:
        walk: Walk to serialize

    Returns:
        Dictionary with keys n, moves, cells (in that order)
    """
    return {
        'n': walk.grid.n,
        'moves': walk.grid.moves.value,
        'cells': [cell.to_list() for cell in walk.cells],
    }


def dumps_walk(walk: Walk) -> str:
    return json.dumps(walk_to_dict(walk))


def walk_from_dict(data: Dict) -> Walk:
    """
    Parse a Walk JSON object. The walk is not validated here.

    Args:
        data: Decoded JSON object

    Returns:
        Parsed Walk
    """
    if not isinstance(data, dict):
        raise WalkFormatError("Walk JSON must be an object")

    missing = [key for key in ('n', 'cells') if key not in data]
    if missing:
        raise WalkFormatError(f"Walk JSON is missing field(s): {', '.join(missing)}")

    try:
        grid = GridSpec(int(data['n']), MoveSet(str(data.get('moves', 'rook')).lower()))
    except (ValueError, TypeError, PreconditionError) as e:
        raise WalkFormatError(f"Invalid grid in walk JSON: {str(e)}") from e

    cells = data['cells']
    if not isinstance(cells, list) or not cells:
        raise WalkFormatError("Walk JSON 'cells' must be a non-empty list")

    pairs = []
    for position, pair in enumerate(cells):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise WalkFormatError(f"cells[{position}] must be a [row, col] pair")
        if not all(isinstance(value, int) and not isinstance(value, bool) for value in pair):
            raise WalkFormatError(f"cells[{position}] must contain integers")
        pairs.append(pair)

    return Walk.of(grid, pairs)


def loads_walk(text: str) -> Walk:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise WalkFormatError(f"Walk input is not valid JSON: {str(e)}") from e
    return walk_from_dict(data)


def load_walk(source: Union[str, Path]) -> Walk:
    """
    Read a walk from a file path, or from stdin when the path is '-'.

    Args:
        source: File path or '-'

    Returns:
        Parsed Walk
    """
    if str(source) == '-':
        text = sys.stdin.read()
    else:
        try:
            text = Path(source).read_text(encoding='utf-8')
        except OSError as e:
            raise WalkFormatError(f"Could not read walk file {source}: {str(e)}") from e

    walk = loads_walk(text)
    logger.debug(f"Loaded {len(walk)}-cell walk on {walk.grid.n}x{walk.grid.n} from {source}")
    return walk


def load_walks(sources: Sequence[Union[str, Path]]) -> List[Walk]:
    return [load_walk(source) for source in sources]
