"""
SVG output for walks and chains: grid lines, the path polyline and
start/end markers. Output text is stable for a given input.
"""

import logging
from dataclasses import dataclass
from typing import List

from src.exceptions import PreconditionError
from src.rectifiable import Polyline

logger = logging.getLogger(__name__)

MIN_CELL_PX = 8


@dataclass(frozen=True)
class RenderSpec:
    """Drawing options."""
    cell_px: int = 40
    show_grid: bool = True
    start_marker: bool = True
    end_marker: bool = True

    def __post_init__(self):
        if self.cell_px < MIN_CELL_PX:
            raise PreconditionError(f"cell_px must be at least {MIN_CELL_PX}, got {self.cell_px}")


def _fmt(value: float) -> str:
    text = f"{value:.2f}".rstrip('0').rstrip('.')
    return text or '0'


def render_svg(polyline: Polyline, side: int, spec: RenderSpec = RenderSpec()) -> str:
    """
    Render a polyline on a side x side grid as SVG 1.1 text.

    Args:
        polyline: Path in cell units (row axis pointing down)
        side: Grid side in cells
        spec: Drawing options

    Returns:
        SVG document as a string
    """
    if side < 1:
        raise PreconditionError(f"Grid side must be positive, got {side}")

    px = spec.cell_px
    size = side * px
    parts: List[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
    ]

    if spec.show_grid:
        for k in range(side + 1):
            offset = k * px
            parts.append(f'<line x1="{offset}" y1="0" x2="{offset}" y2="{size}" '
                         f'stroke="#cccccc" stroke-width="1"/>')
            parts.append(f'<line x1="0" y1="{offset}" x2="{size}" y2="{offset}" '
                         f'stroke="#cccccc" stroke-width="1"/>')

    points = ' '.join(f"{_fmt(x * px)},{_fmt(y * px)}" for x, y in polyline.knots)
    parts.append(f'<polyline points="{points}" fill="none" stroke="#1f77b4" '
                 f'stroke-width="{_fmt(px / 8)}" stroke-linejoin="round" stroke-linecap="round"/>')

    radius = _fmt(px / 5)
    if spec.start_marker:
        x, y = polyline.knots[0]
        parts.append(f'<circle cx="{_fmt(x * px)}" cy="{_fmt(y * px)}" r="{radius}" fill="#2ca02c"/>')
    if spec.end_marker:
        x, y = polyline.knots[-1]
        parts.append(f'<circle cx="{_fmt(x * px)}" cy="{_fmt(y * px)}" r="{radius}" fill="#d62728"/>')

    parts.append('</svg>')
    logger.debug(f"Rendered {len(polyline)} knots on a {side}x{side} grid at {px}px per cell")
    return '\n'.join(parts) + '\n'
