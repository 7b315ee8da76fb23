"""Helper package for qpurity: console tables and Simpson quadrature weights."""
import math
import shutil
import sys
from typing import Optional, Sized, Tuple

import numpy as np

from qpurity.defaults import DEFAULT_GRID_STYLE


def get_maxcolwidth(headers: Sized, wrap=True) -> Optional[int]:
    """Calculate the maximum column width for a given terminal width."""
    if not wrap:
        return None
    width = shutil.get_terminal_size()[0]
    columns = len(headers)
    if width < 80:
        padding = columns + 2
    elif width < 120:
        padding = columns - 2
    else:
        padding = columns - 4
    maxcolwidth = (width // columns) - padding
    return max(maxcolwidth, 1)


def get_style(style: str = DEFAULT_GRID_STYLE) -> str:
    """Select the tablefmt style for tabulate according to what sys.stdout can handle."""
    if style == DEFAULT_GRID_STYLE:
        encoding = sys.stdout.encoding
        # StringIO has encoding=None, but it handles utf-8 fine.
        if encoding is not None and encoding.lower() not in ("utf-8", "utf8"):
            style = "grid"
    return style


def even_intervals(length: float, max_spacing: float, minimum: int = 2) -> int:
    """Smallest even number of intervals covering `length` with spacing ≤ `max_spacing`."""
    intervals = max(minimum, int(math.ceil(length / max_spacing - 1e-9)))
    return intervals + (intervals % 2)


def simpson_weights(intervals: int, spacing: float) -> np.ndarray:
    """
    Composite Simpson weights for `intervals + 1` evenly spaced nodes.

    :param intervals: An even, positive number of intervals.
    :param spacing: The node spacing.
    :return: The weight vector, so that ``weights @ f(nodes)`` is the integral.
    """
    if intervals < 2 or intervals % 2:
        raise ValueError(f"Simpson needs an even number of intervals, got {intervals}.")
    weights = np.full(intervals + 1, 2.0)
    weights[1::2] = 4.0
    weights[0] = weights[-1] = 1.0
    return weights * (spacing / 3.0)


def folded_grid(half_width: float, intervals: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Symmetric grid on [-half_width, half_width] with a node at zero.

    The weights are two Simpson rules joined at zero, so integrands with a
    kink at the origin (like |t|) keep full order.

    :return: (nodes, weights) with ``2 * intervals + 1`` entries.
    """
    spacing = half_width / intervals
    half = simpson_weights(intervals, spacing)
    weights = np.concatenate([half[:-1], [2.0 * half[-1]], half[1:]])
    nodes = np.linspace(-half_width, half_width, 2 * intervals + 1)
    return nodes, weights
