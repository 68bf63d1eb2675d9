"""
SVG Plot Service

Draws curve series as one SVG figure with the palette from
config/plot_style.py. Output is byte-deterministic: the SVG id salt is
fixed and no date is written into the metadata.
"""

from itertools import cycle
from pathlib import Path
from typing import Iterator, List, Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from config.plot_style import (  # noqa: E402
    FALLBACK_COLORS,
    FIGURE_SIZE,
    GRID_ALPHA,
    LINE_WIDTH,
    OBSTRUCTION_COLORS,
    OBSTRUCTION_PREFIXES,
    ROLE_PREFIXES,
    SVG_HASH_SALT,
    X_LABEL,
    Y_LABEL,
)
from core.errors import UsageError  # noqa: E402
from ingest.file_store import FileStore  # noqa: E402
from ingest.models import CurveSeries  # noqa: E402
from utils.logger import get_logger  # noqa: E402

PathLike = Union[str, Path]


class PlotService:
    """Service for rendering CurveSeries to SVG."""

    def __init__(self):
        """Initialize the plot service."""
        self.logger = get_logger()
        self.store = FileStore()
        self.stats = {
            'figures_written': 0,
            'series_drawn': 0,
        }

    def color_for(self, label: str, obstruction_colors: Iterator[str], fallback_colors: Iterator[str]) -> str:
        """Role color from the label prefix; obstructions and unknown labels cycle their palettes."""
        lowered = label.lower()
        for prefix in sorted(ROLE_PREFIXES, key=len, reverse=True):
            if lowered.startswith(prefix):
                return ROLE_PREFIXES[prefix]
        if lowered.startswith(OBSTRUCTION_PREFIXES):
            return next(obstruction_colors)
        return next(fallback_colors)

    def render(self, series: Sequence[CurveSeries], path: PathLike) -> Path:
        """
        Write series as an SVG with one line per series and a legend.

        Raises:
            UsageError: if there is no series with at least one defined point;
                nothing is written in that case
        """
        drawable = [curve for curve in series if curve.defined_points()]
        if not drawable:
            raise UsageError("nothing to plot: no series has a defined point")

        path = Path(path)
        obstruction_colors = cycle(OBSTRUCTION_COLORS)
        fallback_colors = cycle(FALLBACK_COLORS)

        with plt.rc_context({'svg.hashsalt': SVG_HASH_SALT, 'svg.fonttype': 'path'}):
            fig, ax = plt.subplots(figsize=FIGURE_SIZE)
            try:
                for curve in drawable:
                    points = curve.defined_points()
                    xs = [float(point.z) for point in points]
                    ys = [float(point.value) for point in points]
                    color = self.color_for(curve.label, obstruction_colors, fallback_colors)
                    ax.plot(xs, ys, color=color, linewidth=LINE_WIDTH, label=curve.label)
                    self.logger.debug(f"Drew {curve.label!r} ({len(points)} points) in {color}")
                ax.set_xlabel(X_LABEL)
                ax.set_ylabel(Y_LABEL)
                ax.grid(True, alpha=GRID_ALPHA)
                ax.legend(loc="best")
                fig.savefig(path, format="svg", metadata={'Date': None})
            finally:
                plt.close(fig)

        self.stats['figures_written'] += 1
        self.stats['series_drawn'] += len(drawable)
        self.logger.info(f"Wrote {len(drawable)} series to {path}")
        return path

    def render_files(self, csv_paths: Sequence[PathLike], path: PathLike) -> Path:
        """Read every CSV and draw all their series into one SVG."""
        series: List[CurveSeries] = []
        for csv_path in csv_paths:
            series.extend(self.store.read_curve_csv(csv_path))
        return self.render(series, path)


def emit_svg(csv_paths: Sequence[PathLike], path: PathLike) -> Path:
    return PlotService().render_files(csv_paths, path)
