"""
Flat-file storage for capacity tables and sampled curves.

Capacity tables are JSON (CapacityFile); curves are CSV with header
"z,<label1>,<label2>,..." and one row per sample point. Both writers are
byte-deterministic for fixed input.
"""

import csv
import io
from decimal import Decimal
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from pydantic import ValidationError

from core.echcap import CapacityTable
from core.errors import UsageError
from utils.logger import get_logger

from .models import CapacityFile, CurvePoint, CurveSeries

PathLike = Union[str, Path]


class FileStore:
    """
    Reads and writes the toolkit's file formats.

    Every write goes through a single text rendering so that identical
    inputs give identical bytes.
    """

    def __init__(self):
        """Initialize the store."""
        self.logger = get_logger()

        # Statistics
        self.stats = {
            'capacity_files_written': 0,
            'capacity_files_read': 0,
            'csv_files_written': 0,
            'csv_files_read': 0,
        }

    # ------------------------------------------------------------------
    # Capacity tables
    # ------------------------------------------------------------------

    def render_capacity_file(self, table: CapacityTable) -> str:
        return CapacityFile.from_table(table).model_dump_json(indent=2) + "\n"

    def write_capacity_file(self, table: CapacityTable, path: PathLike) -> Path:
        """Write the table as CapacityFile JSON."""
        path = Path(path)
        path.write_text(self.render_capacity_file(table), encoding='utf-8')
        self.stats['capacity_files_written'] += 1
        self.logger.info(f"Wrote {table.count + 1} capacities of {table.scale}*X_{table.b} to {path}")
        return path

    def read_capacity_file(self, path: PathLike) -> CapacityTable:
        """
        Load a CapacityFile.

        Raises:
            OSError: if the file cannot be read
            ValidationError: if the JSON does not match CapacityFile
        """
        path = Path(path)
        self.logger.info(f"Loading capacities from {path}")
        try:
            model = CapacityFile.model_validate_json(path.read_text(encoding='utf-8'))
        except FileNotFoundError:
            self.logger.error(f"Capacity file not found: {path}")
            raise
        except ValidationError as e:
            self.logger.error(f"Invalid capacity file {path}: {e}")
            raise
        self.stats['capacity_files_read'] += 1
        return model.to_table()

    # ------------------------------------------------------------------
    # Curves
    # ------------------------------------------------------------------

    def render_curve_csv(self, series: Sequence[CurveSeries]) -> str:
        """
        CSV text for one or more series.

        Series sampled at different points are merged on the union of their
        z values; a series without a sample at some z leaves that cell empty.

        Raises:
            UsageError: if no series is given
        """
        if not series:
            raise UsageError("at least one curve series is required")
        columns: List[Dict[str, str]] = []
        rows: Dict[Decimal, str] = {}
        for curve in series:
            column = {}
            for point in curve.points:
                rows.setdefault(Decimal(point.z), point.z)
                column[point.z] = point.value or ""
            columns.append(column)

        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["z"] + [curve.label for curve in series])
        for key in sorted(rows):
            z_text = rows[key]
            writer.writerow([z_text] + [column.get(z_text, "") for column in columns])
        return buffer.getvalue()

    def write_curve_csv(self, series: Sequence[CurveSeries], path: PathLike) -> Path:
        text = self.render_curve_csv(series)
        path = Path(path)
        path.write_text(text, encoding='utf-8')
        self.stats['csv_files_written'] += 1
        self.logger.info(f"Wrote {len(series)} series to {path}")
        return path

    def read_curve_csv(self, path: PathLike) -> List[CurveSeries]:
        """Parse a curve CSV back into one CurveSeries per value column."""
        path = Path(path)
        with open(path, 'r', encoding='utf-8', newline='') as f:
            reader = csv.reader(f)
            header = next(reader, None)
            if not header or header[0] != "z" or len(header) < 2:
                raise UsageError(f"{path} is not a curve CSV (header must be z,<label>...)")
            points: List[List[CurvePoint]] = [[] for _ in header[1:]]
            for row in reader:
                if not row:
                    continue
                for index, cell in enumerate(row[1:len(header)]):
                    if cell != "":
                        points[index].append(CurvePoint(z=row[0], value=cell))
        self.stats['csv_files_read'] += 1
        self.logger.debug(f"Read {len(header) - 1} series from {path}")
        return [CurveSeries(label=label, points=column) for label, column in zip(header[1:], points)]


def emit_curve_csv(series: Sequence[CurveSeries], path: Optional[PathLike]) -> str:
    """Render series as CSV, writing it to path when one is given."""
    store = FileStore()
    if path is None:
        return store.render_curve_csv(series)
    store.write_curve_csv(series, path)
    return Path(path).read_text(encoding='utf-8')
