"""Reading observation tables."""

import csv
import math

from .errors import DataValidationError
from .runs import ObservationSeries

__all__ = ["COLUMNS", "read_observations"]

COLUMNS = ("x", "observed", "mean", "sigma")


def read_observations(path):
    """Load a CSV with header ``x,observed,mean,sigma`` into a series.

    Row numbers in errors count the header as row 1.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataValidationError(f"cannot read {path}: {exc.strerror}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataValidationError("empty file", row=1) from None
        except csv.Error as exc:
            raise DataValidationError(str(exc), row=1) from None
        header = [h.strip() for h in header]
        if sorted(header) != sorted(COLUMNS) or len(header) != len(COLUMNS):
            raise DataValidationError(f"header must be {','.join(COLUMNS)}, got {','.join(header)}", row=1)
        index = [header.index(c) for c in COLUMNS]
        columns = {c: [] for c in COLUMNS}
        try:
            for row in reader:
                lineno = reader.line_num
                if not row or all(not cell.strip() for cell in row):
                    continue
                if len(row) != len(COLUMNS):
                    raise DataValidationError(f"expected {len(COLUMNS)} cells, got {len(row)}", row=lineno)
                for name, i in zip(COLUMNS, index):
                    cell = row[i].strip()
                    if not cell:
                        raise DataValidationError(f"missing value in column {name!r}", row=lineno)
                    try:
                        value = float(cell)
                    except ValueError:
                        raise DataValidationError(f"column {name!r}: not a number: {cell!r}", row=lineno) from None
                    if not math.isfinite(value):
                        raise DataValidationError(f"column {name!r}: non-finite value {cell!r}", row=lineno)
                    if name == "sigma" and value <= 0:
                        raise DataValidationError(f"sigma must be positive, got {cell}", row=lineno)
                    columns[name].append(value)
        except csv.Error as exc:
            raise DataValidationError(str(exc), row=reader.line_num) from None
    if not columns["observed"]:
        raise DataValidationError("no observations", row=2)
    return ObservationSeries(columns["x"], columns["observed"], columns["mean"], columns["sigma"])
