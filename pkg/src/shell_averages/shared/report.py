"""
Output helpers: exact values as strings, JSON and CSV writers, report files
and the packaged reference values.
"""
import csv
import json
import logging
from datetime import datetime
from fractions import Fraction
from pathlib import Path
from typing import Iterable, TextIO

from shell_averages.shared.config import DECIMAL_DIGITS, REFERENCE_VALUES_FILE
from shell_averages.shared.numerics import QuadraticSum

logger = logging.getLogger(__name__)


def exact_string(value) -> str:
    """'p/q' (or a sum of square roots) for any exact value."""
    if isinstance(value, bool):
        raise TypeError("Booleans are not exact values")
    if isinstance(value, (int, Fraction)):
        return str(Fraction(value))
    return str(QuadraticSum.coerce(value))


def value_record(value, decimal: bool = False, digits: int = DECIMAL_DIGITS) -> dict:
    """{"exact": ...} plus a lossy "decimal" entry when requested."""
    record = {"exact": exact_string(value)}
    if decimal:
        record["decimal"] = QuadraticSum.coerce(value).to_decimal(digits)
    return record


def dump_json(data, stream: TextIO) -> None:
    stream.write(json.dumps(data, indent=2, ensure_ascii=False))
    stream.write("\n")


def write_csv(rows: Iterable[Iterable], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    for row in rows:
        writer.writerow(row)


def save_report(data: dict, output_path: Path) -> bool:
    """Write a JSON report file stamped with the current time."""
    stamped = {"timestamp": datetime.now().isoformat(), **data}
    try:
        with open(output_path, "w", encoding="utf-8") as f:
            json.dump(stamped, f, indent=2)
    except OSError as e:
        logger.error(f"Failed to save report: {e}")
        return False
    logger.info(f"Report written to {output_path}")
    return True


def load_reference_values() -> dict:
    """Published reference counts shipped in the package data directory."""
    path = Path(__file__).parent.parent / "data" / REFERENCE_VALUES_FILE
    with open(path, encoding="utf-8") as f:
        return json.load(f)
