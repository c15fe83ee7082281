"""
CSV and JSON emission of result tables.

CSV files start with '#' metadata lines (tool version, schema version and the
command that produced them) followed by a header row. Floats are written with
17 significant digits so every double survives a round trip.
"""

import csv
import io
import json
from typing import Dict, Iterable, List, Optional, Sequence, TextIO, Tuple

import tcoulomb.constants as constants
from tcoulomb.version import __version__


def format_value(value):
    if value is None:
        return ''
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.{constants.SIGNIFICANT_DIGITS}g}"
    if isinstance(value, (list, tuple)):
        return ' '.join(format_value(v) for v in value)
    return str(value)


def metadata(command: str) -> Dict[str, str]:
    return {
        'tool': f"{constants.PACKAGE_NAME} {__version__}",
        'schema': str(constants.CSV_SCHEMA_VERSION),
        'command': command,
    }


def write_csv(rows: Iterable[dict], columns: Sequence[str], stream: TextIO, command: str):
    for key, value in metadata(command).items():
        stream.write(f"# {key}: {value}\n")
    writer = csv.DictWriter(stream, fieldnames=list(columns), lineterminator='\n', extrasaction='ignore')
    writer.writeheader()
    for row in rows:
        writer.writerow({column: format_value(row.get(column)) for column in columns})


def _json_value(value):
    if isinstance(value, tuple):
        return [_json_value(v) for v in value]
    if isinstance(value, float) and value != value:
        return None
    return value


def write_json(rows: Iterable[dict], columns: Sequence[str], stream: TextIO, command: str, extra: Optional[dict] = None):
    document = dict(metadata(command))
    document['columns'] = list(columns)
    document['rows'] = [{column: _json_value(row.get(column)) for column in columns} for row in rows]
    if extra:
        document.update(extra)
    json.dump(document, stream, indent=2)
    stream.write('\n')


def write_table(rows: Iterable[dict], columns: Sequence[str], stream: TextIO, command: str,
                output_format: str = 'csv', extra: Optional[dict] = None):
    if output_format not in constants.OUTPUT_FORMATS:
        raise ValueError(f"unknown output format {output_format!r}; choose from {', '.join(constants.OUTPUT_FORMATS)}")
    rows = list(rows)
    if output_format == 'json':
        write_json(rows, columns, stream, command, extra)
    else:
        write_csv(rows, columns, stream, command)


def render_table(rows: Iterable[dict], columns: Sequence[str], command: str, output_format: str = 'csv',
                 extra: Optional[dict] = None) -> str:
    buffer = io.StringIO()
    write_table(rows, columns, buffer, command, output_format, extra)
    return buffer.getvalue()


def read_csv(stream: TextIO) -> Tuple[Dict[str, str], List[Dict[str, str]]]:
    """Metadata and rows (as strings) of a file written by write_csv."""
    meta = {}
    body = []
    for line in stream:
        if line.startswith('#'):
            key, _, value = line[1:].strip().partition(': ')
            meta[key] = value
        else:
            body.append(line)
    return meta, list(csv.DictReader(body))
