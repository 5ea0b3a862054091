# Copyright 2024 The vqaopt Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Functionality for processing inputs and outputs."""
import csv
from datetime import datetime
import json
import logging
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

from .exceptions import ParseError, WriteError

LOGGER = logging.getLogger(__name__)

TIMESTAMP_FORMAT = '%Y-%m-%dT%H:%M'

PathLike = Union[str, Path]


def str_to_datetime(string: str,
                    line: Optional[int] = None,
                    field: Optional[str] = None) -> datetime:
    """Convert a string to a minute-resolution datetime.

    First tries the compact ISO 8601 form without seconds
    ('2024-03-04T08:00'), then any form accepted by
    `datetime.fromisoformat()`. Seconds are dropped.

    Raises:
        vqaopt.exceptions.ParseError: If the string is not a timestamp.
    """
    try:
        dt = datetime.strptime(string, TIMESTAMP_FORMAT)
    except (TypeError, ValueError):
        LOGGER.debug(f'{string} does not match format {TIMESTAMP_FORMAT}')
        try:
            dt = datetime.fromisoformat(string)
        except (TypeError, ValueError):
            raise ParseError(f'{string!r} is not an ISO 8601 timestamp',
                             line=line,
                             field=field)
    return dt.replace(second=0, microsecond=0, tzinfo=None)


def datetime_to_str(dt: datetime) -> str:
    return dt.strftime(TIMESTAMP_FORMAT)


def dump_json(obj: Any) -> str:
    """Serialize as UTF-8 JSON with 2-space indent and sorted keys."""
    return json.dumps(obj, indent=2, sort_keys=True) + '\n'


def write_text(path: PathLike, text: str):
    """Write a text file, creating parent directories.

    Raises:
        vqaopt.exceptions.WriteError: If the file cannot be written.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding='utf-8')
    except OSError as e:
        raise WriteError(path, e.strerror or str(e))
    LOGGER.info(f'Wrote {path}.')


def write_json(path: PathLike, obj: Any):
    write_text(path, dump_json(obj))


def write_jsonl(path: PathLike, rows: Iterable[Any]):
    write_text(path, ''.join(json.dumps(r, sort_keys=True) + '\n' for r in rows))


def write_tsv(path: PathLike,
              header: Sequence[str],
              rows: Iterable[Sequence[Any]]):
    """Write a tab-separated table with a header line.

    Floats are written with `repr` precision so tables reload exactly.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', newline='', encoding='utf-8') as f:
            writer = csv.writer(f, delimiter='\t', lineterminator='\n')
            writer.writerow(header)
            for row in rows:
                writer.writerow([_cell(v) for v in row])
    except OSError as e:
        raise WriteError(path, e.strerror or str(e))
    LOGGER.info(f'Wrote {path}.')


def read_tsv(path: PathLike) -> list:
    """Rows of a tab-separated table as dicts keyed by the header."""
    with open(path, newline='', encoding='utf-8') as f:
        return list(csv.DictReader(f, delimiter='\t'))


def _cell(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(value, sort_keys=True)
    return str(value)
