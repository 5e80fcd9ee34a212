"""Module to read published election polls into typed records.

    A poll table is a CSV document with the columns ``pollster,date,n``
    followed by one column per party id of the :class:`PartyRegistry`.
    Shares may be given as percentages or as fractions; the choice is
    detected once per file.

.. platform:: Unix, Windows, Mac
"""

import datetime
import io
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Tuple

import pandas as pd
from loguru import logger

from .errors import DataError, PollValidationError

DATA_DIR = Path(__file__).resolve().parent / "data"

# Committed fixture dataset and config schema example
POLLS_DATA_FILE = "polls_2018.csv"
CONFIG_DATA_FILE = "bundestag.cfg"

REQUIRED_COLUMNS = ("pollster", "date", "n")

# Tolerance used when checking that named shares do not exceed 100%
OVERSUM_TOLERANCE = 1e-6

_COLOR_PATTERN = re.compile(r"^#[0-9A-Fa-f]{6}$")
_PARSER_LINE = re.compile(r"line (\d+)")


def get_data_path(entity_name):
    """Return the path of a file shipped in the package ``data`` directory.

    :param str entity_name: File name inside ``koalition_py/data``.
    :rtype: :py:class:`pathlib.Path`
    """
    return DATA_DIR / entity_name


@dataclass(frozen=True)
class Party:
    id: str
    name: str
    color: str


@dataclass(frozen=True)
class PartyRegistry:
    """Ordered list of parties plus the id of the residual "other" bucket.

    :param parties: Tuple of :class:`Party` in registry order.
    :param other_bucket_id: Party id that collects the residual share. It must
        be the last party of ``parties``.
    """

    parties: Tuple[Party, ...]
    other_bucket_id: str

    def __post_init__(self):
        ids = [party.id for party in self.parties]
        if not ids:
            raise ValueError("registry needs at least one party")
        if any(not party_id for party_id in ids):
            raise ValueError("party ids must be non-empty")
        if len(set(ids)) != len(ids):
            raise ValueError("party ids must be unique")
        if self.other_bucket_id not in ids:
            raise ValueError(
                "other bucket %r is not a registered party" % self.other_bucket_id
            )
        if ids[-1] != self.other_bucket_id:
            raise ValueError("other bucket %r must be last" % self.other_bucket_id)
        for party in self.parties:
            if not _COLOR_PATTERN.match(party.color):
                raise ValueError(
                    "party %r has invalid color %r" % (party.id, party.color)
                )

    @classmethod
    def from_tuples(cls, rows, other_bucket_id):
        """Build a registry from ``(id, name, color)`` tuples."""
        return cls(tuple(Party(*row) for row in rows), other_bucket_id)

    @property
    def ids(self):
        return tuple(party.id for party in self.parties)

    @property
    def named_ids(self):
        """Party ids without the other bucket."""
        return self.ids[:-1]

    def index(self, party_id):
        return self.ids.index(party_id)

    def party(self, party_id):
        return self.parties[self.index(party_id)]

    def color(self, party_id):
        return self.party(party_id).color

    def __contains__(self, party_id):
        return party_id in self.ids

    def __len__(self):
        return len(self.parties)


@dataclass(frozen=True)
class Poll:
    """One published survey.

    ``shares`` maps party id to a fraction in [0, 1]. After
    :func:`validate_poll` it holds every registry party in registry order,
    the other bucket included, and the values add up to 1.
    """

    pollster: str
    publish_date: datetime.date
    sample_size: int
    shares: Mapping[str, float]


def validate_poll(poll, registry):
    """Check a poll against its invariants and assign the residual share.

    :param poll: The :class:`Poll` to check.
    :param registry: The :class:`PartyRegistry` the shares refer to.
    :return: A new poll whose ``shares`` cover every registry party, with
        ``1 - sum(named shares)`` routed to the other bucket.
    :rtype: :class:`Poll`
    :raises PollValidationError: listing every violated invariant
        (``oversum``, ``negative``, ``badsize``, ``unknown-party``).
    """
    errors = []
    unknown = [party_id for party_id in poll.shares if party_id not in registry]
    if unknown:
        errors.append("unknown-party")
    named = [
        float(poll.shares.get(party_id, 0.0)) for party_id in registry.named_ids
    ]
    if any(value < 0 for value in named):
        errors.append("negative")
    named_sum = math.fsum(named)
    if named_sum > 1 + OVERSUM_TOLERANCE:
        errors.append("oversum")
    if isinstance(poll.sample_size, bool) or int(poll.sample_size) < 1:
        errors.append("badsize")
    if errors:
        raise PollValidationError(errors)

    shares = dict(zip(registry.named_ids, named))
    shares[registry.other_bucket_id] = max(0.0, 1.0 - named_sum)
    return Poll(poll.pollster, poll.publish_date, int(poll.sample_size), shares)


def _parse_date(text, line, path):
    try:
        return datetime.date.fromisoformat(text.strip())
    except ValueError:
        raise DataError(
            "malformed date %r" % text, code="bad-date", path=path, line=line
        )


def _parse_number(text, column, line, path):
    try:
        return float(text)
    except ValueError:
        raise DataError(
            "column %r holds non-numeric value %r" % (column, text),
            code="bad-share",
            path=path,
            line=line,
        )


def _read_table(text, path):
    """Raw cells of a CSV document, one row per physical line, header included.

    Blank lines are kept as empty rows so row positions are line numbers.
    Missing trailing fields are NaN.
    """
    try:
        return pd.read_csv(
            io.StringIO(text),
            header=None,
            dtype=str,
            keep_default_na=False,
            skipinitialspace=True,
            skip_blank_lines=False,
        )
    except pd.errors.EmptyDataError:
        raise DataError("poll file is empty", code="empty-file", path=path, line=1)
    except pd.errors.ParserError as error:
        found = _PARSER_LINE.search(str(error))
        raise DataError(
            "malformed row: %s" % str(error).strip(),
            code="bad-row",
            path=path,
            line=int(found.group(1)) if found else None,
        )


def parse_polls(text, registry, path=None):
    """Parse a poll table into a list of validated polls.

    Shares are read as percentages when any party cell of the file is
    greater than 1 and as fractions otherwise.

    :param str text: CSV document (UTF-8, comma separated, ``.`` decimals).
    :param registry: The :class:`PartyRegistry` naming the party columns.
    :param path: Optional file name used in error messages.
    :return: Polls sorted by publish date, ascending.
    :rtype: :py:class:`list` of :class:`Poll`
    :raises DataError: On unknown or missing columns and on malformed rows
        (the error carries the 1-based line number).
    """
    table = _read_table(text, path)
    if table.empty:
        raise DataError("poll file is empty", code="empty-file", path=path, line=1)
    columns = [str(name).strip() for name in table.iloc[0]]
    duplicated = sorted({name for name in columns if columns.count(name) > 1})
    if duplicated:
        raise DataError(
            "duplicate column(s): %s" % ", ".join(duplicated),
            code="duplicate-column",
            path=path,
            line=1,
        )
    missing = [name for name in REQUIRED_COLUMNS if name not in columns]
    if missing:
        raise DataError(
            "missing column(s): %s" % ", ".join(missing),
            code="missing-column",
            path=path,
            line=1,
        )
    party_columns = [name for name in columns if name not in REQUIRED_COLUMNS]
    unknown = [name for name in party_columns if name not in registry]
    if unknown:
        raise DataError(
            "unknown party column(s): %s" % ", ".join(unknown),
            code="unknown-party",
            path=path,
            line=1,
        )
    absent = [name for name in registry.named_ids if name not in party_columns]
    if absent:
        raise DataError(
            "party column(s) missing: %s" % ", ".join(absent),
            code="missing-column",
            path=path,
            line=1,
        )

    rows = []
    for position in range(1, len(table)):
        line = position + 1
        cells = table.iloc[position].tolist()
        present = [cell for cell in cells if isinstance(cell, str)]
        if not "".join(present).strip():
            continue
        if len(present) != len(columns):
            raise DataError(
                "expected %d fields, saw %d" % (len(columns), len(present)),
                code="bad-row",
                path=path,
                line=line,
            )
        record = dict(zip(columns, cells))
        values = {
            name: _parse_number(record[name], name, line, path)
            for name in party_columns
        }
        rows.append((line, record, values))

    percentages = any(
        value > 1 for _, _, values in rows for value in values.values()
    )
    scale = 100.0 if percentages else 1.0

    polls = []
    for line, record, values in rows:
        publish_date = _parse_date(record["date"], line, path)
        try:
            sample_size = int(record["n"])
        except ValueError:
            raise DataError(
                "sample size %r is not an integer" % record["n"],
                code="badsize",
                path=path,
                line=line,
            )
        # The other bucket is always the residual, never read from the file
        shares = {
            name: values[name] / scale
            for name in party_columns
            if name != registry.other_bucket_id
        }
        raw = Poll(record["pollster"].strip(), publish_date, sample_size, shares)
        try:
            polls.append(validate_poll(raw, registry))
        except PollValidationError as error:
            error.path = path
            error.line = line
            raise

    logger.debug(
        "parsed {} polls ({})", len(polls), "percent" if percentages else "fraction"
    )
    return sorted(polls, key=lambda poll: poll.publish_date)


def read_polls(path, registry):
    """Read and parse a poll table from a file.

    :param path: File system path of the CSV file.
    :param registry: The :class:`PartyRegistry` naming the party columns.
    :rtype: :py:class:`list` of :class:`Poll`
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as error:
        raise DataError(
            "cannot read poll file: %s" % error.strerror, code="io", path=path
        )
    return parse_polls(text, registry, path=path)


def polls_to_frame(polls, registry):
    """Tabulate polls in a Data Frame, one row per poll and one column per party.

    :rtype: :py:class:`pd.DataFrame`
    """
    records = []
    for poll in polls:
        record = {
            "pollster": poll.pollster,
            "date": poll.publish_date.isoformat(),
            "n": poll.sample_size,
        }
        for party_id in registry.named_ids:
            record[party_id] = poll.shares.get(party_id, 0.0)
        records.append(record)
    columns = list(REQUIRED_COLUMNS) + list(registry.named_ids)
    return pd.DataFrame(records, columns=columns)


def serialize_polls(polls, registry):
    """Write polls in the ingest CSV format, shares as fractions.

    Floats are written with ``repr`` so parsing the output reproduces the
    shares bit for bit.

    :rtype: :py:class:`str`
    """
    frame = polls_to_frame(polls, registry)
    for party_id in registry.named_ids:
        frame[party_id] = [repr(float(value)) for value in frame[party_id]]
    return frame.to_csv(index=False, lineterminator="\n")
