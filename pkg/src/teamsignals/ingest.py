"""File ingestion: interaction logs, team rosters, dependent variables.

Canonical on-disk formats (all UTF-8, LF or CRLF):

* ``events.csv``   header ``timestamp,sender,recipients``; multiple
  recipients are separated by ``;`` and expand to one event each.
* ``events.jsonl`` one object per line: ``{"timestamp": ..., "sender": ...,
  "recipients": [...]}``.
* ``teams.csv``    header ``team_id,member``.
* ``depvars.csv``  header ``team_id,variable_name,value``.

Timestamps are RFC 3339 strings or integer epoch seconds; the style is
auto-detected from the first row and then enforced for the whole file, since
mixed per-row formats usually indicate corruption.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .model import ActorId, EventLog, InteractionEvent, Team, normalize_actor


class ParseError(ValueError):
    """Malformed input file; message names the file and line."""

    def __init__(self, path, line: int | None, message: str) -> None:
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")
        self.path = str(path)
        self.line = line


@dataclass(frozen=True)
class DependentVariableTable:
    """Per-team outcome values keyed by (team_id, variable_name)."""

    values: dict[tuple[str, str], float]

    def variable_names(self) -> list[str]:
        return sorted({name for _, name in self.values})

    def get(self, team_id: str, variable_name: str) -> float | None:
        return self.values.get((team_id, variable_name))


def _parse_rfc3339(text: str) -> int:
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    dt = datetime.fromisoformat(raw)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    # second resolution: sub-second input is truncated
    return int(dt.replace(microsecond=0).timestamp())


def _timestamp_parser(sample: str):
    """Pick the epoch-seconds or RFC 3339 parser based on one sample value."""
    try:
        int(sample.strip())
    except ValueError:
        return _parse_rfc3339
    return lambda text: int(text.strip())


def _expand_row(
    ts_text: str,
    sender_text: str,
    recipient_texts: list[str],
    parse_ts,
    path,
    line: int,
) -> list[InteractionEvent]:
    try:
        ts = parse_ts(ts_text)
    except (ValueError, OverflowError, OSError) as exc:
        raise ParseError(path, line, f"malformed timestamp {ts_text!r}: {exc}") from None
    try:
        sender = normalize_actor(sender_text)
        recipients = [normalize_actor(r) for r in recipient_texts]
    except ValueError as exc:
        raise ParseError(path, line, str(exc)) from None
    if not recipients:
        raise ParseError(path, line, "row has no recipients")
    return [InteractionEvent(sender, r, ts) for r in recipients]


def parse_events(path, fmt: str | None = None) -> list[InteractionEvent]:
    """Read raw events from a csv or jsonl file, in file order.

    ``fmt`` is "csv" or "jsonl"; when omitted it is inferred from the file
    suffix. A row with k recipients expands to k events sharing sender and
    timestamp. No sorting or deduplication happens here; feed the result to
    ``model.validate_log``.
    """
    path = Path(path)
    if fmt is None:
        fmt = "jsonl" if path.suffix.lower() in (".jsonl", ".ndjson") else "csv"
    if fmt == "csv":
        return _parse_events_csv(path)
    if fmt == "jsonl":
        return _parse_events_jsonl(path)
    raise ParseError(path, None, f"unknown events format {fmt!r}")


def _parse_events_csv(path: Path) -> list[InteractionEvent]:
    events: list[InteractionEvent] = []
    parse_ts = None
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParseError(path, None, "empty file")
        cols = [c.strip().lower() for c in header]
        if cols[:3] != ["timestamp", "sender", "recipients"]:
            raise ParseError(path, 1, f"expected header timestamp,sender,recipients, got {header}")
        for row in reader:
            line = reader.line_num
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < 3:
                raise ParseError(path, line, f"expected 3 columns, got {len(row)}")
            if parse_ts is None:
                parse_ts = _timestamp_parser(row[0])
            recipients = [part for part in row[2].split(";") if part.strip()]
            if not recipients:
                raise ParseError(path, line, "row has no recipients")
            events.extend(_expand_row(row[0], row[1], recipients, parse_ts, path, line))
    return events


def _parse_events_jsonl(path: Path) -> list[InteractionEvent]:
    events: list[InteractionEvent] = []
    parse_ts = None
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, line_no, f"invalid JSON: {exc}") from None
            try:
                ts_raw = obj["timestamp"]
                sender = obj["sender"]
                recipients = obj["recipients"]
            except (KeyError, TypeError):
                raise ParseError(path, line_no, "object needs timestamp, sender, recipients") from None
            if not isinstance(recipients, list) or not recipients:
                raise ParseError(path, line_no, "recipients must be a non-empty array")
            ts_text = str(ts_raw)
            if parse_ts is None:
                parse_ts = _timestamp_parser(ts_text)
            events.extend(
                _expand_row(ts_text, str(sender), [str(r) for r in recipients], parse_ts, path, line_no)
            )
    return events


def parse_teams(path) -> list[Team]:
    """Read team rosters; one Team per distinct team_id, sorted by id.

    Duplicate (team_id, member) rows produce a warning rather than an error.
    """
    path = Path(path)
    members: dict[str, set[ActorId]] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParseError(path, None, "empty file")
        cols = [c.strip().lower() for c in header]
        if cols[:2] != ["team_id", "member"]:
            raise ParseError(path, 1, f"expected header team_id,member, got {header}")
        for row in reader:
            line = reader.line_num
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < 2:
                raise ParseError(path, line, f"expected 2 columns, got {len(row)}")
            team_id = row[0].strip()
            if not team_id:
                raise ParseError(path, line, "empty team_id")
            try:
                member = normalize_actor(row[1])
            except ValueError as exc:
                raise ParseError(path, line, str(exc)) from None
            roster = members.setdefault(team_id, set())
            if member in roster:
                warnings.warn(f"{path}:{line}: duplicate member {member!r} in team {team_id!r}")
            roster.add(member)
    if not members:
        raise ParseError(path, None, "no team rows")
    return [Team(team_id, frozenset(roster)) for team_id, roster in sorted(members.items())]


def parse_dependent_variables(path) -> DependentVariableTable:
    """Read the per-team outcome table; duplicate keys are an error."""
    path = Path(path)
    values: dict[tuple[str, str], float] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParseError(path, None, "empty file")
        cols = [c.strip().lower() for c in header]
        if cols[:3] != ["team_id", "variable_name", "value"]:
            raise ParseError(path, 1, f"expected header team_id,variable_name,value, got {header}")
        for row in reader:
            line = reader.line_num
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < 3:
                raise ParseError(path, line, f"expected 3 columns, got {len(row)}")
            key = (row[0].strip(), row[1].strip())
            if not key[0] or not key[1]:
                raise ParseError(path, line, "empty team_id or variable_name")
            if key in values:
                raise ParseError(path, line, f"duplicate (team_id, variable) {key}")
            try:
                value = float(row[2])
            except ValueError:
                raise ParseError(path, line, f"non-numeric value {row[2]!r}") from None
            if value != value or value in (float("inf"), float("-inf")):
                raise ParseError(path, line, f"non-finite value {row[2]!r}")
            values[key] = value
    if not values:
        raise ParseError(path, None, "no data rows")
    return DependentVariableTable(values=values)


def format_timestamp(ts: int) -> str:
    """Epoch seconds to RFC 3339 UTC, e.g. 2010-06-13T12:37:00Z."""
    return datetime.fromtimestamp(ts, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def write_events_csv(log: EventLog, path) -> None:
    """Write one row per event in canonical events.csv form."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["timestamp", "sender", "recipients"])
        for e in log.events:
            writer.writerow([format_timestamp(e.timestamp), e.sender, e.recipient])
