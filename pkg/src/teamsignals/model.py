"""Canonical domain types and validation shared by the whole pipeline.

Everything here is immutable after construction; the operations are pure
functions, so values can be shared freely across threads or processes.
Timestamps are kept as integer epoch seconds (UTC) throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

ActorId = str


class EmptyLogError(ValueError):
    """Raised when cleaning or filtering leaves no events at all."""


def normalize_actor(raw: str) -> ActorId:
    """Canonical actor token: whitespace-trimmed, Unicode lowercase.

    Two raw tokens denote the same actor iff their normalized forms are
    byte-equal. Raises ValueError for tokens that are empty after trimming.
    """
    token = raw.strip().lower()
    if not token:
        raise ValueError(f"empty actor token: {raw!r}")
    return token


@dataclass(frozen=True, slots=True)
class InteractionEvent:
    """One directed, timestamped communication from a sender to one recipient.

    ``timestamp`` is epoch seconds; sub-second input must be truncated before
    construction. ``source_record`` is optional provenance and participates in
    ordering and duplicate collapsing.
    """

    sender: ActorId
    recipient: ActorId
    timestamp: int
    source_record: str | None = None

    def sort_key(self) -> tuple[int, str, str, bool, str]:
        # None sorts before "" so distinct events never share a key
        return (
            self.timestamp,
            self.sender,
            self.recipient,
            self.source_record is not None,
            self.source_record or "",
        )


@dataclass(frozen=True)
class EventLog:
    """Sorted, validated event sequence with its closed time range."""

    events: tuple[InteractionEvent, ...]
    t_start: int
    t_end: int

    def __len__(self) -> int:
        return len(self.events)

    def actors(self) -> frozenset[ActorId]:
        """All actors appearing as sender or recipient."""
        seen: set[ActorId] = set()
        for e in self.events:
            seen.add(e.sender)
            seen.add(e.recipient)
        return frozenset(seen)


@dataclass(frozen=True)
class Team:
    """A named set of actors; an empty member set means "all actors in log"."""

    team_id: str
    members: frozenset[ActorId] = frozenset()

    def __post_init__(self) -> None:
        if not self.team_id:
            raise ValueError("team_id must be non-empty")


@dataclass(frozen=True)
class CleanedLog:
    """validate_log output: the clean log plus what was removed to get it."""

    log: EventLog
    dropped_self_loops: int
    collapsed_duplicates: int


def validate_log(raw_events) -> CleanedLog:
    """Sort, deduplicate and range-stamp raw events.

    Self-loops are dropped; exact duplicates (same sender, recipient,
    timestamp and source_record) collapse to one event. The result is
    totally ordered, so any permutation of the input yields the same log.
    Raises EmptyLogError if nothing survives cleaning.
    """
    kept: list[InteractionEvent] = []
    dropped = 0
    for e in raw_events:
        if e.sender == e.recipient:
            dropped += 1
        else:
            kept.append(e)
    kept.sort(key=InteractionEvent.sort_key)

    deduped: list[InteractionEvent] = []
    collapsed = 0
    prev: InteractionEvent | None = None
    for e in kept:
        if prev is not None and e == prev:
            collapsed += 1
            continue
        deduped.append(e)
        prev = e

    if not deduped:
        raise EmptyLogError("empty log after cleaning")
    log = EventLog(
        events=tuple(deduped),
        t_start=deduped[0].timestamp,
        t_end=deduped[-1].timestamp,
    )
    return CleanedLog(log=log, dropped_self_loops=dropped, collapsed_duplicates=collapsed)


def restrict_to_team(log: EventLog, team: Team) -> EventLog:
    """Keep only events whose sender AND recipient are team members.

    With an empty member set the log is returned unchanged; the time range
    is preserved either way. Raises EmptyLogError when nothing remains.
    """
    if not team.members:
        return log
    kept = tuple(
        e for e in log.events if e.sender in team.members and e.recipient in team.members
    )
    if not kept:
        raise EmptyLogError(f"empty team log for team {team.team_id!r}")
    return EventLog(events=kept, t_start=log.t_start, t_end=log.t_end)
