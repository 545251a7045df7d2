"""The three longitudinal team signals: RL, RC and prompt response time.

Rotating Leadership (RL) and Rotating Contribution (RC) count local extrema
in each actor's windowed betweenness / contribution-index series and average
the counts over the team. Prompt Response Time (PRT) segments each actor
pair's event stream into communication frames and aggregates per-responder
frame statistics into a communication-weighted team mean.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Literal, Sequence

from .model import ActorId, EventLog, Team, restrict_to_team
from .windows import WindowConfig, WindowedSeries, series

ResponseVariant = Literal["et", "fn"]


@dataclass(frozen=True)
class ExtremaPolicy:
    """How oscillations are counted on a discrete series.

    Endpoints of a run are never extrema, plateaus of equal values are
    compressed to a single point before comparison, and only contiguous
    present runs of at least min_presence_run windows are scanned (an
    interior extremum needs a neighbor on each side).
    """

    endpoint_rule: str = "exclude_endpoints"
    plateau_rule: str = "compress_plateaus"
    min_presence_run: int = 3

    def __post_init__(self) -> None:
        if self.endpoint_rule != "exclude_endpoints":
            raise ValueError(f"unsupported endpoint_rule {self.endpoint_rule!r}")
        if self.plateau_rule != "compress_plateaus":
            raise ValueError(f"unsupported plateau_rule {self.plateau_rule!r}")
        if self.min_presence_run < 3:
            raise ValueError("min_presence_run must be >= 3")


@dataclass(frozen=True)
class CommunicationFrame:
    """A run of messages from source to target, up to the target's reply.

    The reply both closes the open frame (as its final event) and opens the
    next frame in the opposite direction, so a closed frame always has at
    least two events. The trailing frame of a pair stays open.
    """

    source: ActorId
    target: ActorId
    first_event: int
    last_event: int
    event_count: int
    closed: bool

    @property
    def elapsed_time(self) -> int:
        """Seconds from the frame's first to its last event."""
        return self.last_event - self.first_event

    @property
    def nudges(self) -> int:
        """Number of events in the frame (the closing reply included)."""
        return self.event_count


@dataclass(frozen=True)
class TeamSignals:
    """All four computed signals for one team.

    prt_et is in seconds; prt_et/prt_fn are None exactly when the team has
    no closed frames.
    """

    rl: float
    rc: float
    prt_et: float | None
    prt_fn: float | None
    n_actors: int
    n_closed_frames: int


def count_extrema(
    values: Sequence[float],
    presence: Sequence[bool],
    policy: ExtremaPolicy = ExtremaPolicy(),
) -> int:
    """Count strict local maxima plus minima over the present runs.

    Each maximal contiguous present run of at least policy.min_presence_run
    windows is scanned separately: consecutive equal values are compressed
    to one point, then interior points strictly above (or below) both
    neighbors are counted. Run endpoints never count.
    """
    if len(values) != len(presence):
        raise ValueError(f"length mismatch: {len(values)} values vs {len(presence)} presence")
    total = 0
    i = 0
    n = len(values)
    while i < n:
        if not presence[i]:
            i += 1
            continue
        j = i
        while j < n and presence[j]:
            j += 1
        if j - i >= policy.min_presence_run:
            run: list[float] = []
            for v in values[i:j]:
                if not run or v != run[-1]:
                    run.append(v)
            for k in range(1, len(run) - 1):
                if run[k] > run[k - 1] and run[k] > run[k + 1]:
                    total += 1
                elif run[k] < run[k - 1] and run[k] < run[k + 1]:
                    total += 1
        i = j
    return total


def rotating_signal(ws: WindowedSeries, policy: ExtremaPolicy = ExtremaPolicy()) -> float:
    """Mean per-actor extrema count over the whole roster (RL or RC)."""
    actors = ws.actors()
    if not actors:
        raise ValueError("series has no actors")
    counts = [count_extrema(ws.values[a], ws.presence[a], policy) for a in actors]
    return sum(counts) / len(actors)


def _frames_from_stream(stream: Sequence) -> list[CommunicationFrame]:
    """State machine over one pair's merged, time-ordered event stream."""
    frames: list[CommunicationFrame] = []
    src = dst = None
    first = last = 0
    count = 0
    for e in stream:
        if src is None:
            src, dst = e.sender, e.recipient
            first = last = e.timestamp
            count = 1
        elif e.sender == src:
            last = e.timestamp
            count += 1
        else:
            # reply: closes the open frame and opens the next one
            frames.append(
                CommunicationFrame(src, dst, first, e.timestamp, count + 1, closed=True)
            )
            src, dst = e.sender, e.recipient
            first = last = e.timestamp
            count = 1
    if src is not None:
        frames.append(CommunicationFrame(src, dst, first, last, count, closed=False))
    return frames


def segment_frames(log: EventLog, a: ActorId, b: ActorId) -> list[CommunicationFrame]:
    """All communication frames for the unordered actor pair {a, b}."""
    pair = {a, b}
    stream = [e for e in log.events if {e.sender, e.recipient} == pair]
    return _frames_from_stream(stream)


def _closed_frames(log: EventLog) -> list[CommunicationFrame]:
    streams: dict[frozenset, list] = defaultdict(list)
    for e in log.events:
        streams[frozenset((e.sender, e.recipient))].append(e)
    closed: list[CommunicationFrame] = []
    for key in sorted(streams, key=sorted):
        closed.extend(f for f in _frames_from_stream(streams[key]) if f.closed)
    return closed


def responsiveness(
    log: EventLog, roster: frozenset[ActorId], variant: ResponseVariant
) -> dict[ActorId, float]:
    """Mean frame statistic per responder (RCF).

    For each actor, averages elapsed time in seconds ("et") or the event
    count ("fn") over the closed frames in which the actor is the target,
    i.e. the one who replied. Actors that never close a frame are absent
    from the result.
    """
    if variant not in ("et", "fn"):
        raise ValueError(f"unknown variant {variant!r} (expected 'et' or 'fn')")
    samples: dict[ActorId, list[float]] = defaultdict(list)
    for frame in _closed_frames(log):
        if frame.target in roster:
            samples[frame.target].append(
                float(frame.elapsed_time if variant == "et" else frame.nudges)
            )
    return {a: sum(vals) / len(vals) for a, vals in samples.items()}


def prompt_response_time(
    log: EventLog, roster: frozenset[ActorId], variant: ResponseVariant
) -> float | None:
    """Communication-weighted mean responsiveness across the team.

    Each actor's RCF is weighted by the number of events the actor appears
    in (as sender or recipient). Actors with no defined RCF are excluded
    from numerator and denominator; returns None when nobody has one.
    """
    rcf = responsiveness(log, roster, variant)
    if not rcf:
        return None
    weight: dict[ActorId, int] = defaultdict(int)
    for e in log.events:
        weight[e.sender] += 1
        weight[e.recipient] += 1
    num = sum(value * weight[a] for a, value in rcf.items())
    den = sum(weight[a] for a in rcf)
    return num / den


def team_signals(
    log: EventLog,
    team: Team,
    cfg: WindowConfig,
    policy: ExtremaPolicy = ExtremaPolicy(),
) -> TeamSignals:
    """Full per-team signal computation: RL, RC and both PRT variants."""
    team_log = restrict_to_team(log, team)
    roster = team_log.actors()
    bc = series(team_log, cfg, "bc")
    ci = series(team_log, cfg, "ci")
    return TeamSignals(
        rl=rotating_signal(bc, policy),
        rc=rotating_signal(ci, policy),
        prt_et=prompt_response_time(team_log, roster, "et"),
        prt_fn=prompt_response_time(team_log, roster, "fn"),
        n_actors=len(roster),
        n_closed_frames=len(_closed_frames(team_log)),
    )
