"""Seeded synthetic team logs with known ground truth.

The generator emits a star-topology exchange every ``gap`` seconds: the
current hub sends two pings to a spoke (one second apart) and the spoke
replies after a draw from the reply-delay distribution. Spokes are served
in seeded shuffled round-robin order, so every spoke is active in every
reasonably sized window. With a rotation period the hub advances round-robin
through the team each period; without one the first actor stays hub.

This construction pins the ground truth: the hub is the unique betweenness
hub of each window, senders run at a contribution index of +1/3 against
-1/3 for receivers, and every closed communication frame's elapsed time
equals the drawn reply delay exactly.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

from .model import EventLog, InteractionEvent, validate_log
from .windows import ConfigError, parse_duration


@dataclass(frozen=True)
class ReplyDelay:
    """Reply latency distribution: fixed(d) or uniform(lo, hi), in seconds."""

    kind: str
    lo: float
    hi: float

    @classmethod
    def fixed(cls, seconds: float) -> "ReplyDelay":
        return cls("fixed", seconds, seconds)

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "ReplyDelay":
        return cls("uniform", lo, hi)

    def __post_init__(self) -> None:
        if self.kind not in ("fixed", "uniform"):
            raise ConfigError(f"unknown reply delay kind {self.kind!r}")
        if self.lo < 2:
            raise ConfigError("reply delay must be at least 2 seconds")
        if self.hi < self.lo:
            raise ConfigError(f"reply delay bounds out of order: {self.lo} > {self.hi}")

    @property
    def mean(self) -> float:
        return (self.lo + self.hi) / 2.0

    def draw(self, rng: random.Random) -> int:
        if self.kind == "fixed":
            return round(self.lo)
        return round(rng.uniform(self.lo, self.hi))


@dataclass(frozen=True)
class SynthScenario:
    """Parameters of one generated team log."""

    n_actors: int
    duration: int
    mean_event_rate: float
    reply_delay: ReplyDelay
    rotation_period: int | None = None
    leader_share: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_actors < 2:
            raise ConfigError(f"need at least 2 actors, got {self.n_actors}")
        if self.duration <= 0:
            raise ConfigError(f"duration must be positive, got {self.duration}")
        if self.mean_event_rate <= 0:
            raise ConfigError(f"mean_event_rate must be positive, got {self.mean_event_rate}")
        if self.rotation_period is not None and self.rotation_period <= 0:
            raise ConfigError(f"rotation_period must be positive, got {self.rotation_period}")
        if not 0.0 < self.leader_share <= 1.0:
            raise ConfigError(f"leader_share must be in (0, 1], got {self.leader_share}")

    @property
    def exchange_gap(self) -> int:
        """Seconds between exchange starts; each exchange is 3 events."""
        return max(1, round(3 * 3600 / self.mean_event_rate))


def generate(scenario: SynthScenario, actor_prefix: str = "") -> EventLog:
    """Deterministic synthetic log for one scenario.

    The same (scenario, seed) always yields a bit-identical log. Reply
    delays must stay below the exchange gap so exchanges never collide.
    """
    gap = scenario.exchange_gap
    if scenario.reply_delay.hi >= gap:
        raise ConfigError(
            f"reply delay up to {scenario.reply_delay.hi}s does not fit the "
            f"{gap}s exchange gap at rate {scenario.mean_event_rate}/h"
        )
    rng = random.Random(scenario.seed)
    actors = [f"{actor_prefix}a{i:03d}" for i in range(scenario.n_actors)]
    events: list[InteractionEvent] = []
    spoke_queue: list[str] = []
    prev_hub: str | None = None
    t = 0
    while t < scenario.duration:
        if scenario.rotation_period is None:
            hub = actors[0]
        else:
            hub = actors[(t // scenario.rotation_period) % scenario.n_actors]
        if hub != prev_hub:
            spoke_queue = []
            prev_hub = hub
        hub_turn = rng.random() < scenario.leader_share or scenario.n_actors < 3
        if hub_turn:
            if not spoke_queue:
                spoke_queue = [a for a in actors if a != hub]
                rng.shuffle(spoke_queue)
            src, dst = hub, spoke_queue.pop()
        else:
            src, dst = rng.sample([a for a in actors if a != hub], 2)
        delay = scenario.reply_delay.draw(rng)
        events.append(InteractionEvent(src, dst, t))
        events.append(InteractionEvent(src, dst, t + 1))
        events.append(InteractionEvent(dst, src, t + delay))
        t += gap
    return validate_log(events).log


def _parse_reply_delay(obj) -> ReplyDelay:
    kind = obj.get("kind")
    if kind == "fixed":
        return ReplyDelay.fixed(float(obj["seconds"]))
    if kind == "uniform":
        return ReplyDelay.uniform(float(obj["lo"]), float(obj["hi"]))
    raise ConfigError(f"reply_delay kind must be fixed or uniform, got {kind!r}")


def _duration(value) -> int:
    return value if isinstance(value, int) else parse_duration(str(value))


def load_scenario_file(path) -> list[tuple[str, SynthScenario]]:
    """Parse a scenario JSON file into (team_id, scenario) pairs.

    Layout: {"teams": [{"team_id": ..., "n_actors": ..., "duration": "16d",
    "mean_event_rate": 6.0, "rotation_period": "4d" | null,
    "leader_share": 1.0, "reply_delay": {"kind": "fixed", "seconds": 60},
    "seed": 1}, ...]}. Durations accept seconds or suffixed strings.
    """
    with open(Path(path), encoding="utf-8") as fh:
        data = json.load(fh)
    entries = data.get("teams")
    if not isinstance(entries, list) or not entries:
        raise ConfigError(f"{path}: scenario file needs a non-empty 'teams' list")
    out: list[tuple[str, SynthScenario]] = []
    seen: set[str] = set()
    for entry in entries:
        team_id = str(entry.get("team_id", "")).strip()
        if not team_id:
            raise ConfigError(f"{path}: each team needs a team_id")
        if team_id in seen:
            raise ConfigError(f"{path}: duplicate team_id {team_id!r}")
        seen.add(team_id)
        rotation = entry.get("rotation_period")
        scenario = SynthScenario(
            n_actors=int(entry["n_actors"]),
            duration=_duration(entry["duration"]),
            mean_event_rate=float(entry["mean_event_rate"]),
            reply_delay=_parse_reply_delay(entry["reply_delay"]),
            rotation_period=None if rotation is None else _duration(rotation),
            leader_share=float(entry.get("leader_share", 1.0)),
            seed=int(entry.get("seed", 0)),
        )
        out.append((team_id, scenario))
    return out
