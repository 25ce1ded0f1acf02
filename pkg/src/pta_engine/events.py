"""Event tracking: creation, logging, priority batching, inactivity timer.

All timing runs on an injected virtual clock (milliseconds) so replays are
deterministic. Pending events never expire; they stay queued until polled.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import ClockRegression, TaxonomyViolation

# (event_type, category) pairs allowed by the taxonomy
TAXONOMY = {
    ("dialogue", "learning_behavior"),
    ("location", "learning_behavior"),
    ("time", "learning_behavior"),
    ("item_collection", "learning_achievement"),
    ("mission_fulfillment", "learning_achievement"),
    ("error_commitment", "knowledge_data"),
    ("teaching_feedback", "knowledge_data"),
    ("administrative", "administrative"),
}

# reasoning-critical feedback first, ambient signals last
PRIORITY = {
    "administrative": 0,
    "teaching_feedback": 1,
    "error_commitment": 2,
    "dialogue": 3,
    "mission_fulfillment": 4,
    "item_collection": 5,
    "location": 6,
    "time": 7,
}

TIMEOUT_EVENT_NAME = "Doing Nothing (Time-Out)"
DEFAULT_TIMEOUT_MS = 300_000


@dataclass(frozen=True)
class Event:
    id: int
    name: str
    event_type: str
    category: str
    timestamp: int
    attributes: dict[str, str] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps({
            "id": self.id,
            "name": self.name,
            "event_type": self.event_type,
            "category": self.category,
            "timestamp": self.timestamp,
            "attributes": self.attributes,
        }, ensure_ascii=False)


class VirtualClock:
    def __init__(self, now_ms: int = 0):
        self.now_ms = now_ms

    def advance_to(self, target_ms: int) -> None:
        if target_ms < self.now_ms:
            raise ClockRegression(f"clock moved from {self.now_ms} back to {target_ms}")
        self.now_ms = target_ms


@dataclass
class InactivityTimer:
    deadline: int
    timeout_ms: int = DEFAULT_TIMEOUT_MS

    def reset(self, now_ms: int) -> None:
        self.deadline = now_ms + self.timeout_ms


class EventControl:
    """Owns the event log and the inactivity timer for one session."""

    def __init__(self, clock: VirtualClock, timeout_ms: int = DEFAULT_TIMEOUT_MS):
        self.clock = clock
        self.timer = InactivityTimer(deadline=clock.now_ms + timeout_ms, timeout_ms=timeout_ms)
        self.pending: list[Event] = []
        self.processed: list[tuple[Event, int]] = []
        self._next_id = 1
        self._last_tick = clock.now_ms

    def create_event(self, name: str, event_type: str, category: str,
                     attributes: dict[str, str] | None = None) -> Event:
        if (event_type, category) not in TAXONOMY:
            raise TaxonomyViolation(f"({event_type}, {category}) is not in the taxonomy")
        event = Event(
            id=self._next_id,
            name=name,
            event_type=event_type,
            category=category,
            timestamp=self.clock.now_ms,
            attributes=dict(attributes or {}),
        )
        self._next_id += 1
        self.pending.append(event)
        if event_type == "dialogue":
            self.timer.reset(event.timestamp)
        return event

    def tick(self, now_ms: int) -> Event | None:
        """Emit at most one time-out event when the deadline has passed."""
        if now_ms < self._last_tick:
            raise ClockRegression(f"tick at {now_ms} after tick at {self._last_tick}")
        self._last_tick = now_ms
        self.clock.advance_to(max(self.clock.now_ms, now_ms))
        if now_ms >= self.timer.deadline:
            event = self.create_event(TIMEOUT_EVENT_NAME, "time", "learning_behavior")
            self.timer.reset(now_ms)  # re-arm so one deadline fires once
            return event
        return None

    def poll(self, cycle_index: int = 0) -> list[Event]:
        """Drain pending into a batch ordered by priority, then id."""
        batch = sorted(self.pending, key=lambda e: (PRIORITY[e.event_type], e.id))
        self.pending = []
        self.processed.extend((e, cycle_index) for e in batch)
        return batch

    def all_events(self) -> list[Event]:
        return sorted([e for e, _c in self.processed] + self.pending, key=lambda e: e.id)

    def to_jsonl(self) -> str:
        return "".join(e.to_json() + "\n" for e in self.all_events())
