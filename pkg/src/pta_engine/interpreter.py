"""Goal net interpreter: fires transitions, invokes named tasks, resolves
decision nodes through a decision table, and descends into composite states.

Task dispatch is a registry lookup by name. One interpreter run covers one
cycle of the net (start to goal); re-execution is owned by the session.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable

from .errors import (InvalidDecision, MissingDecision, StepLimitExceeded,
                     UnboundTask, UnknownNode)
from .goalnet import GoalNet, StateNode, TransitionNode

ADVANCED = "advanced"
REACHED_GOAL = "reached_goal"

DEFAULT_STEP_LIMIT = 10_000


@dataclass
class TaskRegistry:
    entries: dict[str, Callable] = field(default_factory=dict)

    def register(self, name: str, fn: Callable) -> None:
        self.entries[name] = fn

    def lookup(self, name: str, transition_id: str | None = None) -> Callable:
        try:
            return self.entries[name]
        except KeyError:
            raise UnboundTask(name, transition_id) from None

    def covers(self, net: GoalNet) -> str | None:
        """Return the first unbound task name in the net, if any."""
        for level in net.levels():
            for t in level.transitions:
                for name in t.tasks:
                    if name not in self.entries:
                        return name
        return None


@dataclass
class DecisionTable:
    entries: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class LogEntry:
    step: int
    node: str
    event: str
    detail: str | None = None

    def to_json(self) -> str:
        obj = {"step": self.step, "node": self.node, "event": self.event}
        if self.detail is not None:
            obj["detail"] = self.detail
        return json.dumps(obj, ensure_ascii=False)


class TraversalLog:
    """Append-only record of a traversal, serializable to JSON Lines."""

    def __init__(self):
        self.entries: list[LogEntry] = []

    def append(self, node: str, event: str, detail: str | None = None) -> None:
        self.entries.append(LogEntry(len(self.entries), node, event, detail))

    def to_jsonl(self) -> str:
        return "".join(e.to_json() + "\n" for e in self.entries)

    def events(self) -> list[tuple[str, str, str | None]]:
        return [(e.event, e.node, e.detail) for e in self.entries]


@dataclass
class InterpreterState:
    net: GoalNet
    registry: TaskRegistry
    current: str
    rng: random.Random
    log: TraversalLog
    stack: list[str] = field(default_factory=list)  # composite ids, innermost last
    context: object | None = None
    steps_taken: int = 0

    def active_level(self) -> GoalNet:
        level = self.net
        for comp in self.stack:
            level = level.subnets[comp]
        return level


def start(net: GoalNet, registry: TaskRegistry, seed: int, context=None) -> InterpreterState:
    """Load the initial state: current is the top-level start state."""
    missing = registry.covers(net)
    if missing is not None:
        raise UnboundTask(missing)
    state = InterpreterState(
        net=net,
        registry=registry,
        current=net.start_state().id,
        rng=random.Random(seed),
        log=TraversalLog(),
        context=context,
    )
    state.log.append(state.current, "entered_state")
    return state


def _level_successors(level: GoalNet, node_id: str) -> list[str]:
    return [a.to_id for a in level.arcs if a.from_id == node_id]


def _resolve_next_state(state: InterpreterState, level: GoalNet,
                        transition: TransitionNode, table: DecisionTable) -> str:
    succ = _level_successors(level, transition.id)
    if not succ:
        raise UnknownNode(f"transition {transition.id} has no successor")
    if transition.kind == "probabilistic":
        weights = transition.weights or {}
        total = sum(weights.get(s, 0.0) for s in succ)
        draw = state.rng.random() * total
        acc = 0.0
        for s in succ:
            acc += weights.get(s, 0.0)
            if draw < acc:
                return s
        return succ[-1]
    if len(succ) > 1:
        chosen = table.entries.get(transition.id)
        if chosen is None:
            raise MissingDecision(transition.id)
        if chosen not in succ:
            raise InvalidDecision(f"{chosen!r} is not a successor of {transition.id}")
        state.log.append(transition.id, "decision_resolved", chosen)
        return chosen
    return succ[0]


def _enter_state(state: InterpreterState, level: GoalNet, target: StateNode) -> None:
    # descend through composite states until an atomic state is reached
    while target.kind == "composite":
        state.log.append(target.id, "entered_composite")
        state.stack.append(target.id)
        level = level.subnets[target.id]
        target = level.start_state()
    state.current = target.id
    state.log.append(target.id, "entered_state")


def step(state: InterpreterState, table: DecisionTable | None = None) -> str:
    """Advance one node. Returns REACHED_GOAL once the top-level end is current."""
    table = table or DecisionTable()
    if not state.stack and state.current == state.net.end_state().id:
        return REACHED_GOAL
    state.steps_taken += 1

    level = state.active_level()
    node = level.find_state(state.current)
    if node is not None:
        if state.stack and node.is_end:
            # sub-net finished: resume after the composite state
            composite = state.stack.pop()
            state.log.append(composite, "exited_composite")
            parent = state.active_level()
            succ = _level_successors(parent, composite)
            if not succ:
                raise UnknownNode(f"composite {composite} has no successor")
            state.current = succ[0]
            state.log.append(state.current, "fired_transition")
            return ADVANCED
        succ = _level_successors(level, node.id)
        if not succ:
            raise UnknownNode(f"state {node.id} has no successor")
        state.current = succ[0]
        state.log.append(state.current, "fired_transition")
        return ADVANCED

    transition = level.find_transition(state.current)
    if transition is None:
        raise UnknownNode(state.current)
    for name in transition.tasks:
        fn = state.registry.lookup(name, transition.id)
        state.log.append(transition.id, "invoked_task", name)
        fn(state.context)
    next_id = _resolve_next_state(state, level, transition, table)
    target = level.find_state(next_id)
    if target is None:
        raise UnknownNode(next_id)
    _enter_state(state, level, target)
    return ADVANCED


def run_to_goal(state: InterpreterState,
                table_provider: Callable[[], DecisionTable] | None = None,
                step_limit: int = DEFAULT_STEP_LIMIT) -> TraversalLog:
    """Iterate step until the goal state is reached; returns the full log.

    table_provider is consulted before each step so decisions made by task
    functions during the current cycle are visible at decision nodes.
    """
    provider = table_provider or DecisionTable
    while True:
        if state.steps_taken >= step_limit:
            raise StepLimitExceeded(f"no goal after {step_limit} steps")
        if step(state, provider()) == REACHED_GOAL:
            return state.log
