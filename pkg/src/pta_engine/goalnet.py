"""Goal net model: states, transitions, arcs, branches, and their JSON format.

A goal net is a bipartite graph of state and transition nodes. Composite
states expand into nested sub-nets referenced through the "subnets" map of
the document. Values are immutable after validation and safe to share.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import DocumentSyntaxError, SchemaError, UnknownNode

STATE_KINDS = ("atomic", "composite")
TRANSITION_KINDS = ("direct", "conditional", "probabilistic")


@dataclass(frozen=True)
class StateNode:
    id: str
    name: str
    kind: str = "atomic"
    is_start: bool = False
    is_end: bool = False


@dataclass(frozen=True)
class TransitionNode:
    id: str
    name: str
    kind: str = "direct"
    tasks: tuple[str, ...] = ()
    weights: dict[str, float] | None = None


@dataclass(frozen=True)
class Arc:
    from_id: str
    to_id: str
    style: str | None = None


@dataclass(frozen=True)
class Branch:
    composite: str
    first: str
    last: str


@dataclass
class GoalNet:
    name: str
    states: list[StateNode] = field(default_factory=list)
    transitions: list[TransitionNode] = field(default_factory=list)
    arcs: list[Arc] = field(default_factory=list)
    branches: list[Branch] = field(default_factory=list)
    subnets: dict[str, "GoalNet"] = field(default_factory=dict)

    def state_ids(self) -> set[str]:
        return {s.id for s in self.states}

    def transition_ids(self) -> set[str]:
        return {t.id for t in self.transitions}

    def node_ids(self) -> set[str]:
        return self.state_ids() | self.transition_ids()

    def find_state(self, node_id: str) -> StateNode | None:
        for s in self.states:
            if s.id == node_id:
                return s
        return None

    def find_transition(self, node_id: str) -> TransitionNode | None:
        for t in self.transitions:
            if t.id == node_id:
                return t
        return None

    def start_state(self) -> StateNode:
        return next(s for s in self.states if s.is_start)

    def end_state(self) -> StateNode:
        return next(s for s in self.states if s.is_end)

    def levels(self) -> list["GoalNet"]:
        """This net followed by every nested sub-net, depth first."""
        out = [self]
        for sub in self.subnets.values():
            out.extend(sub.levels())
        return out

    def level_of(self, node_id: str) -> "GoalNet | None":
        for level in self.levels():
            if node_id in level.node_ids():
                return level
        return None

    def all_task_names(self) -> set[str]:
        names: set[str] = set()
        for level in self.levels():
            for t in level.transitions:
                names.update(t.tasks)
        return names


@dataclass(frozen=True)
class Violation:
    code: str
    node_id: str
    message: str


ValidationReport = list


# ---------------------------------------------------------------- parsing

_STATE_FIELDS = {"id", "name", "kind", "is_start", "is_end"}
_TRANSITION_FIELDS = {"id", "name", "kind", "tasks", "weights"}
_ARC_FIELDS = {"from", "to", "style"}
_BRANCH_FIELDS = {"composite", "first", "last"}
_NET_FIELDS = {"name", "states", "transitions", "arcs", "branches", "subnets", "version"}


def _require(obj: dict, key: str, path: str):
    if key not in obj:
        raise SchemaError(f"missing field {key!r}", f"{path}/{key}")
    return obj[key]


def _check_keys(obj: dict, allowed: set[str], path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise SchemaError(f"unexpected field {key!r}", f"{path}/{key}")


def _expect(value, types, path: str):
    if not isinstance(value, types):
        raise SchemaError(f"wrong type for value {value!r}", path)
    return value


def _parse_net(obj, path: str) -> GoalNet:
    _expect(obj, dict, path)
    _check_keys(obj, _NET_FIELDS, path)
    name = _expect(_require(obj, "name", path), str, f"{path}/name")

    states = []
    for i, raw in enumerate(_expect(_require(obj, "states", path), list, f"{path}/states")):
        p = f"{path}/states/{i}"
        _expect(raw, dict, p)
        _check_keys(raw, _STATE_FIELDS, p)
        states.append(StateNode(
            id=_expect(_require(raw, "id", p), str, f"{p}/id"),
            name=_expect(_require(raw, "name", p), str, f"{p}/name"),
            kind=_expect(raw.get("kind", "atomic"), str, f"{p}/kind"),
            is_start=_expect(raw.get("is_start", False), bool, f"{p}/is_start"),
            is_end=_expect(raw.get("is_end", False), bool, f"{p}/is_end"),
        ))

    transitions = []
    for i, raw in enumerate(_expect(_require(obj, "transitions", path), list, f"{path}/transitions")):
        p = f"{path}/transitions/{i}"
        _expect(raw, dict, p)
        _check_keys(raw, _TRANSITION_FIELDS, p)
        tasks = _expect(raw.get("tasks", []), list, f"{p}/tasks")
        for j, t in enumerate(tasks):
            _expect(t, str, f"{p}/tasks/{j}")
        weights = raw.get("weights")
        if weights is not None:
            _expect(weights, dict, f"{p}/weights")
            weights = {k: float(_expect(v, (int, float), f"{p}/weights/{k}")) for k, v in weights.items()}
        transitions.append(TransitionNode(
            id=_expect(_require(raw, "id", p), str, f"{p}/id"),
            name=_expect(_require(raw, "name", p), str, f"{p}/name"),
            kind=_expect(raw.get("kind", "direct"), str, f"{p}/kind"),
            tasks=tuple(tasks),
            weights=weights,
        ))

    arcs = []
    for i, raw in enumerate(_expect(_require(obj, "arcs", path), list, f"{path}/arcs")):
        p = f"{path}/arcs/{i}"
        _expect(raw, dict, p)
        _check_keys(raw, _ARC_FIELDS, p)
        arcs.append(Arc(
            from_id=_expect(_require(raw, "from", p), str, f"{p}/from"),
            to_id=_expect(_require(raw, "to", p), str, f"{p}/to"),
            style=raw.get("style"),
        ))

    branches = []
    for i, raw in enumerate(_expect(obj.get("branches", []), list, f"{path}/branches")):
        p = f"{path}/branches/{i}"
        _expect(raw, dict, p)
        _check_keys(raw, _BRANCH_FIELDS, p)
        branches.append(Branch(
            composite=_expect(_require(raw, "composite", p), str, f"{p}/composite"),
            first=_expect(_require(raw, "first", p), str, f"{p}/first"),
            last=_expect(_require(raw, "last", p), str, f"{p}/last"),
        ))

    subnets = {}
    for key, raw in _expect(obj.get("subnets", {}), dict, f"{path}/subnets").items():
        subnets[key] = _parse_net(raw, f"{path}/subnets/{key}")

    return GoalNet(name=name, states=states, transitions=transitions,
                   arcs=arcs, branches=branches, subnets=subnets)


def parse_goalnet(document: str) -> GoalNet:
    """Parse a goal net JSON document. Structural validation is separate."""
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, exc.lineno, exc.colno) from exc
    return _parse_net(obj, "")


def serialize_goalnet(net: GoalNet) -> str:
    """Canonical UTF-8/LF serialization; parse(serialize(net)) round-trips."""
    def net_obj(n: GoalNet) -> dict:
        out = {
            "name": n.name,
            "states": [
                {"id": s.id, "name": s.name, "kind": s.kind,
                 "is_start": s.is_start, "is_end": s.is_end}
                for s in n.states
            ],
            "transitions": [],
            "arcs": [],
            "branches": [
                {"composite": b.composite, "first": b.first, "last": b.last}
                for b in n.branches
            ],
        }
        for t in n.transitions:
            entry = {"id": t.id, "name": t.name, "kind": t.kind, "tasks": list(t.tasks)}
            if t.weights is not None:
                entry["weights"] = dict(t.weights)
            out["transitions"].append(entry)
        for a in n.arcs:
            entry = {"from": a.from_id, "to": a.to_id}
            if a.style is not None:
                entry["style"] = a.style
            out["arcs"].append(entry)
        if n.subnets:
            out["subnets"] = {k: net_obj(v) for k, v in n.subnets.items()}
        return out

    return json.dumps(net_obj(net), indent=2, ensure_ascii=False) + "\n"


# ------------------------------------------------------------- validation

def _validate_level(net: GoalNet, report: list[Violation]) -> None:
    seen: set[str] = set()
    for node_id in [s.id for s in net.states] + [t.id for t in net.transitions]:
        if node_id in seen:
            report.append(Violation("duplicate id", node_id, "node id is not unique"))
        seen.add(node_id)

    states = {s.id: s for s in net.states}
    transitions = {t.id: t for t in net.transitions}

    starts = [s for s in net.states if s.is_start]
    ends = [s for s in net.states if s.is_end]
    if len(starts) != 1:
        report.append(Violation("start count", net.name, f"expected exactly one start state, found {len(starts)}"))
    if len(ends) != 1:
        report.append(Violation("end count", net.name, f"expected exactly one end state, found {len(ends)}"))

    for s in net.states:
        if s.kind not in STATE_KINDS:
            report.append(Violation("bad state kind", s.id, f"unknown kind {s.kind!r}"))
        if s.kind == "composite" and (s.is_start or s.is_end):
            report.append(Violation("composite boundary", s.id, "composite state may not be start or end"))

    out_arcs: dict[str, list[Arc]] = {}
    for arc in net.arcs:
        if arc.from_id not in seen or arc.to_id not in seen:
            report.append(Violation("dangling arc", f"{arc.from_id}->{arc.to_id}", "arc endpoint does not exist at this level"))
            continue
        from_state = arc.from_id in states
        to_state = arc.to_id in states
        if from_state == to_state:
            report.append(Violation("non-bipartite arc", f"{arc.from_id}->{arc.to_id}", "arc must connect one state and one transition"))
            continue
        out_arcs.setdefault(arc.from_id, []).append(arc)

    for t in net.transitions:
        if t.kind not in TRANSITION_KINDS:
            report.append(Violation("bad transition kind", t.id, f"unknown kind {t.kind!r}"))
        for name in t.tasks:
            if not name:
                report.append(Violation("empty task name", t.id, "task names must be nonempty"))
        fanout = len(out_arcs.get(t.id, []))
        if t.kind == "direct" and fanout != 1:
            report.append(Violation("direct fanout", t.id, f"direct transition must have exactly 1 outgoing arc, has {fanout}"))
        if t.kind in ("conditional", "probabilistic") and fanout < 2:
            report.append(Violation("decision fanout", t.id, f"{t.kind} transition must have >1 outgoing arcs, has {fanout}"))
        if t.kind == "probabilistic":
            if t.weights is None:
                report.append(Violation("missing weights", t.id, "probabilistic transition requires weights"))
            else:
                targets = {a.to_id for a in out_arcs.get(t.id, [])}
                if any(w < 0 for w in t.weights.values()):
                    report.append(Violation("negative weight", t.id, "weights must be nonnegative"))
                if sum(t.weights.values()) <= 0:
                    report.append(Violation("weight sum", t.id, "weight sum must be positive"))
                for key in t.weights:
                    if key not in targets:
                        report.append(Violation("weight target", t.id, f"weight key {key!r} is not a successor"))
        elif t.weights is not None:
            report.append(Violation("unexpected weights", t.id, "weights only allowed on probabilistic transitions"))

    for s in net.states:
        fanout = len(out_arcs.get(s.id, []))
        if fanout > 1:
            # the interpreter requires a unique following transition per state
            report.append(Violation("state fanout", s.id, f"state must have at most 1 outgoing arc, has {fanout}"))
        if not s.is_end and fanout == 0:
            report.append(Violation("dead state", s.id, "non-end state has no outgoing arc"))

    branch_by_comp: dict[str, int] = {}
    for b in net.branches:
        branch_by_comp[b.composite] = branch_by_comp.get(b.composite, 0) + 1
        comp = states.get(b.composite)
        if comp is None or comp.kind != "composite":
            report.append(Violation("branch target", b.composite, "branch must refer to a composite state at this level"))
            continue
        sub = net.subnets.get(b.composite)
        if sub is None:
            report.append(Violation("missing subnet", b.composite, "composite state has no subnet document"))
            continue
        sub_ids = sub.state_ids()
        if b.first not in sub_ids or b.last not in sub_ids:
            report.append(Violation("branch endpoints", b.composite, "branch first/last must be states of the subnet"))

    for s in net.states:
        if s.kind == "composite":
            count = branch_by_comp.get(s.id, 0)
            if count != 1:
                report.append(Violation("missing branch", s.id, f"composite state must have exactly one branch, has {count}"))
            if s.id not in net.subnets:
                report.append(Violation("missing subnet", s.id, "composite state has no subnet document"))

    # reachability: every node on some start -> end path at this level
    if len(starts) == 1 and len(ends) == 1:
        fwd = _closure(starts[0].id, net.arcs, forward=True)
        bwd = _closure(ends[0].id, net.arcs, forward=False)
        for node_id in seen:
            if node_id not in fwd or node_id not in bwd:
                report.append(Violation("unreachable", node_id, "node lies on no start-to-end path"))

    for sub in net.subnets.values():
        _validate_level(sub, report)


def _closure(origin: str, arcs: list[Arc], forward: bool) -> set[str]:
    edges: dict[str, list[str]] = {}
    for a in arcs:
        if forward:
            edges.setdefault(a.from_id, []).append(a.to_id)
        else:
            edges.setdefault(a.to_id, []).append(a.from_id)
    reached = {origin}
    frontier = [origin]
    while frontier:
        node = frontier.pop()
        for nxt in edges.get(node, []):
            if nxt not in reached:
                reached.add(nxt)
                frontier.append(nxt)
    return reached


def validate_goalnet(net: GoalNet) -> list[Violation]:
    """Enumerate every structural violation; an empty report means valid."""
    report: list[Violation] = []
    _validate_level(net, report)
    return report


def successors(net: GoalNet, node_id: str) -> list[str]:
    """Arc targets of a node in document declaration order."""
    level = net.level_of(node_id)
    if level is None:
        raise UnknownNode(node_id)
    return [a.to_id for a in level.arcs if a.from_id == node_id]
