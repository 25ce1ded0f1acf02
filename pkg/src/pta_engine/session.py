"""Session runtime: repeats the main-routine cycle over a virtual clock.

One session owns one event log, one knowledge-base learnt store, and one
scenario position. Student input comes from an input source; scripted
traces and live connections share the same code path, so a live session
and the equivalent trace produce identical logs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from . import interpreter as interp
from .errors import (DocumentSyntaxError, InvariantError, SchemaError,
                     TraceExhausted, TraceInputMismatch)
from .events import EventControl, VirtualClock
from .fcm import FcmModel, parse_fcm
from .goalnet import GoalNet, parse_goalnet, validate_goalnet
from .knowledge import KnowledgeBase, load_kb
from .reasoning import (ActionDirective, Baselines, CycleContext,
                        ElmAssessment, StudentResponse, build_task_registry)

DEFAULT_CHECKING_PERIOD_MS = 5_000
DEFAULT_INACTIVITY_TIMEOUT_MS = 300_000

ACCEPT_TEACH = "accept-teach"
REFUSE_TEACH = "refuse-teach"
TEACHING_CHOICES = (
    (ACCEPT_TEACH, "Sure, let me teach you."),
    (REFUSE_TEACH, "I'm afraid I cannot teach you."),
)


# ------------------------------------------------------------- scenario

@dataclass(frozen=True)
class SceneChoice:
    id: str
    text: str
    emits: tuple[dict, ...]
    next: str


@dataclass(frozen=True)
class Scene:
    id: str
    text: str
    choices: tuple[SceneChoice, ...]


@dataclass
class Scenario:
    start: str
    scenes: dict[str, Scene]

    def scene(self, scene_id: str) -> Scene:
        return self.scenes[scene_id]


def parse_scenario(document: str) -> Scenario:
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, exc.lineno, exc.colno) from exc
    for key in ("start", "scenes"):
        if key not in obj:
            raise SchemaError(f"missing field {key!r}", f"/{key}")
    scenes: dict[str, Scene] = {}
    for i, raw in enumerate(obj["scenes"]):
        p = f"/scenes/{i}"
        for key in ("id", "text", "choices"):
            if key not in raw:
                raise SchemaError(f"missing field {key!r}", f"{p}/{key}")
        choices = tuple(
            SceneChoice(id=c["id"], text=c["text"],
                        emits=tuple(c.get("emits", [])), next=c["next"])
            for c in raw["choices"]
        )
        scenes[raw["id"]] = Scene(id=raw["id"], text=raw["text"], choices=choices)
    if obj["start"] not in scenes:
        raise InvariantError(f"start scene {obj['start']!r} does not exist")
    for scene in scenes.values():
        for choice in scene.choices:
            if choice.next not in scenes:
                raise InvariantError(
                    f"choice {choice.id!r} targets unknown scene {choice.next!r}")
    return Scenario(start=obj["start"], scenes=scenes)


# ------------------------------------------------------ config and trace

@dataclass
class SessionConfig:
    goalnet_path: Path
    fcm_path: Path
    kb_path: Path
    scenario_path: Path
    out_dir: Path
    seed: int = 0
    checking_period_ms: int = DEFAULT_CHECKING_PERIOD_MS
    inactivity_timeout_ms: int = DEFAULT_INACTIVITY_TIMEOUT_MS
    baselines: Baselines = field(default_factory=Baselines)

    def __post_init__(self):
        if self.checking_period_ms <= 0 or self.inactivity_timeout_ms <= 0:
            raise InvariantError("durations must be positive")


def load_config(path: Path | str, out_dir: Path | str | None = None) -> SessionConfig:
    """Read a session config document; relative paths resolve against it."""
    path = Path(path)
    obj = json.loads(path.read_text(encoding="utf-8"))
    base = path.parent

    def resolve(key: str) -> Path:
        if key not in obj:
            raise SchemaError(f"missing field {key!r}", f"/{key}")
        return (base / obj[key]).resolve()

    baselines = Baselines(
        motivation_baseline=obj.get("baselines", {}).get("motivation_baseline", 1.0),
        ability_baseline=obj.get("baselines", {}).get("ability_baseline", 1.0),
    )
    if out_dir is None:
        out_dir = base / obj.get("out_dir", "session_out")
    return SessionConfig(
        goalnet_path=resolve("goalnet_path"),
        fcm_path=resolve("fcm_path"),
        kb_path=resolve("kb_path"),
        scenario_path=resolve("scenario_path"),
        out_dir=Path(out_dir),
        seed=obj.get("seed", 0),
        checking_period_ms=obj.get("checking_period_ms", DEFAULT_CHECKING_PERIOD_MS),
        inactivity_timeout_ms=obj.get("inactivity_timeout_ms", DEFAULT_INACTIVITY_TIMEOUT_MS),
        baselines=baselines,
    )


@dataclass(frozen=True)
class TraceStep:
    at_ms: int
    kind: str  # choice | teach | idle
    choice_id: str | None = None
    assignment: dict | None = None


@dataclass
class Trace:
    steps: list[TraceStep]

    def __post_init__(self):
        for a, b in zip(self.steps, self.steps[1:]):
            if b.at_ms < a.at_ms:
                raise InvariantError("trace timestamps must be non-decreasing")


def parse_trace(document: str) -> Trace:
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, exc.lineno, exc.colno) from exc
    if "steps" not in obj:
        raise SchemaError("missing field 'steps'", "/steps")
    steps = []
    for i, raw in enumerate(obj["steps"]):
        p = f"/steps/{i}"
        if "at_ms" not in raw or "input" not in raw:
            raise SchemaError("step needs 'at_ms' and 'input'", p)
        inp = raw["input"]
        kind = inp.get("kind")
        if kind == "choice":
            steps.append(TraceStep(at_ms=raw["at_ms"], kind="choice", choice_id=inp["id"]))
        elif kind == "teach":
            steps.append(TraceStep(at_ms=raw["at_ms"], kind="teach", assignment=dict(inp["assignment"])))
        elif kind == "idle":
            steps.append(TraceStep(at_ms=raw["at_ms"], kind="idle"))
        else:
            raise SchemaError(f"unknown input kind {kind!r}", f"{p}/input/kind")
    return Trace(steps=steps)


class TraceSource:
    """Pull-based view over a scripted trace."""

    def __init__(self, trace: Trace):
        self._steps = list(trace.steps)
        self._pos = 0

    def peek(self) -> TraceStep | None:
        if self._pos < len(self._steps):
            return self._steps[self._pos]
        return None

    def pop(self) -> TraceStep:
        step = self.peek()
        if step is None:
            raise TraceExhausted("trace ended while the agent was waiting for input")
        self._pos += 1
        return step

    def exhausted(self) -> bool:
        return self._pos >= len(self._steps)


# --------------------------------------------------------- session state

@dataclass
class SessionState:
    scene: str
    pending_choices: list[tuple[str, str]] = field(default_factory=list)
    meters: dict = field(default_factory=lambda: {"motivation": 0.0, "ability": 0.0})
    ta_panel: dict | None = None
    concept_map_view: dict | None = None
    last_practice: dict | None = None
    cycle_index: int = 0

    def to_obj(self) -> dict:
        return {
            "scene": self.scene,
            "pending_choices": [{"id": c, "text": t} for c, t in self.pending_choices],
            "meters": dict(self.meters),
            "ta_panel": self.ta_panel,
            "concept_map_view": self.concept_map_view,
            "last_practice": self.last_practice,
            "cycle_index": self.cycle_index,
        }


@dataclass
class SessionReport:
    final_state: SessionState
    cycles: list[dict]
    events_jsonl: str
    traversal_jsonl: str

    def report_obj(self) -> dict:
        return {
            "final_state": self.final_state.to_obj(),
            "cycles": self.cycles,
        }


# ----------------------------------------------------------- the session

class PtaSession:
    """One student session: scenario position, event control, reasoning
    cycles driven by the goal-net interpreter."""

    def __init__(self, config: SessionConfig, source, frame_sink=None):
        self.config = config
        self.source = source
        self.frame_sink = frame_sink

        net_doc = Path(config.goalnet_path).read_text(encoding="utf-8")
        self.net: GoalNet = parse_goalnet(net_doc)
        violations = validate_goalnet(self.net)
        if violations:
            raise InvariantError(f"goal net invalid: {violations[0].message}")
        self.fcm: FcmModel = parse_fcm(Path(config.fcm_path).read_text(encoding="utf-8"))
        self._kb_doc = Path(config.kb_path).read_text(encoding="utf-8")
        self.kb: KnowledgeBase = load_kb(self._kb_doc, self.fcm)
        self.scenario = parse_scenario(Path(config.scenario_path).read_text(encoding="utf-8"))

        self.registry = build_task_registry()
        missing = self.registry.covers(self.net)
        if missing:
            raise InvariantError(f"goal net references unbound task {missing!r}")

        self.clock = VirtualClock(0)
        self.events = EventControl(self.clock, timeout_ms=config.inactivity_timeout_ms)
        start_scene = self.scenario.scene(self.scenario.start)
        self.state = SessionState(
            scene=start_scene.id,
            pending_choices=[(c.id, c.text) for c in start_scene.choices],
        )
        self.cycles: list[dict] = []
        self.traversal_lines: list[str] = []
        self._awaiting: str | None = None  # None | "response" | "assignment"
        self._last_boundary = 0

    # ------------------------------------------------------------ frames

    def _push(self, frame: dict) -> None:
        if self.frame_sink is not None:
            self.frame_sink(frame)

    def push_session_state(self) -> None:
        self._push({"type": "session_state", **self.state.to_obj()})

    # ------------------------------------------------------------- input

    def _consume_step(self) -> TraceStep:
        step = self.source.pop()
        self.clock.advance_to(max(self.clock.now_ms, step.at_ms))
        return step

    def _apply_scene_choice(self, step: TraceStep) -> None:
        if step.kind == "idle":
            return
        if self._awaiting is not None:
            raise TraceInputMismatch("input applied outside the awaiting cycle")
        if step.kind == "teach":
            raise TraceInputMismatch("teach input while no concept map is open")
        scene = self.scenario.scene(self.state.scene)
        choice = next((c for c in scene.choices if c.id == step.choice_id), None)
        if choice is None:
            raise TraceInputMismatch(
                f"choice {step.choice_id!r} is not pending in scene {scene.id!r}")
        for spec in choice.emits:
            self.events.create_event(spec["name"], spec["event_type"], spec["category"],
                                     spec.get("attributes"))
        nxt = self.scenario.scene(choice.next)
        self.state.scene = nxt.id
        self.state.pending_choices = [(c.id, c.text) for c in nxt.choices]
        self.push_session_state()

    # -------------------------------------------------- mid-cycle hooks

    def _request_response(self) -> StudentResponse:
        saved = self.state.pending_choices
        self.state.pending_choices = list(TEACHING_CHOICES)
        self._awaiting = "response"
        self.push_session_state()
        step = self._consume_step()
        self._awaiting = None
        self.state.pending_choices = saved
        if step.kind != "choice" or step.choice_id not in (ACCEPT_TEACH, REFUSE_TEACH):
            raise TraceInputMismatch(
                f"expected {ACCEPT_TEACH}/{REFUSE_TEACH}, got {step.kind} {step.choice_id!r}")
        if step.choice_id == REFUSE_TEACH:
            return StudentResponse(kind="refused")
        return StudentResponse(kind="accepted")

    def _request_assignment(self) -> dict:
        self._awaiting = "assignment"
        self.state.pending_choices = []
        self.push_session_state()
        step = self._consume_step()
        self._awaiting = None
        if step.kind != "teach":
            raise TraceInputMismatch(f"expected a teach input, got {step.kind}")
        return dict(step.assignment or {})

    # --------------------------------------------------------- directives

    def _on_assessment(self, assessment: ElmAssessment) -> None:
        self.state.meters = {
            "motivation": assessment.motivation,
            "ability": assessment.ability,
        }
        self._push({"type": "meters", **self.state.meters})

    def _on_directive(self, directive: ActionDirective) -> None:
        if directive.kind == "display_cue":
            self.state.ta_panel = directive.to_obj()
            self._push({"type": "cue", "cue_id": directive.cue_id,
                        "text": directive.text, "expression": directive.expression})
        elif directive.kind == "show_concept_map":
            spec = self.kb.map_by_id(directive.map_id)
            learnt = self.kb.learnt.get(directive.map_id)
            view = {
                "map_id": spec.id,
                "blanks": [{"id": b, "prompt": p} for b, p in spec.blanks],
                "labels": list(spec.labels),
                "assignment": dict(learnt.assignment) if learnt else {},
                "error_blanks": sorted(directive.error_blanks),
            }
            self.state.concept_map_view = view
            self._push({"type": "concept_map", **view})
        elif directive.kind in ("practice_success_feedback", "practice_failure_feedback"):
            success = directive.kind == "practice_success_feedback"
            self.state.last_practice = {
                "success": success,
                "error_blanks": sorted(directive.error_blanks),
            }
            self._push({"type": "practice_result", **self.state.last_practice})

    # -------------------------------------------------------------- cycle

    def _run_cycle(self, batch) -> None:
        index = self.state.cycle_index
        ctx = CycleContext(
            fcm=self.fcm,
            kb=self.kb,
            events=self.events,
            batch=batch,
            baselines=self.config.baselines,
            out_dir=self.config.out_dir,
            request_response=self._request_response,
            request_assignment=self._request_assignment,
            on_assessment=self._on_assessment,
            on_directive=self._on_directive,
        )
        istate = interp.start(self.net, self.registry, seed=self.config.seed + index,
                              context=ctx)
        # share the live dict so decisions made by tasks inside the current
        # step are visible when that step resolves its decision node
        provider = lambda: interp.DecisionTable(ctx.decisions)
        log = interp.run_to_goal(istate, provider)
        for entry in log.entries:
            obj = {"cycle": index, "step": entry.step, "node": entry.node,
                   "event": entry.event}
            if entry.detail is not None:
                obj["detail"] = entry.detail
            self.traversal_lines.append(json.dumps(obj, ensure_ascii=False))
        self.cycles.append({
            "index": index,
            "reasoning": ctx.reasoning,
            "head_event": batch[0].name,
            "batch": [e.name for e in batch],
            "directives": [d.to_obj() for d in ctx.directives],
            "meters": dict(self.state.meters),
        })
        self.state.cycle_index = index + 1
        self.push_session_state()

    def process_boundary(self, boundary_ms: int) -> None:
        """One checking period: advance time, fire the timer, poll, and run
        a cycle when the batch is non-empty."""
        self.clock.advance_to(max(self.clock.now_ms, boundary_ms))
        self.events.tick(boundary_ms)
        batch = self.events.poll(self.state.cycle_index)
        self._last_boundary = boundary_ms
        if batch:
            self._run_cycle(batch)

    def next_boundary(self) -> int:
        """First checking-period boundary after both the clock and the last
        processed boundary."""
        period = self.config.checking_period_ms
        return (max(self.clock.now_ms, self._last_boundary) // period + 1) * period

    # ---------------------------------------------------------- trace run

    def run(self) -> SessionReport:
        while True:
            boundary = self.next_boundary()
            while True:
                nxt = self.source.peek()
                if nxt is None or nxt.at_ms > boundary:
                    break
                step = self._consume_step()
                self._apply_scene_choice(step)
            self.process_boundary(boundary)
            if self.source.exhausted() and not self.events.pending:
                break
        return self.finish()

    def finish(self) -> SessionReport:
        report = SessionReport(
            final_state=self.state,
            cycles=self.cycles,
            events_jsonl=self.events.to_jsonl(),
            traversal_jsonl="".join(line + "\n" for line in self.traversal_lines),
        )
        out = Path(self.config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "kb.json").write_text(self._kb_doc, encoding="utf-8")
        (out / "events.jsonl").write_text(report.events_jsonl, encoding="utf-8")
        (out / "traversal.jsonl").write_text(report.traversal_jsonl, encoding="utf-8")
        (out / "report.json").write_text(
            json.dumps(report.report_obj(), indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8")
        return report


def run_trace(config: SessionConfig, trace: Trace,
              frame_sink=None) -> SessionReport:
    """Run a scripted trace headlessly and write the session directory."""
    session = PtaSession(config, TraceSource(trace), frame_sink=frame_sink)
    return session.run()


def bundled_config(out_dir: Path | str, seed: int = 0,
                   fcm_asset: str = "pta_fcm.json", **overrides) -> SessionConfig:
    """Config pointing at the bundled models, for tests and demos."""
    from .assets import asset_path
    return SessionConfig(
        goalnet_path=asset_path("main_routine.json"),
        fcm_path=asset_path(fcm_asset),
        kb_path=asset_path("kb_diffusion.json"),
        scenario_path=asset_path("scenario_vs_saga_lite.json"),
        out_dir=Path(out_dir),
        seed=seed,
        **overrides,
    )
