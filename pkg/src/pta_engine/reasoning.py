"""Reasoning selection, motivation/ability assessment, and the three
reasoning cycles (persuasion, teachability, practicability).

Each task name of the bundled goal nets is a thin registry adapter over the
operations here, so interpreting the nets drives real agent behavior. The
cycle functions are also callable directly, without an interpreter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import fcm as fcm_mod
from .errors import (EmptyBatch, NoActiveTeachingOpportunity, NoLearntKnowledge,
                     PtaError)
from .events import Event, EventControl
from .fcm import FcmModel
from .interpreter import TaskRegistry
from .knowledge import (CueContext, KnowledgeBase, PersuasionCue, grade,
                        persist_learnt, save_learnt, select_cue)

PERSUASION = "persuasion"
TEACHABILITY = "teachability"
PRACTICABILITY = "practicability"

# event names with engine-level meaning
REJECTION_EVENT = "Not Teach Water Molecule"
TEACHABILITY_EVENT = "Teachability Event"
PRACTICABILITY_EVENT = "Practicability Event"
WRONG_SOLUTION_EVENT = "Wrong Solution"
TEACH_SUCCESS_EVENT = "Teach Success"
TEACH_FAILURE_EVENT = "Teach Failure"
TEACHING_POINT_EVENT = "Teaching Point Reached"

# node ids of the bundled goal net models
DISPATCH_NODE = "t_dispatch"
PERSUASION_CHECK_NODE = "pt_check"
TEACH_CHECK_NODE = "lt_check"
PRACTICE_CHECK_NODE = "rt_reason"
COMPOSITE_BY_KIND = {
    TEACHABILITY: "s_learn",
    PRACTICABILITY: "s_practice",
    PERSUASION: "s_persuade",
}
CENTRAL_STATE = "p_central"
PERSUADE_STATE = "p_needed"
ACCEPTED_STATE = "l_accepted"
REFUSED_STATE = "l_refused"
CORRECT_STATE = "r_correct"
WRONG_STATE = "r_wrong"


@dataclass(frozen=True)
class Baselines:
    motivation_baseline: float = 1.0
    ability_baseline: float = 1.0


@dataclass(frozen=True)
class ElmAssessment:
    motivation: float
    ability: float
    route: str  # "central" | "peripheral"
    baselines: Baselines

    @property
    def low_motivation(self) -> bool:
        return self.motivation < self.baselines.motivation_baseline

    @property
    def low_ability(self) -> bool:
        return self.ability < self.baselines.ability_baseline


@dataclass(frozen=True)
class ActionDirective:
    kind: str  # display_cue | show_concept_map | practice_success_feedback |
    #            practice_failure_feedback | none
    cue_id: str | None = None
    text: str | None = None
    expression: str | None = None
    map_id: str | None = None
    error_blanks: tuple[str, ...] = ()

    def to_obj(self) -> dict:
        obj: dict = {"kind": self.kind}
        if self.kind == "display_cue":
            obj.update(cue_id=self.cue_id, text=self.text, expression=self.expression)
        elif self.kind == "show_concept_map":
            obj.update(map_id=self.map_id, error_blanks=sorted(self.error_blanks))
        elif self.kind == "practice_failure_feedback":
            obj.update(error_blanks=sorted(self.error_blanks))
        return obj


NONE_DIRECTIVE = ActionDirective(kind="none")


@dataclass(frozen=True)
class StudentResponse:
    kind: str  # "accepted" | "refused"
    assignment: dict | None = None


@dataclass
class CycleContext:
    """Mutable state threaded through one reasoning cycle's task functions."""
    fcm: FcmModel
    kb: KnowledgeBase
    events: EventControl
    batch: list[Event] = field(default_factory=list)
    baselines: Baselines = field(default_factory=Baselines)
    decisions: dict[str, str] = field(default_factory=dict)
    directives: list[ActionDirective] = field(default_factory=list)
    out_dir: Path | None = None
    # session hooks; None outside a live/trace session
    request_response: Callable[[], StudentResponse] | None = None
    request_assignment: Callable[[], dict] | None = None
    on_assessment: Callable[[ElmAssessment], None] | None = None
    on_directive: Callable[[ActionDirective], None] | None = None
    # per-cycle scratch
    reasoning: str | None = None
    assessment: ElmAssessment | None = None
    selected_cue: PersuasionCue | None = None
    active_map_id: str | None = None
    teaching_response: StudentResponse | None = None
    acquired_assignment: dict | None = None
    finished: bool = False

    def head(self) -> Event:
        if not self.batch:
            raise EmptyBatch("cycle started with no events")
        return self.batch[0]

    def emit_directive(self, directive: ActionDirective) -> None:
        self.directives.append(directive)
        if self.on_directive is not None:
            self.on_directive(directive)


# ------------------------------------------------------------- selection

def select_reasoning(batch: list[Event]) -> str:
    """Pick the cycle for a percept batch from its head event."""
    if not batch:
        raise EmptyBatch("cannot select reasoning for an empty batch")
    head = batch[0]
    if head.event_type == "administrative":
        if head.name in (TEACHABILITY_EVENT, PRACTICABILITY_EVENT):
            return PRACTICABILITY
        if head.name == WRONG_SOLUTION_EVENT:
            return PERSUASION
        return TEACHABILITY
    return PERSUASION


def merge_leaf_activations(kb: KnowledgeBase, batch: list[Event]) -> dict[str, float]:
    """Union of factor-map entries over the batch. On collision the larger
    magnitude wins; equal magnitudes resolve to the more negative value."""
    merged: dict[str, float] = {}
    for event in batch:
        for leaf, value in kb.factor_map.get(event.name, []):
            if leaf not in merged:
                merged[leaf] = value
            else:
                old = merged[leaf]
                if abs(value) > abs(old) or (abs(value) == abs(old) and value < old):
                    merged[leaf] = value
    return merged


def assess(fcm: FcmModel, kb: KnowledgeBase, batch: list[Event],
           baselines: Baselines = Baselines()) -> ElmAssessment:
    """Evaluate the FCM over the batch's leaf activations and classify the
    persuasion route against the baselines."""
    leafs = merge_leaf_activations(kb, batch)
    result = fcm_mod.evaluate(fcm, leafs)
    motivation = result.final.values[fcm.concept_id_of("motivation")]
    ability = result.final.values[fcm.concept_id_of("ability")]
    central = (motivation >= baselines.motivation_baseline
               and ability >= baselines.ability_baseline)
    return ElmAssessment(
        motivation=motivation,
        ability=ability,
        route="central" if central else "peripheral",
        baselines=baselines,
    )


# ---------------------------------------------------------- cycle pieces

def _run_assessment(ctx: CycleContext) -> ElmAssessment:
    ctx.assessment = assess(ctx.fcm, ctx.kb, ctx.batch, ctx.baselines)
    if ctx.on_assessment is not None:
        ctx.on_assessment(ctx.assessment)
    return ctx.assessment


def _pick_cue(ctx: CycleContext) -> PersuasionCue:
    a = ctx.assessment
    cue_ctx = CueContext(
        event_name=ctx.head().name,
        low_motivation=a.low_motivation,
        low_ability=a.low_ability,
    )
    ctx.selected_cue = select_cue(ctx.kb, cue_ctx)
    return ctx.selected_cue


def _cue_directive(cue: PersuasionCue) -> ActionDirective:
    return ActionDirective(kind="display_cue", cue_id=cue.id,
                           text=cue.text, expression=cue.expression)


def _teaching_map_id(ctx: CycleContext) -> str:
    if ctx.active_map_id is not None:
        return ctx.active_map_id
    map_id = ctx.head().attributes.get("map_id")
    if map_id is None:
        if not ctx.kb.concept_maps:
            raise NoActiveTeachingOpportunity("knowledge base has no concept map")
        map_id = ctx.kb.concept_maps[0].id
    ctx.active_map_id = map_id
    return map_id


def _prior_errors(ctx: CycleContext, map_id: str) -> set[str]:
    learnt = ctx.kb.learnt.get(map_id)
    return set(learnt.error_blanks) if learnt else set()


def _save_acquired(ctx: CycleContext) -> None:
    map_id = _teaching_map_id(ctx)
    save_learnt(ctx.kb, map_id, ctx.acquired_assignment or {}, ctx.out_dir)
    ctx.events.create_event(TEACHABILITY_EVENT, "administrative", "administrative",
                            {"map_id": map_id})


def _signal_rejection(ctx: CycleContext) -> None:
    ctx.events.create_event(REJECTION_EVENT, "dialogue", "learning_behavior")


def _grade_active(ctx: CycleContext) -> set[str]:
    map_id = _teaching_map_id(ctx)
    learnt = ctx.kb.learnt.get(map_id)
    if learnt is None:
        raise NoLearntKnowledge(f"nothing learnt for map {map_id!r}")
    spec = ctx.kb.map_by_id(map_id)
    errors = grade(spec, learnt.assignment)
    learnt.error_blanks = set(errors)
    if ctx.out_dir is not None:
        persist_learnt(ctx.kb, ctx.out_dir)
    return errors


def _signal_success(ctx: CycleContext) -> None:
    ctx.events.create_event(TEACH_SUCCESS_EVENT, "teaching_feedback", "knowledge_data",
                            {"map_id": _teaching_map_id(ctx)})


def _signal_failure(ctx: CycleContext) -> None:
    map_id = _teaching_map_id(ctx)
    ctx.events.create_event(TEACH_FAILURE_EVENT, "teaching_feedback", "knowledge_data",
                            {"map_id": map_id})
    ctx.events.create_event(WRONG_SOLUTION_EVENT, "administrative", "administrative",
                            {"map_id": map_id})


# ------------------------------------------------------------ cycle ops

def persuasion_cycle(ctx: CycleContext) -> ActionDirective:
    """Assess, check the route, and display a cue on the peripheral route."""
    a = _run_assessment(ctx)
    if a.route == "central":
        return NONE_DIRECTIVE
    directive = _cue_directive(_pick_cue(ctx))
    ctx.emit_directive(directive)
    return directive


def teachability_cycle(ctx: CycleContext, response: StudentResponse) -> ActionDirective:
    """Handle one teaching opportunity given the student's response."""
    map_id = _teaching_map_id(ctx)
    ctx.teaching_response = response
    if response.kind == "refused":
        _signal_rejection(ctx)
        return NONE_DIRECTIVE
    prior = _prior_errors(ctx, map_id)
    ctx.acquired_assignment = dict(response.assignment or {})
    _save_acquired(ctx)
    directive = ActionDirective(kind="show_concept_map", map_id=map_id,
                                error_blanks=tuple(sorted(prior)))
    ctx.emit_directive(directive)
    return directive


def practicability_cycle(ctx: CycleContext) -> ActionDirective:
    """Grade the learnt knowledge and signal success or failure."""
    errors = _grade_active(ctx)
    if not errors:
        _signal_success(ctx)
        directive = ActionDirective(kind="practice_success_feedback")
    else:
        _signal_failure(ctx)
        directive = ActionDirective(kind="practice_failure_feedback",
                                    error_blanks=tuple(sorted(errors)))
    ctx.emit_directive(directive)
    return directive


# --------------------------------------------------------- task registry

def build_task_registry() -> TaskRegistry:
    """Task functions for the bundled goal nets, keyed by transition task
    names. Every function receives the cycle context."""
    registry = TaskRegistry()

    def detect_event(ctx: CycleContext) -> None:
        # the session polls the batch before starting the cycle
        if not ctx.batch:
            raise EmptyBatch("cycle started with no events")

    def interpret_event(ctx: CycleContext) -> None:
        pass

    def select_reasoning_task(ctx: CycleContext) -> None:
        ctx.reasoning = select_reasoning(ctx.batch)
        ctx.decisions[DISPATCH_NODE] = COMPOSITE_BY_KIND[ctx.reasoning]

    def finish(ctx: CycleContext) -> None:
        ctx.finished = True

    def fcm_calculation(ctx: CycleContext) -> None:
        _run_assessment(ctx)

    def check_mot_abi(ctx: CycleContext) -> None:
        route = ctx.assessment.route
        ctx.decisions[PERSUASION_CHECK_NODE] = (
            CENTRAL_STATE if route == "central" else PERSUADE_STATE)

    def select_cue_task(ctx: CycleContext) -> None:
        _pick_cue(ctx)

    def execute_cue(ctx: CycleContext) -> None:
        ctx.emit_directive(_cue_directive(ctx.selected_cue))

    def require_teaching(ctx: CycleContext) -> None:
        _teaching_map_id(ctx)
        if ctx.request_response is None:
            raise PtaError("no student response source attached to this cycle")
        ctx.teaching_response = ctx.request_response()

    def check_response(ctx: CycleContext) -> None:
        accepted = ctx.teaching_response.kind == "accepted"
        ctx.decisions[TEACH_CHECK_NODE] = ACCEPTED_STATE if accepted else REFUSED_STATE

    def initialize_teaching(ctx: CycleContext) -> None:
        map_id = _teaching_map_id(ctx)
        ctx.emit_directive(ActionDirective(
            kind="show_concept_map", map_id=map_id,
            error_blanks=tuple(sorted(_prior_errors(ctx, map_id)))))

    def acquire_knowledge(ctx: CycleContext) -> None:
        if ctx.teaching_response.assignment is not None:
            ctx.acquired_assignment = dict(ctx.teaching_response.assignment)
        else:
            if ctx.request_assignment is None:
                raise PtaError("no assignment source attached to this cycle")
            ctx.acquired_assignment = dict(ctx.request_assignment())

    def save_knowledge(ctx: CycleContext) -> None:
        _save_acquired(ctx)

    def generate_rejection_event(ctx: CycleContext) -> None:
        _signal_rejection(ctx)

    def query_kb(ctx: CycleContext) -> None:
        map_id = _teaching_map_id(ctx)
        if ctx.kb.learnt.get(map_id) is None:
            raise NoLearntKnowledge(f"nothing learnt for map {map_id!r}")

    def reasoning_task(ctx: CycleContext) -> None:
        errors = _grade_active(ctx)
        ctx.decisions[PRACTICE_CHECK_NODE] = CORRECT_STATE if not errors else WRONG_STATE

    def carry_out_sol(ctx: CycleContext) -> None:
        _signal_success(ctx)
        ctx.emit_directive(ActionDirective(kind="practice_success_feedback"))

    def generate_wrong_sol_event(ctx: CycleContext) -> None:
        _signal_failure(ctx)
        map_id = _teaching_map_id(ctx)
        errors = ctx.kb.learnt[map_id].error_blanks
        ctx.emit_directive(ActionDirective(kind="practice_failure_feedback",
                                           error_blanks=tuple(sorted(errors))))

    registry.register("DetectEvent", detect_event)
    registry.register("InterpretEvent", interpret_event)
    registry.register("SelectReasoning", select_reasoning_task)
    registry.register("Finish", finish)
    registry.register("FCMCalculation", fcm_calculation)
    registry.register("CheckMotAbi", check_mot_abi)
    registry.register("SelectCue", select_cue_task)
    registry.register("ExecuteCue", execute_cue)
    registry.register("RequireTeaching", require_teaching)
    registry.register("CheckResponse", check_response)
    registry.register("InitializeTeaching", initialize_teaching)
    registry.register("AcquireKnowledge", acquire_knowledge)
    registry.register("SaveKnowledge", save_knowledge)
    registry.register("GenerateRejectionEvent", generate_rejection_event)
    registry.register("QueryKB", query_kb)
    registry.register("Reasoning", reasoning_task)
    registry.register("CarryOutSol", carry_out_sol)
    registry.register("GenerateWrongSolEvent", generate_wrong_sol_event)
    return registry
