import pytest

from pta_engine import reasoning as R
from pta_engine.errors import EmptyBatch, NoLearntKnowledge
from pta_engine.events import EventControl, VirtualClock
from pta_engine.knowledge import save_learnt


def make_events(*specs):
    ctl = EventControl(VirtualClock(0))
    for name, etype, cat in specs:
        ctl.create_event(name, etype, cat)
    return ctl, ctl.poll()


def make_ctx(pta_fcm, kb, *specs, **kwargs):
    ctl, batch = make_events(*specs)
    return R.CycleContext(fcm=pta_fcm, kb=kb, events=ctl, batch=batch, **kwargs)


DLG = ("dialogue", "learning_behavior")
ADMIN = ("administrative", "administrative")
FEEDBACK = ("teaching_feedback", "knowledge_data")


class TestSelectReasoning:
    def test_rejection_routes_to_persuasion(self):
        _ctl, batch = make_events(("Not Teach Water Molecule", *DLG))
        assert R.select_reasoning(batch) == R.PERSUASION

    def test_teachability_event_routes_to_practicability(self):
        _ctl, batch = make_events(("Teachability Event", *ADMIN))
        assert R.select_reasoning(batch) == R.PRACTICABILITY

    def test_teach_success_routes_to_persuasion(self):
        _ctl, batch = make_events(("Teach Success", *FEEDBACK))
        assert R.select_reasoning(batch) == R.PERSUASION

    def test_teaching_point_routes_to_teachability(self):
        _ctl, batch = make_events(("Teaching Point Reached", *ADMIN))
        assert R.select_reasoning(batch) == R.TEACHABILITY

    def test_wrong_solution_routes_to_persuasion(self):
        _ctl, batch = make_events(("Wrong Solution", *ADMIN))
        assert R.select_reasoning(batch) == R.PERSUASION

    def test_empty_batch_rejected(self):
        with pytest.raises(EmptyBatch):
            R.select_reasoning([])


class TestAssess:
    def test_distraction_drops_ability(self, pta_fcm, kb):
        _ctl, batch = make_events(("Chat with Animal", *DLG))
        a = R.assess(pta_fcm, kb, batch)
        assert a.ability == -1.0
        assert a.route == "peripheral"

    def test_learning_and_applying_reach_central(self, pta_fcm, kb):
        _ctl, batch = make_events(("Learn Diffusion", *DLG),
                                  ("Apply Diffusion", *DLG))
        a = R.assess(pta_fcm, kb, batch)
        assert (a.motivation, a.ability) == (1.0, 1.0)
        assert a.route == "central"

    def test_low_flags_follow_baselines(self, pta_fcm, kb):
        _ctl, batch = make_events(("Not Learning", *DLG))
        a = R.assess(pta_fcm, kb, batch)
        assert a.low_motivation and a.low_ability


class TestMergeLeafActivations:
    def test_larger_magnitude_wins(self, kb):
        _ctl, batch = make_events(("Chat with Animal", *DLG))
        kb.factor_map["Half Distraction"] = [("leaf_distraction_signal", 0.5)]
        _ctl2, batch2 = make_events(("Half Distraction", *DLG),
                                    ("Chat with Animal", *DLG))
        merged = R.merge_leaf_activations(kb, batch2)
        assert merged["leaf_distraction_signal"] == 1.0

    def test_equal_magnitude_resolves_negative(self, kb):
        kb.factor_map["Pos"] = [("leaf_cognition_signal", 1.0)]
        kb.factor_map["Neg"] = [("leaf_cognition_signal", -1.0)]
        _ctl, batch = make_events(("Pos", *DLG), ("Neg", *DLG))
        assert R.merge_leaf_activations(kb, batch)["leaf_cognition_signal"] == -1.0


class TestPersuasionCycle:
    def test_central_route_no_action(self, pta_fcm, kb):
        ctx = make_ctx(pta_fcm, kb, ("Learn Diffusion", *DLG),
                       ("Apply Diffusion", *DLG))
        directive = R.persuasion_cycle(ctx)
        assert directive.kind == "none"
        assert ctx.directives == []

    def test_rejection_head_displays_teaching_cue(self, pta_fcm, kb):
        ctx = make_ctx(pta_fcm, kb, ("Not Teach Water Molecule", *DLG))
        directive = R.persuasion_cycle(ctx)
        assert directive.kind == "display_cue"
        assert directive.cue_id == "cue-not-teach"
        assert "teach" in directive.text.lower()

    def test_teach_failure_cue_is_sad(self, pta_fcm, kb):
        ctx = make_ctx(pta_fcm, kb, ("Teach Failure", *FEEDBACK))
        directive = R.persuasion_cycle(ctx)
        assert directive.expression == "sad"


class TestTeachabilityCycle:
    def head(self):
        return ("Teaching Point Reached", *ADMIN)

    def test_refusal_emits_rejection(self, pta_fcm, kb):
        ctx = make_ctx(pta_fcm, kb, self.head())
        directive = R.teachability_cycle(ctx, R.StudentResponse(kind="refused"))
        assert directive.kind == "none"
        pending = [e.name for e in ctx.events.pending]
        assert pending == ["Not Teach Water Molecule"]

    def test_acceptance_saves_and_signals_practice(self, pta_fcm, kb):
        ctx = make_ctx(pta_fcm, kb, self.head())
        response = R.StudentResponse(kind="accepted",
                                     assignment={"b1": "diffusion"})
        directive = R.teachability_cycle(ctx, response)
        assert directive.kind == "show_concept_map"
        assert kb.learnt["diffusion_basics"].assignment == {"b1": "diffusion"}
        pending = [e.name for e in ctx.events.pending]
        assert pending == ["Teachability Event"]

    def test_reteach_carries_prior_errors(self, pta_fcm, kb):
        save_learnt(kb, "diffusion_basics", {"b1": "osmosis"})
        kb.learnt["diffusion_basics"].error_blanks = {"b1", "b2"}
        ctx = make_ctx(pta_fcm, kb, self.head())
        response = R.StudentResponse(kind="accepted",
                                     assignment={"b1": "diffusion"})
        directive = R.teachability_cycle(ctx, response)
        assert directive.error_blanks == ("b1", "b2")


class TestPracticabilityCycle:
    def head(self):
        return ("Teachability Event", *ADMIN)

    def test_correct_solution_signals_success(self, pta_fcm, kb):
        save_learnt(kb, "diffusion_basics",
                    {"b1": "diffusion", "b2": "high", "b3": "low"})
        ctx = make_ctx(pta_fcm, kb, self.head())
        directive = R.practicability_cycle(ctx)
        assert directive.kind == "practice_success_feedback"
        assert [e.name for e in ctx.events.pending] == ["Teach Success"]

    def test_wrong_solution_signals_both_events(self, pta_fcm, kb):
        save_learnt(kb, "diffusion_basics", {"b1": "diffusion", "b2": "low"})
        ctx = make_ctx(pta_fcm, kb, self.head())
        directive = R.practicability_cycle(ctx)
        assert directive.kind == "practice_failure_feedback"
        assert directive.error_blanks == ("b2", "b3")
        assert kb.learnt["diffusion_basics"].error_blanks == {"b2", "b3"}
        names = {e.name for e in ctx.events.pending}
        assert names == {"Teach Failure", "Wrong Solution"}

    def test_nothing_learnt_is_an_error(self, pta_fcm, kb):
        ctx = make_ctx(pta_fcm, kb, self.head())
        with pytest.raises(NoLearntKnowledge):
            R.practicability_cycle(ctx)


def test_registry_covers_bundled_net(main_routine):
    assert R.build_task_registry().covers(main_routine) is None
