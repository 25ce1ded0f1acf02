"""Goal-oriented persuasive teachable agent engine.

Workflow models are goal nets interpreted against a task registry; the
agent assesses student motivation and ability with a fuzzy cognitive map
and reacts to game events through teaching, practicing, and persuasion
cycles. Sessions replay scripted traces or run live over a WebSocket.
"""

from .errors import PtaError
from .events import Event, EventControl, VirtualClock
from .fcm import (ActivationVector, FcmModel, FcmResult, dense_oracle_step,
                  evaluate, fcm_step, parse_fcm, threshold_trivalent)
from .goalnet import (GoalNet, Violation, parse_goalnet, serialize_goalnet,
                      successors, validate_goalnet)
from .interpreter import (ADVANCED, REACHED_GOAL, DecisionTable, TaskRegistry,
                          TraversalLog, run_to_goal, start, step)
from .knowledge import (KnowledgeBase, grade, load_kb, save_learnt,
                        select_cue)
from .reasoning import (ActionDirective, Baselines, CycleContext,
                        ElmAssessment, assess, build_task_registry,
                        persuasion_cycle, practicability_cycle,
                        select_reasoning, teachability_cycle)
from .session import (PtaSession, SessionConfig, Trace, bundled_config,
                      load_config, parse_scenario, parse_trace, run_trace)

__version__ = "0.1.0"

__all__ = [
    "ADVANCED",
    "ActionDirective",
    "ActivationVector",
    "Baselines",
    "CycleContext",
    "DecisionTable",
    "ElmAssessment",
    "Event",
    "EventControl",
    "FcmModel",
    "FcmResult",
    "GoalNet",
    "KnowledgeBase",
    "PtaError",
    "PtaSession",
    "REACHED_GOAL",
    "SessionConfig",
    "TaskRegistry",
    "Trace",
    "TraversalLog",
    "VirtualClock",
    "Violation",
    "assess",
    "build_task_registry",
    "bundled_config",
    "dense_oracle_step",
    "evaluate",
    "fcm_step",
    "grade",
    "load_config",
    "load_kb",
    "parse_fcm",
    "parse_goalnet",
    "parse_scenario",
    "parse_trace",
    "persuasion_cycle",
    "practicability_cycle",
    "run_to_goal",
    "run_trace",
    "save_learnt",
    "select_cue",
    "select_reasoning",
    "serialize_goalnet",
    "start",
    "step",
    "successors",
    "teachability_cycle",
    "threshold_trivalent",
    "validate_goalnet",
]
