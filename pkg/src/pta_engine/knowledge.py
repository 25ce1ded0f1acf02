"""Knowledge base: concept-map answer keys (domain knowledge), knowledge
learnt from the student, the persuasion cue store, and the event-to-leaf
activation map feeding the FCM."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (DocumentSyntaxError, InvariantError, PreconditionViolation,
                     SchemaError, UnknownBlank, UnknownLabel, UnknownMap)
from .fcm import FcmModel

EXPRESSIONS = ("happy", "sad", "neutral", "encouraging")
DEFAULT_CUE_ID = "default"


@dataclass(frozen=True)
class ConceptMapSpec:
    id: str
    blanks: tuple[tuple[str, str], ...]  # (blank id, prompt)
    labels: tuple[str, ...]
    answer_key: dict[str, str]

    def blank_ids(self) -> list[str]:
        return [b for b, _p in self.blanks]


@dataclass
class LearntKnowledge:
    map_id: str
    assignment: dict[str, str | None]
    error_blanks: set[str] = field(default_factory=set)

    def to_obj(self) -> dict:
        return {
            "map_id": self.map_id,
            "assignment": self.assignment,
            "error_blanks": sorted(self.error_blanks),
        }

    @staticmethod
    def from_obj(obj: dict) -> "LearntKnowledge":
        return LearntKnowledge(
            map_id=obj["map_id"],
            assignment=dict(obj["assignment"]),
            error_blanks=set(obj["error_blanks"]),
        )


@dataclass(frozen=True)
class CueTrigger:
    event_name: str | None = None
    low_motivation: bool | None = None
    low_ability: bool | None = None

    def fields_set(self) -> int:
        return sum(f is not None for f in (self.event_name, self.low_motivation, self.low_ability))


@dataclass(frozen=True)
class PersuasionCue:
    id: str
    trigger: CueTrigger
    text: str
    expression: str


@dataclass(frozen=True)
class CueContext:
    event_name: str
    low_motivation: bool
    low_ability: bool


@dataclass
class KnowledgeBase:
    concept_maps: list[ConceptMapSpec]
    cues: list[PersuasionCue]
    factor_map: dict[str, list[tuple[str, float]]]  # event name -> (leaf id, activation)
    learnt: dict[str, LearntKnowledge] = field(default_factory=dict)

    def map_by_id(self, map_id: str) -> ConceptMapSpec:
        for spec in self.concept_maps:
            if spec.id == map_id:
                return spec
        raise UnknownMap(map_id)

    def cue_by_id(self, cue_id: str) -> PersuasionCue:
        return next(c for c in self.cues if c.id == cue_id)


# ---------------------------------------------------------------- loading

def load_kb(document: str, fcm: FcmModel | None = None) -> KnowledgeBase:
    """Parse and validate a KB document; with an FCM given, factor_map leaf
    references are cross-checked against it."""
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(obj, dict):
        raise SchemaError("document must be an object", "")
    for key in obj:
        if key not in ("concept_maps", "cues", "factor_map"):
            raise SchemaError(f"unexpected field {key!r}", f"/{key}")
    for key in ("concept_maps", "cues", "factor_map"):
        if key not in obj:
            raise SchemaError(f"missing field {key!r}", f"/{key}")

    maps = []
    for i, raw in enumerate(obj["concept_maps"]):
        p = f"/concept_maps/{i}"
        for key in ("id", "blanks", "labels", "answer_key"):
            if key not in raw:
                raise SchemaError(f"missing field {key!r}", f"{p}/{key}")
        blanks = tuple((b["id"], b["prompt"]) for b in raw["blanks"])
        labels = tuple(raw["labels"])
        answer_key = dict(raw["answer_key"])
        blank_ids = [b for b, _p in blanks]
        if sorted(answer_key) != sorted(blank_ids):
            raise InvariantError(f"map {raw['id']!r}: answer key must cover every blank exactly")
        for blank, label in answer_key.items():
            if label not in labels:
                raise InvariantError(f"map {raw['id']!r}: answer {label!r} for {blank!r} not among labels")
        maps.append(ConceptMapSpec(id=raw["id"], blanks=blanks, labels=labels, answer_key=answer_key))

    cues = []
    seen_ids: set[str] = set()
    for i, raw in enumerate(obj["cues"]):
        p = f"/cues/{i}"
        for key in ("id", "trigger", "text", "expression"):
            if key not in raw:
                raise SchemaError(f"missing field {key!r}", f"{p}/{key}")
        if raw["id"] in seen_ids:
            raise InvariantError(f"duplicate cue id {raw['id']!r}")
        seen_ids.add(raw["id"])
        if raw["expression"] not in EXPRESSIONS:
            raise InvariantError(f"cue {raw['id']!r}: unknown expression {raw['expression']!r}")
        trig = raw["trigger"]
        trigger = CueTrigger(
            event_name=trig.get("event_name"),
            low_motivation=trig.get("low_motivation"),
            low_ability=trig.get("low_ability"),
        )
        # the designated default cue is the catch-all and may be fully wildcard
        if raw["id"] != DEFAULT_CUE_ID and trigger.fields_set() == 0:
            raise InvariantError(f"cue {raw['id']!r}: at least one trigger field must be set")
        cues.append(PersuasionCue(id=raw["id"], trigger=trigger,
                                  text=raw["text"], expression=raw["expression"]))
    if DEFAULT_CUE_ID not in seen_ids:
        raise InvariantError("knowledge base must contain a cue with id 'default'")

    factor_map: dict[str, list[tuple[str, float]]] = {}
    for i, raw in enumerate(obj["factor_map"]):
        p = f"/factor_map/{i}"
        for key in ("event", "activations"):
            if key not in raw:
                raise SchemaError(f"missing field {key!r}", f"{p}/{key}")
        entries = []
        for a in raw["activations"]:
            leaf, value = a["leaf"], float(a["value"])
            if not -1.0 <= value <= 1.0:
                raise InvariantError(f"factor_map {raw['event']!r}: activation {value} outside [-1,1]")
            entries.append((leaf, value))
        factor_map[raw["event"]] = entries

    kb = KnowledgeBase(concept_maps=maps, cues=cues, factor_map=factor_map)
    if fcm is not None:
        validate_against_fcm(kb, fcm)
    return kb


def validate_against_fcm(kb: KnowledgeBase, fcm: FcmModel) -> None:
    leaf_ids = set(fcm.leaf_ids())
    for event_name, entries in kb.factor_map.items():
        for leaf, _value in entries:
            if leaf not in leaf_ids:
                raise InvariantError(
                    f"factor_map for {event_name!r} references unknown leaf {leaf!r}")


# ------------------------------------------------------------- operations

def save_learnt(kb: KnowledgeBase, map_id: str, assignment: dict[str, str | None],
                out_dir: Path | str | None = None) -> LearntKnowledge:
    """Replace learnt knowledge for a map; persists when out_dir is given."""
    spec = kb.map_by_id(map_id)
    blank_ids = set(spec.blank_ids())
    for blank, label in assignment.items():
        if blank not in blank_ids:
            raise UnknownBlank(f"{blank!r} is not a blank of map {map_id!r}")
        if label is not None and label not in spec.labels:
            raise UnknownLabel(f"{label!r} is not a label of map {map_id!r}")
    prior = kb.learnt.get(map_id)
    learnt = LearntKnowledge(
        map_id=map_id,
        assignment=dict(assignment),
        error_blanks=set(prior.error_blanks) if prior else set(),
    )
    kb.learnt[map_id] = learnt
    if out_dir is not None:
        persist_learnt(kb, out_dir)
    return learnt


def persist_learnt(kb: KnowledgeBase, out_dir: Path | str) -> Path:
    Path(out_dir).mkdir(parents=True, exist_ok=True)
    path = Path(out_dir) / "learnt.json"
    obj = {map_id: lk.to_obj() for map_id, lk in sorted(kb.learnt.items())}
    path.write_text(json.dumps(obj, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return path


def load_learnt(kb: KnowledgeBase, out_dir: Path | str) -> None:
    path = Path(out_dir) / "learnt.json"
    if not path.exists():
        return
    obj = json.loads(path.read_text(encoding="utf-8"))
    kb.learnt = {map_id: LearntKnowledge.from_obj(raw) for map_id, raw in obj.items()}


def select_cue(kb: KnowledgeBase, ctx: CueContext) -> PersuasionCue:
    """Most specific matching cue; ties break on lexicographic cue id; the
    designated default cue guarantees totality."""
    if not (ctx.low_motivation or ctx.low_ability):
        raise PreconditionViolation("persuasion fires only on low motivation or low ability")
    best: PersuasionCue | None = None
    best_rank: tuple[int, str] | None = None
    for cue in kb.cues:
        if cue.id == DEFAULT_CUE_ID:
            continue
        t = cue.trigger
        if t.event_name is not None and t.event_name != ctx.event_name:
            continue
        if t.low_motivation is not None and t.low_motivation != ctx.low_motivation:
            continue
        if t.low_ability is not None and t.low_ability != ctx.low_ability:
            continue
        rank = (-t.fields_set(), cue.id)
        if best_rank is None or rank < best_rank:
            best, best_rank = cue, rank
    if best is not None:
        return best
    return kb.cue_by_id(DEFAULT_CUE_ID)


def grade(spec: ConceptMapSpec, assignment: dict[str, str | None]) -> set[str]:
    """Blanks whose assignment mismatches the key; unfilled counts as wrong."""
    errors: set[str] = set()
    for blank in spec.blank_ids():
        if assignment.get(blank) != spec.answer_key[blank]:
            errors.add(blank)
    return errors
