"""Fuzzy cognitive map engine.

Sparse adjacency-list storage, trivalent thresholding, and fixed-point
iteration with cycle detection. Ships a dense matrix oracle used by the
equivalence tests; the sparse path and the oracle must agree exactly.

Update rule is the memoryless form: new_i = f(sum_j w_ji * v_j) for every
non-clamped concept with incoming edges. Concepts without incoming edges
hold their value, so sources behave as persistent percepts.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (DimensionMismatch, DocumentSyntaxError, InvariantError,
                     NonFiniteInput, NonLeafClamp, SchemaError, UnknownLeaf)

FACTOR_NAMES = (
    "personal_relevance",
    "personal_responsibility",
    "need_for_cognition",
    "prior_knowledge",
    "distraction",
    "repetition",
)
STEM_KINDS = ("motivation", "ability", "peripheral_cue", "factor")

DEFAULT_MAX_ROUNDS = 100


def threshold_trivalent(x: float) -> float:
    """Map a raw causal sum onto {-1, 0, 1} with cutoffs at +-0.5."""
    if not math.isfinite(x):
        raise NonFiniteInput(f"non-finite activation sum {x!r}")
    if x <= -0.5:
        return -1.0
    if x >= 0.5:
        return 1.0
    return 0.0


@dataclass(frozen=True)
class CausalConcept:
    id: str
    name: str
    role: str  # stem | leaf
    stem_kind: str | None = None
    factor_name: str | None = None


@dataclass
class AdjacencyList:
    out_edges: dict[str, list[tuple[str, float]]] = field(default_factory=dict)

    def add(self, src: str, tgt: str, weight: float) -> None:
        self.out_edges.setdefault(src, []).append((tgt, weight))

    def edge_count(self) -> int:
        return sum(len(v) for v in self.out_edges.values())


@dataclass
class FcmModel:
    mode: str  # "pta" | "generic"
    concepts: list[CausalConcept]
    edges: AdjacencyList
    threshold: str = "trivalent"
    max_rounds: int = DEFAULT_MAX_ROUNDS

    def __post_init__(self):
        self._by_id = {c.id: c for c in self.concepts}
        self._in_edges: dict[str, list[tuple[str, float]]] = {c.id: [] for c in self.concepts}
        for src, targets in self.edges.out_edges.items():
            for tgt, w in targets:
                self._in_edges[tgt].append((src, w))

    def concept(self, concept_id: str) -> CausalConcept:
        return self._by_id[concept_id]

    def in_edges(self, concept_id: str) -> list[tuple[str, float]]:
        return self._in_edges[concept_id]

    def leaf_ids(self) -> list[str]:
        return [c.id for c in self.concepts if c.role == "leaf"]

    def stem_ids(self) -> list[str]:
        return [c.id for c in self.concepts if c.role == "stem"]

    def factor_ids(self) -> list[str]:
        return [c.id for c in self.concepts if c.stem_kind == "factor"]

    def concept_id_of(self, stem_kind: str) -> str:
        return next(c.id for c in self.concepts if c.stem_kind == stem_kind)

    def weight(self, src: str, tgt: str) -> float | None:
        for t, w in self.edges.out_edges.get(src, []):
            if t == tgt:
                return w
        return None

    def decomposition_valid(self) -> bool:
        """True when factor values are fully determined by leaves, so the
        main-stem subgraph can be iterated alone after the first round."""
        if self.mode != "pta":
            return False
        factors = set(self.factor_ids())
        for f in factors:
            for src, _w in self._in_edges[f]:
                if self._by_id[src].role != "leaf":
                    return False
        for leaf in self.leaf_ids():
            for tgt, _w in self.edges.out_edges.get(leaf, []):
                if tgt not in factors:
                    return False
        return True


@dataclass
class ActivationVector:
    values: dict[str, float]
    clamped: set[str] = field(default_factory=set)

    def as_tuple(self, order: list[str]) -> tuple[float, ...]:
        return tuple(self.values[c] for c in order)


@dataclass
class FcmResult:
    final: ActivationVector
    rounds: int
    converged: bool
    cycle_detected: bool


class EdgeVisitCounter:
    """Instrumentation hook: records every edge traversal per round."""

    def __init__(self):
        self.visits: list[tuple[int, str, str]] = []

    def record(self, round_index: int, src: str, tgt: str) -> None:
        self.visits.append((round_index, src, tgt))

    def total(self) -> int:
        return len(self.visits)

    def after_round(self, round_index: int) -> list[tuple[int, str, str]]:
        return [v for v in self.visits if v[0] > round_index]


# ---------------------------------------------------------------- parsing

_CONCEPT_FIELDS = {"id", "name", "role", "stem_kind", "factor_name"}
_EDGE_FIELDS = {"from", "to", "weight"}
_MODEL_FIELDS = {"mode", "concepts", "edges", "threshold", "max_rounds"}


def parse_fcm(document: str) -> FcmModel:
    """Parse and validate an FCM document; invariant violations name the
    offending concept or edge."""
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(obj, dict):
        raise SchemaError("document must be an object", "")
    for key in obj:
        if key not in _MODEL_FIELDS:
            raise SchemaError(f"unexpected field {key!r}", f"/{key}")
    mode = obj.get("mode", "pta")
    if mode not in ("pta", "generic"):
        raise SchemaError(f"unknown mode {mode!r}", "/mode")
    threshold = obj.get("threshold", "trivalent")
    if threshold != "trivalent":
        raise SchemaError(f"unsupported threshold {threshold!r}", "/threshold")
    max_rounds = obj.get("max_rounds", DEFAULT_MAX_ROUNDS)
    if not isinstance(max_rounds, int) or max_rounds < 1:
        raise SchemaError("max_rounds must be a positive integer", "/max_rounds")

    if "concepts" not in obj:
        raise SchemaError("missing field 'concepts'", "/concepts")
    if "edges" not in obj:
        raise SchemaError("missing field 'edges'", "/edges")

    concepts = []
    for i, raw in enumerate(obj["concepts"]):
        p = f"/concepts/{i}"
        for key in raw:
            if key not in _CONCEPT_FIELDS:
                raise SchemaError(f"unexpected field {key!r}", f"{p}/{key}")
        for key in ("id", "name", "role"):
            if key not in raw:
                raise SchemaError(f"missing field {key!r}", f"{p}/{key}")
        if raw["role"] not in ("stem", "leaf"):
            raise SchemaError(f"unknown role {raw['role']!r}", f"{p}/role")
        concepts.append(CausalConcept(
            id=raw["id"], name=raw["name"], role=raw["role"],
            stem_kind=raw.get("stem_kind"), factor_name=raw.get("factor_name"),
        ))

    edges = AdjacencyList()
    seen_pairs: set[tuple[str, str]] = set()
    ids = {c.id for c in concepts}
    for i, raw in enumerate(obj["edges"]):
        p = f"/edges/{i}"
        for key in raw:
            if key not in _EDGE_FIELDS:
                raise SchemaError(f"unexpected field {key!r}", f"{p}/{key}")
        for key in _EDGE_FIELDS:
            if key not in raw:
                raise SchemaError(f"missing field {key!r}", f"{p}/{key}")
        src, tgt, weight = raw["from"], raw["to"], float(raw["weight"])
        if src not in ids or tgt not in ids:
            raise InvariantError(f"edge {src}->{tgt} references unknown concept")
        if (src, tgt) in seen_pairs:
            raise InvariantError(f"duplicate edge {src}->{tgt}")
        if not -1.0 <= weight <= 1.0:
            raise InvariantError(f"edge {src}->{tgt} weight {weight} outside [-1,1]")
        seen_pairs.add((src, tgt))
        edges.add(src, tgt, weight)

    model = FcmModel(mode=mode, concepts=concepts, edges=edges,
                     threshold=threshold, max_rounds=max_rounds)
    _validate_model(model)
    return model


def _validate_model(model: FcmModel) -> None:
    seen: set[str] = set()
    for c in model.concepts:
        if c.id in seen:
            raise InvariantError(f"duplicate concept id {c.id!r}")
        seen.add(c.id)
        if c.stem_kind is not None:
            if c.role != "stem":
                raise InvariantError(f"concept {c.id!r}: stem_kind on non-stem")
            if c.stem_kind not in STEM_KINDS:
                raise InvariantError(f"concept {c.id!r}: unknown stem_kind {c.stem_kind!r}")
        if c.factor_name is not None:
            if c.stem_kind != "factor":
                raise InvariantError(f"concept {c.id!r}: factor_name on non-factor")
            if c.factor_name not in FACTOR_NAMES:
                raise InvariantError(f"concept {c.id!r}: unknown factor {c.factor_name!r}")

    if model.mode == "pta":
        kinds = [c.stem_kind for c in model.concepts if c.role == "stem"]
        factors = sorted(c.factor_name for c in model.concepts if c.stem_kind == "factor")
        expected = sorted(FACTOR_NAMES)
        if kinds.count("motivation") != 1 or kinds.count("ability") != 1 \
                or kinds.count("peripheral_cue") != 1 or factors != expected \
                or any(k is None for k in kinds):
            missing = set(expected) - set(factors)
            raise InvariantError(
                "pta mode requires exactly the stem set motivation, ability, "
                f"peripheral_cue and the six factors (missing: {sorted(missing) or 'none'})")
        for c in model.concepts:
            if c.role != "leaf":
                continue
            if model.in_edges(c.id):
                raise InvariantError(f"leaf {c.id!r} has incoming edges")
            factor_ids = set(model.factor_ids())
            outs = model.edges.out_edges.get(c.id, [])
            if not any(t in factor_ids for t, _w in outs):
                raise InvariantError(f"leaf {c.id!r} has no outgoing edge into a factor")


# -------------------------------------------------------------- evaluation

def _check_cover(model: FcmModel, v: ActivationVector) -> None:
    ids = {c.id for c in model.concepts}
    if set(v.values) != ids:
        raise DimensionMismatch(
            f"activation vector covers {len(v.values)} concepts, model has {len(ids)}")


def fcm_step(model: FcmModel, v: ActivationVector,
             counter: EdgeVisitCounter | None = None,
             round_index: int = 1,
             only: set[str] | None = None) -> ActivationVector:
    """One sparse update round. Concepts outside `only` (when given), clamped
    concepts, and concepts without incoming edges keep their value."""
    _check_cover(model, v)
    new_values = dict(v.values)
    for c in model.concepts:
        if only is not None and c.id not in only:
            continue
        if c.id in v.clamped:
            continue
        in_edges = model.in_edges(c.id)
        if not in_edges:
            continue
        total = 0.0
        for src, w in in_edges:
            if counter is not None:
                counter.record(round_index, src, c.id)
            total += w * v.values[src]
        new_values[c.id] = threshold_trivalent(total)
    return ActivationVector(values=new_values, clamped=set(v.clamped))


def dense_oracle_step(model: FcmModel, v: ActivationVector) -> ActivationVector:
    """Full matrix-vector update; the independent oracle for fcm_step."""
    _check_cover(model, v)
    order = [c.id for c in model.concepts]
    index = {cid: i for i, cid in enumerate(order)}
    n = len(order)
    matrix = np.zeros((n, n))
    for src, targets in model.edges.out_edges.items():
        for tgt, w in targets:
            matrix[index[src], index[tgt]] = w
    vec = np.array([v.values[cid] for cid in order])
    raw = vec @ matrix
    indegree = (matrix != 0).sum(axis=0)
    new_values = dict(v.values)
    for cid in order:
        i = index[cid]
        if cid in v.clamped or indegree[i] == 0:
            continue
        new_values[cid] = threshold_trivalent(float(raw[i]))
    return ActivationVector(values=new_values, clamped=set(v.clamped))


def initial_vector(model: FcmModel,
                   leaf_activations: dict[str, float] | None = None,
                   initial: dict[str, float] | None = None) -> ActivationVector:
    values = {c.id: 0.0 for c in model.concepts}
    if initial:
        values.update(initial)
    clamped: set[str] = set()
    leaf_ids = set(model.leaf_ids())
    for leaf, activation in (leaf_activations or {}).items():
        if leaf not in values:
            raise UnknownLeaf(leaf)
        if leaf not in leaf_ids:
            raise NonLeafClamp(f"{leaf!r} is not a leaf concept")
        if not -1.0 <= activation <= 1.0:
            raise InvariantError(f"activation {activation} for {leaf!r} outside [-1,1]")
        values[leaf] = float(activation)
        clamped.add(leaf)
    return ActivationVector(values=values, clamped=clamped)


def evaluate(model: FcmModel,
             leaf_activations: dict[str, float] | None = None,
             initial: dict[str, float] | None = None,
             max_rounds: int | None = None,
             counter: EdgeVisitCounter | None = None,
             force_naive: bool = False) -> FcmResult:
    """Clamp leaves and iterate to a fixed point or a cycle.

    When the model decomposes (factor inputs come only from leaves), rounds
    after the first touch only the stem subgraph; this is exact, never an
    approximation, and matches naive full iteration in final vector,
    converged flag, and round count. `initial` is a test hook overriding the
    all-zero starting values.
    """
    max_rounds = max_rounds if max_rounds is not None else model.max_rounds
    order = [c.id for c in model.concepts]
    v = initial_vector(model, leaf_activations, initial)

    decomposed = model.decomposition_valid() and not force_naive
    # in partial rounds only non-factor stems can change
    iterating = {c.id for c in model.concepts
                 if c.role == "stem" and c.stem_kind != "factor"}

    history = {v.as_tuple(order): 0}
    rounds = 0
    while rounds < max_rounds:
        rounds += 1
        only = iterating if (decomposed and rounds >= 2) else None
        nxt = fcm_step(model, v, counter=counter, round_index=rounds, only=only)
        key = nxt.as_tuple(order)
        if key == v.as_tuple(order):
            return FcmResult(final=nxt, rounds=rounds, converged=True, cycle_detected=False)
        if key in history:
            return FcmResult(final=nxt, rounds=rounds, converged=False, cycle_detected=True)
        history[key] = rounds
        v = nxt
    return FcmResult(final=v, rounds=rounds, converged=False, cycle_detected=False)
