import itertools
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pta_engine import fcm as F
from pta_engine.errors import (DimensionMismatch, InvariantError, NonFiniteInput,
                               NonLeafClamp, UnknownLeaf)
from tests.conftest import CHAIN_FCM

WEIGHTS = (-1.0, -0.5, 0.5, 1.0)
ACTIVATIONS = (-1.0, 0.0, 1.0)


def test_threshold_boundaries():
    pairs = [(-1, -1), (-0.5, -1), (-0.4999, 0), (0, 0), (0.4999, 0), (0.5, 1), (1, 1)]
    for x, expected in pairs:
        assert F.threshold_trivalent(x) == expected


def test_threshold_rejects_non_finite():
    for bad in (float("nan"), float("inf"), float("-inf")):
        with pytest.raises(NonFiniteInput):
            F.threshold_trivalent(bad)


def test_small_map_weight_lookup(small_fcm):
    assert small_fcm.weight("C2", "C4") == -1.0


def test_small_map_step_from_ones(small_fcm):
    w14 = small_fcm.weight("C1", "C4")
    v = F.ActivationVector({"C1": 1.0, "C2": 1.0, "C3": 0.0, "C4": 0.0})
    out = F.fcm_step(small_fcm, v)
    assert out.values["C4"] == F.threshold_trivalent(w14 - 1.0)
    oracle = F.dense_oracle_step(small_fcm, v)
    assert out.values == oracle.values


def test_small_map_step_from_e2(small_fcm):
    v = F.ActivationVector({"C1": 0.0, "C2": 1.0, "C3": 0.0, "C4": 0.0})
    out = F.dense_oracle_step(small_fcm, v)
    assert out.values["C4"] == -1.0


def test_chain_two_steps(chain_fcm):
    v = F.initial_vector(chain_fcm, {"L": 1.0})
    one = F.fcm_step(chain_fcm, v)
    assert (one.values["F"], one.values["M"]) == (1.0, 0.0)
    two = F.fcm_step(chain_fcm, one)
    assert two.values["M"] == 1.0
    assert F.dense_oracle_step(chain_fcm, one).values == two.values


def test_chain_evaluate_converges(chain_fcm):
    result = F.evaluate(chain_fcm, {"L": 1.0})
    assert result.converged and not result.cycle_detected
    assert result.final.values["M"] == 1.0
    assert result.rounds <= 3


def test_no_edges_is_identity():
    model = F.parse_fcm(json.dumps({
        "mode": "generic",
        "concepts": [{"id": "A", "name": "A", "role": "stem"}],
        "edges": [],
    }))
    result = F.evaluate(model, initial={"A": 1.0})
    assert result.converged and result.rounds == 1
    assert result.final.values == {"A": 1.0}


def test_empty_activations_all_zero(pta_fcm):
    result = F.evaluate(pta_fcm, {})
    assert result.converged and result.rounds == 1
    assert set(result.final.values.values()) == {0.0}


def test_mutual_negative_pair_cycles():
    model = F.parse_fcm(json.dumps({
        "mode": "generic",
        "concepts": [
            {"id": "X", "name": "X", "role": "stem"},
            {"id": "Y", "name": "Y", "role": "stem"},
        ],
        "edges": [
            {"from": "X", "to": "Y", "weight": -1},
            {"from": "Y", "to": "X", "weight": -1},
        ],
    }))
    result = F.evaluate(model, initial={"X": 1.0, "Y": 1.0})
    assert result.cycle_detected and not result.converged


def test_clamp_validation(chain_fcm):
    with pytest.raises(UnknownLeaf):
        F.initial_vector(chain_fcm, {"ghost": 1.0})
    with pytest.raises(NonLeafClamp):
        F.initial_vector(chain_fcm, {"M": 1.0})
    with pytest.raises(InvariantError):
        F.initial_vector(chain_fcm, {"L": 2.0})


def test_dimension_mismatch(chain_fcm):
    with pytest.raises(DimensionMismatch):
        F.fcm_step(chain_fcm, F.ActivationVector({"L": 0.0}))


def test_pta_mode_rejects_missing_factor():
    doc = json.loads(json.dumps(CHAIN_FCM))
    doc["mode"] = "pta"
    doc["concepts"][1]["stem_kind"] = "motivation"
    doc["concepts"][2]["stem_kind"] = "ability"
    with pytest.raises(InvariantError):
        F.parse_fcm(json.dumps(doc))


def test_pta_mode_rejects_leaf_with_incoming_edge():
    from pta_engine.assets import asset_text
    doc = json.loads(asset_text("pta_fcm.json"))
    doc["edges"].append({"from": "c_motivation", "to": "leaf_relevance_signal", "weight": 1})
    with pytest.raises(InvariantError):
        F.parse_fcm(json.dumps(doc))


def random_model(rng: random.Random) -> F.FcmModel:
    n = rng.randint(2, 12)
    concepts = [{"id": f"c{i}", "name": f"c{i}", "role": "stem"} for i in range(n)]
    edges = []
    for src in range(n):
        for tgt in range(n):
            if src != tgt and rng.random() < 0.3:
                edges.append({"from": f"c{src}", "to": f"c{tgt}",
                              "weight": rng.choice(WEIGHTS)})
    return F.parse_fcm(json.dumps({"mode": "generic", "concepts": concepts,
                                   "edges": edges}))


def test_sparse_step_equals_dense_oracle_on_random_models():
    rng = random.Random(2024)
    for _ in range(220):
        model = random_model(rng)
        values = {c.id: rng.choice(ACTIVATIONS) for c in model.concepts}
        v = F.ActivationVector(dict(values))
        assert F.fcm_step(model, v).values == F.dense_oracle_step(model, v).values


def random_pta_model(rng: random.Random):
    stems = [
        {"id": "m", "name": "m", "role": "stem", "stem_kind": "motivation"},
        {"id": "a", "name": "a", "role": "stem", "stem_kind": "ability"},
        {"id": "p", "name": "p", "role": "stem", "stem_kind": "peripheral_cue"},
    ]
    factors = [{"id": f"f{i}", "name": name, "role": "stem",
                "stem_kind": "factor", "factor_name": name}
               for i, name in enumerate(F.FACTOR_NAMES)]
    n_leaves = rng.randint(6, 10)
    leaves = [{"id": f"l{i}", "name": f"l{i}", "role": "leaf"} for i in range(n_leaves)]
    edges = [{"from": leaf["id"], "to": rng.choice(factors)["id"],
              "weight": rng.choice(WEIGHTS)} for leaf in leaves]
    for f in factors:
        edges.append({"from": f["id"], "to": rng.choice(("m", "a")),
                      "weight": rng.choice(WEIGHTS)})
    edges.append({"from": "m", "to": "p", "weight": -1})
    edges.append({"from": "a", "to": "p", "weight": -1})
    model = F.parse_fcm(json.dumps({"mode": "pta",
                                    "concepts": stems + factors + leaves,
                                    "edges": edges}))
    activations = {leaf["id"]: rng.choice(ACTIVATIONS) for leaf in leaves}
    return model, activations


def test_decomposed_evaluate_equals_naive_on_random_models():
    rng = random.Random(99)
    for _ in range(200):
        model, activations = random_pta_model(rng)
        assert model.decomposition_valid()
        fast = F.evaluate(model, activations)
        naive = F.evaluate(model, activations, force_naive=True)
        assert fast.final.values == naive.final.values
        assert fast.converged == naive.converged
        assert fast.cycle_detected == naive.cycle_detected
        assert fast.rounds == naive.rounds


def test_decomposition_skips_leaf_edges_after_round_one(pta_fcm):
    counter = F.EdgeVisitCounter()
    leaves = pta_fcm.leaf_ids()
    F.evaluate(pta_fcm, {leaf: 1.0 for leaf in leaves}, counter=counter)
    late = counter.after_round(1)
    leaf_set = set(leaves)
    assert late, "expected iteration beyond round 1"
    assert all(src not in leaf_set for _r, src, _t in late)


def test_bundled_fcm_converges_for_all_binary_patterns(pta_fcm):
    leaves = pta_fcm.leaf_ids()
    assert len(leaves) <= 10
    for bits in itertools.product((-1.0, 1.0), repeat=len(leaves)):
        result = F.evaluate(pta_fcm, dict(zip(leaves, bits)))
        assert result.converged and not result.cycle_detected


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_clamped_leaves_never_change(data):
    rng = random.Random(data.draw(st.integers(0, 2**32 - 1)))
    model, activations = random_pta_model(rng)
    result = F.evaluate(model, activations)
    for leaf, value in activations.items():
        assert result.final.values[leaf] == value


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_outputs_stay_trivalent(seed):
    rng = random.Random(seed)
    model = random_model(rng)
    values = {c.id: rng.choice(ACTIVATIONS) for c in model.concepts}
    result = F.evaluate(model, initial=values)
    assert set(result.final.values.values()) <= set(ACTIVATIONS)
