"""Autofill semantics: staging, origins, validation, and closure agreement."""

from __future__ import annotations

import json
import random

import pytest

from formfill import (
    FieldTypeError,
    RuleEvalError,
    UnknownFieldError,
    autofill,
    closure_by_rule_modes,
    induced_graph,
    parse_form_spec,
    validate_input,
    validate_spec_consistency,
)
from sweep import random_graph


def spec_from(fields, rules, name="t"):
    return parse_form_spec(json.dumps({"name": name, "fields": fields, "rules": rules}).encode())


def numeric_fields(*ids, kind="number"):
    return [{"id": i, "label": i.upper(), "kind": kind} for i in ids]


class TestBasicFill:
    def test_weight_from_sex_age(self, weight_spec):
        r = autofill(weight_spec, {"Sex": 1, "Age": 40})
        assert r.status == "filled"
        assert r.values["Height"].value == 178
        assert r.values["Height"].origin == "derived"
        assert r.values["Sex"].origin == "user"
        assert r.missing == ()
        assert r.suggestions == ()

    def test_weight_from_sex_height(self, weight_spec):
        r = autofill(weight_spec, {"Sex": 1, "Height": 160})
        assert r.values["Age"].value == 17
        assert r.status == "filled"

    def test_weight_from_sex_only(self, weight_spec):
        r = autofill(weight_spec, {"Sex": 0})
        assert r.status == "incomplete"
        assert r.missing == ("Age", "Height")
        assert r.suggestions == ("Age",)
        assert r.trace == ()

    def test_full_input_all_user(self, weight_spec):
        r = autofill(weight_spec, {"Sex": 1, "Age": 40, "Height": 150})
        assert r.status == "filled"
        assert {v.origin for v in r.values.values()} == {"user"}
        assert r.trace == ()

    def test_user_value_never_overwritten(self, weight_spec):
        # the rules would derive Height=178; the user said 150 and wins
        r = autofill(weight_spec, {"Sex": 1, "Age": 40, "Height": 150})
        assert r.values["Height"].value == 150

    def test_empty_input(self, weight_spec):
        r = autofill(weight_spec, {})
        assert r.status == "incomplete"
        assert r.values == {}
        assert r.suggestions == ("Age", "Sex")

    def test_partial_spec_from_sex(self, weight_partial_spec):
        r = autofill(weight_partial_spec, {"Sex": 1})
        assert r.status == "filled"
        assert r.values["Height"].value == 178
        assert r.values["Age"].value == 40
        assert [(t.target, t.stage) for t in r.trace] == [("Height", 1), ("Age", 2)]

    def test_partial_spec_missing_branch(self, weight_partial_spec):
        r = autofill(weight_partial_spec, {"Age": 40})
        assert r.values["Height"].value == 170
        assert r.status == "incomplete"  # Sex has no rule
        assert r.missing == ("Sex",)

    def test_pregnant_cascade(self, pregnant_spec):
        r = autofill(pregnant_spec, {"Pregnant": 0})
        assert r.status == "filled"
        assert [(t.target, t.stage) for t in r.trace] == [
            ("Sex", 1),
            ("Height", 2),
            ("Age", 3),
        ]
        assert r.values["Age"].value == 40


class TestStageSynchrony:
    def test_rule_order_is_irrelevant(self, forms_dir):
        doc = json.loads((forms_dir / "pregnant.json").read_text())
        base = autofill(parse_form_spec(json.dumps(doc).encode()), {"Pregnant": 0})
        rng = random.Random(7)
        for _ in range(5):
            rng.shuffle(doc["rules"])
            permuted = autofill(parse_form_spec(json.dumps(doc).encode()), {"Pregnant": 0})
            assert permuted.values == base.values
            assert sorted((t.target, t.stage) for t in permuted.trace) == sorted(
                (t.target, t.stage) for t in base.trace
            )

    def test_stage_reads_previous_map_only(self):
        # b and c both derive from a; d needs b and c. If stages leaked,
        # d could fire a stage early.
        spec = spec_from(
            numeric_fields("a", "b", "c", "d"),
            [
                {"target": "b", "args": ["a"], "mode": "complete", "expr": "a + 1"},
                {"target": "c", "args": ["a"], "mode": "complete", "expr": "a + 2"},
                {"target": "d", "args": ["b", "c"], "mode": "complete", "expr": "b + c"},
            ],
        )
        r = autofill(spec, {"a": 1})
        assert r.values["d"].value == 5
        assert [(t.target, t.stage) for t in r.trace] == [("b", 1), ("c", 1), ("d", 2)]

    def test_determinism(self, pregnant_spec):
        a = autofill(pregnant_spec, {"Pregnant": 1})
        b = autofill(pregnant_spec, {"Pregnant": 1})
        assert a == b


class TestValidation:
    def test_unknown_field(self, weight_spec):
        with pytest.raises(UnknownFieldError) as err:
            autofill(weight_spec, {"Weight": 80})
        assert err.value.field == "Weight"

    def test_range_check(self, weight_spec):
        with pytest.raises(FieldTypeError):
            autofill(weight_spec, {"Sex": 2})
        with pytest.raises(FieldTypeError):
            autofill(weight_spec, {"Height": 20})

    def test_integrality_check(self, weight_spec):
        with pytest.raises(FieldTypeError):
            autofill(weight_spec, {"Age": 40.5})

    def test_near_integers_accepted(self, weight_spec):
        r = autofill(weight_spec, {"Sex": 1.0000000000001, "Age": 40})
        assert r.values["Sex"].value == 1

    def test_bool_rejected(self, weight_spec):
        with pytest.raises(FieldTypeError):
            autofill(weight_spec, {"Sex": True})

    def test_string_rejected_for_numeric(self, weight_spec):
        with pytest.raises(FieldTypeError):
            autofill(weight_spec, {"Age": "40"})

    def test_non_finite_rejected(self):
        spec = spec_from(numeric_fields("a"), [])
        with pytest.raises(FieldTypeError):
            autofill(spec, {"a": float("inf")})

    def test_enum_values(self):
        fields = numeric_fields("a") + [
            {"id": "unit", "label": "Unit", "kind": "enum", "values": ["cm", "inch"]}
        ]
        spec = spec_from(fields, [])
        assert validate_input(spec, {"unit": "cm"}) == {"unit": "cm"}
        with pytest.raises(FieldTypeError):
            validate_input(spec, {"unit": "furlong"})
        with pytest.raises(FieldTypeError):
            validate_input(spec, {"unit": 3})

    def test_number_kind_keeps_float(self, k3_spec):
        r = autofill(k3_spec, {"a": 0.2, "b": 0.3})
        assert r.values["c"].value == pytest.approx(0.5)
        assert isinstance(r.values["c"].value, float)


class TestRuleFailures:
    def test_division_by_zero_names_target(self):
        spec = spec_from(
            numeric_fields("a", "b"),
            [{"target": "b", "args": ["a"], "mode": "complete", "expr": "1 / (a - 1)"}],
        )
        with pytest.raises(RuleEvalError) as err:
            autofill(spec, {"a": 1})
        assert err.value.target == "b"

    def test_non_integral_derived_value(self):
        spec = spec_from(
            numeric_fields("a", "b", kind="integer"),
            [{"target": "b", "args": ["a"], "mode": "complete", "expr": "a / 2"}],
        )
        with pytest.raises(RuleEvalError) as err:
            autofill(spec, {"a": 1})
        assert err.value.target == "b"

    def test_boolean_result_rejected(self):
        spec = spec_from(
            numeric_fields("a", "b"),
            [{"target": "b", "args": ["a"], "mode": "complete", "expr": "a > 0"}],
        )
        with pytest.raises(RuleEvalError):
            autofill(spec, {"a": 1})


class TestClosureAgreement:
    def _random_spec(self, rng: random.Random):
        g = random_graph(rng, rng.randint(2, 6))
        fields = [{"id": f"f{v}", "label": v, "kind": "number"} for v in g.vertices]
        rules = []
        for v in g.vertices:
            ins = sorted(g.in_set(v))
            if not ins:
                continue
            mode = rng.choice(["complete", "partial"])
            if mode == "complete":
                expr = " + ".join(f"f{a}" for a in ins)
            else:
                expr = " + ".join(f"(if missing(f{a}) then 0 else f{a})" for a in ins)
            rules.append(
                {"target": f"f{v}", "args": [f"f{a}" for a in ins], "mode": mode, "expr": expr}
            )
        return spec_from(fields, rules)

    def test_filled_ids_equal_rule_mode_closure(self):
        rng = random.Random(42)
        for _ in range(60):
            spec = self._random_spec(rng)
            g = induced_graph(spec)
            modes = spec.modes_by_target()
            ids = list(spec.field_ids())
            provided = {i: float(k) for k, i in enumerate(ids) if rng.random() < 0.5}
            report = autofill(spec, provided)
            expected = closure_by_rule_modes(g, provided.keys(), modes).fixed_point
            assert frozenset(report.values) == expected
            assert (report.status == "filled") == (expected == frozenset(ids))
            # suggestions make it filling
            joined = set(provided) | set(report.suggestions)
            assert closure_by_rule_modes(g, joined, modes).filled


class TestReportShape:
    def test_json_document(self, weight_spec):
        doc = autofill(weight_spec, {"Sex": 1, "Age": 40}).to_json_dict()
        assert doc == {
            "values": {
                "Age": {"value": 40, "origin": "user"},
                "Height": {"value": 178, "origin": "derived"},
                "Sex": {"value": 1, "origin": "user"},
            },
            "trace": [{"target": "Height", "args": ["Age", "Sex"], "stage": 1}],
            "status": "filled",
            "missing": [],
            "suggestions": [],
        }

    def test_values_listed_in_id_order(self, pregnant_spec):
        doc = autofill(pregnant_spec, {"Pregnant": 0}).to_json_dict()
        assert list(doc["values"]) == sorted(doc["values"])


class TestConsistencyReport:
    def test_weight(self, weight_spec):
        c = validate_spec_consistency(weight_spec, include_exact=True)
        assert c.mandatory == ("Sex",)
        assert c.analysis.exact_min_fillings == (("Age", "Sex"), ("Height", "Sex"))
        assert not c.partial_rules_reduce_minimum

    def test_partial_variant_reduces_minimum(self, weight_partial_spec):
        c = validate_spec_consistency(weight_partial_spec)
        assert c.partial_rules_reduce_minimum

    def test_pregnant_greedy(self, pregnant_spec):
        c = validate_spec_consistency(pregnant_spec)
        assert c.analysis.greedy_min_filling == ("Pregnant",)
        assert c.mandatory == ()

    def test_edgeless_spec(self):
        spec = spec_from(numeric_fields("a", "b"), [])
        c = validate_spec_consistency(spec)
        assert c.mandatory == ("a", "b")
        assert c.analysis.minimal_cycles == ()

    def test_json_keys(self, weight_spec):
        doc = validate_spec_consistency(weight_spec).to_json_dict()
        assert list(doc.keys())[-2:] == ["mandatory", "partial_rules_reduce_minimum"]
