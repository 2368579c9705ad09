"""Formalization tests. Every derived expectation here is computed by the
reference semantics (brute-force enumeration), never by the translation
under test."""

import itertools
import json
import random

import pytest

from randgen import random_sentence_expr
from reqmon import (ComponentSpec, MAnd, MAtom, MFirst, MHistorically,
                    MImplies, MNot, MOr, MSince, MYesterday, Trace,
                    UnsupportedScopeError, ValidationFailedError, VarDecl,
                    desugar_persisted, eval_trace, is_pure_past,
                    make_component_spec, parse_expression, parse_requirement,
                    spec_from_json, spec_to_json, to_ptmtl, trigger_formula)
from reqmon.reqast import ScopeSpec, SourceRequirement, TimingSpec, Var


def all_bool_traces(names, length):
    """Every assignment of boolean sequences of `length` to `names`."""
    combos = itertools.product([False, True], repeat=length * len(names))
    for flat in combos:
        values = {}
        for i, name in enumerate(names):
            values[name] = list(flat[i * length:(i + 1) * length])
        yield Trace(values)


class TestDesugar:
    def test_persisted_becomes_bounded_historically(self):
        e = parse_expression("persisted(10, a > b)")
        f = desugar_persisted(e)
        assert f == MHistorically(0, 10, MAtom(parse_expression("a > b")))

    def test_connectives_are_lifted(self):
        e = parse_expression("persisted(2, p) & ! q -> r")
        f = desugar_persisted(e)
        assert f == MImplies(
            MAnd(MHistorically(0, 2, MAtom(Var("p"))), MNot(MAtom(Var("q")))),
            MAtom(Var("r")))

    def test_zero_bound_equals_operand_pointwise(self):
        f = desugar_persisted(parse_expression("persisted(0, p)"))
        assert f == MHistorically(0, 0, MAtom(Var("p")))
        for tr in all_bool_traces(["p"], 4):
            assert eval_trace(f, tr) == eval_trace(MAtom(Var("p")), tr)

    def test_nested_persisted_equals_flat_window(self):
        # persisted(2, persisted(1, p)) behaves as persisted(3, p):
        # checked on every boolean trace up to length 6
        nested = desugar_persisted(
            parse_expression("persisted(2, persisted(1, p))"))
        assert nested == MHistorically(0, 2, MHistorically(0, 1,
                                                           MAtom(Var("p"))))
        flat = MHistorically(0, 3, MAtom(Var("p")))
        for length in range(1, 7):
            for tr in all_bool_traces(["p"], length):
                assert eval_trace(nested, tr) == eval_trace(flat, tr)

    def test_result_contains_no_persisted(self):
        rng = random.Random(21)
        for _ in range(100):
            e = random_sentence_expr(rng, 3)
            f = desugar_persisted(e)
            assert is_pure_past(f)


class TestTrigger:
    def test_rising_edges_only(self):
        f = trigger_formula(MAtom(Var("c")))
        tr = Trace({"c": [False, True, True, False, True]})
        assert eval_trace(f, tr) == [False, True, False, False, True]

    def test_true_at_scope_start(self):
        f = trigger_formula(MAtom(Var("c")))
        tr = Trace({"c": [True, True]})
        assert eval_trace(f, tr) == [True, False]

    def test_constant_true_triggers_once(self):
        from reqmon.reqast import BoolLit
        f = trigger_formula(MAtom(BoolLit(True)))
        tr = Trace({"c": [True] * 4})
        assert eval_trace(f, tr) == [True, False, False, False]

    def test_shape(self):
        cond = MAtom(Var("c"))
        assert trigger_formula(cond) == MAnd(
            cond, MOr(MFirst(), MYesterday(MNot(cond))))


def _req(text, req_id="R1"):
    return parse_requirement(text, req_id)


class TestToPtmtl:
    def test_unconditional_immediate_is_the_response(self):
        f = to_ptmtl(_req("sys shall satisfy ok"))
        assert f == MAtom(Var("ok"))

    def test_conditional_within_shape(self):
        f = to_ptmtl(_req("if c, sys shall within 3 ticks satisfy r"))
        resp = MAtom(Var("r"))
        trig = trigger_formula(MAtom(Var("c")))
        assert f == MNot(MSince(3, 3, MNot(resp), MAnd(trig, MNot(resp))))

    def test_conditional_immediate_shape(self):
        f = to_ptmtl(_req("if c, sys shall satisfy r"))
        trig = trigger_formula(MAtom(Var("c")))
        assert f == MNot(MAnd(trig, MNot(MAtom(Var("r")))))

    def test_unconditional_within_shape(self):
        f = to_ptmtl(_req("sys shall within 2 ticks satisfy r"))
        resp = MAtom(Var("r"))
        assert f == MNot(MSince(2, 2, MNot(resp), MNot(resp)))

    def test_non_null_scope_rejected(self):
        req = _req("sys shall satisfy ok")
        bad = SourceRequirement(id=req.id, scope=ScopeSpec(kind="after"),
                                condition=None, component=req.component,
                                timing=req.timing, response=req.response,
                                raw_text=req.raw_text)
        with pytest.raises(UnsupportedScopeError):
            to_ptmtl(bad)

    def test_rate_scales_timing_but_not_persisted(self):
        req = _req("if persisted(4, c), sys shall within 3 seconds satisfy r")
        f = to_ptmtl(req, rate=5)
        assert isinstance(f, MNot) and isinstance(f.operand, MSince)
        assert f.operand.lo == f.operand.hi == 15
        hist = [g for g in _subformulas(f) if isinstance(g, MHistorically)]
        assert {(h.lo, h.hi) for h in hist} == {(0, 4)}

    def test_purity(self):
        rng = random.Random(22)
        for _ in range(50):
            cond = random_sentence_expr(rng, 2)
            resp = random_sentence_expr(rng, 2)
            timing = (TimingSpec.immediate() if rng.random() < 0.5
                      else TimingSpec.within(rng.randint(1, 5), "ticks"))
            req = SourceRequirement(id="R1", scope=ScopeSpec(),
                                    condition=cond, component="sys",
                                    timing=timing, response=resp, raw_text="")
            assert is_pure_past(to_ptmtl(req))

    def test_within_one_brute_force(self):
        # deadline 1: the formula is false exactly one step after a trigger
        # whose response stayed false at the trigger step and the next one.
        # Enumerated over every (c, r) trace up to length 5.
        f = to_ptmtl(_req("if c, sys shall within 1 ticks satisfy r"))
        trig = trigger_formula(MAtom(Var("c")))
        for length in range(1, 6):
            for tr in all_bool_traces(["c", "r"], length):
                trig_seq = eval_trace(trig, tr)
                r = tr.values["r"]
                expected = [not (t >= 1 and trig_seq[t - 1]
                                 and not r[t - 1] and not r[t])
                            for t in range(length)]
                assert eval_trace(f, tr) == expected, tr.values

    def test_violation_point_uniqueness_brute_force(self):
        # every responseless trigger yields exactly one false step, at
        # trigger + N; steps not of that form are true
        rng = random.Random(23)
        for _ in range(120):
            n = rng.randint(1, 8)
            f = to_ptmtl(_req("if c, sys shall within %d ticks satisfy r" % n))
            trig = trigger_formula(MAtom(Var("c")))
            length = rng.randint(1, 30)
            tr = Trace({"c": [rng.random() < 0.4 for _ in range(length)],
                        "r": [rng.random() < 0.4 for _ in range(length)]})
            trig_seq = eval_trace(trig, tr)
            r = tr.values["r"]
            expected_false = {t + n for t in range(length)
                              if trig_seq[t] and t + n < length
                              and not any(r[t:t + n + 1])}
            got_false = {t for t, v in enumerate(eval_trace(f, tr)) if not v}
            assert got_false == expected_false

    def test_response_at_trigger_suffices(self):
        # if the response already holds when the trigger fires, later
        # response values cannot produce a violation for that trigger
        f = to_ptmtl(_req("if c, sys shall within 2 ticks satisfy r"))
        tr = Trace({"c": [False, True, False, False, False, False],
                    "r": [False, True, False, False, False, False]})
        assert all(eval_trace(f, tr))


def _subformulas(f):
    from reqmon import subformulas
    return subformulas(f)


class TestComponentSpec:
    def test_uam_spec_contents(self, uam_requirements, uam_decls, uam_spec):
        assert uam_spec.component == "ROS_component"
        assert len(uam_spec.requirements) == 1
        assert "S[10,10]" in uam_spec.requirements[0].smv_formula
        assert [v.name for v in uam_spec.variables] == [
            "current_consumption", "windspeed"]

    def test_symbolic_thresholds_become_variables(self, symbolic_uam_decls):
        from conftest import SYMBOLIC_UAM_TEXT
        req = parse_requirement(SYMBOLIC_UAM_TEXT, "ROS-001")
        spec = make_component_spec([req], symbolic_uam_decls)
        assert [v.name for v in spec.variables] == [
            "current_consumption", "wind_speed", "cc_t", "ws_t"]

    def test_empty_spec_is_valid(self):
        spec = make_component_spec([], [])
        assert spec.requirements == () and spec.variables == ()

    def test_missing_declaration_propagates(self, symbolic_uam_decls):
        from conftest import SYMBOLIC_UAM_TEXT
        req = parse_requirement(SYMBOLIC_UAM_TEXT, "ROS-001")
        decls = [d for d in symbolic_uam_decls if d.name != "cc_t"]
        with pytest.raises(ValidationFailedError, match="cc_t"):
            make_component_spec([req], decls)

    def test_unreferenced_variables_dropped(self):
        req = _req("sys shall satisfy ok")
        decls = [VarDecl("ok", "boolean"), VarDecl("unused", "numeric")]
        spec = make_component_spec([req], decls)
        assert [v.name for v in spec.variables] == ["ok"]

    def test_mixed_components_rejected(self):
        reqs = [_req("alpha shall satisfy ok", "A"),
                _req("beta shall satisfy ok", "B")]
        with pytest.raises(ValidationFailedError, match="multiple components"):
            make_component_spec(reqs, [VarDecl("ok", "boolean")])

    def test_interchange_field_names_are_fixed(self, uam_spec):
        doc = json.loads(spec_to_json(uam_spec))
        assert set(doc) == {"component", "requirements", "variables"}
        assert set(doc["requirements"][0]) == {"id", "text", "ptLTL"}
        assert set(doc["variables"][0]) == {"name", "kind"}

    def test_json_round_trip(self, uam_spec):
        back = spec_from_json(spec_to_json(uam_spec))
        assert back == uam_spec

    def test_spec_json_round_trip_random(self):
        rng = random.Random(24)
        decls = [VarDecl("n0", "numeric"), VarDecl("n1", "numeric"),
                 VarDecl("b0", "boolean"), VarDecl("b1", "boolean")]
        for i in range(60):
            cond = (random_sentence_expr(rng, 2)
                    if rng.random() < 0.7 else None)
            timing = (TimingSpec.immediate() if rng.random() < 0.5
                      else TimingSpec.within(rng.randint(1, 9), "seconds"))
            req = SourceRequirement(
                id="R%d" % i, scope=ScopeSpec(), condition=cond,
                component="sys", timing=timing,
                response=random_sentence_expr(rng, 2), raw_text="generated")
            spec = make_component_spec([req], decls)
            assert spec_from_json(spec_to_json(spec)) == spec
