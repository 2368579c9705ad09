import random
import string

import pytest

from randgen import random_sentence_expr
from reqmon import (MissingFieldError, ReqSyntaxError, parse_expression,
                    parse_requirement)
from reqmon.parser import (load_requirements_text, load_var_decls_text,
                           tokenize)
from reqmon.reqast import (And, Arith, BoolLit, Cmp, Implies, Neg, Not, Num,
                           Or, Persisted, ScopeSpec, SourceRequirement,
                           TimingSpec, Var, format_expr, format_requirement)


class TestSentences:
    def test_full_requirement(self):
        text = ("if persisted(10, current_consumption > cc_t & "
                "wind_speed > ws_t) ROS_component shall within 10 seconds "
                "satisfy current_consumption <= cc_t")
        req = parse_requirement(text, "ROS-001")
        assert req.id == "ROS-001"
        assert req.component == "ROS_component"
        assert req.scope == ScopeSpec()
        assert req.timing == TimingSpec.within(10, "seconds")
        assert req.raw_text == text
        assert req.condition == Persisted(
            10, And(Cmp(">", Var("current_consumption"), Var("cc_t")),
                    Cmp(">", Var("wind_speed"), Var("ws_t"))))
        assert req.response == Cmp("<=", Var("current_consumption"),
                                   Var("cc_t"))

    def test_minimal_requirement(self):
        req = parse_requirement("sys shall satisfy ok", "R1")
        assert req.condition is None
        assert req.component == "sys"
        assert req.timing == TimingSpec.immediate()
        assert req.response == Var("ok")

    def test_within_zero_rejected(self):
        with pytest.raises(ReqSyntaxError, match="Within bound must be >= 1"):
            parse_requirement("sys shall within 0 seconds satisfy ok", "R2")

    def test_upon_is_a_synonym_for_if(self):
        a = parse_requirement("if x, sys shall satisfy ok", "R1")
        b = parse_requirement("upon x, sys shall satisfy ok", "R1")
        assert a.condition == b.condition == Var("x")

    def test_condition_comma_is_optional(self):
        a = parse_requirement("if x sys shall satisfy ok", "R1")
        assert a.condition == Var("x")
        assert a.component == "sys"

    def test_persisted_nests(self):
        req = parse_requirement("if persisted(2, persisted(1, p)), sys shall "
                                "satisfy ok", "R1")
        assert req.condition == Persisted(2, Persisted(1, Var("p")))

    def test_missing_component(self):
        with pytest.raises(MissingFieldError) as err:
            parse_requirement("shall satisfy ok", "R1")
        assert err.value.field == "component"

    def test_missing_shall(self):
        with pytest.raises(MissingFieldError) as err:
            parse_requirement("sys satisfy ok", "R1")
        assert err.value.field == "shall"

    def test_missing_response(self):
        with pytest.raises(MissingFieldError) as err:
            parse_requirement("sys shall satisfy", "R1")
        assert err.value.field == "response"

    def test_missing_satisfy_reports_response(self):
        with pytest.raises(MissingFieldError) as err:
            parse_requirement("sys shall ok", "R1")
        assert err.value.field == "response"

    def test_error_carries_position_and_expectations(self):
        with pytest.raises(ReqSyntaxError) as err:
            parse_requirement("sys shall within x seconds satisfy ok", "R1")
        assert err.value.line == 1
        assert err.value.col == 18
        assert err.value.expected

    def test_trailing_garbage_rejected(self):
        with pytest.raises(ReqSyntaxError, match="after response"):
            parse_requirement("sys shall satisfy ok ok", "R1")

    def test_bad_requirement_id(self):
        with pytest.raises(ReqSyntaxError):
            parse_requirement("sys shall satisfy ok", "1bad")


class TestExpressions:
    def test_precedence_not_and_or_implies(self):
        e = parse_expression("! a & b | c -> d")
        assert e == Implies(Or(And(Not(Var("a")), Var("b")), Var("c")),
                            Var("d"))

    def test_implies_right_associative(self):
        e = parse_expression("a -> b -> c")
        assert e == Implies(Var("a"), Implies(Var("b"), Var("c")))

    def test_arithmetic_precedence(self):
        e = parse_expression("a + b * c <= 10")
        assert e == Cmp("<=", Arith("+", Var("a"),
                                    Arith("*", Var("b"), Var("c"))),
                        Num(10))

    def test_unary_minus(self):
        e = parse_expression("-a < -2.5")
        assert e == Cmp("<", Neg(Var("a")), Neg(Num(2.5)))

    def test_boolean_literals(self):
        assert parse_expression("true & false") == And(BoolLit(True),
                                                       BoolLit(False))

    def test_comparison_does_not_chain(self):
        with pytest.raises(ReqSyntaxError):
            parse_expression("a < b < c")

    def test_persisted_bound_must_be_integer(self):
        with pytest.raises(ReqSyntaxError):
            parse_expression("persisted(1.5, p)")
        with pytest.raises(ReqSyntaxError):
            parse_expression("persisted(-1, p)")

    def test_persisted_zero_allowed(self):
        assert parse_expression("persisted(0, p)") == Persisted(0, Var("p"))


class TestTotality:
    def test_random_noise_yields_ast_or_positioned_error(self):
        rng = random.Random(7)
        alphabet = string.ascii_letters + string.digits + " ()<>=!&|->+-*/,.\n_"
        for _ in range(500):
            text = "".join(rng.choice(alphabet)
                           for _ in range(rng.randint(0, 60)))
            try:
                req = parse_requirement(text, "R1")
                assert isinstance(req, SourceRequirement)
            except ReqSyntaxError as exc:
                assert exc.line >= 1 and exc.col >= 1

    def test_tokenizer_rejects_unknown_characters_with_position(self):
        with pytest.raises(ReqSyntaxError) as err:
            tokenize("a @ b")
        assert err.value.col == 3


class TestRoundTrip:
    def _random_requirement(self, rng):
        condition = None
        if rng.random() < 0.7:
            condition = random_sentence_expr(rng, rng.randint(0, 3))
        if rng.random() < 0.5:
            timing = TimingSpec.immediate()
        else:
            timing = TimingSpec.within(rng.randint(1, 20), "seconds")
        response = random_sentence_expr(rng, rng.randint(0, 3))
        return SourceRequirement(id="R1", scope=ScopeSpec(),
                                 condition=condition, component="sys",
                                 timing=timing, response=response,
                                 raw_text="")

    def test_pretty_print_reparses_to_equal_ast(self):
        rng = random.Random(11)
        for _ in range(300):
            req = self._random_requirement(rng)
            text = format_requirement(req)
            back = parse_requirement(text, "R1")
            assert back.condition == req.condition, text
            assert back.component == req.component
            assert back.timing == req.timing
            assert back.response == req.response, text

    def test_expression_print_parse_fixpoint(self):
        rng = random.Random(12)
        for _ in range(300):
            e = random_sentence_expr(rng, 3)
            text = format_expr(e)
            assert parse_expression(text) == e, text


class TestFiles:
    def test_requirement_blocks(self):
        text = ("# a comment\n"
                "# id: A-1\n"
                "sys shall satisfy ok\n"
                "\n"
                "# id: B_2\n"
                "if x, sys shall\n"
                "satisfy ok\n")
        blocks = load_requirements_text(text)
        assert [(b[0], b[1]) for b in blocks] == [
            ("A-1", "sys shall satisfy ok"),
            ("B_2", "if x, sys shall satisfy ok"),
        ]
        assert blocks[0][2] == 2 and blocks[1][2] == 5

    def test_duplicate_ids_rejected(self):
        text = "# id: A\nsys shall satisfy ok\n# id: A\nsys shall satisfy ok\n"
        with pytest.raises(ReqSyntaxError, match="duplicate requirement id"):
            load_requirements_text(text)

    def test_text_before_header_rejected(self):
        with pytest.raises(ReqSyntaxError, match="before any"):
            load_requirements_text("sys shall satisfy ok\n")

    def test_block_without_sentence_rejected(self):
        with pytest.raises(ReqSyntaxError, match="no sentence"):
            load_requirements_text("# id: A\n")

    def test_empty_file_is_empty(self):
        assert load_requirements_text("") == []
        assert load_requirements_text("# just a comment\n") == []

    def test_var_decls(self):
        decls = load_var_decls_text(
            "# inputs\ncurrent : numeric\nok_flag : boolean\n")
        assert [(d.name, d.kind) for d in decls] == [
            ("current", "numeric"), ("ok_flag", "boolean")]

    def test_var_decl_errors(self):
        with pytest.raises(ReqSyntaxError, match="unknown kind"):
            load_var_decls_text("x : float\n")
        with pytest.raises(ReqSyntaxError, match="duplicate"):
            load_var_decls_text("x : numeric\nx : boolean\n")
        with pytest.raises(ReqSyntaxError):
            load_var_decls_text("not-a-name : numeric\n")
