"""Surface syntax: parsing, printing, and error reporting."""

import pytest

from lambdasoup.parser import LambdaSyntaxError, UnboundVariableError, parse, to_text
from lambdasoup.terms import App, Lam, Var, alpha_equivalent


class TestParse:
    def test_identity(self):
        assert parse(r"\x.x") == Lam(Var(0))

    def test_lambda_glyph_accepted(self):
        assert parse("λx.x") == parse(r"\x.x")

    def test_application_left_associative(self):
        assert parse("f g h") == App(App(Var("f"), Var("g")), Var("h"))

    def test_abstraction_body_extends_right(self):
        assert parse(r"\x.x x") == Lam(App(Var(0), Var(0)))

    def test_parens_override(self):
        a = parse(r"(\x.x) (\y.y)")
        assert a == App(Lam(Var(0)), Lam(Var(0)))

    def test_nested_binders_use_indices(self):
        assert parse(r"\x.\y.x (x y)") == Lam(Lam(App(Var(1), App(Var(1), Var(0)))))

    def test_shadowing(self):
        assert parse(r"\x.\x.x") == Lam(Lam(Var(0)))

    def test_free_variables_kept_by_name(self):
        assert parse(r"\x.f x") == Lam(App(Var("f"), Var(0)))

    def test_require_closed_rejects_free_names(self):
        with pytest.raises(UnboundVariableError) as err:
            parse(r"\x.f x", require_closed=True)
        assert err.value.name == "f"

    @pytest.mark.parametrize("bad", [
        "", "(", ")", r"\.x", r"\x", r"\x.", "x )", "(x", r"\x y", "x . y",
    ])
    def test_syntax_errors(self, bad):
        with pytest.raises(LambdaSyntaxError):
            parse(bad)

    def test_error_carries_position(self):
        with pytest.raises(LambdaSyntaxError) as err:
            parse("x (y")
        assert err.value.position == 2


class TestToText:
    @pytest.mark.parametrize("text", [
        r"\x.x",
        r"\x.\y.x (x y)",
        r"(\x.x) (\x.x)",
        r"\x.\y.\z.x z (y z)",
        r"\x.x (x (\y.y x))",
        r"f (\x.g x x) h",
    ])
    def test_round_trip_is_identity_on_rendered_form(self, text):
        expr = parse(text)
        rendered = to_text(expr)
        assert rendered == text
        assert parse(rendered) == expr

    def test_round_trip_preserves_alpha_class(self):
        expr = parse(r"\foo.\bar.foo (bar bar foo)")
        assert alpha_equivalent(parse(to_text(expr)), expr)

    def test_binder_names_avoid_free_names(self):
        # the binder must not shadow the free name x
        expr = Lam(App(Var("x"), Var(0)))
        rendered = to_text(expr)
        reparsed = parse(rendered)
        assert alpha_equivalent(reparsed, expr)
        assert reparsed != Lam(App(Var(0), Var(0)))

    def test_deep_binders_get_fresh_names(self):
        expr = parse(r"\a.\b.\c.\d.\e.\f.\g.a g")
        assert alpha_equivalent(parse(to_text(expr)), expr)
