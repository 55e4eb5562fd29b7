"""Syntax tree, prefix encoding, and alpha-equivalence tests."""

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from lambdasoup.parser import parse
from lambdasoup.terms import (
    App,
    Lam,
    Var,
    alpha_equivalent,
    bind_free,
    decode,
    encode,
    free_names,
    is_closed_code,
    size,
)

IDENTITY = Lam(Var(0))
K = Lam(Lam(Var(1)))


def _subtrees():
    # Arbitrary trees with small bound indices, closed afterwards by
    # wrapping in enough outer abstractions.
    return st.recursive(
        st.integers(min_value=0, max_value=3).map(Var),
        lambda children: st.one_of(
            children.map(Lam),
            st.builds(App, children, children),
        ),
        max_leaves=25,
    )


def _close(expr):
    """Wrap in enough abstractions that every bound index resolves."""
    need = 0
    stack = [(expr, 0)]
    while stack:
        node, depth = stack.pop()
        if isinstance(node, Var):
            if isinstance(node.ref, int):
                need = max(need, node.ref - depth + 1)
        elif isinstance(node, Lam):
            stack.append((node.body, depth + 1))
        else:
            stack.append((node.fn, depth))
            stack.append((node.arg, depth))
    for _ in range(need):
        expr = Lam(expr)
    return expr


closed_terms = _subtrees().map(_close)


class TestConstruction:
    def test_nodes_are_frozen(self):
        with pytest.raises(AttributeError):
            IDENTITY.body = Var(1)

    def test_size_counts_vertices(self):
        assert size(Var(0)) == 1
        assert size(IDENTITY) == 2
        assert size(App(IDENTITY, K)) == 6

    def test_free_names_in_first_occurrence_order(self):
        expr = App(App(Var("y"), Var("x")), Lam(Var("y")))
        assert free_names(expr) == ("y", "x")
        assert free_names(K) == ()


class TestAlphaEquivalence:
    def test_renamed_terms_equivalent(self):
        a = parse(r"\x.\y.x (x y)")
        b = parse(r"\p.\q.p (p q)")
        assert alpha_equivalent(a, b)

    def test_structure_mismatch(self):
        assert not alpha_equivalent(parse(r"\x.\y.x"), parse(r"\x.\y.y"))
        assert not alpha_equivalent(IDENTITY, K)

    def test_free_names_compared_literally(self):
        assert alpha_equivalent(Var("a"), Var("a"))
        assert not alpha_equivalent(Var("a"), Var("b"))

    @given(closed_terms)
    @settings(max_examples=80)
    def test_equivalence_is_reflexive(self, expr):
        assert alpha_equivalent(expr, expr)


class TestEncoding:
    @given(closed_terms)
    @settings(max_examples=120)
    def test_round_trip(self, expr):
        code, names = encode(expr)
        assert names == ()
        assert decode(code) == expr

    def test_free_name_table(self):
        expr = App(Var("f"), Lam(App(Var(0), Var("g"))))
        code, names = encode(expr)
        assert names == ("f", "g")
        assert decode(code, names) == expr
        assert not is_closed_code(code)

    @given(closed_terms, closed_terms)
    @settings(max_examples=80)
    def test_alpha_equivalence_is_code_equality(self, a, b):
        assert alpha_equivalent(a, b) == (encode(a)[0] == encode(b)[0])

    def test_closed_code_detection(self):
        assert is_closed_code(encode(K)[0])

    def test_code_length_is_size(self):
        for expr in (IDENTITY, K, App(K, IDENTITY)):
            code, _ = encode(expr)
            assert len(code) == 4 * size(expr)


class TestBindFree:
    def test_splices_closed_definitions(self):
        expr = parse(r"\n. SCC (SCC n)")
        scc = parse(r"\n.\a.\b. a (n a b)")
        bound = bind_free(expr, {"SCC": scc})
        assert free_names(bound) == ()
        assert alpha_equivalent(bound, Lam(App(scc, App(scc, Var(0)))))

    def test_missing_name_stays_free(self):
        expr = App(Var("f"), Var("g"))
        bound = bind_free(expr, {"f": IDENTITY})
        assert free_names(bound) == ("g",)

    def test_rejects_open_replacement(self):
        with pytest.raises(ValueError):
            bind_free(Var("f"), {"f": Var(0)})
