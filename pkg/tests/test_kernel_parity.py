"""The compiled kernel and the pure-Python twin must agree exactly."""

import os

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from lambdasoup.kernel import _pure
from lambdasoup.terms import App, Lam, Var, encode

_ckernel = pytest.importorskip(
    "lambdasoup.kernel._ckernel", reason="compiled kernel not built"
)


def _closed_terms(max_leaves=22):
    trees = st.recursive(
        st.integers(min_value=0, max_value=3).map(Var),
        lambda c: st.one_of(c.map(Lam), st.builds(App, c, c)),
        max_leaves=max_leaves,
    )

    def close(expr):
        need = 0
        stack = [(expr, 0)]
        while stack:
            node, depth = stack.pop()
            if isinstance(node, Var):
                need = max(need, node.ref - depth + 1)
            elif isinstance(node, Lam):
                stack.append((node.body, depth + 1))
            else:
                stack.append((node.fn, depth))
                stack.append((node.arg, depth))
        for _ in range(need):
            expr = Lam(expr)
        return expr

    return trees.map(close)


applications = st.tuples(_closed_terms(), _closed_terms()).map(
    lambda ab: encode(App(ab[0], ab[1]))[0]
)


class TestReduceParity:
    @given(applications)
    @settings(max_examples=250, deadline=None)
    def test_tight_limits(self, code):
        assert _pure.reduce_code(code, 40, 60) == _ckernel.reduce_code(code, 40, 60)

    @given(applications)
    @settings(max_examples=120, deadline=None)
    def test_default_limits(self, code):
        assert _pure.reduce_code(code, 8000, 1000) == _ckernel.reduce_code(code, 8000, 1000)

    @given(_closed_terms())
    @settings(max_examples=150, deadline=None)
    def test_predicates(self, expr):
        code = encode(expr)[0]
        assert _pure.is_normal(code) == _ckernel.is_normal(code)
        assert _pure.leading_lams(code) == _ckernel.leading_lams(code)
        assert _pure.wrapped_boolean(code) == _ckernel.wrapped_boolean(code)
        for k in (1, 2, 3):
            assert _pure.missing_argument(code, k) == _ckernel.missing_argument(code, k)


class TestBackendSelection:
    def test_status_constants_match(self):
        assert (_pure.NORMAL, _pure.STEP_LIMIT, _pure.SIZE_LIMIT) == (
            _ckernel.NORMAL, _ckernel.STEP_LIMIT, _ckernel.SIZE_LIMIT)

    def test_env_override_selects_pure(self):
        # spawn a fresh interpreter so the import-time choice is visible
        import subprocess
        import sys

        env = dict(os.environ, LAMBDASOUP_KERNEL="pure")
        out = subprocess.run(
            [sys.executable, "-c", "import lambdasoup; print(lambdasoup.KERNEL_BACKEND)"],
            capture_output=True, text=True, env=env, check=True)
        assert out.stdout.strip() == "pure"

    def test_env_override_rejects_unknown(self):
        import subprocess
        import sys

        env = dict(os.environ, LAMBDASOUP_KERNEL="turbo")
        out = subprocess.run(
            [sys.executable, "-c", "import lambdasoup"],
            capture_output=True, text=True, env=env)
        assert out.returncode != 0
        assert "LAMBDASOUP_KERNEL" in out.stderr
