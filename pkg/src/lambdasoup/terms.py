"""Lambda expression trees and their flat encoding.

Expressions are immutable trees of Var / Lam / App. Bound variables are
stored as de Bruijn indices (distance to the binder), free variables as
surface names, so alpha-equivalent expressions are structurally equal
and no renaming machinery is needed anywhere.

For the reduction kernels every expression also has a flat form: the
preorder walk of the tree packed into an int32 array. Tag values:

    >= 0            bound variable (de Bruijn index)
    TAG_LAM (-1)    abstraction; the body follows
    TAG_APP (-2)    application; function then argument follow
    <= FREE_BASE    free variable; FREE_BASE - i refers to free_names[i]

The flat form is kept as bytes so it can live in dicts and sets. Two
encodings are equal exactly when the expressions are alpha-equivalent
and mention the same free names in the same first-occurrence order.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

__all__ = [
    "Var",
    "Lam",
    "App",
    "LambdaExpr",
    "TAG_LAM",
    "TAG_APP",
    "FREE_BASE",
    "size",
    "alpha_equivalent",
    "free_names",
    "encode",
    "decode",
    "is_closed_code",
    "bind_free",
]

TAG_LAM = -1
TAG_APP = -2
FREE_BASE = -3


@dataclass(frozen=True, slots=True)
class Var:
    """A variable: de Bruijn index if bound, surface name if free."""

    ref: Union[int, str]


@dataclass(frozen=True, slots=True)
class Lam:
    """An abstraction. The binder is anonymous; the body refers to it by index."""

    body: "LambdaExpr"


@dataclass(frozen=True, slots=True)
class App:
    """An application of fn to arg."""

    fn: "LambdaExpr"
    arg: "LambdaExpr"


LambdaExpr = Union[Var, Lam, App]


def _preorder(expr: LambdaExpr) -> Iterator[LambdaExpr]:
    # iterative: soup products can be hundreds of nodes deep
    stack = [expr]
    while stack:
        node = stack.pop()
        yield node
        t = type(node)
        if t is Lam:
            stack.append(node.body)
        elif t is App:
            stack.append(node.arg)
            stack.append(node.fn)


def size(expr: LambdaExpr) -> int:
    """Vertex count: every variable, abstraction and application node."""
    n = 0
    for _ in _preorder(expr):
        n += 1
    return n


def alpha_equivalent(a: LambdaExpr, b: LambdaExpr) -> bool:
    """True when a and b differ at most in bound-variable names."""
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        t = type(x)
        if t is not type(y):
            return False
        if t is Var:
            if x.ref != y.ref:
                return False
        elif t is Lam:
            stack.append((x.body, y.body))
        else:
            stack.append((x.arg, y.arg))
            stack.append((x.fn, y.fn))
    return True


def free_names(expr: LambdaExpr) -> tuple[str, ...]:
    """Free variable names in order of first preorder occurrence."""
    seen: dict[str, None] = {}
    for node in _preorder(expr):
        if type(node) is Var and type(node.ref) is str:
            seen.setdefault(node.ref, None)
    return tuple(seen)


def encode(expr: LambdaExpr) -> tuple[bytes, tuple[str, ...]]:
    """Flatten to (int32 prefix code, free-name table)."""
    out = array("i")
    names: dict[str, int] = {}
    for node in _preorder(expr):
        t = type(node)
        if t is Var:
            ref = node.ref
            if type(ref) is int:
                if ref < 0:
                    raise ValueError(f"negative de Bruijn index {ref}")
                out.append(ref)
            else:
                idx = names.setdefault(ref, len(names))
                out.append(FREE_BASE - idx)
        elif t is Lam:
            out.append(TAG_LAM)
        else:
            out.append(TAG_APP)
    return out.tobytes(), tuple(names)


def decode(code: bytes, names: tuple[str, ...] = ()) -> LambdaExpr:
    """Rebuild the expression tree from its flat form."""
    values = array("i")
    values.frombytes(code)
    stack: list[LambdaExpr] = []
    for c in reversed(values):
        if c == TAG_LAM:
            if not stack:
                raise ValueError("truncated code: abstraction without body")
            stack.append(Lam(stack.pop()))
        elif c == TAG_APP:
            if len(stack) < 2:
                raise ValueError("truncated code: application without operands")
            fn = stack.pop()
            stack.append(App(fn, stack.pop()))
        elif c >= 0:
            stack.append(Var(c))
        else:
            idx = FREE_BASE - c
            if idx >= len(names):
                raise ValueError(f"free-variable slot {idx} has no name")
            stack.append(Var(names[idx]))
    if len(stack) != 1:
        raise ValueError("code does not describe a single expression")
    return stack.pop()


def is_closed_code(code: bytes) -> bool:
    """True when the flat form contains no free-variable slots."""
    values = array("i")
    values.frombytes(code)
    return all(c > FREE_BASE for c in values)


def _has_dangling_index(values: array) -> bool:
    """True when some bound index points past the binders above it."""
    depth = 0
    stack: list[int] = []  # children*2 + is_lam, as in the kernel walks
    for c in values:
        if c == TAG_LAM:
            stack.append(3)
            depth += 1
            continue
        if c == TAG_APP:
            stack.append(4)
            continue
        if c >= depth:  # free names are < 0 and never trip this
            return True
        while stack:
            stack[-1] -= 2
            if stack[-1] >= 2:
                break
            depth -= stack[-1] & 1
            stack.pop()
    return False


def bind_free(expr: LambdaExpr, env: Mapping[str, LambdaExpr]) -> LambdaExpr:
    """Replace free variables by name with closed expressions.

    Splicing closed code needs no index adjustment, so this is done on
    the flat form. Names absent from env stay free.
    """
    code, names = encode(expr)
    replacements: dict[int, array] = {}
    kept: dict[str, int] = {}
    for i, name in enumerate(names):
        if name in env:
            sub_code, sub_names = encode(env[name])
            piece = array("i")
            piece.frombytes(sub_code)
            if sub_names or _has_dangling_index(piece):
                raise ValueError(f"replacement for {name!r} is not closed")
            replacements[i] = piece
        else:
            kept.setdefault(name, len(kept))
    values = array("i")
    values.frombytes(code)
    out = array("i")
    for c in values:
        if c <= FREE_BASE:
            idx = FREE_BASE - c
            piece = replacements.get(idx)
            if piece is None:
                out.append(FREE_BASE - kept[names[idx]])
            else:
                out.extend(piece)
        else:
            out.append(c)
    return decode(out.tobytes(), tuple(kept))
