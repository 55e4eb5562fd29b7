r"""Surface syntax for lambda expressions.

Grammar:

    expr := abs | app
    abs  := ("\" | "λ") ident "." expr
    app  := atom { atom }
    atom := ident | "(" expr ")"

Application is left-associative and an abstraction body extends as far
right as possible. Identifiers are an ASCII letter followed by letters
or digits. Whitespace separates atoms and is otherwise ignored.

Printing emits "\" for binders, inserts parentheses only where the
grammar requires them, and invents fresh binder names, so parse and
to_text round-trip up to alpha-equivalence.
"""

from __future__ import annotations

import re

from .terms import App, Lam, LambdaExpr, Var, free_names

__all__ = ["LambdaSyntaxError", "UnboundVariableError", "parse", "to_text"]

_TOKEN = re.compile(r"[ \t\r\n]+|(?P<lam>[\\λ])|(?P<ident>[A-Za-z][A-Za-z0-9]*)|(?P<dot>\.)|(?P<open>\()|(?P<close>\))")


class LambdaSyntaxError(ValueError):
    """Malformed input; position is a character offset into the source."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnboundVariableError(LambdaSyntaxError):
    """A free variable in input that was required to be closed."""

    def __init__(self, name: str, position: int):
        super().__init__(f"unbound variable {name!r}", position)
        self.name = name


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise LambdaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind is not None:
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def parse(text: str, require_closed: bool = False) -> LambdaExpr:
    """Parse text into an expression tree.

    Free variables are allowed unless require_closed is set, in which
    case they raise UnboundVariableError.
    """
    tokens = _tokenize(text)
    env: list[str] = []
    # each frame is one parenthesis level: (atoms so far, env depth at entry, open position)
    frames: list[tuple[list[LambdaExpr], int, int]] = [([], 0, 0)]
    i = 0
    while True:
        kind, value, pos = tokens[i]
        i += 1
        if kind == "ident":
            for distance, name in enumerate(reversed(env)):
                if name == value:
                    frames[-1][0].append(Var(distance))
                    break
            else:
                if require_closed:
                    raise UnboundVariableError(value, pos)
                frames[-1][0].append(Var(value))
        elif kind == "lam":
            if frames[-1][0]:
                raise LambdaSyntaxError(
                    "abstraction in argument position must be parenthesized", pos
                )
            kind, value, pos = tokens[i]
            i += 1
            if kind != "ident":
                raise LambdaSyntaxError("expected a binder name after the lambda marker", pos)
            env.append(value)
            kind, _, pos = tokens[i]
            i += 1
            if kind != "dot":
                raise LambdaSyntaxError("expected '.' after the binder name", pos)
        elif kind == "open":
            frames.append(([], len(env), pos))
        elif kind == "close":
            if len(frames) == 1:
                raise LambdaSyntaxError("unmatched ')'", pos)
            body = _close_frame(frames.pop(), env, pos)
            frames[-1][0].append(body)
        elif kind == "dot":
            raise LambdaSyntaxError("'.' outside an abstraction header", pos)
        else:  # end
            if len(frames) > 1:
                raise LambdaSyntaxError("unclosed '('", frames[-1][2])
            return _close_frame(frames.pop(), env, pos)


def _close_frame(
    frame: tuple[list[LambdaExpr], int, int], env: list[str], pos: int
) -> LambdaExpr:
    atoms, mark, _ = frame
    if not atoms:
        raise LambdaSyntaxError("expected an expression", pos)
    expr = atoms[0]
    for atom in atoms[1:]:
        expr = App(expr, atom)
    for _ in range(len(env) - mark):
        expr = Lam(expr)
    del env[mark:]
    return expr


_NAME_STREAM = "xyzabcdefghijklmnopqrstuvw"

# printing contexts; lambdas need parens inside any application,
# applications only on the argument side
_TOP, _FN, _ARG = 0, 1, 2


def to_text(expr: LambdaExpr) -> str:
    """Render with minimal parentheses and freshly chosen binder names."""
    avoid = set(free_names(expr))
    names: list[str] = []

    def binder(depth: int) -> str:
        while len(names) <= depth:
            k = len(names)
            if k < len(_NAME_STREAM):
                candidate = _NAME_STREAM[k]
            else:
                candidate = f"x{k - len(_NAME_STREAM) + 1}"
            while candidate in avoid:
                candidate += "1"
            names.append(candidate)
        return names[depth]

    out: list[str] = []
    stack: list = [(expr, 0, _TOP)]
    while stack:
        item = stack.pop()
        if type(item) is str:
            out.append(item)
            continue
        node, depth, ctx = item
        t = type(node)
        if t is Var:
            ref = node.ref
            if type(ref) is int:
                if ref >= depth:
                    raise ValueError(f"de Bruijn index {ref} escapes its scope")
                out.append(binder(depth - 1 - ref))
            else:
                out.append(ref)
        elif t is Lam:
            header = "\\" + binder(depth) + "."
            if ctx != _TOP:
                out.append("(" + header)
                stack.append(")")
            else:
                out.append(header)
            stack.append((node.body, depth + 1, _TOP))
        else:
            if ctx == _ARG:
                out.append("(")
                stack.append(")")
            stack.append((node.arg, depth, _ARG))
            stack.append(" ")
            stack.append((node.fn, depth, _FN))
    return "".join(out)
