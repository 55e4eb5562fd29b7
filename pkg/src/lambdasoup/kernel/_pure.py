"""Pure-Python reduction kernel.

Works directly on the flat int32 codes from lambdasoup.terms. The
compiled kernel in _ckernel.pyx implements the same operations with the
same semantics; keep the two in sync.

Reduction is normal order: the contracted redex is always the first
"application whose function is an abstraction" in preorder, which is
exactly the leftmost-outermost one. Substitution renumbers de Bruijn
indices on the fly, so there is no separate shift pass and bookkeeping
never counts as a step. After every contraction the whole-term vertex
count is checked against the cap; the input term itself is not checked.
"""

from __future__ import annotations

from array import array

TAG_LAM = -1
TAG_APP = -2

NORMAL = 0
STEP_LIMIT = 1
SIZE_LIMIT = 2


def _to_list(code: bytes) -> list[int]:
    values = array("i")
    values.frombytes(code)
    return values.tolist()


def _subterm_end(arr: list[int], start: int) -> int:
    # preorder extent: one pending slot per unfinished node
    need = 1
    i = start
    while need:
        c = arr[i]
        if c == TAG_APP:
            need += 1
        elif c != TAG_LAM:
            need -= 1
        i += 1
    return i


def _find_redex(arr: list[int], start: int) -> int:
    last = len(arr) - 1
    i = start
    while i < last:
        if arr[i] == TAG_APP and arr[i + 1] == TAG_LAM:
            return i
        i += 1
    return -1


def _beta(arr: list[int], redex: int, cap: int) -> list[int] | None:
    """Contract the redex at `redex`, or None once the result would exceed cap."""
    body = redex + 2
    body_end = _subterm_end(arr, body)
    arg_end = _subterm_end(arr, body_end)
    tail = len(arr) - arg_end
    limit = cap - tail - (redex)  # room left for the substituted body
    out = arr[:redex]
    produced = 0

    depth = 0
    stack: list[list[int]] = []  # [children pending, binders to leave]
    i = body
    while i < body_end:
        c = arr[i]
        if c == TAG_LAM:
            out.append(c)
            produced += 1
            stack.append([1, 1])
            depth += 1
            i += 1
            continue
        if c == TAG_APP:
            out.append(c)
            produced += 1
            stack.append([2, 0])
            i += 1
            continue
        # a leaf: bound index, or free-variable slot (< TAG_APP)
        if c < 0:
            out.append(c)
            produced += 1
        elif c == depth:
            # the bound occurrence: splice in the argument, lifting its
            # free-in-arg indices over the binders entered so far
            arg_depth = 0
            arg_stack: list[list[int]] = []
            j = body_end
            while j < arg_end:
                a = arr[j]
                if a == TAG_LAM:
                    out.append(a)
                    produced += 1
                    arg_stack.append([1, 1])
                    arg_depth += 1
                    j += 1
                    continue
                if a == TAG_APP:
                    out.append(a)
                    produced += 1
                    arg_stack.append([2, 0])
                    j += 1
                    continue
                if a >= arg_depth and a >= 0:
                    out.append(a + depth)
                else:
                    out.append(a)
                produced += 1
                while arg_stack:
                    top = arg_stack[-1]
                    top[0] -= 1
                    if top[0]:
                        break
                    arg_depth -= top[1]
                    arg_stack.pop()
                j += 1
        elif c > depth:
            out.append(c - 1)
            produced += 1
        else:
            out.append(c)
            produced += 1
        if produced > limit:
            return None
        while stack:
            top = stack[-1]
            top[0] -= 1
            if top[0]:
                break
            depth -= top[1]
            stack.pop()
        i += 1
    out.extend(arr[arg_end:])
    if len(out) > cap:
        return None
    return out


def reduce_code(code: bytes, max_steps: int, max_vertices: int) -> tuple[int, bytes | None, int]:
    """Reduce to normal form under a step budget and a vertex cap.

    Returns (status, normal-form code or None, steps used).
    """
    arr = _to_list(code)
    steps = 0
    scan_from = 0
    while True:
        redex = _find_redex(arr, scan_from)
        if redex < 0:
            return NORMAL, array("i", arr).tobytes(), steps
        if steps >= max_steps:
            return STEP_LIMIT, None, steps
        arr = _beta(arr, redex, max_vertices)
        steps += 1
        if arr is None:
            return SIZE_LIMIT, None, steps
        # positions before redex-1 were scanned and cannot have become
        # redexes: the code there is unchanged and the only new node
        # boundary is at the contraction site
        scan_from = redex - 1 if redex > 0 else 0


def is_normal(code: bytes) -> bool:
    return _find_redex(_to_list(code), 0) < 0


def leading_lams(code: bytes) -> int:
    """Number of abstractions wrapping the term before anything else."""
    arr = _to_list(code)
    n = 0
    while n < len(arr) and arr[n] == TAG_LAM:
        n += 1
    return n


def missing_argument(code: bytes, k: int) -> bool:
    """True unless the term starts with k abstractions that are all used.

    A term that cannot even receive k arguments, or that ignores one of
    the first k, cannot compute a function of k arguments.
    """
    arr = _to_list(code)
    if leading_lams(code) < k:
        return True
    seen = set()
    depth = 0
    stack: list[list[int]] = []
    i = k
    while i < len(arr):
        c = arr[i]
        if c == TAG_LAM:
            stack.append([1, 1])
            depth += 1
            i += 1
            continue
        if c == TAG_APP:
            stack.append([2, 0])
            i += 1
            continue
        if c >= 0:
            rel = c - depth
            if 0 <= rel < k:
                seen.add(rel)
        while stack:
            top = stack[-1]
            top[0] -= 1
            if top[0]:
                break
            depth -= top[1]
            stack.pop()
        i += 1
    return len(seen) < k


def wrapped_boolean(code: bytes) -> bool:
    """True for a Church boolean under zero or more extra abstractions."""
    arr = _to_list(code)
    j = 0
    while j < len(arr) and arr[j] == TAG_LAM:
        if len(arr) - j == 3 and arr[j + 1] == TAG_LAM and arr[j + 2] in (0, 1):
            return True
        j += 1
    return False
