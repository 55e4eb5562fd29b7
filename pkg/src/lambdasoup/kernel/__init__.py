"""Reduction kernel selection.

The compiled extension is used when it imported cleanly, the pure-Python
twin otherwise. Set LAMBDASOUP_KERNEL=pure or =compiled to force a
backend; forcing "compiled" when the extension is missing is an error
rather than a silent fallback.

Both expose the same operations over flat int32 codes:

    reduce_code(code, max_steps, max_vertices) -> (status, code | None, steps)
    is_normal(code) -> bool
    leading_lams(code) -> int
    missing_argument(code, k) -> bool
    wrapped_boolean(code) -> bool

status is NORMAL, STEP_LIMIT or SIZE_LIMIT.
"""

import os

__all__ = [
    "BACKEND",
    "NORMAL",
    "STEP_LIMIT",
    "SIZE_LIMIT",
    "reduce_code",
    "is_normal",
    "leading_lams",
    "missing_argument",
    "wrapped_boolean",
]

_forced = os.environ.get("LAMBDASOUP_KERNEL", "").strip().lower()
if _forced == "pure":
    from . import _pure as _impl

    BACKEND = "pure"
elif _forced == "compiled":
    from . import _ckernel as _impl  # type: ignore[no-redef]

    BACKEND = "compiled"
elif _forced:
    raise ImportError(f"LAMBDASOUP_KERNEL must be 'pure' or 'compiled', not {_forced!r}")
else:
    try:
        from . import _ckernel as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from . import _pure as _impl

        BACKEND = "pure"

NORMAL = _impl.NORMAL
STEP_LIMIT = _impl.STEP_LIMIT
SIZE_LIMIT = _impl.SIZE_LIMIT

reduce_code = _impl.reduce_code
is_normal = _impl.is_normal
leading_lams = _impl.leading_lams
missing_argument = _impl.missing_argument
wrapped_boolean = _impl.wrapped_boolean
