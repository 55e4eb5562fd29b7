# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled reduction kernel.

Mirror of lambdasoup.kernel._pure: same operations, same semantics, same
flat int32 code format. See _pure for the algorithm notes; any change
here must be made there as well (the parity tests compare the two).
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memcpy
from cpython.bytes cimport PyBytes_FromStringAndSize

NORMAL = 0
STEP_LIMIT = 1
SIZE_LIMIT = 2

# scope-stack entries are children*2 + is_lam with children in {1, 2};
# subtracting 2 consumes one child, entry < 2 means the node is finished


cdef inline Py_ssize_t _subterm_end(const int* a, Py_ssize_t start) noexcept nogil:
    cdef Py_ssize_t need = 1
    cdef Py_ssize_t i = start
    cdef int c
    while need:
        c = a[i]
        if c == -2:
            need += 1
        elif c != -1:
            need -= 1
        i += 1
    return i


cdef inline Py_ssize_t _find_redex(const int* a, Py_ssize_t n, Py_ssize_t start) noexcept nogil:
    cdef Py_ssize_t i = start
    while i < n - 1:
        if a[i] == -2 and a[i + 1] == -1:
            return i
        i += 1
    return -1


cdef Py_ssize_t _beta(const int* a, Py_ssize_t n, Py_ssize_t redex,
                      Py_ssize_t cap, int* out, int* scratch) noexcept nogil:
    """Contract the redex; write the result to out and return its length,
    or -1 as soon as the result would exceed cap vertices."""
    cdef Py_ssize_t body = redex + 2
    cdef Py_ssize_t body_end = _subterm_end(a, body)
    cdef Py_ssize_t arg_end = _subterm_end(a, body_end)
    cdef Py_ssize_t tail = n - arg_end
    cdef Py_ssize_t limit = cap - tail - redex
    cdef Py_ssize_t w = redex
    cdef Py_ssize_t produced = 0
    cdef Py_ssize_t sp = 0
    cdef Py_ssize_t depth = 0
    cdef Py_ssize_t i = body
    cdef Py_ssize_t j, asp, arg_depth
    cdef int c, tok, entry

    if limit < 0:
        return -1
    memcpy(out, a, redex * sizeof(int))
    while i < body_end:
        c = a[i]
        if c == -1:
            produced += 1
            if produced > limit:
                return -1
            out[w] = c
            w += 1
            scratch[sp] = 3
            sp += 1
            depth += 1
            i += 1
            continue
        if c == -2:
            produced += 1
            if produced > limit:
                return -1
            out[w] = c
            w += 1
            scratch[sp] = 4
            sp += 1
            i += 1
            continue
        if c == depth:
            # the bound occurrence: splice in the argument, lifting the
            # argument's own free indices over the binders entered so far
            asp = sp
            arg_depth = 0
            j = body_end
            while j < arg_end:
                tok = a[j]
                if tok == -1:
                    produced += 1
                    if produced > limit:
                        return -1
                    out[w] = tok
                    w += 1
                    scratch[asp] = 3
                    asp += 1
                    arg_depth += 1
                    j += 1
                    continue
                if tok == -2:
                    produced += 1
                    if produced > limit:
                        return -1
                    out[w] = tok
                    w += 1
                    scratch[asp] = 4
                    asp += 1
                    j += 1
                    continue
                produced += 1
                if produced > limit:
                    return -1
                if tok >= arg_depth:
                    out[w] = tok + <int> depth
                else:
                    out[w] = tok
                w += 1
                while asp > sp:
                    entry = scratch[asp - 1] - 2
                    if entry >= 2:
                        scratch[asp - 1] = entry
                        break
                    arg_depth -= entry & 1
                    asp -= 1
                j += 1
        else:
            produced += 1
            if produced > limit:
                return -1
            if c >= 0 and c > depth:
                out[w] = c - 1
            else:
                out[w] = c
            w += 1
        while sp > 0:
            entry = scratch[sp - 1] - 2
            if entry >= 2:
                scratch[sp - 1] = entry
                break
            depth -= entry & 1
            sp -= 1
        i += 1
    memcpy(out + w, a + arg_end, tail * sizeof(int))
    return w + tail


def reduce_code(bytes code, long max_steps, long max_vertices):
    """Reduce to normal form under a step budget and a vertex cap.

    Returns (status, normal-form code or None, steps used).
    """
    cdef Py_ssize_t n = len(code) // sizeof(int)
    cdef const char* raw = code
    cdef Py_ssize_t bufsize = (n if n > max_vertices else max_vertices) + 8
    cdef int* cur = <int*> malloc(bufsize * sizeof(int))
    cdef int* nxt = <int*> malloc(bufsize * sizeof(int))
    cdef int* scratch = <int*> malloc(2 * bufsize * sizeof(int))
    cdef int* swap
    cdef Py_ssize_t scan_from = 0
    cdef Py_ssize_t redex, new_n
    cdef long steps = 0
    cdef int status

    if cur == NULL or nxt == NULL or scratch == NULL:
        free(cur)
        free(nxt)
        free(scratch)
        raise MemoryError()
    memcpy(cur, raw, n * sizeof(int))
    while True:
        redex = _find_redex(cur, n, scan_from)
        if redex < 0:
            status = 0
            break
        if steps >= max_steps:
            status = 1
            break
        new_n = _beta(cur, n, redex, max_vertices, nxt, scratch)
        steps += 1
        if new_n < 0:
            status = 2
            break
        swap = cur
        cur = nxt
        nxt = swap
        n = new_n
        scan_from = redex - 1 if redex > 0 else 0
    if status == 0:
        result = PyBytes_FromStringAndSize(<char*> cur, n * sizeof(int))
    else:
        result = None
    free(cur)
    free(nxt)
    free(scratch)
    return (status, result, steps)


def is_normal(bytes code):
    cdef Py_ssize_t n = len(code) // sizeof(int)
    cdef const char* raw = code
    return _find_redex(<const int*> raw, n, 0) < 0


def leading_lams(bytes code):
    """Number of abstractions wrapping the term before anything else."""
    cdef Py_ssize_t n = len(code) // sizeof(int)
    cdef const char* raw = code
    cdef const int* a = <const int*> raw
    cdef Py_ssize_t i = 0
    while i < n and a[i] == -1:
        i += 1
    return i


def missing_argument(bytes code, int k):
    """True unless the term starts with k abstractions that are all used."""
    cdef Py_ssize_t n = len(code) // sizeof(int)
    cdef const char* raw = code
    cdef const int* a = <const int*> raw
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t sp = 0
    cdef Py_ssize_t depth = 0
    cdef unsigned long long seen = 0
    cdef unsigned long long full
    cdef int c, rel, entry
    cdef int* scratch

    if k <= 0:
        return False
    if k > 64:
        raise ValueError("argument counts above 64 are not supported")
    while i < n and a[i] == -1:
        i += 1
    if i < k:
        return True
    full = (<unsigned long long> 1 << k) - 1
    scratch = <int*> malloc((n + 1) * sizeof(int))
    if scratch == NULL:
        raise MemoryError()
    i = k
    while i < n:
        c = a[i]
        if c == -1:
            scratch[sp] = 3
            sp += 1
            depth += 1
            i += 1
            continue
        if c == -2:
            scratch[sp] = 4
            sp += 1
            i += 1
            continue
        if c >= 0:
            rel = c - <int> depth
            if 0 <= rel < k:
                seen |= <unsigned long long> 1 << rel
        while sp > 0:
            entry = scratch[sp - 1] - 2
            if entry >= 2:
                scratch[sp - 1] = entry
                break
            depth -= entry & 1
            sp -= 1
        i += 1
    free(scratch)
    return seen != full


def wrapped_boolean(bytes code):
    """True for a Church boolean under zero or more extra abstractions."""
    cdef Py_ssize_t n = len(code) // sizeof(int)
    cdef const char* raw = code
    cdef const int* a = <const int*> raw
    cdef Py_ssize_t j = 0
    while j < n and a[j] == -1:
        if n - j == 3 and a[j + 1] == -1 and (a[j + 2] == 0 or a[j + 2] == 1):
            return True
        j += 1
    return False
