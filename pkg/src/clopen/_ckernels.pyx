# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels on 64-bit subobject masks.

Same contract as ``_pykernels``; tables must be ``array('Q')`` (masks) and
``array('q')`` (join table, ortho, program words).
"""
from cpython.array cimport array, clone
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc

NAME = "cython"

cdef enum:
    LOAD_VAR = 0
    LOAD_CONST = 1
    AND_ = 2
    OR_ = 3
    NEG = 4
    IMP = 5

cdef enum:
    HEYTING = 0
    COHEYTING = 1


cdef inline uint64_t _down_close(uint64_t m, const uint64_t[:] down) noexcept nogil:
    cdef uint64_t out = 0
    cdef Py_ssize_t i = 0
    while m:
        if m & 1:
            out |= down[i]
        m >>= 1
        i += 1
    return out


cdef inline uint64_t _heyting(uint64_t s, uint64_t t, const uint64_t[:] down) noexcept nogil:
    cdef uint64_t bad = s & ~t
    cdef uint64_t out = 0
    cdef Py_ssize_t i
    for i in range(down.shape[0]):
        if (down[i] & bad) == 0:
            out |= (<uint64_t>1) << i
    return out


cdef inline int64_t _epsilon(uint64_t s, const uint64_t[:] delta, const int64_t[:] join,
                             Py_ssize_t n, int64_t bottom) noexcept nogil:
    cdef int64_t acc = bottom
    cdef Py_ssize_t a
    for a in range(n):
        if (delta[a] & ~s) == 0:
            acc = join[acc * n + a]
    return acc


cdef inline uint64_t _star(uint64_t s, const uint64_t[:] delta, const int64_t[:] join,
                           Py_ssize_t n, int64_t bottom, const int64_t[:] ortho) noexcept nogil:
    return delta[ortho[_epsilon(s, delta, join, n, bottom)]]


cdef inline uint64_t _negate(uint64_t s, int kind, const uint64_t[:] down,
                             const uint64_t[:] delta, const int64_t[:] join, Py_ssize_t n,
                             int64_t bottom, const int64_t[:] ortho, uint64_t top) noexcept nogil:
    if kind == HEYTING:
        return _heyting(s, 0, down)
    if kind == COHEYTING:
        return _down_close(top & ~s, down)
    return _star(s, delta, join, n, bottom, ortho)


cdef inline uint64_t _implies(uint64_t s, uint64_t t, int kind, const uint64_t[:] down,
                              const uint64_t[:] delta, const int64_t[:] join, Py_ssize_t n,
                              int64_t bottom, const int64_t[:] ortho, uint64_t top) noexcept nogil:
    if kind == HEYTING:
        return _heyting(s, t, down)
    if kind == COHEYTING:
        return _down_close(top & ~s, down) | t
    return _star(s, delta, join, n, bottom, ortho) | t


def down_close(uint64_t m, const uint64_t[:] down):
    return _down_close(m, down)


def heyting_implies(uint64_t s, uint64_t t, const uint64_t[:] down):
    return _heyting(s, t, down)


def coheyting_minus(uint64_t t, uint64_t s, const uint64_t[:] down):
    return _down_close(t & ~s, down)


def epsilon(uint64_t s, const uint64_t[:] delta, const int64_t[:] join, Py_ssize_t n,
            int64_t bottom):
    return _epsilon(s, delta, join, n, bottom)


def star(uint64_t s, const uint64_t[:] delta, const int64_t[:] join, Py_ssize_t n,
         int64_t bottom, const int64_t[:] ortho):
    return _star(s, delta, join, n, bottom, ortho)


def negate(uint64_t s, int kind, const uint64_t[:] down, const uint64_t[:] delta,
           const int64_t[:] join, Py_ssize_t n, int64_t bottom, const int64_t[:] ortho,
           uint64_t top):
    return _negate(s, kind, down, delta, join, n, bottom, ortho, top)


def implies(uint64_t s, uint64_t t, int kind, const uint64_t[:] down,
            const uint64_t[:] delta, const int64_t[:] join, Py_ssize_t n, int64_t bottom,
            const int64_t[:] ortho, uint64_t top):
    return _implies(s, t, kind, down, delta, join, n, bottom, ortho, top)


def eval_program(const int64_t[:] code, const int64_t[:] arg, const int64_t[:] arg2,
                 const uint64_t[:] consts, const uint64_t[:] vals, Py_ssize_t nvars,
                 const uint64_t[:] down, const uint64_t[:] delta, const int64_t[:] join,
                 Py_ssize_t n, int64_t bottom, const int64_t[:] ortho, uint64_t top,
                 int neg_kind, int imp_kind):
    cdef Py_ssize_t rows = vals.shape[0] // nvars if nvars else 1
    cdef Py_ssize_t plen = code.shape[0]
    cdef array out = clone(array("Q"), rows, False)
    cdef uint64_t[:] res = out
    cdef uint64_t* stack = <uint64_t*>malloc((plen + 1) * sizeof(uint64_t))
    cdef Py_ssize_t r, pc, sp, base
    cdef int64_t op
    cdef uint64_t y
    if stack == NULL:
        raise MemoryError()
    try:
        with nogil:
            for r in range(rows):
                base = r * nvars
                sp = 0
                for pc in range(plen):
                    op = code[pc]
                    if op == LOAD_VAR:
                        stack[sp] = vals[base + arg[pc]]
                        sp += 1
                    elif op == LOAD_CONST:
                        stack[sp] = consts[arg[pc]]
                        sp += 1
                    elif op == AND_:
                        sp -= 1
                        stack[sp - 1] &= stack[sp]
                    elif op == OR_:
                        sp -= 1
                        stack[sp - 1] |= stack[sp]
                    elif op == NEG:
                        stack[sp - 1] = _negate(stack[sp - 1], neg_kind, down, delta, join,
                                                n, bottom, ortho, top)
                    elif op == IMP:
                        sp -= 1
                        y = stack[sp]
                        stack[sp - 1] = _implies(stack[sp - 1], y, imp_kind, down, delta,
                                                 join, n, bottom, ortho, top)
                    else:
                        if vals[base + arg[pc]] == vals[base + arg2[pc]]:
                            stack[sp] = top
                        else:
                            stack[sp] = 0
                        sp += 1
                res[r] = stack[sp - 1]
    finally:
        free(stack)
    return out
