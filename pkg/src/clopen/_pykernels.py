"""Pure-Python kernels on subobject bitmasks.

Mirror of ``_ckernels.pyx``; used when the extension is unavailable or a
presheaf has more than 64 points. Bit ``i`` of a mask is global point ``i``.
``down[i]`` is the mask of every restriction of point ``i`` (itself included),
``delta[a]`` the mask of the daseinisation of lattice element ``a`` and
``join`` the row-major ``n x n`` join table of the lattice.
"""

NAME = "python"

LOAD_VAR, LOAD_CONST, AND, OR, NEG, IMP, EQ = range(7)
HEYTING, COHEYTING, STAR = range(3)


def down_close(m, down):
    out = 0
    i = 0
    while m:
        if m & 1:
            out |= down[i]
        m >>= 1
        i += 1
    return out


def heyting_implies(s, t, down):
    bad = s & ~t
    out = 0
    for i, d in enumerate(down):
        if not d & bad:
            out |= 1 << i
    return out


def coheyting_minus(t, s, down):
    return down_close(t & ~s, down)


def epsilon(s, delta, join, n, bottom):
    acc = bottom
    for a in range(n):
        if not delta[a] & ~s:
            acc = join[acc * n + a]
    return acc


def star(s, delta, join, n, bottom, ortho):
    return delta[ortho[epsilon(s, delta, join, n, bottom)]]


def negate(s, kind, down, delta, join, n, bottom, ortho, top):
    if kind == HEYTING:
        return heyting_implies(s, 0, down)
    if kind == COHEYTING:
        return down_close(top & ~s, down)
    return star(s, delta, join, n, bottom, ortho)


def implies(s, t, kind, down, delta, join, n, bottom, ortho, top):
    if kind == HEYTING:
        return heyting_implies(s, t, down)
    if kind == COHEYTING:
        return down_close(top & ~s, down) | t
    return star(s, delta, join, n, bottom, ortho) | t


def eval_program(code, arg, arg2, consts, vals, nvars, down, delta, join, n,
                 bottom, ortho, top, neg_kind, imp_kind):
    """Run a postfix program once per valuation row; ``vals`` is row-major."""
    rows = len(vals) // nvars if nvars else 1
    out = [0] * rows
    for r in range(rows):
        base = r * nvars
        stack = []
        push, pop = stack.append, stack.pop
        for op, a, b in zip(code, arg, arg2):
            if op == LOAD_VAR:
                push(vals[base + a])
            elif op == LOAD_CONST:
                push(consts[a])
            elif op == AND:
                y = pop()
                push(pop() & y)
            elif op == OR:
                y = pop()
                push(pop() | y)
            elif op == NEG:
                push(negate(pop(), neg_kind, down, delta, join, n, bottom, ortho, top))
            elif op == IMP:
                y = pop()
                push(implies(pop(), y, imp_kind, down, delta, join, n, bottom, ortho, top))
            else:
                push(top if vals[base + a] == vals[base + b] else 0)
        out[r] = stack[-1]
    return out
