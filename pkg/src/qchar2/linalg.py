"""Dense exact linear algebra over a base field.

Matrices are tuples of tuples of FieldValue (row-major).  Everything is
deterministic: pivots are always the first usable entry, so repeated
runs produce identical kernels, inverses and transforms.
"""

from __future__ import annotations

from .fields import BaseField, FieldValue


def mat(rows) -> tuple:
    return tuple(tuple(r) for r in rows)


def zeros(field: BaseField, n: int, m: int) -> tuple:
    z = field.zero
    return tuple(tuple(z for _ in range(m)) for _ in range(n))


def identity(field: BaseField, n: int) -> tuple:
    z, o = field.zero, field.one
    return tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))


def transpose(a) -> tuple:
    return tuple(zip(*a)) if a else ()


def mat_add(a, b) -> tuple:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_mul(a, b) -> tuple:
    bt = transpose(b)
    return tuple(tuple(_dot(ra, cb) for cb in bt) for ra in a)


def _dot(u, v):
    it = iter(zip(u, v))
    x, y = next(it)
    acc = x * y
    for x, y in it:
        acc = acc + x * y
    return acc


def mat_vec(a, v) -> tuple:
    return tuple(_dot(row, v) for row in a)


def vec_add(u, v) -> tuple:
    return tuple(x + y for x, y in zip(u, v))


def vec_scale(c, v) -> tuple:
    return tuple(c * x for x in v)


def vec_is_zero(v) -> bool:
    return all(not x for x in v)


def _echelon(field, rows, track_cols=None):
    """Row-reduce in place; returns (rows, pivot_cols, rank)."""
    rows = [list(r) for r in rows]
    n = len(rows)
    m = len(rows[0]) if n else 0
    piv_cols = []
    r = 0
    for c in range(m if track_cols is None else track_cols):
        sel = None
        for i in range(r, n):
            if rows[i][c]:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = rows[r][c].inv()
        rows[r] = [inv * x for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x + f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
        if r == n:
            break
    return rows, piv_cols, r


def rank(field, a) -> int:
    if not a:
        return 0
    return _echelon(field, a)[2]


def inverse(field, a):
    """Inverse matrix, or None if singular."""
    n = len(a)
    aug = [list(a[i]) + list(identity(field, n)[i]) for i in range(n)]
    red, piv, rk = _echelon(field, aug, track_cols=n)
    if rk < n:
        return None
    # rows are already fully reduced with unit pivots in order
    return mat(row[n:] for row in red)


def det(field, a) -> FieldValue:
    """Determinant by fraction-producing Gaussian elimination."""
    n = len(a)
    rows = [list(r) for r in a]
    acc = field.one
    for c in range(n):
        sel = None
        for i in range(c, n):
            if rows[i][c]:
                sel = i
                break
        if sel is None:
            return field.zero
        if sel != c:
            rows[c], rows[sel] = rows[sel], rows[c]  # char 2: no sign
        p = rows[c][c]
        acc = acc * p
        inv = p.inv()
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] * inv
                rows[i] = [x + f * y for x, y in zip(rows[i], rows[c])]
    return acc


def solve(field, a, b):
    """One solution x of A x = b, or None.  A given as rows."""
    n = len(a)
    m = len(a[0]) if n else 0
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    red, piv, rk = _echelon(field, aug, track_cols=m)
    for i in range(rk, n):
        if red[i][m]:
            return None
    x = [field.zero] * m
    for i, c in enumerate(piv):
        x[c] = red[i][m]
    return tuple(x)


def kernel_basis(field, a):
    """Basis of the right kernel of A (rows of the result are the basis)."""
    n = len(a)
    m = len(a[0]) if n else 0
    if n == 0:
        return tuple(identity(field, m))
    red, piv, rk = _echelon(field, a)
    piv_set = set(piv)
    basis = []
    for free in range(m):
        if free in piv_set:
            continue
        v = [field.zero] * m
        v[free] = field.one
        for i, c in enumerate(piv):
            v[c] = red[i][free]
        basis.append(tuple(v))
    return tuple(basis)


def column_space_basis(field, a):
    """Deterministic basis of the column space, as column vectors."""
    t = transpose(a)
    red, piv, rk = _echelon(field, t)
    return tuple(tuple(red[i]) for i in range(rk))


def solve_all_particular(field, a, b):
    """Particular solution plus kernel basis for A x = b, or None."""
    x0 = solve(field, a, b)
    if x0 is None:
        return None
    return x0, kernel_basis(field, a)
