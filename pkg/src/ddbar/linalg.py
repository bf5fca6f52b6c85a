"""Dense exact linear algebra.

Matrices are lists of row lists.  Field routines (elimination, rank, kernels,
solves, subspace arithmetic) require GaussianRational entries; the generic
helpers (mul/add/eval) also work for ParamPoly entries.
"""

from __future__ import annotations

from .scalars import QI_ONE, QI_ZERO, GaussianRational


def zeros(rows, cols, zero=QI_ZERO):
    return [[zero for _ in range(cols)] for _ in range(rows)]


def identity(n, one=QI_ONE, zero=QI_ZERO):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def shape(mat):
    return (len(mat), len(mat[0]) if mat else 0)


def mat_add(a, b):
    if shape(a) != shape(b):
        raise ValueError("shape mismatch in mat_add: %s vs %s" % (shape(a), shape(b)))
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c, a):
    return [[c * x for x in row] for row in a]


def mat_neg(a):
    return [[-x for x in row] for row in a]


def mat_mul_sized(a, b, rows, mid, cols, zero=QI_ZERO):
    """Product with explicit dims; tolerates empty matrices that lost their shape."""
    if rows == 0:
        return []
    if cols == 0:
        return [[] for _ in range(rows)]
    if mid == 0:
        return zeros(rows, cols, zero)
    return mat_mul(a, b, zero)


def mat_mul(a, b, zero=QI_ZERO):
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ra == 0:
        return []
    if ca != rb:
        raise ValueError("shape mismatch in mat_mul: %dx%d @ %dx%d" % (ra, ca, rb, cb))
    bt = list(zip(*b)) if b else []
    out = []
    for row in a:
        out_row = []
        for col in bt:
            s = zero
            for x, y in zip(row, col):
                if x and y:
                    s = s + x * y
            out_row.append(s)
        out.append(out_row)
    if cb == 0:
        out = [[] for _ in range(ra)]
    return out


def mat_vec(a, v, zero=QI_ZERO):
    out = []
    for row in a:
        s = zero
        for x, y in zip(row, v):
            if x and y:
                s = s + x * y
        out.append(s)
    return out


def transpose(a):
    return [list(row) for row in zip(*a)] if a and a[0] else [[] for _ in range(len(a[0]) if a else 0)]


def conj_transpose(a):
    rows, cols = shape(a)
    return [[a[i][j].conjugate() for i in range(rows)] for j in range(cols)]


def mat_eval(a, point):
    return [[x.eval(point) for x in row] for row in a]


def mat_is_zero(a):
    return all(not x for row in a for x in row)


def mat_eq(a, b):
    return shape(a) == shape(b) and all(
        x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb)
    )


def _rref(mat):
    """Reduced row echelon form (in place on a copy); returns (rref, pivot cols)."""
    m = [list(row) for row in mat]
    rows, cols = shape(m)
    pivots = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if m[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = QI_ONE / m[r][c]
        m[r] = [inv * x for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(mat):
    if not mat or not mat[0]:
        return 0
    return len(_rref(mat)[1])


def nullspace(mat, cols=None):
    """Basis of the right kernel, as a list of column vectors.

    `cols` must be supplied when mat may have zero rows (shape is lost then).
    """
    rows, ncols = shape(mat)
    cols = ncols if cols is None else cols
    if rows and ncols != cols:
        raise ValueError("column count mismatch in nullspace")
    if cols == 0:
        return []
    if rows == 0:
        return [
            [QI_ONE if i == j else QI_ZERO for i in range(cols)] for j in range(cols)
        ]
    rr, pivots = _rref(mat)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [QI_ZERO] * cols
        v[fc] = QI_ONE
        for r, pc in enumerate(pivots):
            v[pc] = -rr[r][fc]
        basis.append(v)
    return basis


def solve(mat, rhs):
    """One solution of mat @ x = rhs, or None if inconsistent."""
    rows, cols = shape(mat)
    if len(rhs) != rows:
        raise ValueError("rhs length mismatch")
    if cols == 0:
        return [] if all(not x for x in rhs) else None
    aug = [list(row) + [rhs[i]] for i, row in enumerate(mat)]
    rr, pivots = _rref(aug)
    if cols in pivots:
        return None
    x = [QI_ZERO] * cols
    for r, pc in enumerate(pivots):
        x[pc] = rr[r][cols]
    return x


def solve_matrix(mat, rhs):
    """Solve mat @ X = rhs columnwise; None if any column is inconsistent."""
    rows, cols = shape(rhs)
    out_cols = []
    for j in range(cols):
        x = solve(mat, [rhs[i][j] for i in range(rows)])
        if x is None:
            return None
        out_cols.append(x)
    return [list(col) for col in zip(*out_cols)] if out_cols else [[] for _ in range(shape(mat)[1])]


def columns(mat):
    rows, cols = shape(mat)
    return [[mat[i][j] for i in range(rows)] for j in range(cols)]


def from_columns(cols, rows=None):
    if not cols:
        return [[] for _ in range(rows or 0)]
    return [list(row) for row in zip(*cols)]


def column_space_basis(mat):
    """Pivot columns of mat: a basis of the column space."""
    if not mat or not mat[0]:
        return []
    _, pivots = _rref(mat)
    return [[row[c] for row in mat] for c in pivots]


def span_dim(vectors, dim):
    if not vectors:
        return 0
    return rank(from_columns(vectors, dim))


def intersect_spans(u_vecs, v_vecs, dim):
    """Basis of span(u) ∩ span(v); each argument is a list of column vectors."""
    if not u_vecs or not v_vecs:
        return []
    u = from_columns(u_vecs, dim)
    v = from_columns(v_vecs, dim)
    stacked = [u[i] + [-x for x in v[i]] for i in range(dim)]
    out = []
    for w in nullspace(stacked):
        coeffs = w[: len(u_vecs)]
        vec = [QI_ZERO] * dim
        for c, col in zip(coeffs, u_vecs):
            if c:
                vec = [a + c * b for a, b in zip(vec, col)]
        if any(vec):
            out.append(vec)
    if not out:
        return []
    basis_mat = from_columns(out, dim)
    return column_space_basis(basis_mat)


def sum_span_dim(list_of_vec_lists, dim):
    vecs = [v for vl in list_of_vec_lists for v in vl]
    return span_dim(vecs, dim)


def in_span(vec, vectors, dim):
    if all(not x for x in vec):
        return True
    if not vectors:
        return False
    return solve(from_columns(vectors, dim), vec) is not None
