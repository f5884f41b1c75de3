"""Exact dense linear algebra over Scalars or RationalFunctions."""

from itertools import permutations

from src.errors import SingularMatrix


def zero_like(x):
    return x * 0


def one_like(x):
    return x * 0 + 1


def rref(rows):
    """Reduced row echelon form.

    Returns:
        (nonzero rows of the echelon form, pivot columns)
    """
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = next((k for k in range(r, len(rows)) if rows[k][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][col]:
                f = rows[k][col]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, ncols: int = None, sample=None):
    """Basis of {v : rows · v = 0}; ``sample`` supplies a ring element when rows is empty."""
    echelon, pivots = rref(rows)
    if ncols is None:
        ncols = len(rows[0])
    ref = sample if sample is not None else rows[0][0]
    zero, one = zero_like(ref), one_like(ref)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, p in zip(echelon, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def determinant(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
    total = zero_like(m[0][0])
    for perm in permutations(range(n)):
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if perm[a] > perm[b]:
                    sign = -sign
        term = one_like(m[0][0]) * sign
        for row, col in enumerate(perm):
            term = term * m[row][col]
        total = total + term
    return total


def minor(m, i, j):
    return [row[:j] + row[j + 1:] for k, row in enumerate(m) if k != i]


def adjugate(m):
    n = len(m)
    if n == 1:
        return [[one_like(m[0][0])]]
    return [
        [determinant(minor(m, j, i)) * (-1 if (i + j) % 2 else 1) for j in range(n)]
        for i in range(n)
    ]


def inverse(m):
    det = determinant(m)
    if not det:
        raise SingularMatrix("matrix is singular")
    inv_det = 1 / det
    return [[x * inv_det for x in row] for row in adjugate(m)]


def matmul(a, b):
    return [
        [sum((a[i][k] * b[k][j] for k in range(1, len(b))), a[i][0] * b[0][j])
         for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def transpose(m):
    return [list(col) for col in zip(*m)]


def identity(n, ref):
    zero, one = zero_like(ref), one_like(ref)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def solve(rows, rhs):
    """One solution x of rows · x = rhs, or None when the system is inconsistent."""
    ncols = len(rows[0])
    augmented = [list(r) + [b] for r, b in zip(rows, rhs)]
    echelon, pivots = rref(augmented)
    if ncols in pivots:
        return None
    zero = zero_like(augmented[0][0])
    x = [zero] * ncols
    for row, p in zip(echelon, pivots):
        x[p] = row[ncols]
    return x


def char_poly_3(m):
    """Coefficients (trace, sum of principal 2-minors, det) of a 3 x 3 matrix."""
    tr = m[0][0] + m[1][1] + m[2][2]
    minors = (
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
        + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2] - m[1][2] * m[2][1]
    )
    return tr, minors, determinant(m)
