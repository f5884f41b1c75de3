import logging
from dataclasses import dataclass, field
from functools import partial
from itertools import product

from src import config
from src.algebra import (
    Algebra, basis_change_from_rows, basis_vector, in_basis, multiply, plus_algebra,
    product_subspace, square, transform, Subspace,
)
from src.catalog import CatalogLabel, FAMILIES, canonical_parameter, instantiate
from src.errors import ClassificationError, NotNil, OutsideCatalog, ParameterError
from src.invariants import fingerprint
from src.nil import nil_index
from src.scalar import I, Scalar, sqrt
from src.utils import linalg

logger = logging.getLogger(__name__)

# search order for elements with a nonzero square
SEARCH_COORDS = (Scalar(0), Scalar(1), Scalar(-1), Scalar(2), Scalar(-2), I, 1 + I)


def candidate_vectors(dim: int = 3):
    """Nonzero small-coordinate vectors, fewest nonzero entries first."""
    indices = sorted(
        (idx for idx in product(range(len(SEARCH_COORDS)), repeat=dim) if any(idx)),
        key=lambda idx: (sum(1 for i in idx if i), idx),
    )
    for idx in indices:
        yield [SEARCH_COORDS[i] for i in idx]


@dataclass
class Classification:
    """A catalog label with the basis change realising the isomorphism.

    ``transform(A, basis_change) == instantiate(label)`` holds exactly; ``rows``
    is the adapted basis written in the coordinates of A.
    """

    label: CatalogLabel
    basis_change: list
    rows: list
    collides_with: list = field(default_factory=list)


# vector helpers


def _scale(v, c):
    return [x * c for x in v]


def _add(*vectors):
    return [sum(xs[1:], xs[0]) for xs in zip(*vectors)]


def _ratio(v, ref):
    """The scalar c with v = c * ref, read off the first nonzero coordinate of ref."""
    k = next(k for k, x in enumerate(ref) if x)
    return v[k] / ref[k]


def _independent(*vectors) -> bool:
    return bool(linalg.determinant([list(v) for v in vectors]))


def _coordinates(v, basis):
    """Coordinates of v in the basis given as rows."""
    solution = linalg.solve(linalg.transpose(basis), v)
    if solution is None:
        raise ClassificationError("vector outside the span of the adapted basis")
    return solution


def _right_matrix(A: Algebra, z) -> list:
    """Row i is e_i z, so x R_z is multiply(A, x, z)."""
    return [multiply(A, basis_vector(A.dim, i), z) for i in range(A.dim)]


def _trace_form(A: Algebra) -> list:
    """tau(x) = tr R_x as a row of coefficients."""
    return [sum((A.c(k, i, k) for k in range(A.dim)), Scalar(0)) for i in range(A.dim)]


def _jacobiator(A: Algebra) -> list:
    e = [basis_vector(3, i) for i in range(3)]
    return _add(
        multiply(A, multiply(A, e[0], e[1]), e[2]),
        multiply(A, multiply(A, e[1], e[2]), e[0]),
        multiply(A, multiply(A, e[2], e[0]), e[1]),
    )


def _dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Scalar(0))


def _eigenvalues(A: Algebra, z) -> tuple:
    """The two roots of the quadratic factor of R_z's characteristic polynomial."""
    tr, minors, _ = linalg.char_poly_3(_right_matrix(A, z))
    root = sqrt(tr * tr - 4 * minors)
    return (tr + root) / 2, (tr - root) / 2


def _eigenvector(A: Algebra, z, mu, constraint=None):
    """A nonzero x with x z = mu x, optionally with constraint . x = 0."""
    m = _right_matrix(A, z)
    rows = [[m[i][k] - (mu if i == k else 0) for i in range(A.dim)] for k in range(A.dim)]
    if constraint is not None:
        rows.append(list(constraint))
    kernel = linalg.nullspace(rows, A.dim, Scalar(1))
    if not kernel:
        raise ClassificationError(f"no eigenvector for eigenvalue {mu}")
    return kernel[0]


def _orient(m1, m2, alpha):
    """Order the eigenvalues as (unit, scaled) with scaled / unit == alpha."""
    if m1 == m2:
        return m1, m2
    if m2 and m1 / m2 == alpha:
        return m2, m1
    if m1 and m2 / m1 == alpha:
        return m1, m2
    raise ClassificationError(f"eigenvalues {m1}, {m2} do not have ratio {alpha}")


def _outside_square(A: Algebra):
    sq = square(A)
    return next(basis_vector(3, i) for i in range(3) if not sq.contains(basis_vector(3, i)))


# anticommutative frames; each returns (rows, normalisation constant)


def _frame_zero(X, ref=None):
    return [basis_vector(3, i) for i in range(3)], None


def _frame_g1(X, ref=None):
    for i, j in ((1, 2), (0, 2), (0, 1)):
        u, v = basis_vector(3, i), basis_vector(3, j)
        uv = multiply(X, u, v)
        if any(uv):
            return [uv, u, v], None
    raise ClassificationError("no nonzero product in a nonzero algebra")


def _frame_g3_zero(X, ref=None):
    d = list(square(X).rows[0])
    e = next(basis_vector(3, i) for i in range(3) if any(multiply(X, d, basis_vector(3, i))))
    z = _scale(e, 1 / _ratio(multiply(X, d, e), d))
    left_d = [[sum((d[i] * X.c(i, k, m) for i in range(3)), Scalar(0)) for k in range(3)]
              for m in range(3)]
    kernel = linalg.nullspace([r for r in left_d if any(r)], 3, Scalar(1))
    for y in kernel + ([_add(*kernel)] if len(kernel) > 1 else []):
        f2 = _add(multiply(X, y, z), _scale(y, -1))
        if any(f2) and _independent(y, f2, z):
            return [y, f2, z], None
    raise ClassificationError("no adapted basis for g3(0)")


def _frame_g2(X, ref=None):
    z = _outside_square(X)
    mu, _ = _eigenvalues(X, z)
    s1, s2 = (list(r) for r in square(X).rows)
    return [s1, s2, _scale(z, 1 / mu)], None


def _frame_g3(X, alpha, ref=None):
    z = _outside_square(X)
    one, scaled = _orient(*_eigenvalues(X, z), alpha)
    z = _scale(z, 1 / one)
    sq = square(X)
    if alpha == 1:
        s = next(list(r) for r in sq.rows if any(_add(multiply(X, list(r), z), _scale(list(r), -1))))
        return [s, _add(multiply(X, s, z), _scale(s, -1)), z], None
    normal = linalg.nullspace([list(r) for r in sq.rows], 3, Scalar(1))[0]
    w1 = _eigenvector(X, z, Scalar(1), normal)
    w2 = _eigenvector(X, z, alpha, normal)
    return [_add(w1, w2), _scale(w2, alpha - 1), z], None


def _frame_g4(X, ref=None):
    for x in candidate_vectors(3):
        tr, minors, _ = linalg.char_poly_3(_right_matrix(X, x))
        if minors:
            break
    lam = sqrt(-minors)
    x = _scale(x, I / lam)
    up = _eigenvector(X, x, I)
    down = _eigenvector(X, x, -I)
    b = _ratio(multiply(X, up, down), x)
    down = _scale(down, -2 * I / b)
    return [_scale(_add(up, down), Scalar(1) / 2),
            _scale(_add(up, _scale(down, -1)), 1 / (2 * I)), x], None


def _frame_a2(X, ref=None):
    tau = _trace_form(X)
    s = next(list(r) for r in square(X).rows if _dot(tau, r))
    f2 = _scale(s, 1 / _dot(tau, s))
    left = [[sum((f2[i] * X.c(i, k, m) for i in range(3)), Scalar(0)) for k in range(3)]
            for m in range(3)]
    f3 = linalg.solve(left + [tau], f2 + [Scalar(1)])
    if f3 is None:
        raise ClassificationError("no adapted basis for A2")
    return [_jacobiator(X), f2, f3], None


def _frame_a3(X, ref=None):
    j, tau = _jacobiator(X), _trace_form(X)
    tr, _, _ = linalg.char_poly_3(_right_matrix(X, j))
    w = _scale(j, 2 / tr)
    p, q = linalg.nullspace([tau], 3, Scalar(1))
    b = _ratio(multiply(X, p, q), w)
    return [p, _scale(q, 1 / b), w], None


def _frame_a1(X, alpha, ref=None):
    j, tau = _jacobiator(X), _trace_form(X)
    one, scaled = _orient(*_eigenvalues(X, j), alpha)
    w = _scale(j, 1 / one)
    p = _eigenvector(X, w, alpha, tau)
    v = _eigenvector(X, w, Scalar(1), tau)
    b = _ratio(multiply(X, p, v), w)
    return [p, _scale(v, 1 / b), w], None


def _frame_a1_jordan(X, ref=None):
    j, tau = _jacobiator(X), _trace_form(X)
    tr, _, _ = linalg.char_poly_3(_right_matrix(X, j))
    w = _scale(j, 2 / tr)
    for v in linalg.nullspace([tau], 3, Scalar(1)):
        p = _add(multiply(X, v, w), _scale(v, -1))
        if any(p):
            break
    b = _ratio(multiply(X, p, v), w)
    if ref is not None:
        k = sqrt(ref / b)
        v, p, b = _scale(v, k), _scale(p, k), ref
    return [p, v, w], b


def _frame_a1_minus_one(X, ref=None):
    j, tau = _jacobiator(X), _trace_form(X)
    i = next(i for i in range(3) if tau[i])
    u = _scale(basis_vector(3, i), 1 / tau[i])
    w = _scale(j, 1 / _ratio(multiply(X, multiply(X, u, j), j), j))
    f2 = multiply(X, u, w)
    gamma = _coordinates(multiply(X, u, f2), [u, f2, w])[2]
    u = _add(u, _scale(w, gamma / 2))
    return [u, multiply(X, u, w), w], None


def _anticommutative_case(A: Algebra):
    """Catalog label and frame procedure for an anticommutative algebra."""
    n2 = square(A).dim
    j = _jacobiator(A)
    if not any(j):
        if n2 == 0:
            return CatalogLabel("C3-zero"), _frame_zero
        if n2 == 1:
            central = product_subspace(A, square(A), Subspace.full(3)).is_zero()
            if central:
                return CatalogLabel("g1"), _frame_g1
            return CatalogLabel("g3", Scalar(0)), _frame_g3_zero
        if n2 == 3:
            return CatalogLabel("g4"), _frame_g4
        z = _outside_square(A)
        m1, m2 = _eigenvalues(A, z)
        if m1 == m2:
            scalar = all(not any(_add(multiply(A, list(r), z), _scale(list(r), -m1)))
                         for r in square(A).rows)
            if scalar:
                return CatalogLabel("g2"), _frame_g2
            return CatalogLabel("g3", Scalar(1)), partial(_frame_g3, alpha=Scalar(1))
        alpha = canonical_parameter("g3", m1 / m2)
        return CatalogLabel("g3", alpha), partial(_frame_g3, alpha=alpha)
    tau = _trace_form(A)
    if not _dot(tau, j):
        if n2 == 2:
            return CatalogLabel("A2"), _frame_a2
        return CatalogLabel("A1", Scalar(-1)), _frame_a1_minus_one
    m1, m2 = _eigenvalues(A, j)
    if m1 == m2:
        kernel = linalg.nullspace([tau], 3, Scalar(1))
        scalar = all(not any(_add(multiply(A, v, j), _scale(v, -m1))) for v in kernel)
        if scalar:
            return CatalogLabel("A3"), _frame_a3
        return CatalogLabel("A1", Scalar(1)), _frame_a1_jordan
    ratio = m1 / m2 if m2 else m2 / m1
    alpha = canonical_parameter("A1", ratio)
    return CatalogLabel("A1", alpha), partial(_frame_a1, alpha=alpha)


def _classify_anticommutative(A: Algebra) -> tuple:
    label, frame = _anticommutative_case(A)
    rows_t, norm = frame(instantiate(label))
    rows_a, _ = frame(A, ref=norm)
    return label, linalg.matmul(linalg.inverse(rows_t), rows_a)


# non-anticommutative branches


def _find_element(A: Algebra, test):
    for a in candidate_vectors(A.dim):
        if test(a):
            return a
    raise ClassificationError("element search exhausted")


def _classify_nil5(A: Algebra) -> tuple:
    def top(a):
        s = multiply(A, a, a)
        return multiply(A, s, s)

    a = _find_element(A, lambda a: any(top(a)))
    s, t = multiply(A, a, a), top(a)
    p = _ratio(multiply(A, a, s), t)
    r = _ratio(multiply(A, s, a), t)
    a = _add(a, _scale(s, -p))
    if r != p:
        a = _scale(a, r - p)
    s = multiply(A, a, a)
    label = CatalogLabel("bN1" if r == p else "bN2")
    return label, [a, s, multiply(A, s, s)]


def _classify_nil4(A: Algebra) -> tuple:
    def cube(a):
        s = multiply(A, a, a)
        return multiply(A, a, s), multiply(A, s, a)

    a = _find_element(A, lambda a: any(cube(a)[0]) or any(cube(a)[1]))
    s = multiply(A, a, a)
    left, right = cube(a)
    if any(left):
        return CatalogLabel("rN2", _ratio(right, left)), [a, s, left]
    return CatalogLabel("rN1"), [a, s, right]


def _classify_nil3(A: Algebra) -> tuple:
    """Reduction through the symmetrised algebra A+ and the element a."""
    a = _find_element(A, lambda a: any(multiply(A, a, a)))
    s = multiply(A, a, a)
    P = plus_algebra(A)
    kernel = linalg.nullspace(linalg.transpose(_right_matrix(P, a)), 3, Scalar(1))
    b = next((v for v in kernel if _independent(a, s, v)), None)
    if b is None:
        raise ClassificationError("no complement of <a, a^2> annihilated by a in A+")
    mu0 = _ratio(multiply(P, b, b), s) if any(multiply(P, b, b)) else Scalar(0)
    if mu0:
        b = _scale(b, 1 / sqrt(mu0))
    lam, mu, nu = _coordinates(multiply(A, a, b), [a, s, b])
    if not mu0:
        if lam:
            return CatalogLabel("N2"), [
                _add(a, _scale(s, mu / lam), _scale(b, nu / lam)), s, _scale(b, 1 / lam)]
        if nu:
            return CatalogLabel("N3"), [
                _scale(a, 1 / nu), _scale(s, 1 / (nu * nu)), _add(b, _scale(s, mu / nu))]
        if mu:
            return CatalogLabel("N4"), [_scale(a, mu), _scale(s, mu * mu), b]
        return CatalogLabel("N1"), [a, s, b]
    if not lam and not nu:
        label = CatalogLabel("N6", mu)
        return label, [a, s, b if label.param == mu else _scale(b, -1)]
    norm = lam * lam + nu * nu
    if not norm:
        raise OutsideCatalog(
            f"isotropic product ab = {lam}*a + {mu}*a^2 + {nu}*b with b^2 = a^2 "
            "matches no catalog family",
            table=in_basis(A, [a, s, b]),
        )
    return CatalogLabel("N5"), [
        _scale(_add(_scale(a, nu), _scale(b, -lam)), 1 / norm),
        _scale(s, 1 / norm),
        _scale(_add(_scale(a, lam), _scale(b, nu), _scale(s, mu)), 1 / norm),
    ]


def _collisions(A: Algebra, label: CatalogLabel) -> list:
    """Non-parametric families of the same nil index sharing A's fingerprint."""
    if label.param is None:
        return []
    mine = fingerprint(A).as_tuple()
    nil = FAMILIES[label.family].nil_index
    hits = [f.id for f in FAMILIES.values()
            if not f.parametric and f.nil_index == nil
            and fingerprint(instantiate(CatalogLabel(f.id))).as_tuple() == mine]
    if hits:
        logger.warning(f"{label} shares its fingerprint with {', '.join(hits)}.")
    return hits


def classify(A: Algebra, k_max: int = None) -> Classification:
    """Catalog label of a 3-dimensional nilalgebra with a verified basis change.

    Raises:
        NotNil: some power of the generic element survives up to ``k_max``.
        OutsideCatalog: the reductions end in a table that is not on the list.
        TowerDepthExceeded: a needed square root exceeds the tower cap.
    """
    if A.dim != 3:
        raise ValueError(f"only 3-dimensional algebras are classified, got {A.dim}")
    if A.is_symbolic() or A.params:
        raise ParameterError("classify needs a fully instantiated table")
    result = nil_index(A, k_max or config.MAX_K, param_samples=[])
    if not result.is_nil:
        raise NotNil(f"algebra is not nil up to degree {result.k_max}")
    branches = {
        2: _classify_anticommutative,
        3: _classify_nil3,
        4: _classify_nil4,
        5: _classify_nil5,
    }
    if result.index not in branches:
        raise OutsideCatalog(f"nil index {result.index} does not occur in dimension 3")
    label, rows = branches[result.index](A)
    g = basis_change_from_rows(rows)
    if transform(A, g) != instantiate(label):
        raise ClassificationError(f"adapted basis for {label} does not reproduce its table")
    logger.info(f"Classified algebra as {label}.")
    return Classification(label, g, rows, _collisions(A, label))
