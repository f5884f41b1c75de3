import logging
from dataclasses import dataclass
from itertools import product

from src.errors import SingularMatrix
from src.scalar import Scalar
from src.symbolic import Polynomial, RationalFunction
from src.utils import linalg

logger = logging.getLogger(__name__)


def normalize_entry(x):
    """Collapse constant polynomials and rational functions to Scalars."""
    if isinstance(x, RationalFunction):
        if x.is_constant():
            return x.constant_value()
        if x.is_polynomial():
            return x.to_polynomial()
        return x
    if isinstance(x, Polynomial):
        return x.constant_value() if x.is_constant() else x
    if isinstance(x, Scalar):
        return x
    return Scalar(x)


class Algebra:
    """A finite-dimensional algebra given by structure constants.

    ``table`` maps zero-based ``(i, j, k)`` to the coefficient of e_k in
    e_i e_j; missing triples are zero. Entries are Scalars, or Polynomials /
    RationalFunctions in the declared ``params`` and ``t``.
    """

    def __init__(self, dim: int, table: dict = None, params=()):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.dim = dim
        self.params = tuple(params)
        self.table = {}
        for (i, j, k), c in (table or {}).items():
            if not all(0 <= x < dim for x in (i, j, k)):
                raise ValueError(f"index ({i + 1},{j + 1},{k + 1}) outside [1,{dim}]")
            c = normalize_entry(c)
            if c:
                self.table[(i, j, k)] = c

    @classmethod
    def from_products(cls, dim: int, products: dict, params=()) -> "Algebra":
        """Build from ``{(i, j): {k: c}}`` with one-based indices."""
        table = {}
        for (i, j), image in products.items():
            for k, c in image.items():
                table[(i - 1, j - 1, k - 1)] = c
        return cls(dim, table, params)

    @classmethod
    def zero(cls, dim: int = 3) -> "Algebra":
        return cls(dim)

    def c(self, i: int, j: int, k: int):
        return self.table.get((i, j, k), Scalar(0))

    def basis_product(self, i: int, j: int) -> list:
        return [self.c(i, j, k) for k in range(self.dim)]

    def is_symbolic(self) -> bool:
        return any(not isinstance(c, Scalar) for c in self.table.values())

    def is_commutative(self) -> bool:
        return all(not (self.c(i, j, k) - self.c(j, i, k))
                   for i, j, k in product(range(self.dim), repeat=3))

    def is_anticommutative(self) -> bool:
        return all(not (self.c(i, j, k) + self.c(j, i, k))
                   for i, j, k in product(range(self.dim), repeat=3))

    def instantiate(self, values: dict) -> "Algebra":
        """Substitute parameter values (Scalars or polynomials) into the table."""
        table = {}
        for key, c in self.table.items():
            if isinstance(c, (Polynomial, RationalFunction)):
                c = c.substitute(values)
            table[key] = c
        params = tuple(p for p in self.params if p not in values)
        return Algebra(self.dim, table, params)

    def scaled(self, factor) -> "Algebra":
        return Algebra(self.dim, {key: c * factor for key, c in self.table.items()}, self.params)

    def __eq__(self, other):
        if not isinstance(other, Algebra) or other.dim != self.dim:
            return False
        keys = set(self.table) | set(other.table)
        return all(not (self.c(*key) - other.c(*key)) for key in keys)

    def __hash__(self):
        return hash((self.dim, frozenset(self.table.items())))

    def __repr__(self):
        entries = ", ".join(
            f"e{i + 1}e{j + 1}:{c}e{k + 1}" for (i, j, k), c in sorted(self.table.items())
        )
        return f"Algebra(dim={self.dim}, {{{entries}}})"


def multiply(A: Algebra, u, v) -> list:
    """Bilinear product of coordinate vectors."""
    if len(u) != A.dim or len(v) != A.dim:
        raise ValueError("vector length does not match algebra dimension")
    out = [Scalar(0)] * A.dim
    for (i, j, k), c in A.table.items():
        if u[i] and v[j]:
            out[k] = out[k] + u[i] * v[j] * c
    return out


def basis_vector(dim: int, i: int) -> list:
    return [Scalar(1) if k == i else Scalar(0) for k in range(dim)]


def in_basis(A: Algebra, rows) -> Algebra:
    """Structure constants of A in the basis f_i = rows[i] (coordinates in e)."""
    n = A.dim
    rows = [[normalize_entry(x) for x in row] for row in rows]
    det = linalg.determinant(rows)
    if not det:
        raise SingularMatrix("rows do not form a basis")
    inv = linalg.inverse(rows)
    table = {}
    for i in range(n):
        for j in range(n):
            prod = multiply(A, rows[i], rows[j])
            for k in range(n):
                coord = sum((prod[m] * inv[m][k] for m in range(1, n)), prod[0] * inv[0][k])
                table[(i, j, k)] = coord
    return Algebra(n, table, A.params)


def transform(A: Algebra, g) -> Algebra:
    """The structure g*mu, (g*mu)(x, y) = g mu(g^-1 x, g^-1 y)."""
    g_inv = linalg.inverse(g)
    return in_basis(A, linalg.transpose(g_inv))


def basis_change_from_rows(rows):
    """The BasisChange g with transform(A, g) == in_basis(A, rows)."""
    return linalg.inverse(linalg.transpose(rows))


def plus_algebra(A: Algebra) -> Algebra:
    half = Scalar(1) / 2
    table = {}
    for i, j, k in product(range(A.dim), repeat=3):
        table[(i, j, k)] = (A.c(i, j, k) + A.c(j, i, k)) * half
    return Algebra(A.dim, table, A.params)


@dataclass(frozen=True)
class Subspace:
    """A subspace stored as the nonzero rows of its reduced echelon form."""

    rows: tuple
    ambient: int

    @classmethod
    def span(cls, vectors, ambient: int) -> "Subspace":
        vectors = [list(v) for v in vectors if any(v)]
        if not vectors:
            return cls((), ambient)
        echelon, _ = linalg.rref(vectors)
        return cls(tuple(tuple(r) for r in echelon), ambient)

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        return cls.span([basis_vector(ambient, i) for i in range(ambient)], ambient)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def is_zero(self) -> bool:
        return not self.rows

    def contains(self, v) -> bool:
        return Subspace.span(list(self.rows) + [list(v)], self.ambient).dim == self.dim

    def issubset(self, other: "Subspace") -> bool:
        return all(other.contains(r) for r in self.rows)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(list(self.rows) + list(other.rows), self.ambient)

    def __eq__(self, other):
        if not isinstance(other, Subspace) or self.dim != other.dim:
            return False
        return all(not (a - b) for r1, r2 in zip(self.rows, other.rows) for a, b in zip(r1, r2))

    def __hash__(self):
        return hash((self.ambient, self.dim))


def product_subspace(A: Algebra, U: Subspace, W: Subspace) -> Subspace:
    """Span of all products u w with u in U and w in W."""
    return Subspace.span([multiply(A, u, w) for u in U.rows for w in W.rows], A.dim)


def square(A: Algebra) -> Subspace:
    full = Subspace.full(A.dim)
    return product_subspace(A, full, full)


def annihilator(A: Algebra) -> Subspace:
    n = A.dim
    equations = []
    for j in range(n):
        for k in range(n):
            equations.append([A.c(i, j, k) for i in range(n)])
            equations.append([A.c(j, i, k) for i in range(n)])
    equations = [row for row in equations if any(row)]
    if not equations:
        return Subspace.full(n)
    return Subspace.span(linalg.nullspace(equations, n, Scalar(1)), n)


@dataclass
class Series:
    kind: str
    terms: list
    reaches_zero: bool

    @property
    def length(self) -> int:
        return len(self.terms)


def series(A: Algebra, kind: str = "derived") -> Series:
    """Derived series A, A^2, (A^2)^2, ... or power series A^n = sum A^i A^j.

    Both stop at zero or as soon as a term repeats.
    """
    full = Subspace.full(A.dim)
    terms = [full]
    if kind == "derived":
        while not terms[-1].is_zero():
            nxt = product_subspace(A, terms[-1], terms[-1])
            if nxt == terms[-1]:
                break
            terms.append(nxt)
    elif kind == "power":
        while not terms[-1].is_zero():
            n = len(terms) + 1
            nxt = Subspace((), A.dim)
            for i in range(1, n):
                nxt = nxt + product_subspace(A, terms[i - 1], terms[n - i - 1])
            if nxt == terms[-1]:
                break
            terms.append(nxt)
    else:
        raise ValueError(f"unknown series kind '{kind}'")
    return Series(kind, terms, terms[-1].is_zero())


def is_solvable(A: Algebra) -> bool:
    return series(A, "derived").reaches_zero


def is_nilpotent(A: Algebra) -> bool:
    return series(A, "power").reaches_zero
