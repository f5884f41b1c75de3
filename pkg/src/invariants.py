import logging
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import product
from math import gcd

from src import config
from src.algebra import (
    Algebra, annihilator, basis_vector, is_nilpotent, is_solvable, multiply,
    product_subspace, square, Subspace,
)
from src.nil import nil_index
from src.scalar import Scalar
from src.symbolic import Polynomial, RationalFunction
from src.utils import linalg

logger = logging.getLogger(__name__)


def derivation_system(A: Algebra) -> list:
    """The n^3 x n^2 linear system whose kernel is Der(A).

    Unknown d[m][l] (column index m * n + l) is the e_m coordinate of D(e_l).
    """
    n = A.dim
    rows = []
    for i, j, k in product(range(n), repeat=3):
        row = [Scalar(0)] * (n * n)
        for l in range(n):
            c = A.c(i, j, l)
            if c:
                row[k * n + l] = row[k * n + l] + c
        for m in range(n):
            c = A.c(m, j, k)
            if c:
                row[m * n + i] = row[m * n + i] - c
            c = A.c(i, m, k)
            if c:
                row[m * n + j] = row[m * n + j] - c
        if any(row):
            rows.append(row)
    return rows


def derivation_dim(A: Algebra) -> int:
    """Dimension of Der(A); generic value when the table is symbolic."""
    rows = derivation_system(A)
    return A.dim * A.dim - (linalg.rank(rows) if rows else 0)


def derivations(A: Algebra) -> list:
    """A basis of Der(A), each derivation as an n x n matrix D[m][l]."""
    n = A.dim
    rows = derivation_system(A)
    if not rows:
        kernel = [basis_vector(n * n, p) for p in range(n * n)]
    else:
        kernel = linalg.nullspace(rows, n * n, Scalar(1))
    return [[v[m * n:(m + 1) * n] for m in range(n)] for v in kernel]


def orbit_dimension(A: Algebra) -> int:
    return A.dim * A.dim - derivation_dim(A)


def _rational_roots(p: Polynomial, var: str = "alpha") -> set:
    parts = p.coefficients_in(var)
    if any(not c.is_constant() or not c.constant_value().is_rational() for c in parts.values()):
        return set()
    coeffs = {e: c.constant_value().real for e, c in parts.items()}
    roots = set()
    low = min(coeffs)
    if low > 0:
        roots.add(Fraction(0))
    coeffs = {e - low: c for e, c in coeffs.items()}
    if len(coeffs) == 1:
        return roots
    lcm = 1
    for c in coeffs.values():
        lcm = lcm * c.denominator // gcd(lcm, c.denominator)
    ints = {e: int(c * lcm) for e, c in coeffs.items()}
    a0, an = abs(ints[0]), abs(ints[max(ints)])
    divisors = lambda n: [d for d in range(1, n + 1) if n % d == 0]
    for num in divisors(a0):
        for den in divisors(an):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if sum(c * cand ** e for e, c in ints.items()) == 0:
                    roots.add(cand)
    return roots


@dataclass
class DerivationProfile:
    generic: int
    exceptional: dict


def derivation_profile(A: Algebra, var: str = "alpha") -> DerivationProfile:
    """Generic Der dimension of a one-parameter family and its rational exceptions.

    Candidates are the rational roots of every pivot and entry denominator met
    during elimination; each candidate is confirmed by instantiation.
    """
    n2 = A.dim * A.dim
    reduced = [[RationalFunction.lift(x) for x in r] for r in derivation_system(A)]
    polys = [c.den for c in A.table.values() if isinstance(c, RationalFunction)]
    rank = 0
    for col in range(n2):
        k = next((k for k, r in enumerate(reduced) if r[col]), None)
        if k is None:
            continue
        pivot_row = reduced.pop(k)
        pivot = pivot_row[col]
        polys.extend([pivot.num, pivot.den])
        pivot_row = [x / pivot for x in pivot_row]
        reduced = [[a - r[col] * b for a, b in zip(r, pivot_row)] if r[col] else r
                   for r in reduced]
        reduced = [r for r in reduced if any(r)]
        rank += 1
    generic = n2 - rank
    candidates = set()
    for p in polys:
        if var in p.variables():
            candidates |= _rational_roots(p, var)
    exceptional = {}
    for cand in sorted(candidates):
        value = derivation_dim(A.instantiate({var: Scalar(cand)}))
        if value != generic:
            exceptional[str(Scalar(cand))] = value
    logger.info(f"Derivation profile: generic {generic}, exceptional {exceptional}.")
    return DerivationProfile(generic, exceptional)


def jacobi_defect_rank(A: Algebra) -> int:
    """Dimension of the span of all Jacobiators of basis triples."""
    n = A.dim
    vectors = []
    for i, j, k in product(range(n), repeat=3):
        e = [basis_vector(n, x) for x in (i, j, k)]
        terms = [
            multiply(A, multiply(A, e[0], e[1]), e[2]),
            multiply(A, multiply(A, e[1], e[2]), e[0]),
            multiply(A, multiply(A, e[2], e[0]), e[1]),
        ]
        vectors.append([a + b + c for a, b, c in zip(*terms)])
    return Subspace.span(vectors, n).dim


@dataclass(frozen=True)
class Fingerprint:
    square_dim: int
    square_square_dim: int
    annihilator_dim: int
    derivation_dim: int
    commutative: bool
    anticommutative: bool
    solvable: bool
    nilpotent: bool
    nil_index: int

    def as_tuple(self) -> tuple:
        return tuple(asdict(self).values())

    def as_dict(self) -> dict:
        return asdict(self)


def fingerprint(A: Algebra, k_max: int = None) -> Fingerprint:
    sq = square(A)
    nil = nil_index(A, k_max or config.MAX_K, param_samples=[])
    return Fingerprint(
        square_dim=sq.dim,
        square_square_dim=product_subspace(A, sq, sq).dim,
        annihilator_dim=annihilator(A).dim,
        derivation_dim=derivation_dim(A),
        commutative=A.is_commutative(),
        anticommutative=A.is_anticommutative(),
        solvable=is_solvable(A),
        nilpotent=is_nilpotent(A),
        nil_index=nil.index,
    )
