import logging
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, islice, permutations, product

from joblib import Parallel, delayed

from src import config
from src.algebra import Algebra, in_basis, normalize_entry
from src.catalog import CatalogLabel, family, instantiate, parse_label, symbolic
from src.errors import InvalidWitness, PoleAtZero
from src.scalar import Scalar
from src.symbolic import Polynomial, RationalFunction, rf_eval_at_zero
from src.utils import linalg

logger = logging.getLogger(__name__)

T = Polynomial.var("t")
ZERO_FAMILY = "C3-zero"


class Rejection(str, Enum):
    NOT_A_BASIS = "NotABasis"
    POLE_AT_ZERO = "PoleAtZero"
    WRONG_LIMIT = "WrongLimit"


@dataclass(frozen=True)
class DegenerationVerdict:
    """Outcome of verify_degeneration; ``triple`` is one-based."""

    verified: bool
    reason: Rejection = None
    triple: tuple = None

    def __bool__(self):
        return self.verified

    def __str__(self):
        if self.verified:
            return "Verified"
        if self.triple is None:
            return f"Rejected({self.reason.value})"
        i, j, k = self.triple
        return f"Rejected({self.reason.value} at c_{i}{j}^{k})"


VERIFIED = DegenerationVerdict(True)


def rejected(reason: Rejection, triple: tuple = None) -> DegenerationVerdict:
    return DegenerationVerdict(False, reason, triple)


def t_power(p: int) -> RationalFunction:
    if p >= 0:
        return RationalFunction.lift(T ** p)
    return RationalFunction(Polynomial.constant(1), T ** (-p))


@dataclass
class DegenerationWitness:
    """A parametrized basis E_i(t) of the source exhibiting source -> target.

    Attributes:
        source: catalog family id of the source.
        target: catalog family id of the target.
        basis: three rows of RationalFunctions, the coordinates of E_i(t) in
            the source's catalog basis.
        source_param: fixed parameter of a family source. When both this and
            ``index`` are None a family source keeps alpha free.
        target_param: parameter of a family target; None keeps it symbolic.
        index: the path f(t) substituted for the source family's parameter.
        source_table: an explicit source table, used instead of the catalog
            when the source is not a catalog member.
        provenance: "published", "corrected" or "derived".
    """

    source: str
    target: str
    basis: list
    source_param: object = None
    target_param: object = None
    index: object = None
    source_table: Algebra = None
    provenance: str = "derived"

    def __post_init__(self):
        if len(self.basis) != 3 or any(len(row) != 3 for row in self.basis):
            raise InvalidWitness("a witness basis must be three rows of three coordinates")
        self.basis = [[RationalFunction.lift(x) for x in row] for row in self.basis]
        if self.source_table is None:
            fam = family(self.source)
            if not fam.parametric and (self.source_param is not None or self.index is not None):
                raise InvalidWitness(f"{self.source} takes no parameter")
        target = family(self.target)
        if not target.parametric and self.target_param is not None:
            raise InvalidWitness(f"{self.target} takes no parameter")

    def source_algebra(self) -> Algebra:
        if self.source_table is not None:
            return self.source_table
        A = symbolic(self.source)
        value = self.index if self.index is not None else self.source_param
        if value is not None:
            A = A.instantiate({"alpha": value})
        return A

    def target_algebra(self) -> Algebra:
        B = symbolic(self.target)
        if self.target_param is not None:
            B = B.instantiate({"alpha": self.target_param})
        return B

    def describe(self) -> str:
        src = self.source if self.source_param is None else f"{self.source}({self.source_param})"
        if self.index is not None:
            src = f"{self.source}[alpha={self.index}]"
        dst = self.target if self.target_param is None else f"{self.target}({self.target_param})"
        return f"{src} -> {dst}"


def verify_degeneration(w: DegenerationWitness) -> DegenerationVerdict:
    """Check that the structure constants in E(t) tend to the target's table.

    Limits are taken by exact reduction of rational functions in t; the
    comparison with a family target is an identity in alpha.
    """
    if not linalg.determinant(w.basis):
        logger.info(f"{w.describe()}: basis determinant vanishes identically")
        return rejected(Rejection.NOT_A_BASIS)
    moved = in_basis(w.source_algebra(), w.basis)
    target = w.target_algebra()
    for i, j, k in product(range(3), repeat=3):
        try:
            value = rf_eval_at_zero(moved.c(i, j, k))
        except PoleAtZero:
            logger.info(f"{w.describe()}: pole at t=0 in c_{i + 1}{j + 1}^{k + 1}")
            return rejected(Rejection.POLE_AT_ZERO, (i + 1, j + 1, k + 1))
        if value - RationalFunction.lift(target.c(i, j, k)):
            logger.info(f"{w.describe()}: wrong limit in c_{i + 1}{j + 1}^{k + 1}")
            return rejected(Rejection.WRONG_LIMIT, (i + 1, j + 1, k + 1))
    logger.debug(f"{w.describe()}: verified")
    return VERIFIED


def scaling_witness(source: str, source_param=None, index=None) -> DegenerationWitness:
    """E_i = t e_i, which sends every structure constant to zero."""
    t = RationalFunction.lift(T)
    zero = RationalFunction.lift(0)
    rows = [[t if k == i else zero for k in range(3)] for i in range(3)]
    return DegenerationWitness(source, ZERO_FAMILY, rows, source_param=source_param,
                               index=index, provenance="derived")


def identity_witness(label: CatalogLabel) -> DegenerationWitness:
    one, zero = RationalFunction.lift(1), RationalFunction.lift(0)
    rows = [[one if k == i else zero for k in range(3)] for i in range(3)]
    return DegenerationWitness(label.family, label.family, rows, source_param=label.param,
                               target_param=label.param, provenance="derived")


def _substitute_t(value: RationalFunction, power: int) -> RationalFunction:
    return value.substitute({"t": T ** power}) if power != 1 else value


def compose_witnesses(first: DegenerationWitness, second: DegenerationWitness,
                      max_power: int = 8) -> DegenerationWitness:
    """A witness for first.source -> second.target.

    The first path is slowed down to t^N, then multiplied on the left by the
    second basis; the smallest N in [1, max_power] that verifies is used.

    Raises:
        InvalidWitness: if the witnesses do not chain or no N verifies.
    """
    if first.target != second.source:
        raise InvalidWitness(f"cannot chain {first.describe()} with {second.describe()}")
    if second.index is not None:
        raise InvalidWitness("the second witness must start at a fixed algebra")
    if first.target_param is not None and second.source_param is not None \
            and first.target_param != second.source_param:
        raise InvalidWitness("the middle algebra differs between the two witnesses")
    for power in range(1, max_power + 1):
        slow = [[_substitute_t(x, power) for x in row] for row in first.basis]
        rows = linalg.matmul(second.basis, slow)
        index = None if first.index is None else _substitute_t(
            RationalFunction.lift(first.index), power)
        candidate = DegenerationWitness(
            first.source, second.target, rows, source_param=first.source_param,
            target_param=second.target_param, index=index,
            source_table=first.source_table, provenance="derived",
        )
        if verify_degeneration(candidate):
            logger.info(f"composed {candidate.describe()} with t -> t^{power}")
            return candidate
    raise InvalidWitness(
        f"no slowdown up to t^{max_power} composes {first.describe()} and {second.describe()}")


# bounded search over E(t) = diag(c_i t^p_i) M(t); every entry of E is c t^p


@dataclass(frozen=True)
class SearchResult:
    """Found carries a verified witness; Exhausted carries the reason."""

    found: bool
    witness: DegenerationWitness = None
    tried: int = 0
    reason: str = None

    def __bool__(self):
        return self.found


def _row_shapes(row_terms: int) -> list:
    return [cols for size in range(1, min(row_terms, 3) + 1)
            for cols in combinations(range(3), size)]


def _lowest_term(value) -> tuple:
    """(order, coefficient) of the lowest power of t in a nonzero entry."""
    if isinstance(value, RationalFunction):
        (num_order, num_coef), (den_order, den_coef) = \
            _lowest_term(value.num), _lowest_term(value.den)
        return num_order - den_order, num_coef / den_coef
    if isinstance(value, Polynomial):
        parts = value.coefficients_in("t")
        low = min(parts)
        return low, parts[low].constant_value()
    return 0, value


def _mixing_matrix(shapes, idx, spread, ratios):
    """M(t) with first entry 1 per row; returns it with a row-shifted polynomial copy."""
    m, shifted = [], []
    extra = iter(zip(spread, ratios))
    for i in idx:
        cols = shapes[i]
        entries = [(cols[0], 0, Scalar(1))] + [(col, *next(extra)) for col in cols[1:]]
        low = min(q for _, q, _ in entries)
        row, poly_row = [Scalar(0)] * 3, [Polynomial()] * 3
        for col, q, d in entries:
            row[col] = d if q == 0 else t_power(q) * d
            poly_row[col] = Polynomial.var("t", q - low) * d
        m.append(row)
        shifted.append(poly_row)
    return m, shifted


def mixing_matrices(row_terms: int = None, max_pow: int = None, coefficients=None):
    """Invertible mixing matrices M(t), sparsest first, then by total |exponent|.

    A row has 1..row_terms nonzero entries; the first is 1 and each other one
    is d t^q with d in ``coefficients`` and |q| <= 2 max_pow. Ties keep the
    order of row shapes, exponents and coefficients.
    """
    row_terms = row_terms or config.SEARCH_ROW_TERMS
    max_pow = config.SEARCH_MAX_POW if max_pow is None else max_pow
    coefficients = _search_coefficients(coefficients)
    shapes = _row_shapes(row_terms)
    patterns = sorted(
        (sum(len(shapes[i]) for i in idx), idx)
        for idx in product(range(len(shapes)), repeat=3)
        if any(all(perm[r] in shapes[i] for r, i in enumerate(idx))
               for perm in permutations(range(3)))
    )
    span = 2 * max_pow
    for weight in sorted({w for w, _ in patterns}):
        extra = weight - 3
        for total in range(extra * span + 1):
            for w, idx in patterns:
                if w != weight:
                    continue
                for spread in product(range(-span, span + 1), repeat=extra):
                    if sum(abs(q) for q in spread) != total:
                        continue
                    for ratios in product(coefficients, repeat=extra):
                        m, shifted = _mixing_matrix(shapes, idx, spread, ratios)
                        if linalg.determinant(shifted):
                            yield m


def _scan_mixing(A: Algebra, target: dict, m, max_pow: int, coefficients) -> tuple:
    """First (pows, coefs) for which diag(c t^p) m degenerates A to target.

    Every entry c_i d t^(p_i + q) of the basis must keep c_i d in
    ``coefficients`` and |p_i + q| <= max_pow.
    """
    moved = in_basis(A, m)
    support = [(key, *_lowest_term(c)) for key, c in moved.table.items()]
    entries = [[_lowest_term(x) for x in row if x] for row in m]
    allowed = set(coefficients)
    wanted = set(target)
    for pows in product(range(-max_pow, max_pow + 1), repeat=3):
        if any(abs(pows[i] + q) > max_pow for i, row in enumerate(entries) for q, _ in row):
            continue
        limit = []
        for (i, j, k), order, c in support:
            e = pows[i] + pows[j] - pows[k] + order
            if e < 0:
                break
            if e == 0:
                limit.append(((i, j, k), c))
        else:
            if {key for key, _ in limit} != wanted:
                continue
            for coefs in product(coefficients, repeat=3):
                if any(coefs[i] * d not in allowed for i, row in enumerate(entries) for _, d in row):
                    continue
                if all(coefs[i] * coefs[j] / coefs[k] * c == target[(i, j, k)]
                       for (i, j, k), c in limit):
                    return pows, coefs
    return None


def _witness_rows(m, pows, coefs) -> list:
    return [[t_power(pows[i]) * (x * coefs[i]) for x in m[i]] for i in range(3)]


def in_template(basis, max_pow: int = None, coefficients=None, row_terms: int = None) -> bool:
    """Whether every row has at most row_terms entries, each c t^p with c and p in range."""
    row_terms = row_terms or config.SEARCH_ROW_TERMS
    max_pow = config.SEARCH_MAX_POW if max_pow is None else max_pow
    allowed = set(_search_coefficients(coefficients))
    for row in basis:
        terms = [x for x in (normalize_entry(x) for x in row) if x]
        if not terms or len(terms) > row_terms:
            return False
        for x in terms:
            if not _is_monomial(x):
                return False
            order, c = _lowest_term(x)
            if abs(order) > max_pow or c not in allowed:
                return False
    return True


def _is_monomial(x) -> bool:
    if isinstance(x, RationalFunction):
        return len(x.num.terms) == 1 and len(x.den.terms) == 1
    if isinstance(x, Polynomial):
        return len(x.terms) == 1
    return True


def _search_coefficients(coefficients) -> list:
    return [Scalar(c) for c in (coefficients or config.SEARCH_COEFFICIENTS) if c]


def _as_label(value) -> CatalogLabel:
    return parse_label(value) if isinstance(value, str) else value


def search_witness(source, target, max_pow: int = None, coefficients=None,
                   row_terms: int = None, n_jobs: int = None) -> SearchResult:
    """Look for a witness of source -> target in the template space.

    ``source`` is a CatalogLabel, a label string, or an arbitrary Algebra;
    an Algebra is classified first and the classifying basis is composed
    into the returned witness. Exhausted never proves a non-degeneration.
    """
    from src.certificates import semicontinuity_battery

    target = _as_label(target)
    tried = 0
    classified_rows = None
    source_table = None
    if isinstance(source, Algebra):
        from src.classify import classify

        result = classify(source)
        classified_rows = [[RationalFunction.lift(x) for x in row] for row in result.rows]
        source_table = source
        source = result.label
    source = _as_label(source)
    A, B = instantiate(source), instantiate(target)

    if A == B:
        witness = identity_witness(source)
    elif target.family == ZERO_FAMILY:
        witness = scaling_witness(source.family, source.param)
    else:
        battery = semicontinuity_battery(A, B)
        if battery.blocked:
            logger.info(f"search {source} -> {target} skipped: {'; '.join(battery.reasons)}")
            return SearchResult(False, reason="blocked: " + "; ".join(battery.reasons))
        witness, tried, reason = _grid_search(source, target, A, B, max_pow, coefficients,
                                              row_terms, n_jobs)
        if witness is None:
            logger.info(f"search {source} -> {target} stopped after {tried} mixing matrices: {reason}")
            return SearchResult(False, tried=tried, reason=reason)

    if classified_rows is not None:
        rows = linalg.matmul(witness.basis, classified_rows)
        witness = DegenerationWitness(source.family, witness.target, rows,
                                      target_param=witness.target_param,
                                      source_table=source_table)
    if not verify_degeneration(witness):
        raise InvalidWitness(f"search produced an unverifiable witness for {witness.describe()}")
    logger.info(f"found witness {witness.describe()}")
    return SearchResult(True, witness, tried=tried)


def _grid_search(source, target, A, B, max_pow, coefficients, row_terms, n_jobs, budget=None):
    max_pow = config.SEARCH_MAX_POW if max_pow is None else max_pow
    coefficients = _search_coefficients(coefficients)
    n_jobs = n_jobs or config.N_JOBS
    budget = config.SEARCH_BUDGET if budget is None else budget
    wanted = dict(B.table)
    matrices = mixing_matrices(row_terms, max_pow, coefficients)
    batch = max(1, n_jobs) * 8
    tried = 0
    while tried < budget:
        chunk = list(islice(matrices, min(batch, budget - tried)))
        if not chunk:
            return None, tried, "template space exhausted"
        hits = Parallel(n_jobs=n_jobs)(
            delayed(_scan_mixing)(A, wanted, m, max_pow, coefficients) for m in chunk
        )
        for offset, hit in enumerate(hits):
            if hit is not None:
                pows, coefs = hit
                rows = _witness_rows(chunk[offset], pows, coefs)
                witness = DegenerationWitness(
                    source.family, target.family, rows, source_param=source.param,
                    target_param=target.param, provenance="derived",
                )
                return witness, tried + offset + 1, None
        tried += len(chunk)
        logger.debug(f"search {source} -> {target}: {tried} mixing matrices scanned")
    return None, tried, f"search budget of {budget} mixing matrices spent"
