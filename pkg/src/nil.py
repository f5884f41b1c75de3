import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product

from src import config
from src.algebra import Algebra, basis_vector, multiply
from src.scalar import Scalar, as_scalar
from src.symbolic import INDEX, Polynomial, as_polynomial
from src.utils.literals import parse_scalar

logger = logging.getLogger(__name__)

LEAF = "x"


@lru_cache(maxsize=None)
def bracketings(k: int) -> tuple:
    """All full binary trees with k leaves; a tree is LEAF or a (left, right) pair."""
    if k < 1:
        raise ValueError("degree must be at least 1")
    if k == 1:
        return (LEAF,)
    trees = []
    for i in range(1, k):
        for left in bracketings(i):
            for right in bracketings(k - i):
                trees.append((left, right))
    return tuple(trees)


def tree_to_str(tree) -> str:
    if tree == LEAF:
        return "x"
    return f"({tree_to_str(tree[0])}{tree_to_str(tree[1])})"


def generic_element(A: Algebra) -> list:
    if A.dim > 3:
        raise ValueError("generic elements are available up to dimension 3")
    return [Polynomial.var(f"x{i + 1}") for i in range(A.dim)]


def _vec_key(v) -> tuple:
    return tuple(v)


def _is_zero(v) -> bool:
    return not any(v)


def power_polynomials(A: Algebra, k: int) -> list:
    """Value of every degree-k bracketing of the generic element, in enumeration order."""
    if k < 2:
        raise ValueError("degree must be at least 2")
    cache = {LEAF: generic_element(A)}

    def value(tree):
        if tree not in cache:
            cache[tree] = multiply(A, value(tree[0]), value(tree[1]))
        return cache[tree]

    return [value(tree) for tree in bracketings(k)]


def power_coefficients(A: Algebra, k: int) -> list:
    """Coefficients in x1..x3 of every degree-k bracketing, distinct up to scaling.

    For a table with polynomial entries these generate the ideal of tables
    on which every degree-k power vanishes.
    """
    positions = [INDEX[v] for v in ("x1", "x2", "x3")]
    seen, out = set(), []
    for value in power_polynomials(A, k):
        for entry in value:
            parts = {}
            for exp, c in as_polynomial(entry).terms.items():
                rest = tuple(0 if pos in positions else e for pos, e in enumerate(exp))
                parts.setdefault(tuple(exp[pos] for pos in positions), {})[rest] = c
            for terms in parts.values():
                p = Polynomial(terms).monic()
                key = frozenset(p.terms.items())
                if p and key not in seen:
                    seen.add(key)
                    out.append(p)
    return out


def vanishing_powers(A: Algebra, k: int) -> bool:
    """Every degree-k bracketing of the generic element is zero."""
    return not any(any(v) for v in power_polynomials(A, k))


def _distinct_powers(A: Algebra, k_max: int) -> dict:
    """Distinct values of degree-m bracketings for m = 1..k_max."""
    levels = {1: {_vec_key(generic_element(A))}}
    for m in range(2, k_max + 1):
        values = set()
        for i in range(1, m):
            for u in levels[i]:
                if _is_zero(u):
                    continue
                for v in levels[m - i]:
                    if _is_zero(v):
                        continue
                    values.add(_vec_key(multiply(A, list(u), list(v))))
        if not values:
            values = {_vec_key([Scalar(0)] * A.dim)}
        levels[m] = values
        logger.debug(f"degree {m}: {len(values)} distinct bracketing values")
    return levels


@dataclass
class NilResult:
    """NilOfIndex(index) when ``index`` is set, NotNilUpTo(k_max) otherwise."""

    index: int
    k_max: int
    samples: dict = field(default_factory=dict)

    @property
    def is_nil(self) -> bool:
        return self.index is not None

    def __str__(self):
        return f"NilOfIndex({self.index})" if self.is_nil else f"NotNilUpTo({self.k_max})"


def _nil_index_exact(A: Algebra, k_max: int):
    levels = _distinct_powers(A, k_max)
    nonzero = [m for m, values in levels.items() if any(not _is_zero(v) for v in values)]
    top = max(nonzero)
    if top == k_max:
        return None
    return top + 1


def default_samples() -> list:
    return [parse_scalar(s.strip()) for s in config.PARAM_SAMPLES.split(",") if s.strip()]


def nil_index(A: Algebra, k_max: int = None, param_samples=None) -> NilResult:
    """Nil index over all bracketings, every degree up to ``k_max`` checked on its own.

    Parametric algebras are decided symbolically; the samples are evaluated too
    and reported per value.
    """
    k_max = config.MAX_K if k_max is None else k_max
    if k_max < 2:
        raise ValueError("k_max must be at least 2")
    result = NilResult(_nil_index_exact(A, k_max), k_max)
    if A.params:
        samples = default_samples() if param_samples is None else param_samples
        for s in samples:
            s = as_scalar(s)
            inst = A.instantiate({p: s for p in A.params})
            result.samples[str(s)] = _nil_index_exact(inst, k_max)
            if result.samples[str(s)] != result.index:
                logger.info(f"Parameter value {s} has nil index {result.samples[str(s)]}, "
                            f"generic value is {result.index}.")
    return result


def is_symmetric_mono_leibniz(A: Algebra) -> bool:
    """Every one-generated subalgebra is left and right Leibniz, i.e. x^3 = 0."""
    result = nil_index(A, 3, param_samples=[])
    return result.is_nil and result.index <= 3


# trilinear identities

LEFT = "((ab)c)"
RIGHT = "(a(bc))"


@dataclass(frozen=True)
class IdentityTerm:
    """``coef`` times the tree applied to the letters of ``perm`` in slot order a, b, c."""

    coef: Scalar
    tree: str
    perm: str

    def __post_init__(self):
        if self.tree not in (LEFT, RIGHT):
            raise ValueError(f"tree must be {LEFT} or {RIGHT}, got {self.tree}")
        if sorted(self.perm) != ["x", "y", "z"]:
            raise ValueError(f"perm must be a permutation of xyz, got {self.perm}")

    def evaluate(self, A: Algebra, letters: dict) -> list:
        a, b, c = (letters[ch] for ch in self.perm)
        if self.tree == LEFT:
            value = multiply(A, multiply(A, a, b), c)
        else:
            value = multiply(A, a, multiply(A, b, c))
        return [x * self.coef for x in value]


def term(coef, tree: str, perm: str) -> IdentityTerm:
    return IdentityTerm(as_scalar(coef), tree, perm)


@dataclass
class IdentityCheck:
    holds: bool
    witness: tuple = None

    def __str__(self):
        return "Holds" if self.holds else f"Fails{self.witness}"


def check_trilinear_identity(A: Algebra, terms) -> IdentityCheck:
    """Decide a multilinear degree-3 identity on all basis triples."""
    n = A.dim
    for p, q, r in product(range(n), repeat=3):
        letters = {"x": basis_vector(n, p), "y": basis_vector(n, q), "z": basis_vector(n, r)}
        total = [Scalar(0)] * n
        for t in terms:
            total = [s + v for s, v in zip(total, t.evaluate(A, letters))]
        if any(total):
            return IdentityCheck(False, (p + 1, q + 1, r + 1))
    return IdentityCheck(True)


def identity_from_coefficients(alphas) -> list:
    """The ten-coefficient identity family satisfied by the non-nilpotent nilalgebra."""
    a = [as_scalar(x) for x in alphas]
    if len(a) != 10:
        raise ValueError("expected ten coefficients")
    shapes = [
        (LEFT, "xyz"), (LEFT, "yxz"), (LEFT, "xzy"), (LEFT, "zyx"), (LEFT, "yzx"),
        (LEFT, "zxy"), (RIGHT, "zxy"), (RIGHT, "zyx"), (RIGHT, "yxz"), (RIGHT, "xzy"),
    ]
    terms = [IdentityTerm(c, tree, perm) for c, (tree, perm) in zip(a, shapes)]
    common = -a[0] + a[1] + a[6] - a[7]
    terms.append(IdentityTerm(common - a[3] + a[4] + a[9], RIGHT, "xyz"))
    terms.append(IdentityTerm(common - a[2] + a[5] + a[8], RIGHT, "yzx"))
    return [t for t in terms if t.coef]


NAMED_IDENTITIES = {
    "leibniz": [term(1, LEFT, "xyz"), term(-1, LEFT, "xzy"), term(-1, RIGHT, "xyz")],
    "reverse-leibniz": [term(1, LEFT, "xyz"), term(-1, LEFT, "zyx"), term(-1, RIGHT, "yzx")],
    "weakly-associative": [
        term(1, LEFT, "xyz"), term(-1, RIGHT, "xyz"), term(1, LEFT, "yzx"),
        term(-1, RIGHT, "yzx"), term(-1, LEFT, "yxz"), term(1, RIGHT, "yxz"),
    ],
    "two-step-jordan-nilpotent": [
        term(1, LEFT, "xyz"), term(1, LEFT, "yxz"), term(1, RIGHT, "zxy"), term(1, RIGHT, "zyx"),
    ],
    "almost-anticommutative": [term(1, LEFT, "xyz"), term(1, LEFT, "yxz")],
    "linearized-left-cube": [term(1, LEFT, "".join(p)) for p in permutations("xyz")],
    "linearized-right-cube": [term(1, RIGHT, "".join(p)) for p in permutations("xyz")],
}

REMARK_IDENTITIES = (
    "leibniz", "reverse-leibniz", "weakly-associative",
    "two-step-jordan-nilpotent", "almost-anticommutative",
)


def satisfied_identities(A: Algebra) -> dict:
    return {name: check_trilinear_identity(A, terms).holds
            for name, terms in NAMED_IDENTITIES.items()}


def check_partial_linearizations(A: Algebra) -> bool:
    """(xy + yx)x = -x^2 y and x(xy + yx) = -y x^2 for generic x and every basis y."""
    x = generic_element(A)
    xx = multiply(A, x, x)
    for j in range(A.dim):
        y = basis_vector(A.dim, j)
        sym = [p + q for p, q in zip(multiply(A, x, y), multiply(A, y, x))]
        left = [p + q for p, q in zip(multiply(A, sym, x), multiply(A, xx, y))]
        right = [p + q for p, q in zip(multiply(A, x, sym), multiply(A, y, xx))]
        if any(left) or any(right):
            return False
    return True
