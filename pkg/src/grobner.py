import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from src import config
from src.errors import BudgetExceeded
from src.scalar import Scalar
from src.symbolic import INDEX, VARIABLES, Polynomial, grevlex_key

logger = logging.getLogger(__name__)


class Ideal:
    """Polynomial generators over Q with a fixed variable order (grevlex).

    Args:
        generators: Polynomials with rational coefficients; zeros are dropped.
        variables: variable order, first is largest. Defaults to the variables
            that occur, in universe order.
    """

    def __init__(self, generators, variables=None):
        self.generators = [g for g in generators if not g.is_zero()]
        if variables is None:
            used = set()
            for g in self.generators:
                used |= g.variables()
            variables = [v for v in VARIABLES if v in used]
        self.variables = tuple(variables)
        for g in self.generators:
            extra = g.variables() - set(self.variables)
            if extra:
                raise ValueError(f"generator {g} uses undeclared variables {sorted(extra)}")
            for c in g.terms.values():
                if not c.is_rational():
                    raise ValueError(f"generator {g} has non-rational coefficient {c}")

    def local(self):
        return [_to_local(g, self.variables) for g in self.generators]


def _to_local(p: Polynomial, variables) -> dict:
    positions = [INDEX[v] for v in variables]
    return {tuple(exp[pos] for pos in positions): c.real for exp, c in p.terms.items()}


def _to_global(p: dict, variables) -> Polynomial:
    positions = [INDEX[v] for v in variables]
    terms = {}
    for exp, c in p.items():
        full = [0] * len(VARIABLES)
        for pos, e in zip(positions, exp):
            full[pos] = e
        terms[tuple(full)] = Scalar(c)
    return Polynomial(terms)


def split_gaussian(polys):
    """Rewrite Gaussian-rational polynomials over Q using ``w`` for i.

    Each p = p_re + i p_im becomes p_re + w p_im and the relation w^2 + 1 is
    appended, so the ideal over Q meets Q(i)[vars] exactly in the original one.
    """
    out, needed = [], False
    w = Polynomial.var("w")
    for p in polys:
        re_terms, im_terms = {}, {}
        for exp, c in p.terms.items():
            if not c.is_gaussian():
                raise ValueError(f"coefficient {c} is outside Q(i)")
            if c.real:
                re_terms[exp] = Scalar(c.real)
            if c.imag:
                im_terms[exp] = Scalar(c.imag)
                needed = True
        out.append(Polynomial(re_terms) + w * Polynomial(im_terms))
    if needed:
        out.append(w * w + 1)
    return out


# kernel over dict polynomials {exponent tuple: Fraction}


def _lead(p: dict):
    exp = max(p, key=grevlex_key)
    return exp, p[exp]


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _monic(p: dict) -> dict:
    _, lc = _lead(p)
    return {e: c / lc for e, c in p.items()}


def _sub_scaled(p: dict, q: dict, coef: Fraction, shift) -> dict:
    out = dict(p)
    for e, c in q.items():
        key = tuple(a + b for a, b in zip(e, shift))
        v = out.get(key, 0) - coef * c
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out


def _reduce(p: dict, basis) -> dict:
    """Full reduction of p modulo the monic polynomials in ``basis``."""
    remainder = {}
    p = dict(p)
    while p:
        exp, c = _lead(p)
        for g_lm, g in basis:
            if _divides(g_lm, exp):
                shift = tuple(a - b for a, b in zip(exp, g_lm))
                p = _sub_scaled(p, g, c, shift)
                break
        else:
            remainder[exp] = c
            del p[exp]
    return remainder


def _s_poly(f, g) -> dict:
    (f_lm, f_p), (g_lm, g_p) = f, g
    lcm = _lcm(f_lm, g_lm)
    s = _sub_scaled({}, f_p, Fraction(-1), tuple(a - b for a, b in zip(lcm, f_lm)))
    return _sub_scaled(s, g_p, Fraction(1), tuple(a - b for a, b in zip(lcm, g_lm)))


@dataclass
class Basis:
    polynomials: list
    variables: tuple
    steps: int = 0

    def contains_one(self) -> bool:
        return any(p.is_constant() and not p.is_zero() for p in self.polynomials)


def _buchberger(polys, budget: int, variables):
    basis = []
    for p in polys:
        if p:
            p = _monic(p)
            basis.append((_lead(p)[0], p))
    pairs = {(i, j) for j in range(len(basis)) for i in range(j)}
    steps = 0
    while pairs:
        if any(not any(lm) for lm, _ in basis):
            break
        # normal strategy: smallest lcm first
        i, j = min(pairs, key=lambda ij: (grevlex_key(_lcm(basis[ij[0]][0], basis[ij[1]][0])), ij))
        pairs.discard((i, j))
        lm_i, lm_j = basis[i][0], basis[j][0]
        lcm = _lcm(lm_i, lm_j)
        if all(a + b == c for a, b, c in zip(lm_i, lm_j, lcm)):
            continue
        if any(
            k not in (i, j)
            and _divides(basis[k][0], lcm)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(basis))
        ):
            continue
        steps += 1
        if steps > budget:
            partial = [_to_global(p, variables) for _, p in basis]
            raise BudgetExceeded(steps - 1, partial)
        h = _reduce(_s_poly(basis[i], basis[j]), basis)
        if h:
            h = _monic(h)
            basis.append((_lead(h)[0], h))
            n = len(basis) - 1
            pairs |= {(k, n) for k in range(n)}
            logger.debug(f"Groebner step {steps}: basis size {len(basis)}")
    return basis, steps


def _reduced(basis):
    # a divisor of a monomial never sorts above it
    minimal = []
    for lm, p in sorted(basis, key=lambda b: grevlex_key(b[0])):
        if any(_divides(kept, lm) for kept, _ in minimal):
            continue
        minimal.append((lm, p))
    out = []
    for k, (lm, p) in enumerate(minimal):
        rest = minimal[:k] + minimal[k + 1:]
        tail = {e: c for e, c in p.items() if e != lm}
        reduced = _reduce(tail, rest)
        reduced[lm] = Fraction(1)
        out.append((lm, reduced))
    return sorted(out, key=lambda b: grevlex_key(b[0]), reverse=True)


def groebner_basis(ideal: Ideal, budget: int = None) -> Basis:
    """Reduced Groebner basis of ``ideal`` in grevlex order.

    Raises:
        BudgetExceeded: more than ``budget`` S-polynomial reductions were needed.
    """
    budget = config.GROEBNER_BUDGET if budget is None else budget
    raw, steps = _buchberger(ideal.local(), budget, ideal.variables)
    if any(not any(lm) for lm, _ in raw):
        polys = [Polynomial.constant(1)]
    else:
        polys = [_to_global(p, ideal.variables) for _, p in _reduced(raw)]
    logger.info(f"Groebner basis with {len(polys)} elements after {steps} steps.")
    return Basis(polys, ideal.variables, steps)


class UnitVerdict(str, Enum):
    YES = "yes"
    NO = "no"
    BUDGET_EXCEEDED = "budget-exceeded"


@dataclass
class UnitIdealResult:
    verdict: UnitVerdict
    basis: list = field(default_factory=list)
    steps: int = 0


def is_unit_ideal(ideal: Ideal, budget: int = None) -> UnitIdealResult:
    if any(g.is_constant() for g in ideal.generators):
        return UnitIdealResult(UnitVerdict.YES, [Polynomial.constant(1)], 0)
    try:
        basis = groebner_basis(ideal, budget)
    except BudgetExceeded as exc:
        logger.warning(f"Unit ideal test inconclusive: {exc}")
        return UnitIdealResult(UnitVerdict.BUDGET_EXCEEDED, exc.partial, exc.steps)
    if basis.contains_one():
        return UnitIdealResult(UnitVerdict.YES, basis.polynomials, basis.steps)
    return UnitIdealResult(UnitVerdict.NO, basis.polynomials, basis.steps)


def reduce_polynomial(p: Polynomial, basis: list, variables) -> Polynomial:
    """Normal form of ``p`` modulo a Groebner basis."""
    local = []
    for g in basis:
        g = _monic(_to_local(g, variables))
        local.append((_lead(g)[0], g))
    return _to_global(_reduce(_to_local(p, variables), local), variables)


def s_polynomial(f: Polynomial, g: Polynomial, variables) -> Polynomial:
    lf, lg = _monic(_to_local(f, variables)), _monic(_to_local(g, variables))
    return _to_global(_s_poly((_lead(lf)[0], lf), (_lead(lg)[0], lg)), variables)
