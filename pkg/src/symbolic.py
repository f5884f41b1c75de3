import logging
from fractions import Fraction

from src.errors import DivisionByZero, PoleAtZero
from src.scalar import Scalar, as_scalar

logger = logging.getLogger(__name__)

VARIABLES = (
    "x1", "x2", "x3", "t", "alpha", "y", "z", "w",
    "g11", "g12", "g13", "g21", "g22", "g23", "g31", "g32", "g33",
) + tuple(f"s{n}" for n in range(1, 28))  # coordinates on a closed set of tables
INDEX = {name: pos for pos, name in enumerate(VARIABLES)}
NVARS = len(VARIABLES)
_ONE_EXP = (0,) * NVARS


def grevlex_key(exp: tuple):
    """Sort key: larger key means larger monomial in graded reverse lex order."""
    return (sum(exp), tuple(-e for e in reversed(exp)))


def _var_exp(name: str, power: int = 1) -> tuple:
    exp = [0] * NVARS
    exp[INDEX[name]] = power
    return tuple(exp)


class Polynomial:
    """Sparse polynomial over Scalar in the fixed indeterminate universe."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for exp, c in terms.items():
                c = as_scalar(c)
                if c:
                    self.terms[exp] = c

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def constant(cls, c) -> "Polynomial":
        c = as_scalar(c)
        return cls._raw({_ONE_EXP: c} if c else {})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "Polynomial":
        if name not in INDEX:
            raise KeyError(f"unknown indeterminate '{name}'")
        return cls._raw({_var_exp(name, power): Scalar(1)})

    # inspection

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _ONE_EXP in self.terms)

    def constant_value(self) -> Scalar:
        return self.terms.get(_ONE_EXP, Scalar(0))

    def variables(self) -> set:
        used = set()
        for exp in self.terms:
            used.update(VARIABLES[pos] for pos, e in enumerate(exp) if e)
        return used

    def degree(self, name: str = None) -> int:
        if not self.terms:
            return -1
        if name is None:
            return max(sum(exp) for exp in self.terms)
        pos = INDEX[name]
        return max(exp[pos] for exp in self.terms)

    def leading_exponent(self) -> tuple:
        return max(self.terms, key=grevlex_key)

    def leading_coefficient(self) -> Scalar:
        return self.terms[self.leading_exponent()]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True)

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return Polynomial.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp)
            s = c if s is None else s + c
            if s:
                terms[exp] = s
            else:
                terms.pop(exp, None)
        return Polynomial._raw(terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({exp: -c for exp, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            if not other:
                return Polynomial()
            return Polynomial._raw({exp: c * other for exp, c in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(exp)
                terms[exp] = c1 * c2 if s is None else s + c1 * c2
        return Polynomial._raw({exp: c for exp, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result, base = Polynomial.constant(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            inv = 1 / as_scalar(other)
            return self * inv
        return RationalFunction(self, other)

    def __rtruediv__(self, other):
        return RationalFunction(Polynomial.constant(other), self)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # substitution and evaluation

    def substitute(self, assignments: dict):
        """Replace indeterminates by Polynomials, RationalFunctions or scalars."""
        result = Polynomial()
        cache = {}
        for exp, c in self.terms.items():
            term = Polynomial.constant(c)
            rest = list(exp)
            for name, value in assignments.items():
                pos = INDEX[name]
                power = rest[pos]
                if not power:
                    continue
                rest[pos] = 0
                key = (name, power)
                if key not in cache:
                    base = value if isinstance(value, (Polynomial, RationalFunction)) \
                        else Polynomial.constant(value)
                    cache[key] = base ** power
                term = term * cache[key]
            term = term * Polynomial._raw({tuple(rest): Scalar(1)})
            result = result + term
        return result

    def evaluate(self, point: dict) -> "Polynomial":
        return self.substitute(point)

    def coefficients_in(self, name: str) -> dict:
        """Split into ``{power: coefficient polynomial}`` with respect to ``name``."""
        pos = INDEX[name]
        parts = {}
        for exp, c in self.terms.items():
            power = exp[pos]
            rest = exp[:pos] + (0,) + exp[pos + 1:]
            parts.setdefault(power, {})[rest] = c
        return {p: Polynomial._raw(t) for p, t in parts.items()}

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self * self.leading_coefficient().inverse()

    def __repr__(self):
        return f"Polynomial({str(self)!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                VARIABLES[pos] if e == 1 else f"{VARIABLES[pos]}^{e}"
                for pos, e in enumerate(exp) if e
            )
            negative = c.is_rational() and c.real < 0
            mag = -c if negative else c
            coef = str(mag)
            if not mag.is_rational():
                coef = f"({coef})"
            if mono:
                body = mono if mag == 1 else f"{coef}*{mono}"
            else:
                body = coef
            if not out:
                out.append(f"-{body}" if negative else body)
            else:
                out.append(f" - {body}" if negative else f" + {body}")
        return "".join(out)


def as_polynomial(value) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return Polynomial.constant(value)


def poly_arith(p, q, op: str, var: str = None):
    """Exact ``add``, ``sub``, ``mul`` or ``substitute`` (q replaces ``var`` in p)."""
    p = as_polynomial(p)
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op in ("substitute", "compose"):
        return p.substitute({var: q})
    raise ValueError(f"unknown polynomial operation '{op}'")


def exact_quotient(p: Polynomial, q: Polynomial) -> Polynomial:
    """p / q when q divides p; raises ValueError otherwise."""
    if q.is_zero():
        raise DivisionByZero("polynomial division by zero")
    if q.is_constant():
        return p * q.constant_value().inverse()
    lq_exp = q.leading_exponent()
    lq = q.terms[lq_exp]
    quotient = {}
    rest = p
    while rest.terms:
        exp = rest.leading_exponent()
        shift = tuple(a - b for a, b in zip(exp, lq_exp))
        if min(shift) < 0:
            raise ValueError(f"{q} does not divide {p}")
        coef = rest.terms[exp] / lq
        quotient[shift] = coef
        rest = rest - Polynomial._raw({shift: coef}) * q
    return Polynomial._raw(quotient)


def _pseudo_remainder(a: Polynomial, b: Polynomial, name: str) -> Polynomial:
    db = b.degree(name)
    lc_b = b.coefficients_in(name)[db]
    r = a
    while not r.is_zero() and r.degree(name) >= db:
        dr = r.degree(name)
        lc_r = r.coefficients_in(name)[dr]
        r = lc_b * r - lc_r * Polynomial.var(name, dr - db) * b if dr > db \
            else lc_b * r - lc_r * b
    return r


def _content(p: Polynomial, name: str) -> Polynomial:
    g = Polynomial()
    for coef in p.coefficients_in(name).values():
        g = poly_gcd(g, coef)
        if g.is_constant():
            return Polynomial.constant(1)
    return g


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic gcd by recursive content and primitive pseudo-remainder sequences."""
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    if p.is_constant() or q.is_constant():
        return Polynomial.constant(1)
    names = p.variables() | q.variables()
    name = min(names, key=INDEX.get)
    if name not in q.variables():
        return poly_gcd(_content(p, name), q)
    if name not in p.variables():
        return poly_gcd(p, _content(q, name))
    cp, cq = _content(p, name), _content(q, name)
    a, b = exact_quotient(p, cp), exact_quotient(q, cq)
    if a.degree(name) < b.degree(name):
        a, b = b, a
    while not b.is_zero():
        r = _pseudo_remainder(a, b, name)
        if r.is_zero():
            a, b = b, r
            break
        if r.degree(name) == 0:
            a = Polynomial.constant(1)
            break
        a, b = b, exact_quotient(r, _content(r, name))
    primitive = exact_quotient(a, _content(a, name)) if not a.is_constant() else a
    return (poly_gcd(cp, cq) * primitive).monic()


class RationalFunction:
    """A quotient of polynomials kept in lowest terms with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce: bool = True):
        num = as_polynomial(num)
        den = Polynomial.constant(1) if den is None else as_polynomial(den)
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if reduce:
            if num.is_zero():
                den = Polynomial.constant(1)
            elif not den.is_constant():
                g = poly_gcd(num, den)
                if not g.is_constant():
                    num, den = exact_quotient(num, g), exact_quotient(den, g)
            lc = den.leading_coefficient()
            if lc != 1:
                inv = lc.inverse()
                num, den = num * inv, den * inv
        self.num = num
        self.den = den

    @classmethod
    def lift(cls, value) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        return cls(as_polynomial(value), None, reduce=False)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Scalar:
        return self.num.constant_value() / self.den.constant_value()

    def to_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num * self.den.constant_value().inverse()

    def variables(self) -> set:
        return self.num.variables() | self.den.variables()

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction, Scalar, Polynomial)):
            return RationalFunction.lift(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            if not other:
                return RationalFunction(Polynomial())
            return RationalFunction(self.num * other, self.den, reduce=False)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RationalFunction(Polynomial())
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise DivisionByZero("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RationalFunction.lift(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n, reduce=False)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    def substitute(self, assignments: dict) -> "RationalFunction":
        num = RationalFunction.lift(self.num.substitute(assignments))
        den = RationalFunction.lift(self.den.substitute(assignments))
        return num / den

    def __repr__(self):
        return f"RationalFunction({str(self)!r})"

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        num = str(self.num)
        if len(self.num.terms) > 1:
            num = f"({num})"
        return f"{num}/({self.den})"


def rf_eval_at_zero(f, var: str = "t") -> RationalFunction:
    """The value of ``f`` at ``var = 0``.

    Raises:
        PoleAtZero: if the reduced denominator vanishes identically at 0.
    """
    f = RationalFunction.lift(f)
    den = f.den.substitute({var: 0})
    if den.is_zero():
        raise PoleAtZero(f"{f} has a pole at {var}=0", var=var)
    return RationalFunction(f.num.substitute({var: 0}), den)


def t_valuation(p: Polynomial, var: str = "t") -> int:
    """Largest k with var^k dividing p."""
    if p.is_zero():
        raise ValueError("valuation of zero")
    pos = INDEX[var]
    return min(exp[pos] for exp in p.terms)
