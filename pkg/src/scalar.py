import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from src import config
from src.errors import DivisionByZero, TowerDepthExceeded, TowerMismatch

logger = logging.getLogger(__name__)


def _basis_name(idx: int) -> str:
    """Name of the flat basis element ``idx``: bit 0 is i, bit k is r_k."""
    names = ["i"] if idx & 1 else []
    names += [f"r{k}" for k in range(1, idx.bit_length()) if idx >> k & 1]
    return "*".join(names)


@dataclass(frozen=True)
class FieldTower:
    """Q(i) extended by a chain of square roots.

    Each radicand is stored as the flat coordinate tuple of an element of the
    level below it, so ``radicands[0]`` lives in Q(i) and ``radicands[1]`` in
    Q(i)(r1).
    """

    radicands: tuple = ()
    cap: int = field(default=config.TOWER_DEPTH, compare=False)

    @property
    def depth(self) -> int:
        return len(self.radicands)

    @property
    def size(self) -> int:
        return 2 ** (self.depth + 1)

    def prefix(self, depth: int) -> "FieldTower":
        return FieldTower(self.radicands[:depth], self.cap)

    def extends(self, other: "FieldTower") -> bool:
        return self.radicands[: other.depth] == other.radicands

    def root(self, level: int) -> "Scalar":
        """The adjoined root r_level (1-based) as a scalar of this tower."""
        coords = [Fraction(0)] * self.size
        coords[2 ** level] = Fraction(1)
        return Scalar._raw(tuple(coords), self)


BASE = FieldTower()


def common_tower(a: FieldTower, b: FieldTower) -> FieldTower:
    if a.radicands == b.radicands:
        return a
    if b.extends(a):
        return b
    if a.extends(b):
        return a
    raise TowerMismatch(f"incompatible towers {a.radicands} and {b.radicands}")


# flat-tuple kernels; ``rads`` is the radicand list of the level being handled


def _add(x, y):
    return tuple(p + q for p, q in zip(x, y))


def _sub(x, y):
    return tuple(p - q for p, q in zip(x, y))


def _scale(x, c):
    return tuple(p * c for p in x)


def _mul(x, y, rads):
    if len(x) == 2:
        a, b = x
        c, d = y
        return (a * c - b * d, a * d + b * c)
    h = len(x) // 2
    lower = rads[:-1]
    a, b, c, d = x[:h], x[h:], y[:h], y[h:]
    ac = _mul(a, c, lower)
    bd = _mul(_mul(b, d, lower), rads[-1], lower)
    ad_bc = _add(_mul(a, d, lower), _mul(b, c, lower))
    return _add(ac, bd) + ad_bc


def _is_zero(x) -> bool:
    return not any(x)


def _inv(x, rads):
    if len(x) == 2:
        a, b = x
        n = a * a + b * b
        if n == 0:
            raise DivisionByZero("division by zero scalar")
        return (a / n, -b / n)
    h = len(x) // 2
    lower = rads[:-1]
    a, b = x[:h], x[h:]
    norm = _sub(_mul(a, a, lower), _mul(_mul(b, b, lower), rads[-1], lower))
    inv_norm = _inv(norm, lower)
    return _mul(a, inv_norm, lower) + _scale(_mul(b, inv_norm, lower), -1)


def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def _sqrt(x, rads):
    """Square root of a flat element inside its own level, or None."""
    if len(x) == 2:
        a, b = x
        n = _rational_sqrt(a * a + b * b)
        if n is None:
            return None
        re = _rational_sqrt((a + n) / 2)
        im = _rational_sqrt((n - a) / 2)
        if re is None or im is None:
            return None
        if re != 0:
            im = b / (2 * re)
        return (re, im)
    h = len(x) // 2
    lower = rads[:-1]
    zero = (Fraction(0),) * h
    u, v = x[:h], x[h:]
    if _is_zero(v):
        s = _sqrt(u, lower)
        if s is not None:
            return s + zero
        s = _sqrt(_mul(u, _inv(rads[-1], lower), lower), lower)
        return None if s is None else zero + s
    norm = _sub(_mul(u, u, lower), _mul(_mul(v, v, lower), rads[-1], lower))
    n = _sqrt(norm, lower)
    if n is None:
        return None
    half = Fraction(1, 2)
    for candidate in (n, _scale(n, -1)):
        re = _sqrt(_scale(_add(u, candidate), half), lower)
        if re is None or _is_zero(re):
            continue
        im = _mul(v, _inv(_scale(re, 2), lower), lower)
        root = re + im
        if _mul(root, root, rads) == tuple(x):
            return root
    return None


class Scalar:
    """An exact element of a FieldTower, stored as canonical rational coordinates."""

    __slots__ = ("coords", "tower")

    def __init__(self, value=0, tower: FieldTower = BASE):
        if isinstance(value, Scalar):
            other = value.promote(common_tower(value.tower, tower))
            self.coords, self.tower = other.coords, other.tower
            return
        coords = [Fraction(0)] * tower.size
        coords[0] = Fraction(value)
        self.coords = tuple(coords)
        self.tower = tower

    @classmethod
    def _raw(cls, coords, tower):
        obj = cls.__new__(cls)
        obj.coords = coords
        obj.tower = tower
        return obj

    @classmethod
    def gaussian(cls, re, im=0) -> "Scalar":
        return cls._raw((Fraction(re), Fraction(im)), BASE)

    @classmethod
    def from_coords(cls, coords, tower: FieldTower = BASE) -> "Scalar":
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != tower.size:
            raise ValueError(f"expected {tower.size} coordinates, got {len(coords)}")
        return cls._raw(coords, tower)

    def promote(self, tower: FieldTower) -> "Scalar":
        if tower.radicands == self.tower.radicands:
            return self
        if not tower.extends(self.tower):
            raise TowerMismatch(f"cannot promote into {tower.radicands}")
        pad = (Fraction(0),) * (tower.size - len(self.coords))
        return Scalar._raw(self.coords + pad, tower)

    def _lowest(self):
        coords, depth = self.coords, self.tower.depth
        while depth > 0 and _is_zero(coords[len(coords) // 2:]):
            coords = coords[: len(coords) // 2]
            depth -= 1
        return coords, self.tower.radicands[:depth]

    def demote(self) -> "Scalar":
        """The same element in the smallest prefix tower holding it."""
        coords, rads = self._lowest()
        return Scalar._raw(coords, FieldTower(rads, self.tower.cap))

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.tower.radicands == self.tower.radicands:
                return self, other
            tower = common_tower(self.tower, other.tower)
            return self.promote(tower), other.promote(tower)
        if isinstance(other, (int, Fraction)):
            return self, Scalar(other, self.tower)
        return None, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Scalar._raw(_add(a.coords, b.coords), a.tower)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Scalar._raw(_sub(a.coords, b.coords), a.tower)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Scalar._raw(tuple(-c for c in self.coords), self.tower)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scalar._raw(_scale(self.coords, other), self.tower)
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Scalar._raw(_mul(a.coords, b.coords, a.tower.radicands), a.tower)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        return Scalar._raw(_inv(self.coords, self.tower.radicands), self.tower)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return Scalar._raw(_scale(self.coords, 1 / Fraction(other)), self.tower)
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return Scalar(other, self.tower) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = Scalar(1, self.tower), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.coords[0] == other and not any(self.coords[1:])
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._lowest() == other._lowest()

    def __hash__(self):
        coords, rads = self._lowest()
        if len(coords) == 2 and coords[1] == 0:
            return hash(coords[0])
        return hash((coords, rads))

    def __bool__(self):
        return any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def is_gaussian(self) -> bool:
        return not any(self.coords[2:])

    @property
    def real(self) -> Fraction:
        return self.coords[0]

    @property
    def imag(self) -> Fraction:
        return self.coords[1]

    def sort_key(self):
        """Total order: lexicographic on the canonical coordinates."""
        return self._lowest()[0]

    def __repr__(self):
        return f"Scalar({str(self)!r})"

    def __str__(self):
        parts = []
        for idx, c in enumerate(self.coords):
            if c == 0:
                continue
            name = _basis_name(idx)
            mag = abs(c)
            if not name:
                body = str(mag)
            elif mag == 1:
                body = name
            else:
                body = f"{mag}*{name}"
            sign = "-" if c < 0 else "+"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts) or "0"


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar.gaussian(0, 1)


def as_scalar(value) -> Scalar:
    return value if isinstance(value, Scalar) else Scalar(value)


def scalar_arith(a, b, op: str) -> Scalar:
    """Apply ``op`` in {add, sub, mul, div} exactly."""
    a, b = as_scalar(a), as_scalar(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown scalar operation '{op}'")


def adjoin_sqrt(tower: FieldTower, d) -> tuple:
    """Return ``(tower', r)`` with ``r * r == d``.

    The tower grows only when ``d`` has no square root at the current level.

    Raises:
        DivisionByZero: if ``d`` is zero.
        TowerDepthExceeded: if a new root would exceed the depth cap.
    """
    d = as_scalar(d).promote(common_tower(tower, as_scalar(d).tower))
    tower = d.tower if d.tower.extends(tower) else tower
    if not d:
        raise DivisionByZero("cannot adjoin the square root of zero")
    root = _sqrt(d.coords, tower.radicands)
    if root is not None:
        return tower, Scalar._raw(root, tower)
    if tower.depth >= tower.cap:
        raise TowerDepthExceeded(
            f"adjoining sqrt({d}) needs depth {tower.depth + 1}, cap is {tower.cap}"
        )
    extended = FieldTower(tower.radicands + (d.coords,), tower.cap)
    logger.info(f"Extended scalar tower to depth {extended.depth} with sqrt({d}).")
    return extended, extended.root(extended.depth)


def sqrt(d) -> Scalar:
    """Square root of ``d``, adjoining a new root when needed."""
    d = as_scalar(d)
    if not d:
        return d
    return adjoin_sqrt(d.tower, d)[1]
