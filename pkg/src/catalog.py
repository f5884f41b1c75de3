import logging
import re
from dataclasses import dataclass

from src.algebra import Algebra, basis_change_from_rows
from src.errors import ParameterError, UnknownFamily
from src.scalar import Scalar, as_scalar
from src.symbolic import Polynomial, RationalFunction
from src.utils.literals import parse_scalar

logger = logging.getLogger(__name__)

ALPHA = Polynomial.var("alpha")


@dataclass(frozen=True)
class Family:
    """One row of the classification list.

    Attributes:
        id: short identifier used on the command line and in data files.
        display: the conventional name.
        products: ``{(i, j): {k: c}}`` with one-based indices; ``c`` may
            involve ``alpha``.
        identification: ``"inverse"`` (alpha ~ 1/alpha), ``"negate"``
            (alpha ~ -alpha) or None.
        nil_index: nil index of every member.
    """

    id: str
    display: str
    products: dict
    nil_index: int
    parametric: bool = False
    identification: str = None

    @property
    def anticommutative(self) -> bool:
        return self.nil_index == 2

    def algebra(self) -> Algebra:
        params = ("alpha",) if self.parametric else ()
        return Algebra.from_products(3, self.products, params)


def _anti(table: dict) -> dict:
    """Complete e_i e_j entries with e_j e_i = -e_i e_j."""
    out = dict(table)
    for (i, j), image in table.items():
        out[(j, i)] = {k: -c for k, c in image.items()}
    return out


_FAMILIES = [
    Family("g1", "𝔤₁", _anti({(2, 3): {1: 1}}), 2),
    Family("g2", "𝔤₂", _anti({(1, 3): {1: 1}, (2, 3): {2: 1}}), 2),
    Family("g3", "𝔤₃^α", _anti({(1, 3): {1: 1, 2: 1}, (2, 3): {2: ALPHA}}), 2,
           parametric=True, identification="inverse"),
    Family("g4", "𝔤₄", _anti({(1, 2): {3: 1}, (1, 3): {2: -1}, (2, 3): {1: 1}}), 2),
    Family("A1", "𝒜₁^α", _anti({(1, 2): {3: 1}, (1, 3): {1: 1, 3: 1}, (2, 3): {2: ALPHA}}), 2,
           parametric=True, identification="inverse"),
    Family("A2", "𝒜₂", _anti({(1, 2): {1: 1}, (2, 3): {2: 1}}), 2),
    Family("A3", "𝒜₃", _anti({(1, 2): {3: 1}, (1, 3): {1: 1}, (2, 3): {2: 1}}), 2),
    Family("N1", "𝒩₁", {(1, 1): {2: 1}}, 3),
    Family("N2", "𝒩₂", {(1, 1): {2: 1}, (1, 3): {1: 1}, (3, 1): {1: -1}}, 3),
    Family("N3", "𝒩₃", {(1, 1): {2: 1}, (1, 3): {3: 1}, (3, 1): {3: -1}}, 3),
    Family("N4", "𝒩₄", {(1, 1): {2: 1}, (1, 3): {2: 1}, (3, 1): {2: -1}}, 3),
    Family("N5", "𝒩₅", {(1, 1): {2: 1}, (1, 3): {3: 1}, (3, 1): {3: -1}, (3, 3): {2: 1}}, 3),
    Family("N6", "𝒩₆^α",
           {(1, 1): {2: 1}, (1, 3): {2: ALPHA}, (3, 1): {2: -ALPHA}, (3, 3): {2: 1}}, 3,
           parametric=True, identification="negate"),
    Family("rN1", "N₁", {(1, 1): {2: 1}, (2, 1): {3: 1}}, 4),
    Family("rN2", "N₂^α", {(1, 1): {2: 1}, (1, 2): {3: 1}, (2, 1): {3: ALPHA}}, 4,
           parametric=True),
    Family("bN1", "𝐍₁", {(1, 1): {2: 1}, (2, 2): {3: 1}}, 5),
    Family("bN2", "𝐍₂", {(1, 1): {2: 1}, (2, 1): {3: 1}, (2, 2): {3: 1}}, 5),
    Family("C3-zero", "ℂ³", {}, 2),
]

FAMILIES = {f.id: f for f in _FAMILIES}


def family(family_id: str) -> Family:
    try:
        return FAMILIES[family_id]
    except KeyError:
        raise UnknownFamily(f"unknown catalog family '{family_id}'") from None


def families() -> list:
    """Metadata rows for every family, in catalog order."""
    return [
        {"id": f.id, "display": f.display, "parametric": f.parametric,
         "identification": f.identification, "nil_index": f.nil_index}
        for f in _FAMILIES
    ]


def families_by_nil_index() -> dict:
    groups = {}
    for f in _FAMILIES:
        groups.setdefault(f.nil_index, []).append(f.id)
    return groups


def canonical_parameter(family_id: str, alpha) -> Scalar:
    """Deterministic representative of alpha's identification class.

    The smaller of the class members under ``Scalar.sort_key`` wins; 0 has no
    inverse and stays as it is.
    """
    fam = family(family_id)
    if not fam.parametric:
        raise ParameterError(f"{family_id} takes no parameter")
    alpha = as_scalar(alpha)
    if fam.identification == "inverse" and alpha:
        return min(alpha, 1 / alpha, key=Scalar.sort_key)
    if fam.identification == "negate":
        return min(alpha, -alpha, key=Scalar.sort_key)
    return alpha


@dataclass(frozen=True)
class CatalogLabel:
    family: str
    param: Scalar = None

    def __post_init__(self):
        fam = family(self.family)
        if fam.parametric and self.param is None:
            raise ParameterError(f"{self.family} needs a parameter value")
        if not fam.parametric and self.param is not None:
            raise ParameterError(f"{self.family} takes no parameter")
        if self.param is not None:
            object.__setattr__(self, "param", canonical_parameter(self.family, self.param))

    def __str__(self):
        return self.family if self.param is None else f"{self.family}({self.param})"


_LABEL = re.compile(r"^\s*([A-Za-z0-9-]+)\s*(?:\((.*)\))?\s*$")


def parse_label(text: str, param: str = None) -> CatalogLabel:
    """Read ``N6(5)`` or ``N6`` plus a separate ``param`` string."""
    match = _LABEL.match(text)
    if not match:
        raise UnknownFamily(f"cannot read catalog label '{text}'")
    family_id, inner = match.groups()
    value = inner if inner is not None else param
    return CatalogLabel(family_id, parse_scalar(value) if value is not None else None)


def all_labels(samples=()) -> list:
    """Every non-parametric label plus each parametric family at ``samples``."""
    labels = []
    for f in _FAMILIES:
        if f.parametric:
            seen = set()
            for s in samples:
                label = CatalogLabel(f.id, as_scalar(s))
                if label not in seen:
                    seen.add(label)
                    labels.append(label)
        else:
            labels.append(CatalogLabel(f.id))
    return labels


def instantiate(label) -> Algebra:
    if isinstance(label, str):
        label = parse_label(label)
    A = family(label.family).algebra()
    if label.param is not None:
        A = A.instantiate({"alpha": label.param})
    return A


def symbolic(family_id: str) -> Algebra:
    """The family table with alpha left free."""
    return family(family_id).algebra()


# isomorphism certificates for the identified parameter pairs


def _a1_inverse_rows():
    a = RationalFunction.lift(ALPHA)
    one = RationalFunction.lift(1)
    zero = RationalFunction.lift(0)
    e1, e2, e3 = [one, zero, zero], [zero, one, zero], [zero, zero, one]

    def comb(*pairs):
        return [sum((c * v[k] for c, v in pairs), zero) for k in range(3)]

    c = a * a / ((1 + a) * (1 - a))
    p = e2
    w = comb((one, e3), (-a / (1 + a), e2))
    v = comb((-one, e1), (-1 / (1 + a), e3), (-c / (1 + a), e2))
    # frame of A1^(1/alpha) inside A1^alpha
    p2, v2, w2 = v, comb((-1 / a, p)), comb((1 / a, w))
    c_inv = 1 / ((a + 1) * (a - 1))
    f2 = p2
    f3 = comb((one, w2), (1 / (a + 1), p2))
    f1 = comb((-one, v2), (-a / (a + 1), f3), (-a * c_inv / (a + 1), p2))
    return [f1, f2, f3]


def isomorphism_certificates() -> dict:
    """Basis changes g with transform(symbolic(F), g) equal to the identified member.

    Returns ``{family: (g, image parameter, excluded alpha values)}``.
    """
    a = RationalFunction.lift(ALPHA)
    one, zero = RationalFunction.lift(1), RationalFunction.lift(0)
    n6 = [[one, zero, zero], [zero, one, zero], [zero, zero, -one]]
    g3 = [[a, zero, zero], [1 - a, one, zero], [zero, zero, 1 / a]]
    return {
        "N6": (basis_change_from_rows(n6), -a, ()),
        "g3": (basis_change_from_rows(g3), 1 / a, (Scalar(0),)),
        "A1": (basis_change_from_rows(_a1_inverse_rows()), 1 / a,
               (Scalar(0), Scalar(1), Scalar(-1))),
    }
