from typing import Annotated, Literal, Optional

from pydantic import AfterValidator, BaseModel, ConfigDict, field_validator, model_validator

from src.algebra import Algebra
from src.catalog import FAMILIES
from src.certificates import (
    CertificateKind, ClosedSetSpec, FlagCondition, LinearCondition, NonDegenerationCertificate,
)
from src.degeneration import DegenerationWitness
from src.errors import NilalgError
from src.nil import IdentityTerm, term
from src.utils.literals import format_value, parse_literal, parse_scalar, parse_value

Provenance = Literal["published", "corrected", "derived"]


def _known_family(value: str) -> str:
    if value not in FAMILIES:
        raise ValueError(f"unknown catalog family '{value}'")
    return value


def _literal(value: str) -> str:
    try:
        parse_literal(value)
    except NilalgError as e:
        raise ValueError(str(e)) from e
    return value


def _scalar_literal(value: str) -> str:
    try:
        parse_scalar(value)
    except NilalgError as e:
        raise ValueError(str(e)) from e
    return value


FamilyId = Annotated[str, AfterValidator(_known_family)]
LiteralText = Annotated[str, AfterValidator(_literal)]
ScalarText = Annotated[str, AfterValidator(_scalar_literal)]


def _optional_value(text: Optional[str]):
    return None if text is None else parse_value(text)


def _optional_text(value) -> Optional[str]:
    return None if value is None else format_value(value)


class TableEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    i: int
    j: int
    k: int
    c: LiteralText


class AlgebraFile(BaseModel):
    """``{"dim": 3, "params": ["alpha"], "table": [{"i", "j", "k", "c"}, ...]}``, one-based."""

    model_config = ConfigDict(extra="forbid")

    dim: int = 3
    params: list[str] = []
    table: list[TableEntry] = []

    @model_validator(mode="after")
    def _indices(self):
        seen = set()
        for e in self.table:
            triple = (e.i, e.j, e.k)
            if not all(1 <= x <= self.dim for x in triple):
                raise ValueError(f"entry {triple} has an index outside [1, {self.dim}]")
            if triple in seen:
                raise ValueError(f"entry {triple} appears twice")
            seen.add(triple)
        return self

    def to_algebra(self) -> Algebra:
        table = {(e.i - 1, e.j - 1, e.k - 1): parse_value(e.c) for e in self.table}
        return Algebra(self.dim, table, self.params)

    @classmethod
    def from_algebra(cls, A: Algebra) -> "AlgebraFile":
        entries = [
            TableEntry(i=i + 1, j=j + 1, k=k + 1, c=format_value(c))
            for (i, j, k), c in sorted(A.table.items())
        ]
        return cls(dim=A.dim, params=list(A.params), table=entries)


class WitnessFile(BaseModel):
    """A stored degeneration witness; ``basis`` rows are E_i in source coordinates."""

    model_config = ConfigDict(extra="forbid")

    source: FamilyId
    target: FamilyId
    basis: list[list[LiteralText]]
    index: Optional[LiteralText] = None
    source_param: Optional[LiteralText] = None
    target_param: Optional[LiteralText] = None
    provenance: Provenance = "derived"

    @field_validator("basis")
    @classmethod
    def _square(cls, rows):
        if len(rows) != 3 or any(len(row) != 3 for row in rows):
            raise ValueError("basis must be three rows of three literals")
        return rows

    def to_witness(self) -> DegenerationWitness:
        return DegenerationWitness(
            self.source, self.target,
            [[parse_literal(x) for x in row] for row in self.basis],
            source_param=_optional_value(self.source_param),
            target_param=_optional_value(self.target_param),
            index=_optional_value(self.index),
            provenance=self.provenance,
        )

    @classmethod
    def from_witness(cls, w: DegenerationWitness) -> "WitnessFile":
        return cls(
            source=w.source, target=w.target,
            basis=[[format_value(x) for x in row] for row in w.basis],
            index=_optional_text(w.index),
            source_param=_optional_text(w.source_param),
            target_param=_optional_text(w.target_param),
            provenance=w.provenance,
        )


class FlagEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: int
    q: int
    r: int


class CertificateFile(BaseModel):
    """A stored non-degeneration certificate.

    ``linear`` holds one list per condition of ``[coef, [i, j, k]]`` pairs;
    each condition reads sum coef * c_ij^k = 0.
    """

    model_config = ConfigDict(extra="forbid")

    source: FamilyId
    target: FamilyId
    kind: CertificateKind
    flag: list[FlagEntry] = []
    linear: list[list[tuple[ScalarText, tuple[int, int, int]]]] = []
    invariant: Optional[str] = None
    source_param: Optional[ScalarText] = None
    target_param: Optional[ScalarText] = None
    nonzero_alpha: bool = False
    provenance: Provenance = "published"

    @model_validator(mode="after")
    def _shape(self):
        if self.kind == CertificateKind.CLOSED_SET and not (self.flag or self.linear):
            raise ValueError("a closed-set certificate needs flag or linear conditions")
        if self.kind == CertificateKind.INVARIANT_GAP and not self.invariant:
            raise ValueError("an invariant-gap certificate names its invariant")
        return self

    def closed_set(self) -> Optional[ClosedSetSpec]:
        if self.kind != CertificateKind.CLOSED_SET:
            return None
        flags = [FlagCondition(f.p, f.q, f.r) for f in self.flag]
        linear = [
            LinearCondition(tuple((parse_scalar(c), tuple(ijk)) for c, ijk in cond))
            for cond in self.linear
        ]
        return ClosedSetSpec(flags, linear)

    def to_certificate(self) -> NonDegenerationCertificate:
        return NonDegenerationCertificate(
            self.source, self.target, self.kind,
            closed_set=self.closed_set(),
            invariant=self.invariant,
            source_param=_optional_value(self.source_param),
            target_param=_optional_value(self.target_param),
            nonzero_alpha=self.nonzero_alpha,
            provenance=self.provenance,
        )

    @classmethod
    def from_certificate(cls, cert: NonDegenerationCertificate) -> "CertificateFile":
        flag, linear = [], []
        if cert.closed_set is not None:
            flag = [FlagEntry(p=f.p, q=f.q, r=f.r) for f in cert.closed_set.flag_conditions]
            linear = [[(format_value(c), tuple(ijk)) for c, ijk in cond.terms]
                      for cond in cert.closed_set.linear_conditions]
        return cls(
            source=cert.source, target=cert.target, kind=cert.kind, flag=flag, linear=linear,
            invariant=cert.invariant,
            source_param=_optional_text(cert.source_param),
            target_param=_optional_text(cert.target_param),
            nonzero_alpha=cert.nonzero_alpha, provenance=cert.provenance,
        )


class IdentityTermEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    coef: ScalarText
    perm: str
    tree: str


class IdentityFile(BaseModel):
    """A multilinear degree-3 identity; trees are ``((ab)c)`` or ``(a(bc))``."""

    model_config = ConfigDict(extra="forbid")

    name: str = "identity"
    terms: list[IdentityTermEntry]

    def to_terms(self) -> list[IdentityTerm]:
        return [term(parse_scalar(t.coef), t.tree, t.perm) for t in self.terms]
