"""Numeric invariants of a valuation extension and the statement diagram.

Statements are numbered 1..9:

1. ``O_omega`` is essentially finitely generated over ``O_nu``   (external)
2. ``gr_omega`` is a finitely generated ``gr_nu`` algebra        (external)
3. ``gr_omega`` is a finite ``gr_nu`` module        (via semigroup criterion)
4. the value semigroup admits a finite cover
5. the integral closure ``D`` is a finitely generated algebra    (external)
6. ``D`` is a finite module                                       (external)
7. ``epsilon = e``
8. ``epsilon = e`` and ``d = 1``
9. statement 8 for every extension in the family

External statements are never evaluated; they are echoed and cross-checked
against the proven implications by :func:`family_check`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .errors import InconsistentFamily, MissingData, NonIntegralDefect, ValidationError
from .lattice import (
    Subgroup,
    group_index,
    initial_index,
    semigroup_cover,
    unit_triangular_criterion,
)

EXTERNAL = (1, 2, 5, 6)


class Truth(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNDECIDED = "undecided"

    @classmethod
    def of(cls, value: Optional[bool]) -> "Truth":
        if value is None:
            return cls.UNDECIDED
        return cls.TRUE if value else cls.FALSE


@dataclass(frozen=True)
class Lattice:
    delta: Subgroup

    def to_json(self) -> dict:
        return {"kind": "lattice", "subgroup": self.delta.to_json()}


@dataclass(frozen=True)
class DenseRank1:
    """Rank-one non-discrete ``Gamma_omega`` containing ``Gamma_nu`` with the given index."""

    index: int

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 1:
            raise ValidationError("index must be a positive integer")

    def to_json(self) -> dict:
        return {"kind": "dense_rank1", "index": self.index}


ValueGroupModel = Union[Lattice, DenseRank1]


def _groups_from_json(obj) -> ValueGroupModel:
    if not isinstance(obj, dict):
        raise ValidationError("groups must be an object")
    kind = obj.get("kind")
    if kind == "lattice":
        return Lattice(Subgroup.from_json(obj.get("subgroup")))
    if kind == "dense_rank1":
        return DenseRank1(obj.get("index"))
    raise ValidationError(f"unknown group model {kind!r}")


def _opt_positive(name: str, value) -> Optional[int]:
    if value is None:
        return None
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ValidationError(f"{name} must be a positive integer")
    return value


@dataclass(frozen=True)
class ExtensionRecord:
    groups: ValueGroupModel
    f: int = 1
    hensel_degree: Optional[int] = None
    lk_degree: Optional[int] = None
    external: dict = field(default_factory=dict)  # statement number -> bool
    name: str = ""

    def __post_init__(self):
        _opt_positive("f", self.f)
        if self.f is None:
            raise ValidationError("f is required")
        _opt_positive("hensel_degree", self.hensel_degree)
        _opt_positive("lk_degree", self.lk_degree)
        if self.hensel_degree and self.lk_degree and self.hensel_degree > self.lk_degree:
            raise ValidationError("hensel_degree exceeds lk_degree")
        ext = {}
        for k, v in dict(self.external).items():
            k = int(k)
            if k not in EXTERNAL:
                raise ValidationError(f"statement {k} cannot be asserted externally")
            if not isinstance(v, bool):
                raise ValidationError(f"assertion for statement {k} must be boolean")
            ext[k] = v
        object.__setattr__(self, "external", ext)

    def to_json(self) -> dict:
        out = {"groups": self.groups.to_json(), "f": self.f}
        if self.name:
            out["name"] = self.name
        if self.hensel_degree is not None:
            out["hensel_degree"] = self.hensel_degree
        if self.lk_degree is not None:
            out["lk_degree"] = self.lk_degree
        if self.external:
            out["external"] = {str(k): v for k, v in sorted(self.external.items())}
        return out

    @classmethod
    def from_json(cls, obj) -> "ExtensionRecord":
        if not isinstance(obj, dict) or "groups" not in obj:
            raise ValidationError("record JSON needs 'groups'")
        try:
            external = {int(k): v for k, v in obj.get("external", {}).items()}
        except (AttributeError, ValueError) as exc:
            raise ValidationError("external must map statement numbers to booleans") from exc
        return cls(
            groups=_groups_from_json(obj["groups"]),
            f=obj.get("f", 1),
            hensel_degree=obj.get("hensel_degree"),
            lk_degree=obj.get("lk_degree"),
            external=external,
            name=obj.get("name", ""),
        )


def ramification_index(rec: ExtensionRecord) -> int:
    if isinstance(rec.groups, DenseRank1):
        return rec.groups.index
    return group_index(rec.groups.delta)


def initial_index_ext(rec: ExtensionRecord) -> int:
    # a dense group has no least positive element, which forces epsilon = 1
    if isinstance(rec.groups, DenseRank1):
        return 1
    return initial_index(rec.groups.delta)


def defect(rec: ExtensionRecord) -> int:
    if rec.hensel_degree is None:
        raise MissingData("defect needs hensel_degree")
    ef = ramification_index(rec) * rec.f
    d, rem = divmod(rec.hensel_degree, ef)
    if rem:
        raise NonIntegralDefect(f"e*f = {ef} does not divide hensel_degree = {rec.hensel_degree}")
    return d


@dataclass(frozen=True)
class StatementProfile:
    truth: dict  # statement number (1..8) -> Truth
    epsilon: int
    e: int
    f: int
    d: Optional[int]
    cover: Optional[tuple]
    name: str = ""

    @property
    def dim(self) -> int:
        """Dimension of the degree-zero graded piece over the residue field."""
        return self.epsilon * self.f

    def __getitem__(self, k: int) -> Truth:
        return self.truth[k]

    def to_json(self) -> dict:
        out = {
            "statements": {str(k): t.value for k, t in sorted(self.truth.items())},
            "epsilon": self.epsilon,
            "e": self.e,
            "f": self.f,
            "d": self.d,
            "dim": self.dim,
            "statement_3_route": "via semigroup criterion",
            "cover": None if self.cover is None else [list(v) for v in self.cover],
        }
        if self.name:
            out["name"] = self.name
        return out


def degree_chain(rec: ExtensionRecord) -> bool:
    """True when ``epsilon * f`` reaches ``hensel_degree`` (and ``lk_degree`` if given).

    Since ``epsilon * f <= e * f * d = hensel_degree <= lk_degree``, equality
    at both ends forces ``epsilon = e`` and ``d = 1``.
    """
    if rec.hensel_degree is None:
        return False
    ef = initial_index_ext(rec) * rec.f
    return ef == rec.hensel_degree and rec.lk_degree in (None, ef)


def statement_profile(rec: ExtensionRecord) -> StatementProfile:
    e, eps = ramification_index(rec), initial_index_ext(rec)
    d = defect(rec) if rec.hensel_degree is not None else None
    if isinstance(rec.groups, Lattice):
        delta = rec.groups.delta
        s3 = unit_triangular_criterion(delta)
        cover = semigroup_cover(delta)
        s4 = cover is not None
        reps = cover.representatives if cover else None
    else:
        s3 = s4 = e == 1
        reps = ((0,),) if s4 else None
    s7 = eps == e
    if not s7:
        s8 = Truth.FALSE
    else:
        s8 = Truth.of(None if d is None else d == 1)
    truth = {k: Truth.of(rec.external.get(k)) for k in EXTERNAL}
    truth.update({3: Truth.of(s3), 4: Truth.of(s4), 7: Truth.of(s7), 8: s8})
    assert s3 == s4 == s7, "statements 3, 4 and 7 disagree"
    if degree_chain(rec):
        assert s7 and d == 1
    return StatementProfile(dict(sorted(truth.items())), eps, e, rec.f, d, reps, rec.name)


@dataclass(frozen=True)
class FamilyReport:
    profiles: tuple
    s9: Truth
    s5: Truth  # family-level assertions, merged over the records
    s6: Truth
    violations: tuple  # dicts with "arrow", "detail" and optionally "record"

    @property
    def consistent(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "profiles": [p.to_json() for p in self.profiles],
            "statement_9": self.s9.value,
            "asserted_5": self.s5.value,
            "asserted_6": self.s6.value,
            "violations": list(self.violations),
            "consistent": self.consistent,
        }


def _merge(recs, k: int, violations: list) -> Truth:
    said = {r.external[k] for r in recs if k in r.external}
    if len(said) > 1:
        violations.append({"arrow": f"conflicting assertions of {k}",
                           "detail": f"records disagree on statement {k}"})
        return Truth.UNDECIDED
    return Truth.of(said.pop() if said else None)


def family_check(recs: Sequence[ExtensionRecord], strict: bool = False) -> FamilyReport:
    """Evaluate statement 9 and check external assertions against the proven arrows.

    Checked arrows: 5 ⇔ 6 ⇔ 9, 5 ⇒ 1 for each extension, 1 ⇒ 8 (a
    necessary condition), 2 ⇔ 3, and for a single extension with 6 asserted
    the degree identity ``lk_degree = epsilon * f``.  With ``strict`` any
    violation raises :class:`InconsistentFamily`.
    """
    recs = list(recs)
    if not recs:
        raise ValidationError("family must contain at least one record")
    profiles = tuple(statement_profile(r) for r in recs)
    violations: list[dict] = []

    lks = {r.lk_degree for r in recs if r.lk_degree is not None}
    if len(lks) > 1:
        violations.append({"arrow": "shared lk_degree",
                           "detail": f"records give different lk_degree {sorted(lks)}"})

    s8s = [p[8] for p in profiles]
    if Truth.FALSE in s8s:
        s9 = Truth.FALSE
    elif all(t is Truth.TRUE for t in s8s):
        s9 = Truth.TRUE
    else:
        s9 = Truth.UNDECIDED

    s5, s6 = _merge(recs, 5, violations), _merge(recs, 6, violations)
    decided = (Truth.TRUE, Truth.FALSE)
    if s5 in decided and s6 in decided and s5 is not s6:
        violations.append({"arrow": "5 ⇔ 6", "detail": f"5 is {s5.value}, 6 is {s6.value}"})
    for k, sk in ((5, s5), (6, s6)):
        if sk in decided and s9 in decided and sk is not s9:
            violations.append({"arrow": f"{k} ⇔ 9",
                               "detail": f"{k} asserted {sk.value}, 9 is {s9.value}"})

    for idx, (rec, prof) in enumerate(zip(recs, profiles)):
        if s5 is Truth.TRUE and prof[1] is Truth.FALSE:
            violations.append({"arrow": "5 ⇒ 1", "record": idx,
                               "detail": "5 asserted but 1 denied"})
        if prof[1] is Truth.TRUE and prof[8] is Truth.FALSE:
            violations.append({"arrow": "1 ⇒ 8", "record": idx,
                               "detail": f"epsilon={prof.epsilon}, e={prof.e}, d={prof.d}"})
        if prof[2] in decided and prof[2] is not prof[3]:
            violations.append({"arrow": "2 ⇔ 3", "record": idx,
                               "detail": f"2 asserted {prof[2].value}, 3 is {prof[3].value}"})

    if len(recs) == 1 and s6 is Truth.TRUE and recs[0].lk_degree is not None:
        p = profiles[0]
        if recs[0].lk_degree != p.dim:
            violations.append({"arrow": "6 ⇒ lk_degree = epsilon*f", "record": 0,
                               "detail": f"lk_degree={recs[0].lk_degree}, epsilon*f={p.dim}"})

    report = FamilyReport(profiles, s9, s5, s6, tuple(violations))
    if strict and violations:
        raise InconsistentFamily(violations)
    return report
