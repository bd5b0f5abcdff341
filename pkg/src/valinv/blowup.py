"""Monomial frames and primitive monoidal transforms (PMTs).

A :class:`Frame` is a system of parameters ``x_0 .. x_{n-1}`` together with a
unimodular value matrix: column ``k`` is the value of ``x_k`` in Z^n (lex).
Monomials are exponent tuples over the parameters; units are never tracked.

A PMT ``(i, j)`` with ``value(x_j) > value(x_i)`` adjoins ``x_j / x_i``: the
new ``x_j`` has value ``col_j - col_i`` and an exponent vector ``a`` becomes
``a`` with ``a_i += a_j``.  Parameter indices are 0-based everywhere,
including the JSON step format.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from typing import Callable, NamedTuple, Sequence

from .errors import (
    BudgetExceeded,
    InvalidPmt,
    MalformedRelation,
    PreconditionViolated,
    ValidationError,
)
from .lattice import is_positive, level

DEFAULT_BUDGET = 10_000

Monomial = tuple  # nonnegative exponents, one per parameter


def _bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    a = [list(r) for r in rows]
    n, sign, prev = len(a), 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


@dataclass(frozen=True)
class Frame:
    values: tuple  # columns: values[k] is the value of parameter k
    names: tuple = ()

    def __post_init__(self):
        values = tuple(tuple(int(x) for x in c) for c in self.values)
        object.__setattr__(self, "values", values)
        n = len(values)
        if n == 0 or any(len(c) != n for c in values):
            raise ValidationError("value matrix must be square with n >= 1")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{k + 1}" for k in range(n)))
        elif len(self.names) != n:
            raise ValidationError("one name per parameter")
        if not all(is_positive(c) for c in values):
            raise ValidationError("every parameter value must be positive")
        if abs(self.det()) != 1:
            raise ValidationError("value matrix must be unimodular")

    @property
    def n(self) -> int:
        return len(self.values)

    def det(self) -> int:
        rows = [[self.values[j][i] for j in range(self.n)] for i in range(self.n)]
        return _bareiss_det(rows)

    def level(self, k: int) -> int:
        return level(self.values[k])

    def to_json(self) -> dict:
        return {"n": self.n, "values": [list(c) for c in self.values]}

    @classmethod
    def from_json(cls, obj: dict) -> "Frame":
        if not isinstance(obj, dict) or "values" not in obj:
            raise ValidationError("frame JSON needs 'values'")
        frame = cls(tuple(tuple(c) for c in obj["values"]), tuple(obj.get("names", ())))
        if "n" in obj and obj["n"] != frame.n:
            raise ValidationError("'n' disagrees with the value matrix")
        return frame


class PmtStep(NamedTuple):
    i: int  # dividing parameter
    j: int  # divided parameter, x_j <- x_j / x_i

    def to_json(self) -> dict:
        return {"i": self.i, "j": self.j}

    @classmethod
    def from_json(cls, obj) -> "PmtStep":
        try:
            return cls(int(obj["i"]), int(obj["j"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad step {obj!r}") from exc


def _check_monomial(frame: Frame, exps: Sequence[int]) -> Monomial:
    exps = tuple(int(x) for x in exps)
    if len(exps) != frame.n:
        raise ValidationError(f"monomial has {len(exps)} exponents, frame has {frame.n}")
    if any(x < 0 for x in exps):
        raise ValidationError("exponents must be nonnegative")
    return exps


def monomial_value(frame: Frame, exps: Sequence[int]) -> tuple:
    exps = _check_monomial(frame, exps)
    return tuple(
        sum(frame.values[k][r] * exps[k] for k in range(frame.n)) for r in range(frame.n)
    )


def rewrite(step: PmtStep, exps: Sequence[int]) -> Monomial:
    i, j = step
    return tuple(x + exps[j] if k == i else x for k, x in enumerate(exps))


def apply_pmt(frame: Frame, step: PmtStep) -> Frame:
    i, j = step
    n = frame.n
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise InvalidPmt(f"step {tuple(step)} out of range for n={n}")
    vi, vj = frame.values[i], frame.values[j]
    if not vj > vi:
        raise InvalidPmt(f"value of x{j} must exceed value of x{i}")
    col = tuple(a - b for a, b in zip(vj, vi))
    return Frame(frame.values[:j] + (col,) + frame.values[j + 1:], frame.names)


def pmt(frame: Frame, step: PmtStep) -> tuple[Frame, Callable[[Sequence[int]], Monomial]]:
    """Apply one PMT; returns the new frame and the monomial rewriter."""
    step = PmtStep(*step)
    return apply_pmt(frame, step), partial(rewrite, step)


def replay(frame: Frame, steps: Sequence[PmtStep], monomials: Sequence[Sequence[int]] = ()):
    """Apply ``steps`` in order; returns ``(frame, rewritten monomials)``."""
    monos = [_check_monomial(frame, m) for m in monomials]
    for step in steps:
        step = PmtStep(*step)
        frame = apply_pmt(frame, step)
        monos = [rewrite(step, m) for m in monos]
    return frame, monos


def divides(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


@dataclass(frozen=True)
class DivisibilityResult:
    steps: tuple
    frame: Frame
    m1: Monomial
    m2: Monomial

    def to_json(self) -> dict:
        return {
            "steps": [s.to_json() for s in self.steps],
            "frame": self.frame.to_json(),
            "m1": list(self.m1),
            "m2": list(self.m2),
        }


class _Run:
    """Mutable state of one PMT search, with budget and trace."""

    def __init__(self, frame: Frame, monos: Sequence[Monomial], budget: int):
        self.values = [tuple(c) for c in frame.values]
        self.names = frame.names
        self.monos = [list(m) for m in monos]
        self.budget = budget
        self.steps: list[PmtStep] = []

    def apply(self, i: int, j: int):
        if len(self.steps) >= self.budget:
            raise BudgetExceeded(f"no divisibility within {self.budget} PMTs", self.steps)
        vi, vj = self.values[i], self.values[j]
        if not vj > vi:
            raise InvalidPmt(f"value of x{j} must exceed value of x{i}")
        self.values[j] = tuple(a - b for a, b in zip(vj, vi))
        for m in self.monos:
            m[i] += m[j]
        self.steps.append(PmtStep(i, j))

    def frame(self) -> Frame:
        return Frame(tuple(self.values), self.names)


def make_divisible(frame: Frame, m1: Sequence[int], m2: Sequence[int],
                   budget: int = DEFAULT_BUDGET) -> DivisibilityResult:
    """Find PMTs after which ``m1`` divides ``m2`` exponentwise.

    Needs ``value(m1) <= value(m2)``.  The search works on the levels of the
    parameters (row of the leading nonzero entry of the value column):

    1. while some level holds two parameters, divide the others at that level
       by its smallest one (subtractive Euclid on the leading entries); this
       ends with one parameter per level and leading entries 1;
    2. at the most significant level where the two monomials differ, the
       exponent of ``m2`` is the larger; dividing that parameter by every
       deeper parameter with a deficit moves the surplus down until every
       deficit is gone.

    Divisibility is tested after every step, so the search stops at the first
    frame where it holds.
    """
    if budget < 1:
        raise ValidationError("budget must be positive")
    m1, m2 = _check_monomial(frame, m1), _check_monomial(frame, m2)
    if monomial_value(frame, m1) > monomial_value(frame, m2):
        raise PreconditionViolated("value of m1 exceeds value of m2")
    run = _Run(frame, (m1, m2), budget)
    a, b = run.monos
    n = frame.n

    def done() -> bool:
        return divides(a, b)

    if not done():
        for row in range(n):
            while True:
                same = [k for k in range(n) if level(run.values[k]) == row]
                if len(same) < 2:
                    break
                i = min(same, key=lambda k: run.values[k])
                others = [k for k in same if k != i]
                j = next((k for k in others if a[k] > b[k]), others[0])
                run.apply(i, j)
                if done():
                    break
            if done():
                break

    if not done():
        by_level = {level(run.values[k]): k for k in range(n)}
        top = next(by_level[r] for r in sorted(by_level) if a[by_level[r]] != b[by_level[r]])
        assert b[top] > a[top]
        for k in range(n):
            while a[k] > b[k]:
                run.apply(k, top)

    assert done()
    return DivisibilityResult(tuple(run.steps), run.frame(), tuple(a), tuple(b))


# -- two-parameter relations --------------------------------------------------

@dataclass(frozen=True)
class Relation2:
    """``x1 = unit * y1^a y2^b`` and ``x2 = unit * y1^c y2^d`` with ``|ad - bc| = e``."""

    a: int
    b: int
    c: int
    d: int
    e: int

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.d) < 0 or self.e < 1:
            raise MalformedRelation("exponents must be >= 0 and e >= 1")
        if abs(self.a * self.d - self.b * self.c) != self.e:
            raise MalformedRelation(f"|ad - bc| = {abs(self.a * self.d - self.b * self.c)} != e")

    @property
    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.a, self.b), (self.c, self.d)

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d, "e": self.e}

    @classmethod
    def from_json(cls, obj) -> "Relation2":
        try:
            return cls(*(int(obj[k]) for k in "abcde"))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedRelation(f"bad relation {obj!r}") from exc


def _sub_y(rows, src: int, dst: int, times: int):
    """Substitute ``y_src = y_src' * y_dst^times`` in both x-rows."""
    return tuple(
        tuple(r[k] + times * r[src] if k == dst else r[k] for k in range(2)) for r in rows
    )


def _sub_x(rows, src: int, dst: int, times: int):
    """Substitute ``x_src = x_src' * x_dst^times``: row ``src`` loses ``times`` copies of row ``dst``."""
    rows = list(rows)
    rows[src] = tuple(u - times * v for u, v in zip(rows[src], rows[dst]))
    return tuple(rows)


def _relation(rows, e: int) -> Relation2:
    (a, b), (c, d) = rows
    return Relation2(a, b, c, d, e)


@dataclass(frozen=True)
class Rank2Normalization:
    r: int  # y1 <- y1 / y2^r on the S side
    s: int  # x1 <- x1 / x2^s on the R side
    relation: Relation2


def rank2_normalize(rel: Relation2) -> Rank2Normalization:
    """Clear the ``y2`` exponent of ``x1`` in ``x1 = y1 y2^b``, ``x2 = y2^e``.

    Picks the least ``r >= 0`` with ``e | b + r`` and ``s = (b + r) / e``.
    """
    if (rel.a, rel.c, rel.d) != (1, 0, rel.e):
        raise MalformedRelation("expected the form x1 = y1 y2^b, x2 = y2^e")
    r = -rel.b % rel.e
    s = (rel.b + r) // rel.e
    rows = _sub_y(rel.rows, 0, 1, r)
    rows = _sub_x(rows, 0, 1, s)
    out = _relation(rows, rel.e)
    assert (out.a, out.b, out.c, out.d) == (1, 0, 0, rel.e)
    return Rank2Normalization(r, s, out)


@dataclass(frozen=True)
class PairedStep:
    relation: Relation2
    omega_x1: int
    omega_x2: int
    r_transforms: int  # quadratic transforms on the x side
    s_transforms: int  # quadratic transforms on the y side

    @property
    def needs_residue_lift(self) -> bool:
        """``x2 / x1`` became a unit; the next parameter comes from the residue field."""
        return self.omega_x2 == 0


def paired_step_rank1(rel: Relation2, omega_x2: int) -> PairedStep:
    """One paired transform in the discrete rank-one case ``Gamma_nu = eZ ⊆ Z``.

    Input form: ``x1 = unit * y1^e``, ``x2 = y2`` with ``omega(y1) = 1`` and
    ``omega(x2)`` a positive multiple of ``e``.  The x side adjoins
    ``x2 / x1``; the y side adjoins ``y2 / y1`` ``e`` times.  Residue-field
    choices are not modelled, only values and exponents.
    """
    e = rel.e
    if (rel.a, rel.b, rel.c, rel.d) != (e, 0, 0, 1):
        raise MalformedRelation("expected the form x1 = y1^e, x2 = y2")
    if omega_x2 <= 0 or omega_x2 % e:
        raise MalformedRelation(f"omega(x2) = {omega_x2} is not a positive multiple of {e}")
    rows = _sub_x(rel.rows, 1, 0, 1)
    rows = _sub_y(rows, 1, 0, e)
    out = _relation(rows, e)
    assert out == rel
    return PairedStep(out, e, omega_x2 - e, 1, e)


# -- supports of a fraction ----------------------------------------------------

@dataclass(frozen=True)
class FractionCertificate:
    """Final exponent tables after reducing the supports of ``g / h``.

    ``ms``/``ns`` hold the monomials over the frame; ``x_ms``/``x_ns`` their
    ``e``-th powers, the monomials the transforms actually act on.
    """

    e: int
    steps: tuple
    frame: Frame
    ms: tuple
    ns: tuple
    m_lead: int  # index of the least-valued numerator monomial
    n_lead: int
    x_ms: tuple = field(init=False)
    x_ns: tuple = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "x_ms", tuple(tuple(self.e * x for x in m) for m in self.ms))
        object.__setattr__(self, "x_ns", tuple(tuple(self.e * x for x in m) for m in self.ns))

    def holds(self) -> bool:
        xm, xn = self.x_ms[self.m_lead], self.x_ns[self.n_lead]
        x_side = (
            all(divides(xn, m) for m in self.x_ns)
            and all(divides(xn, m) for m in self.x_ms)
            and all(divides(xm, m) for m in self.x_ms)
        )
        m, n_ = self.ms[self.m_lead], self.ns[self.n_lead]
        roots = (
            all(divides(n_, x) for x in self.ns)
            and divides(n_, m)
            and all(divides(m, x) for x in self.ms)
        )
        return x_side and roots

    def to_json(self) -> dict:
        return {
            "e": self.e,
            "steps": [s.to_json() for s in self.steps],
            "frame": self.frame.to_json(),
            "ms": [list(m) for m in self.ms],
            "ns": [list(m) for m in self.ns],
            "x_ms": [list(m) for m in self.x_ms],
            "x_ns": [list(m) for m in self.x_ns],
            "m_lead": self.m_lead,
            "n_lead": self.n_lead,
            "holds": self.holds(),
        }


def reduce_fraction_supports(frame: Frame, e: int, ms: Sequence[Sequence[int]],
                             ns: Sequence[Sequence[int]],
                             budget: int = DEFAULT_BUDGET) -> FractionCertificate:
    """PMTs making the least denominator monomial divide every listed monomial.

    ``ms`` and ``ns`` are the numerator and denominator supports.  The
    transforms act on their ``e``-th powers; afterwards the least-valued
    ``N`` divides every ``N_j`` and ``M_1``, and the least-valued ``M_1``
    divides every ``M_i``.  Divisibility survives later PMTs, so the pairs
    are handled one after another.
    """
    if e < 1:
        raise ValidationError("e must be positive")
    if not ms or not ns:
        raise PreconditionViolated("both supports must be nonempty")
    ms = [_check_monomial(frame, m) for m in ms]
    ns = [_check_monomial(frame, m) for m in ns]
    xm = [tuple(e * x for x in m) for m in ms]
    xn = [tuple(e * x for x in m) for m in ns]
    m_lead = min(range(len(xm)), key=lambda k: monomial_value(frame, xm[k]))
    n_lead = min(range(len(xn)), key=lambda k: monomial_value(frame, xn[k]))
    if monomial_value(frame, xn[n_lead]) > monomial_value(frame, xm[m_lead]):
        raise PreconditionViolated("least denominator value exceeds least numerator value")

    steps: list[PmtStep] = []
    current = frame
    pairs = [("n", n_lead, "m", m_lead)]
    pairs += [("n", n_lead, "n", k) for k in range(len(xn)) if k != n_lead]
    pairs += [("m", m_lead, "m", k) for k in range(len(xm)) if k != m_lead]
    tables = {"m": xm, "n": xn}
    for src, si, dst, di in pairs:
        try:
            res = make_divisible(current, tables[src][si], tables[dst][di], budget - len(steps))
        except BudgetExceeded as exc:
            raise BudgetExceeded(str(exc), steps + exc.trace) from None
        except ValidationError:
            if budget - len(steps) < 1:
                raise BudgetExceeded(f"no divisibility within {budget} PMTs", steps) from None
            raise
        for step in res.steps:
            current = apply_pmt(current, step)
            tables = {k: [rewrite(step, m) for m in v] for k, v in tables.items()}
        steps.extend(res.steps)
    _, monos = replay(frame, steps, ms + ns)
    cert = FractionCertificate(
        e, tuple(steps), current, tuple(monos[:len(ms)]), tuple(monos[len(ms):]), m_lead, n_lead
    )
    assert cert.x_ms == tuple(tables["m"]) and cert.x_ns == tuple(tables["n"])
    assert cert.holds()
    return cert
