"""Finite-index subgroups of Z^n under the lexicographic order.

Vectors are plain ``tuple[int, ...]``.  Python compares tuples
lexicographically with the first coordinate most significant, which is
exactly the order used here: ``(1, -100) > (0, 7)`` and ``Z * e_n`` (the last
coordinate) is the smallest nontrivial convex subgroup.  Every routine below
relies on that convention, so it is asserted once in :func:`lex_compare`.

A subgroup is stored together with its column Hermite normal form ``H``:
lower triangular, positive diagonal, and each entry left of the diagonal
reduced into ``[0, H[i][i])``.  With that shape ``Delta ∩ Z e_n`` is generated
by ``H[n-1][n-1] * e_n``, which is the initial index.

All arithmetic is on Python ints.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import prod
from typing import Optional, Sequence

from .errors import NotFiniteIndex, NotNested, ValidationError

LexVector = tuple  # tuple[int, ...]


class Order(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def lex_compare(a: Sequence[int], b: Sequence[int]) -> Order:
    if len(a) != len(b):
        raise ValidationError(f"length mismatch: {len(a)} != {len(b)}")
    a, b = tuple(a), tuple(b)
    if a == b:
        return Order.EQ
    return Order.LT if a < b else Order.GT


def is_nonnegative(v: Sequence[int]) -> bool:
    """``v >= 0``: zero, or the first nonzero coordinate is positive."""
    for x in v:
        if x:
            return x > 0
    return True


def is_positive(v: Sequence[int]) -> bool:
    for x in v:
        if x:
            return x > 0
    return False


def level(v: Sequence[int]) -> Optional[int]:
    """Index of the leading nonzero coordinate, ``None`` for the zero vector."""
    for i, x in enumerate(v):
        if x:
            return i
    return None


def unit_vector(n: int, k: int, scale: int = 1) -> LexVector:
    return tuple(scale if i == k else 0 for i in range(n))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _column_hnf(columns: list[list[int]], n: int) -> tuple[tuple[int, ...], ...]:
    cols = [list(c) for c in columns if any(c)]
    if len(cols) < n:
        raise NotFiniteIndex(f"{len(cols)} nonzero generators cannot span rank {n}")
    for i in range(n):
        # gather the gcd of row i (over columns i..) into column i
        for k in range(i + 1, len(cols)):
            b = cols[k][i]
            if b == 0:
                continue
            a = cols[i][i]
            g, x, y = _xgcd(a, b)
            ci, ck = cols[i], cols[k]
            p, q = a // g, b // g
            cols[i] = [x * u + y * v for u, v in zip(ci, ck)]
            cols[k] = [q * u - p * v for u, v in zip(ci, ck)]
        if cols[i][i] == 0:
            # pull a nonzero later column forward, if any remains
            for k in range(i + 1, len(cols)):
                if cols[k][i]:
                    cols[i], cols[k] = cols[k], cols[i]
                    break
            else:
                raise NotFiniteIndex(f"generators have rank < {n}")
        if cols[i][i] < 0:
            cols[i] = [-u for u in cols[i]]
        d = cols[i][i]
        for j in range(i):
            q = cols[j][i] // d
            if q:
                cols[j] = [u - q * v for u, v in zip(cols[j], cols[i])]
    assert all(not any(c) for c in cols[n:])
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class Subgroup:
    """A full-rank subgroup of Z^n; build it with :func:`canonicalize`."""

    n: int
    gens: tuple  # generator columns, as given
    hnf: tuple  # rows of the lower-triangular Hermite normal form

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.hnf[i][i] for i in range(self.n))

    def column(self, j: int) -> LexVector:
        return tuple(self.hnf[i][j] for i in range(self.n))

    def hnf_columns(self) -> list[LexVector]:
        return [self.column(j) for j in range(self.n)]

    def __contains__(self, v) -> bool:
        return membership(self, v)

    def to_json(self) -> dict:
        return {"n": self.n, "generators": [list(c) for c in self.gens]}

    @classmethod
    def from_json(cls, obj: dict) -> "Subgroup":
        if not isinstance(obj, dict) or "generators" not in obj:
            raise ValidationError("subgroup JSON needs 'generators'")
        return canonicalize(obj["generators"], n=obj.get("n"))


def canonicalize(gens: Sequence[Sequence[int]], n: Optional[int] = None) -> Subgroup:
    """Canonical form of the subgroup generated by the columns ``gens``.

    ``gens`` is a list of generator vectors (matrix columns).  Redundant and
    zero generators are allowed; a rank-deficient family raises
    :class:`NotFiniteIndex`.
    """
    gens = [tuple(int(x) for x in g) for g in gens]
    if not gens:
        raise NotFiniteIndex("no generators")
    if n is None:
        n = len(gens[0])
    if n < 1:
        raise ValidationError("rank must be at least 1")
    if any(len(g) != n for g in gens):
        raise ValidationError(f"every generator must have length {n}")
    hnf = _column_hnf([list(g) for g in gens], n)
    return Subgroup(n=n, gens=tuple(gens), hnf=hnf)


def group_index(delta: Subgroup) -> int:
    return prod(delta.diagonal)


def initial_index(delta: Subgroup) -> int:
    """Number of ``gamma >= 0`` lying below every positive element of ``delta``.

    The smallest positive element of Z^n is ``e_n`` and every multiple of it is
    below any vector with an earlier nonzero coordinate, so the counted set is
    ``{k e_n : 0 <= k < H[n-1][n-1]}``.
    """
    return delta.hnf[-1][-1]


def smallest_positive_elements(delta: Subgroup) -> list[LexVector]:
    eps = initial_index(delta)
    return [unit_vector(delta.n, delta.n - 1, k) for k in range(eps)]


def unit_triangular_criterion(delta: Subgroup) -> bool:
    """True iff ``delta`` contains ``(0,..,0,1,a_i,..)`` for every pivot but the last."""
    return all(d == 1 for d in delta.diagonal[:-1])


@dataclass(frozen=True)
class CosetCover:
    """Shifts ``gamma_i`` with ``Gamma_{>=0} = U (gamma_i + Delta_{>=0})``."""

    representatives: tuple

    def __len__(self):
        return len(self.representatives)


def semigroup_cover(delta: Subgroup) -> Optional[CosetCover]:
    """The canonical cover of ``Z^n_{>=0}`` by translates of ``delta_{>=0}``.

    The elements below ``delta_{>0}`` are pairwise incongruent; they give a
    cover exactly when they exhaust all cosets.  Otherwise no finite cover
    exists at all, and ``None`` is returned.
    """
    reps = smallest_positive_elements(delta)
    if len(reps) != group_index(delta):
        return None
    return CosetCover(tuple(reps))


def decompose(delta: Subgroup, gamma: Sequence[int]) -> tuple[int, LexVector]:
    """Split ``gamma >= 0`` as ``k e_n + delta_part`` with ``delta_part`` in ``delta_{>=0}``.

    Requires the unit-triangular shape; returns ``(k, delta_part)``.
    """
    if not unit_triangular_criterion(delta):
        raise ValidationError("subgroup has no semigroup cover")
    gamma = tuple(gamma)
    if len(gamma) != delta.n or not is_nonnegative(gamma):
        raise ValidationError("gamma must be a nonnegative vector of length n")
    n, h = delta.n, delta.hnf
    rest = list(gamma)
    for j in range(n - 1):
        c = rest[j]
        if c:
            rest = [r - c * h[i][j] for i, r in enumerate(rest)]
    eps = h[-1][-1]
    k = rest[-1] % eps
    part = tuple(g - (k if i == n - 1 else 0) for i, g in enumerate(gamma))
    return k, part


def membership(delta: Subgroup, v: Sequence[int]) -> bool:
    v = tuple(v)
    if len(v) != delta.n:
        raise ValidationError(f"vector length {len(v)} != rank {delta.n}")
    h = delta.hnf
    coeffs = []
    for i in range(delta.n):
        r = v[i] - sum(h[i][j] * c for j, c in enumerate(coeffs))
        q, rem = divmod(r, h[i][i])
        if rem:
            return False
        coeffs.append(q)
    return True


def contains_subgroup(sigma: Subgroup, delta: Subgroup) -> bool:
    """``delta ⊆ sigma``, checked on the generators of ``delta``."""
    return sigma.n == delta.n and all(membership(sigma, g) for g in delta.gens)


@dataclass(frozen=True)
class QuotientStructure:
    invariant_factors: tuple  # d_1 | d_2 | ... | d_n, ones included

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def is_cyclic(self) -> bool:
        return all(d == 1 for d in self.invariant_factors[:-1])


def _smith_diagonal(rows: Sequence[Sequence[int]]) -> list[int]:
    a = [list(r) for r in rows]
    m, n = len(a), len(a[0])
    diag = []
    for t in range(min(m, n)):
        while True:
            entries = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
            if not entries:
                return diag + [0] * (min(m, n) - t)
            _, pi, pj = min(entries)
            a[t], a[pi] = a[pi], a[t]
            for row in a:
                row[t], row[pj] = row[pj], row[t]
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                clean &= a[i][t] == 0
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                clean &= a[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
        diag.append(abs(a[t][t]))
    return diag


def quotient_invariants(delta: Subgroup) -> QuotientStructure:
    return QuotientStructure(tuple(_smith_diagonal(delta.hnf)))


@dataclass(frozen=True)
class EpsilonChain:
    """Initial indices along ``Delta ⊆ Sigma ⊆ Z^n`` and the matching group indices."""

    gamma_sigma: int
    sigma_delta: int
    gamma_delta: int
    index_gamma_sigma: int
    index_sigma_delta: int
    index_gamma_delta: int

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.gamma_sigma, self.sigma_delta, self.gamma_delta)

    @property
    def multiplicative(self) -> bool:
        return self.gamma_sigma * self.sigma_delta == self.gamma_delta

    @property
    def equality_transfers(self) -> bool:
        """Equality with the index holds overall iff it holds at both levels."""
        total = self.gamma_delta == self.index_gamma_delta
        both = (
            self.gamma_sigma == self.index_gamma_sigma
            and self.sigma_delta == self.index_sigma_delta
        )
        return total == both


def epsilon_chain(delta: Subgroup, sigma: Subgroup) -> EpsilonChain:
    if not contains_subgroup(sigma, delta):
        raise NotNested("some generator of delta is not in sigma")
    outer, total = initial_index(sigma), initial_index(delta)
    inner, rem = divmod(total, outer)
    assert rem == 0
    idx_outer, idx_total = group_index(sigma), group_index(delta)
    return EpsilonChain(
        gamma_sigma=outer,
        sigma_delta=inner,
        gamma_delta=total,
        index_gamma_sigma=idx_outer,
        index_sigma_delta=idx_total // idx_outer,
        index_gamma_delta=idx_total,
    )
