"""Brute-force ground truth for the lattice and blow-up routines.

Nothing here imports the fast paths in :mod:`valinv.lattice` or
:mod:`valinv.blowup`; a subgroup is only read for its stored matrices.
Membership is decided from the raw generators by a determinant/adjugate
argument, determinants come from the Leibniz formula, and counts come from
walking boxes of integer points.  Slow on purpose.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Optional, Sequence

import numpy as np

from .errors import NotFound, UnstableCount, ValidationError

BFS_DEPTH = 8
_INT64_SAFE = 2**62


def default_bound(n: int) -> int:
    return 8 if n <= 3 else 5


@dataclass(frozen=True)
class Box:
    """The cube ``[-bound, bound]^n``.

    ``coeff_bound`` sizes the coefficient cube used to enumerate lattice
    elements; it defaults to ``bound``.  Point counts only ever grow the point
    cube, so the two are kept apart.
    """

    bound: int
    coeff_bound: Optional[int] = None

    def __post_init__(self):
        if self.bound < 1 or (self.coeff_bound is not None and self.coeff_bound < 1):
            raise ValidationError("box bounds must be >= 1")

    @property
    def coeff(self) -> int:
        return self.coeff_bound if self.coeff_bound is not None else self.bound


# -- exact small linear algebra ---------------------------------------------

def _perm_sign(p) -> int:
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leibniz_det(rows: Sequence[Sequence[int]]) -> int:
    k = len(rows)
    if k == 0:
        return 1
    return sum(
        _perm_sign(p) * prod(rows[i][p[i]] for i in range(k))
        for p in itertools.permutations(range(k))
    )


def adjugate(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    k = len(rows)
    adj = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            minor = [[rows[r][c] for c in range(k) if c != j] for r in range(k) if r != i]
            adj[j][i] = (-1) ** (i + j) * leibniz_det(minor)
    return adj


def rational_rank(vectors: Sequence[Sequence[int]]) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c] != 0:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def determinantal_invariants(gens: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Invariant factors of ``Z^n / <gens>`` from gcds of k x k minors."""
    n = len(gens[0])
    cols = list(gens)
    divisors = [1]
    for k in range(1, n + 1):
        g = 0
        for rsel in itertools.combinations(range(n), k):
            for csel in itertools.combinations(range(len(cols)), k):
                g = gcd(g, leibniz_det([[cols[c][r] for c in csel] for r in rsel]))
        if g == 0:
            raise ValidationError("generators are rank deficient")
        divisors.append(g)
    return tuple(divisors[k] // divisors[k - 1] for k in range(1, n + 1))


def _closure(gens: Sequence[tuple], modulus: int, n: int) -> set:
    zero = (0,) * n
    seen, queue = {zero}, deque([zero])
    gens = [g for g in gens if any(g)]
    while queue:
        x = queue.popleft()
        for g in gens:
            y = tuple((a + b) % modulus for a, b in zip(x, g))
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


class BruteLattice:
    """Membership and coset enumeration straight from raw generator columns.

    Pick ``n`` independent generators ``M``; then ``v -> adj(M) v mod |det M|``
    is a homomorphism with kernel exactly the column lattice of ``M``, so the
    full lattice corresponds to the subgroup of keys spanned by the remaining
    generators.
    """

    def __init__(self, gens: Sequence[Sequence[int]]):
        gens = [tuple(int(x) for x in g) for g in gens]
        if not gens:
            raise ValidationError("no generators")
        self.n = n = len(gens[0])
        basis: list = []
        rest: list = []
        for g in gens:
            if len(basis) < n and rational_rank(basis + [g]) == len(basis) + 1:
                basis.append(g)
            else:
                rest.append(g)
        if len(basis) < n:
            raise ValidationError("generators are rank deficient")
        self.gens = gens
        rows = [[basis[j][i] for j in range(n)] for i in range(n)]
        self.modulus = abs(leibniz_det(rows))
        self.adj = adjugate(rows)
        self.subgroup_keys = _closure([self.key(g) for g in rest], self.modulus, n)

    def key(self, v: Sequence[int]) -> tuple:
        return tuple(sum(a * x for a, x in zip(row, v)) % self.modulus for row in self.adj)

    def __contains__(self, v) -> bool:
        return self.key(v) in self.subgroup_keys

    def coset_count(self) -> int:
        """``|Z^n / L|`` by enumerating the whole key group and its cosets."""
        unit_keys = [self.key(tuple(int(i == k) for i in range(self.n))) for k in range(self.n)]
        everything = _closure(unit_keys, self.modulus, self.n)
        seen: set = set()
        cosets = 0
        for x in sorted(everything):
            if x in seen:
                continue
            cosets += 1
            for s in self.subgroup_keys:
                seen.add(tuple((a + b) % self.modulus for a, b in zip(x, s)))
        return cosets


def brute_coset_count(gens: Sequence[Sequence[int]]) -> int:
    return BruteLattice(gens).coset_count()


def brute_lattices_equal(gens_a, gens_b, bound: int = 6) -> bool:
    """Do the two lattices agree on every point of ``[-bound, bound]^n``?"""
    la, lb = BruteLattice(gens_a), BruteLattice(gens_b)
    return all(
        (p in la) == (p in lb)
        for p in itertools.product(range(-bound, bound + 1), repeat=la.n)
    )


# -- epsilon by enumeration -------------------------------------------------

def _cube(n: int, b: int) -> np.ndarray:
    axis = np.arange(-b, b + 1, dtype=np.int64)
    grids = np.meshgrid(*([axis] * n), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _positive_mask(pts: np.ndarray) -> np.ndarray:
    nz = pts != 0
    lead = nz.argmax(axis=1)
    first = pts[np.arange(len(pts)), lead]
    return nz.any(axis=1) & (first > 0)


def _nonnegative_mask(pts: np.ndarray) -> np.ndarray:
    return _positive_mask(pts) | ~(pts != 0).any(axis=1)


def _lexmin(pts: np.ndarray) -> tuple:
    order = np.lexsort(pts.T[::-1])
    return tuple(int(x) for x in pts[order[0]])


def brute_min_positive(delta, box: Box, raw: bool = False) -> Optional[tuple]:
    """Lex-least positive vector among ``sum c_j g_j`` with ``c`` in the coefficient cube.

    Uses the Hermite columns by default and the raw generators when ``raw``.
    Returns ``None`` when no positive combination is found.
    """
    cols = list(delta.gens) if raw else [
        tuple(delta.hnf[i][j] for i in range(delta.n)) for j in range(delta.n)
    ]
    b = box.coeff
    biggest = max((abs(x) for c in cols for x in c), default=0)
    if biggest * b * len(cols) < _INT64_SAFE:
        gen = np.array(cols, dtype=np.int64)
        pts = _cube(len(cols), b) @ gen
        pts = pts[_positive_mask(pts)]
        return _lexmin(pts) if len(pts) else None
    best = None
    for c in itertools.product(range(-b, b + 1), repeat=len(cols)):
        v = tuple(sum(ci * g[i] for ci, g in zip(c, cols)) for i in range(delta.n))
        lead = next((x for x in v if x), 0)
        if lead > 0 and (best is None or v < best):
            best = v
    return best


def _walk_below(target: tuple, bound: int, accept=None, limit: int = 10**7) -> int:
    """Count cube points ``gamma`` with ``0 <= gamma < target``, visited in lex order."""
    n = len(target)
    g = [0] * n
    count = steps = 0
    while tuple(g) < target:
        if accept is None or accept(tuple(g)):
            count += 1
        steps += 1
        if steps > limit:
            raise UnstableCount(f"walk exceeded {limit} points")
        i = n - 1
        while i >= 0 and g[i] == bound:
            g[i] = -bound
            i -= 1
        if i < 0:
            break
        g[i] += 1
    return count


def _stable_target(delta, box: Box) -> tuple:
    lo = brute_min_positive(delta, box)
    hi = brute_min_positive(delta, Box(box.bound, 2 * box.coeff))
    if lo is None or lo != hi:
        raise UnstableCount(f"min positive element moved: {lo} -> {hi}")
    return lo


def brute_epsilon(delta, box: Optional[Box] = None) -> int:
    """Literal count of ``{gamma >= 0 : gamma < min delta_{>0}}`` inside the box.

    Raises :class:`UnstableCount` unless doubling the box reproduces the count.
    """
    box = box or Box(default_bound(delta.n))
    target = _stable_target(delta, box)
    lo = _walk_below(target, box.bound)
    hi = _walk_below(target, 2 * box.bound)
    if lo != hi:
        raise UnstableCount(f"count {lo} at bound {box.bound}, {hi} at {2 * box.bound}")
    return lo


def stable_brute_epsilon(delta, box: Optional[Box] = None, max_bound: int = 2**20) -> int:
    """:func:`brute_epsilon`, growing the point cube until the count settles."""
    box = box or Box(default_bound(delta.n))
    bound = box.bound
    while True:
        try:
            return brute_epsilon(delta, Box(bound, box.coeff))
        except UnstableCount:
            if bound >= max_bound:
                raise
            bound *= 2


def brute_relative_epsilon(sigma_gens, delta, box: Optional[Box] = None,
                           max_bound: int = 2**16) -> int:
    """``|{sigma in Sigma_{>=0} : sigma < Delta_{>0}}|`` by walking the cube."""
    box = box or Box(default_bound(delta.n))
    sigma = BruteLattice(sigma_gens)
    target = _stable_target(delta, box)
    # Sigma may be sparse along the last axis, so agreement at B and 2B alone
    # can plateau early; the walked cube must at least contain the target
    bound = max(box.bound, max(abs(x) for x in target))
    while True:
        lo = _walk_below(target, bound, sigma.__contains__)
        hi = _walk_below(target, 2 * bound, sigma.__contains__)
        if lo == hi:
            return lo
        if bound >= max_bound:
            raise UnstableCount("relative count did not settle")
        bound *= 2


# -- cover verification ------------------------------------------------------

@dataclass(frozen=True)
class CoverCheck:
    ok: bool
    counterexample: Optional[tuple] = None

    def __bool__(self):
        return self.ok


def brute_cover_verify(delta, reps: Sequence[Sequence[int]], box: Optional[Box] = None) -> CoverCheck:
    """Check ``gamma - r in Delta_{>=0}`` for some ``r`` at every ``gamma >= 0`` of the cube.

    Membership uses the adjugate keys of :class:`BruteLattice`.  The loop runs
    over the representatives, or over the key subgroup when that is smaller,
    matching representatives by sorted key codes.
    """
    reps = [tuple(int(x) for x in r) for r in reps]
    lat = BruteLattice(delta.gens)
    n, D = lat.n, lat.modulus
    box = box or Box(default_bound(n))
    if any(len(r) != n for r in reps):
        raise ValidationError("representative length mismatch")
    pts = _cube(n, box.bound)
    pts = pts[_nonnegative_mask(pts)]
    biggest = max(abs(x) for row in lat.adj for x in row)
    exact = biggest * box.bound * n >= _INT64_SAFE or D**n >= _INT64_SAFE
    dtype = object if exact else np.int64
    weights = np.array([D**i for i in range(n)], dtype=dtype)
    keys = (pts.astype(dtype) @ np.array(lat.adj, dtype=dtype).T) % D
    covered = np.zeros(len(pts), dtype=bool)

    def code(key_rows):
        return (key_rows % D) @ weights

    if reps and len(lat.subgroup_keys) < len(reps):
        rep_arr = np.array(reps, dtype=np.int64)
        rep_codes = code(np.array([lat.key(r) for r in reps], dtype=dtype))
        # reps sharing a code go into separate layers so each lookup is unique
        layers: list[list[int]] = []
        seen_count: dict = {}
        for idx, c in enumerate(rep_codes.tolist()):
            k = seen_count.get(c, 0)
            seen_count[c] = k + 1
            if k == len(layers):
                layers.append([])
            layers[k].append(idx)
        for layer in layers:
            ids = np.array(sorted(layer, key=lambda i: rep_codes[i]), dtype=np.int64)
            sorted_codes = rep_codes[ids]
            if exact:
                lookup = {c: int(i) for c, i in zip(sorted_codes.tolist(), ids.tolist())}
            for sk in lat.subgroup_keys:
                want = code(keys - np.array(sk, dtype=dtype))
                if exact:
                    hit_ids = [lookup.get(c, -1) for c in want.tolist()]
                    cand = np.array(hit_ids, dtype=np.int64)
                    hit = cand >= 0
                else:
                    pos = np.searchsorted(sorted_codes, want)
                    pos = np.minimum(pos, len(sorted_codes) - 1)
                    hit = sorted_codes[pos] == want
                    cand = ids[pos]
                rows = np.nonzero(hit & ~covered)[0]
                if len(rows):
                    shifted = pts[rows] - rep_arr[cand[rows]]
                    covered[rows[_nonnegative_mask(shifted)]] = True
    elif reps:
        allowed = np.array(sorted(code(np.array([k], dtype=dtype))[0]
                                  for k in lat.subgroup_keys), dtype=dtype)
        allowed_set = set(allowed.tolist())
        for r in reps:
            rows = np.nonzero(~covered)[0]
            rows = rows[_nonnegative_mask(pts[rows] - np.array(r, dtype=np.int64))]
            codes = code(keys[rows] - np.array(lat.key(r), dtype=dtype))
            if exact:
                member = np.array([c in allowed_set for c in codes.tolist()], dtype=bool)
            else:
                member = np.isin(codes, allowed)
            covered[rows[member]] = True
    if covered.all():
        return CoverCheck(True)
    # report the failure nearest the origin (L1 norm), ties broken lexicographically
    missing = pts[~covered]
    shell = np.abs(missing).sum(axis=1)
    missing = missing[shell == shell.min()]
    return CoverCheck(False, _lexmin(missing))


# -- exhaustive PMT search ----------------------------------------------------

def pmt_bfs(frame, m1: Sequence[int], m2: Sequence[int], depth: int = BFS_DEPTH) -> list[tuple[int, int]]:
    """Shortest list of ``(i, j)`` moves after which ``m1`` divides ``m2``.

    A move replaces the value column ``j`` by ``col_j - col_i`` (allowed when
    ``col_j > col_i``) and adds exponent ``j`` into exponent ``i``.  Raises
    :class:`NotFound` when no sequence of length ``<= depth`` works.
    """
    values = tuple(tuple(c) for c in frame.values)
    n = len(values)
    start = (values, tuple(m1), tuple(m2))

    def done(a, b):
        return all(x <= y for x, y in zip(a, b))

    if done(start[1], start[2]):
        return []
    frontier = [(start, [])]
    seen = {start}
    for _ in range(depth):
        nxt = []
        for (vals, a, b), path in frontier:
            for i in range(n):
                for j in range(n):
                    if i == j or not vals[j] > vals[i]:
                        continue
                    col = tuple(x - y for x, y in zip(vals[j], vals[i]))
                    v2 = vals[:j] + (col,) + vals[j + 1:]
                    a2 = tuple(x + (a[j] if k == i else 0) for k, x in enumerate(a))
                    b2 = tuple(x + (b[j] if k == i else 0) for k, x in enumerate(b))
                    state = (v2, a2, b2)
                    if state in seen:
                        continue
                    seen.add(state)
                    if done(a2, b2):
                        return path + [(i, j)]
                    nxt.append((state, path + [(i, j)]))
        frontier = nxt
    raise NotFound(f"no PMT sequence of length <= {depth}")

