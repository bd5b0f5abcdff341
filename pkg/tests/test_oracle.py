import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import subgroups
from valinv.blowup import Frame
from valinv.errors import NotFound, UnstableCount, ValidationError
from valinv.lattice import canonicalize, group_index, initial_index, membership
from valinv.oracle import (
    Box,
    BruteLattice,
    brute_cover_verify,
    brute_epsilon,
    brute_min_positive,
    brute_relative_epsilon,
    default_bound,
    determinantal_invariants,
    leibniz_det,
    pmt_bfs,
    stable_brute_epsilon,
)

SKEW = canonicalize([(1, 1), (0, 3)])
THREE_Z2 = canonicalize([(3, 0), (0, 3)])
STRETCH = canonicalize([(1, 0), (0, 3)])


def test_box_validation():
    with pytest.raises(ValidationError):
        Box(0)
    assert Box(4).coeff == 4
    assert Box(4, 9).coeff == 9
    assert default_bound(3) == 8 and default_bound(4) == 5


class TestMinPositive:
    def test_examples(self):
        assert brute_min_positive(canonicalize([(1, 0), (0, 1)]), Box(1)) == (0, 1)
        for b in (3, 6):
            assert brute_min_positive(SKEW, Box(b)) == (0, 3)
            assert brute_min_positive(THREE_Z2, Box(b)) == (0, 3)

    def test_raw_generators_agree(self):
        assert brute_min_positive(SKEW, Box(4), raw=True) == (0, 3)


class TestEpsilon:
    def test_examples(self):
        assert brute_epsilon(canonicalize([(1, 0, 0), (0, 1, 0), (0, 0, 1)])) == 1
        assert brute_epsilon(THREE_Z2) == 3
        assert brute_epsilon(STRETCH) == 3

    def test_unstable_when_box_too_small(self):
        big = canonicalize([(1, 0), (0, 40)])
        with pytest.raises(UnstableCount):
            brute_epsilon(big, Box(8))
        assert stable_brute_epsilon(big, Box(8)) == 40

    def test_relative(self):
        sigma_gens = [(1, 0), (0, 2)]
        delta = canonicalize([(1, 0), (0, 6)])
        assert brute_relative_epsilon(sigma_gens, delta) == 3

    def test_relative_with_sparse_sigma(self):
        # Sigma meets the last axis in 34 Z; a small cube would see only 0 below 68 e_3
        sigma = canonicalize([(1, 0, 9), (0, 1, 2), (0, 0, 34)])
        delta = canonicalize([(3, 1, 29), (0, 2, 38), (0, 0, 68)])
        assert brute_relative_epsilon(sigma.gens, delta) == 2

    @settings(max_examples=40)
    @given(subgroups(max_n=3, lo=-4, hi=4))
    def test_matches_fast_path(self, delta):
        assert stable_brute_epsilon(delta) == initial_index(delta)


class TestCosets:
    def test_counts(self):
        assert BruteLattice(SKEW.gens).coset_count() == 3
        assert BruteLattice(THREE_Z2.gens).coset_count() == 9

    def test_membership_from_raw_generators(self):
        lat = BruteLattice([(1, 1), (0, 3), (2, 2)])
        assert (2, 5) in lat and (0, 1) not in lat

    def test_determinants(self):
        assert leibniz_det([[1, 2], [3, 4]]) == -2
        assert determinantal_invariants(THREE_Z2.gens) == (3, 3)
        assert determinantal_invariants(SKEW.gens) == (1, 3)

    @settings(max_examples=40)
    @given(subgroups(max_n=3, lo=-4, hi=4, max_index=200))
    def test_coset_count_matches_index(self, delta):
        assert BruteLattice(delta.gens).coset_count() == group_index(delta)

    @given(subgroups(max_n=3, lo=-4, hi=4))
    def test_membership_agrees(self, delta):
        lat = BruteLattice(delta.gens)
        for v in [(1,) * delta.n, (0,) * (delta.n - 1) + (2,), tuple(range(delta.n))]:
            assert (v in lat) == membership(delta, v)


class TestCoverVerify:
    def test_trivial(self):
        assert brute_cover_verify(canonicalize([(1, 0), (0, 1)]), [(0, 0)])

    def test_stretched(self):
        assert brute_cover_verify(STRETCH, [(0, 0), (0, 1), (0, 2)], Box(8))

    def test_scaled_counterexample(self):
        check = brute_cover_verify(THREE_Z2, [(0, 0), (0, 1), (0, 2)])
        assert not check
        assert check.counterexample == (1, 0)

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            brute_cover_verify(STRETCH, [(0, 0, 0)])

    @settings(max_examples=60)
    @given(subgroups(max_n=3, lo=-3, hi=3), st.lists(st.integers(0, 3), max_size=4))
    def test_matches_pointwise_loop(self, delta, shifts):
        # both internal paths against a plain loop over the cube
        n = delta.n
        reps = [(0,) * (n - 1) + (k,) for k in shifts]
        lat = BruteLattice(delta.gens)
        fails = [
            p for p in itertools.product(range(-3, 4), repeat=n)
            if p > (0,) * n or not any(p)
            if not any(
                (d := tuple(a - b for a, b in zip(p, r))) >= (0,) * n and d in lat
                for r in reps
            )
        ]
        check = brute_cover_verify(delta, reps, Box(3))
        assert check.ok == (not fails)
        if fails:
            assert check.counterexample == min(fails, key=lambda p: (sum(map(abs, p)), p))


class TestBfs:
    frame = Frame(((0, 1), (1, 0)))

    def test_already_divisible(self):
        assert pmt_bfs(self.frame, (1, 0), (2, 1)) == []

    def test_worked_instance(self):
        assert pmt_bfs(self.frame, (2, 0), (0, 1)) == [(0, 1), (0, 1)]

    def test_depth_one_not_enough(self):
        with pytest.raises(NotFound):
            pmt_bfs(self.frame, (2, 0), (0, 1), depth=1)
