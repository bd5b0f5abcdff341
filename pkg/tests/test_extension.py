import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import random_subgroup, subgroups
from valinv.cli import load_fixture
from valinv.errors import InconsistentFamily, MissingData, NonIntegralDefect, ValidationError
from valinv.extension import (
    DenseRank1,
    ExtensionRecord,
    Lattice,
    Truth,
    defect,
    family_check,
    initial_index_ext,
    degree_chain,
    ramification_index,
    statement_profile,
)
from valinv.lattice import canonicalize, group_index, initial_index
from valinv.oracle import brute_coset_count, stable_brute_epsilon

Z2 = Lattice(canonicalize([(1, 0), (0, 1)]))
THREE_Z2 = Lattice(canonicalize([(3, 0), (0, 3)]))
STRETCH = Lattice(canonicalize([(1, 0), (0, 3)]))


def two_extension_family():
    return [ExtensionRecord.from_json(r) for r in load_fixture("paper-example-8-not-9")["records"]]


class TestRecord:
    def test_validation(self):
        with pytest.raises(ValidationError):
            ExtensionRecord(Z2, f=0)
        with pytest.raises(ValidationError):
            ExtensionRecord(Z2, hensel_degree=4, lk_degree=3)
        with pytest.raises(ValidationError):
            ExtensionRecord(Z2, external={3: True})
        with pytest.raises(ValidationError):
            DenseRank1(0)

    def test_json_round_trip(self):
        rec = ExtensionRecord(STRETCH, f=2, hensel_degree=6, lk_degree=6,
                              external={5: True}, name="r")
        again = ExtensionRecord.from_json(json.loads(json.dumps(rec.to_json())))
        assert again == rec


class TestInvariants:
    def test_ramification_index(self):
        assert ramification_index(ExtensionRecord(Z2)) == 1
        assert ramification_index(ExtensionRecord(DenseRank1(2))) == 2
        assert ramification_index(ExtensionRecord(STRETCH)) == 3
        assert brute_coset_count(STRETCH.delta.gens) == 3

    def test_initial_index(self):
        assert initial_index_ext(ExtensionRecord(DenseRank1(2))) == 1
        assert initial_index_ext(ExtensionRecord(THREE_Z2)) == 3
        assert stable_brute_epsilon(THREE_Z2.delta) == 3
        assert initial_index_ext(ExtensionRecord(Lattice(canonicalize([(1,)])))) == 1

    def test_defect(self):
        assert defect(ExtensionRecord(STRETCH, f=2, hensel_degree=6)) == 1
        assert defect(ExtensionRecord(Z2, f=1, hensel_degree=3)) == 3
        with pytest.raises(NonIntegralDefect):
            defect(ExtensionRecord(DenseRank1(2), f=1, hensel_degree=3))
        with pytest.raises(MissingData):
            defect(ExtensionRecord(Z2))

    @given(st.integers(1, 6), st.integers(1, 4), st.integers(1, 60))
    def test_defect_contract(self, e, f, hensel):
        rec = ExtensionRecord(DenseRank1(e), f=f, hensel_degree=hensel)
        if hensel % (e * f):
            with pytest.raises(NonIntegralDefect):
                defect(rec)
        else:
            d = defect(rec)
            assert d >= 1 and e * f * d == hensel


class TestProfile:
    def test_trivial_extension(self):
        p = statement_profile(ExtensionRecord(Z2, f=1, hensel_degree=1))
        assert all(p[k] is Truth.TRUE for k in (3, 4, 7, 8))
        assert p[1] is Truth.UNDECIDED

    def test_dense_ramified(self):
        p = statement_profile(ExtensionRecord(DenseRank1(2), f=1, hensel_degree=2))
        assert p[7] is Truth.FALSE and p[4] is Truth.FALSE
        assert (p.epsilon, p.e, p.d) == (1, 2, 1)

    def test_scaled_lattice(self):
        p = statement_profile(ExtensionRecord(THREE_Z2, f=1, hensel_degree=9))
        assert p[8] is Truth.FALSE
        assert (p.epsilon, p.e, p.d) == (3, 9, 1)

    def test_undecided_without_degree(self):
        p = statement_profile(ExtensionRecord(STRETCH))
        assert p[7] is Truth.TRUE and p[8] is Truth.UNDECIDED
        assert statement_profile(ExtensionRecord(THREE_Z2))[8] is Truth.FALSE

    def test_defect_propagates(self):
        with pytest.raises(NonIntegralDefect):
            statement_profile(ExtensionRecord(STRETCH, hensel_degree=4))

    def test_dim_and_json(self):
        p = statement_profile(ExtensionRecord(STRETCH, f=2, hensel_degree=6))
        assert p.dim == 6
        out = p.to_json()
        assert out["statement_3_route"] == "via semigroup criterion"
        assert out["cover"] == [[0, 0], [0, 1], [0, 2]]

    @given(subgroups(), st.integers(1, 3), st.integers(1, 3))
    def test_coherence(self, delta, f, d):
        e = group_index(delta)
        p = statement_profile(ExtensionRecord(Lattice(delta), f=f, hensel_degree=e * f * d))
        assert p[3] is p[4] is p[7]
        assert (p[8] is Truth.TRUE) == (p[7] is Truth.TRUE and d == 1)

    def test_degree_chain(self):
        assert degree_chain(ExtensionRecord(STRETCH, f=2, hensel_degree=6, lk_degree=6))
        assert not degree_chain(ExtensionRecord(STRETCH, f=2, hensel_degree=6, lk_degree=7))
        assert not degree_chain(ExtensionRecord(THREE_Z2, f=1, hensel_degree=9))


class TestFamily:
    def test_two_extension_family(self):
        recs = two_extension_family()
        assert [ramification_index(r) for r in recs] == [1, 2]
        assert [initial_index_ext(r) for r in recs] == [1, 1]
        assert [r.f for r in recs] == [1, 1]
        assert [defect(r) for r in recs] == [1, 1]
        report = family_check(recs)
        assert report.profiles[0][8] is Truth.TRUE
        assert report.s9 is Truth.FALSE
        assert [v["arrow"] for v in report.violations] == ["5 ⇔ 9"]
        with pytest.raises(InconsistentFamily) as info:
            family_check(recs, strict=True)
        assert info.value.violations[0]["arrow"] == "5 ⇔ 9"

    def test_trivial_family(self):
        rec = ExtensionRecord(Z2, f=1, hensel_degree=1, lk_degree=1,
                              external={1: True, 2: True, 5: True, 6: True})
        report = family_check([rec], strict=True)
        assert report.consistent and report.s9 is Truth.TRUE

    def test_necessity_arrow(self):
        rec = ExtensionRecord(THREE_Z2, f=1, hensel_degree=9, external={1: True})
        report = family_check([rec])
        assert [v["arrow"] for v in report.violations] == ["1 ⇒ 8"]

    def test_degree_identity(self):
        rec = ExtensionRecord(STRETCH, f=1, hensel_degree=3, lk_degree=4, external={6: True})
        arrows = [v["arrow"] for v in family_check([rec]).violations]
        assert "6 ⇒ lk_degree = epsilon*f" in arrows

    def test_other_arrows(self):
        recs = [ExtensionRecord(Z2, f=1, hensel_degree=1, lk_degree=2,
                                external={5: True, 6: False, 1: False, 2: False})]
        arrows = {v["arrow"] for v in family_check(recs).violations}
        assert arrows == {"5 ⇔ 6", "6 ⇔ 9", "5 ⇒ 1", "2 ⇔ 3"}

    def test_conflicts_across_records(self):
        recs = [ExtensionRecord(Z2, hensel_degree=1, lk_degree=2, external={5: True}),
                ExtensionRecord(Z2, hensel_degree=1, lk_degree=3, external={5: False})]
        arrows = {v["arrow"] for v in family_check(recs).violations}
        assert arrows == {"conflicting assertions of 5", "shared lk_degree"}

    def test_empty(self):
        with pytest.raises(ValidationError):
            family_check([])

    @given(st.integers(0, 2**32 - 1))
    def test_sound_on_consistent_families(self, seed):
        # assertions chosen to obey every proven implication never trigger a report
        rng = random.Random(seed)
        recs = []
        for _ in range(rng.randint(1, 3)):
            delta = random_subgroup(rng, rng.randint(1, 3), -4, 4)
            f, d = rng.randint(1, 3), rng.choice([1, 1, 2])
            e = group_index(delta)
            graded = initial_index(delta) == e
            good = graded and d == 1
            ext = {2: graded}
            if rng.random() < 0.5:
                ext[1] = good and rng.random() < 0.5
            recs.append((delta, f, e * f * d, ext, good))
        s9 = all(r[4] for r in recs)
        lk = sum(r[2] for r in recs)
        family = []
        for delta, f, h, ext, _ in recs:
            ext = dict(ext)
            ext[5] = ext[6] = s9
            if s9:
                ext[1] = True
            family.append(ExtensionRecord(Lattice(delta), f=f, hensel_degree=h,
                                          lk_degree=lk, external=ext))
        if len(family) == 1 and s9:
            delta, f = recs[0][0], recs[0][1]
            family = [ExtensionRecord(Lattice(delta), f=f, hensel_degree=recs[0][2],
                                      lk_degree=initial_index(delta) * f,
                                      external=family[0].external)]
        assert family_check(family, strict=True).consistent
