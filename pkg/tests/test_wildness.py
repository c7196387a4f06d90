"""Restriction along a -> 2x1, b -> 2x2 and the induced cubic diagrams."""

import random

import pytest

from cubefunc.rings import verify_relations
from cubefunc.wildness import (
    A11Module,
    SigmaModule,
    bimodule_N,
    brute_force_a11_iso,
    indecomposable_mod2,
    induce_cubic,
    iso_test_mod2,
    phi_restrict,
    regular_a11_module,
)


def rand_sigma(rng, rank, n=2):
    action = [
        [[rng.randrange(4) for _ in range(rank)] for _ in range(rank)]
        for _ in range(n)
    ]
    return SigmaModule(n, rank, action)


def test_restrict_trivial():
    l = SigmaModule(2, 1, [[[0]], [[0]]])
    m = phi_restrict(l)
    assert m.a.is_zero() and m.b.is_zero()


def test_restrict_identity_scalar():
    l = SigmaModule(2, 1, [[[1]], [[0]]])
    m = phi_restrict(l)
    assert m.a.a == [[2]]
    # 2a = 4 = 0 on Z/4, matching a^2 = 4
    ok, bad = m.verify()
    assert ok, bad


def test_restrict_jordan():
    l = SigmaModule(2, 2, [[[0, 1], [0, 0]], [[0, 0], [0, 0]]])
    m = phi_restrict(l)
    assert m.a.a == [[0, 2], [0, 0]]


def test_restrict_rejects_wrong_generator_count():
    with pytest.raises(ValueError):
        phi_restrict(SigmaModule(1, 1, [[[0]]]))


def test_operator_identities_enforced():
    from cubefunc.domains import ZZ
    from cubefunc.matrix import Mat
    from cubefunc.presentation import FpPresentation

    pres = FpPresentation.free(ZZ, 1)
    with pytest.raises(ValueError):
        A11Module(pres, Mat(ZZ, [[1]]), Mat(ZZ, [[0]]))


class TestInduction:
    def test_regular_module(self):
        d = induce_cubic(regular_a11_module())
        assert d.F1.invariant_factors() == ([], 3)
        assert d.F2.invariant_factors() == ([], 3)
        assert d.F3.invariant_factors() == ([], 1)
        ok, report = verify_relations(d)
        assert ok, report

    def test_trivial_restriction(self):
        l = SigmaModule(2, 1, [[[0]], [[0]]])
        d = induce_cubic(phi_restrict(l))
        assert d.F1.invariant_factors() == ([(4, 1)], 0)
        assert d.F2.invariant_factors() == ([(2, 2)], 0)
        assert d.F3.invariant_factors() == ([(2, 1)], 0)
        assert verify_relations(d)[0]

    def test_random_restrictions_satisfy_relations(self):
        rng = random.Random(3)
        for _ in range(5):
            l = rand_sigma(rng, rng.randrange(1, 3))
            d = induce_cubic(phi_restrict(l))
            assert verify_relations(d)[0]

    def test_zero_module(self):
        from cubefunc.domains import ZZ
        from cubefunc.matrix import Mat
        from cubefunc.presentation import FpPresentation

        zero = A11Module(
            FpPresentation.zero(ZZ), Mat.zeros(ZZ, 0, 0), Mat.zeros(ZZ, 0, 0)
        )
        d = induce_cubic(zero)
        assert d.F1.is_zero_module() and d.F2.is_zero_module() and d.F3.is_zero_module()


class TestBimodule:
    def test_small_patterns(self):
        n1 = bimodule_N(1)
        assert str(n1.x2[1][0]) == "x1"
        assert n1.x2[0][0].is_zero() and n1.x2[0][1].is_zero()
        n2 = bimodule_N(2)
        assert n2.rank == 3
        assert str(n2.x2[1][0]) == "x1" and str(n2.x2[2][1]) == "x2"

    def test_x1_is_jordan(self):
        n = bimodule_N(3)
        for i in range(n.rank):
            for j in range(n.rank):
                expect_one = j == i + 1
                entry = n.x1[i][j]
                assert entry.terms == ({(): 1} if expect_one else {})

    def test_generators_free(self):
        for n in (1, 2, 3):
            assert bimodule_N(n).generators_independent()


class TestIsoTest:
    def test_self_iso(self):
        rng = random.Random(5)
        l = rand_sigma(rng, 2)
        v = iso_test_mod2(l, l)
        assert v.isomorphic is True
        assert v.witness is not None

    def test_scalar_distinction(self):
        l0 = SigmaModule(2, 1, [[[0]], [[0]]])
        l1 = SigmaModule(2, 1, [[[1]], [[0]]])
        assert iso_test_mod2(l0, l1).isomorphic is False

    def test_jordan_vs_zero(self):
        lj = SigmaModule(2, 2, [[[0, 1], [0, 0]], [[0, 0], [0, 0]]])
        lz = SigmaModule(2, 2, [[[0, 0], [0, 0]], [[0, 0], [0, 0]]])
        assert iso_test_mod2(lj, lz).isomorphic is False

    def test_witness_conjugates(self):
        import numpy as np

        rng = random.Random(9)
        l = rand_sigma(rng, 3)
        u = np.array([[1, 1, 0], [0, 1, 0], [1, 0, 1]], dtype=np.uint8)
        conj = []
        uinv = np.array([[1, 1, 0], [0, 1, 0], [1, 1, 1]], dtype=np.uint8)
        # build an explicit conjugate pair over GF(2) lifted back to Z/4
        mats2 = l.mod2_action()
        assert np.array_equal((u @ uinv) % 2, np.eye(3, dtype=np.uint8))
        for m in mats2:
            conj.append(((u @ m @ uinv) % 2).tolist())
        lc = SigmaModule(2, 3, conj)
        v = iso_test_mod2(l, lc)
        assert v.isomorphic is True

    def test_matches_brute_force(self):
        rng = random.Random(17)
        pool = [rand_sigma(rng, rng.choice((1, 2))) for _ in range(10)]
        for i in range(len(pool)):
            for j in range(i, len(pool)):
                quick = iso_test_mod2(pool[i], pool[j])
                if pool[i].rank != pool[j].rank:
                    continue
                brute = brute_force_a11_iso(
                    phi_restrict(pool[i]), phi_restrict(pool[j])
                )
                assert quick.isomorphic == brute.isomorphic, (i, j)


def test_indecomposability_matches_mod2():
    lj = SigmaModule(2, 2, [[[0, 1], [0, 0]], [[0, 0], [0, 0]]])
    assert indecomposable_mod2(lj)
    ld = SigmaModule(2, 2, [[[1, 0], [0, 0]], [[0, 0], [0, 0]]])
    assert not indecomposable_mod2(ld)
