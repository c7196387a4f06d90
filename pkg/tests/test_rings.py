"""Formal word calculus, the verification suites, and the quadruple ring."""

import random

import pytest

from cubefunc.domains import Z_HALF, ZZ
from cubefunc.functors import builtin, extract_diagram
from cubefunc.matrix import Mat
from cubefunc.rings import (
    BRingElement,
    Expr,
    H,
    H1,
    H2,
    ID1,
    ID2,
    ID3,
    P,
    P1,
    P2,
    a11_subring,
    a_alt_algebra_dimension,
    cubic_relations,
    verify_A_alt_structure,
    verify_prop31_identities,
    verify_relations,
    word_type,
)


@pytest.fixture(scope="module")
def rep():
    from cubefunc.faithful import shared_representation

    return shared_representation()


def test_word_typing():
    assert word_type(("h",)) == (1, 2)
    assert word_type(("h1", "h")) == (1, 3)
    assert word_type(("p", "p1")) == (3, 1)
    with pytest.raises(ValueError):
        word_type(("h", "h"))


def test_expr_algebra():
    x = H1 * H - H2 * H
    assert (x + x).terms == x.scale(2).terms
    assert (x - x).terms == {}
    assert (2 * x).terms == (x * 2).terms


def test_evaluate_is_multiplicative(rep):
    rng = random.Random(7)
    gens_by_type = {}
    for g in ("h", "p", "h1", "h2", "p1", "p2", "id1", "id2", "id3"):
        gens_by_type.setdefault(word_type((g,)), []).append(Expr.gen(g))
    atoms = [e for lst in gens_by_type.values() for e in lst]
    for _ in range(25):
        f = rng.choice(atoms)
        src, mid = word_type(next(iter(f.terms)))
        comps = [g for g in atoms if word_type(next(iter(g.terms)))[0] == mid]
        g = rng.choice(comps)
        lhs = rep.eval(g * f)
        rhs = rep.eval(g) * rep.eval(f)
        assert lhs == rhs


def test_relations_hold_on_builtin():
    d = extract_diagram(builtin("sym3"))
    ok, report = verify_relations(d)
    assert ok, report


def test_relations_detect_perturbation():
    d = extract_diagram(builtin("sym3"))
    m = d.maps()["h1"].matrix
    m2 = Mat(ZZ, [row[:] for row in m.a])
    m2.a[0][0] = ZZ.add(m2.a[0][0], 1)
    from cubefunc.functors import CubicDiagram

    tampered = CubicDiagram.from_matrices(
        ZZ,
        h=d.maps()["h"].matrix,
        p=d.maps()["p"].matrix,
        h1=m2,
        h2=d.maps()["h2"].matrix,
        p1=d.maps()["p1"].matrix,
        p2=d.maps()["p2"].matrix,
    )
    ok, report = verify_relations(tampered)
    assert not ok


def test_relation_list_char2_drops_doubles():
    plain = {n: (l, r) for n, l, r in cubic_relations(char2=False)}
    char2 = {n: (l, r) for n, l, r in cubic_relations(char2=True)}
    assert set(plain) == set(char2)
    # the doubled right-hand sides collapse to zero in characteristic 2
    l, r = char2["h1*p1*h1 = 2h1"]
    assert r.terms == {}
    assert plain["h1*p1*h1 = 2h1"][1].terms != {}


class TestCornerSuites:
    """The three heavyweight identity suites, run once each."""

    def test_level1_corner(self):
        report = a11_subring()
        assert report["ok"], {k: v for k, v in report.items() if v is False}
        assert report["a^2 = 2a"]
        assert report["b^2 = 6b"]
        assert report["ab = 0"] and report["ba = 0"]
        assert report["corner rank 3"]
        assert report["{1,a,b} spans the corner"]
        assert report["multiplication table matches Z^3 span"]
        # the unshifted product ph does not satisfy the quadratic of b
        assert report["(ph)^2 = 6(ph) fails"]

    def test_halved_identities(self):
        report = verify_prop31_identities()
        assert report["ok"], {k: v for k, v in report.items() if v is False}
        for lvl in (1, 2, 3):
            assert report[f"level {lvl} basis is independent"]
            assert report[f"level {lvl} basis spans the corner"]

    def test_annihilated_level1_quotient(self):
        report = verify_A_alt_structure()
        assert report["ok"], {k: v for k, v in report.items() if v is False}
        assert report["theta != 0"] and report["2*theta = 0"]
        assert report["xi*eta = theta"] and report["eta*xi = 0"]
        assert report["corner table matches congruence order"]

    def test_quotient_dimension(self):
        assert a_alt_algebra_dimension() == 18


class TestQuadrupleRing:
    def test_congruence_rejection(self):
        with pytest.raises(ValueError):
            BRingElement(1, 0, 0, 0)
        with pytest.raises(ValueError):
            BRingElement(0, [[0, 1], [0, 0]], 0, 0)
        # 3-divisible off-diagonal and matching diagonals are fine
        BRingElement(1, [[1, 3], [5, 2]], [[2, 0], [0, 1]], 4)

    def test_idempotents(self):
        e1, e2, e3 = BRingElement.idempotents()
        one = BRingElement.one()
        assert e1 * e1 == e1 and e2 * e2 == e2 and e3 * e3 == e3
        assert (e1 + e2 + e3) == one
        for x, y in ((e1, e2), (e1, e3), (e2, e3)):
            assert (x * y).is_zero() and (y * x).is_zero()

    def test_nilpotent_offdiagonal(self):
        n = BRingElement(0, [[0, 3], [0, 0]], 0, 0)
        assert (n * n).is_zero()

    def test_ring_axioms_random(self):
        rng = random.Random(11)

        def rand():
            a = rng.randrange(-6, 7)
            b11 = a + 3 * rng.randrange(-2, 3)
            b22 = rng.randrange(-6, 7)
            c11 = b22 + 3 * rng.randrange(-2, 3)
            c22 = rng.randrange(-6, 7)
            d = c22 + 3 * rng.randrange(-2, 3)
            B = [[b11, 3 * rng.randrange(-2, 3)], [rng.randrange(-6, 7), b22]]
            C = [[c11, 3 * rng.randrange(-2, 3)], [rng.randrange(-6, 7), c22]]
            return BRingElement(a, B, C, d)

        for _ in range(50):
            x, y, z = rand(), rand(), rand()
            assert (x + y) * z == x * z + y * z
            assert x * (y * z) == (x * y) * z
            assert x * BRingElement.one() == x
