import random
from fractions import Fraction

import pytest

from cubefunc.domains import ZZ, GF2, GF3, GF, Zloc, Zmod, Z_HALF, Domain
from cubefunc.matrix import (
    Mat,
    smith_normal_form,
    invariant_factors,
    rank,
    kernel,
    solve,
    inverse,
    column_hermite,
    in_column_lattice,
    lattice_equal,
    det,
)


def check_snf(m):
    u, s, v = smith_normal_form(m)
    d = m.dom
    assert u * m * v == s
    assert inverse(u) is not None
    assert inverse(v) is not None
    diag = [s.a[i][i] for i in range(min(s.rows, s.cols))]
    for i in range(s.rows):
        for j in range(s.cols):
            if i != j:
                assert d.is_zero(s.a[i][j])
    # divisibility chain and canonical associates
    for i in range(len(diag) - 1):
        if not d.is_zero(diag[i]):
            assert d.divides(diag[i], diag[i + 1])
        else:
            assert d.is_zero(diag[i + 1])
    for x in diag:
        assert x == d.canonical_associate(x)
    return diag


def test_snf_basic_integer():
    m = Mat(ZZ, [[2, 4], [6, 8]])
    diag = check_snf(m)
    # oracle: d1 = gcd of entries = 2, d1*d2 = |det| = 8
    assert diag == [2, 4]


def test_snf_already_diagonal():
    m = Mat(ZZ, [[2, 0], [0, 6]])
    assert check_snf(m) == [2, 6]


def test_snf_needs_divisibility_fix():
    m = Mat(ZZ, [[2, 0], [0, 3]])
    assert check_snf(m) == [1, 6]


def test_snf_zero_and_empty():
    assert check_snf(Mat.zeros(ZZ, 3, 2)) == [0, 0]
    u, s, v = smith_normal_form(Mat.zeros(ZZ, 0, 3))
    assert s.rows == 0 and s.cols == 3


def test_snf_random_integer():
    rng = random.Random(7)
    for _ in range(40):
        r = rng.randint(1, 5)
        c = rng.randint(1, 5)
        m = Mat(ZZ, [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)])
        check_snf(m)


def test_invariant_factors_basis_invariant():
    rng = random.Random(11)
    for _ in range(20):
        m = Mat(ZZ, [[rng.randint(-5, 5) for _ in range(3)] for _ in range(3)])
        # unimodular transforms must not change the invariant factors
        p = Mat(ZZ, [[1, rng.randint(-3, 3), 0], [0, 1, 0], [rng.randint(-3, 3), 0, 1]])
        q = Mat(ZZ, [[1, 0, 0], [rng.randint(-3, 3), 1, 0], [0, rng.randint(-3, 3), 1]])
        assert invariant_factors(p * m * q) == invariant_factors(m)


def test_snf_gf2():
    m = Mat(GF2, [[1, 1], [1, 0]])
    diag = check_snf(m)
    assert diag == [1, 1]
    assert rank(m) == 2


def test_snf_gf3_and_extension():
    # second row is twice the first mod 3
    m = Mat(GF3, [[1, 2, 0], [2, 1, 0]])
    assert rank(m) == 1
    assert rank(Mat(GF3, [[1, 2], [2, 2]])) == 2
    g = GF(4)
    a = g.canon((0, 1))
    m4 = Mat(g, [[a, 1], [1, a]])
    # a^2 + a + 1 = 0 in GF(4), so det = a^2 - 1 = a, nonzero
    assert rank(m4) == 2


def test_snf_localized_at_2():
    d = Zloc(2)
    m = Mat(d, [[6, 0], [0, Fraction(4, 3)]])
    diag = check_snf(m)
    # 6 is 2 times a unit, 4/3 is 4 times a unit
    assert diag == [Fraction(2), Fraction(4)]


def test_snf_z_half():
    m = Mat(Z_HALF, [[6, 0], [0, Fraction(5, 2)]])
    diag = check_snf(m)
    assert diag == [Fraction(1), Fraction(15)]


def test_solve_and_kernel_integer():
    m = Mat(ZZ, [[2, 4], [6, 8]])
    b = Mat.column(ZZ, [2, 6])
    x = solve(m, b)
    assert x is not None and m * x == b
    # 2x + 4y = 1 has no integer solution
    assert solve(m, Mat.column(ZZ, [1, 0])) is None
    k = kernel(Mat(ZZ, [[1, 2, 3]]))
    assert k.cols == 2
    assert (Mat(ZZ, [[1, 2, 3]]) * k).is_zero()


def test_kernel_gf2():
    m = Mat(GF2, [[1, 1, 0], [0, 0, 1]])
    k = kernel(m)
    assert k.cols == 1
    assert (m * k).is_zero()


def test_inverse():
    m = Mat(ZZ, [[1, 2], [0, 1]])
    mi = inverse(m)
    assert m * mi == Mat.identity(ZZ, 2)
    assert inverse(Mat(ZZ, [[2, 0], [0, 1]])) is None
    assert inverse(Mat(GF3, [[2, 0], [0, 1]])) is not None


def test_column_hermite_lattice():
    m = Mat(ZZ, [[2, 4], [6, 8]])
    h = column_hermite(m)
    assert lattice_equal(m, h)
    # lattice membership
    assert in_column_lattice(m, Mat.column(ZZ, [2, 6]))
    assert not in_column_lattice(m, Mat.column(ZZ, [1, 0]))


def test_column_hermite_random_lattice_equality():
    rng = random.Random(3)
    for _ in range(25):
        m = Mat(ZZ, [[rng.randint(-6, 6) for _ in range(4)] for _ in range(3)])
        h = column_hermite(m)
        assert lattice_equal(m, h)
        # hermite of hermite is identical (canonical)
        assert column_hermite(h) == h


def test_det():
    assert det(Mat(ZZ, [[2, 4], [6, 8]])) == -8
    assert det(Mat(GF3, [[2, 1], [1, 2]])) == 0
    assert det(Mat(ZZ, [[1]])) == 1


def test_kron_and_direct_sum():
    a = Mat(ZZ, [[1, 2]])
    b = Mat(ZZ, [[0, 1], [1, 0]])
    k = Mat.kron(a, b)
    assert k.rows == 2 and k.cols == 4
    assert k == Mat(ZZ, [[0, 1, 0, 2], [1, 0, 2, 0]])
    s = Mat.direct_sum(ZZ, [a, b])
    assert s.rows == 3 and s.cols == 4


def test_json_round_trip():
    for m in [
        Mat(ZZ, [[1, -2], [3, 4]]),
        Mat(Zloc(2), [[Fraction(1, 3)]]),
        Mat(GF(4), [[(1, 1), (0, 1)]]),
    ]:
        assert Mat.from_json(m.to_json()) == m


def test_composite_modulus_snf_unsupported():
    from cubefunc.domains import UnsupportedDomainError

    m = Mat(Zmod(4), [[2]])
    with pytest.raises(UnsupportedDomainError):
        smith_normal_form(m)


def test_gf4_field_arithmetic():
    g = GF(4)
    a = g.canon((0, 1))
    # x^2 = x + 1 for the standard reduction polynomial
    assert g.mul(a, a) == g.add(a, g.one())
    assert g.mul(a, g.inv(a)) == g.one()
