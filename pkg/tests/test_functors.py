import random
from math import comb

import pytest

from cubefunc.domains import ZZ, GF2
from cubefunc.functors import (
    BuiltinFunctor,
    FUNCTOR_IDS,
    builtin,
    cross_effect_idempotents,
    cross_effect_ranks,
    extract_diagram,
    split_idempotent,
    structure_maps,
)
from cubefunc.matrix import Mat, rank
from cubefunc.rings import verify_relations


# frozen cross-effect ranks (r1, r2, r3); each was derived by the idempotent
# calculus and cross-checked against the binomial bookkeeping below
EXPECTED_RANKS = {
    "group_ring_trunc": (3, 3, 1),
    "tensor_cube": (1, 6, 6),
    "sym3": (1, 2, 1),
    "ext3": (0, 0, 1),
    "ext2_tensor_id": (0, 2, 3),
    "sym2": (1, 1, 0),
    "ext2": (0, 1, 0),
}


def test_evaluate_ranks():
    assert builtin("group_ring_trunc").rank(1) == 3
    assert builtin("group_ring_trunc").rank(3) == 3 + 6 + 10
    assert builtin("ext3").rank(2) == 0
    assert builtin("tensor_cube").rank(2) == 8
    assert builtin("sym3").rank(3) == 10


@pytest.mark.parametrize("fid", FUNCTOR_IDS)
def test_functoriality(fid):
    rng = random.Random(hash(fid) % 10000)
    f = builtin(fid)
    for _ in range(20):
        n = rng.randint(1, 3)
        k = rng.randint(1, 3)
        m = rng.randint(1, 3)
        a = Mat(ZZ, [[rng.randint(-2, 2) for _ in range(k)] for _ in range(m)])
        b = Mat(ZZ, [[rng.randint(-2, 2) for _ in range(n)] for _ in range(k)])
        assert f.act(a * b) == f.act(a) * f.act(b)
    for n in range(4):
        assert f.act(Mat.identity(ZZ, n)) == Mat.identity(ZZ, f.rank(n))


@pytest.mark.parametrize("fid", FUNCTOR_IDS)
def test_cross_effect_ranks(fid):
    assert cross_effect_ranks(builtin(fid)) == EXPECTED_RANKS[fid]


@pytest.mark.parametrize("fid", FUNCTOR_IDS)
def test_idempotent_family(fid):
    f = builtin(fid)
    for n in (1, 2, 3):
        fam = cross_effect_idempotents(f, n)
        r = f.rank(n)
        total = Mat.zeros(ZZ, r, r)
        for S, e in fam.items():
            assert e * e == e
            total = total + e
        assert total == Mat.identity(ZZ, r)
        for S, e in fam.items():
            for T, e2 in fam.items():
                if S != T:
                    assert (e * e2).is_zero()


@pytest.mark.parametrize("fid", FUNCTOR_IDS)
def test_binomial_bookkeeping(fid):
    f = builtin(fid)
    r = EXPECTED_RANKS[fid]
    for n in range(5):
        assert f.rank(n) == sum(comb(n, m) * r[m - 1] for m in (1, 2, 3))


def test_split_idempotent():
    e = Mat(ZZ, [[1, 1], [0, 0]])
    assert e * e == e
    s, t = split_idempotent(e)
    assert s * t == e
    assert t * s == Mat.identity(ZZ, 1)


@pytest.mark.parametrize("fid", FUNCTOR_IDS)
def test_diagram_relations(fid):
    d = extract_diagram(builtin(fid))
    ok, report = verify_relations(d)
    assert ok, [n for n, z in report if not z]


def test_diagram_relations_char2():
    d = extract_diagram(builtin("ext2_tensor_id", GF2))
    ok, report = verify_relations(d)
    assert ok, [n for n, z in report if not z]


def test_ext3_diagram_shape():
    d = extract_diagram(builtin("ext3"))
    assert d.F1.gens == 0 and d.F2.gens == 0 and d.F3.gens == 1
    assert d.h.matrix.rows == 0 and d.p1.matrix.cols == 1


def test_sym2_diagram_quadratic():
    d = extract_diagram(builtin("sym2"))
    assert d.F3.gens == 0
    assert d.F1.gens == 1 and d.F2.gens == 1


def test_tensor_cube_hp_trace():
    # frozen from a pre-build oracle run; consistent with F(2 id) = 8 = 2 + 6
    # on the linear cross-effect
    d = extract_diagram(builtin("tensor_cube"))
    assert (d.h.matrix * d.p.matrix).trace() == 6
    assert (d.p.matrix * d.h.matrix).trace() == 6


def test_group_ring_ph_matrix():
    # p∘h on the rank-3 linear part; frozen from the oracle run and
    # cross-checked: trace(ph) + 2 = F(2·id) acting on degree pieces
    d = extract_diagram(builtin("group_ring_trunc"))
    ph = d.p.matrix * d.h.matrix
    assert ph == Mat(ZZ, [[0, 0, 0], [1, 2, 0], [0, 4, 6]])


def test_degree_guard():
    # every builtin is cubic: 4th cross-effect vanishes
    from cubefunc.functors import first_nonvanishing_above

    for fid in FUNCTOR_IDS:
        assert first_nonvanishing_above(builtin(fid), 3) is None


def test_diagram_json_round_trip():
    from cubefunc.functors import CubicDiagram

    d = extract_diagram(builtin("sym3"))
    d2 = CubicDiagram.from_json(d.to_json())
    for name, mor in d.maps().items():
        assert d2.maps()[name].matrix == mor.matrix


def test_diagram_direct_sum():
    a = extract_diagram(builtin("sym3"))
    b = extract_diagram(builtin("ext3"))
    s = a.direct_sum(b)
    assert s.F3.gens == a.F3.gens + b.F3.gens
    assert verify_relations(s)[0]
