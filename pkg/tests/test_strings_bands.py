import pytest

from cubefunc.domains import Z_HALF
from cubefunc.strings_bands import (
    BandData3,
    BModuleDiagram,
    StringDiagram3,
    WordDatum4,
    build_band_module,
    build_named,
    build_string_module,
    build_W,
    indecomposability_probe,
    irreducible_torsion_free,
    projective_diagram,
    reversal_intertwiner,
)


def inv(m):
    """Per-level invariant factors as plain ints plus the free rank."""
    return tuple(
        (tuple(int(p) for p, e in tors for _ in range(e)), free)
        for tors, free in m.invariant_factors()
    )


def diagram_inv(d):
    return tuple(
        (tuple(int(p) for p, e in tors for _ in range(e)), free)
        for tors, free in (lvl.invariant_factors() for lvl in (d.F1, d.F2, d.F3))
    )


# ---------------------------------------------------------------------------
# projectives and irreducible torsion-free diagrams
# ---------------------------------------------------------------------------


FREE_RANKS = {
    1: (2, 1, 0),
    2: (1, 2, 1),
    3: (0, 1, 2),
}

L_RANKS = {
    1: (1, 0, 0),
    2: (1, 1, 0),
    3: (1, 1, 0),
    4: (0, 1, 1),
    5: (0, 1, 1),
    6: (0, 0, 1),
}


@pytest.mark.parametrize("c", [1, 2, 3])
def test_projective_diagrams(c):
    d = projective_diagram(c)
    ok, checks = d.verify_relations()
    assert ok, checks
    assert inv(d) == tuple(((), r) for r in FREE_RANKS[c])


@pytest.mark.parametrize("i", range(1, 7))
def test_irreducible_torsion_free(i):
    d = irreducible_torsion_free(i)
    ok, checks = d.verify_relations()
    assert ok, checks
    assert inv(d) == tuple(((), r) for r in L_RANKS[i])


def test_relation_check_rejects_bad_diagram():
    p = projective_diagram(2)
    bad = p.a1.matrix.scale(2)
    with pytest.raises(ValueError):
        BModuleDiagram.from_matrices(
            Z_HALF,
            tuple(m.gens for m in p.modules()),
            bad,
            p.b1.matrix,
            p.a2.matrix,
            p.b2.matrix,
        )


# ---------------------------------------------------------------------------
# string diagram data
# ---------------------------------------------------------------------------


def test_string_data_validation():
    with pytest.raises(ValueError):
        StringDiagram3("iv", [1, 2], [1, None], [1, None])
    with pytest.raises(ValueError):
        StringDiagram3("i", [1, 2, 3], [1, 1, 1], [1, 1, 1])
    # partner condition i_2 ~ i_3 fails: 2's partner is 1, not 4
    with pytest.raises(ValueError):
        StringDiagram3("i", [1, 2, 4, 3], [1, 4, 4, None], [1, 0, 1, None])
    # merge-class condition: j_1 must share a class with i_1 = 1
    with pytest.raises(ValueError):
        StringDiagram3("i", [1, 2], [2, None], [1, None])
    with pytest.raises(ValueError):
        StringDiagram3("i", [1, 2], [1, None], [-1, None])


def test_phantom_indices_are_filled_and_flagged():
    d = StringDiagram3("i", [1, 2], [1, None], [1, None])
    assert d.i == [1, 2]
    assert d.synthetic == [2]
    # shape ii with n = 1 has no non-synthetic position to infer from
    with pytest.raises(ValueError):
        StringDiagram3("ii", [None, None], [None, None], [None, None])


def test_reverse_defined_only_for_symmetric_shapes():
    d = StringDiagram3("i", [1, 2], [1, None], [1, None])
    with pytest.raises(ValueError):
        d.reverse()
    s = StringDiagram3("iii", [1, 2, 4, 3], [1, 3, 4, 2], [1, 0, 1, 2])
    assert s.reverse().reverse() == s


# ---------------------------------------------------------------------------
# string modules: frozen invariant factors
# ---------------------------------------------------------------------------


STRING_CASES = [
    # a single generator with no relations gives a projective cover
    (
        StringDiagram3("ii", [1, 2], [None, None], [None, None]),
        (((), 2), ((), 1), ((), 0)),
    ),
    (
        StringDiagram3("i", [1, 2], [1, None], [1, None]),
        (((3,), 1), ((), 1), ((), 0)),
    ),
    (
        StringDiagram3("i", [1, 2, 4, 3], [1, 3, 4, None], [1, 0, 1, None]),
        (((9,), 1), ((9,), 1), ((9,), 0)),
    ),
    (
        StringDiagram3("ii", [None, 2, 4, None], [None, 3, 4, None], [None, 1, 1, None]),
        (((3,), 2), ((3, 9), 1), ((9,), 0)),
    ),
    (
        StringDiagram3("iii", [1, 2, 4, 3], [1, 3, 4, 2], [1, 0, 1, 2]),
        (((9, 9), 0), ((9, 27), 0), ((9,), 0)),
    ),
]


@pytest.mark.parametrize("d,expected", STRING_CASES)
def test_string_module_invariants(d, expected):
    m = build_string_module(d)
    ok, checks = m.verify_relations()
    assert ok, checks
    assert inv(m) == expected


def test_string_free_rank_shapes():
    """The free part of a string module only depends on the shape and the
    outer indices: one irreducible summand per open end, none for shape iii."""
    for i1, i2 in [(1, 2), (2, 1), (3, 4), (4, 3), (5, 6), (6, 5)]:
        d = StringDiagram3("i", [i1, i2], [i1, None], [1, None])
        free = tuple(f for _, f in inv(build_string_module(d)))
        assert free == L_RANKS[i2]


@pytest.mark.parametrize(
    "d",
    [
        StringDiagram3("ii", [None, 2, 4, None], [None, 3, 4, None], [None, 1, 1, None]),
        StringDiagram3("iii", [1, 2, 4, 3], [1, 3, 4, 2], [1, 0, 1, 2]),
    ],
)
def test_reversal_intertwiner(d):
    perms = reversal_intertwiner(d)
    sizes = [p.rows for p in perms]
    m = build_string_module(d)
    assert sizes == [mod.gens for mod in m.modules()]
    # each block map is a permutation of the generator columns
    for p in perms:
        for row in p.a:
            assert sorted(row) == [0] * (p.cols - 1) + [1]


# ---------------------------------------------------------------------------
# band data and band modules
# ---------------------------------------------------------------------------


def test_band_data_validation():
    base = StringDiagram3("iii", [3, 4], [3, 4], [1, 1])
    with pytest.raises(ValueError):
        BandData3(StringDiagram3("ii", [None, None], [2, 3], [0, 0]), [1, 1])
    with pytest.raises(ValueError):
        BandData3(base, [1])  # constant polynomial
    with pytest.raises(ValueError):
        BandData3(base, [0, 1])  # lam_1 = 0
    with pytest.raises(ValueError):
        BandData3(base, [2, 0, 1])  # t^2 + 2 = (t+1)(t+2) is not primary
    # doubling the diagram makes it periodic
    doubled = StringDiagram3("iii", [3, 4, 3, 4], [3, 4, 3, 4], [1, 1, 1, 1])
    with pytest.raises(ValueError):
        BandData3(doubled, [1, 1])


BAND_CASES = [
    (
        BandData3(StringDiagram3("iii", [3, 4], [3, 4], [1, 1]), [1, 1]),
        (((9,), 0), ((9, 9), 0), ((9,), 0)),
    ),
    (
        BandData3(StringDiagram3("iii", [3, 4], [3, 4], [1, 1]), [1, 0, 1]),
        (((9, 9), 0), ((3, 3, 27, 27), 0), ((9, 9), 0)),
    ),
    (
        BandData3(
            StringDiagram3("iii", [3, 4, 2, 1], [2, 4, 3, 1], [1, 0, 1, 1]), [2, 1]
        ),
        (((3, 3, 27), 0), ((9, 9), 0), ((3,), 0)),
    ),
]


@pytest.mark.parametrize("b,expected", BAND_CASES)
def test_band_module_invariants(b, expected):
    m = build_band_module(b)
    ok, checks = m.verify_relations()
    assert ok, checks
    assert m.is_3_power_torsion()
    assert inv(m) == expected


def test_band_shift_invariance():
    b = BandData3(
        StringDiagram3("iii", [3, 4, 2, 1], [2, 4, 3, 1], [1, 0, 1, 1]), [2, 1]
    )
    base = inv(build_band_module(b))
    assert inv(build_band_module(b.shift(1))) == base


def test_band_star_matches_some_shift():
    b = BandData3(
        BAND_CASES[2][0].diagram, BAND_CASES[2][0].poly
    )
    base = inv(build_band_module(b))
    star = b.star()
    shifts = [inv(build_band_module(star.shift(s))) for s in range(b.diagram.n)]
    assert base in shifts


# ---------------------------------------------------------------------------
# named torsion modules
# ---------------------------------------------------------------------------


def test_build_named_values():
    assert inv(build_named(1, 5, 1)) == (((5,), 0), ((), 0), ((), 0))
    assert inv(build_named(4, 7, 2)) == (((), 0), ((49,), 0), ((49,), 0))
    assert diagram_inv(build_named("ext2", 3, 1)) == (((), 0), ((3,), 0), ((), 0))
    assert diagram_inv(build_named("sym2", 3, 2)) == (((9,), 0), ((9,), 0), ((), 0))


def test_build_named_zero_truncation():
    z = build_named(2, 5, 0)
    assert inv(z) == (((), 0), ((), 0), ((), 0))


def test_build_named_rejections():
    with pytest.raises(ValueError):
        build_named(1, 4, 1)  # 4 is not prime
    with pytest.raises(ValueError):
        build_named(1, 3, 1)  # these quotients live away from 3
    with pytest.raises(ValueError):
        build_named(3, 5, 1)  # index must be 1, 2, 4 or 6
    with pytest.raises(ValueError):
        build_named("ext2", 2, 1)
    with pytest.raises(ValueError):
        build_named(1, 5, -1)


# ---------------------------------------------------------------------------
# indecomposability probe
# ---------------------------------------------------------------------------


def test_probe_single_generator_string():
    m = build_string_module(STRING_CASES[0][0])
    for level in (2, 3):
        res = indecomposability_probe(m, level=level)
        assert res.verdict == "indecomposable-at-level"
    assert indecomposability_probe(m, level=3).endo_rank == 2


def test_probe_detects_splitting():
    m = build_string_module(STRING_CASES[0][0])
    res = indecomposability_probe(m.direct_sum(m), level=3)
    assert res.verdict == "splits"
    assert res.endo_rank == 8
    assert res.witness is not None


def test_probe_band_degree_two():
    irr = BandData3(StringDiagram3("iii", [3, 4], [3, 4], [0, 0]), [1, 0, 1])
    sq = BandData3(StringDiagram3("iii", [3, 4], [3, 4], [0, 0]), [1, 2, 1])
    assert indecomposability_probe(build_band_module(irr), level=3).verdict == (
        "indecomposable-at-level"
    )
    assert indecomposability_probe(build_band_module(sq), level=3).verdict == (
        "indecomposable-at-level"
    )


def test_probe_level_matters():
    # this band splits when truncated at 3 but not at 27
    b = BandData3(StringDiagram3("iii", [3, 4], [3, 4], [1, 1]), [1, 0, 1])
    m = build_band_module(b)
    assert indecomposability_probe(m, level=1).verdict == "splits"
    deep = indecomposability_probe(m, level=3)
    assert deep.verdict == "indecomposable-at-level"
    assert deep.endo_rank == 8


# ---------------------------------------------------------------------------
# words over Z_(2)
# ---------------------------------------------------------------------------


def test_word_validation():
    with pytest.raises(ValueError):
        WordDatum4([])
    with pytest.raises(ValueError):
        WordDatum4([("xi", 2), ("xi", 1)])
    with pytest.raises(ValueError):
        WordDatum4([("xi", 0)])
    with pytest.raises(ValueError):
        WordDatum4([("eta", None), ("xi", 1)])  # eta_inf xi
    with pytest.raises(ValueError):
        WordDatum4([("xi", None), ("eta", 2)])  # xi^inf eta
    with pytest.raises(ValueError):
        WordDatum4([("eta", 1), ("xi", 1)])  # eta_1 xi
    # cyclic words: must run xi ... eta, polynomial primary and not t^n
    with pytest.raises(ValueError):
        WordDatum4([("xi", 2), ("eta", 3), ("xi", 1)], poly=[1, 1])
    with pytest.raises(ValueError):
        WordDatum4([("xi", 2), ("eta", 3)], poly=[0, 1])
    with pytest.raises(ValueError):
        WordDatum4([("xi", 2), ("eta", 3)], poly=[1, 0, 0, 1])  # (t+1)(t^2+t+1)
    with pytest.raises(ValueError):
        WordDatum4([("xi", None), ("eta", None)], poly=[1, 1])


def test_word_modules():
    w = build_W(WordDatum4([("xi", None)]))
    assert w.verify() == {"2 xi = 0": True, "2 eta = 0": True, "eta xi = 0": True}
    assert w.torsion_free_rank() == 1

    w = build_W(WordDatum4([("xi", 2), ("eta", 3), ("xi", 1)]))
    assert all(w.verify().values())
    assert w.torsion_free_rank() == 0
    t1, f1 = w.W1.invariant_factors()
    t2, f2 = w.W2.invariant_factors()
    assert (f1, f2) == (0, 0)
    assert [int(p) for p, e in t1 for _ in range(e)] == [2, 4]
    assert [int(p) for p, e in t2 for _ in range(e)] == [8]


def test_cyclic_word_is_torsion():
    w = build_W(
        WordDatum4([("xi", 2), ("eta", 3), ("xi", 1), ("eta", 2)], poly=[1, 1, 1])
    )
    assert all(w.verify().values())
    assert w.torsion_free_rank() == 0
