import random

from cubefunc.domains import ZZ, GF2, Zloc
from cubefunc.matrix import Mat
from cubefunc.presentation import (
    FpPresentation,
    ModuleMorphism,
    compose,
    cokernel,
    direct_sum,
    image,
    kernel,
    morphism_solve,
)


def test_invariant_factors_diagonal():
    p = FpPresentation(ZZ, 2, Mat.diag(ZZ, [2, 6]))
    torsion, free = p.invariant_factors()
    assert torsion == [(2, 1), (6, 1)]
    assert free == 0


def test_free_module():
    p = FpPresentation.free(ZZ, 3)
    assert p.invariant_factors() == ([], 3)


def test_l1_mod_9_localized():
    # rank-2 lattice with basis u=(1,1), v=(0,3) inside Z_(3)^2, modulo 9
    d = Zloc(3)
    rels = Mat(d, [[9, 0], [0, 9]])
    p = FpPresentation(d, 2, rels)
    torsion, free = p.invariant_factors()
    assert free == 0
    assert torsion == [(9, 2)]


def test_kernel_of_identity_is_zero():
    p = FpPresentation(ZZ, 2, Mat.diag(ZZ, [4]) .vstack(Mat.zeros(ZZ, 1, 1)))
    k, incl = kernel(p.identity())
    assert k.is_zero_module()


def test_cokernel_of_times_6():
    z = FpPresentation.free(ZZ, 1)
    f = ModuleMorphism(z, z, Mat(ZZ, [[6]]))
    c, proj = cokernel(f)
    assert c.invariant_factors() == ([(6, 1)], 0)
    # projection is surjective by construction; composite kills the image
    assert compose(proj, f).is_zero()


def test_image_gf2():
    v = FpPresentation.free(GF2, 2)
    f = ModuleMorphism(v, v, Mat(GF2, [[1, 1], [0, 0]]))
    im, incl = image(f)
    assert im.invariant_factors() == ([], 1)
    assert not compose(incl, im.identity()).is_zero()


def test_kernel_universal_property():
    # Z --2--> Z/4: kernel is 2Z
    z = FpPresentation.free(ZZ, 1)
    z4 = FpPresentation(ZZ, 1, Mat(ZZ, [[4]]))
    f = ModuleMorphism(z, z4, Mat(ZZ, [[2]]))
    k, incl = kernel(f)
    assert compose(f, incl).is_zero()
    assert k.invariant_factors() == ([], 1)
    # the kernel generator is 2 in Z
    assert incl.matrix.a[0][0] in (2, -2)


def test_direct_sum_splittings():
    a = FpPresentation(ZZ, 1, Mat(ZZ, [[2]]))
    b = FpPresentation(ZZ, 2, Mat(ZZ, [[3], [0]]))
    s, injs, projs = direct_sum([a, b])
    assert s.invariant_factors()[1] == 1
    for i, (inj, prj) in enumerate(zip(injs, projs)):
        assert compose(prj, inj) == (a if i == 0 else b).identity()
    assert compose(projs[1], injs[0]).is_zero()
    # projection-then-inclusion idempotents reconstruct summands
    e0 = compose(injs[0], projs[0])
    im0, _ = image(e0)
    assert im0.invariant_factors() == a.invariant_factors()


def test_morphism_well_definedness_check():
    z4 = FpPresentation(ZZ, 1, Mat(ZZ, [[4]]))
    z2 = FpPresentation(ZZ, 1, Mat(ZZ, [[2]]))
    # Z/4 -> Z/2 by 1 is fine; Z/2 -> Z/4 by 1 is not
    ModuleMorphism(z4, z2, Mat(ZZ, [[1]]))
    try:
        ModuleMorphism(z2, z4, Mat(ZZ, [[1]]))
        assert False, "ill-defined morphism accepted"
    except ValueError:
        pass
    # but Z/2 -> Z/4 by 2 works
    ModuleMorphism(z2, z4, Mat(ZZ, [[2]]))


def test_morphism_solve():
    z = FpPresentation.free(ZZ, 1)
    z6 = FpPresentation(ZZ, 1, Mat(ZZ, [[6]]))
    f = ModuleMorphism(z, z6, Mat(ZZ, [[2]]))
    # 2x = 4 mod 6 has x = 2
    x = morphism_solve(f, Mat(ZZ, [[4]]))
    assert x is not None
    assert z6.elements_equal(f.matrix * x, Mat(ZZ, [[4]]))
    # 2x = 3 mod 6 has no solution
    assert morphism_solve(f, Mat(ZZ, [[3]])) is None


def test_random_kernel_image_exactness():
    rng = random.Random(5)
    for _ in range(15):
        g = rng.randint(1, 3)
        rels = Mat(ZZ, [[rng.randint(0, 4) for _ in range(2)] for _ in range(g)])
        m = FpPresentation(ZZ, g, rels)
        n = FpPresentation(ZZ, 2, Mat(ZZ, [[rng.randint(0, 6)], [0]]))
        fm = Mat(ZZ, [[rng.randint(-3, 3) for _ in range(g)] for _ in range(2)])
        f = ModuleMorphism(m, n, fm, check=False)
        if not f.is_well_defined():
            continue
        k, incl = kernel(f)
        assert compose(f, incl).is_zero()
        im, iincl = image(f)
        c, proj = cokernel(f)
        assert compose(proj, f).is_zero()
