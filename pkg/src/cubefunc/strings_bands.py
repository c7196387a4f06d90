"""String and band modules over the quadruple ring, and the two-object
diagrams over Z_(2) built from words in xi and eta.

A module over the quadruple ring is the same thing as a three-term diagram
M1 <-> M2 <-> M3 with maps a1, b1, a2, b2 subject to

    a1 b1 a1 = 3 a1,   b1 a1 b1 = 3 b1,
    a2 b2 a2 = 3 a2,   b2 a2 b2 = 3 b2,
    b1 b2 = 0,         a2 a1 = 0,
    a1 b1 + b2 a2 = 3 id on M2.

String and band modules are presented over the three indecomposable
projectives by relations written with the operator table theta(i, j).
"""

from __future__ import annotations

from collections import namedtuple
from itertools import product

from .domains import Z_HALF, Zloc, _is_prime
from .matrix import LatticeSpan, Mat, kernel as mat_kernel
from .presentation import FpPresentation, ModuleMorphism, compose

PARTNER = {1: 2, 2: 1, 3: 4, 4: 3, 5: 6, 6: 5}        # the relation ~
MERGE = {1: 1, 2: 2, 3: 2, 4: 4, 5: 4, 6: 6}           # classes of -
NU = {frozenset({1, 2}): 1, frozenset({3, 4}): 2, frozenset({5, 6}): 3}


def same_dash(i, j):
    """The equivalence -, whose only nontrivial classes are 2-3 and 4-5."""
    return MERGE[i] == MERGE[j]


def nu(i):
    for pair, c in NU.items():
        if i in pair:
            return c
    raise ValueError(f"index {i} out of range")


class BModuleDiagram:
    """Three presented groups with the four structure maps."""

    def __init__(self, M1, M2, M3, a1, b1, a2, b2, check=True):
        self.M1, self.M2, self.M3 = M1, M2, M3
        self.a1, self.b1, self.a2, self.b2 = a1, b1, a2, b2
        self.dom = M1.dom
        if check:
            ok, report = self.verify_relations()
            if not ok:
                bad = [name for name, good in report if not good]
                raise ValueError(f"diagram relations fail: {bad}")

    @staticmethod
    def from_matrices(dom, sizes, a1, b1, a2, b2, rels=(None, None, None), check=True):
        M = [FpPresentation(dom, sizes[i], rels[i]) for i in range(3)]
        mk = lambda s, t, m: ModuleMorphism(M[s - 1], M[t - 1], m, check=check)
        return BModuleDiagram(
            M[0], M[1], M[2],
            mk(1, 2, a1), mk(2, 1, b1), mk(2, 3, a2), mk(3, 2, b2),
            check=check,
        )

    def modules(self):
        return (self.M1, self.M2, self.M3)

    def verify_relations(self):
        a1, b1, a2, b2 = self.a1, self.b1, self.a2, self.b2
        id2 = ModuleMorphism(
            self.M2, self.M2, Mat.identity(self.dom, self.M2.gens), check=False
        )
        checks = [
            ("a1 b1 a1 = 3 a1", compose(compose(a1, b1), a1) - a1.scale(3)),
            ("b1 a1 b1 = 3 b1", compose(compose(b1, a1), b1) - b1.scale(3)),
            ("a2 b2 a2 = 3 a2", compose(compose(a2, b2), a2) - a2.scale(3)),
            ("b2 a2 b2 = 3 b2", compose(compose(b2, a2), b2) - b2.scale(3)),
            ("b1 b2 = 0", compose(b1, b2)),
            ("a2 a1 = 0", compose(a2, a1)),
            ("a1 b1 + b2 a2 = 3 id2", compose(a1, b1) + compose(b2, a2) - id2.scale(3)),
        ]
        report = [(name, defect.is_zero()) for name, defect in checks]
        return all(good for _, good in report), report

    def theta(self, i, j):
        """The operator table; theta(i, j) maps level nu(i) to level nu(j)."""
        a1, b1, a2, b2 = self.a1, self.b1, self.a2, self.b2
        if (i, j) == (1, 1):
            id1 = ModuleMorphism(
                self.M1, self.M1, Mat.identity(self.dom, self.M1.gens), check=False
            )
            return id1.scale(3) - compose(b1, a1)
        if (i, j) == (2, 2):
            return compose(b1, a1)
        if (i, j) == (2, 3):
            return a1
        if (i, j) == (3, 2):
            return b1
        # indices 3 and 4 both live on level 2; 3 faces the M1 side and 4 the
        # M3 side, so their reflections are a1 b1 and its complement b2 a2
        if (i, j) == (3, 3):
            return compose(a1, b1)
        if (i, j) == (4, 4):
            return compose(b2, a2)
        if (i, j) == (4, 5):
            return a2
        if (i, j) == (5, 4):
            return b2
        if (i, j) == (5, 5):
            return compose(a2, b2)
        if (i, j) == (6, 6):
            id3 = ModuleMorphism(
                self.M3, self.M3, Mat.identity(self.dom, self.M3.gens), check=False
            )
            return id3.scale(3) - compose(a2, b2)
        raise ValueError(f"theta({i}{j}) undefined: need {i} - {j}")

    def direct_sum(self, other):
        def stack(f, g):
            return Mat.direct_sum(self.dom, [f.matrix, g.matrix])

        sizes = [a.gens + b.gens for a, b in zip(self.modules(), other.modules())]
        rels = [
            Mat.direct_sum(self.dom, [a.relations, b.relations])
            for a, b in zip(self.modules(), other.modules())
        ]
        return BModuleDiagram.from_matrices(
            self.dom, sizes,
            stack(self.a1, other.a1), stack(self.b1, other.b1),
            stack(self.a2, other.a2), stack(self.b2, other.b2),
            rels=tuple(rels), check=False,
        )

    def invariant_factors(self):
        return tuple(m.invariant_factors() for m in self.modules())

    def is_3_power_torsion(self):
        d = self.dom
        three = d.canon(3)
        for torsion, free in self.invariant_factors():
            if free:
                return False
            for factor, _ in torsion:
                f = factor
                while d.divides(three, f):
                    f = d.div(f, three)
                if not d.is_unit(f):
                    return False
        return True


def projective_diagram(c, dom=Z_HALF):
    """The indecomposable projective generated at level c; its cyclic
    generator is the first basis vector of level c."""
    z = lambda r, co: Mat.zeros(dom, r, co)
    if c == 1:
        return BModuleDiagram.from_matrices(
            dom, (2, 1, 0),
            a1=Mat(dom, [[1, 3]]), b1=Mat(dom, [[0], [1]]),
            a2=z(0, 1), b2=z(1, 0),
        )
    if c == 2:
        return BModuleDiagram.from_matrices(
            dom, (1, 2, 1),
            a1=Mat(dom, [[0], [1]]), b1=Mat(dom, [[1, 3]]),
            a2=Mat(dom, [[1, 0]]), b2=Mat(dom, [[3], [-1]]),
        )
    if c == 3:
        return BModuleDiagram.from_matrices(
            dom, (0, 1, 2),
            a1=z(1, 0), b1=z(0, 1),
            a2=Mat(dom, [[0], [1]]), b2=Mat(dom, [[1, 3]]),
        )
    raise ValueError("component must be 1, 2 or 3")


def irreducible_torsion_free(i, dom=Z_HALF):
    """The rank-one components of the projectives, numbered 1..6."""
    z = lambda r, co: Mat.zeros(dom, r, co)
    one = lambda x: Mat(dom, [[x]])
    if i == 1:
        return BModuleDiagram.from_matrices(dom, (1, 0, 0), z(0, 1), z(1, 0), z(0, 0), z(0, 0))
    if i == 2:
        return BModuleDiagram.from_matrices(dom, (1, 1, 0), one(1), one(3), z(0, 1), z(1, 0))
    if i == 3:
        return BModuleDiagram.from_matrices(dom, (1, 1, 0), one(3), one(1), z(0, 1), z(1, 0))
    if i == 4:
        return BModuleDiagram.from_matrices(dom, (0, 1, 1), z(1, 0), z(0, 1), one(1), one(3))
    if i == 5:
        return BModuleDiagram.from_matrices(dom, (0, 1, 1), z(1, 0), z(0, 1), one(3), one(1))
    if i == 6:
        return BModuleDiagram.from_matrices(dom, (0, 0, 1), z(0, 0), z(0, 0), z(1, 0), z(0, 1))
    raise ValueError("index must be in 1..6")


def build_named(kind, p, k, dom=Z_HALF):
    """The cyclic torsion modules L(i, p, k) and the quadratic quotients.

    kind is an integer i in {1, 2, 4, 6} for L(i, p, k) with p > 3, or one
    of the strings "ext2"/"sym2" for the p-power quotients of the exterior
    and symmetric squares (p >= 3).
    """
    if k < 0:
        raise ValueError("truncation exponent must be nonnegative")
    if not _is_prime(p):
        raise ValueError("p must be prime")
    if kind in ("ext2", "sym2"):
        if p < 3:
            raise ValueError("quadratic quotients need p >= 3")
        from .functors import builtin, extract_diagram

        d = extract_diagram(builtin(kind))
        return truncate_diagram(d, p ** k)
    i = kind
    if i not in (1, 2, 4, 6):
        raise ValueError("torsion-free index must be one of 1, 2, 4, 6")
    if p <= 3:
        raise ValueError("these quotients are taken at primes p > 3")
    base = irreducible_torsion_free(i, dom)
    q = p ** k
    rels = tuple(
        Mat.diag(dom, [q] * m.gens) if m.gens else Mat.zeros(dom, 0, 0)
        for m in base.modules()
    )
    return BModuleDiagram.from_matrices(
        dom, tuple(m.gens for m in base.modules()),
        base.a1.matrix, base.b1.matrix, base.a2.matrix, base.b2.matrix,
        rels=rels, check=False,
    )


def truncate_diagram(d, q):
    """Quotient every level of a cubic diagram by q."""
    from .functors import CubicDiagram

    def cut(pres):
        extra = Mat.diag(pres.dom, [q] * pres.gens)
        if pres.relations.cols:
            extra = pres.relations.hstack(extra)
        return extra

    return CubicDiagram.from_matrices(
        d.dom,
        d.h.matrix, d.p.matrix, d.h1.matrix, d.h2.matrix,
        d.p1.matrix, d.p2.matrix,
        rels=tuple(cut(p) for p in (d.F1, d.F2, d.F3)),
    )


# ---------------------------------------------------------------------------
# string and band data
# ---------------------------------------------------------------------------


class StringDiagram3:
    """A walk datum: shapes "i", "ii", "iii" with index and exponent rows.

    The rows are stored 1-indexed over positions 1..2n, with None at the
    positions a given shape omits.  Phantom i-indices (the convention that
    defines i_1 or i_2n so the pairing condition holds) are filled in and
    remembered in .synthetic.
    """

    def __init__(self, shape, i, j, k):
        if shape not in ("i", "ii", "iii"):
            raise ValueError("shape must be 'i', 'ii' or 'iii'")
        if len(i) % 2 or not i:
            raise ValueError("need index rows of even length 2n")
        self.shape = shape
        self.n = len(i) // 2
        n2 = 2 * self.n
        if len(j) != n2 or len(k) != n2:
            raise ValueError("rows i, j, k must all have length 2n")
        self.i = list(i)
        self.j = list(j)
        self.k = list(k)
        self.synthetic = []
        missing_jk = self._absent_positions()
        for pos in range(1, n2 + 1):
            absent = pos in missing_jk
            if (self.j[pos - 1] is None) != absent or (self.k[pos - 1] is None) != absent:
                raise ValueError(
                    f"position {pos}: shape {shape} "
                    + ("omits" if absent else "requires") + " j and k there"
                )
        self._fill_phantoms()
        self._validate()

    def _absent_positions(self):
        n2 = 2 * self.n
        if self.shape == "i":
            return {n2}
        if self.shape == "ii":
            return {1, n2}
        return set()

    def _fill_phantoms(self):
        n2 = 2 * self.n
        fill = []
        if self.shape == "i":
            fill = [n2]
        elif self.shape == "ii":
            fill = [1, n2]
        self.synthetic = list(fill)
        changed = True
        while changed:
            changed = False
            for pos in fill:
                other = pos - 1 if pos == n2 else pos + 1
                if self.i[pos - 1] is None and self.i[other - 1] is not None:
                    self.i[pos - 1] = PARTNER[self.i[other - 1]]
                    changed = True
        for pos in range(1, n2 + 1):
            if self.i[pos - 1] is None:
                raise ValueError(f"i_{pos} cannot be inferred; supply it")

    def _validate(self):
        n, iv, jv, kv = self.n, self.i, self.j, self.k
        for m in range(1, n + 1):
            a, b = iv[2 * m - 2], iv[2 * m - 1]
            if a is None or b is None or PARTNER[a] != b:
                raise ValueError(f"i_{2*m-1} ~ i_{2*m} fails")
        for m in range(1, n):
            a, b = jv[2 * m - 1], jv[2 * m]
            if a is not None and b is not None and PARTNER[a] != b:
                raise ValueError(f"j_{2*m+1} ~ j_{2*m} fails")
        for pos in range(1, 2 * n + 1):
            if jv[pos - 1] is None:
                continue
            if not same_dash(iv[pos - 1], jv[pos - 1]):
                raise ValueError(f"i_{pos} - j_{pos} fails")
            if not isinstance(kv[pos - 1], int) or kv[pos - 1] < 0:
                raise ValueError(f"k_{pos} must be a nonnegative integer")

    def components(self):
        return [nu(self.i[2 * m - 2]) for m in range(1, self.n + 1)]

    def relation_range(self):
        if self.shape == "i":
            return range(0, self.n)
        if self.shape == "ii":
            return range(1, self.n)
        return range(0, self.n + 1)

    def reverse(self):
        """The symmetric diagram, defined for shapes ii and iii."""
        if self.shape == "i":
            raise ValueError("shape i has no symmetric mate of the same shape")
        rev = lambda row: list(reversed(row))
        return StringDiagram3(self.shape, rev(self.i), rev(self.j), rev(self.k))

    def __eq__(self, other):
        return (
            isinstance(other, StringDiagram3)
            and (self.shape, self.i, self.j, self.k)
            == (other.shape, other.i, other.j, other.k)
        )


class BandData3:
    """A nonperiodic cyclic diagram together with a primary polynomial
    lam_1 + lam_2 t + ... + t^d over Z/3 with lam_1 nonzero."""

    def __init__(self, diagram, poly):
        if diagram.shape != "iii":
            raise ValueError("band diagrams have shape iii")
        d = diagram
        if PARTNER[d.j[2 * d.n - 1]] != d.j[0]:
            raise ValueError("band closure needs j_2n ~ j_1")
        if _is_periodic(d):
            raise ValueError("band diagram must be non-periodic")
        coeffs = [c % 3 for c in poly]
        if len(coeffs) < 2 or coeffs[-1] != 1:
            raise ValueError("polynomial must be monic of positive degree")
        if coeffs[0] == 0:
            raise ValueError("lam_1 must be nonzero")
        if not is_primary(coeffs, 3):
            raise ValueError("polynomial must be primary over Z/3")
        self.diagram = d
        self.poly = coeffs
        self.degree = len(coeffs) - 1

    def shift(self, s):
        n2 = 2 * self.diagram.n
        s = (2 * s) % n2
        rot = lambda row: row[s:] + row[:s]
        d = self.diagram
        return BandData3(StringDiagram3("iii", rot(d.i), rot(d.j), rot(d.k)), self.poly)

    def star(self):
        d = self.diagram
        rev = lambda row: list(reversed(row))
        lam1 = self.poly[0]
        inv = pow(lam1, -1, 3)
        rp = [(inv * c) % 3 for c in reversed(self.poly)]
        return BandData3(StringDiagram3("iii", rev(d.i), rev(d.j), rev(d.k)), rp)


def _is_periodic(d):
    n2 = 2 * d.n
    rows = (d.i, d.j, d.k)
    for s in range(1, d.n):
        if d.n % s:
            continue
        t = 2 * s
        if all(row[(p + t) % n2] == row[p] for row in rows for p in range(n2)):
            return True
    return False


# polynomial helpers over a prime field ------------------------------------


def poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def poly_mod(a, m, p):
    a = [x % p for x in a]
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    while len(a) - 1 >= dm and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        c = (a[-1] * inv) % p
        shift = len(a) - 1 - dm
        for i, x in enumerate(m):
            a[shift + i] = (a[shift + i] - c * x) % p
        a.pop()
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def is_irreducible(f, p):
    d = len(f) - 1
    if d <= 0:
        return False
    if d == 1:
        return True
    for deg in range(1, d // 2 + 1):
        for tail in product(range(p), repeat=deg):
            g = list(tail) + [1]
            if poly_mod(f, g, p) == [0]:
                return False
    return True


def is_primary(f, p):
    """A power of a monic irreducible polynomial."""
    f = [x % p for x in f]
    d = len(f) - 1
    for deg in range(1, d + 1):
        if d % deg:
            continue
        for tail in product(range(p), repeat=deg):
            g = list(tail) + [1]
            if not is_irreducible(g, p):
                continue
            power = [1]
            for _ in range(d // deg):
                power = poly_mul(power, g, p)
            if [x % p for x in power] == f:
                return True
    return False


# ---------------------------------------------------------------------------
# the builders
# ---------------------------------------------------------------------------


class _FreeCover:
    """A direct sum of projectives with located cyclic generators."""

    def __init__(self, comps, dom=Z_HALF):
        self.dom = dom
        self.comps = list(comps)
        pieces = [projective_diagram(c, dom) for c in self.comps]
        self.diagram = pieces[0] if pieces else None
        for piece in pieces[1:]:
            self.diagram = self.diagram.direct_sum(piece)
        if self.diagram is None:
            z = Mat.zeros(dom, 0, 0)
            self.diagram = BModuleDiagram.from_matrices(dom, (0, 0, 0), z, z, z, z)
        self.offsets = []
        tally = [0, 0, 0]
        for c, piece in zip(self.comps, pieces):
            self.offsets.append(tally[c - 1])
            for lvl in range(3):
                tally[lvl] += piece.modules()[lvl].gens

    def generator_vector(self, m):
        """Generator m (0-based) as a coordinate column at its level."""
        lvl = self.comps[m]
        size = self.diagram.modules()[lvl - 1].gens
        col = Mat.zeros(self.dom, size, 1)
        col.a[self.offsets[m]][0] = self.dom.one()
        return lvl, col


def _quotient_by(cover, relation_vectors):
    """Close relation vectors under the four maps and form the quotient."""
    dom = cover.dom
    free = cover.diagram
    sizes = [m.gens for m in free.modules()]
    spans = [LatticeSpan(dom, s) for s in sizes]
    frontier = []
    for lvl, col in relation_vectors:
        vec = [col.a[r][0] for r in range(col.rows)]
        if spans[lvl - 1].insert(vec):
            frontier.append((lvl, col))
    arrows = [
        (1, 2, free.a1.matrix), (2, 1, free.b1.matrix),
        (2, 3, free.a2.matrix), (3, 2, free.b2.matrix),
    ]
    while frontier:
        nxt = []
        for lvl, col in frontier:
            for s, t, m in arrows:
                if s != lvl:
                    continue
                img = m * col
                vec = [img.a[r][0] for r in range(img.rows)]
                if any(not dom.is_zero(x) for x in vec) and spans[t - 1].insert(vec):
                    nxt.append((t, img))
        frontier = nxt
    rels = tuple(
        span.to_matrix() if span.rank else Mat.zeros(dom, sizes[l], 0)
        for l, span in enumerate(spans)
    )
    return BModuleDiagram.from_matrices(
        dom, tuple(sizes),
        free.a1.matrix, free.b1.matrix, free.a2.matrix, free.b2.matrix,
        rels=rels, check=True,
    )


def build_string_module(d, dom=Z_HALF):
    """The module presented by generators g_1..g_n and the walk relations."""
    cover = _FreeCover(d.components(), dom)
    free = cover.diagram

    def term(pos, m):
        """3^{k_pos} theta(i_pos, j_pos) applied to g_m, as a column."""
        i, j, kexp = d.i[pos - 1], d.j[pos - 1], d.k[pos - 1]
        _, col = cover.generator_vector(m - 1)
        th = free.theta(i, j)
        out = th.matrix * col
        return nu(j), out.scale(dom.canon(3 ** kexp))

    rel_vectors = []
    for m in d.relation_range():
        if m == 0:
            rel_vectors.append(term(1, 1))
        elif m == d.n and 2 * d.n <= len(d.j) and d.j[2 * d.n - 1] is not None:
            rel_vectors.append(term(2 * d.n, d.n))
        else:
            lvl, left = term(2 * m, m)
            lvl2, right = term(2 * m + 1, m + 1)
            assert lvl == lvl2
            rel_vectors.append((lvl, left - right))
    return _quotient_by(cover, rel_vectors)


def build_band_module(b, dom=Z_HALF):
    """Generators g_{ml} wound d times around the cycle, closed by the
    companion relation of the primary polynomial."""
    d = b.diagram
    n, deg = d.n, b.degree
    comps = []
    for m in range(n):
        for _ in range(deg):
            comps.append(nu(d.i[2 * m]))
    cover = _FreeCover(comps, dom)
    free = cover.diagram

    def gen_col(m, l):
        _, col = cover.generator_vector((m - 1) * deg + (l - 1))
        return col

    def theta_at(pos):
        i, j, kexp = d.i[pos - 1], d.j[pos - 1], d.k[pos - 1]
        th = free.theta(i, j)
        return nu(j), th.matrix, dom.canon(3 ** kexp)

    rel_vectors = []
    for m in range(1, n):
        lvl, thm, cm = theta_at(2 * m)
        _, thn, cn = theta_at(2 * m + 1)
        for l in range(1, deg + 1):
            rel_vectors.append(
                (lvl, (thm * gen_col(m, l)).scale(cm) - (thn * gen_col(m + 1, l)).scale(cn))
            )
    lvl, th_last, c_last = theta_at(2 * n)
    _, th_first, c_first = theta_at(1)
    for l in range(1, deg):
        rel_vectors.append(
            (lvl, (th_last * gen_col(n, l)).scale(c_last)
             - (th_first * gen_col(1, l + 1)).scale(c_first))
        )
    closing = (th_last * gen_col(n, deg)).scale(c_last)
    for v in range(1, deg + 1):
        lam = b.poly[v - 1] % 3
        if lam:
            closing = closing + (th_first * gen_col(1, v)).scale(
                dom.mul(c_first, dom.canon(lam))
            )
    rel_vectors.append((lvl, closing))
    return _quotient_by(cover, rel_vectors)


def reversal_intertwiner(d, dom=Z_HALF):
    """Explicit map carrying M^D onto the module of the reversed diagram.

    Reversing the generator order permutes the projective summands of the
    free cover; the result is the per-level permutation matrices, after
    checking they carry one relation lattice exactly onto the other.
    """
    rev = d.reverse()
    md, mr = build_string_module(d, dom), build_string_module(rev, dom)
    cd, cr = _FreeCover(d.components(), dom), _FreeCover(rev.components(), dom)
    n = d.n
    perms = []
    for lvl in range(3):
        size = cd.diagram.modules()[lvl].gens
        P = Mat.zeros(dom, size, size)
        for m in range(n):
            # summand m of the cover of D becomes summand n-1-m for D*
            piece = projective_diagram(cd.comps[m], dom).modules()[lvl]
            if piece.gens == 0:
                continue
            src = _block_offset(cd, m, lvl)
            dst = _block_offset(cr, n - 1 - m, lvl)
            for i in range(piece.gens):
                P.a[dst + i][src + i] = dom.one()
        perms.append(P)
    for lvl in range(3):
        got = LatticeSpan(dom, perms[lvl].rows)
        rl = md.modules()[lvl].relations
        cols_fwd = []
        for c in range(rl.cols):
            img = perms[lvl] * rl.col(c)
            vec = [img.a[i][0] for i in range(img.rows)]
            cols_fwd.append(vec)
            got.insert(vec)
        want = LatticeSpan(dom, perms[lvl].rows)
        rr_ = mr.modules()[lvl].relations
        cols_bwd = [
            [rr_.a[i][c] for i in range(rr_.rows)] for c in range(rr_.cols)
        ]
        for vec in cols_bwd:
            want.insert(vec)
        same = all(want.contains(v) for v in cols_fwd) and all(
            got.contains(v) for v in cols_bwd
        )
        if not same:
            raise ValueError("generator reversal does not match the lattices")
    return perms


def _block_offset(cover, m, lvl):
    """Coordinate offset of summand m inside level lvl of the free cover."""
    off = 0
    for j in range(m):
        off += projective_diagram(cover.comps[j], cover.dom).modules()[lvl].gens
    return off


def relation_lattices(module):
    """The per-level relation columns, for comparing presentations."""
    return [pres.relations for pres in module.modules()]


# ---------------------------------------------------------------------------
# indecomposability probing at a finite level
# ---------------------------------------------------------------------------

ProbeVerdict = namedtuple("ProbeVerdict", "verdict witness endo_rank")


def _endo_basis_mod(module, q):
    """A generating set of endomorphism triples of the q-truncation."""
    dom = module.dom
    sizes = [m.gens for m in module.modules()]
    total = sum(s * s for s in sizes)
    offs = [0, sizes[0] ** 2, sizes[0] ** 2 + sizes[1] ** 2]
    arrows = [
        (1, 2, module.a1.matrix), (2, 1, module.b1.matrix),
        (2, 3, module.a2.matrix), (3, 2, module.b2.matrix),
    ]
    rels = relation_lattices(module)

    def allowed(lvl):
        cols = [Mat.diag(dom, [q] * sizes[lvl - 1])]
        if rels[lvl - 1].cols:
            cols.insert(0, rels[lvl - 1])
        out = cols[0]
        for c in cols[1:]:
            out = out.hstack(c)
        return out

    rows = []
    aux_cols = 0
    blocks = []
    for s, t, f in arrows:
        ns, nt = sizes[s - 1], sizes[t - 1]
        lat = allowed(t)
        blocks.append((s, t, f, lat, nt, ns))
        aux_cols += lat.cols * ns
    # also well-definedness on the relation columns
    wd_blocks = []
    for lvl in range(1, 4):
        r = rels[lvl - 1]
        if not r.cols:
            continue
        lat = allowed(lvl)
        wd_blocks.append((lvl, r, lat))
        aux_cols += lat.cols * r.cols

    width = total + aux_cols
    sys_rows = []

    def evar(lvl, r, c):
        return offs[lvl - 1] + r * sizes[lvl - 1] + c

    aux_at = total
    for s, t, f, lat, nt, ns in blocks:
        # E_t F - F E_s = lat * Y, entrywise
        for r in range(nt):
            for c in range(ns):
                row = [dom.zero()] * width
                for k in range(nt):
                    row[evar(t, r, k)] = f.a[k][c] if k < f.rows else dom.zero()
                for k in range(ns):
                    row[evar(s, k, c)] = dom.sub(row[evar(s, k, c)], f.a[r][k])
                for k in range(lat.cols):
                    row[aux_at + c * lat.cols + k] = dom.neg(lat.a[r][k])
                sys_rows.append(row)
        aux_at += lat.cols * ns
    for lvl, r, lat in wd_blocks:
        n = sizes[lvl - 1]
        for rr in range(n):
            for cc in range(r.cols):
                row = [dom.zero()] * width
                for k in range(n):
                    row[evar(lvl, rr, k)] = r.a[k][cc]
                for k in range(lat.cols):
                    row[aux_at + cc * lat.cols + k] = dom.neg(lat.a[rr][k])
                sys_rows.append(row)
        aux_at += lat.cols * r.cols

    if not sys_rows:
        ker = Mat.identity(dom, width)
    else:
        ker = mat_kernel(Mat(dom, sys_rows))
    span = LatticeSpan(dom, total)
    basis = []
    for jcol in range(ker.cols):
        red = [_residue(dom, ker.a[i][jcol], q) for i in range(total)]
        if any(red) and span.insert(red):
            basis.append(red)
    return basis, sizes, offs


def _residue(dom, x, q):
    """The image of a Z[1/2]- or Z_(p)-element in Z/q (q odd)."""
    x = dom.canon(x)
    if isinstance(x, int):
        return x % q
    num, den = x.numerator, x.denominator
    return (num * pow(den, -1, q)) % q


def _triple_from_vec(vec, sizes, offs, dom):
    mats = []
    for lvl in range(3):
        n = sizes[lvl]
        entries = [
            [vec[offs[lvl] + r * n + c] for c in range(n)] for r in range(n)
        ]
        mats.append(Mat(dom, entries))
    return mats


def _span_residue(dom, columns, total, q):
    """Data (U, d) with x in the column span iff (U x) % d == 0 rowwise.

    The span must contain q*Z^total, so the diagonal divides q.
    """
    import numpy as np

    from .matrix import smith_normal_form

    H = Mat(dom, [[col[i] for col in columns] for i in range(total)])
    u, s, _ = smith_normal_form(H)
    d = np.array(
        [int(_residue(dom, s.a[i][i], q * q)) or 1 for i in range(total)],
        dtype=np.int64,
    )
    U = np.array(
        [
            [int(_residue(dom, u.a[i][j], int(d[i]))) if d[i] > 1 else 0
             for j in range(total)]
            for i in range(total)
        ],
        dtype=np.int64,
    )
    return U, d


def indecomposability_probe(module, level=3, prime=3, max_candidates=2000000):
    """Decide whether the truncation M/prime**level splits.

    The kernel of End -> End/(prime) is a nil ideal, so idempotents lift;
    it is enough to enumerate mod-prime combinations of an endomorphism
    generating set, and a hit is lifted by Newton iteration to an exact
    idempotent witness.
    """
    import numpy as np

    q = prime ** level
    dom = module.dom
    basis, sizes, offs = _endo_basis_mod(module, q)
    r = len(basis)
    if r == 0:
        return ProbeVerdict("indecomposable-at-level", None, 0)
    total = offs[2] + sizes[2] ** 2
    rels = relation_lattices(module)

    # null endomorphisms: triples whose columns all land in (relations + q*I)
    null_cols = []
    for lvl in range(3):
        n = sizes[lvl]
        gens = [
            [rels[lvl].a[i][c] for i in range(n)] for c in range(rels[lvl].cols)
        ] + [[q if i == j else 0 for i in range(n)] for j in range(n)]
        for c in range(n):
            for v in gens:
                vec = [0] * total
                for i in range(n):
                    vec[offs[lvl] + i * n + c] = v[i]
                null_cols.append(vec)
    U0, d0 = _span_residue(dom, null_cols, total, q)
    split_cols = null_cols + [[prime * x for x in b] for b in basis]
    U1, d1 = _span_residue(dom, split_cols, total, q)

    # a GF(p)-basis of End/(p * End): drop generators that are already
    # congruent to combinations of earlier ones
    span = LatticeSpan(dom, total)
    for col in split_cols:
        span.insert(col)
    basis = [b for b in basis if span.insert(b)]
    r = len(basis)
    if r == 0 or prime ** r > max_candidates:
        verdict = "indecomposable-at-level" if r == 0 else "unknown"
        return ProbeVerdict(verdict, None, r)

    B = np.array(basis, dtype=np.int64)

    def np_mats(vec):
        return [
            np.array(vec[offs[l]:offs[l] + sizes[l] ** 2], dtype=np.int64).reshape(
                sizes[l], sizes[l]
            )
            for l in range(3)
        ]

    bmats = [np_mats(b) for b in basis]
    prods = np.zeros((r * r, total), dtype=np.int64)
    for i in range(r):
        for j in range(r):
            prods[i * r + j] = np.concatenate(
                [((bmats[i][l] @ bmats[j][l]) % q).reshape(-1) for l in range(3)]
            )
    idvec = np.concatenate(
        [np.eye(sizes[l], dtype=np.int64).reshape(-1) for l in range(3)]
    )

    def nonmember(vecs, U, d):
        """Rows of vecs (N, total) not lying in the lattice."""
        return ((vecs @ U.T) % d).any(axis=1)

    ncand = prime ** r
    chunk = max(1, min(ncand, 10 ** 5))
    digits = prime ** np.arange(r, dtype=np.int64)[::-1]
    for start in range(1, ncand, chunk):
        idx = np.arange(start, min(start + chunk, ncand), dtype=np.int64)
        C = (idx[:, None] // digits) % prime
        E = (C @ B) % q
        outer = np.einsum("bi,bj->bij", C, C).reshape(len(idx), r * r)
        defect = (outer @ prods - E) % q
        good = (
            ~nonmember(defect, U1, d1)
            & nonmember(E, U1, d1)
            & nonmember((E - idvec) % q, U1, d1)
        )
        if not good.any():
            continue
        vec = E[good][0]
        witness = _newton_lift(np_mats(vec.tolist()), q, level, U0, d0, offs, total)
        if witness is not None:
            return ProbeVerdict("splits", witness, r)
    return ProbeVerdict("indecomposable-at-level", None, r)


def _newton_lift(mats, q, level, U0, d0, offs, total):
    """Lift an idempotent of End/(p) to an exact idempotent of End mod q."""
    import numpy as np

    for _ in range(level + 2):
        mats = [(3 * m @ m - 2 * m @ m @ m) % q for m in mats]
        defect = np.concatenate(
            [((mats[l] @ mats[l] - mats[l]) % q).reshape(-1) for l in range(3)]
        )
        if not ((U0 @ defect) % d0).any():
            return [m.tolist() for m in mats]
    return None


# ---------------------------------------------------------------------------
# words in xi and eta over Z_(2)
# ---------------------------------------------------------------------------

INF = None  # exponent marker for the torsion-free summand

Z2 = Zloc(2)


class WordDatum4:
    """An alternating word in xi (superscripts) and eta (subscripts) with
    entries in N u {infinity}, avoiding the subwords that would break
    2 xi = 2 eta = xi eta ... = 0; an optional primary polynomial over
    Z/2 (not a power of t) closes the word into a cycle."""

    def __init__(self, letters, poly=None):
        if not letters:
            raise ValueError("empty word")
        self.letters = []
        for kind, e in letters:
            if kind not in ("xi", "eta"):
                raise ValueError(f"unknown letter {kind}")
            if e is not INF and (not isinstance(e, int) or e < 1):
                raise ValueError("exponents must be positive integers or INF")
            self.letters.append((kind, e))
        for (k1, _), (k2, _) in zip(self.letters, self.letters[1:]):
            if k1 == k2:
                raise ValueError("letters must alternate between xi and eta")
        self.poly = None
        if poly is not None:
            coeffs = [c % 2 for c in poly]
            if len(coeffs) < 2 or coeffs[-1] != 1:
                raise ValueError("polynomial must be monic of positive degree")
            if not is_primary(coeffs, 2):
                raise ValueError("polynomial must be primary over Z/2")
            if all(c == 0 for c in coeffs[:-1]):
                raise ValueError("powers of t are excluded")
            if self.letters[0][0] != "xi" or self.letters[-1][0] != "eta":
                raise ValueError("a cyclic word runs xi ... eta")
            self.poly = coeffs
        self._check_subwords()

    def _check_subwords(self):
        pairs = list(zip(self.letters, self.letters[1:]))
        if self.poly is not None:
            pairs.append((self.letters[-1], self.letters[0]))
        for (k1, e1), (k2, e2) in pairs:
            if k1 == "eta" and k2 == "xi":
                if e1 is INF:
                    raise ValueError("subword eta_inf xi is forbidden")
                if e1 == 1:
                    raise ValueError("subword eta_1 xi is forbidden")
            if k1 == "xi" and k2 == "eta" and e1 is INF:
                raise ValueError("subword xi^inf eta is forbidden")
        if self.poly is not None:
            for _, e in self.letters:
                if e is INF:
                    raise ValueError("cyclic words admit no infinite summand")


class WDiagram:
    """Two presented Z_(2)-modules with maps xi: W1 -> W2, eta: W2 -> W1."""

    def __init__(self, W1, W2, xi, eta):
        self.W1, self.W2 = W1, W2
        self.xi, self.eta = xi, eta

    def verify(self):
        checks = {
            "2 xi = 0": self.xi.scale(2),
            "2 eta = 0": self.eta.scale(2),
            "eta xi = 0": compose(self.eta, self.xi),
        }
        return {name: defect.is_zero() for name, defect in checks.items()}

    def torsion_free_rank(self):
        return (
            self.W1.invariant_factors()[1] + self.W2.invariant_factors()[1]
        )


def _cyclic_block(e, n):
    """Relations of n copies of Z/2^e (no relation for the infinite one)."""
    if e is INF:
        return Mat.zeros(Z2, n, 0)
    return Mat.diag(Z2, [2 ** e] * n)


def build_W(w):
    """Assemble the diagram of a word, with the companion-cell twist when a
    polynomial is present."""
    n = len(w.poly) - 1 if w.poly is not None else 1
    xis = [e for kind, e in w.letters if kind == "xi"]
    etas = [e for kind, e in w.letters if kind == "eta"]
    if w.poly is not None:
        closing = etas.pop()  # the shared subscript j
        w2_exps = [closing] + etas
    else:
        w2_exps = etas
    size1 = n * len(xis)
    size2 = n * len(w2_exps)
    rel1 = Mat.direct_sum(Z2, [_cyclic_block(e, n) for e in xis] or [Mat.zeros(Z2, 0, 0)])
    rel2 = Mat.direct_sum(Z2, [_cyclic_block(e, n) for e in w2_exps] or [Mat.zeros(Z2, 0, 0)])
    W1 = FpPresentation(Z2, size1, rel1)
    W2 = FpPresentation(Z2, size2, rel2)
    xi_m = Mat.zeros(Z2, size2, size1)
    eta_m = Mat.zeros(Z2, size1, size2)

    def gamma(target_exp):
        return 2 ** (target_exp - 1)

    def place(mat, tgt_block, src_block, scale, frob=None):
        for r in range(n):
            for c in range(n):
                if frob is None:
                    val = scale if r == c else 0
                else:
                    val = frob[r][c] * scale
                if val:
                    mat.a[tgt_block * n + r][src_block * n + c] = Z2.canon(val)

    if w.poly is None:
        # letters in order; each letter maps to the summand on its left
        xi_idx = eta_idx = 0
        prev = None  # (kind, block index)
        for kind, e in w.letters:
            if kind == "xi":
                if prev is not None and prev[0] == "eta":
                    place(xi_m, prev[1], xi_idx, gamma(etas[prev[1]]))
                prev = ("xi", xi_idx)
                xi_idx += 1
            else:
                if prev is not None and prev[0] == "xi":
                    place(eta_m, prev[1], eta_idx, gamma(xis[prev[1]]))
                prev = ("eta", eta_idx)
                eta_idx += 1
    else:
        m = len(xis)
        frob = _companion(w.poly)
        # xi of block l lands in the eta summand to its left; block 1 wraps
        # to the closing summand (index 0 of W2)
        place(xi_m, 0, 0, gamma(w2_exps[0]))
        for l in range(1, m):
            place(xi_m, l, l, gamma(w2_exps[l]))
        for l in range(0, m - 1):
            place(eta_m, l, l + 1, gamma(xis[l]))
        place(eta_m, m - 1, 0, gamma(xis[m - 1]), frob=frob)
    xi = ModuleMorphism(W1, W2, xi_m, check=True)
    eta = ModuleMorphism(W2, W1, eta_m, check=True)
    return WDiagram(W1, W2, xi, eta)


def _companion(poly):
    """Companion matrix of a monic polynomial over Z/2."""
    d = len(poly) - 1
    out = [[0] * d for _ in range(d)]
    for i in range(1, d):
        out[i][i - 1] = 1
    for i in range(d):
        out[i][d - 1] = poly[i] % 2
    return out
