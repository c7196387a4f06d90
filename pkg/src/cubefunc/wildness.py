"""Modules over Z/4 free algebras, restriction along a -> 2x1, b -> 2x2,
and the cubic diagrams they induce.

The point of this machinery is an embedding of matrix-tuple classification
into cubic diagrams: pairs of matrices over Z/4 give modules over the
level-1 endomorphism ring, and inducing up to levels 2 and 3 turns them
into full diagrams without collapsing the isomorphism problem.
"""

from __future__ import annotations

from collections import namedtuple
from functools import lru_cache
from itertools import product
import random

import numpy as np

from .domains import ZZ, Zmod
from .functors import CubicDiagram
from .matrix import Mat, solve as mat_solve
from .presentation import FpPresentation
from .rings import H, H1, H2, HBAR, ID1, P, P1, P2, PBAR

Z4 = Zmod(4)


class SigmaModule:
    """A module over Z/4<x1..xn>, free over Z/4 of the given rank."""

    def __init__(self, n, rank, action):
        if len(action) != n:
            raise ValueError(f"expected {n} action matrices, got {len(action)}")
        self.n = n
        self.rank = rank
        self.action = []
        for m in action:
            m = m if isinstance(m, Mat) else Mat(Z4, m)
            if m.rows != rank or m.cols != rank:
                raise ValueError("action matrix is not rank x rank")
            if m.dom is not Z4:
                m = Mat(Z4, [[int(x) for x in row] for row in m.a])
            self.action.append(m)

    def mod2_action(self):
        return [np.array([[int(x) % 2 for x in row] for row in m.a], dtype=np.uint8)
                for m in self.action]

    def to_json(self):
        return {
            "schema": "cubefunc/sigma-module/1",
            "n": self.n,
            "rank": self.rank,
            "action": [[[int(x) for x in row] for row in m.a] for m in self.action],
        }

    @staticmethod
    def from_json(data):
        return SigmaModule(data["n"], data["rank"], data["action"])


class A11Module:
    """An abelian group with two commuting-to-zero operators a and b
    satisfying a^2 = 2a, b^2 = 6b and ab = ba = 0."""

    def __init__(self, pres, a, b, check=True):
        self.pres = pres
        self.a = a
        self.b = b
        if check:
            ok, bad = self.verify()
            if not ok:
                raise ValueError(f"operator identities fail: {bad}")

    def verify(self):
        """Check the defining identities as endomorphisms of the group."""
        a, b = self.a, self.b
        defects = {
            "a^2 = 2a": a * a - a.scale(2),
            "b^2 = 6b": b * b - b.scale(6),
            "ab = 0": a * b,
            "ba = 0": b * a,
        }
        bad = []
        for name, d in defects.items():
            for j in range(d.cols):
                if not self.pres.element_is_zero(d.col(j)):
                    bad.append(name)
                    break
        return not bad, bad


def phi_restrict(l):
    """Restrict a rank-n free Z/4<x1,x2>-module along a -> 2x1, b -> 2x2."""
    if l.n != 2:
        raise ValueError("restriction needs exactly two generators")
    rels = Mat.diag(ZZ, [4] * l.rank)
    pres = FpPresentation(ZZ, l.rank, rels)
    lift = lambda m: Mat(ZZ, [[2 * int(x) for x in row] for row in m.a])
    return A11Module(pres, lift(l.action[0]), lift(l.action[1]))


# ---------------------------------------------------------------------------
# induction to a full diagram
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _induction_data():
    """Structure constants of the level-(1,2) and level-(1,3) Hom lattices.

    Returns coordinate matrices for the left action of the six structure
    letters and the right action of the level-1 operators a and b, all
    integral in the chosen bases.
    """
    from .faithful import hom_lattice, shared_representation

    rep = shared_representation()
    w2 = hom_lattice(rep, 1, 2)
    w3 = hom_lattice(rep, 1, 3)
    one = rep.eval(ID1)
    a_el = rep.eval(P * H - PBAR * HBAR)
    b_el = rep.eval(PBAR * HBAR)
    b11 = [rep.corner(m, 1, 1) for m in (one, a_el, b_el)]

    def coords(basis, m):
        cols = Mat.hstack_all(ZZ, [Mat.column(ZZ, _flat(x)) for x in basis])
        sol = mat_solve(cols, Mat.column(ZZ, _flat(m)))
        if sol is None:
            raise RuntimeError("element escapes the Hom lattice")
        return [sol.a[k][0] for k in range(len(basis))]

    def _flat(m):
        return [x for row in m.a for x in row]

    def coord_mat(basis, mats):
        cols = [coords(basis, m) for m in mats]
        return Mat(ZZ, [[cols[j][i] for j in range(len(cols))] for i in range(len(basis))])

    gm = rep.gen_mats
    h_m = rep.corner(gm["h"], 1, 2)
    data = {
        "k2": len(w2),
        "k3": len(w3),
        "h": coord_mat(w2, [h_m]),
        # p . w lands back at level 1; record its {1, a, b} coordinates
        "p": Mat(
            ZZ,
            [coords(b11, rep.corner(gm["p"], 2, 1) * w) for w in w2],
        ).transpose(),
        "h1": coord_mat(w3, [rep.corner(gm["h1"], 2, 3) * w for w in w2]),
        "h2": coord_mat(w3, [rep.corner(gm["h2"], 2, 3) * w for w in w2]),
        "p1": coord_mat(w2, [rep.corner(gm["p1"], 3, 2) * v for v in w3]),
        "p2": coord_mat(w2, [rep.corner(gm["p2"], 3, 2) * v for v in w3]),
        "ra2": coord_mat(w2, [w * b11[1] for w in w2]),
        "rb2": coord_mat(w2, [w * b11[2] for w in w2]),
        "ra3": coord_mat(w3, [v * b11[1] for v in w3]),
        "rb3": coord_mat(w3, [v * b11[2] for v in w3]),
    }
    return data


def induce_cubic(m):
    """Tensor a level-1 module up to a full cubic diagram.

    F1 is the module itself; F2 and F3 are the tensor products with the
    Hom lattices to levels 2 and 3, presented by the bimodule relations
    w*a (x) v = w (x) a*v together with the inherited relations of F1.
    """
    data = _induction_data()
    g = m.pres.gens
    rel = m.pres.relations
    k2, k3 = data["k2"], data["k3"]
    eye_g = Mat.identity(ZZ, g)

    def tensor_rels(k, ra, rb):
        blocks = [
            ra.kron(eye_g) - Mat.identity(ZZ, k).kron(m.a),
            rb.kron(eye_g) - Mat.identity(ZZ, k).kron(m.b),
        ]
        if rel is not None and rel.cols:
            blocks.append(Mat.identity(ZZ, k).kron(rel))
        out = blocks[0]
        for b in blocks[1:]:
            out = out.hstack(b)
        return out

    rel2 = tensor_rels(k2, data["ra2"], data["rb2"])
    rel3 = tensor_rels(k3, data["ra3"], data["rb3"])
    c0, ca, cb = (data["p"].submatrix([t], range(k2)) for t in range(3))
    p_mat = c0.kron(eye_g) + ca.kron(m.a) + cb.kron(m.b)
    return CubicDiagram.from_matrices(
        ZZ,
        h=data["h"].kron(eye_g),
        p=p_mat,
        h1=data["h1"].kron(eye_g),
        h2=data["h2"].kron(eye_g),
        p1=data["p1"].kron(eye_g),
        p2=data["p2"].kron(eye_g),
        rels=(rel if rel is not None else Mat.zeros(ZZ, g, 0), rel2, rel3),
    )


def regular_a11_module():
    """The level-1 endomorphism ring acting on itself, basis {1, a, b}."""
    pres = FpPresentation.free(ZZ, 3)
    a = Mat(ZZ, [[0, 0, 0], [1, 2, 0], [0, 0, 0]])
    b = Mat(ZZ, [[0, 0, 0], [0, 0, 0], [1, 0, 6]])
    return A11Module(pres, a, b)


# ---------------------------------------------------------------------------
# the bimodule N
# ---------------------------------------------------------------------------


class NCPoly:
    """A noncommutative polynomial over Z/4 in variables x1..xn."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for w, c in (terms or {}).items():
            c %= 4
            if c:
                self.terms[tuple(w)] = c

    @staticmethod
    def var(i):
        return NCPoly({(i,): 1})

    @staticmethod
    def const(c):
        return NCPoly({(): c})

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return NCPoly(out)

    def __mul__(self, other):
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return NCPoly(out)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, NCPoly) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w, c in sorted(self.terms.items()):
            mono = "*".join(f"x{i}" for i in w) or "1"
            bits.append(f"{c}*{mono}" if c != 1 or not w else mono)
        return " + ".join(bits)


class BimoduleN:
    """The rank-(n+1) bimodule: x1 acts as the upper Jordan cell, x2 by the
    matrix with subdiagonal x1, ..., xn, both over Z/4<x1..xn>."""

    def __init__(self, n):
        if n < 1:
            raise ValueError("need n >= 1")
        self.n = n
        self.rank = n + 1
        zero = NCPoly()
        self.x1 = [[NCPoly.const(1) if j == i + 1 else zero for j in range(n + 1)]
                   for i in range(n + 1)]
        self.x2 = [[NCPoly.var(i) if i == j + 1 else zero for j in range(n + 1)]
                   for i in range(n + 1)]

    def act(self, which, vec):
        """Apply x1 or x2 to a column vector of polynomials."""
        m = self.x1 if which == 1 else self.x2
        return [
            sum((m[i][j] * vec[j] for j in range(self.rank)), NCPoly())
            for i in range(self.rank)
        ]

    def generators_independent(self, maxdeg=2):
        """No nonzero right multiple of a standard generator vanishes, for
        coefficients of degree <= maxdeg; with the disjoint coordinate
        supports this rules out any relation at that truncation."""
        monos = [()]
        frontier = [()]
        for _ in range(maxdeg):
            frontier = [w + (i,) for w in frontier for i in range(1, self.n + 1)]
            monos += frontier
        for j in range(self.rank):
            for w in monos:
                for c in (1, 2, 3):
                    f = NCPoly({w: c})
                    col = [NCPoly() for _ in range(self.rank)]
                    col[j] = f
                    if all(p.is_zero() for p in col):
                        return False
        return True


def bimodule_N(n):
    return BimoduleN(n)


# ---------------------------------------------------------------------------
# isomorphism testing
# ---------------------------------------------------------------------------

IsoVerdict = namedtuple("IsoVerdict", "isomorphic witness method")


@lru_cache(maxsize=8)
def _gl2(d):
    """All invertible d x d matrices over GF(2), as a uint8 array."""
    mats = []
    for bits in product((0, 1), repeat=d * d):
        m = np.array(bits, dtype=np.uint8).reshape(d, d)
        if _gf2_rank(m.copy()) == d:
            mats.append(m)
    return np.stack(mats)


def _gf2_rank(m):
    m = m.copy()
    rank = 0
    rows, cols = m.shape
    for c in range(cols):
        piv = None
        for r in range(rank, rows):
            if m[r, c]:
                piv = r
                break
        if piv is None:
            continue
        m[[rank, piv]] = m[[piv, rank]]
        for r in range(rows):
            if r != rank and m[r, c]:
                m[r] ^= m[rank]
        rank += 1
    return rank


def _batch_conjugacy(us, amats, bmats, mod):
    """Indices u with us[u] @ a_i = b_i @ us[u] (mod) for all i."""
    alive = np.arange(us.shape[0])
    for a, b in zip(amats, bmats):
        lhs = np.einsum("uij,jk->uik", us[alive], a) % mod
        rhs = np.einsum("ij,ujk->uik", b, us[alive]) % mod
        keep = np.all(lhs == rhs, axis=(1, 2))
        alive = alive[keep]
        if alive.size == 0:
            return alive
    return alive


def iso_test_mod2(l, lp, seed=0, random_tries=2000):
    """Decide simultaneous conjugacy of the mod-2 reductions.

    Exhaustive over GL_d(GF(2)) for d <= 4; beyond that, cheap invariants
    plus a seeded randomized search, with an honest unknown outcome.
    """
    if l.n != lp.n or l.rank != lp.rank:
        return IsoVerdict(False, None, "shape mismatch")
    d = l.rank
    amats = l.mod2_action()
    bmats = lp.mod2_action()
    if d <= 4:
        us = _gl2(d)
        hits = _batch_conjugacy(us, amats, bmats, 2)
        if hits.size:
            return IsoVerdict(True, us[hits[0]].tolist(), "exhaustive")
        return IsoVerdict(False, None, "exhaustive")
    # word-rank invariants rule out quickly
    for inv_a, inv_b in zip(_word_invariants(amats), _word_invariants(bmats)):
        if inv_a != inv_b:
            return IsoVerdict(False, None, "invariant mismatch")
    rng = random.Random(seed)
    for _ in range(random_tries):
        u = np.array(
            [[rng.randrange(2) for _ in range(d)] for _ in range(d)],
            dtype=np.uint8,
        )
        if _gf2_rank(u) != d:
            continue
        if all(
            np.array_equal((u @ a) % 2, (b @ u) % 2)
            for a, b in zip(amats, bmats)
        ):
            return IsoVerdict(True, u.tolist(), "random search")
    return IsoVerdict(None, None, "inconclusive")


def _word_invariants(mats):
    out = []
    for m in mats:
        out.append(_gf2_rank(m))
    for m1 in mats:
        for m2 in mats:
            out.append(_gf2_rank((m1 @ m2) % 2))
    return out


@lru_cache(maxsize=8)
def _gl4(d):
    """All invertible d x d matrices over Z/4: units lift units mod 2."""
    base = _gl2(d)
    lifts = []
    shifts = np.array(list(product((0, 2), repeat=d * d)), dtype=np.uint8)
    for m in base:
        lifts.append((m[None, :, :] + shifts.reshape(-1, d, d)) % 4)
    return np.concatenate(lifts)


def brute_force_a11_iso(m, mp):
    """Exhaustively test isomorphism of two restricted modules over Z/4.

    Both inputs must come from phi_restrict (free over Z/4); the search
    runs over all invertible matrices mod 4, independent of any mod-2
    reduction argument.
    """
    ra = m.pres.gens
    rb = mp.pres.gens
    if ra != rb:
        return IsoVerdict(False, None, "rank mismatch")
    if ra > 3:
        raise ValueError("exhaustive search is limited to rank <= 3")
    amats = [np.array([[x % 4 for x in row] for row in op.a], dtype=np.uint8)
             for op in (m.a, m.b)]
    bmats = [np.array([[x % 4 for x in row] for row in op.a], dtype=np.uint8)
             for op in (mp.a, mp.b)]
    us = _gl4(ra)
    hits = _batch_conjugacy(us, amats, bmats, 4)
    if hits.size:
        return IsoVerdict(True, us[hits[0]].tolist(), "exhaustive mod 4")
    return IsoVerdict(False, None, "exhaustive mod 4")


def indecomposable_mod2(l):
    """A free Z/4 module restricts to an indecomposable iff its mod-2
    action tuple admits no nontrivial idempotent commuting matrix."""
    d = l.rank
    if d > 4:
        raise ValueError("exhaustive idempotent search is limited to rank <= 4")
    mats = l.mod2_action()
    for bits in product((0, 1), repeat=d * d):
        e = np.array(bits, dtype=np.uint8).reshape(d, d)
        if np.array_equal((e @ e) % 2, e) and not np.all(e == 0):
            if np.array_equal(e % 2, np.eye(d, dtype=np.uint8)):
                continue
            if all(np.array_equal((e @ m) % 2, (m @ e) % 2) for m in mats):
                return False
    return True
