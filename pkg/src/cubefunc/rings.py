"""Formal elements in the six structure maps and machine verification of
the identity lists that govern cubic diagrams and their idempotent calculus.

A word is a tuple of generator names composed right to left, so the word
("h1", "h") means h1 after h.  Expressions are rational linear combinations
of words between fixed levels; they can be multiplied formally and
evaluated against any concrete diagram.
"""

from __future__ import annotations

from fractions import Fraction

from .domains import ZZ as ZZ_, Z_HALF
from .matrix import Mat

# generator -> (source level, target level)
GEN_TYPES = {
    "h": (1, 2),
    "p": (2, 1),
    "h1": (2, 3),
    "h2": (2, 3),
    "p1": (3, 2),
    "p2": (3, 2),
    "id1": (1, 1),
    "id2": (2, 2),
    "id3": (3, 3),
}


def word_type(word):
    """(source, target) of a composable word, or raise."""
    if not word:
        raise ValueError("empty word has no fixed type; use an identity letter")
    src = GEN_TYPES[word[-1]][0]
    cur = src
    for g in reversed(word):
        s, t = GEN_TYPES[g]
        if s != cur:
            raise ValueError(f"word {word} is not composable at {g}")
        cur = t
    return src, cur


class Expr:
    """A formal linear combination of composable words with a common type."""

    __slots__ = ("terms", "src", "dst")

    def __init__(self, terms):
        terms = {
            tuple(w): Fraction(c) for w, c in terms.items() if Fraction(c) != 0
        }
        typ = None
        for w in terms:
            t = word_type(w)
            if typ is None:
                typ = t
            elif t != typ:
                raise ValueError(f"mixed types in expression: {t} vs {typ}")
        self.terms = terms
        self.src, self.dst = typ if typ else (None, None)

    @staticmethod
    def gen(name):
        return Expr({(name,): 1})

    @staticmethod
    def word(*names):
        return Expr({tuple(names): 1})

    @staticmethod
    def zero():
        return Expr({})

    def _coerced(self, other):
        if isinstance(other, Expr):
            return other
        raise TypeError(f"cannot combine Expr with {other!r}")

    def __add__(self, other):
        other = self._coerced(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t.get(w, Fraction(0)) + c
        return Expr(t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        return Expr({w: x * c for w, x in self.terms.items()})

    def __mul__(self, other):
        """Formal composition: (self * other) means self after other."""
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        t = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = _concat(w1, w2)
                t[w] = t.get(w, Fraction(0)) + c1 * c2
        return Expr(t)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __repr__(self):
        if not self.terms:
            return "Expr(0)"
        parts = []
        for w, c in sorted(self.terms.items()):
            name = "".join(w[::-1]) if w else "1"
            parts.append(f"{c}*{'.'.join(w)}")
        return "Expr(" + " + ".join(parts) + ")"

    def evaluate(self, diagram):
        """The matrix of this expression on a CubicDiagram."""
        mats = _gen_matrices(diagram)
        dims = {
            1: diagram.F1.gens,
            2: diagram.F2.gens,
            3: diagram.F3.gens,
        }
        d = diagram.dom
        if self.src is None:
            raise ValueError("zero expression has no shape; compare via defect")
        acc = Mat.zeros(d, dims[self.dst], dims[self.src])
        for w, c in self.terms.items():
            m = Mat.identity(d, dims[word_type(w)[0]])
            for g in reversed(w):
                m = mats[g] * m
            acc = acc + m.scale(d.canon(c))
        return acc


def _concat(w1, w2):
    """Compose words, dropping identity letters where composable."""
    a = tuple(g for g in w1 if not g.startswith("id"))
    b = tuple(g for g in w2 if not g.startswith("id"))
    w = a + b
    if not w:
        # both factors were identities; keep one
        return (w1[-1],) if w1 else w2
    return w


def _gen_matrices(diagram):
    d = diagram.dom
    return {
        "h": diagram.h.matrix,
        "p": diagram.p.matrix,
        "h1": diagram.h1.matrix,
        "h2": diagram.h2.matrix,
        "p1": diagram.p1.matrix,
        "p2": diagram.p2.matrix,
        "id1": Mat.identity(d, diagram.F1.gens),
        "id2": Mat.identity(d, diagram.F2.gens),
        "id3": Mat.identity(d, diagram.F3.gens),
    }


H = Expr.gen("h")
P = Expr.gen("p")
H1 = Expr.gen("h1")
H2 = Expr.gen("h2")
P1 = Expr.gen("p1")
P2 = Expr.gen("p2")
ID1 = Expr.gen("id1")
ID2 = Expr.gen("id2")
ID3 = Expr.gen("id3")

HBAR = H1 * H           # F1 -> F3
PBAR = P * P1           # F3 -> F1


def cubic_relations(char2=False):
    """The defining identity list, as (name, lhs, rhs) triples.

    With char2=True the doubled identities collapse to zero, which is the
    variant that holds over a base of characteristic 2.
    """
    two = 0 if char2 else 2
    rels = [
        ("h1*p2 = 0", H1 * P2, Expr.zero()),
        ("h2*p1 = 0", H2 * P1, Expr.zero()),
        ("h1*h = h2*h", H1 * H, H2 * H),
        ("p*p1 = p*p2", P * P1, P * P2),
        ("h1*p1*h1 = 2h1", H1 * P1 * H1, H1.scale(two)),
        ("h2*p2*h2 = 2h2", H2 * P2 * H2, H2.scale(two)),
        ("p1*h1*p1 = 2p1", P1 * H1 * P1, P1.scale(two)),
        ("p2*h2*p2 = 2p2", P2 * H2 * P2, P2.scale(two)),
        (
            "h*p*h = 2(h + (p1+p2)*hbar)",
            H * P * H,
            (H + (P1 + P2) * HBAR).scale(two),
        ),
        (
            "p*h*p = 2(p + pbar*(h1+h2))",
            P * H * P,
            (P + PBAR * (H1 + H2)).scale(two),
        ),
        (
            "hbar*p + h1 + h2 = h1p1h2p2h1 + h2p2h1p1h2",
            HBAR * P + H1 + H2,
            H1 * P1 * H2 * P2 * H1 + H2 * P2 * H1 * P1 * H2,
        ),
        (
            "h*pbar + p1 + p2 = p1h2p2h1p1 + p2h1p1h2p2",
            H * PBAR + P1 + P2,
            P1 * H2 * P2 * H1 * P1 + P2 * H1 * P1 * H2 * P2,
        ),
    ]
    return rels


def verify_relations(diagram, char2=None):
    """Check the identity list on a diagram; returns (ok, defect report).

    char2 defaults to the characteristic of the diagram's domain.
    """
    if char2 is None:
        char2 = diagram.dom.characteristic == 2
    report = []
    ok = True
    for name, lhs, rhs in cubic_relations(char2):
        defect = (lhs - rhs)
        if not defect.terms:
            report.append((name, True))
            continue
        m = defect.evaluate(diagram)
        # defect must vanish as a map of presented modules
        zero = all(
            diagram_target_zero(diagram, defect, m.col(j)) for j in range(m.cols)
        )
        report.append((name, zero))
        ok = ok and zero
    return ok, report


def diagram_target_zero(diagram, expr, col):
    pres = {1: diagram.F1, 2: diagram.F2, 3: diagram.F3}[expr.dst]
    return pres.element_is_zero(col)


# ---------------------------------------------------------------------------
# the endomorphism ring at level 1 (integral)
# ---------------------------------------------------------------------------


def a11_subring():
    """Verification bundle for the level-1 endomorphism ring.

    Confirms a^2 = 2a, b^2 = 6b, ab = ba = 0 for a = ph - pbar hbar, b = ph
    in the faithful representation, identifies the rank-3 integral span, and
    matches its multiplication table against span{(1,1,1),(2,0,0),(0,6,0)}
    inside Z^3.
    """
    from .faithful import shared_representation, word_lattice, _vec
    from .matrix import LatticeSpan, solve as mat_solve

    rep = shared_representation()
    one = rep.eval(ID1)
    ph = rep.eval(P * H)
    bar = rep.eval(PBAR * HBAR)
    a = ph - bar
    # the naive reading b = ph fails b^2 = 6b (ph has eigenvalue 2 on the
    # degree-2 part of the representable); the barred composite is the one
    # satisfying every claimed identity, and then ph = a + b
    b = bar
    report = {
        "resolution": "a = ph - pp1h1h, b = pp1h1h; the reading b = ph "
        "fails b^2 = 6b in the faithful representation",
        "a^2 = 2a": (a * a - a.scale(2)).is_zero(),
        "b^2 = 6b": (b * b - b.scale(6)).is_zero(),
        "ab = 0": (a * b).is_zero(),
        "ba = 0": (b * a).is_zero(),
        "(ph)^2 = 6(ph) fails": not (ph * ph - ph.scale(6)).is_zero(),
    }
    # the integral corner at level 1 is spanned by {1, a, b}
    lat, mats = word_lattice(rep)
    n = rep.dims[0]
    corner = LatticeSpan(rep.dom, n * n)
    id1 = rep.gen_mats["id1"]
    for col in lat.basis:
        m = Mat(rep.dom, [col[i * rep.total:(i + 1) * rep.total] for i in range(rep.total)])
        c = rep.corner(id1 * m * id1, 1, 1)
        corner.insert(_vec(c))
    span = LatticeSpan(rep.dom, n * n)
    basis = [rep.corner(one, 1, 1), rep.corner(a, 1, 1), rep.corner(b, 1, 1)]
    for m in basis:
        span.insert(_vec(m))
    report["corner rank 3"] = corner.rank == 3 and span.rank == 3
    report["{1,a,b} spans the corner"] = all(
        span.contains(col) for col in corner.basis
    )
    # multiplication table against the Z^3 model
    model = [(1, 1, 1), (2, 0, 0), (0, 6, 0)]
    bmat = Mat.hstack_all(ZZ_, [Mat.column(ZZ_, _vec(m)) for m in basis])
    table_ok = True
    for i in range(3):
        for j in range(3):
            prod = basis[i] * basis[j]
            coords = mat_solve(bmat, Mat.column(ZZ_, _vec(prod)))
            if coords is None:
                table_ok = False
                continue
            lhs = tuple(int(coords.a[k][0]) for k in range(3))
            want = tuple(
                model[i][t] * model[j][t] for t in range(3)
            )
            got = tuple(
                sum(lhs[k] * model[k][t] for k in range(3)) for t in range(3)
            )
            table_ok = table_ok and got == want
    report["multiplication table matches Z^3 span"] = table_ok
    report["ok"] = all(v for k, v in report.items() if isinstance(v, bool))
    return report


# ---------------------------------------------------------------------------
# the 2-divisible identity list
# ---------------------------------------------------------------------------


def halved_elements():
    """The named elements of the level rings over Z[1/2], as expressions."""
    half = Fraction(1, 2)
    f1 = (P * H - PBAR * HBAR) * half
    e1 = ID1 - f1
    a1 = (PBAR * HBAR) * half
    e2 = (P1 * H1) * half
    f2 = (P2 * H2) * half
    g = ID2 - e2 - f2
    u = H * P
    g1 = (g * u) * half
    g2 = g - g1
    v1 = P1 * H2
    v2 = P2 * H1
    v1p = (v1 * 5 - v1 * v2 * v1) * half
    # the composites v1v2 and v2v1 have eigenvalues {0,1,4}; the elements
    # with the stated quadratic identities are their shifts by e2 and f2
    a2 = v1 * v2 - e2
    b2 = v2 * v1 - f2
    u1 = H1 * P1
    u2 = H2 * P2
    e3 = u1 * half
    f3 = ID3 - e3
    # the barred square needs the same half normalization as e2, e3
    ubar = (HBAR * PBAR) * half + e3
    a3 = u2 * e3 * 2 - ubar
    b3 = e3 * u2 * 2 - ubar
    pp = P - (PBAR * (H1 + H2)) * half
    return {
        "f1": f1, "e1": e1, "a1": a1,
        "e2": e2, "f2": f2, "g": g, "u": u, "g1": g1, "g2": g2,
        "v1": v1, "v2": v2, "v1'": v1p, "a2": a2, "b2": b2,
        "u1": u1, "u2": u2, "e3": e3, "f3": f3,
        "ubar": ubar, "a3": a3, "b3": b3, "p'": pp,
    }


def verify_prop31_identities():
    """Every bullet identity of the 2-divisible structure theorem's proof,
    checked as exact matrix identities over Z[1/2]."""
    from .domains import Z_HALF
    from .faithful import shared_representation, word_lattice, _vec
    from .matrix import LatticeSpan

    rep = shared_representation(Z_HALF)
    E = {k: rep.eval(v) for k, v in halved_elements().items()}
    for name in ("h", "p", "h1", "h2", "p1", "p2", "id1", "id2", "id3"):
        E[name] = rep.gen_mats[name]
    half = Z_HALF.canon(Fraction(1, 2))

    def zero(m):
        return m.is_zero()

    report = {}

    # orthogonal idempotent families per level
    for fam in (("e1", "f1"), ("e2", "f2", "g1", "g2"), ("e3", "f3")):
        for x in fam:
            report[f"{x}^2 = {x}"] = zero(E[x] * E[x] - E[x])
        for x in fam:
            for y in fam:
                if x != y:
                    report[f"{x}*{y} = 0"] = zero(E[x] * E[y])
    report["e1+f1 = id1"] = zero(E["e1"] + E["f1"] - E["id1"])
    report["e2+f2+g1+g2 = id2"] = zero(
        E["e2"] + E["f2"] + E["g1"] + E["g2"] - E["id2"]
    )
    report["e3+f3 = id3"] = zero(E["e3"] + E["f3"] - E["id3"])

    report["a1 = e1*a1*e1"] = zero(E["a1"] - E["e1"] * E["a1"] * E["e1"])
    report["a1^2 = 3a1"] = zero(E["a1"] * E["a1"] - E["a1"].scale(3))
    report["a2 = e2*a2*e2"] = zero(E["a2"] - E["e2"] * E["a2"] * E["e2"])
    report["b2 = f2*b2*f2"] = zero(E["b2"] - E["f2"] * E["b2"] * E["f2"])
    report["a2^2 = 3a2"] = zero(E["a2"] * E["a2"] - E["a2"].scale(3))
    report["b2^2 = 3b2"] = zero(E["b2"] * E["b2"] - E["b2"].scale(3))
    report["v1'*(v2/2) = e2"] = zero(E["v1'"] * E["v2"].scale(half) - E["e2"])
    report["(v2/2)*v1' = f2"] = zero(E["v2"].scale(half) * E["v1'"] - E["f2"])
    report["p'*(h/2) = f1"] = zero(E["p'"] * E["h"].scale(half) - E["f1"])
    report["(h/2)*p' = g1"] = zero(E["h"].scale(half) * E["p'"] - E["g1"])
    report["a3 = f3*a3*e3"] = zero(E["a3"] - E["f3"] * E["a3"] * E["e3"])
    report["b3 = e3*b3*f3"] = zero(E["b3"] - E["e3"] * E["b3"] * E["f3"])
    report["a3*b3*a3 = 3a3"] = zero(E["a3"] * E["b3"] * E["a3"] - E["a3"].scale(3))
    report["b3*a3*b3 = 3b3"] = zero(E["b3"] * E["a3"] * E["b3"] - E["b3"].scale(3))
    report["(p1/2)*h1 = e2"] = zero(E["p1"].scale(half) * E["h1"] - E["e2"])
    report["h1*(p1/2) = e3"] = zero(E["h1"] * E["p1"].scale(half) - E["e3"])
    for i in ("1", "2"):
        report[f"g*p{i} = 0"] = zero(E["g"] * E["p" + i])
        report[f"h{i}*g = 0"] = zero(E["h" + i] * E["g"])
        report[f"f2*h{i} = 0"] = zero(E["f2"] * E["h" + i])
        report[f"p{i}*f2 = 0"] = zero(E["p" + i] * E["f2"])
    report["g2*h = 0"] = zero(E["g2"] * E["h"])
    report["p*g2 = 0"] = zero(E["p"] * E["g2"])

    # Z'-basis claims: the listed elements span each level corner of the
    # lattice of words over Z[1/2]
    lat, _ = word_lattice(rep)
    claims = {
        1: (["e1", "f1", "a1"], 3),
        2: (
            ["e2", "f2", "g1", "g2", "a2", "b2", "v1", "v2"],
            10,
        ),
        3: (["e3", "f3", "a3", "b3"], 6),
    }
    # the two composite basis members of levels 2 and 3; note a2*v1 equals
    # v1*b2 modulo v1 (e2 v1 = v1 f2 = v1), so the second level-2 composite
    # has to come from the opposite hom stratum
    E["v1*b2"] = E["v1"] * E["b2"]
    E["b2*v2"] = E["b2"] * E["v2"]
    E["a3*b3"] = E["a3"] * E["b3"]
    E["b3*a3"] = E["b3"] * E["a3"]
    claims[2][0].extend(["v1*b2", "b2*v2"])
    claims[3][0].extend(["a3*b3", "b3*a3"])
    corner_mats = {}
    for lvl, (names, count) in claims.items():
        n = rep.dims[lvl - 1]
        corner = LatticeSpan(rep.dom, n * n)
        idm = rep.gen_mats[f"id{lvl}"]
        for col in lat.basis:
            m = Mat(
                rep.dom,
                [col[i * rep.total:(i + 1) * rep.total] for i in range(rep.total)],
            )
            c = rep.corner(idm * m * idm, lvl, lvl)
            corner.insert(_vec(c))
        span = LatticeSpan(rep.dom, n * n)
        for name in names:
            span.insert(_vec(rep.corner(E[name], lvl, lvl)))
        report[f"level {lvl} basis is independent"] = span.rank == count
        report[f"level {lvl} basis spans the corner"] = corner.rank == count and all(
            span.contains(col) for col in corner.basis
        )
        corner_mats[lvl] = corner
    # g A2 = A2 g = <g1, g2>
    gspan = LatticeSpan(rep.dom, rep.dims[1] ** 2)
    for name in ("g1", "g2"):
        gspan.insert(_vec(rep.corner(E[name], 2, 2)))
    gm = rep.corner(E["g"], 2, 2)
    left = LatticeSpan(rep.dom, rep.dims[1] ** 2)
    right = LatticeSpan(rep.dom, rep.dims[1] ** 2)
    for col in corner_mats[2].basis:
        m = Mat(rep.dom, [col[i * rep.dims[1]:(i + 1) * rep.dims[1]] for i in range(rep.dims[1])])
        left.insert(_vec(gm * m))
        right.insert(_vec(m * gm))
    report["g*A2 = <g1,g2>"] = all(gspan.contains(c) for c in left.basis) and all(
        left.contains(c) for c in gspan.basis
    )
    report["A2*g = <g1,g2>"] = all(gspan.contains(c) for c in right.basis) and all(
        right.contains(c) for c in gspan.basis
    )
    report["ok"] = all(v for k, v in report.items() if isinstance(v, bool))
    return report


# ---------------------------------------------------------------------------
# the weakly alternative quotient (id1 killed)
# ---------------------------------------------------------------------------


def verify_A_alt_structure():
    """Identities of the two-object quotient where level 1 is annihilated.

    An identity x = y there means x - y lies in the two-sided ideal
    generated by id1; membership is decided in the integral word lattice of
    the faithful representation.
    """
    from .faithful import shared_representation, word_lattice, ideal_lattice, _vec

    rep = shared_representation()
    lat, mats = word_lattice(rep)
    ideal = ideal_lattice(rep, mats, rep.gen_mats["id1"])

    def member(expr):
        return ideal.contains(_vec(rep.eval(expr)))

    e1 = P1 * H2 * P2 * H1
    e2 = P2 * H1 * P1 * H2
    e3 = ID2 - e1 - e2
    theta = e3 * P1 * H2
    f1 = H1 * P1 * H2 * P2
    f2 = ID3 - f1
    # h1p1 and h2p2 themselves are not supported on the f1/f2 strata; the
    # off-diagonal corner elements are their shifts by 2*f1.
    al1 = H1 * P1 - f1 * 2
    al2 = f1 * 2 - H2 * P2
    beta = al2 * al1
    u = P1 * H2 * P2
    v = H1 * P1 * H2 * P2 * H1
    xi = P1 - P1 * H2 * P2 * H1 * P1
    eta = H1 - H1 * P1 * H2 * P2 * H1

    report = {}
    # defining relations of the quotient presentation
    report["h1*p1*h1 = 2h1"] = member(H1 * P1 * H1 - H1 * 2)
    report["h2*p2*h2 = 2h2"] = member(H2 * P2 * H2 - H2 * 2)
    report["p1*h1*p1 = 2p1"] = member(P1 * H1 * P1 - P1 * 2)
    report["p2*h2*p2 = 2p2"] = member(P2 * H2 * P2 - P2 * 2)
    report["h1*p2 = 0"] = member(H1 * P2)
    report["h2*p1 = 0"] = member(H2 * P1)
    report["h1+h2 = h1p1h2p2h1 + h2p2h1p1h2"] = member(
        H1 + H2 - H1 * P1 * H2 * P2 * H1 - H2 * P2 * H1 * P1 * H2
    )
    report["p1+p2 = p1h2p2h1p1 + p2h1p1h2p2"] = member(
        P1 + P2 - P1 * H2 * P2 * H1 * P1 - P2 * H1 * P1 * H2 * P2
    )
    # the implied identities
    for i, j, hi, pi, hj, pj in (
        (1, 2, H1, P1, H2, P2),
        (2, 1, H2, P2, H1, P1),
    ):
        report[f"h{i}p{i} = h{i}p{i}h{j}p{j}h{i}p{i}"] = member(
            hi * pi - hi * pi * hj * pj * hi * pi
        )
        report[f"2p{i} = 2p{i}h{j}p{j}h{i}p{i}"] = member(
            pi * 2 - (pi * hj * pj * hi * pi) * 2
        )
        report[f"2h{i} = 2h{i}p{i}h{j}p{j}h{i}"] = member(
            hi * 2 - (hi * pi * hj * pj * hi) * 2
        )
    # e_i orthogonal idempotents, conjugate via p_i h_j
    report["e1^2 = e1"] = member(e1 * e1 - e1)
    report["e2^2 = e2"] = member(e2 * e2 - e2)
    report["e1*e2 = 0"] = member(e1 * e2)
    report["e2*e1 = 0"] = member(e2 * e1)
    report["e1*p1h2 = p1h2*e2"] = member(e1 * P1 * H2 - P1 * H2 * e2)
    report["e2*p2h1 = p2h1*e1"] = member(e2 * P2 * H1 - P2 * H1 * e1)
    report["e3*p1h2 = p1h2*e3"] = member(e3 * P1 * H2 - P1 * H2 * e3)
    report["e3*p1h2 = e3*p2h1"] = member(e3 * P1 * H2 - e3 * P2 * H1)
    report["e3*p2h1 = p2h1*e3"] = member(e3 * P2 * H1 - P2 * H1 * e3)
    # theta is 2-torsion but nonzero; p_i h_i = theta + 2 e_i
    report["theta != 0"] = not member(theta)
    report["2*theta = 0"] = member(theta * 2)
    report["p1h1 = theta + 2e1"] = member(P1 * H1 - theta - e1 * 2)
    report["p2h2 = theta + 2e2"] = member(P2 * H2 - theta - e2 * 2)
    # level-3 corner structure
    report["f1^2 = f1"] = member(f1 * f1 - f1)
    report["f1*a1 = a1"] = member(f1 * al1 - al1)
    report["f2*a2 = a2"] = member(f2 * al2 - al2)
    report["a1*f2 = a1"] = member(al1 * f2 - al1)
    report["a2*f1 = a2"] = member(al2 * f1 - al2)
    report["a1*a2 = 3f1"] = member(al1 * al2 - f1 * 3)
    report["a2*a1 = beta"] = member(al2 * al1 - beta)
    report["beta^2 = 3beta"] = member(beta * beta - beta * 3)
    report["a1*beta = 3a1"] = member(al1 * beta - al1 * 3)
    report["beta*a2 = 3a2"] = member(beta * al2 - al2 * 3)
    # conjugacy of e1 and f1
    report["e1*u = u*f1"] = member(e1 * u - u * f1)
    report["f1*v = v*e1"] = member(f1 * v - v * e1)
    report["u*v = e1"] = member(u * v - e1)
    report["v*u = f1"] = member(v * u - f1)
    # the 2-torsion pair
    report["xi != 0"] = not member(xi)
    report["eta != 0"] = not member(eta)
    report["2*xi = 0"] = member(xi * 2)
    report["2*eta = 0"] = member(eta * 2)
    report["eta*xi = 0"] = member(eta * xi)
    report["xi*eta = theta"] = member(xi * eta - theta)
    report["xi*f2 = xi"] = member(xi * f2 - xi)
    report["f2*eta = eta"] = member(f2 * eta - eta)
    # e3 A(3,2) = <xi> and A(2,3) e3 = <eta>, as lattices modulo the ideal
    e3m = rep.eval(e3)
    xim = rep.eval(xi)
    etam = rep.eval(eta)
    ok32 = True
    ok23 = True
    id2m, id3m = rep.gen_mats["id2"], rep.gen_mats["id3"]
    for col in lat.basis:
        m = Mat(
            rep.dom,
            [col[i * rep.total:(i + 1) * rep.total] for i in range(rep.total)],
        )
        w32 = id2m * m * id3m
        cand = e3m * w32
        ok32 = ok32 and (
            ideal.contains(_vec(cand)) or ideal.contains(_vec(cand - xim))
        )
        w23 = id3m * m * id2m
        cand = w23 * e3m
        ok23 = ok23 and (
            ideal.contains(_vec(cand)) or ideal.contains(_vec(cand - etam))
        )
    report["e3*A(3,2) = <xi>"] = ok32
    report["A(2,3)*e3 = <eta>"] = ok23

    # The level-3 corner modulo the ideal is the order inside Z x Mat(2, Z)
    # of pairs (a, B) with 3 | b12 and a = b22 (mod 3).  Certify this by
    # checking that {f1, f2, a1, a2, beta} spans the corner lattice
    # integrally and multiplies like the standard basis of that order.
    from .matrix import LatticeSpan

    def corner_of(cols):
        span = LatticeSpan(rep.dom, rep.total * rep.total)
        for col in cols:
            m = Mat(
                rep.dom,
                [col[i * rep.total:(i + 1) * rep.total] for i in range(rep.total)],
            )
            span.insert(_vec(id3m * m * id3m))
        return span

    corner = corner_of(lat.basis)
    elems = [rep.eval(x) for x in (f1, f2, al1, al2, beta)]
    span = corner_of(ideal.basis)
    for x in elems:
        span.insert(_vec(x))
    report["corner spanned by f1,f2,a1,a2,beta"] = all(
        span.contains(c) for c in corner.basis
    ) and all(corner.contains(c) for c in span.basis)

    def model_mul(x, y):
        (ax, bx), (ay, by) = x, y
        prod = [
            [sum(bx[i][k] * by[k][j] for k in range(2)) for j in range(2)]
            for i in range(2)
        ]
        return ax * ay, prod

    model = [
        (0, [[1, 0], [0, 0]]),
        (1, [[0, 0], [0, 1]]),
        (0, [[0, 3], [0, 0]]),
        (0, [[0, 0], [1, 0]]),
        (0, [[0, 0], [0, 3]]),
    ]
    table_ok = True
    for i in range(5):
        for j in range(5):
            a, b = model_mul(model[i], model[j])
            coeffs = [b[0][0], a, b[0][1] // 3, b[1][0], (b[1][1] - a) // 3]
            diff = elems[i] * elems[j]
            for k, c in enumerate(coeffs):
                if c:
                    diff = diff - elems[k] * c
            table_ok = table_ok and ideal.contains(_vec(diff))
    report["corner table matches congruence order"] = table_ok

    report["ok"] = all(v for k, v in report.items() if isinstance(v, bool))
    return report


def a_alt_algebra_dimension():
    """Q-dimension of the quotient algebra (regression value)."""
    from .faithful import shared_representation, word_lattice, ideal_lattice, algebra_dimension

    rep = shared_representation()
    total = algebra_dimension(rep)
    lat, mats = word_lattice(rep)
    ideal = ideal_lattice(rep, mats, rep.gen_mats["id1"])
    return total - ideal.rank


# ---------------------------------------------------------------------------
# the quadruple ring of the 2-divisible classification
# ---------------------------------------------------------------------------


def _mod3(dom, x, y=0):
    return dom.divides(3, dom.sub(dom.canon(x), dom.canon(y)))


class BRingElement:
    """A quadruple (a, B, C, d) in Z' x Mat(2,Z') x Mat(2,Z') x Z' with
    b12, c12 divisible by 3 and a = b11, b22 = c11, c22 = d (mod 3)."""

    __slots__ = ("a", "B", "C", "d")
    dom = Z_HALF

    def __init__(self, a, B, C, d):
        dm = self.dom
        self.a = dm.canon(a)
        self.B = B if isinstance(B, Mat) else Mat(dm, B if B else [[0, 0], [0, 0]])
        self.C = C if isinstance(C, Mat) else Mat(dm, C if C else [[0, 0], [0, 0]])
        self.d = dm.canon(d)
        if isinstance(B, int) and B == 0:
            self.B = Mat.zeros(dm, 2, 2)
        if isinstance(C, int) and C == 0:
            self.C = Mat.zeros(dm, 2, 2)
        if not (
            _mod3(dm, self.B.a[0][1])
            and _mod3(dm, self.C.a[0][1])
            and _mod3(dm, self.a, self.B.a[0][0])
            and _mod3(dm, self.B.a[1][1], self.C.a[0][0])
            and _mod3(dm, self.C.a[1][1], self.d)
        ):
            raise ValueError("quadruple violates the mod-3 congruences")

    def __eq__(self, other):
        return (
            isinstance(other, BRingElement)
            and self.a == other.a
            and self.B == other.B
            and self.C == other.C
            and self.d == other.d
        )

    def __hash__(self):
        return hash((self.a, tuple(map(tuple, self.B.a)), tuple(map(tuple, self.C.a)), self.d))

    def __repr__(self):
        return f"BRingElement({self.a}, {self.B.a}, {self.C.a}, {self.d})"

    def __add__(self, other):
        return BRingElement(
            self.dom.add(self.a, other.a),
            self.B + other.B,
            self.C + other.C,
            self.dom.add(self.d, other.d),
        )

    def __neg__(self):
        return BRingElement(self.dom.neg(self.a), -self.B, -self.C, self.dom.neg(self.d))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return BRingElement(
            self.dom.mul(self.a, other.a),
            self.B * other.B,
            self.C * other.C,
            self.dom.mul(self.d, other.d),
        )

    def is_zero(self):
        return self.a == 0 and self.B.is_zero() and self.C.is_zero() and self.d == 0

    @classmethod
    def one(cls):
        i = Mat.identity(cls.dom, 2)
        return cls(1, i, i, 1)

    @classmethod
    def zero(cls):
        return cls(0, 0, 0, 0)

    @classmethod
    def idempotents(cls):
        """The natural idempotent triple e1, e2, e3."""
        dm = cls.dom
        e1 = cls(1, [[1, 0], [0, 0]], 0, 0)
        e2 = cls(0, [[0, 0], [0, 1]], [[1, 0], [0, 0]], 0)
        e3 = cls(0, 0, [[0, 0], [0, 1]], 1)
        return e1, e2, e3

