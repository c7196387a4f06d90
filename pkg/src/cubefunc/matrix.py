"""Exact matrices over the domains in domains.py, with Smith and Hermite
normal forms, solving, kernels, and lattice operations.

Everything is list-of-lists with canonical domain elements; no floats ever.
"""

from __future__ import annotations

from fractions import Fraction

from .domains import Domain, UnsupportedDomainError, ZZ


class Mat:
    """An exact matrix over a Domain.

    rows are stored as lists; entries are canonical domain elements.
    """

    __slots__ = ("dom", "rows", "cols", "a")

    def __init__(self, dom, entries):
        self.dom = dom
        self.a = [[dom.canon(x) for x in row] for row in entries]
        self.rows = len(self.a)
        self.cols = len(self.a[0]) if self.a else 0
        for row in self.a:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zeros(dom, r, c):
        z = dom.zero()
        m = Mat(dom, [[z] * c for _ in range(r)])
        m.cols = c  # preserved even when r == 0
        return m

    @staticmethod
    def identity(dom, n):
        z, o = dom.zero(), dom.one()
        return Mat(dom, [[o if i == j else z for j in range(n)] for i in range(n)])

    @staticmethod
    def diag(dom, entries, rows=None, cols=None):
        n = len(entries)
        rows = n if rows is None else rows
        cols = n if cols is None else cols
        m = Mat.zeros(dom, rows, cols)
        for i, e in enumerate(entries):
            m.a[i][i] = dom.canon(e)
        return m

    @staticmethod
    def column(dom, entries):
        return Mat(dom, [[e] for e in entries])

    @staticmethod
    def row_vec(dom, entries):
        return Mat(dom, [list(entries)])

    def copy(self):
        m = Mat.__new__(Mat)
        m.dom = self.dom
        m.a = [row[:] for row in self.a]
        m.rows, m.cols = self.rows, self.cols
        return m

    def to_domain(self, dom):
        """Reinterpret entries in another domain (must be representable)."""
        return Mat(dom, self.a)

    # -- basic ops -------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.dom == other.dom
            and self.a == other.a
        )

    def __hash__(self):
        return hash((self.dom, tuple(tuple(r) for r in self.a)))

    def __repr__(self):
        body = "; ".join(
            " ".join(self.dom.elem_to_str(x) for x in row) for row in self.a
        )
        return f"Mat({self.dom}, {self.rows}x{self.cols}: [{body}])"

    def _like(self, entries):
        m = Mat(self.dom, entries)
        m.cols = self.cols  # keep the column count of 0-row matrices
        return m

    def __add__(self, other):
        d = self.dom
        return self._like(
            [
                [d.add(x, y) for x, y in zip(r1, r2)]
                for r1, r2 in zip(self.a, other.a)
            ]
        )

    def __sub__(self, other):
        d = self.dom
        return self._like(
            [
                [d.sub(x, y) for x, y in zip(r1, r2)]
                for r1, r2 in zip(self.a, other.a)
            ]
        )

    def __neg__(self):
        d = self.dom
        return self._like([[d.neg(x) for x in row] for row in self.a])

    def scale(self, c):
        d = self.dom
        c = d.canon(c)
        return self._like([[d.mul(c, x) for x in row] for row in self.a])

    def __mul__(self, other):
        if not isinstance(other, Mat):
            return self.scale(other)
        if self.cols != other.rows:
            raise ValueError(
                f"shape mismatch {self.rows}x{self.cols} * {other.rows}x{other.cols}"
            )
        d = self.dom
        z = d.zero()
        bt = list(zip(*other.a)) if other.a else []
        if not bt or not self.a:
            return Mat.zeros(d, self.rows, other.cols)
        out = []
        for row in self.a:
            orow = []
            for col in bt:
                s = z
                for x, y in zip(row, col):
                    if not d.is_zero(x) and not d.is_zero(y):
                        s = d.add(s, d.mul(x, y))
                orow.append(s)
            out.append(orow)
        return Mat(d, out)

    def transpose(self):
        return Mat(self.dom, [list(r) for r in zip(*self.a)]) if self.a and self.cols else Mat.zeros(self.dom, self.cols, self.rows)

    def is_zero(self):
        d = self.dom
        return all(d.is_zero(x) for row in self.a for x in row)

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        return Mat(self.dom, [r1 + r2 for r1, r2 in zip(self.a, other.a)])

    def vstack(self, other):
        if self.cols != other.cols:
            raise ValueError("col mismatch in vstack")
        return Mat(self.dom, self.a + other.a)

    def submatrix(self, row_idx, col_idx):
        return Mat(self.dom, [[self.a[i][j] for j in col_idx] for i in row_idx])

    def col(self, j):
        return Mat(self.dom, [[self.a[i][j]] for i in range(self.rows)])

    def columns(self):
        return [self.col(j) for j in range(self.cols)]

    @staticmethod
    def hstack_all(dom, mats, rows=None):
        mats = [m for m in mats]
        if not mats:
            return Mat.zeros(dom, rows or 0, 0)
        out = mats[0]
        for m in mats[1:]:
            out = out.hstack(m)
        return out

    @staticmethod
    def direct_sum(dom, mats):
        r = sum(m.rows for m in mats)
        c = sum(m.cols for m in mats)
        out = Mat.zeros(dom, r, c)
        i0 = j0 = 0
        for m in mats:
            for i in range(m.rows):
                for j in range(m.cols):
                    out.a[i0 + i][j0 + j] = m.a[i][j]
            i0 += m.rows
            j0 += m.cols
        return out

    def kron(a, b):
        """Kronecker product over a's domain."""
        d = a.dom
        out = Mat.zeros(d, a.rows * b.rows, a.cols * b.cols)
        for i in range(a.rows):
            for j in range(a.cols):
                x = a.a[i][j]
                if d.is_zero(x):
                    continue
                for k in range(b.rows):
                    for l in range(b.cols):
                        out.a[i * b.rows + k][j * b.cols + l] = d.mul(x, b.a[k][l])
        return out

    def trace(self):
        d = self.dom
        s = d.zero()
        for i in range(min(self.rows, self.cols)):
            s = d.add(s, self.a[i][i])
        return s

    # -- serialization -----------------------------------------------------

    def to_json(self):
        return {
            "domain": self.dom.to_json(),
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[self.dom.elem_to_str(x) for x in row] for row in self.a],
        }

    @staticmethod
    def from_json(d):
        dom = Domain.from_json(d["domain"])
        entries = [[dom.elem_from_str(x) for x in row] for row in d["entries"]]
        if not entries:
            return Mat.zeros(dom, d["rows"], d["cols"])
        m = Mat(dom, entries)
        if m.rows != d["rows"] or m.cols != d["cols"]:
            raise ValueError("matrix shape disagrees with entries")
        return m


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def _snf_field(m):
    """SNF over a field: diag(1,...,1,0,...) with rank ones."""
    d = m.dom
    a = [row[:] for row in m.a]
    rows, cols = m.rows, m.cols
    u = Mat.identity(d, rows)
    v = Mat.identity(d, cols)
    U, V = u.a, v.a
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if not d.is_zero(a[i][c]):
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
            U[r], U[piv] = U[piv], U[r]
        inv = d.inv(a[r][c])
        a[r] = [d.mul(inv, x) for x in a[r]]
        U[r] = [d.mul(inv, x) for x in U[r]]
        for i in range(rows):
            if i != r and not d.is_zero(a[i][c]):
                f = a[i][c]
                a[i] = [d.sub(x, d.mul(f, y)) for x, y in zip(a[i], a[r])]
                U[i] = [d.sub(x, d.mul(f, y)) for x, y in zip(U[i], U[r])]
        r += 1
        if r == rows:
            break
    # now reduced row echelon; permute and clear columns to reach diag form
    # column operations: move pivot columns to the front, zero the rest
    b = Mat(d, a)
    # find pivot column of each row
    pivots = []
    for i in range(r):
        for j in range(cols):
            if not d.is_zero(b.a[i][j]):
                pivots.append(j)
                break
    # column permutation bringing pivots first
    perm = pivots + [j for j in range(cols) if j not in pivots]
    pm = Mat.zeros(d, cols, cols)
    for new, old in enumerate(perm):
        pm.a[old][new] = d.one()
    b = b * pm
    v = v * pm
    # clear non-pivot entries in pivot rows via column ops
    for i in range(r):
        for j in range(cols):
            if j != i and not d.is_zero(b.a[i][j]):
                f = b.a[i][j]
                for k in range(b.rows):
                    b.a[k][j] = d.sub(b.a[k][j], d.mul(f, b.a[k][i]))
                for k in range(cols):
                    v.a[k][j] = d.sub(v.a[k][j], d.mul(f, v.a[k][i]))
    return Mat(d, U), b, v


def _snf_euclidean(m):
    """SNF over Z by repeated pivoting on the absolutely least nonzero entry."""
    d = m.dom
    a = [[int(x) for x in row] for row in m.a]
    rows, cols = m.rows, m.cols
    U = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    V = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def addrow(dst, src, f):
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def addcol(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    t = 0
    n = min(rows, cols)
    while t < n:
        # locate the absolutely smallest nonzero entry in the trailing block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < abs(best[2])):
                    best = (i, j, x)
        if best is None:
            break
        bi, bj, _ = best
        if bi != t:
            swap_rows(t, bi)
        if bj != t:
            swap_cols(t, bj)
        # eliminate; pivot may change, loop until column and row are clean
        while True:
            piv = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // piv
                    addrow(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // piv
                    addcol(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
                        break
            if not dirty:
                break
        # divisibility: pivot must divide the rest of the block
        piv = a[t][t]
        fixed = True
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % piv:
                    addrow(t, i, 1)
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        if piv < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return Mat(d, U), Mat(d, a), Mat(d, V)


def smith_normal_form(m):
    """Return (u, s, v) with u*m*v == s, u and v invertible over m.dom
    and s diagonal with canonical associates d1 | d2 | ... ."""
    d = m.dom
    if m.rows == 0 or m.cols == 0:
        return Mat.identity(d, m.rows), m.copy(), Mat.identity(d, m.cols)
    if d.is_field:
        return _snf_field(m)
    if d.kind == "Z":
        return _snf_euclidean(m)
    if d.kind in ("loc", "inv"):
        # clear denominators, compute over Z, then renormalize the diagonal
        denom = 1
        for row in m.a:
            for x in row:
                denom = denom * Fraction(x).denominator // _gcd_int(
                    denom, Fraction(x).denominator
                )
        zm = Mat(ZZ, [[int(Fraction(x) * denom) for x in row] for row in m.a])
        u0, s0, v0 = _snf_euclidean(zm)
        u = Mat(d, u0.a)
        s = Mat(d, [[Fraction(x, denom) for x in row] for row in s0.a])
        v = Mat(d, v0.a)
        # renormalize diagonal entries to canonical associates, folding the
        # unit into u; then restore the divisibility chain order
        entries = []
        for i in range(min(s.rows, s.cols)):
            x = s.a[i][i]
            if d.is_zero(x):
                entries.append(d.zero())
                continue
            c = d.canonical_associate(x)
            unit = d.div(c, x)
            u.a[i] = [d.mul(unit, y) for y in u.a[i]]
            s.a[i][i] = c
            entries.append(c)
        return u, s, v
    raise UnsupportedDomainError(f"Smith form not implemented over {d}")


def _gcd_int(a, b):
    while b:
        a, b = b, a % b
    return a


def invariant_factors(m):
    """Nonzero diagonal entries of the Smith form, in divisibility order."""
    _, s, _ = smith_normal_form(m)
    d = m.dom
    out = []
    for i in range(min(s.rows, s.cols)):
        if not d.is_zero(s.a[i][i]):
            out.append(s.a[i][i])
    return out


def rank(m):
    return len(invariant_factors(m))


def kernel(m):
    """Matrix whose columns generate { x : m x = 0 } (a basis over a PID)."""
    d = m.dom
    u, s, v = smith_normal_form(m)
    r = 0
    for i in range(min(s.rows, s.cols)):
        if not d.is_zero(s.a[i][i]):
            r += 1
    idx = list(range(r, m.cols))
    return v.submatrix(range(m.cols), idx)


def solve(m, b):
    """One solution x of m x = b over m.dom, or None if none exists.

    b may have several columns; a solution is found columnwise.
    """
    d = m.dom
    u, s, v = smith_normal_form(m)
    ub = u * b
    n = min(s.rows, s.cols)
    xs = []
    for c in range(b.cols):
        y = []
        ok = True
        for i in range(m.cols):
            if i < n and not d.is_zero(s.a[i][i]):
                if not d.divides(s.a[i][i], ub.a[i][c]):
                    ok = False
                    break
                y.append(d.div(ub.a[i][c], s.a[i][i]))
            else:
                y.append(d.zero())
        if not ok:
            return None
        # remaining rows of ub must be 0
        for i in range(n, s.rows):
            if not d.is_zero(ub.a[i][c]):
                return None
        # rows i < n with zero pivot: ub must vanish there too
        for i in range(n):
            if d.is_zero(s.a[i][i]) and not d.is_zero(ub.a[i][c]):
                return None
        xs.append(y)
    x = Mat(d, [list(col) for col in zip(*xs)]) if xs and m.cols else Mat.zeros(d, m.cols, b.cols)
    return v * x if m.cols else Mat.zeros(d, 0, b.cols)


def inverse(m):
    """Inverse over the domain, or None if m is not invertible."""
    if m.rows != m.cols:
        return None
    d = m.dom
    x = solve(m, Mat.identity(d, m.rows))
    if x is None:
        return None
    if (m * x) == Mat.identity(d, m.rows) and (x * m) == Mat.identity(d, m.rows):
        return x
    return None


def column_hermite(m):
    """A column-style Hermite form: matrix with the same column lattice,
    zero columns dropped, in echelon shape.  Works over Z, localizations,
    and fields."""
    d = m.dom
    if d.is_field:
        # column space basis: reduce columns
        cols = [list(c) for c in zip(*m.a)] if m.a and m.cols else []
        basis = []
        pivots = []
        for cvec in cols:
            v = cvec[:]
            for b, pi in zip(basis, pivots):
                if not d.is_zero(v[pi]):
                    f = d.mul(v[pi], d.inv(b[pi]))
                    v = [d.sub(x, d.mul(f, y)) for x, y in zip(v, b)]
            pi = next((i for i, x in enumerate(v) if not d.is_zero(x)), None)
            if pi is not None:
                basis.append(v)
                pivots.append(pi)
        if not basis:
            return Mat.zeros(d, m.rows, 0)
        order = sorted(range(len(basis)), key=lambda k: pivots[k])
        return Mat(d, [[basis[k][i] for k in order] for i in range(m.rows)])
    if d.kind in ("loc", "inv"):
        denom = 1
        for row in m.a:
            for x in row:
                q = Fraction(x).denominator
                denom = denom * q // _gcd_int(denom, q)
        zm = Mat(ZZ, [[int(Fraction(x) * denom) for x in row] for row in m.a])
        h = column_hermite(zm)
        out = Mat(d, [[Fraction(x, denom) for x in row] for row in h.a])
        # scale each column by a unit so the pivot is a canonical associate
        for j in range(out.cols):
            pi = next(i for i in range(out.rows) if not d.is_zero(out.a[i][j]))
            piv = out.a[pi][j]
            c = d.canonical_associate(piv)
            unit = d.div(c, piv)
            for i in range(out.rows):
                out.a[i][j] = d.mul(unit, out.a[i][j])
        return out
    if d.kind != "Z":
        raise UnsupportedDomainError(f"Hermite form not implemented over {d}")
    # integer column HNF, lower-left echelon by working top row down
    cols = [list(c) for c in zip(*m.a)] if m.a and m.cols else []
    n = m.rows
    work = [c[:] for c in cols]
    out = []
    row = 0
    while row < n and work:
        nz = [c for c in work if c[row] != 0]
        rest = [c for c in work if c[row] == 0]
        if not nz:
            work = rest
            row += 1
            continue
        # gcd the row entries into one column
        while len(nz) > 1:
            nz.sort(key=lambda c: abs(c[row]))
            base = nz[0]
            newnz = [base]
            for c in nz[1:]:
                q = c[row] // base[row]
                c2 = [x - q * y for x, y in zip(c, base)]
                if c2[row] != 0:
                    newnz.append(c2)
                elif any(c2):
                    rest.append(c2)
            if len(newnz) == 1:
                nz = newnz
                break
            nz = newnz
        piv = nz[0]
        if piv[row] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        work = rest
        row += 1
    # reduce off-pivot entries so the form is unique
    pivot_rows = []
    for c in out:
        pivot_rows.append(next(i for i, x in enumerate(c) if x != 0))
    for k in range(len(out)):
        for l in range(k):
            # reduce out[l] at pivot row of out[k]
            pr = pivot_rows[k]
            q = out[l][pr] // out[k][pr]
            if q:
                out[l] = [x - q * y for x, y in zip(out[l], out[k])]
    if not out:
        return Mat.zeros(d, n, 0)
    return Mat(d, [[c[i] for c in out] for i in range(n)])


def in_column_lattice(m, b):
    """Whether every column of b lies in the column lattice (span) of m."""
    return solve(m, b) is not None


def lattice_equal(m1, m2):
    return in_column_lattice(m1, m2) and in_column_lattice(m2, m1)


def lattice_sum(m1, m2):
    return column_hermite(m1.hstack(m2))


class LatticeSpan:
    """An incrementally built column lattice in D^n with fast membership.

    Basis columns are kept in column Hermite form, so membership reduces to
    a triangular divisibility check.  Works over Z and its localizations.
    """

    def __init__(self, dom, n):
        self.dom = dom
        self.n = n
        self.basis = []  # list of columns (python lists)
        self.pivots = []  # pivot row of each column, strictly increasing

    @property
    def rank(self):
        return len(self.basis)

    def reduce(self, vec):
        """Remainder of vec after greedy reduction against the basis."""
        d = self.dom
        v = [d.canon(x) for x in vec]
        for col, piv in zip(self.basis, self.pivots):
            x = v[piv]
            if d.is_zero(x):
                continue
            if not d.divides(col[piv], x):
                continue
            q = d.div(x, col[piv])
            v = [d.sub(a, d.mul(q, b)) for a, b in zip(v, col)]
        return v

    def contains(self, vec):
        d = self.dom
        return all(d.is_zero(x) for x in self.reduce(vec))

    def insert(self, vec):
        """Add vec to the lattice; returns True if the lattice grew."""
        d = self.dom
        if self.contains(vec):
            return False
        m = self.to_matrix().hstack(Mat.column(d, vec))
        h = column_hermite(m)
        self.basis = [[h.a[i][j] for i in range(self.n)] for j in range(h.cols)]
        self.pivots = [
            next(i for i, x in enumerate(col) if not d.is_zero(x))
            for col in self.basis
        ]
        return True

    def to_matrix(self):
        if not self.basis:
            return Mat.zeros(self.dom, self.n, 0)
        return Mat(self.dom, [list(r) for r in zip(*self.basis)])


class RationalSpan:
    """A growing subspace of Q^n kept in echelon form."""

    def __init__(self, n):
        self.n = n
        self.rows = []  # echelon rows, each with a pivot
        self.pivots = []

    @property
    def rank(self):
        return len(self.rows)

    def reduce(self, vec):
        v = [Fraction(x) for x in vec]
        for row, piv in zip(self.rows, self.pivots):
            if v[piv]:
                c = v[piv] / row[piv]
                v = [a - c * b for a, b in zip(v, row)]
        return v

    def contains(self, vec):
        return not any(self.reduce(vec))

    def insert(self, vec):
        v = self.reduce(vec)
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            return False
        # keep rows reduced against the newcomer for stable pivots
        k = 0
        while k < len(self.pivots) and self.pivots[k] < piv:
            k += 1
        self.rows.insert(k, v)
        self.pivots.insert(k, piv)
        return True


def det(m):
    """Determinant by fraction-free expansion on the Smith form."""
    if m.rows != m.cols:
        raise ValueError("det needs a square matrix")
    d = m.dom
    if m.rows == 0:
        return d.one()
    # Bareiss over Z-like domains via fractions for robustness
    n = m.rows
    a = [[Fraction(x) if not (d.kind == "gf" or d.kind == "mod") else x for x in row] for row in m.a]
    if d.kind in ("gf", "mod"):
        # expansion by elimination over the field / ring
        if not d.is_field:
            raise UnsupportedDomainError("det over Z/m (composite) not supported")
        sgn_swap = False
        prod = d.one()
        for c in range(n):
            piv = next((i for i in range(c, n) if not d.is_zero(a[i][c])), None)
            if piv is None:
                return d.zero()
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                sgn_swap = not sgn_swap
            prod = d.mul(prod, a[c][c])
            inv = d.inv(a[c][c])
            for i in range(c + 1, n):
                f = d.mul(a[i][c], inv)
                a[i] = [d.sub(x, d.mul(f, y)) for x, y in zip(a[i], a[c])]
        return d.neg(prod) if sgn_swap else prod
    # exact rational elimination
    sgn = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return d.zero()
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sgn = -sgn
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    out = Fraction(sgn)
    for i in range(n):
        out *= a[i][i]
    return d.canon(out)
