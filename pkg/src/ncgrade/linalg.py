"""Deterministic exact linear algebra over the rationals or a prime field.

Two layers: a dense `Mat` front end (rref / kernel_basis / solve) and a
sparse engine used by the rest of the package.  Sparse vectors are dicts
{column: scalar} with no zero values; sparse "matrices" are lists of such
rows.  All elimination is leftmost-pivot, topmost-row, so results are
identical across runs.
"""

from dataclasses import dataclass

from .field import QQ


@dataclass(frozen=True)
class Mat:
    """Dense matrix; entries is a tuple of row tuples of field scalars."""

    rows: int
    cols: int
    entries: tuple
    field: object = QQ

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry shape does not match rows x cols")

    @staticmethod
    def from_rows(rows, field=QQ, cols=None):
        rows = [tuple(field.of(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return Mat(len(rows), cols, tuple(rows), field)

    @staticmethod
    def identity(n, field=QQ):
        z, o = field.zero, field.one
        return Mat(n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), field)

    @staticmethod
    def zero(rows, cols, field=QQ):
        z = field.zero
        return Mat(rows, cols, tuple(tuple(z for _ in range(cols)) for _ in range(rows)), field)

    def to_sparse(self):
        return [{j: x for j, x in enumerate(r) if x != self.field.zero} for r in self.entries]

    def row(self, i):
        return self.entries[i]

    def mul_vec(self, v):
        """Matrix times column vector, returned as a list."""
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        f = self.field
        out = []
        for r in self.entries:
            s = f.zero
            for a, b in zip(r, v):
                if a != f.zero and b != f.zero:
                    s = f.add(s, f.mul(a, b))
            out.append(s)
        return out


def _from_sparse(rows, nrows, cols, field):
    z = field.zero
    dense = []
    for i in range(nrows):
        r = rows[i] if i < len(rows) else {}
        dense.append(tuple(r.get(j, z) for j in range(cols)))
    return Mat(nrows, cols, tuple(dense), field)


def sparse_rref(rows, cols, field):
    """Reduced row echelon form of sparse rows, in place order; returns
    (reduced_rows, pivot_columns).  Zero rows are dropped from the output."""
    work = [dict(r) for r in rows]
    pivots = []
    piv_rows = []
    next_row = 0
    n = len(work)
    for col in range(cols):
        sel = -1
        for i in range(next_row, n):
            if work[i].get(col):
                sel = i
                break
        if sel < 0:
            continue
        work[next_row], work[sel] = work[sel], work[next_row]
        prow = work[next_row]
        pv = prow[col]
        if pv != field.one:
            inv = field.inv(pv)
            prow = {j: field.mul(inv, x) for j, x in prow.items()}
            work[next_row] = prow
        for i in range(n):
            if i == next_row:
                continue
            c = work[i].get(col)
            if not c:
                continue
            ri = work[i]
            for j, x in prow.items():
                v = field.sub(ri.get(j, field.zero), field.mul(c, x))
                if v == field.zero:
                    ri.pop(j, None)
                else:
                    ri[j] = v
        pivots.append(col)
        piv_rows.append(prow)
        next_row += 1
        if next_row == n:
            break
    return piv_rows, pivots


def rref(m):
    """Reduced row echelon form and pivot columns of a dense Mat."""
    rows, pivots = sparse_rref(m.to_sparse(), m.cols, m.field)
    return _from_sparse(rows, m.rows, m.cols, m.field), pivots


def kernel_from_rref(rows, pivots, cols, field):
    """Canonical right-kernel basis (free-variable unit completions)."""
    pivset = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivset:
            continue
        v = {free: field.one}
        for i, p in enumerate(pivots):
            c = rows[i].get(free)
            if c:
                v[p] = field.neg(c)
        basis.append(v)
    return basis


def sparse_kernel(rows, cols, field):
    red, pivots = sparse_rref(rows, cols, field)
    return kernel_from_rref(red, pivots, cols, field)


def kernel_basis(m):
    """Basis of the right null space of m, one basis vector per output row."""
    basis = sparse_kernel(m.to_sparse(), m.cols, m.field)
    return _from_sparse(basis, len(basis), m.cols, m.field)


def solve(m, b):
    """Some x with m.x = b (free variables zero), or None if inconsistent."""
    if len(b) != m.rows:
        raise ValueError("right-hand side length %d != rows %d" % (len(b), m.rows))
    field = m.field
    aug = m.to_sparse()
    for i, r in enumerate(aug):
        bv = field.of(b[i])
        if bv != field.zero:
            r[m.cols] = bv
    rows, pivots = sparse_rref(aug, m.cols + 1, field)
    if m.cols in pivots:
        return None
    x = [field.zero] * m.cols
    for i, p in enumerate(pivots):
        x[p] = rows[i].get(m.cols, field.zero)
    return x


def sparse_rank(rows, cols, field):
    _, pivots = sparse_rref(rows, cols, field)
    return len(pivots)


class Echelon:
    """Incremental echelon span with optional combination tracking.

    Rows added through `add` are reduced against the current span; an
    independent row is normalized (pivot 1) and stored keyed by its pivot
    column.  With track=True the stored rows remember the linear combination
    of the *added* vectors that produced them, so dependent rows yield exact
    kernel combinations and membership tests yield coordinates.
    """

    def __init__(self, field, track=False):
        self.field = field
        self.track = track
        self.pivrows = {}     # pivot column -> (rowdict, combo or None)
        self.n_added = 0
        self.last_kernel = None

    @property
    def rank(self):
        return len(self.pivrows)

    def _reduce(self, vec, combo):
        f = self.field
        zero = f.zero
        r = dict(vec)
        pivrows = self.pivrows
        while True:
            p = None
            for c in r:
                if c in pivrows and (p is None or c < p):
                    p = c
            if p is None:
                return r, combo
            row, rcombo = pivrows[p]
            c = r[p]
            for j, x in row.items():
                v = f.sub(r.get(j, zero), f.mul(c, x))
                if v == zero:
                    r.pop(j, None)
                else:
                    r[j] = v
            if combo is not None:
                for t, x in rcombo.items():
                    v = f.sub(combo.get(t, zero), f.mul(c, x))
                    if v == zero:
                        combo.pop(t, None)
                    else:
                        combo[t] = v

    def reduce(self, vec):
        """Residue of vec against the span (no insertion)."""
        r, _ = self._reduce(vec, None)
        return r

    def coordinates(self, vec):
        """Combination of added vectors giving vec, or None if not in span.

        Requires track=True."""
        combo = {}
        r, combo = self._reduce(vec, combo)
        if r:
            return None
        return {t: self.field.neg(x) for t, x in combo.items()}

    def add(self, vec):
        """Add a vector; returns None if dependent, else its pivot column.

        When tracking, a dependent vector leaves its kernel combination in
        `last_kernel` (coefficients over added-vector indices, including the
        new one)."""
        f = self.field
        tag = self.n_added
        self.n_added += 1
        combo = {tag: f.one} if self.track else None
        r, combo = self._reduce(vec, combo)
        if not r:
            self.last_kernel = combo
            return None
        p = min(r)
        c = r[p]
        if c != f.one:
            inv = f.inv(c)
            r = {j: f.mul(inv, x) for j, x in r.items()}
            if combo is not None:
                combo = {t: f.mul(inv, x) for t, x in combo.items()}
        self.pivrows[p] = (r, combo)
        self.last_kernel = None
        return p

    def contains(self, vec):
        return not self.reduce(vec)


def kernel_of_images(images, field):
    """Kernel of the map sending unit i to images[i] (sparse dicts).

    Returns a list of sparse combination vectors over the unit indices, in
    the canonical order produced by processing images in sequence."""
    ech = Echelon(field, track=True)
    out = []
    for img in images:
        if ech.add(img) is None:
            out.append(ech.last_kernel)
    return out
