"""Graded algebra carriers and constructions.

Two carriers: `PresentedAlgebra` (generators + homogeneous relations, with a
truncated Groebner basis) and `TabulatedAlgebra` (degreewise bases and
multiplication tensors up to the truncation).  Constructions that destroy a
small presentation (quasi-Veronese, twists, section algebras, localization
slices) land in the tabulated carrier; Groebner machinery stays on the
presented side.
"""

from fractions import Fraction

from .field import QQ
from .freealg import GeneratorSet, NcPoly, format_word, monomials_of_degree
from .groebner import Ideal, buchberger_truncated
from .linalg import Echelon, kernel_of_images, sparse_kernel, sparse_rank


class StabilizationError(Exception):
    """Localization slice did not stabilize within the truncation window."""


class HilbertSeries:
    """Degreewise dimensions 0..D with an optional exact closed form."""

    def __init__(self, coeffs, closed_form=None):
        self.coeffs = list(coeffs)
        self.closed_form = closed_form

    def __eq__(self, other):
        return isinstance(other, HilbertSeries) and self.coeffs == other.coeffs

    def __repr__(self):
        s = "HilbertSeries(%s)" % self.coeffs
        if self.closed_form:
            s += " = " + self.closed_form
        return s


def _format_int_poly(coeffs):
    terms = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        if k == 0:
            terms.append(str(c))
        else:
            tp = "t" if k == 1 else "t^%d" % k
            if c == 1:
                terms.append(tp)
            elif c == -1:
                terms.append("-" + tp)
            else:
                terms.append("%d%s" % (c, tp))
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += ("-" + t[1:]) if t.startswith("-") else ("+" + t)
    return out


def find_closed_form(coeffs):
    """Search for num / prod (1-t^k)^e matching the series exactly to D.

    Candidates are tried by total weight of the denominator, preferring pure
    powers of (1-t); the numerator must stabilize with at least two trailing
    zero coefficients inside the window.  Returns (num, den, label) or None.
    """
    D = len(coeffs) - 1
    if D < 3:
        return None
    # sparse series (e.g. one generator of degree 3) can fake a polynomial
    # tail inside the window; demand a healthy margin of confirmed zeros
    max_num_degree = min(D - 2, (2 * D) // 3)

    def mul_trunc(a, b):
        out = [0] * (D + 1)
        for i, x in enumerate(a):
            if x == 0 or i > D:
                continue
            for j, y in enumerate(b):
                if i + j > D:
                    break
                out[i + j] += x * y
        return out

    def den_poly(a, b, c):
        p = [1]
        for k, e in ((1, a), (2, b), (3, c)):
            base = [1] + [0] * (k - 1) + [-1]
            for _ in range(e):
                p = mul_trunc(p, base)
        return p

    for weight in range(0, D - 1):
        for c3 in range(0, weight // 3 + 1):
            for c2 in range(0, (weight - 3 * c3) // 2 + 1):
                c1 = weight - 3 * c3 - 2 * c2
                num = mul_trunc(list(coeffs), den_poly(c1, c2, c3))
                deg = max((i for i, c in enumerate(num) if c != 0), default=-1)
                if deg > max_num_degree:
                    continue
                num = num[: deg + 1] if deg >= 0 else [0]
                den = [(1, c1), (2, c2), (3, c3)]
                den = [(k, e) for k, e in den if e > 0]
                ns = _format_int_poly(num)
                if len([c for c in num if c != 0]) > 1:
                    ns = "(" + ns + ")"
                ds = "".join(
                    ("(1-t)" if k == 1 else "(1-t^%d)" % k) + ("^%d" % e if e > 1 else "")
                    for k, e in den
                )
                label = ns if not den else "%s/%s" % (ns, ds)
                return num, den, label
    return None


class DegreewiseMaps:
    """A degree-preserving linear map given by its matrix on each piece.

    cols[d][i] is the image (sparse coords) of basis element i in degree d.
    Used for graded algebra automorphisms and Nakayama twists."""

    def __init__(self, field, cols, dims):
        self.field = field
        self.cols = cols
        self.dims = list(dims)
        self._powers = {1: self}

    @staticmethod
    def identity(dims, field=QQ):
        cols = [[{i: field.one} for i in range(n)] for n in dims]
        return DegreewiseMaps(field, cols, dims)

    def is_identity(self):
        return all(
            col == {i: self.field.one}
            for d in range(len(self.dims))
            for i, col in enumerate(self.cols[d])
        )

    def apply(self, d, vec):
        f = self.field
        out = {}
        cols = self.cols[d]
        for i, c in vec.items():
            for k, x in cols[i].items():
                v = f.add(out.get(k, f.zero), f.mul(c, x))
                if v == f.zero:
                    out.pop(k, None)
                else:
                    out[k] = v
        return out

    def compose(self, other):
        """self after other."""
        cols = [
            [self.apply(d, col) for col in other.cols[d]]
            for d in range(len(self.dims))
        ]
        return DegreewiseMaps(self.field, cols, self.dims)

    def power(self, k):
        if k == 0:
            return DegreewiseMaps.identity(self.dims, self.field)
        if k < 0:
            return self.inverse().power(-k)
        if k not in self._powers:
            self._powers[k] = self.compose(self.power(k - 1))
        return self._powers[k]

    def inverse(self):
        f = self.field
        cols = []
        for d, n in enumerate(self.dims):
            ech = Echelon(f, track=True)
            for i in range(n):
                ech.add(self.cols[d][i])
            inv = []
            for i in range(n):
                co = ech.coordinates({i: f.one})
                if co is None:
                    raise ValueError("map not invertible in degree %d" % d)
                inv.append(co)
            cols.append(inv)
        return DegreewiseMaps(f, cols, self.dims)


class TabulatedAlgebra:
    """Degreewise bases with (lazily cached) multiplication tensors."""

    def __init__(self, field, D, dims, labels, unit, mult_rule, meta=None):
        self.field = field
        self.D = D
        self.dims = list(dims)
        self.labels = labels
        self.unit = dict(unit)
        self._rule = mult_rule
        self._cache = {}
        self.meta = meta or {}
        self._deg0 = None

    def dim(self, d):
        if d < 0 or d > self.D:
            return 0
        return self.dims[d]

    def mult(self, d, e, i, j):
        """Product of basis i (degree d) and basis j (degree e), as coords."""
        key = (d, e, i, j)
        v = self._cache.get(key)
        if v is None:
            v = self._rule(d, e, i, j)
            self._cache[key] = v
        return v

    def mult_elem(self, d, x, e, y):
        f = self.field
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                ab = f.mul(a, b)
                for k, c in self.mult(d, e, i, j).items():
                    v = f.add(out.get(k, f.zero), f.mul(ab, c))
                    if v == f.zero:
                        out.pop(k, None)
                    else:
                        out[k] = v
        return out

    def power_elem(self, d, x, n):
        out = dict(self.unit)
        deg = 0
        for _ in range(n):
            out = self.mult_elem(deg, out, d, x)
            deg += d
        return deg, out

    def hilbert(self):
        cf = find_closed_form(self.dims)
        return HilbertSeries(self.dims, cf[2] if cf else None)

    def degree0(self):
        """The degree-0 part as a finite dimensional algebra."""
        if self._deg0 is None:
            n = self.dims[0]
            mult = [[self.mult(0, 0, i, j) for j in range(n)] for i in range(n)]
            self._deg0 = FiniteDimAlgebra(
                self.field,
                list(self.labels[0]),
                mult,
                self.unit,
                meta=self.meta.get("degree0_blocks") and {"blocks": self.meta["degree0_blocks"]} or {},
            )
        return self._deg0

    def radical0_basis(self):
        """Basis of rad(A_0); zero for connected algebras."""
        if self.dims[0] == 1:
            return []
        return self.degree0().radical_basis()

    def check_associativity(self, samples=200, seed=7):
        """Re-verify associativity on deterministic pseudo-random triples."""
        import random

        rng = random.Random(seed)
        f = self.field
        triples = []
        for d in range(0, self.D + 1):
            for e in range(0, self.D + 1 - d):
                for g in range(0, self.D + 1 - d - e):
                    if self.dim(d) and self.dim(e) and self.dim(g):
                        triples.append((d, e, g))
        total = sum(self.dim(d) * self.dim(e) * self.dim(g) for d, e, g in triples)
        for d, e, g in triples:
            n = self.dim(d) * self.dim(e) * self.dim(g)
            count = n if total <= samples else max(1, samples * n // total)
            for _ in range(count):
                i = rng.randrange(self.dim(d))
                j = rng.randrange(self.dim(e))
                k = rng.randrange(self.dim(g))
                left = self.mult_elem(d + e, self.mult(d, e, i, j), g, {k: f.one})
                right = self.mult_elem(d, {i: f.one}, e + g, self.mult(e, g, j, k))
                if left != right:
                    return False
        return True


class PresentedAlgebra:
    """Generators plus homogeneous relations, with a cached truncated basis."""

    def __init__(self, gens, relations, truncation, field=QQ):
        self.gens = gens
        self.field = field
        self.truncation = truncation
        self.ideal = Ideal(gens, relations, field)
        self.relations = list(self.ideal.relations)
        self._gb = None
        self._tab = None

    @property
    def gb(self):
        if self._gb is None:
            self._gb = buchberger_truncated(self.ideal, self.truncation)
        return self._gb

    def basis_words(self, d):
        return self.gb.normal_words(d)

    def dim(self, d):
        if d < 0 or d > self.truncation:
            return 0
        return len(self.basis_words(d))

    def dims(self):
        return [self.dim(d) for d in range(self.truncation + 1)]

    def nf(self, p):
        return self.gb.normal_form(p)

    def poly(self, s):
        from .freealg import parse_poly

        return parse_poly(s, self.gens, self.field)

    def element_coords(self, p):
        """Normal-form coordinates: (degree, {basis index: coeff})."""
        r = self.nf(p)
        if r.is_zero():
            return None, {}
        d = r.degree()
        if d is None:
            raise ValueError("element is inhomogeneous")
        index = {w: i for i, w in enumerate(self.basis_words(d))}
        return d, {index[w]: c for w, c in r.terms.items()}

    def tabulate(self, D=None):
        """Degreewise bases (normal words) and multiplication tensors."""
        D = self.truncation if D is None else D
        if D > self.truncation:
            raise ValueError("tabulation degree exceeds truncation")
        if self._tab is not None and self._tab.D == D:
            return self._tab
        gb = self.gb
        words = [gb.normal_words(d) for d in range(D + 1)]
        index = [{w: i for i, w in enumerate(ws)} for ws in words]
        dims = [len(ws) for ws in words]
        labels = [[format_word(self.gens, w) for w in ws] for ws in words]
        field = self.field
        tensors = {}
        for d in range(D + 1):
            for e in range(D + 1 - d):
                idx = index[d + e]
                for i, u in enumerate(words[d]):
                    for j, v in enumerate(words[e]):
                        r = gb.normal_form(NcPoly(self.gens, {u + v: field.one}, field))
                        if r.terms:
                            tensors[(d, e, i, j)] = {
                                idx[w]: c for w, c in r.terms.items()
                            }

        def rule(d, e, i, j):
            return tensors.get((d, e, i, j), {})

        tab = TabulatedAlgebra(
            field,
            D,
            dims,
            labels,
            {0: field.one},
            rule,
            meta={"kind": "presented", "source": self},
        )
        if D == self.truncation:
            self._tab = tab
        return tab

    def hilbert(self):
        cf = find_closed_form(self.dims())
        return HilbertSeries(self.dims(), cf[2] if cf else None)


def quotient_by_central(a, f):
    """Quotient presentation A/(f) for homogeneous f (regularity not assumed)."""
    if isinstance(f, str):
        f = a.poly(f)
    if f.is_zero():
        return PresentedAlgebra(a.gens, a.relations, a.truncation, a.field)
    if f.degree() is None:
        raise ValueError("quotient element must be homogeneous")
    return PresentedAlgebra(a.gens, a.relations + [f], a.truncation, a.field)


def is_central(tab, elem_deg, elem, upto=None):
    """True iff elem commutes with every basis element of degree <= bound."""
    D = tab.D if upto is None else upto
    f = tab.field
    for d in range(0, D - elem_deg + 1):
        for j in range(tab.dim(d)):
            b = {j: f.one}
            if tab.mult_elem(elem_deg, elem, d, b) != tab.mult_elem(d, b, elem_deg, elem):
                return False
    return True


def is_regular_central(tab, elem_deg, elem, upto=None):
    """True iff multiplication by a central elem is injective within window."""
    D = tab.D if upto is None else upto
    if not is_central(tab, elem_deg, elem, D):
        raise ValueError("element is not central up to the bound")
    f = tab.field
    for d in range(0, D - elem_deg + 1):
        rows = [tab.mult_elem(d, {i: f.one}, elem_deg, elem) for i in range(tab.dim(d))]
        if sparse_rank(rows, tab.dim(d + elem_deg), f) != tab.dim(d):
            return False
    return True


def multiplication_matrix(tab, d, elem_deg, elem):
    """Right multiplication A_d -> A_{d+elem_deg} as rows (basis images)."""
    f = tab.field
    return [tab.mult_elem(d, {i: f.one}, elem_deg, elem) for i in range(tab.dim(d))]


def veronese(tab, r):
    """Subalgebra on every r-th graded piece, regraded."""
    if r < 1:
        raise ValueError("r must be >= 1")
    D = tab.D // r
    dims = [tab.dim(r * i) for i in range(D + 1)]
    labels = [tab.labels[r * i] for i in range(D + 1)]

    def rule(d, e, i, j):
        return tab.mult(r * d, r * e, i, j)

    return TabulatedAlgebra(
        tab.field, D, dims, labels, dict(tab.unit), rule,
        meta={"kind": "veronese", "r": r},
    )


def quasi_veronese(tab, r):
    """The r x r matrix-shaped regrading; degree-i piece has (p,q) block
    A_{ri+q-p}, multiplied by the convolution rule (a b)_{pq} = sum_k a_{kq} b_{pk}."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if r == 1:
        return TabulatedAlgebra(
            tab.field, tab.D, list(tab.dims), tab.labels, dict(tab.unit),
            tab.mult, meta={"kind": "quasi_veronese", "r": 1},
        )
    D = max(0, (tab.D - (r - 1)) // r)
    basis = []      # basis[i] = list of (p, q, k)
    offsets = []    # offsets[i][(p, q)] = first index of that block
    labels = []
    for i in range(D + 1):
        row = []
        offs = {}
        labs = []
        for p in range(r):
            for q in range(r):
                inner = r * i + q - p
                offs[(p, q)] = len(row)
                if 0 <= inner <= tab.D:
                    for k in range(tab.dim(inner)):
                        row.append((p, q, k))
                        labs.append("E[%d,%d]%s" % (p, q, tab.labels[inner][k]))
        basis.append(row)
        offsets.append(offs)
        labels.append(labs)
    dims = [len(b) for b in basis]
    f = tab.field

    def rule(d, e, i, j):
        p1, q1, k1 = basis[d][i]
        p2, q2, k2 = basis[e][j]
        if p1 != q2:
            return {}
        inner1 = r * d + q1 - p1
        inner2 = r * e + q2 - p2
        prod = tab.mult(inner1, inner2, k1, k2)
        off = offsets[d + e][(p2, q1)]
        return {off + k: c for k, c in prod.items()}

    unit = {}
    for p in range(r):
        off = offsets[0][(p, p)]
        for k, c in tab.unit.items():
            unit[off + k] = c
    block0 = [[tab.dim(q - p) for q in range(r)] for p in range(r)]
    return TabulatedAlgebra(
        f, D, dims, labels, unit, rule,
        meta={"kind": "quasi_veronese", "r": r, "degree0_blocks": block0},
    )


def beilinson(tab, ell):
    """Degree-0 part of the ell-th quasi-Veronese: upper-triangular blocks A_{q-p}."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    qv = quasi_veronese(tab, ell)
    return qv.degree0()


def twist(tab, sigma):
    """Twisted algebra by the system {sigma^i}: x * y = x . sigma^(deg x)(y)."""
    f = tab.field

    def rule(d, e, i, j):
        img = sigma.power(d).apply(e, {j: f.one})
        out = {}
        for k, c in img.items():
            for m, x in tab.mult(d, e, i, k).items():
                v = f.add(out.get(m, f.zero), f.mul(c, x))
                if v == f.zero:
                    out.pop(m, None)
                else:
                    out[m] = v
        return out

    return TabulatedAlgebra(
        f, tab.D, list(tab.dims), tab.labels, dict(tab.unit), rule,
        meta={"kind": "twist", "base": tab},
    )


def opposite(tab):
    """Opposite algebra: mult'(x, y) = mult(y, x)."""

    def rule(d, e, i, j):
        return tab.mult(e, d, j, i)

    return TabulatedAlgebra(
        tab.field, tab.D, list(tab.dims), tab.labels, dict(tab.unit), rule,
        meta={"kind": "opposite", "base": tab},
    )


def check_automorphism(a, images, upto=None):
    """Verify generator images define a graded automorphism up to the bound.

    images: {generator name: NcPoly or string}.  Returns (ok, maps, failures)
    where maps is the DegreewiseMaps of the induced action on normal words.
    """
    D = a.truncation if upto is None else upto
    field = a.field
    imgs = {}
    failures = []
    for name in a.gens.names:
        if name not in images:
            failures.append("no image for generator %s" % name)
            return False, None, failures
        p = images[name]
        if isinstance(p, str):
            p = a.poly(p)
        gi = a.gens.index(name)
        if p.degree() != a.gens.degrees[gi]:
            failures.append("image of %s is not homogeneous of its degree" % name)
            return False, None, failures
        imgs[gi] = p

    def map_poly(p):
        out = NcPoly.zero(a.gens, field)
        for w, c in p.terms.items():
            acc = NcPoly.one(a.gens, field)
            for letter in w:
                acc = acc * imgs[letter]
            out = out + acc.scale(c)
        return out

    for r in a.relations:
        if not a.nf(map_poly(r)).is_zero():
            failures.append("relation %r not preserved" % r)
    if failures:
        return False, None, failures

    cols = []
    for d in range(D + 1):
        words = a.basis_words(d)
        index = {w: i for i, w in enumerate(words)}
        col_d = []
        for w in words:
            img = a.nf(map_poly(NcPoly(a.gens, {w: field.one}, field)))
            col_d.append({index[u]: c for u, c in img.terms.items()})
        if sparse_rank(col_d, len(words), field) != len(words):
            failures.append("induced map not invertible in degree %d" % d)
            return False, None, failures
        cols.append(col_d)
    dims = [len(c) for c in cols]
    return True, DegreewiseMaps(field, cols, dims), []


def koszul_dual(a):
    """Quadratic dual: generators the dual basis, relations the orthogonal
    complement of the relation space under <xi eta, v w> = xi(v) eta(w)."""
    if any(d != 1 for d in a.gens.degrees):
        raise ValueError("Koszul dual requires all generators in degree 1")
    if any(r.degree() != 2 for r in a.relations):
        raise ValueError("Koszul dual requires quadratic relations")
    field = a.field
    n = len(a.gens)
    words2 = monomials_of_degree(a.gens, 2)
    col = {w: i for i, w in enumerate(words2)}
    rows = []
    for r in a.relations:
        rows.append({col[w]: c for w, c in r.terms.items()})
    perp = sparse_kernel(rows, n * n, field)
    rank = sparse_rank(rows, n * n, field)
    if len(perp) + rank != n * n:
        raise AssertionError("orthogonal complement dimension check failed")
    dual_names = tuple(name + "'" for name in a.gens.names)
    dual_gens = GeneratorSet(dual_names, (1,) * n)
    rels = []
    for v in perp:
        rels.append(NcPoly(dual_gens, {words2[c]: x for c, x in v.items()}, field))
    return PresentedAlgebra(dual_gens, rels, a.truncation, field)


def find_central_degree2(tab):
    """Basis of {z in A_2 : zg = gz for all degree-1 g}, each confirmed
    central up to the truncation degree."""
    if tab.D < 3:
        raise ValueError("need truncation >= 3")
    f = tab.field
    n2 = tab.dim(2)
    n1 = tab.dim(1)
    n3 = tab.dim(3)
    images = []
    for i in range(n2):
        row = {}
        for j in range(n1):
            left = tab.mult(2, 1, i, j)
            right = tab.mult(1, 2, j, i)
            keys = set(left) | set(right)
            for k in keys:
                v = f.sub(left.get(k, f.zero), right.get(k, f.zero))
                if v != f.zero:
                    row[j * n3 + k] = v
        images.append(row)
    kern = kernel_of_images(images, f)
    return [z for z in kern if is_central(tab, 2, z)]


def c_of_a(tab, z):
    """Degree-0 part of the localization at a central degree-2 element.

    Finds the smallest level i0 at which multiplication by z is bijective on
    consecutive even slices (and on every slice needed to transport the
    product back), then returns A_{2 i0} with product a o b = (a.b).z^{-i0}.
    Raises StabilizationError when no such level fits in the window."""
    f = tab.field
    if not is_central(tab, 2, z):
        raise ValueError("z is not central up to the truncation")

    def zmap(i):
        return multiplication_matrix(tab, 2 * i, 2, z)

    def bijective(i):
        nd, nc = tab.dim(2 * i), tab.dim(2 * i + 2)
        if nd != nc or nd == 0:
            return False
        return sparse_rank(zmap(i), nc, f) == nd

    i0 = None
    for cand in range(1, tab.D // 4 + 1):
        needed = sorted({cand, cand + 1} | set(range(cand, 2 * cand)))
        if 2 * max(needed) + 2 > tab.D:
            break
        if all(bijective(i) for i in needed):
            i0 = cand
            break
    if i0 is None:
        raise StabilizationError(
            "multiplication by z does not stabilize within truncation %d" % tab.D
        )

    n = tab.dim(2 * i0)
    # transport map T = .z^{i0} : A_{2 i0} -> A_{4 i0}
    timg = []
    for i in range(n):
        v = {i: f.one}
        d = 2 * i0
        for _ in range(i0):
            v = tab.mult_elem(d, v, 2, z)
            d += 2
        timg.append(v)
    ech = Echelon(f, track=True)
    for v in timg:
        if ech.add(v) is None:
            raise StabilizationError("transport map is not injective")

    def transport_back(vec):
        co = ech.coordinates(vec)
        if co is None:
            raise StabilizationError("product left the stabilized slice")
        return co

    mult = []
    for i in range(n):
        row = []
        for j in range(n):
            prod = tab.mult(2 * i0, 2 * i0, i, j)
            row.append(transport_back(prod))
        mult.append(row)
    zdeg, zpow = tab.power_elem(2, z, i0)
    assert zdeg == 2 * i0
    alg = FiniteDimAlgebra(
        f, list(tab.labels[2 * i0]), mult, zpow,
        meta={"stabilization_level": i0},
    )
    if not alg.check_associativity_full():
        raise AssertionError("localization slice product is not associative")
    return alg


class FiniteDimAlgebra:
    """Structure constants of a finite dimensional unital algebra."""

    def __init__(self, field, labels, mult, unit, meta=None):
        self.field = field
        self.labels = list(labels)
        self.dim = len(labels)
        self.mult = mult
        self.unit = dict(unit)
        self.meta = meta or {}

    def elem_mult(self, x, y):
        f = self.field
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                ab = f.mul(a, b)
                for k, c in self.mult[i][j].items():
                    v = f.add(out.get(k, f.zero), f.mul(ab, c))
                    if v == f.zero:
                        out.pop(k, None)
                    else:
                        out[k] = v
        return out

    def left_mult_matrix(self, x):
        """Columns of L_x as a list over basis index j of image dicts."""
        f = self.field
        return [self.elem_mult(x, {j: f.one}) for j in range(self.dim)]

    def check_associativity_full(self):
        f = self.field
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.mult[i][j]
                for k in range(self.dim):
                    left = self.elem_mult(ij, {k: f.one})
                    right = self.elem_mult({i: f.one}, self.mult[j][k])
                    if left != right:
                        return False
        u = self.unit
        for i in range(self.dim):
            e = {i: f.one}
            if self.elem_mult(u, e) != e or self.elem_mult(e, u) != e:
                return False
        return True

    def _trace_of_left_mult(self, x):
        f = self.field
        t = f.zero
        for j in range(self.dim):
            img = self.elem_mult(x, {j: f.one})
            c = img.get(j)
            if c:
                t = f.add(t, c)
        return t

    def radical_basis(self):
        """Kernel of the trace form of the regular representation (char 0)."""
        if self.field.char != 0:
            raise ValueError("radical via trace form requires characteristic 0")
        f = self.field
        rows = []
        for i in range(self.dim):
            row = {}
            for j in range(self.dim):
                t = self._trace_of_left_mult(self.mult[i][j])
                if t != f.zero:
                    row[j] = t
            rows.append(row)
        return sparse_kernel(rows, self.dim, f)

    def center_basis(self):
        f = self.field
        images = []
        for i in range(self.dim):
            row = {}
            for j in range(self.dim):
                left = self.mult[i][j]
                right = self.mult[j][i]
                for k in set(left) | set(right):
                    v = f.sub(left.get(k, f.zero), right.get(k, f.zero))
                    if v != f.zero:
                        row[j * self.dim + k] = v
            images.append(row)
        return kernel_of_images(images, f)


# univariate polynomial helpers over the rationals (ascending coefficients)


def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _poly_trim(out)


def _poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and _poly_trim(a):
        if len(a) < len(b):
            break
        c = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[k + i] -= c * y
        _poly_trim(a)
    return _poly_trim(q), a


def _poly_mod(a, b):
    return _poly_divmod(a, b)[1]


def _poly_xgcd(a, b):
    """(g, s, t) with s a + t b = g, g monic."""
    r0, r1 = list(a), list(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while _poly_trim(list(r1)):
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_trim([x - y for x, y in _pad(s0, _poly_mul(q, s1))])
        t0, t1 = t1, _poly_trim([x - y for x, y in _pad(t0, _poly_mul(q, t1))])
    if r0:
        lead = r0[-1]
        r0 = [c / lead for c in r0]
        s0 = [c / lead for c in s0]
        t0 = [c / lead for c in t0]
    return r0, s0, t0


def _pad(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [Fraction(0)] * (n - len(a)), list(b) + [Fraction(0)] * (n - len(b)))


def _factor_rational_poly(coeffs):
    """Irreducible monic factors (with multiplicity) of a rational polynomial."""
    from sympy import Poly, Rational, symbols

    t = symbols("t")
    expr = sum(Rational(c.numerator, c.denominator) * t**i for i, c in enumerate(coeffs))
    _, factors = Poly(expr, t, domain="QQ").factor_list()
    out = []
    for fac, mult in factors:
        cs = [Fraction(str(c)) for c in reversed(fac.all_coeffs())]
        lead = cs[-1]
        cs = [c / lead for c in cs]
        out.append((cs, mult))
    return out


def semisimple_type(alg):
    """Radical / center / block analysis of a finite dimensional algebra.

    Exact over the rationals: the radical is the kernel of the trace form of
    the regular representation, and blocks are probed by splitting the center
    (an etale algebra when semisimple).  When the center has an irreducible
    factor of degree > 1, the corresponding blocks stay unresolved over Q and
    the report says so rather than guessing a splitting field."""
    if alg.field != QQ:
        raise ValueError("semisimple_type requires the rational field")
    rad = alg.radical_basis()
    center = alg.center_basis()
    report = {
        "dimension": alg.dim,
        "radical_dimension": len(rad),
        "semisimple": len(rad) == 0,
        "center_dimension": len(center),
        "blocks": None,
        "blocks_resolved": False,
        "method": "trace-form radical; blocks via central idempotents over Q",
    }
    if rad:
        return report
    m = len(center)
    f = alg.field
    # find a primitive element of the center with squarefree minimal polynomial
    best = None
    candidates = []
    for i in range(m):
        candidates.append(center[i])
    for t in range(1, m * m + 2):
        acc = {}
        for i, z in enumerate(center):
            for k, c in z.items():
                acc[k] = acc.get(k, f.zero) + c * Fraction(t) ** i
        candidates.append({k: v for k, v in acc.items() if v != 0})
    for u in candidates:
        ech = Echelon(f, track=True)
        power = dict(alg.unit)
        coeffs = None
        while True:
            if ech.add(power) is None:
                coeffs = ech.last_kernel
                break
            power = alg.elem_mult(power, u)
        deg = max(coeffs)
        minpoly = [coeffs.get(i, f.zero) for i in range(deg + 1)]
        if deg == m:
            fac = _factor_rational_poly(minpoly)
            if all(mult == 1 for _, mult in fac):
                best = (u, minpoly, fac)
                break
    if best is None:
        report["note"] = "no primitive central element found; blocks unresolved over Q"
        return report
    u, minpoly, factors = best
    blocks = []
    resolved = True
    for fac, _ in factors:
        if len(fac) - 1 > 1:
            resolved = False
        cof, _ = _poly_divmod(minpoly, fac)
        g, s, _ = _poly_xgcd(cof, fac)
        if len(g) != 1:
            resolved = False
            continue
        h = _poly_mul(s, cof)  # h(u) is the idempotent for this factor
        e = {}
        power = dict(alg.unit)
        for c in h:
            if c != 0:
                for k, v in power.items():
                    e[k] = e.get(k, f.zero) + c * v
            power = alg.elem_mult(power, u)
        e = {k: v for k, v in e.items() if v != 0}
        rows = [alg.elem_mult(e, {j: f.one}) for j in range(alg.dim)]
        blocks.append(sparse_rank(rows, alg.dim, f))
    report["blocks"] = sorted(blocks, reverse=True)
    report["blocks_resolved"] = resolved
    if not resolved:
        report["note"] = "center does not split over Q; blocks unresolved over Q"
    return report
