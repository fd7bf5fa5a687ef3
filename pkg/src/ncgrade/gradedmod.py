"""Graded right modules over tabulated algebras.

Modules carry degreewise bases on a window [lo, hi] plus a right action
evaluated against the algebra's multiplication tensors.  Everything
homological (covers, syzygies, resolutions, Hom, Ext) runs degreewise and is
certified only inside the window; callers surface the bounds.

Left-module questions route through `algebra.opposite`.
"""

from .linalg import Echelon, kernel_of_images, sparse_rank
from .algebra import quotient_by_central


class WindowError(Exception):
    """A computation needed module data outside the certified window."""


class GradedModule:
    """Base class: degreewise bases with a right algebra action."""

    algebra = None
    lo = 0
    hi = 0
    name = None

    def dim(self, d):
        raise NotImplementedError

    def act_basis(self, d, i, e, j):
        """(basis i of M_d) . (algebra basis j of degree e), as coords."""
        raise NotImplementedError

    # derived helpers

    def check_degree(self, d):
        if d > self.hi:
            raise WindowError(
                "degree %d outside module window (top %d)" % (d, self.hi)
            )

    def act_vec(self, d, vec, e, j):
        f = self.algebra.field
        out = {}
        for i, c in vec.items():
            for k, x in self.act_basis(d, i, e, j).items():
                v = f.add(out.get(k, f.zero), f.mul(c, x))
                if v == f.zero:
                    out.pop(k, None)
                else:
                    out[k] = v
        return out

    def act_vec_elem(self, d, vec, e, elem):
        f = self.algebra.field
        out = {}
        for j, a in elem.items():
            img = self.act_vec(d, vec, e, j)
            for k, x in img.items():
                v = f.add(out.get(k, f.zero), f.mul(a, x))
                if v == f.zero:
                    out.pop(k, None)
                else:
                    out[k] = v
        return out

    def dims(self, lo=None, hi=None):
        lo = self.lo if lo is None else lo
        hi = self.hi if hi is None else hi
        return {d: self.dim(d) for d in range(lo, hi + 1)}

    def hilbert_window(self):
        from .algebra import HilbertSeries

        return HilbertSeries([self.dim(d) for d in range(self.lo, self.hi + 1)])

    def generators(self):
        """Minimal generator records (degree, coords): complement of the
        graded radical image, extracted degree by degree."""
        if not hasattr(self, "_gens"):
            self._gens = minimal_generators(self)
        return self._gens


class FreeModule(GradedModule):
    """Direct sum of shifted copies of the algebra, F = (+)_j A(-s_j)."""

    def __init__(self, algebra, shifts, name=None):
        self.algebra = algebra
        self.shifts = tuple(shifts)
        self.name = name
        self.lo = min(self.shifts) if self.shifts else 0
        self.hi = algebra.D + (min(self.shifts) if self.shifts else 0)
        self._index = {}

    def rank(self):
        return len(self.shifts)

    def basis_layout(self, d):
        """[(slot, offset, dim of A_{d-s_slot})] with cumulative offsets."""
        key = d
        lay = self._index.get(key)
        if lay is None:
            lay = []
            off = 0
            for slot, s in enumerate(self.shifts):
                n = self.algebra.dim(d - s)
                lay.append((slot, off, n))
                off += n
            self._index[key] = lay
        return lay

    def dim(self, d):
        if d > self.hi:
            raise WindowError("degree %d above free module window" % d)
        return sum(n for _, _, n in self.basis_layout(d))

    def split_index(self, d, i):
        for slot, off, n in self.basis_layout(d):
            if off <= i < off + n:
                return slot, i - off
        raise IndexError(i)

    def offset(self, d, slot):
        return self.basis_layout(d)[slot][1]

    def act_basis(self, d, i, e, j):
        slot, k = self.split_index(d, i)
        s = self.shifts[slot]
        prod = self.algebra.mult(d - s, e, k, j)
        off = self.offset(d + e, slot)
        return {off + k2: c for k2, c in prod.items()}

    def slot_unit(self, slot):
        """The canonical generator of slot as (degree, coords)."""
        s = self.shifts[slot]
        off = self.offset(s, slot)
        return s, {off + k: c for k, c in self.algebra.unit.items()}

    def generators(self):
        return [self.slot_unit(j) for j in range(len(self.shifts))]


class CokerModule(GradedModule):
    """Cokernel of a matrix of homogeneous algebra elements acting on columns
    of a free module: M = coker( (+)_j A(-s1_j) --mat--> (+)_i A(-s0_i) )."""

    def __init__(self, algebra, shifts0, shifts1, entries, name=None):
        self.algebra = algebra
        self.f0 = FreeModule(algebra, shifts0)
        self.f1 = FreeModule(algebra, shifts1)
        # entries[i][j]: (degree, coords) or None; degree must be s1_j - s0_i
        for i, row in enumerate(entries):
            for j, ent in enumerate(row):
                if ent is None:
                    continue
                deg, _ = ent
                if deg != shifts1[j] - shifts0[i]:
                    raise ValueError(
                        "entry (%d,%d) has degree %d, expected %d"
                        % (i, j, deg, shifts1[j] - shifts0[i])
                    )
        self.entries = entries
        self.name = name
        self.lo = min(shifts0) if shifts0 else 0
        self.hi = min(self.f0.hi, self.f1.hi)
        self._deg = {}

    def map_column_images(self, d):
        """Images in F0_d of the degree-d basis of F1."""
        imgs = []
        f0, f1 = self.f0, self.f1
        for slot1, _, n in f1.basis_layout(d):
            s1 = f1.shifts[slot1]
            for k in range(n):
                img = {}
                for i, row in enumerate(self.entries):
                    ent = row[slot1]
                    if ent is None:
                        continue
                    edeg, ecoords = ent
                    piece = self.algebra.mult_elem(edeg, ecoords, d - s1, {k: self.algebra.field.one})
                    off = f0.offset(d, i)
                    f = self.algebra.field
                    for k2, c in piece.items():
                        v = f.add(img.get(off + k2, f.zero), c)
                        if v == f.zero:
                            img.pop(off + k2, None)
                        else:
                            img[off + k2] = v
                imgs.append(img)
        return imgs

    def _data(self, d):
        dat = self._deg.get(d)
        if dat is None:
            self.check_degree(d)
            ech = Echelon(self.algebra.field)
            for img in self.map_column_images(d):
                ech.add(img)
            nfree = self.f0.dim(d)
            pivots = set(ech.pivrows)
            coords = [c for c in range(nfree) if c not in pivots]
            dat = (ech, coords, {c: t for t, c in enumerate(coords)})
            self._deg[d] = dat
        return dat

    def dim(self, d):
        if d < self.lo:
            return 0
        self.check_degree(d)
        return len(self._data(d)[1])

    def project(self, d, free_vec):
        """F0_d coords -> cokernel coords."""
        ech, _, place = self._data(d)
        res = ech.reduce(free_vec)
        return {place[c]: x for c, x in res.items()}

    def lift(self, d, vec):
        """Cokernel coords -> representative in F0_d."""
        _, coords, _ = self._data(d)
        return {coords[t]: x for t, x in vec.items()}

    def act_basis(self, d, i, e, j):
        free = self.lift(d, {i: self.algebra.field.one})
        img = self.f0.act_vec(d, free, e, j)
        return self.project(d + e, img)

    def generators(self):
        gens = []
        for slot in range(self.f0.rank()):
            s, unit = self.f0.slot_unit(slot)
            vec = self.project(s, unit)
            gens.append((s, vec))
        return gens


class SubModule(GradedModule):
    """Submodule of a carrier module, given by basis vectors per degree."""

    def __init__(self, carrier, basis_by_degree, name=None, gens=None):
        self.algebra = carrier.algebra
        self.carrier = carrier
        self.basis = dict(basis_by_degree)
        self.lo = min((d for d, b in self.basis.items() if b), default=carrier.lo)
        self.hi = carrier.hi
        self.name = name
        self._ech = {}
        if gens is not None:
            self._gens = gens

    def dim(self, d):
        self.check_degree(d)
        return len(self.basis.get(d, ()))

    def _coords(self, d):
        ech = self._ech.get(d)
        if ech is None:
            ech = Echelon(self.algebra.field, track=True)
            for v in self.basis.get(d, ()):
                ech.add(v)
            self._ech[d] = ech
        return ech

    def include(self, d, vec):
        """Submodule coords -> carrier coords."""
        f = self.algebra.field
        out = {}
        bas = self.basis.get(d, ())
        for t, c in vec.items():
            for k, x in bas[t].items():
                v = f.add(out.get(k, f.zero), f.mul(c, x))
                if v == f.zero:
                    out.pop(k, None)
                else:
                    out[k] = v
        return out

    def restrict(self, d, carrier_vec):
        co = self._coords(d).coordinates(carrier_vec)
        if co is None:
            raise ValueError("vector is not in the submodule in degree %d" % d)
        return co

    def act_basis(self, d, i, e, j):
        cvec = self.basis[d][i]
        img = self.carrier.act_vec(d, cvec, e, j)
        if not img:
            return {}
        return self.restrict(d + e, img)


class QuotientModule(GradedModule):
    """Quotient of a carrier module by the span of given vectors per degree."""

    def __init__(self, carrier, sub_by_degree, name=None):
        self.algebra = carrier.algebra
        self.carrier = carrier
        self.sub = dict(sub_by_degree)
        self.lo = carrier.lo
        self.hi = carrier.hi
        self.name = name
        self._deg = {}

    def _data(self, d):
        dat = self._deg.get(d)
        if dat is None:
            self.check_degree(d)
            ech = Echelon(self.algebra.field)
            for v in self.sub.get(d, ()):
                ech.add(v)
            pivots = set(ech.pivrows)
            coords = [c for c in range(self.carrier.dim(d)) if c not in pivots]
            dat = (ech, coords, {c: t for t, c in enumerate(coords)})
            self._deg[d] = dat
        return dat

    def dim(self, d):
        if d < self.lo:
            return 0
        return len(self._data(d)[1])

    def project(self, d, carrier_vec):
        ech, _, place = self._data(d)
        res = ech.reduce(carrier_vec)
        return {place[c]: x for c, x in res.items()}

    def lift(self, d, vec):
        _, coords, _ = self._data(d)
        return {coords[t]: x for t, x in vec.items()}

    def act_basis(self, d, i, e, j):
        free = self.lift(d, {i: self.algebra.field.one})
        img = self.carrier.act_vec(d, free, e, j)
        return self.project(d + e, img)


class ShiftModule(GradedModule):
    """M(n): degree d piece is M_{n+d}."""

    def __init__(self, inner, n, name=None):
        self.algebra = inner.algebra
        self.inner = inner
        self.n = n
        self.lo = inner.lo - n
        self.hi = inner.hi - n
        self.name = name or (inner.name and "%s(%d)" % (inner.name, n))

    def dim(self, d):
        return self.inner.dim(d + self.n)

    def act_basis(self, d, i, e, j):
        return self.inner.act_basis(d + self.n, i, e, j)

    def generators(self):
        return [(d - self.n, vec) for d, vec in self.inner.generators()]


class TwistModule(GradedModule):
    """M_nu: same graded pieces, action m * a = m . nu(a)."""

    def __init__(self, inner, nu, name=None):
        self.algebra = inner.algebra
        self.inner = inner
        self.nu = nu
        self.lo = inner.lo
        self.hi = inner.hi
        self.name = name or (inner.name and inner.name + "_nu")

    def dim(self, d):
        return self.inner.dim(d)

    def act_basis(self, d, i, e, j):
        elem = self.nu.apply(e, {j: self.algebra.field.one})
        return self.inner.act_vec_elem(d, {i: self.algebra.field.one}, e, elem)


class SumModule(GradedModule):
    """Direct sum with blockwise coordinates."""

    def __init__(self, parts, name=None):
        self.parts = list(parts)
        self.algebra = self.parts[0].algebra
        self.lo = min(p.lo for p in self.parts)
        self.hi = min(p.hi for p in self.parts)
        self.name = name

    def offsets(self, d):
        offs = []
        off = 0
        for p in self.parts:
            offs.append(off)
            off += p.dim(d) if d >= p.lo else 0
        return offs

    def dim(self, d):
        return sum(p.dim(d) if d >= p.lo else 0 for p in self.parts)

    def split(self, d, i):
        offs = self.offsets(d)
        for t in range(len(self.parts) - 1, -1, -1):
            if i >= offs[t]:
                return t, i - offs[t]
        raise IndexError(i)

    def act_basis(self, d, i, e, j):
        t, k = self.split(d, i)
        img = self.parts[t].act_basis(d, k, e, j)
        off = self.offsets(d + e)[t]
        return {off + k2: c for k2, c in img.items()}

    def generators(self):
        gens = []
        for t, p in enumerate(self.parts):
            for dg, vec in p.generators():
                off = self.offsets(dg)[t]
                gens.append((dg, {off + k: c for k, c in vec.items()}))
        return sorted(gens, key=lambda g: g[0])


class Presentation:
    """Free presentation data: F1 = (+) A(-s1_j) --matrix--> F0 = (+) A(-s0_i).

    Matrix entries are homogeneous algebra elements as (degree, coords), with
    entry (i, j) of degree s1_j - s0_i; None means zero."""

    def __init__(self, f0, f1, entries):
        self.f0 = tuple(f0)
        self.f1 = tuple(f1)
        self.entries = entries


def module_from_presentation(tab, pres, name=None):
    """Cokernel of a presentation over a tabulated algebra."""
    return CokerModule(tab, list(pres.f0), list(pres.f1), pres.entries, name=name)


def shift(m, n, name=None):
    if n == 0:
        return m
    return ShiftModule(m, n, name=name)


def twist_by_auto(m, nu, name=None):
    if nu.is_identity():
        return m
    return TwistModule(m, nu, name=name)


def trivial_quotient_module(algebra, name=None):
    """A / A_{>=1} as a right module (the degree-0 part with trivial action)."""
    free = FreeModule(algebra, [0])
    sub = {}
    for d in range(1, free.hi + 1):
        sub[d] = [{i: algebra.field.one} for i in range(algebra.dim(d))]
    return QuotientModule(free, sub, name=name or "A/A>=1")


def _algebra_generated_tops(algebra):
    """Largest degree g such that A_e = A_{e-1}.A_1 for all 2 <= e <= g."""
    f = algebra.field
    top = algebra.D
    for e in range(2, algebra.D + 1):
        rows = []
        for i in range(algebra.dim(e - 1)):
            for j in range(algebra.dim(1)):
                rows.append(algebra.mult(e - 1, 1, i, j))
        if sparse_rank(rows, algebra.dim(e), f) != algebra.dim(e):
            top = e - 1
            break
    return top


def radical_spans(m, lo, hi):
    """Echelons of (M.rad)_d for lo <= d <= hi, where rad = rad(A_0) + A_{>=1}.

    When the algebra is generated in degree <= 1 the positive part is built
    recursively from degree-1 action; otherwise every A_e acts."""
    algebra = m.algebra
    f = algebra.field
    rad0 = algebra.radical0_basis()
    gen_top = algebra.meta.setdefault("_gen_top", _algebra_generated_tops(algebra))
    spans = {}
    span_vectors = {}
    for d in range(lo, hi + 1):
        ech = Echelon(f)
        vecs = []

        def push(v):
            if v and ech.add(v) is not None:
                vecs.append(v)

        # M_d . rad(A_0)
        if rad0:
            for i in range(m.dim(d)):
                for r in rad0:
                    push(m.act_vec_elem(d, {i: f.one}, 0, r))
        if gen_top >= algebra.D:
            # M_{d-1}.A_1 plus (M.rad)_{d-1}.A_1
            if d - 1 >= m.lo and d - 1 >= lo:
                for i in range(m.dim(d - 1)):
                    for j in range(algebra.dim(1)):
                        push(m.act_basis(d - 1, i, 1, j))
                for v in span_vectors.get(d - 1, ()):
                    for j in range(algebra.dim(1)):
                        push(m.act_vec(d - 1, v, 1, j))
            elif d - 1 >= m.lo:
                # recursion floor: act by every positive degree
                for e in range(1, d - m.lo + 1):
                    for i in range(m.dim(d - e)):
                        for j in range(algebra.dim(e)):
                            push(m.act_basis(d - e, i, e, j))
        else:
            for e in range(1, min(algebra.D, d - m.lo) + 1):
                for i in range(m.dim(d - e)):
                    for j in range(algebra.dim(e)):
                        push(m.act_basis(d - e, i, e, j))
        spans[d] = ech
        span_vectors[d] = vecs
    return spans


def minimal_generators(m, lo=None, hi=None):
    """Generator records (degree, coords): a complement of (M.rad)_d in M_d,
    chosen from coordinate unit vectors in canonical order."""
    lo = m.lo if lo is None else lo
    hi = m.hi if hi is None else hi
    f = m.algebra.field
    spans = radical_spans(m, lo, hi)
    gens = []
    for d in range(lo, hi + 1):
        ech = spans[d]
        for i in range(m.dim(d)):
            if ech.add({i: f.one}) is not None:
                gens.append((d, {i: f.one}))
    return gens


class CoverStep:
    """A surjection F -> M from a free module onto minimal generators."""

    def __init__(self, module, gens):
        self.module = module
        self.gens = gens
        self.free = FreeModule(module.algebra, [d for d, _ in gens])
        self._images = {}

    def images(self, d):
        """Images in M_d of the degree-d basis of the free cover."""
        imgs = self._images.get(d)
        if imgs is None:
            imgs = []
            for slot, _, n in self.free.basis_layout(d):
                gdeg, gvec = self.gens[slot]
                for k in range(n):
                    imgs.append(self.module.act_vec(gdeg, gvec, d - gdeg, k))
            self._images[d] = imgs
        return imgs


def minimal_free_cover(m):
    return CoverStep(m, m.generators())


class Resolution:
    """Iterated minimal free covers F_h -> ... -> F_0 -> M.

    mats[q] (q >= 1) is the matrix of F_q -> F_{q-1} with entries
    (degree, coords) over the algebra; cover0 is the step onto M itself.
    `completed` means the next kernel vanished everywhere in the window.
    """

    def __init__(self, module, cover0, steps, mats, completed, valid_top):
        self.module = module
        self.cover0 = cover0
        self.steps = steps          # list of shift tuples, steps[0] = F_0
        self.mats = mats            # mats[0] unused placeholder
        self.completed = completed
        self.valid_top = valid_top

    def betti(self):
        out = []
        for shifts in self.steps:
            row = {}
            for s in shifts:
                row[s] = row.get(s, 0) + 1
            out.append(row)
        return out

    def free(self, q):
        return FreeModule(self.module.algebra, self.steps[q])

    def max_shift(self, q):
        return max(self.steps[q]) if self.steps[q] else None

    def map_images(self, q, d):
        """Images in F_{q-1}_d of the degree-d basis of F_q."""
        fq = self.free(q)
        fprev = self.free(q - 1)
        algebra = self.module.algebra
        f = algebra.field
        imgs = []
        for slot, _, n in fq.basis_layout(d):
            col = [self.mats[q][i][slot] for i in range(fprev.rank())]
            for k in range(n):
                img = {}
                for i, ent in enumerate(col):
                    if ent is None:
                        continue
                    edeg, ecoords = ent
                    piece = algebra.mult_elem(edeg, ecoords, d - fq.shifts[slot], {k: f.one})
                    off = fprev.offset(d, i)
                    for k2, c in piece.items():
                        v = f.add(img.get(off + k2, f.zero), c)
                        if v == f.zero:
                            img.pop(off + k2, None)
                        else:
                            img[off + k2] = v
                imgs.append(img)
        return imgs


def _entries_from_gens(free_prev, gens):
    """Matrix entries over the algebra for new generators inside free_prev."""
    algebra = free_prev.algebra
    entries = [[None] * len(gens) for _ in range(free_prev.rank())]
    for jg, (gdeg, gvec) in enumerate(gens):
        per_slot = {}
        for idx, c in gvec.items():
            slot, k = free_prev.split_index(gdeg, idx)
            per_slot.setdefault(slot, {})[k] = c
        for slot, coords in per_slot.items():
            entries[slot][jg] = (gdeg - free_prev.shifts[slot], coords)
    return entries


def resolve(m, h, pad=False):
    """Minimal free resolution of m to homological degree h (within window).

    With pad=True every cover gains one redundant generator (a duplicate of
    the first), producing a deliberately non-minimal resolution; Ext values
    must not depend on this."""
    if getattr(m, "periodic_resolution", None) is not None and not pad:
        res = m.periodic_resolution(h)
        if res is not None:
            return res
    cover0 = minimal_free_cover(m)
    gens = list(cover0.gens)
    if pad and gens:
        gens = gens + [gens[0]]
        cover0 = CoverStep(m, gens)
    steps = [tuple(d for d, _ in gens)]
    mats = [None]
    valid_top = min(m.hi, cover0.free.hi)
    res = Resolution(m, cover0, steps, mats, False, valid_top)
    prev_images = cover0.images
    prev_free = cover0.free
    for q in range(1, h + 1):
        # kernel of F_{q-1} -> previous, degree by degree
        kernel = {}
        any_nonzero = False
        for d in range(prev_free.lo, valid_top + 1):
            ker = kernel_of_images(prev_images(d), m.algebra.field)
            if ker:
                kernel[d] = ker
                any_nonzero = True
        if not any_nonzero:
            res.completed = True
            break
        sub = SubModule(prev_free, kernel)
        kgens = minimal_generators(sub, lo=sub.lo, hi=valid_top)
        kgens_carrier = [(d, sub.include(d, v)) for d, v in kgens]
        if pad and kgens_carrier:
            kgens_carrier = kgens_carrier + [kgens_carrier[0]]
        entries = _entries_from_gens(prev_free, kgens_carrier)
        res.steps.append(tuple(d for d, _ in kgens_carrier))
        res.mats.append(entries)
        qq = len(res.steps) - 1
        prev_free = res.free(qq)
        prev_images = lambda d, _q=qq: res.map_images(_q, d)
    return res


def euler_check(res, degrees=None):
    """Exact per-degree identity: dim M_d = sum (-1)^q dim F_q_d + tail."""
    m = res.module
    degrees = range(m.lo, res.valid_top + 1) if degrees is None else degrees
    for d in degrees:
        total = 0
        for q in range(len(res.steps)):
            total += (-1) ** q * res.free(q).dim(d)
        if res.completed:
            tail = 0
        else:
            q = len(res.steps)
            imgs = res.map_images(q - 1, d) if q >= 2 else res.cover0.images(d)
            ker = kernel_of_images(imgs, m.algebra.field)
            tail = (-1) ** q * len(ker)
        if m.dim(d) != total + tail:
            return False
    return True


class HomTable:
    """Dimensions (and optional map bases) of a graded Hom/Ext group."""

    def __init__(self, values, certified, q):
        self.values = values          # {degree: dim}
        self.certified = certified    # {degree: bool}
        self.q = q

    def dim(self, d):
        return self.values.get(d)

    def as_sorted(self):
        return sorted(self.values.items())

    def nonzero(self):
        return {d: v for d, v in self.values.items() if v}

    def __repr__(self):
        return "HomTable(q=%d, %s)" % (self.q, self.as_sorted())


def _hom_complex_images(res, target, q, n):
    """Images of the basis of C^q_n under the differential to C^{q+1}_n.

    C^q_n = (+)_j target_{n + s_j} over slots j of F_q; the differential
    composes with the matrix of F_{q+1} -> F_q."""
    algebra = res.module.algebra
    f = algebra.field
    shifts_q = res.steps[q]
    if q + 1 >= len(res.steps):
        n_cols = 0
        shifts_q1 = ()
    else:
        shifts_q1 = res.steps[q + 1]
    # offsets in C^{q+1}_n
    offs = []
    off = 0
    for s in shifts_q1:
        offs.append(off)
        off += target.dim(n + s) if n + s >= target.lo else 0
    images = []
    mat = res.mats[q + 1] if q + 1 < len(res.steps) else None
    for i, si in enumerate(shifts_q):
        ni = target.dim(n + si) if n + si >= target.lo else 0
        for a in range(ni):
            img = {}
            if mat is not None:
                for j, sj in enumerate(shifts_q1):
                    ent = mat[i][j]
                    if ent is None:
                        continue
                    edeg, ecoords = ent
                    piece = target.act_vec_elem(n + si, {a: f.one}, edeg, ecoords)
                    for k, c in piece.items():
                        v = f.add(img.get(offs[j] + k, f.zero), c)
                        if v == f.zero:
                            img.pop(offs[j] + k, None)
                        else:
                            img[offs[j] + k] = v
            images.append(img)
    return images


def _cert_bound(res, target, q):
    """Largest internal degree with all Hom-complex slices inside windows."""
    shifts = []
    for qq in (q - 1, q, q + 1):
        if 0 <= qq < len(res.steps) and res.steps[qq]:
            shifts.append(max(res.steps[qq]))
    if not shifts:
        return target.hi
    return min(target.hi - s for s in shifts)


def hom_graded(m, n_mod, degrees, with_basis=False):
    """uHom dimensions per internal degree (certified rows only).

    Returns a HomTable; with_basis=True also attaches `basis`, a dict
    degree -> list of ModuleMap."""
    res = resolve(m, 1)
    return _ext_from_resolution(res, m, n_mod, 0, degrees, with_basis)


def ext_graded(m, n_mod, q, degrees, res=None):
    """uExt^q dimensions per internal degree (certified rows only)."""
    if q == 0:
        return hom_graded(m, n_mod, degrees)
    if res is None or len(res.steps) < q + 2 and not res.completed:
        res = resolve(m, q + 1)
    return _ext_from_resolution(res, m, n_mod, q, degrees, False)


def _ext_from_resolution(res, m, n_mod, q, degrees, with_basis):
    f = m.algebra.field
    values, certified = {}, {}
    basis = {} if with_basis else None
    top = _cert_bound(res, n_mod, q)
    for nn in degrees:
        if nn > top:
            certified[nn] = False
            continue
        certified[nn] = True
        if q >= len(res.steps):
            # resolution completed before position q: Ext^q = 0
            if res.completed:
                values[nn] = 0
            else:
                certified[nn] = False
            continue
        if q + 1 >= len(res.steps) and not res.completed:
            # cannot see the incoming relations for position q
            certified[nn] = False
            continue
        imgs = _hom_complex_images(res, n_mod, q, nn)
        kernel = kernel_of_images(imgs, f)
        if q == 0:
            values[nn] = len(kernel)
            if with_basis:
                basis[nn] = [_map_from_cochain(res, m, n_mod, nn, v) for v in kernel]
            continue
        prev = _hom_complex_images(res, n_mod, q - 1, nn)
        rank_prev = 0
        ech = Echelon(f)
        for v in prev:
            if ech.add(v) is not None:
                rank_prev += 1
        values[nn] = len(kernel) - rank_prev
        if values[nn] < 0:
            raise AssertionError("negative Ext dimension: inconsistent complex")
    table = HomTable(values, certified, q)
    if with_basis:
        table.basis = basis
    return table


class ModuleMap:
    """Degree-n homomorphism m -> n_mod recorded by generator images."""

    def __init__(self, source, target, deg, res, cochain):
        self.source = source
        self.target = target
        self.deg = deg
        self._res = res
        self._cochain = cochain  # coords over C^0_deg
        self._sections = {}
        self._mats = {}

    def gen_images(self):
        """Image coords of each F_0 slot generator, aligned with slots."""
        res = self._res
        shifts = res.steps[0]
        out = []
        off = 0
        for s in shifts:
            ni = self.target.dim(self.deg + s) if self.deg + s >= self.target.lo else 0
            vec = {}
            for a in range(ni):
                c = self._cochain.get(off + a)
                if c:
                    vec[a] = c
            out.append(vec)
            off += ni
        return out

    def _section(self, d):
        sec = self._sections.get(d)
        if sec is None:
            ech = Echelon(self.source.algebra.field, track=True)
            for img in self._res.cover0.images(d):
                ech.add(img)
            sec = ech
            self._sections[d] = sec
        return sec

    def apply(self, d, vec):
        """Image in target_{d+deg} of a degree-d source vector."""
        f = self.source.algebra.field
        sec = self._section(d)
        co = sec.coordinates(vec)
        if co is None:
            raise ValueError("vector not in cover image; window too short")
        free = self._res.cover0.free
        gi = self.gen_images()
        out = {}
        for idx, c in co.items():
            slot, k = free.split_index(d, idx)
            s = free.shifts[slot]
            img = self.target.act_vec(self.deg + s, gi[slot], d - s, k)
            for k2, x in img.items():
                v = f.add(out.get(k2, f.zero), f.mul(c, x))
                if v == f.zero:
                    out.pop(k2, None)
                else:
                    out[k2] = v
        return out

    def matrix(self, d):
        mat = self._mats.get(d)
        if mat is None:
            mat = [self.apply(d, {i: self.source.algebra.field.one}) for i in range(self.source.dim(d))]
            self._mats[d] = mat
        return mat


def _map_from_cochain(res, m, n_mod, deg, cochain):
    return ModuleMap(m, n_mod, deg, res, cochain)


def syzygy(m):
    """Kernel of the minimal free cover, as a submodule of the cover."""
    cover = minimal_free_cover(m)
    free = cover.free
    top = min(m.hi, free.hi)
    kernel = {}
    for d in range(free.lo, top + 1):
        ker = kernel_of_images(cover.images(d), m.algebra.field)
        if ker:
            kernel[d] = ker
    name = ("Omega " + m.name) if m.name else None
    sub = SubModule(free, kernel, name=name)
    sub.hi = top
    return sub


def mcm_check(m, hbound=3):
    """True iff uExt^q(m, A) = 0 in certified rows for 1 <= q <= hbound."""
    algebra = m.algebra
    free_a = FreeModule(algebra, [0], name="A")
    res = resolve(m, hbound + 1)
    offending = {}
    for q in range(1, hbound + 1):
        top = _cert_bound(res, free_a, q)
        degrees = range(m.lo - algebra.D, top + 1)
        table = _ext_from_resolution(res, m, free_a, q, degrees, False)
        nz = table.nonzero()
        if nz:
            offending[q] = nz
    return len(offending) == 0, offending


def is_isomorphic(m, n_mod):
    """Exact isomorphism test for minimally generated modules.

    Fast-fails on Hilbert or generator data; otherwise looks for an
    invertible degree-0 homomorphism by expanding the determinant of a
    generic element of Hom on the generator tops symbolically."""
    lo = max(m.lo, n_mod.lo)
    hi = min(m.hi, n_mod.hi)
    if hi < lo:
        raise WindowError("modules have no common window")
    dims_m = [m.dim(d) for d in range(lo, hi + 1)]
    dims_n = [n_mod.dim(d) for d in range(lo, hi + 1)]
    if dims_m != dims_n:
        return False
    if not any(dims_m):
        return True
    gens_m = m.generators()
    gens_n = n_mod.generators()
    if sorted(d for d, _ in gens_m) != sorted(d for d, _ in gens_n):
        return False
    fwd = _invertible_hom_exists(m, n_mod, gens_m, gens_n)
    bwd = _invertible_hom_exists(n_mod, m, gens_n, gens_m)
    if fwd != bwd:
        raise AssertionError("asymmetric isomorphism verdict")
    return fwd


def _top_coordinates(mod, gens, d, vec):
    """Coordinates of vec in M_d/(M.rad)_d against the generator complement."""
    spans = radical_spans(mod, d, d)
    ech = Echelon(mod.algebra.field, track=True)
    base = spans[d].pivrows
    for p, (row, _) in sorted(base.items()):
        ech.add(dict(row))
    n_rad = ech.n_added
    order = []
    for gd, gvec in gens:
        if gd == d:
            ech.add(dict(gvec))
            order.append(len(order))
    co = ech.coordinates(vec)
    if co is None:
        raise ValueError("vector outside computed span")
    return {t - n_rad: c for t, c in co.items() if t >= n_rad}


def _invertible_hom_exists(src, dst, gens_src, gens_dst):
    table = hom_graded(src, dst, [0], with_basis=True)
    if not table.certified.get(0, False):
        raise WindowError("degree-0 Hom not certified; window too short")
    maps = table.basis.get(0, [])
    if not maps:
        return False
    # per generator degree, the top matrix has entries linear in the
    # parameters c_b; the product of determinants must be a nonzero polynomial
    degs = sorted({d for d, _ in gens_src})
    poly_prod = {(0,) * len(maps): src.algebra.field.one}
    for d in degs:
        idx_src = [g for g in gens_src if g[0] == d]
        k = len(idx_src)
        entries = [[None] * k for _ in range(k)]
        for b, mp in enumerate(maps):
            for col, (gd, gvec) in enumerate(idx_src):
                img = mp.apply(d, gvec)
                tops = _top_coordinates(dst, gens_dst, d, img)
                for row, c in tops.items():
                    if entries[row][col] is None:
                        entries[row][col] = {}
                    mono = tuple(1 if t == b else 0 for t in range(len(maps)))
                    entries[row][col][mono] = entries[row][col].get(mono, src.algebra.field.zero) + c
        det = _sym_det(entries, k, len(maps), src.algebra.field)
        poly_prod = _poly_mul_multi(poly_prod, det, src.algebra.field)
        if not poly_prod:
            return False
    return bool(poly_prod)


def _poly_mul_multi(a, b, f):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = f.add(out.get(e, f.zero), f.mul(ca, cb))
            if v == f.zero:
                out.pop(e, None)
            else:
                out[e] = v
    return out


def _sym_det(entries, k, nvars, f):
    """Determinant of a k x k matrix of multivariate linear forms."""
    from itertools import permutations

    if k == 0:
        return {(0,) * nvars: f.one}
    out = {}
    for perm in permutations(range(k)):
        sign = 1
        seen = list(perm)
        # parity by counting inversions
        inv = sum(1 for i in range(k) for j in range(i + 1, k) if seen[i] > seen[j])
        sign = -1 if inv % 2 else 1
        term = {(0,) * nvars: f.of(sign)}
        ok = True
        for i in range(k):
            cell = entries[i][perm[i]]
            if not cell:
                ok = False
                break
            term = _poly_mul_multi(term, cell, f)
        if ok:
            for e, c in term.items():
                v = f.add(out.get(e, f.zero), c)
                if v == f.zero:
                    out.pop(e, None)
                else:
                    out[e] = v
    return out


class MatrixFactorization:
    """A pair (P, Q) of degree-1 matrices over S with PQ = QP = f.E."""

    def __init__(self, ambient, f_poly, P, Q):
        self.ambient = ambient
        self.f_poly = f_poly
        self.P = P
        self.Q = Q


def verify_mf(ambient, f_poly, P, Q):
    """Check PQ = QP = f.E over the presented ambient algebra, exactly."""
    if isinstance(f_poly, str):
        f_poly = ambient.poly(f_poly)
    n = len(P)
    if any(len(row) != n for row in P) or len(Q) != n or any(len(row) != n for row in Q):
        raise ValueError("matrices must be square of equal size")

    def as_poly(x):
        return ambient.poly(x) if isinstance(x, str) else x

    P = [[as_poly(x) for x in row] for row in P]
    Q = [[as_poly(x) for x in row] for row in Q]
    for M in (P, Q):
        for row in M:
            for ent in row:
                if not ent.is_zero() and ent.degree() != 1:
                    return False, "matrix entries must be homogeneous of degree 1"
    if f_poly.degree() != 2:
        return False, "f must be homogeneous of degree 2"
    for A, B in ((P, Q), (Q, P)):
        for i in range(n):
            for j in range(n):
                acc = None
                for k in range(n):
                    t = A[i][k] * B[k][j]
                    acc = t if acc is None else acc + t
                if i == j:
                    acc = acc - f_poly
                if not ambient.nf(acc).is_zero():
                    return False, "product entry (%d,%d) does not reduce to f.E" % (i, j)
    return True, None


def _entries_over_quotient(a_pres, tab, M):
    out = []
    for row in M:
        orow = []
        for ent in row:
            p = a_pres.poly(ent) if isinstance(ent, str) else ent
            d, coords = a_pres.element_coords(p)
            orow.append(None if d is None else (d, coords))
        out.append(orow)
    return out


def mf_cokernel(a_pres, tab, P, Q, name):
    """coker of the first matrix of a verified factorization, over A = S/(f),
    with the attached 2-periodic resolution alternating P, Q.  Exactness of
    the periodic complex is verified degreewise inside the window."""
    n = len(P)
    pbar = _entries_over_quotient(a_pres, tab, P)
    qbar = _entries_over_quotient(a_pres, tab, Q)
    mod = CokerModule(tab, [0] * n, [1] * n, pbar, name=name)
    mod.periodic_resolution = _periodic_resolution_factory(mod, pbar, qbar)
    _verify_periodic_exactness(mod, pbar, qbar)
    return mod


def mf_to_modules(ambient, f_poly, P, Q, name_x="X", name_y="Y", split=False):
    """Cokernel modules over A = S/(f) with attached 2-periodic resolutions.

    With split=False the single factorization (P, Q) yields X = coker P and
    Y = coker Q with alternating resolutions.  With split=True, (P, P) and
    (Q, Q) are two separate factorizations (constant-matrix resolutions).
    Returns (a_pres, a_tab, X, Y)."""
    if isinstance(f_poly, str):
        f_poly = ambient.poly(f_poly)
    pairs = [(P, P), (Q, Q)] if split else [(P, Q)]
    for a_mat, b_mat in pairs:
        ok, reason = verify_mf(ambient, f_poly, a_mat, b_mat)
        if not ok:
            raise ValueError("invalid matrix factorization: %s" % reason)
    a_pres = quotient_by_central(ambient, f_poly)
    tab = a_pres.tabulate()
    if split:
        X = mf_cokernel(a_pres, tab, P, P, name_x)
        Y = mf_cokernel(a_pres, tab, Q, Q, name_y)
    else:
        X = mf_cokernel(a_pres, tab, P, Q, name_x)
        Y = mf_cokernel(a_pres, tab, Q, P, name_y)
    return a_pres, tab, X, Y


def _shift_entries(entries, n):
    return [[ent for ent in row] for row in entries]


def _periodic_resolution_factory(module, first, second):
    n = len(first)

    def make(h):
        steps = [tuple([q] * n) for q in range(h + 1)]
        mats = [None]
        for q in range(1, h + 1):
            src = first if q % 2 == 1 else second
            mats.append([[src[i][j] for j in range(n)] for i in range(n)])
        cover0 = minimal_free_cover(module)
        res = Resolution(module, cover0, steps, mats, False, min(module.hi, module.algebra.D))
        return res

    return make


def _verify_periodic_exactness(module, first, second):
    """dim ker(step q at degree d) == rank(step q+1 at degree d) in window.

    Positions 1 and 2 are checked for all window degrees; higher positions
    are degree shifts of these two by 2-periodicity."""
    res = module.periodic_resolution(3)
    f = module.algebra.field
    for q in (1, 2):
        for d in range(0, res.valid_top + 1):
            kerq = len(kernel_of_images(res.map_images(q, d), f))
            ech = Echelon(f)
            for v in res.map_images(q + 1, d):
                ech.add(v)
            if kerq != ech.rank:
                raise AssertionError(
                    "periodic complex not exact at position %d, degree %d "
                    "(ker %d vs im %d)" % (q, d, kerq, ech.rank)
                )
