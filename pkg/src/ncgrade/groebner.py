"""Degree-truncated reduced two-sided Groebner bases in a free algebra.

Completion follows the diamond-lemma pattern: resolve overlap ambiguities of
leading words in increasing overlap degree up to the truncation bound, then
inter-reduce.  A truncated basis certifies conclusions only for degrees up to
its bound; callers are expected to surface that bound in their own reports.
"""

import heapq

from .field import QQ
from .freealg import NcPoly


class TruncationError(Exception):
    """A query exceeded the degree bound of a truncated object."""


class Ideal:
    """Two-sided ideal given by homogeneous generators of degree >= 1."""

    def __init__(self, gens, relations, field=QQ):
        self.gens = gens
        self.field = field
        rels = []
        for r in relations:
            if r.is_zero():
                continue
            d = r.degree()
            if d is None:
                raise ValueError("inhomogeneous relation: %r" % r)
            if d < 1:
                raise ValueError("relations must have degree >= 1")
            rels.append(r)
        self.relations = tuple(rels)

    def __repr__(self):
        return "Ideal(%s)" % ", ".join(repr(r) for r in self.relations)


def _find_subword(w, sub):
    n, m = len(w), len(sub)
    if m > n:
        return -1
    first = sub[0]
    for i in range(n - m + 1):
        if w[i] == first and w[i : i + m] == sub:
            return i
    return -1


class GroebnerBasis:
    """Monic inter-reduced truncated basis with normal-form machinery."""

    def __init__(self, gens, elements, truncation, field=QQ, reduced=True):
        self.gens = gens
        self.field = field
        self.truncation = truncation
        self.elements = list(elements)
        self.reduced = reduced
        self._lws = [e.leading_word() for e in self.elements]
        self._nw_cache = {}

    def leading_words(self):
        return list(self._lws)

    def normal_form(self, p):
        """Fully reduce p: no term contains a leading word as a subword.

        Deterministic: always rewrites the largest reducible word, at its
        leftmost reducible position, by the first matching basis element."""
        if any(self.gens.word_degree(w) > self.truncation for w in p.terms):
            raise TruncationError(
                "polynomial degree exceeds truncation %d" % self.truncation
            )
        f = self.field
        gens = self.gens
        work = dict(p.terms)
        done = {}
        lws = self._lws
        elems = self.elements
        while work:
            w = max(work, key=gens.deglex_key)
            c = work.pop(w)
            best = None
            for k, lw in enumerate(lws):
                pos = _find_subword(w, lw)
                if pos >= 0 and (best is None or pos < best[0]):
                    best = (pos, k)
            if best is None:
                v = f.add(done.get(w, f.zero), c)
                if v == f.zero:
                    done.pop(w, None)
                else:
                    done[w] = v
                continue
            pos, k = best
            g = elems[k]
            lw = lws[k]
            left, right = w[:pos], w[pos + len(lw):]
            # w == left*lw*right; subtract c * left*g*right (g monic)
            for u, a in g.terms.items():
                if u == lw:
                    continue
                nw = left + u + right
                v = f.sub(work.get(nw, f.zero), f.mul(c, a))
                if v == f.zero:
                    work.pop(nw, None)
                else:
                    work[nw] = v
        return NcPoly(self.gens, done, f)

    def is_normal_word(self, w):
        return all(_find_subword(w, lw) < 0 for lw in self._lws)

    def normal_words(self, d):
        """Sorted degree-d words with no leading-word subword (basis of A_d)."""
        if d > self.truncation:
            raise TruncationError("degree %d exceeds truncation %d" % (d, self.truncation))
        if d in self._nw_cache:
            return self._nw_cache[d]
        degs = self.gens.degrees
        n = len(degs)
        lws = self._lws
        out = []

        def ok_suffix(word):
            # word was normal before its last letter was appended
            L = len(word)
            for lw in lws:
                m = len(lw)
                if m <= L and tuple(word[L - m :]) == lw:
                    return False
            return True

        def extend(word, remaining):
            if remaining == 0:
                out.append(tuple(word))
                return
            for i in range(n):
                if degs[i] <= remaining:
                    word.append(i)
                    if ok_suffix(word):
                        extend(word, remaining - degs[i])
                    word.pop()

        extend([], d)
        out.sort(key=self.gens.deglex_key)
        self._nw_cache[d] = out
        return out

    def __repr__(self):
        return "GroebnerBasis(%d elements, truncation %d)" % (
            len(self.elements),
            self.truncation,
        )


def _overlap_spolys(g1, lw1, g2, lw2):
    """Proper overlap S-polynomials where a suffix of lw1 is a prefix of lw2."""
    out = []
    for t in range(1, min(len(lw1), len(lw2))):
        if lw1[len(lw1) - t :] == lw2[:t]:
            # obstruction word lw1 + lw2[t:]
            s = g1.mul_word((), lw2[t:]) - g2.mul_word(lw1[: len(lw1) - t], ())
            out.append(s)
    return out


def buchberger_truncated(ideal, truncation):
    """Truncated reduced Groebner basis of a homogeneous two-sided ideal.

    All overlap ambiguities with obstruction word of degree <= truncation are
    resolved; the result is inter-reduced, monic, and canonically sorted, so
    it does not depend on processing order."""
    gens = ideal.gens
    field = ideal.field
    maxgen = max((r.degree() for r in ideal.relations), default=1)
    if truncation < maxgen:
        raise ValueError("truncation below maximal generator degree")
    gb = GroebnerBasis(gens, [], truncation, field, reduced=False)

    counter = 0
    queue = []  # (degree, tiebreak, poly)
    for r in ideal.relations:
        heapq.heappush(queue, (r.degree(), counter, r))
        counter += 1

    def push(p):
        nonlocal counter
        d = p.degree()
        if d is not None and d <= truncation:
            heapq.heappush(queue, (d, counter, p))
            counter += 1

    while queue:
        _, _, p = heapq.heappop(queue)
        r = gb.normal_form(p)
        if r.is_zero():
            continue
        g = r.monic()
        lw = g.leading_word()
        # existing elements whose lead is now reducible go back to the queue
        keep_elems, keep_lws = [], []
        for e, elw in zip(gb.elements, gb._lws):
            if _find_subword(elw, lw) >= 0:
                push(e)
            else:
                keep_elems.append(e)
                keep_lws.append(elw)
        gb.elements = keep_elems
        gb._lws = keep_lws
        for other, olw in list(zip(gb.elements, gb._lws)) + [(g, lw)]:
            for s in _overlap_spolys(g, lw, other, olw):
                push(s)
            if other is not g:
                for s in _overlap_spolys(other, olw, g, lw):
                    push(s)
        gb.elements.append(g)
        gb._lws.append(lw)
        gb._nw_cache.clear()

    # final inter-reduction to the canonical reduced basis
    changed = True
    while changed:
        changed = False
        gb.elements.sort(key=lambda e: gens.deglex_key(e.leading_word()))
        gb._lws = [e.leading_word() for e in gb.elements]
        for i in range(len(gb.elements)):
            e = gb.elements[i]
            rest = GroebnerBasis(
                gens,
                gb.elements[:i] + gb.elements[i + 1 :],
                truncation,
                field,
                reduced=False,
            )
            r = rest.normal_form(e)
            if r.is_zero():
                gb.elements.pop(i)
                changed = True
                break
            r = r.monic()
            if r != e:
                gb.elements[i] = r
                changed = True
                break
    gb.elements.sort(key=lambda e: gens.deglex_key(e.leading_word()))
    gb._lws = [e.leading_word() for e in gb.elements]
    gb._nw_cache = {}
    gb.reduced = True
    return gb
