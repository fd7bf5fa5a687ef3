"""Words and noncommutative polynomials in a positively graded free algebra.

Words are tuples of generator indices; the monomial order is fixed to
degree-lexicographic with ties broken by the declared generator order.
Polynomials are dicts {word: coefficient} with no zero coefficients.
"""

import re

from .field import QQ


class GeneratorSet:
    """Ordered generators with positive integer degrees."""

    def __init__(self, names, degrees=None):
        names = tuple(names)
        if degrees is None:
            degrees = (1,) * len(names)
        degrees = tuple(int(d) for d in degrees)
        if len(set(names)) != len(names):
            raise ValueError("generator names must be distinct")
        if len(degrees) != len(names):
            raise ValueError("need one degree per generator")
        if any(d < 1 for d in degrees):
            raise ValueError("generator degrees must be >= 1")
        if not all(re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", n) for n in names):
            raise ValueError("generator names must be identifiers")
        self.names = names
        self.degrees = degrees
        self._index = {n: i for i, n in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise KeyError("unknown generator %r" % name) from None

    def word_degree(self, w):
        degs = self.degrees
        return sum(degs[i] for i in w)

    def deglex_key(self, w):
        return (self.word_degree(w), w)

    def __eq__(self, other):
        return (
            isinstance(other, GeneratorSet)
            and self.names == other.names
            and self.degrees == other.degrees
        )

    def __hash__(self):
        return hash((self.names, self.degrees))

    def __repr__(self):
        return "GeneratorSet(%s)" % ", ".join(
            "%s:%d" % (n, d) for n, d in zip(self.names, self.degrees)
        )


def compare_deglex(gens, u, v):
    """-1, 0, or 1 comparing words u, v in degree-lex order."""
    ku, kv = gens.deglex_key(u), gens.deglex_key(v)
    return (ku > kv) - (ku < kv)


def monomials_of_degree(gens, d):
    """All words of total degree d, sorted in deglex order."""
    if d < 0:
        raise ValueError("degree must be >= 0")
    out = []
    degs = gens.degrees
    n = len(degs)

    def extend(prefix, remaining):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for i in range(n):
            if degs[i] <= remaining:
                prefix.append(i)
                extend(prefix, remaining - degs[i])
                prefix.pop()

    extend([], d)
    out.sort(key=gens.deglex_key)
    return out


class NcPoly:
    """Noncommutative polynomial: dict {word: scalar}, zero coeffs removed."""

    __slots__ = ("gens", "field", "terms")

    def __init__(self, gens, terms=None, field=QQ):
        self.gens = gens
        self.field = field
        self.terms = {w: c for w, c in (terms or {}).items() if c != field.zero}

    @staticmethod
    def zero(gens, field=QQ):
        return NcPoly(gens, {}, field)

    @staticmethod
    def one(gens, field=QQ):
        return NcPoly(gens, {(): field.one}, field)

    @staticmethod
    def generator(gens, i, field=QQ):
        return NcPoly(gens, {(i,): field.one}, field)

    @staticmethod
    def monomial(gens, word, coeff=None, field=QQ):
        return NcPoly(gens, {tuple(word): field.one if coeff is None else field.of(coeff)}, field)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, NcPoly)
            and self.gens == other.gens
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.gens, frozenset(self.terms.items())))

    def __add__(self, other):
        self._check(other)
        f = self.field
        t = dict(self.terms)
        for w, c in other.terms.items():
            v = f.add(t.get(w, f.zero), c)
            if v == f.zero:
                t.pop(w, None)
            else:
                t[w] = v
        return NcPoly(self.gens, t, f)

    def __neg__(self):
        f = self.field
        return NcPoly(self.gens, {w: f.neg(c) for w, c in self.terms.items()}, f)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        f = self.field
        c = f.of(c)
        if c == f.zero:
            return NcPoly.zero(self.gens, f)
        return NcPoly(self.gens, {w: f.mul(c, x) for w, x in self.terms.items()}, f)

    def __mul__(self, other):
        self._check(other)
        f = self.field
        t = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u + v
                x = f.add(t.get(w, f.zero), f.mul(a, b))
                if x == f.zero:
                    t.pop(w, None)
                else:
                    t[w] = x
        return NcPoly(self.gens, t, f)

    def _check(self, other):
        if self.gens != other.gens or self.field != other.field:
            raise ValueError("polynomials live in different free algebras")

    def degree(self):
        """Common degree of all terms, or None if inhomogeneous or zero."""
        degs = {self.gens.word_degree(w) for w in self.terms}
        if len(degs) != 1:
            return None
        return degs.pop()

    def is_homogeneous(self):
        return len({self.gens.word_degree(w) for w in self.terms}) <= 1

    def leading_word(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading word")
        return max(self.terms, key=self.gens.deglex_key)

    def leading_coeff(self):
        return self.terms[self.leading_word()]

    def monic(self):
        if not self.terms:
            return self
        c = self.leading_coeff()
        if c == self.field.one:
            return self
        return self.scale(self.field.inv(c))

    def mul_word(self, left, right):
        """u * self * v for words u=left, v=right."""
        left, right = tuple(left), tuple(right)
        return NcPoly(self.gens, {left + w + right: c for w, c in self.terms.items()}, self.field)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: self.gens.deglex_key(t[0]), reverse=True)

    def __repr__(self):
        return format_poly(self)


def format_word(gens, w):
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        name = gens.names[w[i]]
        parts.append(name if j - i == 1 else "%s^%d" % (name, j - i))
        i = j
    return "*".join(parts)


def format_poly(p):
    if not p.terms:
        return "0"
    f = p.field
    out = []
    for w, c in p.sorted_terms():
        ws = format_word(p.gens, w)
        cs = f.to_str(c)
        neg = cs.startswith("-")
        if neg:
            cs = cs[1:]
        if ws == "1":
            body = cs
        elif cs == "1":
            body = ws
        else:
            body = "%s*%s" % (cs, ws)
        if not out:
            out.append("-" + body if neg else body)
        else:
            out.append("- " + body if neg else "+ " + body)
    return " ".join(out)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*/^()]))"
)


def _tokenize(s):
    pos = 0
    out = []
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            raise ValueError("cannot parse polynomial at %r" % s[pos:])
        pos = m.end()
        if m.lastgroup == "num":
            out.append(("num", int(m.group("num"))))
        elif m.lastgroup == "ident":
            out.append(("ident", m.group("ident")))
        else:
            out.append(("op", m.group("op")))
    return out


def parse_poly(s, gens, field=QQ):
    """Parse textual polynomial syntax: terms like `3*x*y^2 - w*z`.

    `*` concatenates, `^` repeats a single generator, coefficients are
    integers or fractions like `2/3`.  Parentheses are not supported; the
    manifest format keeps relations as plain sums of monomials."""
    toks = _tokenize(s)
    if not toks:
        raise ValueError("empty polynomial")
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def parse_factor():
        nonlocal pos
        kind, val = peek()
        if kind == "num":
            pos += 1
            coeff = field.of(val)
            if peek() == ("op", "/"):
                pos += 1
                kind2, val2 = peek()
                if kind2 != "num":
                    raise ValueError("expected integer after '/'")
                pos += 1
                coeff = field.div(coeff, field.of(val2))
            return coeff, ()
        if kind == "ident":
            pos += 1
            idx = gens.index(val)
            exp = 1
            if peek() == ("op", "^"):
                pos += 1
                kind2, val2 = peek()
                if kind2 != "num":
                    raise ValueError("expected integer exponent after '^'")
                pos += 1
                exp = val2
                if exp < 0:
                    raise ValueError("negative exponents not allowed")
            return field.one, (idx,) * exp
        raise ValueError("expected coefficient or generator, got %r" % (val,))

    def parse_term():
        nonlocal pos
        coeff, word = parse_factor()
        while peek() == ("op", "*"):
            pos += 1
            c2, w2 = parse_factor()
            coeff = field.mul(coeff, c2)
            word = word + w2
        return coeff, word

    result = NcPoly.zero(gens, field)
    sign = field.one
    kind, val = peek()
    if (kind, val) == ("op", "-"):
        sign = field.neg(sign)
        pos += 1
    elif (kind, val) == ("op", "+"):
        pos += 1
    while True:
        coeff, word = parse_term()
        result = result + NcPoly(gens, {word: field.mul(sign, coeff)}, field)
        if pos >= len(toks):
            break
        kind, val = toks[pos]
        if (kind, val) == ("op", "+"):
            sign = field.one
        elif (kind, val) == ("op", "-"):
            sign = field.neg(field.one)
        else:
            raise ValueError("expected '+' or '-', got %r" % (val,))
        pos += 1
    return result
