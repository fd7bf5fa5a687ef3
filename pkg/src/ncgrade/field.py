"""Scalar fields: exact rationals (default) and optional prime fields.

A field object carries the arithmetic used by every other module.  Rational
scalars are `fractions.Fraction` (always canonical: reduced, positive
denominator); prime-field scalars are plain ints in [0, p).  A computation
context uses exactly one field throughout; mixing is a bug and the element
constructors guard against it where cheap.
"""

from fractions import Fraction


class Rationals:
    """The field of rational numbers with exact Fraction arithmetic."""

    char = 0
    name = "Q"

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def of(self, x):
        return Fraction(x)

    def parse(self, s):
        return Fraction(s.strip())

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def neg(self, a):
        return -a

    def inv(self, a):
        return 1 / a

    def to_str(self, a):
        a = Fraction(a)
        if a.denominator == 1:
            return str(a.numerator)
        return "%d/%d" % (a.numerator, a.denominator)

    def __repr__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")


class PrimeField:
    """The prime field Z/p with scalars stored as ints in [0, p)."""

    def __init__(self, p):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError("modulus %r is not prime" % (p,))
        self.p = p
        self.char = p
        self.name = "p:%d" % p
        self.zero = 0
        self.one = 1 % p

    def of(self, x):
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.p, x.denominator % self.p)
        return x % self.p

    def parse(self, s):
        return self.of(Fraction(s.strip()))

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def div(self, a, b):
        return (a * pow(b, -1, self.p)) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        return pow(a, -1, self.p)

    def to_str(self, a):
        return str(a % self.p)

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = Rationals()


def field_from_spec(spec):
    """Parse a field spec string: "q"/"Q" for rationals, "p:<prime>" for GF(p)."""
    s = spec.strip()
    if s.lower() in ("q", "rationals"):
        return QQ
    if s.lower().startswith("p:"):
        return PrimeField(int(s[2:]))
    raise ValueError("unknown field spec %r (use 'q' or 'p:<prime>')" % spec)
