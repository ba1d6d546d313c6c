"""Dense univariate polynomials with coefficients in one FieldSpec.

Used for kernel polynomials, rational isogeny maps and root finding.
Coefficients are stored ascending; the zero polynomial has no coefficients.
"""

from __future__ import annotations

import random

from .errors import BadInput, DivisionByZero
from .field import FieldElement, FieldSpec


class Poly:
    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: FieldSpec, coeffs):
        cs = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                cs.append(c)
            else:
                cs.append(spec.element(c))
        while cs and cs[-1].is_zero():
            cs.pop()
        self.spec = spec
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, spec):
        return cls(spec, [])

    @classmethod
    def one(cls, spec):
        return cls(spec, [1])

    @classmethod
    def x(cls, spec):
        return cls(spec, [0, 1])

    @classmethod
    def from_roots(cls, spec, roots):
        out = cls.one(spec)
        for r in roots:
            out = out * cls(spec, [-r, spec.one()])
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.spec == other.spec
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.spec, self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        return "Poly(" + ", ".join(repr(c) for c in self.coeffs) + ")"

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(self.spec, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Poly(self.spec, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            k = self.spec.element(other) if isinstance(other, int) else other
            return Poly(self.spec, [c * k for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.spec)
        out = [self.spec.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.spec, out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        if self.degree < other.degree:
            return Poly.zero(self.spec), self
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = other.coeffs[-1].inverse()
        q = [self.spec.zero()] * (len(rem) - db)
        for k in range(len(rem) - db - 1, -1, -1):
            c = rem[k + db] * inv_lead
            if not c.is_zero():
                q[k] = c
                for j, bc in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - c * bc
        return Poly(self.spec, q), Poly(self.spec, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero() or self.coeffs[-1] == self.spec.one():
            return self
        inv = self.coeffs[-1].inverse()
        return Poly(self.spec, [c * inv for c in self.coeffs])

    def gcd(self, other) -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> "Poly":
        return Poly(self.spec,
                    [c * i for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: FieldElement) -> FieldElement:
        acc = self.spec.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def pow_mod(self, e: int, modulus: "Poly") -> "Poly":
        result = Poly.one(self.spec)
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return result

    def scale_x(self, u: FieldElement) -> "Poly":
        """The polynomial f(u*x)."""
        out, uk = [], self.spec.one()
        for c in self.coeffs:
            out.append(c * uk)
            uk = uk * u
        return Poly(self.spec, out)

    def descends_to(self, k: int) -> bool:
        """Whether every coefficient lies in the subfield F_{p^k}."""
        return all(c.in_subfield(k) for c in self.coeffs)


def roots(f: Poly, rng: random.Random | None = None) -> list:
    """All roots of f in its coefficient field (Cantor-Zassenhaus).

    Multiplicities are dropped; the returned list is sorted by coefficient
    vector so results are deterministic regardless of the rng.
    """
    if rng is None:
        rng = random.Random(0)
    spec = f.spec
    if f.is_zero():
        raise BadInput("zero polynomial has every root")
    f = f.monic()
    # isolate the part that splits into distinct linear factors over F_q
    xq = Poly.x(spec).pow_mod(spec.order, f)
    g = f.gcd(xq - Poly.x(spec))
    out = []
    _split_linear(g, rng, out)
    out.sort(key=lambda e: e.coeffs)
    return out


def _split_linear(g: Poly, rng, out):
    spec = g.spec
    if g.degree == 0:
        return
    if g.degree == 1:
        out.append(-g.coeffs[0])
        return
    if g.coeffs[0].is_zero():
        out.append(spec.zero())
        _split_linear((g // Poly.x(spec)).monic(), rng, out)
        return
    half = (spec.order - 1) // 2
    while True:
        delta = spec.random_element(rng)
        probe = Poly(spec, [delta, spec.one()]).pow_mod(half, g) - Poly.one(spec)
        h = g.gcd(probe)
        if 0 < h.degree < g.degree:
            _split_linear(h, rng, out)
            _split_linear((g // h).monic(), rng, out)
            return
