"""Arithmetic in F_p and single-step extensions F_{p^n} = F_p[X]/(f).

Elements are coefficient vectors in ascending powers of the generator z
(the image of X).  Intermediate subfields are represented inside the top
field; membership in F_{p^k} is tested with a^(p^k) = a.  Everything is
immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import random

import numpy as np
from sympy import isprime

from .errors import BadInput, DivisionByZero, MixedFields, NotPrime

# Above this extension degree, multiplication switches to a numpy
# convolution + reduction-matrix path (exact int64 arithmetic).
_NUMPY_DEGREE = 16


def legendre(d: int, ell: int) -> int:
    """Legendre symbol (d/ell), extended at ell = 2 by d mod 8.

    For ell = 2: +1 if d = +-1 mod 8, -1 if d = +-3 mod 8, 0 if 2 | d.
    This encodes the split/inert/ramified behaviour of ell in Q(sqrt(d)).
    """
    if not isprime(ell):
        raise NotPrime(f"{ell} is not prime")
    if ell == 2:
        r = d % 8
        if r in (1, 7):
            return 1
        if r in (3, 5):
            return -1
        return 0
    if d % ell == 0:
        return 0
    e = pow(d % ell, (ell - 1) // 2, ell)
    return -1 if e == ell - 1 else 1


# ---------------------------------------------------------------------------
# integer-coefficient polynomial helpers (dense ascending lists mod p)

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _padd(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _ptrim(out)


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _ptrim(out)


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _ptrim([c % p for c in out])


def _pdivmod(a, b, p):
    """Quotient and remainder of a by b (b nonzero) over F_p."""
    a = list(a)
    db, da = len(b) - 1, len(a) - 1
    if da < db:
        return [], _ptrim(a)
    inv_lead = pow(b[-1], -1, p)
    q = [0] * (da - db + 1)
    for k in range(da - db, -1, -1):
        c = (a[k + db] * inv_lead) % p
        if c:
            q[k] = c
            for j in range(db + 1):
                a[k + j] = (a[k + j] - c * b[j]) % p
    return _ptrim(q), _ptrim(a)


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def _poly_is_irreducible(f, p) -> bool:
    """Rabin test: X^(p^n) = X mod f and gcd(X^(p^(n/r)) - X, f) = 1.

    Frobenius powers are taken through the matrix of a -> a^p on the
    quotient ring, which keeps degree-120 moduli affordable.
    """
    n = len(f) - 1
    if n < 1 or f[-1] != 1:
        return False
    if n == 1:
        return True
    # column i of the Frobenius matrix is X^(p*i) mod f
    xp = _pow_x_mod(p, f, p)
    mat = np.zeros((n, n), dtype=np.int64)
    col = [1]
    for i in range(n):
        for j, c in enumerate(col):
            mat[j, i] = c
        if i < n - 1:
            col = _pdivmod(_pmul(col, xp, p), f, p)[1]
    e1 = np.zeros(n, dtype=np.int64)
    e1[1 % n] = 1  # vector of X

    def frob_power(k):
        v = e1.copy()
        m = mat.copy()
        while k:
            if k & 1:
                v = (m @ v) % p
            m = (m @ m) % p
            k >>= 1
        return [int(c) for c in v]

    if _ptrim(frob_power(n)) != [0, 1]:
        return False
    r = n
    primes = set()
    d = 2
    while d * d <= r:
        if r % d == 0:
            primes.add(d)
            while r % d == 0:
                r //= d
        d += 1
    if r > 1:
        primes.add(r)
    for r in primes:
        g = _psub(frob_power(n // r), [0, 1], p)
        if len(_pgcd(g, f, p)) != 1:
            return False
    return True


def _pow_x_mod(e, f, p):
    """X^e mod f over F_p by square and multiply."""
    result = [1]
    base = _pdivmod([0, 1], f, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, p), f, p)[1]
        base = _pdivmod(_pmul(base, base, p), f, p)[1]
        e >>= 1
    return result


def find_irreducible(p: int, n: int) -> tuple:
    """Deterministic monic irreducible polynomial of degree n over F_p."""
    if n == 1:
        return (0, 1)
    for trial in range(10000):
        rng = random.Random((p, n, trial))
        f = [rng.randrange(p) for _ in range(n)] + [1]
        if f[0] == 0:
            f[0] = 1
        if _poly_is_irreducible(f, p):
            return tuple(f)
    raise BadInput(f"no irreducible polynomial found for p={p}, n={n}")


# ---------------------------------------------------------------------------


class FieldSpec:
    """F_{p^n} = F_p[X]/(f) with f a monic irreducible of degree n.

    For n = 1 the modulus is the formal (0, 1) = X and elements are single
    residues.  The modulus is validated at construction, which catches bad
    configs early.
    """

    __slots__ = ("p", "n", "modulus", "_red_rows", "_np_red", "_half",
                 "_nonresidue", "_ts_params")

    def __init__(self, p: int, modulus=None, check: bool = True):
        if check and not isprime(p):
            raise NotPrime(f"characteristic {p} is not prime")
        if p == 2:
            raise BadInput("characteristic 2 is out of scope")
        if modulus is None:
            modulus = (0, 1)
        modulus = tuple(c % p for c in modulus)
        n = len(modulus) - 1
        if n < 1 or modulus[-1] != 1:
            raise BadInput("modulus must be monic of degree >= 1")
        if check and n > 1 and not _poly_is_irreducible(list(modulus), p):
            raise BadInput("modulus is not irreducible over F_p")
        self.p = p
        self.n = n
        self.modulus = modulus
        # rows[i] = X^(n+i) mod f, used to fold products back below degree n
        rows = []
        if n > 1:
            cur = [(-c) % p for c in modulus[:-1]]
            rows.append(list(cur))
            for _ in range(n - 2):
                cur = [0] + cur
                top = cur.pop()
                if top:
                    for j in range(n):
                        cur[j] = (cur[j] + top * rows[0][j]) % p
                rows.append(list(cur))
        self._red_rows = rows
        self._np_red = (np.array(rows, dtype=np.int64)
                        if n > _NUMPY_DEGREE else None)
        self._half = (self.order - 1) // 2
        self._nonresidue = None
        self._ts_params = None

    @property
    def order(self) -> int:
        return self.p ** self.n

    def __eq__(self, other):
        return (isinstance(other, FieldSpec) and self.p == other.p
                and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        if self.n == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.n}"

    # -- construction of elements ------------------------------------------

    def element(self, value) -> "FieldElement":
        """Build an element from an int or an ascending coefficient list."""
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise MixedFields("element belongs to a different field")
            return value
        if isinstance(value, int):
            coeffs = [value % self.p] + [0] * (self.n - 1)
        else:
            coeffs = [c % self.p for c in value]
            if len(coeffs) > self.n:
                raise BadInput("coefficient vector longer than degree")
            coeffs += [0] * (self.n - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def generator(self) -> "FieldElement":
        """The image z of X (only meaningful for n > 1)."""
        return self.element([0, 1])

    def random_element(self, rng: random.Random) -> "FieldElement":
        return FieldElement(
            self, tuple(rng.randrange(self.p) for _ in range(self.n)))

    def elements(self):
        """Iterate over the whole field (intended for small fields)."""
        coeffs = [0] * self.n
        total = self.order
        for _ in range(total):
            yield FieldElement(self, tuple(coeffs))
            for i in range(self.n):
                coeffs[i] += 1
                if coeffs[i] < self.p:
                    break
                coeffs[i] = 0

    # -- internal reduction -------------------------------------------------

    def _reduce(self, raw):
        """Fold a product (length <= 2n-1) below the modulus degree."""
        n = self.n
        p = self.p
        if len(raw) <= n:
            return tuple(c % p for c in raw) + (0,) * (n - len(raw))
        if self._np_red is not None:
            low = np.array(raw[:n], dtype=np.int64)
            high = np.zeros(n - 1, dtype=np.int64)
            high[:len(raw) - n] = raw[n:]
            out = (low + high @ self._np_red) % p
            return tuple(int(c) for c in out)
        out = list(raw[:n])
        rows = self._red_rows
        for i, c in enumerate(raw[n:]):
            if c:
                row = rows[i]
                for j in range(n):
                    out[j] += c * row[j]
        return tuple(c % p for c in out)

    def _mul(self, a, b):
        n = self.n
        if n == 1:
            return ((a[0] * b[0]) % self.p,)
        if self._np_red is not None:
            raw = np.convolve(np.array(a, dtype=np.int64),
                              np.array(b, dtype=np.int64))
            return self._reduce([int(c) for c in raw])
        raw = [0] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    raw[i + j] += ai * bj
        return self._reduce(raw)

    def _nonresidue_element(self) -> "FieldElement":
        """A fixed quadratic non-residue, found deterministically."""
        if self._nonresidue is None:
            for cand in self._nonresidue_candidates():
                if cand.is_zero():
                    continue
                if pow(cand, self._half) != self.one():
                    self._nonresidue = cand
                    break
        return self._nonresidue

    def _nonresidue_candidates(self):
        if self.n == 1:
            for c in range(2, self.p):
                yield self.element(c)
            return
        for c in range(2, min(self.p, 64)):
            yield self.element(c)
        cand = self.generator()
        for c in range(256):
            yield cand + self.element(c)
            cand = cand * self.generator()


class FieldElement:
    """An element of F_{p^n}, stored as n residues in ascending powers."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: FieldSpec, coeffs: tuple):
        self.spec = spec
        self.coeffs = coeffs

    # -- ring operations -----------------------------------------------------

    def _check(self, other) -> "FieldElement":
        if not isinstance(other, FieldElement):
            if isinstance(other, int):
                return self.spec.element(other)
            return NotImplemented
        if other.spec is not self.spec and other.spec != self.spec:
            raise MixedFields("elements belong to different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.spec.p
        return FieldElement(self.spec, tuple(
            (a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.spec.p
        return FieldElement(self.spec, tuple(
            (a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return self.spec.element(other) - self

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec._mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __neg__(self):
        p = self.spec.p
        return FieldElement(self.spec, tuple((-a) % p for a in self.coeffs))

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.spec.element(other) / self

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse by extended Euclid on the modulus."""
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        p = self.spec.p
        if self.spec.n == 1:
            return FieldElement(self.spec, (pow(self.coeffs[0], -1, p),))
        r0, r1 = list(self.spec.modulus), _ptrim(list(self.coeffs))
        s0, s1 = [], [1]  # r_i = t_i*f + s_i*a throughout
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
            if not r1:
                raise DivisionByZero("element not invertible")
        inv_c = pow(r1[0], -1, p)
        inv = [(c * inv_c) % p for c in s1]
        inv += [0] * (self.spec.n - len(inv))
        return FieldElement(self.spec, tuple(inv[:self.spec.n]))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.spec.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- predicates & helpers -------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.spec.element(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.spec == other.spec and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.spec.p, self.coeffs))

    def __repr__(self):
        if self.spec.n == 1:
            return str(self.coeffs[0])
        return str(list(self.coeffs))

    def frobenius(self, k: int = 1) -> "FieldElement":
        """a^(p^k), the k-fold Frobenius image."""
        k %= self.spec.n
        if k == 0:
            return self
        return pow(self, self.spec.p ** k)

    def in_subfield(self, k: int) -> bool:
        """Whether the element lies in F_{p^k} (k must divide n)."""
        if self.spec.n % k:
            return False
        return pow(self, self.spec.p ** k) == self

    def is_square(self) -> bool:
        if self.is_zero():
            return True
        return pow(self, self.spec._half) == self.spec.one()

    def sqrt(self):
        """Canonical square root, or None for a non-residue.

        Tonelli-Shanks generalised to F_{p^n}; of the two roots the one
        with lexicographically smaller coefficient vector is returned.
        """
        spec = self.spec
        if self.is_zero():
            return self
        if pow(self, spec._half) != spec.one():
            return None
        q = spec.order
        if q % 4 == 3:
            s = pow(self, (q + 1) // 4)
        else:
            s = self._tonelli_shanks()
        return min(s, -s, key=lambda e: e.coeffs)

    def _tonelli_shanks(self):
        spec = self.spec
        q = spec.order
        if spec._ts_params is None:
            t, s = q - 1, 0
            while t % 2 == 0:
                t //= 2
                s += 1
            spec._ts_params = (t, s)
        t, s = spec._ts_params
        z = pow(spec._nonresidue_element(), t)
        m = s
        c = z
        u = pow(self, t)
        r = pow(self, (t + 1) // 2)
        one = spec.one()
        while u != one:
            i = 0
            u2 = u
            while u2 != one:
                u2 = u2 * u2
                i += 1
            b = c
            for _ in range(m - i - 1):
                b = b * b
            m = i
            c = b * b
            u = u * c
            r = r * b
        return r

    def to_list(self) -> list:
        """Ascending coefficient list, the external serialisation form."""
        return list(self.coeffs)


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Dispatch a named ring operation: add, sub, mul or div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise BadInput(f"unknown operation {op!r}")


def field_pow(a: FieldElement, e: int) -> FieldElement:
    return a ** e


def field_sqrt(a: FieldElement):
    return a.sqrt()
