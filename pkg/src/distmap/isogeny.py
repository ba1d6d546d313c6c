"""Velu isogenies, duals, curve isomorphisms and endomorphism chains.

Endomorphisms are formal integer combinations of composition chains of
atomic maps; composed rational functions are never expanded (the printed
examples involve degrees in the tens of thousands), evaluation walks the
chain pointwise instead.  Trace and degree of an endomorphism are
recovered by CRT from its matrices on small torsion subgroups.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import isqrt

from sympy import factorint, nextprime

from .curve import (Curve, Point, frobenius_trace, lift_curve, lift_point,
                    order_over_extension, random_point, scalar_mul,
                    torsion_basis, trace_over_extension)
from .errors import (BadInput, BadKernel, BasisInvalid, CurveMismatch,
                     DegreeBoundOverflow, InseparableDegree,
                     KernelNotRationalAsSet, OffCurve)
from .extfield import FieldEmbedding, embed_into, extend_field
from .field import FieldElement, FieldSpec
from .poly import Poly, roots


# ---------------------------------------------------------------------------
# rational one-variable fractions, reduced with monic denominators

def _rat_reduce(num: Poly, den: Poly) -> tuple:
    g = num.gcd(den)
    if g.degree > 0:
        num, den = num // g, den // g
    lead = den.coeffs[-1]
    if lead != den.spec.one():
        inv = lead.inverse()
        num, den = num * inv, den * inv
    return num, den


def _rat_add(a: tuple, b: tuple) -> tuple:
    return _rat_reduce(a[0] * b[1] + b[0] * a[1], a[1] * b[1])


@dataclass(frozen=True)
class RationalMapPair:
    """x |-> x_num/x_den and (x, y) |-> y * y_num(x)/y_den(x)."""
    x_num: Poly
    x_den: Poly
    y_num: Poly
    y_den: Poly

    def scaled(self, u: FieldElement, v: FieldElement) -> "RationalMapPair":
        """Post-composition with the linear map (x, y) -> (u x, v y)."""
        return RationalMapPair(self.x_num * u, self.x_den,
                               self.y_num * v, self.y_den)


class Isogeny:
    """Separable isogeny with explicit kernel polynomial and maps."""

    __slots__ = ("domain", "codomain", "degree", "kernel_poly", "maps",
                 "_dual")

    def __init__(self, domain, codomain, degree, kernel_poly, maps):
        self.domain = domain
        self.codomain = codomain
        self.degree = degree
        self.kernel_poly = kernel_poly
        self.maps = maps
        self._dual = None

    def __repr__(self):
        return f"isogeny of degree {self.degree}: {self.domain} -> {self.codomain}"

    def __call__(self, point: Point) -> Point:
        if point.is_infinity:
            return self.codomain.infinity()
        if point.curve != self.domain:
            raise OffCurve("point is not on the domain curve")
        den = self.maps.x_den(point.x)
        if den.is_zero():
            return self.codomain.infinity()
        x2 = self.maps.x_num(point.x) / den
        y2 = point.y * self.maps.y_num(point.x) / self.maps.y_den(point.x)
        return self.codomain.point(x2, y2)


def _kernel_points(curve: Curve, gen: Point, max_order: int = 4096) -> list:
    pts = []
    cur = gen
    while not cur.is_infinity:
        pts.append(cur)
        cur = cur + gen
        if len(pts) > max_order:
            raise BadKernel("kernel generator order exceeds the supported bound")
    return pts


def velu_from_kernel(curve: Curve, gen: Point) -> Isogeny:
    """The normalized Velu isogeny with kernel <gen>.

    The kernel set must be stable under the base-field Frobenius (checked
    through the kernel polynomial descending to the base field), so the
    isogeny itself is defined over the curve's base field.
    """
    if gen.is_infinity:
        raise BadKernel("kernel generator is the identity")
    if gen.curve != curve:
        raise CurveMismatch("kernel generator lies on a different curve")
    field = curve.field
    pts = _kernel_points(curve, gen)
    degree = len(pts) + 1
    if degree % field.p == 0:
        raise BadKernel("kernel order divisible by the characteristic")
    kernel_poly = Poly.from_roots(field, sorted({pt.x for pt in pts},
                                                key=lambda e: e.coeffs))
    if not kernel_poly.descends_to(curve.base_k):
        raise KernelNotRationalAsSet(
            "kernel polynomial does not descend to the base field")
    # one representative per {T, -T}, all 2-torsion points kept
    reps = []
    seen = set()
    for pt in pts:
        if pt.x.coeffs in seen:
            continue
        seen.add(pt.x.coeffs)
        reps.append(pt)
    v_sum = field.zero()
    w_sum = field.zero()
    x_map = (Poly.x(field), Poly.one(field))
    for t in reps:
        gx = t.x * t.x * 3 + curve.a
        two_torsion = t.y.is_zero()
        vt = gx if two_torsion else gx * 2
        ut = t.y * t.y * 4
        v_sum = v_sum + vt
        w_sum = w_sum + ut + t.x * vt
        lin = Poly(field, [-t.x, field.one()])
        x_map = _rat_add(x_map, (Poly(field, [vt]), lin))
        if not two_torsion:
            x_map = _rat_add(x_map, (Poly(field, [ut]), lin * lin))
    a2 = curve.a - v_sum * 5
    b2 = curve.b - w_sum * 7
    codomain = Curve(field, a2, b2, base_k=curve.base_k)
    num, den = x_map
    # normalized isogeny: the y-map is y * d/dx of the x-map
    y_num, y_den = _rat_reduce(
        num.derivative() * den - num * den.derivative(), den * den)
    iso = Isogeny(curve, codomain, degree, kernel_poly,
                  RationalMapPair(num, den, y_num, y_den))
    return iso


def evaluate(f, point: Point) -> Point:
    """Image of a point under an isogeny, atom, chain or endomorphism."""
    return f(point)


# ---------------------------------------------------------------------------
# atomic maps


@dataclass(frozen=True)
class FrobeniusPower:
    """(x, y) -> (x^(p^e), y^(p^e)): e-th power of the p-Frobenius."""
    e: int

    def codomain_of(self, curve: Curve) -> Curve:
        return Curve(curve.field, curve.a.frobenius(self.e),
                     curve.b.frobenius(self.e), base_k=curve.base_k)

    def degree_on(self, curve: Curve) -> int:
        return curve.field.p ** self.e

    def apply(self, curve: Curve, point: Point) -> Point:
        cod = self.codomain_of(curve)
        if point.is_infinity:
            return cod.infinity()
        return Point(cod, point.x.frobenius(self.e), point.y.frobenius(self.e))


@dataclass(frozen=True)
class ScalarMul:
    k: int

    def codomain_of(self, curve: Curve) -> Curve:
        return curve

    def degree_on(self, curve: Curve) -> int:
        return self.k * self.k

    def apply(self, curve: Curve, point: Point) -> Point:
        return scalar_mul(self.k, point)


@dataclass(frozen=True)
class LinearTwist:
    """(x, y) -> (u x, v y) with v^2 = u^3."""
    u: FieldElement
    v: FieldElement

    def __post_init__(self):
        if self.v * self.v != self.u ** 3:
            raise BadInput("twist constants must satisfy v^2 = u^3")

    def codomain_of(self, curve: Curve) -> Curve:
        u2 = self.u * self.u
        return Curve(curve.field, curve.a * u2, curve.b * u2 * self.u,
                     base_k=curve.base_k)

    def degree_on(self, curve: Curve) -> int:
        return 1

    def apply(self, curve: Curve, point: Point) -> Point:
        cod = self.codomain_of(curve)
        if point.is_infinity:
            return cod.infinity()
        return Point(cod, point.x * self.u, point.y * self.v)


class DualOf:
    """Lazy dual of an isogeny; computed on first evaluation."""

    __slots__ = ("isogeny",)

    def __init__(self, isogeny: Isogeny):
        self.isogeny = isogeny

    def codomain_of(self, curve: Curve) -> Curve:
        if curve != self.isogeny.codomain:
            raise CurveMismatch("dual applied off its domain")
        return self.isogeny.domain

    def degree_on(self, curve: Curve) -> int:
        return self.isogeny.degree

    def apply(self, curve: Curve, point: Point) -> Point:
        return dual(self.isogeny)(point)

    def __eq__(self, other):
        return isinstance(other, DualOf) and self.isogeny is other.isogeny

    def __hash__(self):
        return hash(("dual", id(self.isogeny)))


def _atom_domain(atom):
    return atom.domain if isinstance(atom, Isogeny) else None


def _atom_codomain(atom, curve):
    if isinstance(atom, Isogeny):
        if curve != atom.domain:
            raise CurveMismatch("chain atom domain mismatch")
        return atom.codomain
    return atom.codomain_of(curve)


def _atom_apply(atom, curve, point):
    if isinstance(atom, Isogeny):
        return atom(point)
    return atom.apply(curve, point)


def _atom_degree(atom, curve):
    if isinstance(atom, Isogeny):
        return atom.degree
    return atom.degree_on(curve)


class Chain:
    """A composition of atoms, applied left to right."""

    __slots__ = ("domain", "atoms", "codomain", "degree")

    def __init__(self, domain: Curve, atoms):
        self.domain = domain
        self.atoms = tuple(atoms)
        cur = domain
        deg = 1
        for atom in self.atoms:
            deg *= _atom_degree(atom, cur)
            cur = _atom_codomain(atom, cur)
        self.codomain = cur
        self.degree = deg

    def __call__(self, point: Point) -> Point:
        cur = self.domain
        for atom in self.atoms:
            point = _atom_apply(atom, cur, point)
            cur = _atom_codomain(atom, cur)
        return point

    def then(self, atom) -> "Chain":
        return Chain(self.domain, self.atoms + (atom,))


class Endomorphism:
    """Formal integer combination of chains E -> E."""

    __slots__ = ("curve", "terms", "_trace_degree")

    def __init__(self, curve: Curve, terms):
        self.curve = curve
        checked = []
        for coeff, chain in terms:
            if chain.domain != curve or chain.codomain != curve:
                raise CurveMismatch("every chain must start and end on the curve")
            if coeff:
                checked.append((coeff, chain))
        self.terms = tuple(checked)
        self._trace_degree = None

    @classmethod
    def from_atoms(cls, curve: Curve, *atoms) -> "Endomorphism":
        return cls(curve, [(1, Chain(curve, atoms))])

    def __call__(self, point: Point) -> Point:
        acc = self.curve.infinity()
        for coeff, chain in self.terms:
            acc = acc + scalar_mul(coeff, chain(point))
        return acc

    def __add__(self, other: "Endomorphism") -> "Endomorphism":
        if self.curve != other.curve:
            raise CurveMismatch("endomorphisms on different curves")
        return Endomorphism(self.curve, self.terms + other.terms)

    def __neg__(self):
        return Endomorphism(self.curve,
                            [(-c, ch) for c, ch in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int) -> "Endomorphism":
        return Endomorphism(self.curve, [(k * c, ch) for c, ch in self.terms])

    def compose(self, other: "Endomorphism") -> "Endomorphism":
        """self o other: apply `other` first."""
        if self.curve != other.curve:
            raise CurveMismatch("endomorphisms on different curves")
        terms = []
        for c1, ch1 in other.terms:
            for c2, ch2 in self.terms:
                terms.append((c1 * c2, Chain(self.curve,
                                             ch1.atoms + ch2.atoms)))
        return Endomorphism(self.curve, terms)

    def degree_bound(self) -> int:
        """Cauchy-Schwarz style bound (sum |c| sqrt(deg chain))^2."""
        acc = 0
        for coeff, chain in self.terms:
            acc += abs(coeff) * (isqrt(chain.degree - 1) + 1)
        return acc * acc

    def __repr__(self):
        return f"endomorphism with {len(self.terms)} chain(s) on {self.curve}"


def frobenius_endomorphism(curve: Curve, power: int = 1) -> Endomorphism:
    """pi_q^power where q is the curve's declared base order."""
    return Endomorphism.from_atoms(curve,
                                   FrobeniusPower(curve.base_k * power))


def scalar_endomorphism(curve: Curve, k: int) -> Endomorphism:
    return Endomorphism.from_atoms(curve, ScalarMul(k))


def trace_endomorphism(curve: Curve, k: int) -> Endomorphism:
    """The trace map relative to k as the formal sum of Frobenius powers."""
    return Endomorphism(curve, [
        (1, Chain(curve, (FrobeniusPower(curve.base_k * i),)))
        for i in range(k)])


# ---------------------------------------------------------------------------
# isomorphisms and duals


def find_isomorphisms(e1: Curve, e2: Curve) -> list:
    """All isomorphisms (x, y) -> (u x, v y) from e1 to e2 over the field."""
    field = e1.field
    if field != e2.field:
        return []
    out = []
    candidates = []
    if not e1.a.is_zero() and not e1.b.is_zero():
        if e2.a.is_zero() or e2.b.is_zero():
            return []
        u = (e2.b / e1.b) * (e1.a / e2.a)
        candidates.append(u)
    elif e1.a.is_zero():
        if not e2.a.is_zero():
            return []
        cubic = Poly(field, [-(e2.b / e1.b), field.zero(), field.zero(),
                             field.one()])
        candidates.extend(roots(cubic))
    else:
        if not e2.b.is_zero():
            return []
        s = (e2.a / e1.a).sqrt()
        if s is not None:
            candidates.extend([s, -s])
    for u in candidates:
        if u.is_zero():
            continue
        u2 = u * u
        if e1.a * u2 != e2.a or e1.b * u2 * u != e2.b:
            continue
        v = (u ** 3).sqrt()
        if v is None:
            continue
        for vv in (v, -v):
            out.append(LinearTwist(u, vv))
    uniq = {(t.u.coeffs, t.v.coeffs): t for t in out}
    return [uniq[k] for k in sorted(uniq)]


def find_isomorphism(e1: Curve, e2: Curve):
    """First isomorphism in canonical order, or None."""
    isos = find_isomorphisms(e1, e2)
    return isos[0] if isos else None


def dual(psi: Isogeny, rng: random.Random | None = None) -> Isogeny:
    """The dual isogeny, with psi_hat o psi = [deg psi] checked pointwise."""
    if psi._dual is not None:
        return psi._dual
    if psi.degree % psi.domain.field.p == 0:
        raise InseparableDegree("dual only computed for separable degrees")
    if rng is None:
        rng = random.Random(0)
    d = psi.degree
    e1, e2 = psi.domain, psi.codomain
    gen = _dual_kernel_generator(psi, rng)
    raw = velu_from_kernel(e2, gen)
    # fix up with the isomorphism raw.codomain -> e1 making the composite [d]
    samples = [random_point(e1, rng) for _ in range(3)]
    for iso in find_isomorphisms(raw.codomain, e1):
        maps = raw.maps.scaled(iso.u, iso.v)
        cand = Isogeny(e2, e1, d, raw.kernel_poly, maps)
        if all(cand(psi(s)) == scalar_mul(d, s) for s in samples):
            psi._dual = cand
            cand._dual = psi
            return cand
    raise BadInput("no isomorphism completes the dual; "
                   "is the d-torsion rational over the working field?")


def _dual_kernel_generator(psi: Isogeny, rng) -> Point:
    """A generator of psi(E1[d]), the kernel of the dual isogeny."""
    d = psi.degree
    e1 = psi.domain
    p_pt, q_pt = torsion_basis(e1, d, rng=rng)
    fact = dict(factorint(d))
    for j in range(d):
        for t in (p_pt + scalar_mul(j, q_pt), q_pt + scalar_mul(j, p_pt)):
            image = psi(t)
            if not scalar_mul(d, image).is_infinity:
                continue
            try:
                from .curve import point_order
                if point_order(image, d, fact) == d:
                    return image
            except Exception:
                continue
    raise BadInput("could not generate the dual kernel")


def transfer(psi: Isogeny, phi: Endomorphism) -> Endomorphism:
    """psi o phi o psi_hat on the codomain of psi, as a lazy chain."""
    if phi.curve != psi.domain:
        raise CurveMismatch("endomorphism does not live on the isogeny domain")
    e2 = psi.codomain
    terms = []
    for coeff, chain in phi.terms:
        atoms = (DualOf(psi),) + chain.atoms + (psi,)
        terms.append((coeff, Chain(e2, atoms)))
    return Endomorphism(e2, terms)


# ---------------------------------------------------------------------------
# lifting into extension fields


def lift_poly(poly: Poly, emb: FieldEmbedding) -> Poly:
    return Poly(emb.target, [emb(c) for c in poly.coeffs])


def lift_isogeny(iso: Isogeny, emb: FieldEmbedding) -> Isogeny:
    maps = RationalMapPair(lift_poly(iso.maps.x_num, emb),
                           lift_poly(iso.maps.x_den, emb),
                           lift_poly(iso.maps.y_num, emb),
                           lift_poly(iso.maps.y_den, emb))
    return Isogeny(lift_curve(iso.domain, emb), lift_curve(iso.codomain, emb),
                   iso.degree, lift_poly(iso.kernel_poly, emb), maps)


def _lift_atom(atom, emb: FieldEmbedding):
    if isinstance(atom, Isogeny):
        return lift_isogeny(atom, emb)
    if isinstance(atom, DualOf):
        # compute the dual in the small field, then lift it
        return lift_isogeny(dual(atom.isogeny), emb)
    if isinstance(atom, LinearTwist):
        return LinearTwist(emb(atom.u), emb(atom.v))
    return atom


def lift_endomorphism(phi: Endomorphism, emb: FieldEmbedding) -> Endomorphism:
    curve = lift_curve(phi.curve, emb)
    terms = []
    for coeff, chain in phi.terms:
        atoms = tuple(_lift_atom(a, emb) for a in chain.atoms)
        terms.append((coeff, Chain(curve, atoms)))
    return Endomorphism(curve, terms)


# ---------------------------------------------------------------------------
# matrices on torsion, trace and degree


def endo_matrix_mod_ell(phi: Endomorphism, ell: int, basis: tuple) -> tuple:
    """Matrix of phi on E[ell] in the given basis, columns by table lookup."""
    if ell > 97:
        raise BadInput("matrix extraction is limited to ell <= 97")
    p1, p2 = basis
    table = {}
    row = p1.curve.infinity()
    for i in range(ell):
        cur = row
        for j in range(ell):
            table[cur] = (i, j)
            cur = cur + p2
        row = row + p1
    try:
        c1 = table[phi(p1)]
        c2 = table[phi(p2)]
    except KeyError:
        raise BasisInvalid("image of a basis point is outside E[ell]")
    return ((c1[0], c2[0]), (c1[1], c2[1]))


def _matrix_order(a, b, c, d, ell, limit) -> int:
    """Order of [[a,b],[c,d]] in GL_2(F_ell), or 0 if it exceeds limit."""
    m = (a % ell, b % ell, c % ell, d % ell)
    cur = m
    for k in range(1, limit + 1):
        if cur == (1, 0, 0, 1):
            return k
        cur = ((cur[0] * m[0] + cur[1] * m[2]) % ell,
               (cur[0] * m[1] + cur[1] * m[3]) % ell,
               (cur[2] * m[0] + cur[3] * m[2]) % ell,
               (cur[2] * m[1] + cur[3] * m[3]) % ell)
    return 0


def torsion_field_degrees(trace: int, q: int, ell: int) -> list:
    """Candidate degrees k with E[ell] inside E(F_{q^k}), smallest first.

    Exact except in the repeated-eigenvalue case, where both the scalar
    and the unipotent possibility are returned.
    """
    t, qb = trace % ell, q % ell
    disc = (t * t - 4 * qb) % ell
    lam = None
    for x in range(ell):
        if (x * x - t * x + qb) % ell == 0:
            lam = x
            break
    if lam is None:
        k = _matrix_order(0, -qb, 1, t, ell, ell * ell)
        return [k] if k else []
    mu = (t - lam) % ell
    if lam != mu:
        k = 1
        acc_l, acc_m = lam, mu
        while acc_l != 1 or acc_m != 1:
            acc_l = (acc_l * lam) % ell
            acc_m = (acc_m * mu) % ell
            k += 1
        return [k]
    k0, acc = 1, lam
    while acc != 1:
        acc = (acc * lam) % ell
        k0 += 1
    return [k0, k0 * ell]


_EXT_CACHE: dict = {}


def _extension_with_embedding(spec: FieldSpec, k: int):
    key = (spec, k)
    if key not in _EXT_CACHE:
        _EXT_CACHE[key] = extend_field(spec, k)
    return _EXT_CACHE[key]


def torsion_context(curve: Curve, ell_power: int, k_over_base: int,
                    rng: random.Random | None = None):
    """Lifted curve + basis of E[ell_power] over F_{q_base^k_over_base}.

    Returns (lifted curve, embedding, (P, Q)).  Raises TorsionNotRational
    when the requested field does not contain the full torsion.
    """
    if rng is None:
        rng = random.Random(0)
    from math import lcm
    total = lcm(curve.base_k * k_over_base, curve.field.n)
    target, emb = _extension_with_embedding(curve.field,
                                            total // curve.field.n)
    lifted = lift_curve(curve, emb)
    basis = torsion_basis(lifted, ell_power, rng=rng)
    return lifted, emb, basis


def endo_trace_degree(phi: Endomorphism, degree_budget: int = 40,
                      rng: random.Random | None = None) -> tuple:
    """(trace, degree, discriminant) of an endomorphism, by CRT.

    Small primes ell are chosen so the ell-torsion field stays affordable;
    trace and determinant of the matrix on E[ell] are combined until the
    moduli product exceeds the degree bound.
    """
    if phi._trace_degree is not None:
        return phi._trace_degree
    if rng is None:
        rng = random.Random(0)
    curve = phi.curve
    p = curve.field.p
    bound = phi.degree_bound()
    target = 2 * max(2 * isqrt(bound) + 2, bound)
    info = frobenius_trace(curve)
    residues = []
    prod = 1
    ell = 1
    while prod <= target:
        ell = int(nextprime(ell))
        if ell == p:
            continue
        if ell > 97:
            raise DegreeBoundOverflow(
                "CRT budget exhausted before reaching the degree bound")
        candidates = [k for k in torsion_field_degrees(info.trace, info.q, ell)
                      if curve.base_k * k <= degree_budget]
        mat = None
        for k in candidates:
            try:
                lifted, emb, basis = torsion_context(curve, ell, k, rng=rng)
                mat = endo_matrix_mod_ell(lift_endomorphism(phi, emb),
                                          ell, basis)
                break
            except Exception:
                continue
        if mat is None:
            continue
        tr = (mat[0][0] + mat[1][1]) % ell
        det = (mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]) % ell
        residues.append((ell, tr, det))
        prod *= ell
    t = _crt([(ell, tr) for ell, tr, _ in residues])
    d = _crt([(ell, det) for ell, _, det in residues])
    modulus = prod
    t %= modulus
    if t > modulus // 2:
        t -= modulus
    d %= modulus
    result = (t, d, t * t - 4 * d)
    phi._trace_degree = result
    return result


def _crt(pairs) -> int:
    x, m = 0, 1
    for ell, r in pairs:
        ky = ((r - x) * pow(m, -1, ell)) % ell
        x += m * ky
        m *= ell
    return x
