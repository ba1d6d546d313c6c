"""Constructors for the known distortion maps on desk-scale curves.

Supersingular builders return the curve together with the automorphism or
Frobenius chain realising the distortion; ordinary builders search the
stated prime families and certify candidates by exhaustive checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from sympy import isprime, nextprime

from .curve import (Curve, count_points_naive, frobenius_trace, lift_curve,
                    random_point, scalar_mul)
from .errors import (BadCongruence, BadInput, ElementInSubfield, NoneFound,
                     NotPrime)
from .extfield import extend_field
from .field import FieldElement, FieldSpec
from .isogeny import (Chain, Endomorphism, FrobeniusPower, LinearTwist,
                      evaluate)
from .poly import Poly, roots


@dataclass(frozen=True)
class CatalogueEntry:
    name: str
    condition: str
    group_order: str


ENTRIES = (
    CatalogueEntry("ss_i", "p = 3 mod 4; y^2 = x^3 + ax; (x,y) -> (-x, iy)",
                   "p + 1"),
    CatalogueEntry("ss_zeta", "p = 2 mod 3; y^2 = x^3 + a; (x,y) -> (zx, y)",
                   "p + 1"),
    CatalogueEntry("ss_pp2",
                   "p = 2 mod 3; y^2 = x^3 + a over F_p^2, a not in F_p; "
                   "twisted p-power Frobenius", "p^2 - p + 1"),
    CatalogueEntry("ord_type1",
                   "r prime, r = 2 mod 3, p = r^2 + r + 1 prime; "
                   "y^2 = x^3 + b; (x,y) -> (rx, y)", "r^2"),
    CatalogueEntry("ord_type2",
                   "r prime, r = 3 mod 4, p = 16r^2 + 1 prime; "
                   "y^2 = x^3 - x; (x,y) -> (-x, 4ry)", "16r^2"),
)


def _validate_order(curve: Curve, expected: int):
    info = frobenius_trace(curve, base_order=expected)
    if info.order != expected:
        raise BadInput("catalogue build failed its group-order check")


def _sample_check(curve: Curve, phi: Endomorphism, rng: random.Random,
                  count: int = 8):
    for _ in range(count):
        pt = random_point(curve, rng)
        image = evaluate(phi, pt)
        if not image.is_infinity:
            curve.point(image.x, image.y)


def build_ss_i(p: int, a=1, i_element=None) -> tuple:
    """y^2 = x^3 + ax over F_p (p = 3 mod 4) with (x, y) -> (-x, iy)."""
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    if p % 4 != 3:
        raise BadCongruence("p must be 3 mod 4")
    big, emb = extend_field(FieldSpec(p), 2)
    a = emb(FieldSpec(p).element(a)) if isinstance(a, int) else a
    curve = Curve(big, a, 0, base_k=1)
    i_elt = i_element if i_element is not None else big.element(-1).sqrt()
    phi = Endomorphism.from_atoms(curve, LinearTwist(big.element(-1), i_elt))
    _validate_order(curve, p + 1)
    _sample_check(curve, phi, random.Random(0))
    return curve, phi


def build_ss_zeta(p: int, a=1, zeta_element=None) -> tuple:
    """y^2 = x^3 + a over F_p (p = 2 mod 3) with (x, y) -> (zeta x, y)."""
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    if p % 3 != 2:
        raise BadCongruence("p must be 2 mod 3")
    big, emb = extend_field(FieldSpec(p), 2)
    a = emb(FieldSpec(p).element(a)) if isinstance(a, int) else a
    curve = Curve(big, 0, a, base_k=1)
    if zeta_element is not None:
        zeta = zeta_element
    else:
        zeta = roots(Poly(big, [1, 1, 1]))[0]
    phi = Endomorphism.from_atoms(curve, LinearTwist(zeta, big.one()))
    _validate_order(curve, p + 1)
    _sample_check(curve, phi, random.Random(0))
    return curve, phi


def build_ss_pp2(p: int, a: FieldElement, r_element=None,
                 w_element=None) -> tuple:
    """y^2 = x^3 + a over F_{p^2}, a outside F_p, with the twisted Frobenius.

    The map is (x, y) -> (w x^p / r^((2p-1)/3), y^p / r^(p-1)) with
    r^2 = a in F_{p^2} and w^3 = r in F_{p^6}.  The ambient field of `a`
    must be the degree-6 extension; roots are canonical unless pinned.
    """
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    if p % 3 != 2:
        raise BadCongruence("p must be 2 mod 3")
    big = a.spec
    if big.p != p or big.n != 6:
        raise BadInput("coefficient must live in the degree-6 extension")
    if a.in_subfield(1):
        raise ElementInSubfield("a must not lie in the prime field")
    if not a.in_subfield(2):
        raise BadInput("a must lie in F_{p^2}")
    r = r_element if r_element is not None else a.sqrt()
    if r is None or r * r != a:
        raise BadInput("no square root of a in the field")
    if w_element is not None:
        w = w_element
    else:
        cands = roots(Poly(big, [-r, big.zero(), big.zero(), big.one()]))
        if not cands:
            raise BadInput("no cube root of r in the degree-6 field")
        w = cands[0]
    if w ** 3 != r:
        raise BadInput("pinned cube root fails w^3 = r")
    curve = Curve(big, 0, a, base_k=2)
    u = w / r ** ((2 * p - 1) // 3)
    v = 1 / r ** (p - 1)
    phi = Endomorphism.from_atoms(curve, FrobeniusPower(1), LinearTwist(u, v))
    _validate_order(curve, p * p - p + 1)
    _sample_check(curve, phi, random.Random(0))
    return curve, phi


def _all_affine_points(curve: Curve):
    field = curve.field
    pts = []
    for x in field.elements():
        rhs = curve.rhs(x)
        if rhs.is_zero():
            pts.append(curve.point(x, 0))
            continue
        s = rhs.sqrt()
        if s is not None:
            pts.append(curve.point(x, s))
            pts.append(curve.point(x, -s))
    return pts


def _distorts_whole_group(curve: Curve, phi: Endomorphism, order: int) -> bool:
    from .distortion import _subgroup_contains
    for pt in _all_affine_points(curve):
        if _subgroup_contains(pt, evaluate(phi, pt), order):
            return False
    return True


def build_ord_type1(search_bound: int) -> list:
    """Ordinary curves y^2 = x^3 + b with the x-scaling distortion map.

    Searches primes r = 2 mod 3 with p = r^2 + r + 1 prime; accepted (b, r, p)
    triples have #E(F_p) = r^2 and the map (x, y) -> (rx, y) distorting every
    point of E(F_p), checked exhaustively.
    """
    out = []
    r = 1
    while True:
        r = int(nextprime(r))
        if r > search_bound:
            break
        if r % 3 != 2:
            continue
        p = r * r + r + 1
        if not isprime(p):
            continue
        field = FieldSpec(p)
        u = field.element(r)
        for b in range(1, p):
            curve = Curve(field, 0, b)
            if count_points_naive(curve) != r * r:
                continue
            phi = Endomorphism.from_atoms(curve, LinearTwist(u, field.one()))
            if _distorts_whole_group(curve, phi, r * r):
                out.append((curve, phi, r, p))
                break
    if not out:
        raise NoneFound(f"no type-I curve with r <= {search_bound}")
    return out


def build_ord_type2(search_bound: int) -> list:
    """Ordinary curves y^2 = x^3 - x with (x, y) -> (-x, 4ry).

    Searches primes r = 3 mod 4 with p = 16r^2 + 1 prime; the group order
    16r^2 is validated by a naive count.
    """
    out = []
    r = 1
    while True:
        r = int(nextprime(r))
        if r > search_bound:
            break
        if r % 4 != 3:
            continue
        p = 16 * r * r + 1
        if not isprime(p):
            continue
        field = FieldSpec(p)
        curve = Curve(field, -1, 0)
        if count_points_naive(curve) != 16 * r * r:
            raise BadInput("type-II group order formula failed")
        phi = Endomorphism.from_atoms(
            curve, LinearTwist(field.element(-1), field.element(4 * r)))
        rng = random.Random(0)
        for _ in range(20):
            pt = random_point(curve, rng)
            if evaluate(phi, evaluate(phi, pt)) != -pt:
                raise BadInput("type-II map does not square to [-1]")
        out.append((curve, phi, r, p))
    if not out:
        raise NoneFound(f"no type-II curve with r <= {search_bound}")
    return out
