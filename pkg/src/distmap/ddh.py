"""Decision Diffie-Hellman demonstrator via the modified Weil pairing.

Given a distortion map for P, the tuple (aP, bP, cP) is valid exactly when
e_{m,phi}(aP, bP) = e_{m,phi}(P, cP); for prime m the test is exact, not
probabilistic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .curve import Point, scalar_mul
from .errors import BadInput, DegeneratePairing, OrderMismatch
from .isogeny import Endomorphism
from .pairing import modified_weil_pairing, root_of_unity_order

_ENUM_LIMIT = 10 ** 4


@dataclass(frozen=True)
class DdhInstance:
    p: Point
    a_point: Point
    b_point: Point
    c_point: Point
    m: int
    phi: Endomorphism


def _check_membership(base: Point, pts, m: int):
    if m > _ENUM_LIMIT:
        return
    subgroup = set()
    cur = base.curve.infinity()
    for _ in range(m):
        subgroup.add(cur)
        cur = cur + base
    for pt in pts:
        if pt not in subgroup:
            raise BadInput("tuple point is not a multiple of P")


def generate_instance(curve, p: Point, m: int, phi: Endomorphism,
                      a: int | None = None, b: int | None = None,
                      c: int | None = None, rng_seed: int = 0) -> DdhInstance:
    """Deterministic instance from given scalars, or seeded random ones."""
    if not scalar_mul(m, p).is_infinity or p.is_infinity:
        raise OrderMismatch("P must have order m")
    from sympy import factorint
    for ell in factorint(m):
        if scalar_mul(m // ell, p).is_infinity:
            raise OrderMismatch("P must have order exactly m")
    rng = random.Random(rng_seed)
    if a is None:
        a = rng.randrange(1, m)
    if b is None:
        b = rng.randrange(1, m)
    if c is None:
        c = rng.randrange(1, m)
    return DdhInstance(p, scalar_mul(a, p), scalar_mul(b, p),
                       scalar_mul(c, p), m, phi)


def decide_ddh(inst: DdhInstance, rng: random.Random | None = None) -> bool:
    """True iff the instance is a valid Diffie-Hellman tuple."""
    if rng is None:
        rng = random.Random(0)
    diag = modified_weil_pairing(inst.p, inst.p, inst.m, inst.phi, rng=rng)
    if root_of_unity_order(diag) != inst.m:
        raise DegeneratePairing(
            "e_{m,phi}(P,P) has order below m: phi does not distort P")
    _check_membership(inst.p, (inst.a_point, inst.b_point, inst.c_point),
                      inst.m)
    lhs = modified_weil_pairing(inst.a_point, inst.b_point, inst.m,
                                inst.phi, rng=rng)
    rhs = modified_weil_pairing(inst.p, inst.c_point, inst.m,
                                inst.phi, rng=rng)
    return lhs.value == rhs.value
