"""Weil pairing via Miller's algorithm, and the modified pairing e_{m,phi}.

The pairing is computed in the ratio form over offset divisors
(P+R) - (R) and (Q+S) - (S); the offsets are resampled (up to 32 times)
whenever a line function vanishes at an evaluation point.  The sign
convention is pinned so that the recorded golden value over F_701 comes
out exactly; see WEIL_INVERT.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from sympy import factorint

from .curve import Point, random_point, scalar_mul
from .errors import (DistmapError, FieldLacksRoots, NotRootOfUnity,
                     NotTorsion)
from .field import FieldElement

# If True, the computed ratio is inverted globally.  Calibrated against the
# printed fifth root of unity 638 in F_701 (and cross-checked by the
# seventh root of unity over F_{101^6}).
WEIL_INVERT = False

_OFFSET_TRIES = 32


@dataclass(frozen=True)
class PairingValue:
    value: FieldElement
    m: int

    def __post_init__(self):
        if (self.value ** self.m) != self.value.spec.one():
            raise NotRootOfUnity("pairing value is not an m-th root of unity")

    def order(self) -> int:
        return root_of_unity_order(self)


class _ZeroHit(DistmapError):
    """A line function vanished at an evaluation point; resample offsets."""


def _line_value(u: Point, v: Point, at: Point) -> FieldElement:
    """Value at `at` of the chord/tangent line through u and v."""
    field = at.curve.field
    if u.is_infinity and v.is_infinity:
        return field.one()
    if u.is_infinity:
        return at.x - v.x
    if v.is_infinity:
        return at.x - u.x
    if u.x == v.x:
        if u.y == -v.y:
            return at.x - u.x
        lam = (u.x * u.x * 3 + u.curve.a) / (u.y * 2)
    else:
        lam = (v.y - u.y) / (v.x - u.x)
    return (at.y - u.y) - lam * (at.x - u.x)


def _vertical_value(w: Point, at: Point) -> FieldElement:
    if w.is_infinity:
        return at.curve.field.one()
    return at.x - w.x


def _miller(t: Point, m: int, evals: list) -> list:
    """[f_{m,t}(e) for e in evals] with divisor m(t) - ([m]t) - (m-1)(O)."""
    field = t.curve.field
    fs = [field.one() for _ in evals]
    v = t
    for bit in bin(m)[3:]:
        num_den = []
        v2 = v + v
        for i, e in enumerate(evals):
            num = _line_value(v, v, e)
            den = _vertical_value(v2, e)
            if num.is_zero() or den.is_zero():
                raise _ZeroHit()
            fs[i] = fs[i] * fs[i] * num / den
        v = v2
        if bit == "1":
            vt = v + t
            for i, e in enumerate(evals):
                num = _line_value(v, t, e)
                den = _vertical_value(vt, e)
                if num.is_zero() or den.is_zero():
                    raise _ZeroHit()
                fs[i] = fs[i] * num / den
            v = vt
    return fs


def weil_pairing(p: Point, q: Point, m: int,
                 rng: random.Random | None = None) -> PairingValue:
    """The Weil pairing e_m(P, Q) for P, Q in E[m]."""
    curve = p.curve
    field = curve.field
    if m < 1 or m % field.p == 0:
        raise NotTorsion("m must be positive and coprime to p")
    if (field.order - 1) % m:
        raise FieldLacksRoots(
            f"mu_{m} is not contained in {field}; wrong field of definition")
    if not scalar_mul(m, p).is_infinity or not scalar_mul(m, q).is_infinity:
        raise NotTorsion("both points must be m-torsion")
    if p.is_infinity or q.is_infinity:
        return PairingValue(field.one(), m)
    if rng is None:
        rng = random.Random(0)
    for _ in range(_OFFSET_TRIES):
        r = random_point(curve, rng)
        s = random_point(curve, rng)
        pr, qs = p + r, q + s
        if pr.is_infinity or qs.is_infinity:
            continue
        if {pr, r} & {qs, s}:
            continue
        try:
            fp_num = _miller(pr, m, [qs, s])
            fp_den = _miller(r, m, [qs, s])
            fq_num = _miller(qs, m, [pr, r])
            fq_den = _miller(s, m, [pr, r])
        except _ZeroHit:
            continue
        f_p = (fp_num[0] * fp_den[1]) / (fp_num[1] * fp_den[0])
        f_q = (fq_num[0] * fq_den[1]) / (fq_num[1] * fq_den[0])
        value = f_p / f_q
        if WEIL_INVERT:
            value = value.inverse()
        return PairingValue(value, m)
    raise DistmapError("offset resampling exhausted in the Miller loop")


def modified_weil_pairing(p: Point, q: Point, m: int, phi,
                          rng: random.Random | None = None) -> PairingValue:
    """e_{m,phi}(P, Q) = e_m(P, phi(Q))."""
    from .isogeny import evaluate
    return weil_pairing(p, evaluate(phi, q), m, rng=rng)


def root_of_unity_order(v: PairingValue) -> int:
    """Exact multiplicative order of a pairing value; divides m."""
    one = v.value.spec.one()
    if v.value ** v.m != one:
        raise NotRootOfUnity("value is not an m-th root of unity")
    order = v.m
    for ell in factorint(v.m):
        while order % ell == 0 and v.value ** (order // ell) == one:
            order //= ell
    return order
