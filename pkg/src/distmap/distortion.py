"""Distortion predicates and the classification of phi on E[ell].

The Legendre route reads the verdict off the discriminant of Z[phi]; the
eigenline route computes the matrix of phi on E[ell] and enumerates its
eigenspaces, which also separates the scalar-action case that the symbol
alone cannot see (both give symbol 0 when ell divides the index f).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from enum import Enum

from sympy import factorint

from .curve import (Curve, Point, frobenius_trace, lift_point, random_point,
                    scalar_mul, torsion_basis)
from .errors import (BadInput, CurveSupersingular, DistmapError,
                     EigenvaluesCoincide, OrderMismatch,
                     PrimeEqualsCharacteristic, TorsionNotRational)
from .field import legendre
from .isogeny import (Endomorphism, endo_matrix_mod_ell, endo_trace_degree,
                      evaluate, frobenius_endomorphism, lift_endomorphism,
                      torsion_context, torsion_field_degrees)

_ENUM_LIMIT = 10 ** 4


class Outcome(Enum):
    SCALAR_ACTION = "scalar-action"
    ALL_BUT_TWO = "all-but-two"
    ALL = "all"
    ALL_BUT_ONE = "all-but-one"


@dataclass
class DistortionVerdict:
    ell: int
    outcome: Outcome
    legendre_value: int | None = None
    eigenvalues: tuple = ()
    eigenlines: tuple = ()
    evidence: str = ""

    def __post_init__(self):
        expected = {Outcome.ALL: 0, Outcome.ALL_BUT_ONE: 1,
                    Outcome.ALL_BUT_TWO: 2}
        if self.eigenlines and self.outcome in expected \
                and len(self.eigenlines) != expected[self.outcome]:
            raise DistmapError("eigenline count contradicts the outcome")


def _subgroup_contains(p: Point, target: Point, m: int) -> bool:
    cur = p.curve.infinity()
    for _ in range(m):
        if cur == target:
            return True
        cur = cur + p
    return False


def is_distortion_for_point(phi, p: Point, m: int) -> bool:
    """True iff phi(P) lies outside <P>, for P of order m."""
    if not scalar_mul(m, p).is_infinity:
        raise OrderMismatch("point order does not divide m")
    for ell in factorint(m):
        if scalar_mul(m // ell, p).is_infinity:
            raise OrderMismatch("point order is a proper divisor of m")
    image = evaluate(phi, p)
    if m <= _ENUM_LIMIT:
        return not _subgroup_contains(p, image, m)
    from sympy import isprime
    if not isprime(m):
        raise BadInput("orders beyond the enumeration bound must be prime")
    from .pairing import weil_pairing
    return weil_pairing(p, image, m).value != p.curve.field.one()


def is_distortion_for_torsion(phi: Endomorphism, curve: Curve, m: int) -> bool:
    """True iff phi is a distortion map for all of E[m].

    Equivalent to (D_phi / ell) = -1 for every prime ell dividing m.
    """
    if m % curve.field.p == 0:
        raise BadInput("m must be coprime to the characteristic")
    _, _, disc = endo_trace_degree(phi)
    return all(legendre(disc, ell) == -1 for ell in factorint(m))


def _eigenvector(mat, lam, ell):
    a = (mat[0][0] - lam) % ell
    b = mat[0][1] % ell
    c = mat[1][0] % ell
    d = (mat[1][1] - lam) % ell
    if a or b:
        return (b, (-a) % ell)
    if c or d:
        return (d, (-c) % ell)
    return None  # the whole plane: scalar matrix


def classify_prime(phi: Endomorphism, curve: Curve, ell: int,
                   mode: str = "both",
                   rng: random.Random | None = None) -> DistortionVerdict:
    """Classify the action of phi on E[ell] into the four outcomes.

    legendre: map (D_phi/ell) to the verdict; symbol 0 is reported as
    all-but-one with the caveat that it may hide scalar action.
    eigenlines: decide exactly from the matrix of phi on E[ell].
    both: run the two routes and require consistency.
    """
    if ell == curve.field.p:
        raise PrimeEqualsCharacteristic("ell equals the characteristic")
    if mode not in ("legendre", "eigenlines", "both"):
        raise BadInput(f"unknown mode {mode!r}")
    if rng is None:
        rng = random.Random(0)
    sym = None
    if mode in ("legendre", "both"):
        _, _, disc = endo_trace_degree(phi)
        sym = legendre(disc, ell)
        outcome = {1: Outcome.ALL_BUT_TWO, -1: Outcome.ALL,
                   0: Outcome.ALL_BUT_ONE}[sym]
        if mode == "legendre":
            return DistortionVerdict(ell, outcome, legendre_value=sym,
                                     evidence="legendre")
    info = frobenius_trace(curve)
    basis = mat = None
    for k in torsion_field_degrees(info.trace, info.q, ell):
        try:
            lifted, emb, basis = torsion_context(curve, ell, k, rng=rng)
            mat = endo_matrix_mod_ell(lift_endomorphism(phi, emb), ell, basis)
            break
        except TorsionNotRational:
            continue
    if mat is None:
        raise TorsionNotRational(f"could not realise E[{ell}] for the curve")
    tr = (mat[0][0] + mat[1][1]) % ell
    det = (mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]) % ell
    eigenvalues = tuple(x for x in range(ell)
                        if (x * x - tr * x + det) % ell == 0)
    scalar = mat[0][1] % ell == 0 and mat[1][0] % ell == 0 \
        and mat[0][0] % ell == mat[1][1] % ell
    p1, p2 = basis
    if scalar:
        verdict = DistortionVerdict(ell, Outcome.SCALAR_ACTION,
                                    legendre_value=sym,
                                    eigenvalues=eigenvalues,
                                    evidence="eigenlines")
    else:
        lines = []
        for lam in eigenvalues:
            vec = _eigenvector(mat, lam, ell)
            lines.append(scalar_mul(vec[0], p1) + scalar_mul(vec[1], p2))
        outcome = {0: Outcome.ALL, 1: Outcome.ALL_BUT_ONE,
                   2: Outcome.ALL_BUT_TWO}[len(eigenvalues)]
        verdict = DistortionVerdict(ell, outcome, legendre_value=sym,
                                    eigenvalues=eigenvalues,
                                    eigenlines=tuple(lines),
                                    evidence="eigenlines")
    if mode == "both":
        consistent = {
            1: verdict.outcome is Outcome.ALL_BUT_TWO,
            -1: verdict.outcome is Outcome.ALL,
            0: verdict.outcome in (Outcome.ALL_BUT_ONE,
                                   Outcome.SCALAR_ACTION),
        }[sym]
        if not consistent:
            raise DistmapError(
                f"legendre symbol {sym} contradicts eigenline verdict "
                f"{verdict.outcome} for ell={ell}")
        verdict.evidence = "both"
    return verdict


def verheul_obstruction(curve: Curve, ell: int,
                        rng: random.Random | None = None,
                        base_order: int | None = None) -> bool:
    """Impossibility certificate for rational ell-torsion points.

    True means no distortion map exists for P in E(F_q)[ell]: the curve is
    ordinary and E[ell] is not fully defined over F_q.
    """
    info = frobenius_trace(curve, base_order=base_order)
    if info.trace % curve.field.p == 0:
        raise CurveSupersingular("the obstruction only applies to ordinary curves")
    if info.order % ell:
        raise BadInput("ell must divide the group order over the base field")
    if (info.q - 1) % ell or info.order % (ell * ell):
        return True
    if rng is None:
        rng = random.Random(0)
    # ell^2 divides the order: decide by hunting for an independent pair
    work = curve.over(curve.base_k)
    if curve.field.n != curve.base_k:
        raise BadInput("base field must be the ambient field for sampling")
    from .pairing import root_of_unity_order, weil_pairing
    cof = info.order
    while cof % ell == 0:
        cof //= ell
    pts = []
    for _ in range(64):
        t = scalar_mul(cof, random_point(work, rng))
        while not t.is_infinity and not scalar_mul(ell, t).is_infinity:
            t = scalar_mul(ell, t)
        if t.is_infinity:
            continue
        for other in pts:
            if root_of_unity_order(weil_pairing(t, other, ell, rng=rng)) == ell:
                return False
        pts.append(t)
    return True


def trace_map(p: Point, k: int) -> Point:
    """Sum of the first k Frobenius conjugates of P (over the base field)."""
    base_k = p.curve.base_k
    acc = p
    cur = p
    for _ in range(k - 1):
        if not cur.is_infinity:
            cur = Point(p.curve, cur.x.frobenius(base_k),
                        cur.y.frobenius(base_k))
        acc = acc + cur
    return acc


def frobenius_eigenspaces(curve: Curve, ell: int,
                          rng: random.Random | None = None,
                          ambient_order: int | None = None) -> tuple:
    """Generators of the 1- and q-eigenlines of Frobenius on E[ell]."""
    info = frobenius_trace(curve)
    if info.order % ell:
        raise BadInput("ell must divide the group order over the base field")
    if (info.q - 1) % ell == 0:
        raise EigenvaluesCoincide("q = 1 mod ell: the eigenvalues collide")
    if rng is None:
        rng = random.Random(0)
    basis = torsion_basis(curve, ell, rng=rng, ambient_order=ambient_order)
    pi = frobenius_endomorphism(curve)
    mat = endo_matrix_mod_ell(pi, ell, basis)
    p1, p2 = basis
    out = []
    for lam in (1, info.q % ell):
        vec = _eigenvector(mat, lam, ell)
        if vec is None:
            raise EigenvaluesCoincide("Frobenius acts as a scalar on E[ell]")
        out.append(scalar_mul(vec[0], p1) + scalar_mul(vec[1], p2))
    return tuple(out)
