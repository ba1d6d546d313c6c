"""Construction of larger extensions and embeddings between them.

A FieldEmbedding maps F_{p^n} into F_{p^N} (n | N) by sending the source
generator to a root of the source modulus in the target field.  Which root
is used is deterministic (the lexicographically smallest), so embedded
values are reproducible run to run.
"""

from __future__ import annotations

import random

from .errors import BadInput
from .field import FieldElement, FieldSpec, find_irreducible
from .poly import Poly, roots


class FieldEmbedding:
    """F_{p^n} -> F_{p^N} fixing F_p, determined by the image of z."""

    __slots__ = ("source", "target", "gen_image", "_powers")

    def __init__(self, source: FieldSpec, target: FieldSpec,
                 gen_image: FieldElement):
        if source.p != target.p or target.n % source.n:
            raise BadInput("no embedding between these fields")
        self.source = source
        self.target = target
        self.gen_image = gen_image
        pw = [target.one()]
        for _ in range(source.n - 1):
            pw.append(pw[-1] * gen_image)
        self._powers = pw

    def __call__(self, a: FieldElement) -> FieldElement:
        if a.spec == self.target:
            return a
        if a.spec != self.source:
            raise BadInput("element not in the source field")
        acc = self.target.zero()
        for c, zk in zip(a.coeffs, self._powers):
            if c:
                acc = acc + zk * c
        return acc


def identity_embedding(spec: FieldSpec) -> FieldEmbedding:
    gen = spec.generator() if spec.n > 1 else spec.one()
    return FieldEmbedding(spec, spec, gen)


def embed_into(source: FieldSpec, target: FieldSpec) -> FieldEmbedding:
    """Embedding of source into target via a root of the source modulus."""
    if source == target:
        return identity_embedding(source)
    if source.n == 1:
        return FieldEmbedding(source, target, target.one())
    f = Poly(target, [target.element(c) for c in source.modulus])
    rs = roots(f, random.Random(0))
    if not rs:
        raise BadInput("source modulus has no root in the target field")
    return FieldEmbedding(source, target, rs[0])


def extend_field(source: FieldSpec, k: int) -> tuple:
    """Degree-k extension of source, returned with the embedding into it.

    The new modulus over F_p has degree n*k and is found deterministically,
    so the same request always yields the same field.
    """
    if k == 1:
        return source, identity_embedding(source)
    target = FieldSpec(source.p, find_irreducible(source.p, source.n * k),
                       check=False)
    return target, embed_into(source, target)


def subfield_elements(spec: FieldSpec, k: int) -> list:
    """All p^k elements of the subfield F_{p^k} inside F_{p^n} (k | n).

    The subfield is the fixed space of a -> a^(p^k), found by linear
    algebra over F_p on the coefficient vectors.
    """
    if spec.n % k:
        raise BadInput("subfield degree must divide the extension degree")
    if k == spec.n:
        return list(spec.elements())
    p, n = spec.p, spec.n
    # columns of the Frobenius^k matrix are (z^i)^(p^k) = w^i
    w = spec.generator().frobenius(k)
    cols, acc = [], spec.one()
    for _ in range(n):
        cols.append(list(acc.coeffs))
        acc = acc * w
    # kernel of (M - I) over F_p by Gaussian elimination
    m = [[(cols[j][i] - (1 if i == j else 0)) % p for j in range(n)]
         for i in range(n)]
    pivots = []
    row = 0
    for col in range(n):
        sel = next((r for r in range(row, n) if m[r][col]), None)
        if sel is None:
            continue
        m[row], m[sel] = m[sel], m[row]
        inv = pow(m[row][col], -1, p)
        m[row] = [(c * inv) % p for c in m[row]]
        for r in range(n):
            if r != row and m[r][col]:
                f = m[r][col]
                m[r] = [(a - f * b) % p for a, b in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != k:
        raise BadInput("unexpected fixed-space dimension")
    basis = []
    for fc in free:
        vec = [0] * n
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = (-m[r][fc]) % p
        basis.append(spec.element(vec))
    out = []
    idx = [0] * k
    for _ in range(p ** k):
        acc = spec.zero()
        for i, c in enumerate(idx):
            if c:
                acc = acc + basis[i] * c
        out.append(acc)
        for i in range(k):
            idx[i] += 1
            if idx[i] < p:
                break
            idx[i] = 0
    return out
