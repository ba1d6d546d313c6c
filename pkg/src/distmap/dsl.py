"""Tiny textual description language for endomorphism chains.

Grammar (whitespace ignored):

    endo  := term ('+' term)*
    term  := [INT '*'] atom (';' atom)*
    atom  := frob(E) | scalar(K) | twist(u=VAL, v=VAL)
           | iso(NAME) | dual(NAME)
    VAL   := integer | [c0, c1, ...]   (ascending coefficients)

Atoms are applied left to right, so `dual(V1); frob(1); iso(V1)` is the
transfer of the Frobenius along V1.
"""

from __future__ import annotations

import json
import re

from .curve import Curve
from .errors import SchemaError
from .isogeny import (Chain, DualOf, Endomorphism, FrobeniusPower,
                      LinearTwist, ScalarMul)

_ATOM_RE = re.compile(r"^(frob|scalar|twist|iso|dual)\((.*)\)$")


def _parse_value(field, text: str):
    text = text.strip()
    if text.startswith("["):
        return field.element(json.loads(text))
    return field.element(int(text))


def _parse_atom(text: str, field, isogenies: dict):
    m = _ATOM_RE.match(text.strip())
    if not m:
        raise SchemaError(f"cannot parse atom {text!r}")
    kind, body = m.group(1), m.group(2).strip()
    if kind == "frob":
        return FrobeniusPower(int(body))
    if kind == "scalar":
        return ScalarMul(int(body))
    if kind == "twist":
        parts = {}
        depth = 0
        cur = ""
        pieces = []
        for ch in body:
            if ch == "[":
                depth += 1
            elif ch == "]":
                depth -= 1
            if ch == "," and depth == 0:
                pieces.append(cur)
                cur = ""
            else:
                cur += ch
        if cur.strip():
            pieces.append(cur)
        for piece in pieces:
            key, _, val = piece.partition("=")
            parts[key.strip()] = _parse_value(field, val)
        if set(parts) != {"u", "v"}:
            raise SchemaError("twist needs exactly u= and v=")
        return LinearTwist(parts["u"], parts["v"])
    name = body.strip()
    if name not in isogenies:
        raise SchemaError(f"unknown isogeny name {name!r}")
    if kind == "iso":
        return isogenies[name]
    return DualOf(isogenies[name])


def parse_endomorphism(text: str, curve: Curve,
                       isogenies: dict | None = None) -> Endomorphism:
    """Parse a chain description into an endomorphism of `curve`."""
    isogenies = isogenies or {}
    terms = []
    for term in text.split("+"):
        term = term.strip()
        if not term:
            raise SchemaError("empty term in endomorphism description")
        weight = 1
        m = re.match(r"^(-?\d+)\s*\*\s*(.*)$", term)
        if m:
            weight = int(m.group(1))
            term = m.group(2)
        atoms = [_parse_atom(a, curve.field, isogenies)
                 for a in term.split(";") if a.strip()]
        if not atoms:
            raise SchemaError("term without atoms")
        terms.append((weight, Chain(curve, atoms)))
    return Endomorphism(curve, terms)
