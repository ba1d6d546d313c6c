"""Golden-example fixtures: loading, the check registry, and the runner.

A fixture file describes one worked example (field, curve, pinned points,
isogenies, endomorphism chains) plus a list of expectations.  Every
expectation must carry a provenance note; the runner compares computed
values against the recorded ones and reports one line per check.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from importlib import resources

from sympy import factorint

from .curve import (Curve, count_points_naive, frobenius_trace, lift_curve,
                    order_over_extension, point_order, scalar_mul,
                    torsion_basis)
from .distortion import (classify_prime, is_distortion_for_torsion,
                         _subgroup_contains)
from .dsl import parse_endomorphism
from .errors import SchemaError
from .extfield import extend_field
from .field import FieldSpec, legendre
from .isogeny import (dual, endo_matrix_mod_ell, endo_trace_degree, evaluate,
                      find_isomorphisms, frobenius_endomorphism,
                      velu_from_kernel)
from .pairing import modified_weil_pairing, root_of_unity_order, weil_pairing

FIXTURE_IDS = (
    "ex-2.4-transfer-F101",
    "ex-3.5-conductor-F13",
    "ex-3.7-frobenius-F361",
    "ex-3.8-charles-F701",
    "rem-5.x-F13",
)


@dataclass
class ExampleFixture:
    id: str
    config: dict
    expectations: list


def load_fixture(path_or_dict) -> ExampleFixture:
    """Load and validate a fixture; every expectation needs provenance."""
    if isinstance(path_or_dict, dict):
        raw = path_or_dict
    else:
        with open(path_or_dict, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    if not isinstance(raw.get("id"), str) or not raw["id"]:
        raise SchemaError("fixture is missing its id")
    if "config" not in raw or "expectations" not in raw:
        raise SchemaError("fixture needs config and expectations sections")
    for exp in raw["expectations"]:
        for key in ("check", "expected", "mode", "provenance"):
            if key not in exp:
                raise SchemaError(
                    f"expectation in {raw['id']} lacks {key!r}")
        if exp["mode"] not in ("exact", "set", "boolean"):
            raise SchemaError(f"unknown comparison mode {exp['mode']!r}")
    return ExampleFixture(raw["id"], raw["config"], raw["expectations"])


def builtin_fixture(fixture_id: str) -> ExampleFixture:
    name = fixture_id + ".json"
    ref = resources.files("distmap").joinpath("data").joinpath(name)
    with ref.open("r", encoding="utf-8") as fh:
        return load_fixture(json.load(fh))


def dump_fixture(fixture: ExampleFixture) -> dict:
    return {"id": fixture.id, "config": fixture.config,
            "expectations": fixture.expectations}


class FixtureContext:
    """Field, curve, points, isogenies and endos built from a config."""

    def __init__(self, config: dict):
        fld = config["field"]
        self.field = FieldSpec(fld["p"], fld.get("modulus"))
        cur = config["curve"]
        self.base_order = cur.get("base_order")
        self.curve = Curve(self.field, self._elt(cur["a"]),
                           self._elt(cur["b"]),
                           base_k=cur.get("base_degree", self.field.n))
        self.elements = {name: self._elt(val) for name, val in
                         config.get("elements", {}).items()}
        self.points = {}
        self.isogenies = {}
        self.endos = {}
        deferred = []
        for name, spec in config.get("points", {}).items():
            if spec.get("on", "curve") == "curve":
                self.points[name] = self.curve.point(spec["x"], spec["y"])
            else:
                deferred.append((name, spec))
        for name, spec in config.get("isogenies", {}).items():
            kernel = spec["kernel"]
            if isinstance(kernel, str):
                gen = self.points[kernel]
            else:
                gen = self.curve.point(kernel["x"], kernel["y"])
            base_k = spec.get("base_degree", self.field.n)
            domain = self.curve.over(base_k)
            gen = domain.point(gen.x, gen.y)
            self.isogenies[name] = velu_from_kernel(domain, gen)
        for name, spec in deferred:
            on = self.resolve_curve(spec["on"])
            self.points[name] = on.point(spec["x"], spec["y"])
        for name, spec in config.get("endos", {}).items():
            if isinstance(spec, str):
                spec = {"chain": spec}
            on = self.resolve_curve(spec.get("on", "curve"))
            self.endos[name] = parse_endomorphism(spec["chain"], on,
                                                  self.isogenies)

    def _elt(self, value):
        return self.field.element(value)

    def resolve_curve(self, name: str) -> Curve:
        if name == "curve":
            return self.curve
        base, _, attr = name.partition(".")
        if attr == "codomain":
            return self.isogenies[base].codomain
        if attr == "domain":
            return self.isogenies[base].domain
        raise SchemaError(f"cannot resolve curve {name!r}")

    def ambient_order(self) -> int:
        """Group order over the ambient field (shared by isogenous curves)."""
        return order_over_extension(self.curve,
                                    self.field.n // self.curve.base_k,
                                    base_order=self.base_order)

    def info(self):
        return frobenius_trace(self.curve, base_order=self.base_order)


def _ser(elt) -> object:
    """Serialize a field element: int in the prime field, else the list."""
    if elt.in_subfield(1):
        return elt.coeffs[0]
    return list(elt.coeffs)


def _ser_poly(poly) -> list:
    return [_ser(c) for c in poly.coeffs]


def _ser_point(pt) -> object:
    if pt.is_infinity:
        return "infinity"
    return [_ser(pt.x), _ser(pt.y)]


def _torsion_points(ctx, curve, m, seed=0):
    basis = torsion_basis(curve, m, rng=random.Random(seed),
                          ambient_order=ctx.ambient_order())
    p1, p2 = basis
    pts = []
    row = curve.infinity()
    for i in range(m):
        cur = row
        for j in range(m):
            if i or j:
                pts.append(cur)
            cur = cur + p2
        row = row + p1
    return basis, pts


# --- check implementations --------------------------------------------------

def _check_group_order(ctx, args):
    if "extension" in args:
        return order_over_extension(ctx.curve, args["extension"],
                                    base_order=ctx.base_order)
    return ctx.info().order


def _check_group_order_naive(ctx, args):
    return count_points_naive(ctx.curve, k=args.get("degree"))


def _check_trace(ctx, args):
    return ctx.info().trace


def _check_frobenius_discriminant(ctx, args):
    info = ctx.info()
    return info.trace * info.trace - 4 * info.q


def _check_supersingular(ctx, args):
    return ctx.info().trace % ctx.field.p == 0


def _check_legendre(ctx, args):
    return legendre(args["d"], args["ell"])


def _check_order_factorization(ctx, args):
    n = _check_group_order(ctx, args)
    return {str(k): v for k, v in sorted(factorint(n).items())}


def _check_smallest_extension_with_torsion(ctx, args):
    m, limit = args["m"], args.get("limit", 128)
    for n in range(1, limit + 1):
        if order_over_extension(ctx.curve, n,
                                base_order=ctx.base_order) % m == 0:
            return n
    return None


def _check_element_power(ctx, args):
    return _ser(ctx.elements[args["element"]] ** args["exponent"])


def _check_twist_constants_match(ctx, args):
    p = ctx.field.p
    r = ctx.elements[args["r"]]
    w = ctx.elements[args["w"]]
    chain = ctx.endos[args["endo"]].terms[0][1]
    twist = chain.atoms[-1]
    return (twist.u == w / r ** ((2 * p - 1) // 3)
            and twist.v == 1 / r ** (p - 1))


def _check_velu_codomain(ctx, args):
    iso = ctx.isogenies[args["isogeny"]]
    return [_ser(iso.codomain.a), _ser(iso.codomain.b)]


def _check_velu_degree(ctx, args):
    return ctx.isogenies[args["isogeny"]].degree


def _check_velu_map(ctx, args):
    iso = ctx.isogenies[args["isogeny"]]
    poly = {"x_num": iso.maps.x_num, "x_den": iso.maps.x_den,
            "y_num": iso.maps.y_num, "y_den": iso.maps.y_den}[args["which"]]
    return _ser_poly(poly)


def _check_maps_rational_over(ctx, args):
    iso = ctx.isogenies[args["isogeny"]]
    k = args["degree"]
    return all(poly.descends_to(k) for poly in
               (iso.maps.x_num, iso.maps.x_den, iso.maps.y_num,
                iso.maps.y_den))


def _check_dual_x_map(ctx, args):
    d = dual(ctx.isogenies[args["isogeny"]])
    return {"num": _ser_poly(d.maps.x_num), "den": _ser_poly(d.maps.x_den)}


def _check_endo_invariants(ctx, args):
    return list(endo_trace_degree(ctx.endos[args["endo"]]))


def _check_distorts_torsion(ctx, args):
    return is_distortion_for_torsion(ctx.endos[args["endo"]], ctx.curve,
                                     args["m"])


def _check_classify(ctx, args):
    endo = ctx.endos[args["endo"]]
    verdict = classify_prime(endo, endo.curve, args["ell"],
                             mode=args.get("mode", "both"))
    return verdict.outcome.value


def _check_eigenvalues(ctx, args):
    endo = ctx.endos[args["endo"]]
    verdict = classify_prime(endo, endo.curve, args["ell"],
                             mode="eigenlines")
    return sorted(verdict.eigenvalues)


def _check_endo_matrix(ctx, args):
    endo = ctx.endos[args["endo"]]
    basis, _ = _torsion_points(ctx, endo.curve, args["ell"],
                               seed=args.get("seed", 0))
    mat = endo_matrix_mod_ell(endo, args["ell"], basis)
    return [list(mat[0]), list(mat[1])]


def _check_matrix_nilpotent(ctx, args):
    mat = _check_endo_matrix(ctx, args)
    ell = args["ell"]
    a, b = mat[0]
    c, d = mat[1]
    nonzero = any(v % ell for v in (a, b, c, d))
    sq = ((a * a + b * c) % ell, (a * b + b * d) % ell,
          (c * a + d * c) % ell, (c * b + d * d) % ell)
    return {"nonzero": nonzero, "square_zero": sq == (0, 0, 0, 0)}


def _check_distortion_count(ctx, args):
    curve = ctx.resolve_curve(args.get("on", "curve"))
    endo = ctx.endos[args["endo"]]
    m = args["m"]
    _, pts = _torsion_points(ctx, curve, m, seed=args.get("seed", 0))
    sub = args.get("subfield")
    total = 0
    distorted = 0
    for pt in pts:
        if sub is not None and not (pt.x.in_subfield(sub)
                                    and pt.y.in_subfield(sub)):
            continue
        total += 1
        if not _subgroup_contains(pt, evaluate(endo, pt), m):
            distorted += 1
    if sub is not None:
        return {"points": total, "distorted": distorted}
    return distorted


def _check_point_image(ctx, args):
    endo = ctx.endos[args["endo"]]
    x, y = args["point"]
    pt = endo.curve.point(x, y)
    return _ser_point(evaluate(endo, pt))


def _check_subgroup_killed(ctx, args):
    endo = ctx.endos[args["endo"]]
    pt = ctx.points[args["point"]]
    cur = pt
    while not cur.is_infinity:
        if not evaluate(endo, cur).is_infinity:
            return False
        cur = cur + pt
    return True


def _check_conductor_structure(ctx, args):
    """Off-base points of E[ell] are distorted, with images on the base line."""
    endo = ctx.endos[args["endo"]]
    base_pt = ctx.points[args["base_point"]]
    ell = args["ell"]
    _, pts = _torsion_points(ctx, endo.curve, ell, seed=args.get("seed", 0))
    base_line = set()
    cur = endo.curve.infinity()
    for _ in range(ell):
        base_line.add(cur)
        cur = cur + base_pt
    offbase = [pt for pt in pts if pt not in base_line]
    distorted = sum(
        1 for pt in offbase
        if not _subgroup_contains(pt, evaluate(endo, pt), ell))
    images_on_line = all(evaluate(endo, pt) in base_line for pt in offbase)
    return {"offbase_points": len(offbase), "distorted": distorted,
            "images_in_base_line": images_on_line}


def _check_pairing_with_image(ctx, args):
    pt = ctx.points[args["point"]]
    endo = ctx.endos[args["endo"]]
    val = weil_pairing(pt, evaluate(endo, pt), args["m"],
                       rng=random.Random(args.get("seed", 0)))
    if args.get("order"):
        return root_of_unity_order(val)
    return _ser(val.value)


def _check_modified_pairing_diag(ctx, args):
    pt = ctx.points[args["point"]]
    endo = ctx.endos[args["endo"]]
    val = modified_weil_pairing(pt, pt, args["m"], endo,
                                rng=random.Random(args.get("seed", 0)))
    if args.get("order"):
        return root_of_unity_order(val)
    return _ser(val.value)


def _check_isomorphisms_include(ctx, args):
    src = ctx.resolve_curve(args["from"])
    dst = ctx.resolve_curve(args["to"])
    u = ctx.field.element(args["u"])
    v = ctx.field.element(args["v"])
    return any(t.u == u and t.v == v for t in find_isomorphisms(src, dst))


def _check_e22_distortion_count(ctx, args):
    """Extended: lift to F_19^120 and test every non-trivial point of E[22]."""
    ext = args.get("extension", 60)
    big, emb = extend_field(ctx.field, ext)
    lifted = lift_curve(ctx.curve, emb)
    amb = order_over_extension(
        ctx.curve, ext * ctx.field.n // ctx.curve.base_k,
        base_order=ctx.base_order)
    basis = torsion_basis(lifted, 22, rng=random.Random(args.get("seed", 0)),
                          ambient_order=amb)
    pi = frobenius_endomorphism(lifted)
    p1, p2 = basis
    count = 0
    fact = {2: 1, 11: 1}
    row = lifted.infinity()
    for i in range(22):
        cur = row
        for j in range(22):
            if i or j:
                order = point_order(cur, 22, fact)
                if not _subgroup_contains(cur, evaluate(pi, cur), order):
                    count += 1
            cur = cur + p2
        row = row + p1
    return count


CHECKS = {
    "group_order": _check_group_order,
    "group_order_naive": _check_group_order_naive,
    "trace": _check_trace,
    "frobenius_discriminant": _check_frobenius_discriminant,
    "supersingular": _check_supersingular,
    "legendre": _check_legendre,
    "order_factorization": _check_order_factorization,
    "smallest_extension_with_torsion": _check_smallest_extension_with_torsion,
    "element_power": _check_element_power,
    "twist_constants_match": _check_twist_constants_match,
    "velu_codomain": _check_velu_codomain,
    "velu_degree": _check_velu_degree,
    "velu_map": _check_velu_map,
    "maps_rational_over": _check_maps_rational_over,
    "dual_x_map": _check_dual_x_map,
    "endo_invariants": _check_endo_invariants,
    "distorts_torsion": _check_distorts_torsion,
    "classify": _check_classify,
    "eigenvalues": _check_eigenvalues,
    "endo_matrix": _check_endo_matrix,
    "matrix_nilpotent": _check_matrix_nilpotent,
    "distortion_count": _check_distortion_count,
    "point_image": _check_point_image,
    "subgroup_killed": _check_subgroup_killed,
    "conductor_structure": _check_conductor_structure,
    "pairing_with_image": _check_pairing_with_image,
    "modified_pairing_diag": _check_modified_pairing_diag,
    "isomorphisms_include": _check_isomorphisms_include,
    "e22_distortion_count": _check_e22_distortion_count,
}


def _values_match(computed, expected, mode: str) -> bool:
    if mode == "boolean":
        return bool(computed) is bool(expected)
    if mode == "set":
        return sorted(computed) == sorted(expected)
    return computed == expected


def run_fixture(fixture: ExampleFixture, extended: bool = False) -> dict:
    """Run all expectations; extended ones only when requested."""
    ctx = FixtureContext(fixture.config)
    results = []
    passed = True
    for exp in fixture.expectations:
        if exp.get("extended") and not extended:
            results.append({"name": exp["check"], "status": "skipped"})
            continue
        fn = CHECKS.get(exp["check"])
        if fn is None:
            raise SchemaError(f"unknown check {exp['check']!r}")
        computed = fn(ctx, exp.get("args", {}))
        ok = _values_match(computed, exp["expected"], exp["mode"])
        passed = passed and ok
        results.append({"name": exp["check"], "args": exp.get("args", {}),
                        "status": "pass" if ok else "fail",
                        "expected": exp["expected"], "computed": computed})
    return {"id": fixture.id, "passed": passed, "checks": results}
