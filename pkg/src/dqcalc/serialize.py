"""JSON encoding of symbols and the JSON input schemas of the CLI."""
from __future__ import annotations

from .cech import AbelianGroup, CechCochain, DescentDatum, GlueDatum, Nerve
from .lagrange import Correspondence, LinearLagrangian, SymplecticSpace
from .parser import Value, evaluate, parse_expr
from .scalars import LaurentScalar, as_scalar
from .starexp import SSeries, TWElement
from .symbols import ESymbol, WSymbol
from .wcalc import AffineLift, InnerAd, OTauElement, WAutomorphism

__all__ = ["to_json", "from_json", "nerve_from_json", "cochain_from_json",
           "descent_from_json", "space_from_json", "lagrangian_from_json",
           "correspondence_from_json"]


def _sym_json(s):
    n = s.n
    if isinstance(s, WSymbol):
        terms = [
            {"coeff": str(s.terms[(j, e)]), "tau": j, "x": list(e[:n]), "u": list(e[n:])}
            for j, e in s._sorted_keys()
        ]
        return {"type": "W", "n": n, "floor": s.floor, "terms": terms}
    terms = [
        {"coeff": str(s.terms[(j, e)]), "degree": j, "x": list(e[:n]), "xi": list(e[n:])}
        for j, e in s._sorted_keys()
    ]
    return {"type": "E", "n": n, "has_t": s.has_t, "floor": s.floor, "terms": terms}


def to_json(obj):
    if isinstance(obj, (WSymbol, ESymbol)):
        return _sym_json(obj)
    if isinstance(obj, OTauElement):
        d = _sym_json(obj.value)
        d["type"] = "Otau"
        return d
    if isinstance(obj, LaurentScalar):
        return {
            "type": "k",
            "floor": obj.floor,
            "coeffs": {str(j): str(obj.coeffs[j]) for j in sorted(obj.coeffs, reverse=True)},
        }
    if isinstance(obj, TWElement):
        return {
            "type": "TW",
            "n": obj.n,
            "t_floor": obj.t_floor,
            "coeffs": [{"t": d, "symbol": _sym_json(s)} for d, s in sorted(obj.coeffs.items())],
        }
    if isinstance(obj, SSeries):
        return {
            "type": "SW",
            "n": obj.n,
            "s_floor": obj.s_floor,
            "coeffs": [{"k": k, "symbol": _sym_json(s)} for k, s in sorted(obj.coeffs.items())],
        }
    if isinstance(obj, Value):
        return {
            "type": "graded",
            "parts": [
                {"t": a, "s": b, "symbol": _sym_json(obj.parts[(a, b)])}
                for a, b in sorted(obj.parts, key=lambda k: (k[0], -k[1]))
            ],
            "proto": _sym_json(obj.proto),
        }
    raise TypeError(f"cannot encode {type(obj).__name__}")


def _sym_from(d):
    n = d["n"]
    if d["type"] in ("W", "Otau"):
        terms = {(t["tau"], tuple(t["x"]) + tuple(t["u"])): as_scalar(t["coeff"]) for t in d["terms"]}
        s = WSymbol.from_terms(n, terms, d.get("floor"))
        return OTauElement(s) if d["type"] == "Otau" else s
    terms = {(t["degree"], tuple(t["x"]) + tuple(t["xi"])): as_scalar(t["coeff"]) for t in d["terms"]}
    return ESymbol.from_terms(n, terms, d.get("floor"), has_t=d.get("has_t", False))


def from_json(d):
    kind = d.get("type")
    if kind in ("W", "E", "Otau"):
        return _sym_from(d)
    if kind == "k":
        return LaurentScalar({int(j): c for j, c in d["coeffs"].items()}, d.get("floor"))
    if kind == "TW":
        return TWElement(d["n"], {c["t"]: _sym_from(c["symbol"]) for c in d["coeffs"]}, d.get("t_floor"))
    if kind == "SW":
        return SSeries(d["n"], {c["k"]: _sym_from(c["symbol"]) for c in d["coeffs"]}, d.get("s_floor"))
    if kind == "graded":
        return Value({(p["t"], p["s"]): _sym_from(p["symbol"]) for p in d["parts"]}, _sym_from(d["proto"]))
    raise ValueError(f"unknown JSON object type {kind!r}")


# --------------------------------------------------------------------------
# input schemas


def _face(key):
    if isinstance(key, str):
        return tuple(int(v) for v in key.split(","))
    return tuple(int(v) for v in key)


def nerve_from_json(d) -> Nerve:
    faces = []
    for name in ("pairs", "triples", "quads"):
        faces.extend(tuple(f) for f in d.get(name, []))
    return Nerve(int(d["indices"]), faces)


def cochain_from_json(d, key="cochain2", degree=2) -> CechCochain:
    """Cochain from the input schema; declared faces without a value are zero."""
    G = AbelianGroup(d["group"])
    vals = {_face(k): v for k, v in d.get(key, {}).items()}
    faces = d.get({1: "pairs", 2: "triples"}[degree], [])
    for f in faces:
        vals.setdefault(tuple(f), [0] * len(G.mods))
    return CechCochain(degree, G, vals)


def cochain_to_json(c: CechCochain):
    return {",".join(map(str, k)): list(v) for k, v in sorted(c.values.items())}


def _w_expr(text, n):
    val = evaluate(parse_expr(str(text), "w"), "w", n)
    return val.symbol()


def _automorphism(spec, n, depth):
    if spec in (None, "id", []):
        return WAutomorphism.identity()
    steps = []
    for step in spec:
        if "inner" in step:
            steps.append(InnerAd(_w_expr(step["inner"], n), int(step.get("depth", depth + 2))))
        elif "affine" in step:
            A = step["affine"]["A"]
            steps.append(AffineLift(A, step["affine"].get("b")))
        else:
            raise ValueError(f"unknown automorphism step {step!r}")
    return WAutomorphism(steps)


def descent_from_json(d):
    """Descent datum (and optional gluing datum) from the CLI input schema.

    ``f`` maps ``"i,j"`` to a list of steps ``{"inner": EXPR}`` or
    ``{"affine": {"A": [[...]], "b": [...]}}``; ``a`` maps ``"i,j,k"`` to an
    expression; the optional ``glue`` block gives ``ranks`` and ``xi``
    matrices of expressions.
    """
    nv = nerve_from_json(d)
    n = int(d.get("vars", 1))
    depth = int(d.get("depth", 6))
    f = {_face(k): _automorphism(v, n, depth) for k, v in d.get("f", {}).items()}
    a = {_face(k): _w_expr(v, n) for k, v in d.get("a", {}).items()}
    dd = DescentDatum(nv, n, f, a, depth)
    gd = None
    if "glue" in d:
        g = d["glue"]
        ranks = {int(k): int(v) for k, v in g["ranks"].items()}
        xi = {_face(k): [[_w_expr(e, n) for e in row] for row in m] for k, m in g["xi"].items()}
        gd = GlueDatum(nv, ranks, xi, dd)
    return dd, gd


def space_from_json(d) -> SymplecticSpace:
    form = d.get("form", "standard")
    return SymplecticSpace(int(d["n"]), None if form == "standard" else form)


def lagrangian_from_json(d) -> LinearLagrangian:
    return LinearLagrangian(space_from_json(d), d["basis"])


def correspondence_from_json(d) -> Correspondence:
    return Correspondence(space_from_json(d["left"]), space_from_json(d["right"]), d["basis"])


def basis_to_json(basis):
    return [[str(v) for v in vec] for vec in basis]
