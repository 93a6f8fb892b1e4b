"""JSON conversion for domains, thick sets, quadrature settings, coverings,
spectral functions and operator models.

Every object becomes a dict with a ``"type"`` tag naming its class.
Infinite lengths are written as the strings ``"+inf"`` and ``"-inf"``.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, fields

import numpy as np

from .bernstein import DivergenceConstant, FractionalLaplacian, HarmonicOscillator, PureLaplacian
from .covering import Covering, CoveringElement
from .errors import SchemaError
from .geometry.domains import (EquilateralTriangle, ExtendedInterval, GeneralizedRectangle, Product,
                               RightTriangle, Sector)
from .geometry.quadrature import QuadratureSpec
from .geometry.shapes import Box, Polygon, ProductShape
from .geometry.thick import BoxUnion, FullSpace, PeriodicBoxUnion
from .spectral import BoundaryCondition, HermiteTensor, Mode, RectangleTrig, SpectralFunction


def num(x) -> float | str:
    x = float(x)
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return x


def unnum(v) -> float:
    if isinstance(v, str):
        if v in ("+inf", "inf"):
            return math.inf
        if v == "-inf":
            return -math.inf
        raise SchemaError([("", f"not a number: {v!r}")])
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError([("", f"not a number: {v!r}")])
    return float(v)


def _vec(xs) -> list:
    return [num(v) for v in np.asarray(xs, dtype=float).ravel()]


def _tag(obj: dict, path: str) -> str:
    if not isinstance(obj, dict) or "type" not in obj:
        raise SchemaError([(path, "object with a 'type' tag expected")])
    return obj["type"]


# ------------------------------------------------------------------ geometry

def box_to_json(b: Box) -> dict:
    return {"type": "Box", "corner": _vec(b.corner), "sides": _vec(b.sides)}


def box_from_json(obj: dict) -> Box:
    return Box([unnum(v) for v in obj["corner"]], [unnum(v) for v in obj["sides"]])


def shape_to_json(s) -> dict:
    if isinstance(s, Box):
        return box_to_json(s)
    if isinstance(s, Polygon):
        return {"type": "Polygon", "vertices": [_vec(v) for v in s.vertices_ccw]}
    if isinstance(s, ProductShape):
        return {"type": "ProductShape", "factors": [shape_to_json(f) for f in s.factors]}
    raise TypeError(f"cannot serialize shape {type(s).__name__}")


def shape_from_json(obj: dict, path: str = "$"):
    t = _tag(obj, path)
    if t == "Box":
        return box_from_json(obj)
    if t == "Polygon":
        return Polygon([[unnum(v) for v in p] for p in obj["vertices"]])
    if t == "ProductShape":
        return ProductShape(tuple(shape_from_json(f, f"{path}.factors[{i}]")
                                  for i, f in enumerate(obj["factors"])))
    raise SchemaError([(f"{path}.type", f"unknown shape type {t!r}")])


def domain_to_json(dom) -> dict:
    if isinstance(dom, GeneralizedRectangle):
        return {"type": "GeneralizedRectangle",
                "intervals": [[num(iv.lo), num(iv.hi)] for iv in dom.intervals]}
    if isinstance(dom, Sector):
        return {"type": "Sector", "n": dom.n}
    if isinstance(dom, EquilateralTriangle):
        return {"type": "EquilateralTriangle", "side": dom.side}
    if isinstance(dom, RightTriangle):
        return {"type": "RightTriangle", "angle": dom.theta, "leg": dom.leg}
    if isinstance(dom, Product):
        return {"type": "Product", "factors": [domain_to_json(f) for f in dom.factors()]}
    raise TypeError(f"cannot serialize domain {type(dom).__name__}")


def domain_from_json(obj: dict, path: str = "$"):
    t = _tag(obj, path)
    try:
        if t == "GeneralizedRectangle":
            return GeneralizedRectangle(tuple(ExtendedInterval(unnum(a), unnum(b))
                                              for a, b in obj["intervals"]))
        if t == "Sector":
            return Sector(int(obj["n"]))
        if t == "EquilateralTriangle":
            return EquilateralTriangle(unnum(obj["side"]))
        if t == "RightTriangle":
            if "n" in obj:
                return RightTriangle(int(obj["n"]), unnum(obj["leg"]))
            return RightTriangle.from_angle(unnum(obj["angle"]), unnum(obj["leg"]))
        if t == "Product":
            return Product(tuple(domain_from_json(f, f"{path}.factors[{i}]")
                                 for i, f in enumerate(obj["factors"])))
    except KeyError as exc:
        raise SchemaError([(path, f"missing field {exc.args[0]!r}")]) from None
    raise SchemaError([(f"{path}.type", f"unknown domain type {t!r}")])


def thick_to_json(om) -> dict:
    if isinstance(om, FullSpace):
        return {"type": "FullSpace"} if om.dim is None else {"type": "FullSpace", "dim": om.dim}
    if isinstance(om, BoxUnion):
        return {"type": "BoxUnion", "boxes": [box_to_json(b) for b in om.boxes]}
    if isinstance(om, PeriodicBoxUnion):
        return {"type": "PeriodicBoxUnion", "period": _vec(om.period),
                "base": [box_to_json(b) for b in om.base]}
    raise TypeError(f"cannot serialize thick set {type(om).__name__}")


def thick_from_json(obj: dict, path: str = "$"):
    t = _tag(obj, path)
    try:
        if t == "FullSpace":
            return FullSpace(obj.get("dim"))
        if t == "BoxUnion":
            return BoxUnion(tuple(box_from_json(b) for b in obj["boxes"]))
        if t == "PeriodicBoxUnion":
            return PeriodicBoxUnion([unnum(v) for v in obj["period"]],
                                    tuple(box_from_json(b) for b in obj["base"]))
    except KeyError as exc:
        raise SchemaError([(path, f"missing field {exc.args[0]!r}")]) from None
    raise SchemaError([(f"{path}.type", f"unknown thick set type {t!r}")])


def quadrature_to_json(spec: QuadratureSpec) -> dict:
    return asdict(spec)


def quadrature_from_json(obj: dict | None) -> QuadratureSpec:
    if obj is None:
        return QuadratureSpec()
    known = {f.name for f in fields(QuadratureSpec)}
    bad = sorted(set(obj) - known)
    if bad:
        raise SchemaError([(f"$.quadrature.{k}", "unknown key") for k in bad])
    return QuadratureSpec(**obj)


def geometry_document(domain, thick_set=None, spec: QuadratureSpec | None = None) -> dict:
    doc = {"domain": domain_to_json(domain)}
    if thick_set is not None:
        doc["thick_set"] = thick_to_json(thick_set)
    if spec is not None:
        doc["quadrature"] = quadrature_to_json(spec)
    return doc


def read_geometry_document(doc: dict):
    """``(domain, thick_set or None, QuadratureSpec)`` from a geometry document."""
    return (domain_from_json(doc["domain"], "$.domain"),
            thick_from_json(doc["thick_set"], "$.thick_set") if "thick_set" in doc else None,
            quadrature_from_json(doc.get("quadrature")))


# ------------------------------------------------------------------ covering

def covering_to_json(cov: Covering) -> dict:
    out = {"kappa": cov.kappa, "rho": cov.rho, "l": _vec(cov.l), "eta": cov.eta,
           "elements": [{"shape": shape_to_json(e.shape), "bbox_l": _vec(e.bounding_l),
                         "cube_corner": _vec(e.cube_corner), "psi": [_vec(r) for r in e.psi]}
                        for e in cov.elements]}
    if cov.domain is not None:
        out["domain"] = domain_to_json(cov.domain)
    if cov.window is not None:
        out["window"] = box_to_json(cov.window)
    return out


def covering_from_json(obj: dict) -> Covering:
    els = tuple(CoveringElement(shape_from_json(e["shape"], f"$.elements[{i}].shape"),
                                [unnum(v) for v in e["bbox_l"]], [unnum(v) for v in e["cube_corner"]],
                                [[unnum(v) for v in r] for r in e["psi"]])
                for i, e in enumerate(obj["elements"]))
    dom = domain_from_json(obj["domain"], "$.domain") if "domain" in obj else None
    win = box_from_json(obj["window"]) if "window" in obj else None
    return Covering(els, int(obj["kappa"]), unnum(obj["rho"]), [unnum(v) for v in obj["l"]],
                    unnum(obj["eta"]), dom, win)


# ------------------------------------------------------------------ spectral

def basis_to_json(basis) -> dict:
    if isinstance(basis, RectangleTrig):
        out = {"type": "RectangleTrig", "box": box_to_json(basis.box), "bc": basis.bc.value}
        if basis.scale is not None:
            out["scale"] = [float(s) for s in basis.scale]
        return out
    if isinstance(basis, HermiteTensor):
        return {"type": "HermiteTensor", "d": basis.d}
    raise TypeError(f"cannot serialize basis {type(basis).__name__}")


def basis_from_json(obj: dict, path: str = "$.basis"):
    t = _tag(obj, path)
    if t == "RectangleTrig":
        return RectangleTrig(box_from_json(obj["box"]), BoundaryCondition(obj.get("bc", "dirichlet")),
                             tuple(obj["scale"]) if obj.get("scale") is not None else None)
    if t == "HermiteTensor":
        return HermiteTensor(int(obj["d"]))
    raise SchemaError([(f"{path}.type", f"unknown basis type {t!r}")])


def function_to_json(f: SpectralFunction) -> dict:
    return {"basis": basis_to_json(f.basis),
            "terms": [{"index": list(m.index), "re": c.real, "im": c.imag} for m, c in f.terms],
            "lambda": f.lambda_cap}


def function_from_json(obj: dict) -> SpectralFunction:
    try:
        basis = basis_from_json(obj["basis"])
        terms = []
        for t in obj["terms"]:
            idx = tuple(int(i) for i in t["index"])
            terms.append((Mode(idx, basis.eigenvalue(idx)), complex(t.get("re", 0.0), t.get("im", 0.0))))
        lam = float(obj["lambda"])
    except KeyError as exc:
        raise SchemaError([("$", f"missing field {exc.args[0]!r}")]) from None
    return SpectralFunction(basis, tuple(terms), lam)


# -------------------------------------------------------------------- models

MODEL_NAMES = ("pure-laplacian", "fractional-laplacian", "divergence", "harmonic-oscillator")


def model_from_json(obj, path: str = "$.model"):
    """Accepts a bare name or ``{"type": name, ...parameters}``."""
    if isinstance(obj, str):
        obj = {"type": obj}
    t = _tag(obj, path)
    if t == "pure-laplacian":
        return PureLaplacian()
    if t == "fractional-laplacian":
        return FractionalLaplacian(float(obj["s"]))
    if t == "divergence":
        return DivergenceConstant(float(obj["sigma_min"]))
    if t == "harmonic-oscillator":
        return HarmonicOscillator(obj.get("delta"))
    raise SchemaError([(f"{path}.type", f"unknown model {t!r}")])


def model_to_json(model) -> dict:
    if isinstance(model, PureLaplacian):
        return {"type": "pure-laplacian"}
    if isinstance(model, FractionalLaplacian):
        return {"type": "fractional-laplacian", "s": model.s}
    if isinstance(model, DivergenceConstant):
        return {"type": "divergence", "sigma_min": model.sigma_min}
    if isinstance(model, HarmonicOscillator):
        out = {"type": "harmonic-oscillator"}
        if model.delta is not None:
            out["delta"] = model.delta
        return out
    raise TypeError(f"cannot serialize model {type(model).__name__}")


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, allow_nan=False)
