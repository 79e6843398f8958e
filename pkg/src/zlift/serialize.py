"""JSON forms of maps, steps and certificates; every number is an exact string."""

import json
import math

from .commutative import Affine, CommEndo, ElemX, ElemY, render_comm
from .freealg import render
from .morphism import Endo, LinearLeft, Scale, TailForm, TransvectX, TransvectY
from .parser import NC, parse, parse_coefficient
from .scalar import RatFunc

SCHEMA_VERSION = 1


def _rf(r):
    return str(r)


def _rf_in(s):
    return parse_coefficient(str(s))


def _num(v):
    """Degrees and valuations; infinities become strings."""
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def endo_to_json(e):
    if isinstance(e, CommEndo):
        return {"image_x": render_comm(e.image_x), "image_y": render_comm(e.image_y)}
    return {"image_x": render(e.image_x), "image_y": render(e.image_y)}


def endo_from_json(data, mode=NC):
    fx, fy = parse(data["image_x"], mode), parse(data["image_y"], mode)
    return Endo(fx, fy) if mode == NC else CommEndo(fx, fy)


def tail_to_json(tail):
    return [[_rf(q) for q in qs] for qs in tail.summands]


def tail_from_json(data):
    return TailForm([tuple(_rf_in(q) for q in qs) for qs in data])


def step_to_json(s):
    if isinstance(s, TransvectY):
        return {"type": "TransvectY", "r": _rf(s.r), "r_prime": _rf(s.r_prime), "tail": tail_to_json(s.tail)}
    if isinstance(s, TransvectX):
        return {"type": "TransvectX", "q": _rf(s.q), "q_prime": _rf(s.q_prime), "tail": tail_to_json(s.tail)}
    if isinstance(s, Scale):
        return {"type": "Scale", "p1": _rf(s.p1), "q1": _rf(s.q1), "p2": _rf(s.p2), "q2": _rf(s.q2)}
    if isinstance(s, LinearLeft):
        return {"type": "LinearLeft", "matrix": [[_rf(v) for v in row] for row in s.matrix]}
    if isinstance(s, (ElemX, ElemY)):
        return {"type": type(s).__name__, "c": _rf(s.c), "m": s.m}
    if isinstance(s, Affine):
        return {"type": "Affine", "matrix": [[_rf(v) for v in row] for row in s.matrix],
                "translation": [_rf(v) for v in s.translation]}
    raise TypeError(f"cannot serialize {s!r}")


def step_from_json(data):
    kind = data["type"]
    if kind == "TransvectY":
        return TransvectY(_rf_in(data["r"]), _rf_in(data["r_prime"]), tail_from_json(data["tail"]))
    if kind == "TransvectX":
        return TransvectX(_rf_in(data["q"]), _rf_in(data["q_prime"]), tail_from_json(data["tail"]))
    if kind == "Scale":
        return Scale(*(_rf_in(data[k]) for k in ("p1", "q1", "p2", "q2")))
    if kind == "LinearLeft":
        return LinearLeft([[_rf_in(v) for v in row] for row in data["matrix"]])
    if kind in ("ElemX", "ElemY"):
        return (ElemX if kind == "ElemX" else ElemY)(_rf_in(data["c"]), int(data["m"]))
    if kind == "Affine":
        return Affine(tuple(tuple(_rf_in(v) for v in row) for row in data["matrix"]),
                      tuple(_rf_in(v) for v in data["translation"]))
    raise ValueError(f"unknown step type {kind!r}")


def offender_to_json(o):
    return {"index": o.index, "variable": o.variable, "coefficient": _rf(o.coefficient),
            "exponent": o.exponent, "pole": str(o.pole), "valuation": _num(o.valuation)}


def stage_to_json(r):
    return {"degree": _num(r.degree), "has_sandwich": r.has_sandwich,
            "right_z_degree": _num(r.right_z_degree), "left_z_degree": _num(r.left_z_degree)}


def to_plain(v):
    """Failure records hold steps, coefficients and tuples."""
    if isinstance(v, dict):
        return {k: to_plain(w) for k, w in v.items()}
    if isinstance(v, (list, tuple)):
        return [to_plain(w) for w in v]
    if isinstance(v, RatFunc):
        return _rf(v)
    if isinstance(v, (Affine, ElemX, ElemY)):
        return step_to_json(v)
    return _num(v)


def certificate_to_json(c):
    out = {
        "schema": SCHEMA_VERSION,
        "verdict": c.verdict.value,
        "steps": [step_to_json(s) for s in c.comm_steps],
        "trace": [stage_to_json(r) for r in c.invariant_trace],
        "seeds": dict(c.seeds),
        "tool_version": c.tool_version,
    }
    if c.offender is not None:
        out["offender"] = offender_to_json(c.offender)
    if c.tame_witness is not None:
        out["tame_witness"] = [step_to_json(s) for s in c.tame_witness]
    for key in ("failure", "caveat", "reason"):
        val = getattr(c, key)
        if val is not None:
            out[key] = to_plain(val)
    return out


def dumps(data):
    return json.dumps(data, indent=2, sort_keys=False)


def load_endo(path, mode=NC):
    with open(path) as fh:
        return endo_from_json(json.load(fh), mode)


def describe_step(s):
    """One-line action of a step on the generators."""
    e = s.endo()
    data = endo_to_json(e)
    return f"{type(s).__name__}: x -> {data['image_x']}, y -> {data['image_y']}"
