"""Run configuration: JSON schema, defaults and the typed view."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field

import jsonschema

from .coeff_expr import as_expr
from .errors import ExprError
from .fock_rep import SqueezeParams
from .observables import StateSpec
from .system_model import GaugeFunctions, SystemClass, ToSystem, TqSystem

SCHEMA_VERSION = 1

_expr = {"type": "string", "minLength": 1}
_complex = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

_state = {
    "type": "object",
    "properties": {
        "x_o": {"type": "number"},
        "p_o": {"type": "number"},
        "alpha": _complex,
        "r": {"type": "number", "minimum": 0},
        "theta": {"type": "number"},
    },
    "additionalProperties": False,
    "oneOf": [
        {"required": ["x_o", "p_o"], "not": {"required": ["alpha"]}},
        {"required": ["alpha"], "not": {"anyOf": [{"required": ["x_o"]},
                                                  {"required": ["p_o"]}]}},
    ],
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "class", "to", "window"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "class": {"enum": ["TO", "TM", "TQ"]},
        "to": {
            "type": "object",
            "required": ["g2"],
            "properties": {"g2": _expr, "g1": _expr, "g0": _expr},
            "additionalProperties": False,
        },
        "gauge": {
            "type": "object",
            "properties": {"nu": _expr, "mu": _expr, "kappa": _expr},
            "additionalProperties": False,
        },
        "tm": {
            "type": "object",
            "properties": {"f2": _expr, "f1": _expr, "f0": _expr},
            "additionalProperties": False,
        },
        "tq": {
            "type": "object",
            "required": ["k", "h", "g", "h0", "h1", "h2"],
            "properties": {k: _expr for k in ("k", "h", "g", "h0", "h1", "h2")},
            "additionalProperties": False,
        },
        "aux": {
            "type": "object",
            "properties": {"xi0": _complex, "xidot0": _complex, "c0": _complex},
            "additionalProperties": False,
        },
        "window": {
            "type": "object",
            "required": ["t_o", "t_end", "n_samples"],
            "properties": {
                "t_o": {"type": "number"},
                "t_end": {"type": "number"},
                "n_samples": {"type": "integer", "minimum": 5},
            },
            "additionalProperties": False,
        },
        "state": _state,
        "states": {"type": "array", "items": _state, "minItems": 1},
        "verification": {
            "type": "object",
            "properties": {
                "fock_dim": {"type": "integer", "minimum": 5},
                "run_algebra_suite": {"type": "boolean"},
                "run_classical_check": {"type": "boolean"},
                "classical_tol": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
        "output": {
            "type": "object",
            "properties": {
                "path": {"type": "string"},
                "format": {"enum": ["csv", "json"]},
                "coefficients_path": {"type": "string"},
            },
            "additionalProperties": False,
        },
    },
    "allOf": [
        {"if": {"properties": {"class": {"const": "TQ"}}}, "then": {"required": ["tq"]}},
        {"not": {"required": ["state", "states"]}},
    ],
}

DEFAULTS = {
    "to": {"g1": "0", "g0": "0"},
    "gauge": {"nu": "0", "mu": "0", "kappa": "0"},
    "aux": {"c0": [0.0, 0.0]},
    "state": {"x_o": 0.0, "p_o": 0.0},
    "verification": {"fock_dim": 40, "run_algebra_suite": False,
                     "run_classical_check": False, "classical_tol": 1e-5},
    "output": {"path": "trajectory.csv", "format": "csv"},
}


class ConfigError(ValueError):
    pass


def validate(doc: dict) -> None:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {exc.message}") from None


def normalise(doc: dict) -> dict:
    """Validate and fill defaults; the result re-validates against SCHEMA."""
    validate(doc)
    out = copy.deepcopy(doc)
    for key in ("to", "gauge", "aux", "verification", "output"):
        out[key] = {**DEFAULTS[key], **out.get(key, {})}
    if "state" not in out and "states" not in out:
        out["state"] = dict(DEFAULTS["state"])
    validate(out)
    return out


def _cplx(pair):
    return None if pair is None else complex(pair[0], pair[1])


def _state_spec(s: dict) -> StateSpec:
    sq = SqueezeParams(float(s.get("r", 0.0)), float(s.get("theta", 0.0)))
    if "alpha" in s:
        return StateSpec(alpha=_cplx(s["alpha"]), squeeze=sq)
    return StateSpec(phase_point=(float(s["x_o"]), float(s["p_o"])), squeeze=sq)


@dataclass(frozen=True)
class RunConfig:
    class_tag: SystemClass
    to: ToSystem
    gauge: GaugeFunctions
    tq: TqSystem | None
    tm: dict
    window: tuple[float, float, int]
    states: tuple
    xi0: complex | None
    xidot0: complex | None
    c0: complex
    fock_dim: int
    run_algebra_suite: bool
    run_classical_check: bool
    classical_tol: float
    output_path: str
    output_format: str
    coefficients_path: str | None
    document: dict = field(repr=False)

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        d = normalise(doc)
        try:
            to = ToSystem.from_strings(**d["to"])
            gauge = GaugeFunctions.from_strings(**d["gauge"])
            tq = TqSystem.from_strings(**d["tq"]) if "tq" in d else None
            tm = {k: as_expr(v) for k, v in d.get("tm", {}).items()}
        except ExprError as exc:
            raise ConfigError(f"bad expression: {exc}") from None
        w = d["window"]
        if not w["t_end"] > w["t_o"]:
            raise ConfigError("window: t_end must exceed t_o")
        raw_states = d["states"] if "states" in d else [d["state"]]
        aux = d["aux"]
        v, o = d["verification"], d["output"]
        return cls(
            SystemClass(d["class"]), to, gauge, tq, tm,
            (float(w["t_o"]), float(w["t_end"]), int(w["n_samples"])),
            tuple(_state_spec(s) for s in raw_states),
            _cplx(aux.get("xi0")), _cplx(aux.get("xidot0")), _cplx(aux["c0"]),
            v["fock_dim"], v["run_algebra_suite"], v["run_classical_check"],
            float(v["classical_tol"]), o["path"], o["format"], o.get("coefficients_path"),
            d,
        )

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read {path}: {exc}") from None
        return cls.from_dict(doc)
