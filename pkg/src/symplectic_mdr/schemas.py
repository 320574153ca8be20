"""JSON schemas for CLI inputs.  Every document carries ``schema_version``."""

from __future__ import annotations

import jsonschema

SCHEMA_VERSION = 1

_version = {"const": SCHEMA_VERSION}
# exact scalars: integers or strings such as "3/4" or "1/(4*pi)"
_exact = {"oneOf": [{"type": "integer"}, {"type": "string", "minLength": 1}]}
_matrix = {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _exact}}
_quantity = {
    "type": "object",
    "required": ["value", "unit"],
    "properties": {"value": {"type": "number"}, "unit": {"type": "string"}},
    "additionalProperties": False,
}
_sigma = {"enum": [1, -1]}
_realization = {
    "type": "object",
    "required": ["name", "scale_sq"],
    "properties": {
        "name": {"enum": ["polymer", "moyal"]},
        "scale_sq": _exact,
        "sigma": _sigma,
    },
    "additionalProperties": False,
}

CONFIG = {
    "type": "object",
    "required": ["schema_version"],
    "properties": {
        "schema_version": _version,
        "order": {"type": "integer", "minimum": 0},
        "seed": {"type": "integer"},
        "samples": {"type": "integer", "minimum": 1},
        "sw_samples": {"type": "integer", "minimum": 0},
        "format": {"enum": ["json", "csv"]},
    },
    "additionalProperties": False,
}

MDR = {
    "type": "object",
    "required": ["schema_version"],
    "properties": {
        "schema_version": _version,
        "dispersion": {
            "type": "object",
            "required": ["ell_star_sq", "sigma"],
            "properties": {
                "m": {"type": "number", "minimum": 0},
                "ell_star_sq": {"type": "number", "minimum": 0},
                "sigma": _sigma,
                "threshold": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
        "grid": {
            "type": "object",
            "required": ["p_min", "p_max", "n"],
            "properties": {
                "p_min": {"type": "number", "minimum": 0},
                "p_max": {"type": "number", "minimum": 0},
                "n": {"type": "integer", "minimum": 1},
            },
            "additionalProperties": False,
        },
        "p_values": {"type": "array", "items": {"type": "number", "minimum": 0}},
        "travel_time": {"type": "number", "minimum": 0},
        "realizations": {"type": "array", "items": _realization},
        "order": {"type": "integer", "minimum": 2, "multipleOf": 2},
    },
    "additionalProperties": False,
}

SW_MAP = {
    "type": "object",
    "required": ["schema_version", "g_closed", "B", "alpha_prime"],
    "properties": {
        "schema_version": _version,
        "dim": {"type": "integer", "minimum": 1},
        "g_closed": _matrix,
        "B": _matrix,
        "alpha_prime": _exact,
    },
    "additionalProperties": False,
}

FLUX = {
    "type": "object",
    "required": ["schema_version", "n"],
    "properties": {
        "schema_version": _version,
        "n": {"type": "integer"},
        "ell_s": _exact,
        "ell_P": _exact,
        "alpha_prime": _exact,
    },
    "additionalProperties": False,
}

A4 = {
    "type": "object",
    "required": ["schema_version", "realizations"],
    "properties": {
        "schema_version": _version,
        "realizations": {"type": "array", "minItems": 1, "items": _realization},
    },
    "additionalProperties": False,
}

CHANNEL = {
    "type": "object",
    "required": ["distance", "e_high", "e_low", "delta_t_bound"],
    "properties": {
        "name": {"type": "string"},
        "distance": _quantity,
        "e_high": _quantity,
        "e_low": _quantity,
        "delta_t_bound": _quantity,
        "redshift": {"type": "number", "minimum": 0},
    },
    "additionalProperties": False,
}

CONSTRAIN = {
    "type": "object",
    "required": ["schema_version", "channels"],
    "properties": {
        "schema_version": _version,
        "energy_unit": {"type": "string"},
        "sigma": {"type": "array", "minItems": 1, "items": _sigma},
        "m": {"type": "number", "minimum": 0},
        "threshold": {"type": "number", "exclusiveMinimum": 0},
        "channels": {"type": "array", "minItems": 1, "items": CHANNEL},
    },
    "additionalProperties": False,
}

BY_COMMAND = {"mdr": MDR, "sw-map": SW_MAP, "flux": FLUX, "a4": A4, "constrain": CONSTRAIN}


class SchemaViolation(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


def json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def validate(document, schema) -> None:
    """Raise :class:`SchemaViolation` naming the offending field of the first error."""
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(document), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = errors[0]
        raise SchemaViolation(json_path(err.absolute_path), err.message)
