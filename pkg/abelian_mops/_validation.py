# -*- coding: utf-8 -*-
"""Input validation helpers for the abelian_mops commands.

Each helper returns an error string, or None when the input is fine.
"""


def validate_emit(emit, formats):
    """Validate the --emit format."""
    if emit not in formats:
        return "invalid emit format '{}'. Valid: {}".format(emit, list(formats))
    return None


def validate_command(command, commands):
    if command not in commands:
        return "unknown command '{}'. Valid: {}".format(command, list(commands))
    return None


def parse_tol_options(options):
    """Turn repeated --tol name=value strings into a dict. Returns (dict, error)."""
    out = {}
    for i, opt in enumerate(options or []):
        if '=' not in opt:
            return None, "tol[{}] must look like name=value, got '{}'".format(i, opt)
        name, _, raw = opt.partition('=')
        name = name.strip()
        try:
            out[name] = float(raw)
        except ValueError:
            return None, "tol[{}] value '{}' is not a number".format(i, raw)
    return out, None


def validate_tolerances(overrides, defaults, minimum):
    """Tolerance overrides must name known checks and be at least `minimum`."""
    if not isinstance(overrides, dict):
        return "tolerances must be a mapping of check name to value"
    for name, value in overrides.items():
        if name not in defaults:
            return "unknown tolerance '{}'. Valid: {}".format(name, sorted(defaults))
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            return "tolerance '{}' must be a number".format(name)
        if value != value or value <= 0:
            return "tolerance '{}' must be positive, got {}".format(name, value)
        if value < minimum:
            return "tolerance '{}' = {} is below the floor {}".format(name, value, minimum)
    return None


def validate_positive_int(name, value, minimum=1):
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        return "{} must be an integer ≥ {}, got {!r}".format(name, minimum, value)
    return None


def parse_complex_list(text, expected=None):
    """'1,0,-2+1j' -> [1, 0, (-2+1j)]. Returns (list, error)."""
    if not text:
        return None, "empty list"
    values = []
    for i, part in enumerate(str(text).split(',')):
        part = part.strip().replace(' ', '')
        try:
            values.append(complex(part))
        except ValueError:
            return None, "item[{}] '{}' is not a number".format(i, part)
    if expected is not None and len(values) != expected:
        return None, "expected {} values, got {}".format(expected, len(values))
    return values, None
