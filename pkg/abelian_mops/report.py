# -*- coding: utf-8 -*-
"""
report.py — check results and data of one command, and their serialization.

A Check passes when value <= tolerance. Reports serialize deterministically:
JSON keeps insertion order with compact separators and writes complex
numbers as [re, im]; CSV flattens arrays row-major.
"""

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from rich.console import Console
from rich.table import Table

from ._constants import DEFAULT_TOLERANCES, EMIT_FORMATS, MIN_TOLERANCE
from ._errors import ConfigError
from ._validation import validate_emit, validate_tolerances

logger = logging.getLogger(__name__)


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self):
        return bool(math.isfinite(self.value) and self.value <= self.tolerance)

    def to_json(self):
        out = {"name": self.name, "value": _finite_or_none(self.value),
               "tolerance": self.tolerance, "pass": self.passed}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    command: str
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def check(self, name, value, detail=""):
        """Record a check under its named tolerance; repeated names keep the worst value.

        A non-finite value is the worst of all and is never replaced.
        """
        value = float(value)
        for existing in self.checks:
            if existing.name == name:
                if math.isfinite(existing.value) and (not math.isfinite(value) or value > existing.value):
                    existing.value = value
                    existing.detail = detail or existing.detail
                    if not existing.passed:
                        logger.warning("check %s failed: %.3e > %.1e", name, value, existing.tolerance)
                return existing
        item = Check(name, value, self.tolerances[name], detail)
        self.checks.append(item)
        if not item.passed:
            logger.warning("check %s failed: %.3e > %.1e", name, value, item.tolerance)
        return item

    def fail(self, exc):
        """A numerical exception turns into a failing check named after its type."""
        item = Check(type(exc).__name__, float("nan"), 0.0, str(exc))
        self.checks.append(item)
        logger.error("%s: %s", type(exc).__name__, exc)
        return item

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def failing(self):
        return [c for c in self.checks if not c.passed]

    @property
    def exit_code(self):
        return 0 if self.passed else 1


def resolve_tolerances(overrides=None):
    """Effective tolerances: max(default, override). Overrides can only loosen."""
    overrides = overrides or {}
    error = validate_tolerances(overrides, DEFAULT_TOLERANCES, MIN_TOLERANCE)
    if error:
        raise ConfigError(error)
    out = dict(DEFAULT_TOLERANCES)
    for name, value in overrides.items():
        out[name] = max(out[name], float(value))
    return out


# ============================================================
# Serialization
# ============================================================

def _finite_or_none(x):
    return x if math.isfinite(x) else None


def _jsonable(value):
    if hasattr(value, "to_json"):
        return _jsonable(value.to_json())
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [_finite_or_none(float(value.real)), _finite_or_none(float(value.imag))]
    if isinstance(value, (float, np.floating)):
        return _finite_or_none(float(value))
    return value


def _leaves(value):
    """Scalars of a data value in row-major / insertion order."""
    if hasattr(value, "coefficient_stack"):
        yield from _leaves(value.coefficient_stack())
    elif isinstance(value, dict):
        for v in value.values():
            yield from _leaves(v)
    elif isinstance(value, np.ndarray):
        for v in value.ravel():
            yield v
    elif isinstance(value, (list, tuple)):
        for v in value:
            yield from _leaves(v)
    else:
        yield value


def _csv_pair(x):
    if isinstance(x, (str, bool, np.bool_)) or x is None:
        return str(x), ""
    z = complex(x)
    return repr(float(z.real)), repr(float(z.imag))


def _emit_json(report):
    doc = {"checks": [c.to_json() for c in report.checks]}
    for key, value in report.data.items():
        doc[key] = _jsonable(value)
    return json.dumps(doc, separators=(",", ":"), allow_nan=False, ensure_ascii=False) + "\n"


def _emit_csv(report):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for c in report.checks:
        writer.writerow(["check", c.name, repr(c.value), repr(c.tolerance), str(c.passed).lower()])
    for key, value in report.data.items():
        for idx, leaf in enumerate(_leaves(value)):
            re, im = _csv_pair(leaf)
            writer.writerow(["data", key, idx, re, im])
    return buf.getvalue()


def _pretty_value(value):
    if hasattr(value, "coefficient_stack"):
        value = value.coefficient_stack()
    if isinstance(value, np.ndarray):
        return np.array2string(value, precision=10, max_line_width=100)
    if isinstance(value, (list, tuple)) and value and isinstance(value[0], dict):
        return "\n".join(", ".join("{}: {}".format(k, v) for k, v in item.items()) for item in value)
    if isinstance(value, (list, tuple)) and value and hasattr(value[0], "coefficient_stack"):
        return "\n\n".join(_pretty_value(v) for v in value)
    return str(value)


def _emit_pretty(report):
    console = Console(file=io.StringIO(), width=110, color_system=None, force_terminal=False)
    table = Table(title="{} checks".format(report.command))
    table.add_column("check")
    table.add_column("value", justify="right")
    table.add_column("tolerance", justify="right")
    table.add_column("pass")
    for c in report.checks:
        table.add_row(c.name, "{:.3e}".format(c.value), "{:.1e}".format(c.tolerance),
                      "PASS" if c.passed else "FAIL")
    console.print(table)
    for c in report.failing:
        if c.detail:
            console.print("{}: {}".format(c.name, c.detail), markup=False, highlight=False)
    for key, value in report.data.items():
        console.print("")
        console.print("=== {} ===".format(key.upper()), markup=False, highlight=False)
        console.print(_pretty_value(value), markup=False, highlight=False)
    return console.file.getvalue()


_EMITTERS = {"json": _emit_json, "csv": _emit_csv, "pretty": _emit_pretty}


def emit_report(report, fmt="json"):
    """Serialize a Report as text in one of EMIT_FORMATS."""
    error = validate_emit(fmt, EMIT_FORMATS)
    if error:
        raise ValueError(error)
    return _EMITTERS[fmt](report)
