# -*- coding: utf-8 -*-
"""Config-file driven runs: one JSON document selects a command, its params and tolerances"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import typer
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from abelian_mops._constants import COMMANDS, EMIT_FORMATS
from abelian_mops._validation import validate_command, validate_emit
from .biortho_tools import run_biortho
from .classical_tools import run_classical
from .elliptic_tools import run_elliptic
from .pade_tools import run_pade
from .torsion_tools import run_torsion
from .utils import EXIT_CONFIG, check_tolerance_table, execute, format_response
from .verify_tools import run_verify_cd

logger = logging.getLogger(__name__)


class _Params(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ClassicalParams(_Params):
    kind: str = "hermite"
    c: float = 0.0
    alpha: float = 0.0
    n: int = 4
    nodes: Optional[int] = None


class BiorthoParams(_Params):
    weight: str = "legendre"
    N: int = 6
    nodes: Optional[int] = None


class EllipticParams(_Params):
    mode: str = "periods"
    tau: str = "1j"
    v: Optional[str] = None
    curve: Optional[str] = None
    character: Optional[str] = None


class TorsionParams(_Params):
    mode: str = "find"
    curve: Optional[str] = None
    alpha: Optional[float] = None
    a: int = 1
    b: int = 0
    R: int = 2
    N: Optional[int] = None


class VerifyCdParams(_Params):
    kind: str = "hermite"
    c: float = 0.0
    alpha: float = 0.0
    ell: int = 2
    pairs: int = 10
    nodes: Optional[int] = None


class PadeParams(_Params):
    n: int = 5
    nodes: Union[str, List[float], None] = None
    weight: str = "legendre"
    quad_nodes: Optional[int] = None


# command -> (handler, params model)
HANDLERS = {
    "classical": (run_classical, ClassicalParams),
    "biortho": (run_biortho, BiorthoParams),
    "elliptic": (run_elliptic, EllipticParams),
    "torsion": (run_torsion, TorsionParams),
    "verify-cd": (run_verify_cd, VerifyCdParams),
    "pade": (run_pade, PadeParams),
}


class RunConfig(BaseModel):
    """{"command": ..., "params": {...}, "emit": "json", "tolerances": {name: value}}"""

    model_config = ConfigDict(extra="forbid")

    command: str
    params: Dict[str, Any] = Field(default_factory=dict)
    emit: str = "json"
    tolerances: Dict[str, float] = Field(default_factory=dict)

    @field_validator("command")
    @classmethod
    def _known_command(cls, value):
        error = validate_command(value, COMMANDS)
        if error:
            raise ValueError(error)
        return value

    @field_validator("emit")
    @classmethod
    def _known_emit(cls, value):
        error = validate_emit(value, EMIT_FORMATS)
        if error:
            raise ValueError(error)
        return value

    @field_validator("tolerances")
    @classmethod
    def _valid_tolerances(cls, value):
        error = check_tolerance_table(value)
        if error:
            raise ValueError(error)
        return value

    @model_validator(mode="after")
    def _valid_params(self):
        _, model = HANDLERS[self.command]
        try:
            self.params = model.model_validate(self.params).model_dump(exclude_none=True)
        except ValidationError as exc:
            problems = ["{}: {}".format(".".join(str(p) for p in e["loc"]), e["msg"]) for e in exc.errors()]
            raise ValueError("params for '{}': {}".format(self.command, "; ".join(problems)))
        return self


def load_config(path):
    """Read and validate a RunConfig. Returns (config, error)."""
    path = Path(path)
    if not path.is_file():
        return None, "config file not found: {}".format(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        return None, "cannot read config {}: {}".format(path, exc)
    try:
        return RunConfig.model_validate(raw), None
    except ValidationError as exc:
        return None, "invalid config {}: {}".format(path, exc.errors(include_url=False))


def register_run_tools(app):
    """Register the config-file runner"""

    @app.command("run")
    def run(
        config: Path = typer.Option(..., "--config", help="JSON run configuration"),
        emit: Optional[str] = typer.Option(None, "--emit", help="override the config's emit format"),
        tol: Optional[List[str]] = typer.Option(None, "--tol", help="name=value, loosens a check"),
    ):
        """Run the command described by a JSON config file."""
        cfg, error = load_config(config)
        if error:
            logger.error(error)
            typer.echo(format_response({"command": "run", "error": error}, emit or "pretty"), nl=False)
            raise typer.Exit(EXIT_CONFIG)
        handler, _ = HANDLERS[cfg.command]
        execute(cfg.command, handler, cfg.params, emit or cfg.emit, tol, cfg.tolerances)
