# -*- coding: utf-8 -*-
"""Utility functions for the command handlers"""

import json
import logging

import typer

from abelian_mops._constants import DEFAULT_TOLERANCES, EMIT_FORMATS, MIN_TOLERANCE
from abelian_mops._errors import AbelianMopsError, ConfigError
from abelian_mops._validation import parse_tol_options, validate_emit, validate_tolerances
from abelian_mops.report import Report, emit_report, resolve_tolerances

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_CONFIG = 2


def format_response(response, emit="pretty"):
    """Format an error response for the chosen output format.

    Args:
        response: dict with "error" and optional "command", "details", "params"
        emit: one of json, csv, pretty

    Returns:
        str: text to print on stdout
    """
    if emit == "json":
        return json.dumps(response, separators=(",", ":"), default=str) + "\n"
    if emit == "csv":
        return "error,{}\n".format(json.dumps(response.get("error", "")))

    error_parts = ["=== ERROR DETAILS ==="]
    error_parts.append("Command: {}".format(response.get("command", "unknown")))
    error_parts.append("Error: {}".format(response.get("error", "Unknown error occurred")))
    if response.get("details"):
        error_parts.append("Details: {}".format(response["details"]))
    if response.get("params"):
        error_parts.append("\n=== PARAMETERS ===")
        for key in sorted(response["params"]):
            error_parts.append("{}: {}".format(key.replace("_", " ").title(), response["params"][key]))
    return "\n".join(error_parts) + "\n"


def require(condition_error):
    """Raise ConfigError when a validate_* helper returned a message."""
    if condition_error:
        raise ConfigError(condition_error)


def run_handler(command, handler, params, tolerances):
    """Call handler(params, tolerances) and fold numerical exceptions into the report."""
    try:
        return handler(params, tolerances)
    except AbelianMopsError as exc:
        report = Report(command, tolerances)
        report.fail(exc)
        return report


def execute(command, handler, params, emit="json", tol=None, overrides=None):
    """Shared body of every command: validate, run, emit, exit with 0/1/2.

    overrides come from a config file; repeated --tol options win over them.
    """
    emit_error = validate_emit(emit, EMIT_FORMATS)
    if emit_error:
        typer.echo(format_response({"command": command, "error": emit_error}), err=True)
        raise typer.Exit(EXIT_CONFIG)
    try:
        parsed, error = parse_tol_options(tol)
        require(error)
        tolerances = resolve_tolerances({**(overrides or {}), **parsed})
        report = run_handler(command, handler, dict(params), tolerances)
    except ValueError as exc:
        logger.error("invalid configuration for %s: %s", command, exc)
        typer.echo(format_response({"command": command, "error": str(exc),
                                    "params": {k: v for k, v in params.items() if v is not None}},
                                   emit), nl=False)
        raise typer.Exit(EXIT_CONFIG)
    typer.echo(emit_report(report, emit), nl=False)
    raise typer.Exit(report.exit_code)


def check_tolerance_table(overrides):
    """Validate a tolerance mapping from a config file."""
    return validate_tolerances(overrides, DEFAULT_TOLERANCES, MIN_TOLERANCE)
