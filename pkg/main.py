# -*- coding: utf-8 -*-
import logging
from typing import Optional

import typer
from rich.console import Console
from rich.logging import RichHandler

from abelian_mops.settings import get_settings

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

# Reports go to stdout, logs to stderr
app = typer.Typer(
    name="abelian-mops",
    help="Matrix biorthogonal polynomials from scalar data on branched covers.",
    no_args_is_help=True,
    add_completion=False,
)


def configure_logging(level=None):
    """Install a rich handler on stderr at the requested (or configured) level."""
    level = (level or get_settings().log_level).upper()
    if level not in LOG_LEVELS:
        raise typer.BadParameter("log level must be one of {}".format(", ".join(LOG_LEVELS)))
    root = logging.getLogger()
    for handler in list(root.handlers):
        if isinstance(handler, RichHandler):
            root.removeHandler(handler)
    root.addHandler(RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=False))
    root.setLevel(level)


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="DEBUG, INFO, WARNING or ERROR"),
):
    """Build and verify matrix orthogonal polynomial families."""
    configure_logging(log_level)


# Register all commands BEFORE the main block
from tools import register_tools
register_tools(app)


if __name__ == "__main__":
    app()
