# -*- coding: utf-8 -*-
"""Command registration for the abelian-mops CLI"""


def register_tools(app):
    """Register all commands with the Typer application"""
    # Import all tool modules
    from .classical_tools import register_classical_tools
    from .biortho_tools import register_biortho_tools
    from .verify_tools import register_verify_tools
    from .pade_tools import register_pade_tools
    from .elliptic_tools import register_elliptic_tools
    from .torsion_tools import register_torsion_tools
    from .run_tools import register_run_tools

    # Register commands from each module
    register_classical_tools(app)
    register_biortho_tools(app)
    register_verify_tools(app)
    register_pade_tools(app)
    register_elliptic_tools(app)
    register_torsion_tools(app)
    register_run_tools(app)
