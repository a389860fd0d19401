# -*- coding: utf-8 -*-
"""Exception types raised by abelian_mops."""


class AbelianMopsError(RuntimeError):
    """Base class for numerical failures."""


class PolynomialError(AbelianMopsError, ValueError):
    pass


class FitError(AbelianMopsError):
    pass


class QuadratureError(AbelianMopsError):
    """Integrand not finite at a quadrature node."""

    def __init__(self, message, node_index=None, node=None):
        super().__init__(message)
        self.node_index = node_index
        self.node = node


class BranchPointError(AbelianMopsError, ValueError):
    """Evaluation requested at (or numerically on top of) a branch point."""


class DegenerateMinorError(AbelianMopsError):
    """A leading bimoment minor D_n vanished; carries n and the partial family."""

    def __init__(self, message, index, partial=None):
        super().__init__(message)
        self.index = index
        self.partial = partial


class BandStructureError(AbelianMopsError):
    pass


class ThetaDivisorError(AbelianMopsError, ValueError):
    pass


class ConvergenceError(AbelianMopsError):

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ConfigError(ValueError):
    """Invalid run configuration (exit code 2 at the command line)."""


class SingularPointError(AbelianMopsError, ValueError):
    """Evaluation at a pole, or on the diagonal of a kernel."""
