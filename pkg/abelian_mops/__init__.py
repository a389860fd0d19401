# -*- coding: UTF-8 -*-
"""
Matrix biorthogonal polynomials from scalar data on branched covers.

Genus-0 covers (polynomial maps z = Z(t)) give the classical Hermite and
Laguerre matrix families; genus-1 covers give finite matrix orthogonality
from torsion points of an elliptic curve.
"""

__version__ = "0.1.0"

import logging

logger = logging.getLogger(__name__)
