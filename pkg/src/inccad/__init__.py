"""
Incremental cylindrical decomposition of complex space and real CAD.

The main entry points are :func:`cylindrical_decompose` (an ``F``-invariant
complete cylindrical tree), :func:`solve_system` (the partial tree of a
system of equations and inequations) and :func:`make_semi_algebraic`
(the real CAD lifted from a complete tree).
"""
from .ccd import InputSystem, cylindrical_decompose, solve_system
from .parsing import ParseError, format_system, parse_polynomial, parse_system
from .poly import Polynomial, VarOrder, subresultant_chain
from .realcad import CAD, classify_point, make_semi_algebraic, sign_at
from .tree import CylindricalTree, render_tree

__version__ = "0.1.0"

__all__ = [
    "CAD",
    "CylindricalTree",
    "InputSystem",
    "ParseError",
    "Polynomial",
    "VarOrder",
    "classify_point",
    "cylindrical_decompose",
    "format_system",
    "make_semi_algebraic",
    "parse_polynomial",
    "parse_system",
    "render_tree",
    "sign_at",
    "solve_system",
    "subresultant_chain",
]
