"""Khovanov homology over F2, with coloured variants computed from framed cables."""

from __future__ import annotations

from .cabling import CableSpec, coloured_diagram
from .diagram import Diagram, builtin, parse_braid, parse_pd, to_pd
from .homology import BettiTable, betti, simplify
from .khcube import build_complex

__all__ = [
    "BettiTable",
    "CableSpec",
    "Diagram",
    "betti",
    "build_complex",
    "builtin",
    "coloured_diagram",
    "parse_braid",
    "parse_pd",
    "simplify",
    "to_pd",
]
