"""Khovanov-type homology for links in RP^3 presented by diagrams in RP^2."""

from __future__ import annotations

from .diagram import Diagram, make_diagram, parse_rpd, read_rpd, serialize

__all__ = ["Diagram", "make_diagram", "parse_rpd", "read_rpd", "serialize"]
__version__ = "0.1.0"
