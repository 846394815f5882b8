"""Tableau rendering front door."""
from __future__ import annotations

from ..tableau import Tableau, render_structured, render_text

__all__ = ["render_tableau", "STYLES"]

STYLES = ("text", "structured")


def render_tableau(t: Tableau, style: str = "text") -> str:
    """``text``: aligned columns with provenance arrows, leading-dot decimals
    and typographic minus signs.  ``structured``: line records that
    :func:`gausselim.tableau.parse_structured` reads back."""
    if style == "text":
        return render_text(t)
    if style == "structured":
        return render_structured(t)
    raise ValueError(f"style must be one of {STYLES}")
