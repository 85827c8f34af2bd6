"""Plain-text table rendering for reports."""

from typing import Sequence


def align_columns(rows: Sequence[Sequence[str]], gap: int = 2) -> str:
    """
    Render rows as left-aligned columns.

    Examples:
        >>> print(align_columns([["a", "bb"], ["ccc", "d"]]))
        a    bb
        ccc  d
    """
    if not rows:
        return ""
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    sep = " " * gap
    return "\n".join(
        sep.join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip() for row in rows
    )
