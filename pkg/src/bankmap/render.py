"""Human-readable matrix rendering: PE rows, cycle columns, banks as letters."""

from __future__ import annotations

from typing import Optional, Sequence


def bank_letter(bank: Optional[int]) -> str:
    if bank is None:
        return "-"
    if bank < 26:
        return chr(ord("A") + bank)
    return f"B{bank}"


def render_matrix(rows: Sequence[Sequence]) -> str:
    """Right-aligned grid, one line per PE row, cells joined by a space."""
    text = [[str(cell) for cell in row] for row in rows]
    width = max(len(cell) for row in text for cell in row)
    return "\n".join(" ".join(cell.rjust(width) for cell in row) for row in text)


def render_bank_grid(grid: Sequence[Sequence[Optional[int]]]) -> str:
    return render_matrix([[bank_letter(b) for b in row] for row in grid])


def mapping_grids(bank_of: Sequence[int], schedules) -> dict:
    """Bank-letter grids of a mapping over both schedules, keyed by order."""
    out = {}
    for sched in (schedules.natural, schedules.interleaved):
        out[sched.order] = [
            [bank_of[sched.cells[p][t]] for t in range(sched.cycles)]
            for p in range(sched.rows)
        ]
    return out
