"""Steering-network objectives, rotation analysis, and control synthesis.

An objective names the steering component the interconnection network is
built from, and therefore which per-cycle bank patterns are realizable:

  * CROSSBAR accepts any bank permutation per cycle and never constrains
    the solver.
  * BARREL_SHIFTER accepts only cyclic rotations: within each mapping
    matrix, every column's bank pattern must be a rotation of that
    matrix's column 0 (the reference pattern, fixed per order).

Adding a network kind means adding an enum member plus a case in
pattern_realizable (the column predicate) and partition_admissible (the
candidate-ordering hook used by the solver).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ObjectiveIncompatible
from .schedule import AccessSchedule, ColumnRef, Order, SchedulePair


class NetworkObjective(enum.Enum):
    CROSSBAR = "crossbar"
    BARREL_SHIFTER = "barrel-shifter"


def rotation_offset(reference: Sequence[int], column: Sequence[int]) -> Optional[int]:
    """The r with column[j] == reference[(j - r) % X] for all rows, else None.

    r reads as "the reference pattern shifted down by r rows"; it is
    unique whenever the reference entries are pairwise distinct.
    """
    size = len(reference)
    for r in range(size):
        if all(column[j] == reference[(j - r) % size] for j in range(size)):
            return r
    return None


def column_pattern(bank_of: Sequence[int], schedule: AccessSchedule, t: int) -> tuple[int, ...]:
    """Bank pattern of cycle t: the mapped bank of each PE row's datum."""
    return tuple(bank_of[schedule.cells[p][t]] for p in range(schedule.rows))


def pattern_realizable(
    objective: NetworkObjective, reference: Sequence[int], pattern: Sequence[int]
) -> bool:
    if objective is NetworkObjective.CROSSBAR:
        return True
    return rotation_offset(reference, pattern) is not None


def objective_compatible(
    bank_of: Sequence[int], schedules: SchedulePair, objective: NetworkObjective
) -> bool:
    """Whether a complete mapping is realizable with the requested network."""
    if objective is NetworkObjective.CROSSBAR:
        return True
    for order in Order:
        sched = schedules.of(order)
        reference = column_pattern(bank_of, sched, 0)
        for t in range(1, sched.cycles):
            if not pattern_realizable(objective, reference, column_pattern(bank_of, sched, t)):
                return False
    return True


def _rotation_consistent(reference, column_cells, row: int, bank: int) -> bool:
    # Is there a rotation of the (possibly partial) reference pattern that
    # agrees with the column's filled cells plus `bank` at `row`? Unfilled
    # reference slots may take any bank not already used in the reference.
    size = len(reference)
    used_in_reference = {b for b in reference if b is not None}
    cells = [(j, v) for j, v in enumerate(column_cells) if v is not None]
    cells.append((row, bank))
    for r in range(size):
        for j, v in cells:
            have = reference[(j - r) % size]
            if have is None:
                if v in used_in_reference:
                    break
            elif have != v:
                break
        else:
            return True
    return False


def partition_admissible(
    state, column: ColumnRef, row: int, objective: NetworkObjective
) -> tuple[list[int], list[int]]:
    """Split a cell's structurally legal banks into (objective-friendly, rest).

    Both halves are in ascending bank id. `state` is a solver MappingState;
    only its grids and structural_banks are consulted.
    """
    structural = state.structural_banks(column.order, row, column.index)
    if objective is NetworkObjective.CROSSBAR:
        return structural, []
    grid = state.grid(column.order)
    reference = [cells[0] for cells in grid]
    column_cells = [cells[column.index] for cells in grid]
    preferred = [b for b in structural if _rotation_consistent(reference, column_cells, row, b)]
    rest = [b for b in structural if b not in preferred]
    return preferred, rest


def admissible_banks(
    state, column: ColumnRef, row: int, objective: NetworkObjective, strict: bool = False
) -> list[int]:
    """Candidate banks for one empty cell, objective-preferred first.

    In strict mode the banks that cannot keep the objective are dropped
    instead of merely sorted last.
    """
    preferred, rest = partition_admissible(state, column, row, objective)
    return preferred if strict else preferred + rest


@dataclass(frozen=True)
class ControlSchedule:
    """Per-cycle network control words for both access orders.

    For a barrel shifter a word is a rotation offset in [0, X); for a
    crossbar it is the full PE-row -> bank pattern of the cycle.
    """

    kind: NetworkObjective
    natural_words: tuple
    interleaved_words: tuple

    def words(self, order: Order) -> tuple:
        return self.natural_words if order is Order.NATURAL else self.interleaved_words

    def distinct_word_count(self, order: Order) -> int:
        return len(set(self.words(order)))

    def to_json(self) -> dict:
        def enc(words):
            return [list(w) if isinstance(w, tuple) else w for w in words]

        return {
            "kind": self.kind.value,
            "natural": {
                "words": enc(self.natural_words),
                "distinct_word_count": self.distinct_word_count(Order.NATURAL),
            },
            "interleaved": {
                "words": enc(self.interleaved_words),
                "distinct_word_count": self.distinct_word_count(Order.INTERLEAVED),
            },
        }


def apply_control_word(kind: NetworkObjective, reference: Sequence[int], word) -> tuple[int, ...]:
    """Bank pattern produced by replaying one control word at runtime."""
    if kind is NetworkObjective.CROSSBAR:
        return tuple(word)
    size = len(reference)
    return tuple(reference[(j - word) % size] for j in range(size))


def derive_controls(
    bank_of: Sequence[int], schedules: SchedulePair, objective: NetworkObjective
) -> ControlSchedule:
    """Synthesize the per-cycle control words for a compatible mapping.

    Raises ObjectiveIncompatible when the mapping cannot realize the
    requested network kind.
    """
    if not objective_compatible(bank_of, schedules, objective):
        raise ObjectiveIncompatible(f"mapping is not {objective.value}-realizable")
    per_order = {}
    for order in Order:
        sched = schedules.of(order)
        patterns = [column_pattern(bank_of, sched, t) for t in range(sched.cycles)]
        if objective is NetworkObjective.CROSSBAR:
            per_order[order] = tuple(patterns)
        else:
            reference = patterns[0]
            per_order[order] = tuple(rotation_offset(reference, pat) for pat in patterns)
    return ControlSchedule(objective, per_order[Order.NATURAL], per_order[Order.INTERLEAVED])
