"""Backtracking search for a collision-free bank mapping.

The solver works on two mirrored partial matrices, one per access order,
plus a per-datum bank table. It repeats: pick the column (in either
matrix) with the fewest legal completions, enumerate that column's full
assignments in objective-preferred order, apply one (mirroring every
newly decided datum into its cell in the other matrix), and recurse; a
dead end undoes the most recent assignment and advances to its next
alternative. The first natural column is pinned to the identity bank
pattern, which removes the bank-relabeling symmetry without losing
solutions for relabel-invariant objectives.

A strict pass only offers objective-friendly candidates and additionally
requires a complete assignment to realize the requested network before
accepting it (the per-cell filter is sound but not tight while the
reference column of the permuted matrix is still partial). In relaxed
operation a failed strict pass is rerun with the filter off - candidate
ordering still prefers objective-friendly banks - and the outcome
reports honestly whether the objective was met.

The search is driven by an explicit frame stack with an exact undo log,
so its depth is bounded by the number of columns, not by the
interpreter's recursion limit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional

from .errors import InvariantViolation
from .network import NetworkObjective, admissible_banks, objective_compatible
from .schedule import ColumnRef, Order, ProblemSpec, SchedulePair


@dataclass
class MappingState:
    """The paired partial mapping matrices plus the datum -> bank table.

    Both grids always agree with bank_of: an assignment writes the bank
    at the datum's cell in each matrix, so cross-matrix consistency holds
    by construction and only column distinctness needs searching.
    """

    schedules: SchedulePair
    grids: dict
    bank_of: list

    @classmethod
    def fresh(cls, schedules: SchedulePair) -> "MappingState":
        rows, cycles = schedules.rows, schedules.cycles
        grids = {
            order: [[None] * cycles for _ in range(rows)]
            for order in (Order.NATURAL, Order.INTERLEAVED)
        }
        return cls(schedules, grids, [None] * schedules.size)

    @property
    def rows(self) -> int:
        return self.schedules.rows

    @property
    def cycles(self) -> int:
        return self.schedules.cycles

    def grid(self, order: Order) -> list:
        return self.grids[order]

    def assign(self, datum: int, bank: int) -> None:
        if self.bank_of[datum] is not None:
            raise InvariantViolation(f"datum {datum} is already mapped")
        self.bank_of[datum] = bank
        for order in self.grids:
            p, t = self.schedules.position(order, datum)
            self.grids[order][p][t] = bank

    def retract(self, datum: int) -> None:
        if self.bank_of[datum] is None:
            raise InvariantViolation(f"datum {datum} is not mapped")
        self.bank_of[datum] = None
        for order in self.grids:
            p, t = self.schedules.position(order, datum)
            self.grids[order][p][t] = None

    def column_banks(self, order: Order, index: int) -> set:
        grid = self.grids[order]
        return {grid[p][index] for p in range(self.rows) if grid[p][index] is not None}

    def structural_banks(self, order: Order, row: int, index: int) -> list[int]:
        """Banks legal for one empty cell: unused in this column and in the
        datum's column of the other matrix. Ascending bank id."""
        datum = self.schedules.of(order).cells[row][index]
        other = order.other
        _, other_index = self.schedules.position(other, datum)
        used = self.column_banks(order, index) | self.column_banks(other, other_index)
        return [b for b in range(self.rows) if b not in used]

    def empty_cells(self, column: ColumnRef) -> list[tuple[int, int]]:
        """(row, datum) pairs of the column's unmapped cells, by row."""
        grid = self.grids[column.order]
        cells = self.schedules.of(column.order).cells
        return [
            (p, cells[p][column.index])
            for p in range(self.rows)
            if grid[p][column.index] is None
        ]

    def is_complete(self) -> bool:
        return all(b is not None for b in self.bank_of)

    def mapping(self) -> tuple[int, ...]:
        if not self.is_complete():
            raise InvariantViolation("mapping requested from a partial state")
        return tuple(self.bank_of)

    def check_invariants(self) -> None:
        """Cross-matrix agreement and column distinctness; raises on a bug."""
        for order in self.grids:
            sched = self.schedules.of(order)
            grid = self.grids[order]
            for t in range(self.cycles):
                seen = set()
                for p in range(self.rows):
                    bank = grid[p][t]
                    if bank != self.bank_of[sched.cells[p][t]]:
                        raise InvariantViolation(
                            f"{order.value} cell ({p}, {t}) disagrees with the bank table"
                        )
                    if bank is None:
                        continue
                    if bank in seen:
                        raise InvariantViolation(
                            f"bank {bank} used twice in {order.value} column {t}"
                        )
                    seen.add(bank)


def initialize(state: MappingState) -> MappingState:
    """Pin the first natural column to the identity pattern (row p -> bank p).

    The assignment lands in both matrices; expects a fresh state.
    """
    if any(b is not None for b in state.bank_of):
        raise InvariantViolation("initialize expects an empty state")
    natural = state.schedules.natural
    for p in range(state.rows):
        state.assign(natural.cells[p][0], p)
    return state


def completion_count(state: MappingState, column: ColumnRef) -> int:
    """Number of legal whole-column completions under structural rules only.

    Counts assignments of pairwise-distinct banks, one per empty cell,
    each drawn from the cell's structurally legal set (bitmask DP).
    """
    masks = []
    for row, _ in state.empty_cells(column):
        mask = 0
        for b in state.structural_banks(column.order, row, column.index):
            mask |= 1 << b
        masks.append(mask)
    layer = {0: 1}
    for mask in masks:
        nxt: dict = {}
        for used, count in layer.items():
            free = mask & ~used
            while free:
                bit = free & -free
                free ^= bit
                key = used | bit
                nxt[key] = nxt.get(key, 0) + count
        layer = nxt
    return sum(layer.values())


def select_target_column(state: MappingState) -> Optional[ColumnRef]:
    """The unfinished column with the fewest legal completions.

    Ties break on fewer empty cells, then interleaved side before natural,
    then lowest column index. None once every cell is mapped.
    """
    best = None
    best_key = None
    for order in (Order.NATURAL, Order.INTERLEAVED):
        side_rank = 0 if order is Order.INTERLEAVED else 1
        for t in range(state.cycles):
            column = ColumnRef(order, t)
            empties = state.empty_cells(column)
            if not empties:
                continue
            key = (completion_count(state, column), len(empties), side_rank, t)
            if best_key is None or key < best_key:
                best, best_key = column, key
    return best


@dataclass
class CandidateSet:
    """Ordered whole-column assignments for the empty cells of one column.

    Tuples follow the lexicographic order of the per-cell candidate lists
    (first cell most significant) and skip any tuple that repeats a bank.
    """

    column: ColumnRef
    cells: tuple  # (row, datum) pairs, ascending row
    bank_lists: tuple  # candidate banks per cell, preference order

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        def walk(i: int, used: int, prefix: tuple) -> Iterator[tuple[int, ...]]:
            if i == len(self.bank_lists):
                yield prefix
                return
            for bank in self.bank_lists[i]:
                bit = 1 << bank
                if used & bit:
                    continue
                yield from walk(i + 1, used | bit, prefix + (bank,))

        return walk(0, 0, ())

    def first(self) -> Optional[tuple[int, ...]]:
        return next(iter(self), None)


def candidate_assignments(
    state: MappingState,
    column: ColumnRef,
    objective: NetworkObjective,
    strict: bool = False,
) -> CandidateSet:
    """Per-cell admissible banks for a column, combined into full tuples."""
    cells = state.empty_cells(column)
    if not cells:
        raise InvariantViolation(f"column {column} has no empty cell")
    lists = tuple(
        tuple(admissible_banks(state, column, row, objective, strict)) for row, _ in cells
    )
    return CandidateSet(column, tuple(cells), lists)


def assign_column(
    state: MappingState, column: ColumnRef, banks: tuple[int, ...]
) -> tuple[int, ...]:
    """Fill a column's empty cells and mirror each datum into the other matrix.

    Returns the assigned data as the undo record for retract_column.
    Raises InvariantViolation if the tuple is not a legal candidate.
    """
    cells = state.empty_cells(column)
    if len(banks) != len(cells):
        raise InvariantViolation(
            f"expected {len(cells)} banks for column {column}, got {len(banks)}"
        )
    if len(set(banks)) != len(banks):
        raise InvariantViolation("column assignment repeats a bank")
    for (row, _), bank in zip(cells, banks):
        if bank not in state.structural_banks(column.order, row, column.index):
            raise InvariantViolation(
                f"bank {bank} is not admissible at row {row} of column {column}"
            )
    for (_, datum), bank in zip(cells, banks):
        state.assign(datum, bank)
    return tuple(datum for _, datum in cells)


def retract_column(state: MappingState, record: tuple[int, ...]) -> None:
    """Exact inverse of assign_column for the given undo record."""
    for datum in reversed(record):
        state.retract(datum)


class Status(enum.Enum):
    SOLVED = "solved"
    INFEASIBLE = "infeasible"
    BUDGET_EXHAUSTED = "budget-exhausted"


@dataclass
class SolveStats:
    nodes: int = 0  # column assignments applied
    backtracks: int = 0  # column assignments undone
    max_depth: int = 0


class TraceEvent(NamedTuple):
    kind: str  # select | assign | retract | relax
    order: Optional[Order]
    column: Optional[int]
    data: Optional[tuple]
    banks: Optional[tuple]


@dataclass(frozen=True)
class SolveOptions:
    strict_objective: bool = False
    max_nodes: Optional[int] = None
    trace: bool = False


@dataclass(frozen=True)
class SolveOutcome:
    status: Status
    mapping: Optional[tuple]
    objective_met: bool
    stats: SolveStats
    trace: Optional[tuple] = None


class _BudgetExceeded(Exception):
    pass


@dataclass
class _Frame:
    column: ColumnRef
    tuples: Iterator
    applied: Optional[tuple] = None


def _advance(frames, state, stats, max_nodes, trace) -> bool:
    """Undo the top frame's assignment (if any) and apply its next tuple."""
    frame = frames[-1]
    if frame.applied is not None:
        retract_column(state, frame.applied)
        stats.backtracks += 1
        if trace is not None:
            trace.append(
                TraceEvent("retract", frame.column.order, frame.column.index, frame.applied, None)
            )
        frame.applied = None
    for banks in frame.tuples:
        if max_nodes is not None and stats.nodes + 1 > max_nodes:
            raise _BudgetExceeded()
        record = assign_column(state, frame.column, banks)
        stats.nodes += 1
        stats.max_depth = max(stats.max_depth, len(frames))
        frame.applied = record
        if trace is not None:
            trace.append(
                TraceEvent("assign", frame.column.order, frame.column.index, record, banks)
            )
        return True
    return False


def _backtrack(frames, state, stats, max_nodes, trace) -> bool:
    while frames:
        if _advance(frames, state, stats, max_nodes, trace):
            return True
        frames.pop()
    return False


def _run_pass(
    schedules: SchedulePair,
    objective: NetworkObjective,
    strict_filter: bool,
    options: SolveOptions,
    stats: SolveStats,
    trace,
) -> Optional[tuple]:
    state = initialize(MappingState.fresh(schedules))
    frames: list[_Frame] = []
    while True:
        column = select_target_column(state)
        if column is None:
            mapping = state.mapping()
            # The per-cell filter is only sound, not tight; a strict pass
            # re-checks the finished assignment and keeps searching on a miss.
            if not strict_filter or objective_compatible(mapping, schedules, objective):
                return mapping
            if not _backtrack(frames, state, stats, options.max_nodes, trace):
                return None
            continue
        if trace is not None:
            data = tuple(d for _, d in state.empty_cells(column))
            trace.append(TraceEvent("select", column.order, column.index, data, None))
        candidates = candidate_assignments(state, column, objective, strict=strict_filter)
        frames.append(_Frame(column, iter(candidates)))
        if not _advance(frames, state, stats, options.max_nodes, trace):
            frames.pop()
            if not _backtrack(frames, state, stats, options.max_nodes, trace):
                return None


def solve(
    problem: ProblemSpec,
    objective: NetworkObjective = NetworkObjective.CROSSBAR,
    options: Optional[SolveOptions] = None,
) -> SolveOutcome:
    """Find a collision-free bank mapping honoring the network objective.

    Strict mode reports Infeasible when the objective cannot be met;
    otherwise the search falls back to structural constraints alone and
    objective_met records the achieved result. The node budget, when set,
    is shared across both passes. Identical inputs always produce the
    identical outcome, stats and trace included.
    """
    options = options or SolveOptions()
    schedules = SchedulePair.from_problem(problem)
    stats = SolveStats()
    trace: Optional[list] = [] if options.trace else None

    def finish(status: Status, mapping: Optional[tuple]) -> SolveOutcome:
        met = mapping is not None and objective_compatible(mapping, schedules, objective)
        frozen = tuple(trace) if trace is not None else None
        return SolveOutcome(status, mapping, met, stats, frozen)

    try:
        mapping = _run_pass(schedules, objective, True, options, stats, trace)
        if mapping is None and not options.strict_objective:
            if trace is not None:
                trace.append(TraceEvent("relax", None, None, None, None))
            mapping = _run_pass(schedules, objective, False, options, stats, trace)
    except _BudgetExceeded:
        return finish(Status.BUDGET_EXHAUSTED, None)
    if mapping is None:
        return finish(Status.INFEASIBLE, None)
    return finish(Status.SOLVED, mapping)
