"""Network-agnostic comparison mapper: tiling, greedy fill, seeded repair.

The natural layout is tiled by interleaved cycle: two data share a tile
exactly when they are accessed together in permuted order, so a mapping
is collision-free iff banks are distinct within every natural column and
within every tile. A greedy single pass fills what it can; the leftovers
are completed by forcing a bank into an empty cell and chasing these
induced conflicts with seeded reassignments until none remain. The
network objective is never consulted, so the result is valid but usually
not realizable by anything cheaper than a crossbar.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import RepairBudgetExhausted
from .schedule import Order, ProblemSpec, SchedulePair

# repair steps allowed per problem, scaled by block length
REPAIR_BUDGET_PER_DATUM = 1000


@dataclass(frozen=True)
class TileMatrix:
    """Tile ids over the natural layout: tile(p, t) = interleaved cycle of
    the datum at natural cell (p, t)."""

    schedules: SchedulePair
    tiles: tuple

    @property
    def rows(self) -> int:
        return len(self.tiles)

    @property
    def cycles(self) -> int:
        return len(self.tiles[0])


def build_tiles(schedules: SchedulePair) -> TileMatrix:
    natural = schedules.natural
    tiles = tuple(
        tuple(
            schedules.position(Order.INTERLEAVED, natural.cells[p][t])[1]
            for t in range(natural.cycles)
        )
        for p in range(natural.rows)
    )
    return TileMatrix(schedules, tiles)


def _mates(tiles: TileMatrix) -> list[set]:
    """Per datum: the data it must not share a bank with (column or tile)."""
    natural = tiles.schedules.natural
    mates = [set() for _ in range(tiles.schedules.size)]
    by_column: dict = {}
    by_tile: dict = {}
    for p in range(tiles.rows):
        for t in range(tiles.cycles):
            datum = natural.cells[p][t]
            by_column.setdefault(t, []).append(datum)
            by_tile.setdefault(tiles.tiles[p][t], []).append(datum)
    for group in list(by_column.values()) + list(by_tile.values()):
        for d in group:
            mates[d].update(e for e in group if e != d)
    return mates


def satisfies_tile_constraints(banks: Sequence[Optional[int]], tiles: TileMatrix) -> bool:
    """Column and tile distinctness over the assigned cells."""
    mates = _mates(tiles)
    for d, bank in enumerate(banks):
        if bank is None:
            continue
        if any(banks[e] == bank for e in mates[d]):
            return False
    return True


def greedy_fill(tiles: TileMatrix) -> list[Optional[int]]:
    """Single deterministic pass; cells whose banks are all blocked stay empty.

    Scan is column-major, rows top-down. Each cell first tries its row's
    bank, then the lowest bank clashing with neither the natural column
    so far nor its tile-mates so far.
    """
    natural = tiles.schedules.natural
    mates = _mates(tiles)
    banks: list[Optional[int]] = [None] * tiles.schedules.size
    for t in range(tiles.cycles):
        for p in range(tiles.rows):
            datum = natural.cells[p][t]
            blocked = {banks[e] for e in mates[datum] if banks[e] is not None}
            for bank in [p] + [b for b in range(tiles.rows) if b != p]:
                if bank not in blocked:
                    banks[datum] = bank
                    break
    return banks


def repair_complete(
    partial: Sequence[Optional[int]], tiles: TileMatrix, seed: int
) -> tuple[int, ...]:
    """Fill the gaps left by greedy_fill by seeded conflict chasing.

    Each pending datum takes a bank with the fewest clashes among its
    already-assigned mates (ties broken by the seeded generator); any
    clashing mates are evicted and queued for reassignment. The assigned
    cells therefore stay mutually conflict-free, and an empty queue means
    a complete valid mapping. A budget bounds the chase; hitting it
    raises RepairBudgetExhausted rather than looping forever.
    """
    banks = list(partial)
    if all(b is not None for b in banks):
        return tuple(banks)
    natural = tiles.schedules.natural
    mates = _mates(tiles)
    rng = random.Random(seed)
    budget = REPAIR_BUDGET_PER_DATUM * tiles.schedules.size
    pending = [
        natural.cells[p][t]
        for t in range(tiles.cycles)
        for p in range(tiles.rows)
        if banks[natural.cells[p][t]] is None
    ]
    stack = list(reversed(pending))  # pop() follows the scan order
    steps = 0
    while stack:
        steps += 1
        if steps > budget:
            raise RepairBudgetExhausted(budget)
        datum = stack.pop()
        clashes = [0] * tiles.rows
        for mate in mates[datum]:
            if banks[mate] is not None:
                clashes[banks[mate]] += 1
        least = min(clashes)
        choices = [b for b in range(tiles.rows) if clashes[b] == least]
        bank = choices[0] if len(choices) == 1 else rng.choice(choices)
        banks[datum] = bank
        if least > 0:
            for mate in mates[datum]:
                if banks[mate] == bank and mate != datum:
                    banks[mate] = None
                    stack.append(mate)
    return tuple(banks)


def baseline_solve(problem: ProblemSpec, seed: int = 0) -> tuple[int, ...]:
    """Tile, greedy-fill, repair: a complete valid mapping for the problem."""
    tiles = build_tiles(SchedulePair.from_problem(problem))
    return repair_complete(greedy_fill(tiles), tiles, seed)
