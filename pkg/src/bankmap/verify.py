"""Independent checking machinery: verifier, simulator, exhaustive oracle.

Everything here deliberately avoids the solver's data structures so that
agreement between the two is meaningful evidence. The verifier walks the
schedule columns; a second codepath restates the collision-freedom
definition directly over the cycle partitions; the simulator replays the
per-cycle accesses and cross-checks a control schedule; and the brute
force enumerator exhausts small instances column-permutation by
column-permutation.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ControlMismatch, IncompleteMapping, InstanceTooLarge
from .network import (
    ControlSchedule,
    NetworkObjective,
    apply_control_word,
    column_pattern,
    objective_compatible,
)
from .schedule import Order, SchedulePair

# enumeration cost is (X!)^N; these bounds keep it interactive
ORACLE_MAX_SIZE = 16
ORACLE_MAX_PARALLELISM = 4


@dataclass(frozen=True)
class Conflict:
    order: Order
    cycle: int
    bank: int
    data: tuple  # the colliding pair


@dataclass(frozen=True)
class VerificationReport:
    valid: bool
    conflicts: tuple
    bank_contents: tuple  # per bank, data in natural (cycle, row) order
    objective_met: dict

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "conflicts": [
                {
                    "order": c.order.value,
                    "cycle": c.cycle,
                    "bank": c.bank,
                    "data": list(c.data),
                }
                for c in self.conflicts
            ],
            "bank_contents": [list(bank) for bank in self.bank_contents],
            "objective_met": {obj.value: met for obj, met in self.objective_met.items()},
        }


def _require_total(bank_of: Sequence[Optional[int]], size: int) -> None:
    missing = [d for d in range(size) if d >= len(bank_of) or bank_of[d] is None]
    if missing:
        raise IncompleteMapping(missing)


def verify_mapping(
    bank_of: Sequence[int],
    schedules: SchedulePair,
    objectives: Sequence[NetworkObjective] = (),
) -> VerificationReport:
    """Column-by-column collision check over both schedules.

    Reports every colliding pair, the per-bank data contents, and - for
    each queried objective - whether the mapping could realize it.
    """
    _require_total(bank_of, schedules.size)
    conflicts = []
    for order in Order:
        sched = schedules.of(order)
        for t in range(sched.cycles):
            per_bank: dict = {}
            for p in range(sched.rows):
                datum = sched.cells[p][t]
                per_bank.setdefault(bank_of[datum], []).append(datum)
            for bank, data in sorted(per_bank.items()):
                for pair in itertools.combinations(data, 2):
                    conflicts.append(Conflict(order, t, bank, pair))
    contents = [[] for _ in range(schedules.rows)]
    natural = schedules.natural
    for t in range(natural.cycles):
        for p in range(natural.rows):
            datum = natural.cells[p][t]
            contents[bank_of[datum]].append(datum)
    met = {obj: objective_compatible(bank_of, schedules, obj) for obj in objectives}
    return VerificationReport(
        valid=not conflicts,
        conflicts=tuple(conflicts),
        bank_contents=tuple(tuple(bank) for bank in contents),
        objective_met=met,
    )


def satisfies_partition_definition(bank_of: Sequence[int], schedules: SchedulePair) -> bool:
    """Second, partition-based codepath of the collision-freedom definition.

    Builds the cycle partitions of both orders and demands that each
    subset maps onto as many banks as it has members. Kept independent of
    verify_mapping on purpose.
    """
    _require_total(bank_of, schedules.size)
    for order in Order:
        sched = schedules.of(order)
        partition = [frozenset(sched.column(t)) for t in range(sched.cycles)]
        for subset in partition:
            if len({bank_of[d] for d in subset}) != len(subset):
                return False
    return True


@dataclass(frozen=True)
class AccessTrace:
    """Cycle-by-cycle (pe, datum, bank) triples per access order."""

    steps: dict

    def of(self, order: Order) -> tuple:
        return self.steps[order]


def simulate(
    bank_of: Sequence[int],
    schedules: SchedulePair,
    controls: Optional[ControlSchedule] = None,
) -> AccessTrace:
    """Replay both access orders; expects an already-verified mapping.

    With a control schedule, additionally checks at every cycle that
    routing each PE through the cycle's control word reaches exactly the
    bank of the datum it accesses; a divergence raises ControlMismatch.
    """
    steps = {}
    for order in Order:
        sched = schedules.of(order)
        cycles = []
        reference = column_pattern(bank_of, sched, 0)
        for t in range(sched.cycles):
            triples = tuple(
                (p, sched.cells[p][t], bank_of[sched.cells[p][t]]) for p in range(sched.rows)
            )
            if controls is not None:
                routed = apply_control_word(controls.kind, reference, controls.words(order)[t])
                for p, _, bank in triples:
                    if routed[p] != bank:
                        raise ControlMismatch(order, t, p)
            cycles.append(triples)
        steps[order] = tuple(cycles)
    return AccessTrace(steps)


def brute_force_solve(
    schedules: SchedulePair,
    objective: NetworkObjective = NetworkObjective.CROSSBAR,
    fix_first_column: bool = False,
) -> list[tuple]:
    """Every mapping satisfying both column constraints (and the objective).

    Enumerates a bank permutation per natural column, pruning on the
    interleaved columns, so the worst case is (X!)^N instead of X^L.
    Deterministic order: lexicographic in the per-column permutations.
    With fix_first_column the first natural column is pinned to the
    identity pattern, quotienting out bank relabeling.
    """
    rows, cycles, size = schedules.rows, schedules.cycles, schedules.size
    if size > ORACLE_MAX_SIZE or rows > ORACLE_MAX_PARALLELISM:
        raise InstanceTooLarge(size, rows)
    natural = schedules.natural
    interleaved_column = [schedules.position(Order.INTERLEAVED, d)[1] for d in range(size)]
    perms = list(itertools.permutations(range(rows)))
    identity = tuple(range(rows))
    bank_of: list = [None] * size
    used: list = [set() for _ in range(cycles)]  # banks per interleaved column
    results: list[tuple] = []

    def place(t: int) -> None:
        if t == cycles:
            mapping = tuple(bank_of)
            if objective_compatible(mapping, schedules, objective):
                results.append(mapping)
            return
        options = [identity] if (t == 0 and fix_first_column) else perms
        for perm in options:
            placed = []
            ok = True
            for p in range(rows):
                datum = natural.cells[p][t]
                column = interleaved_column[datum]
                bank = perm[p]
                if bank in used[column]:
                    ok = False
                    break
                used[column].add(bank)
                bank_of[datum] = bank
                placed.append((datum, column, bank))
            if ok:
                place(t + 1)
            for datum, column, bank in reversed(placed):
                used[column].discard(bank)
                bank_of[datum] = None

    place(0)
    return results


def instance_key(
    permutation: Sequence[int],
    parallelism: int,
    objective: NetworkObjective,
    fix_first_column: bool,
) -> str:
    """Stable hash naming one oracle query in the pinned fixtures file."""
    blob = json.dumps(
        {
            "permutation": list(permutation),
            "parallelism": parallelism,
            "objective": objective.value,
            "fix_first_column": fix_first_column,
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(blob.encode()).hexdigest()[:16]
