#!/usr/bin/env python3
"""Regenerate the pinned oracle fixtures used by the regression tests.

Exhausts a handful of small instances with the brute-force enumerator and
records the solution counts plus one sample solution per query. Also
searches (deterministically) for two instances the derived tests need:
one whose barrel-shifter problem is infeasible, and one where the greedy
baseline pass leaves at least one cell empty.

Run from the repository root:  python3 scripts/regen_fixtures.py
"""

from __future__ import annotations

import json
import pathlib
import random

from bankmap import (
    NetworkObjective,
    ProblemSpec,
    SchedulePair,
    brute_force_solve,
    build_tiles,
    greedy_fill,
    instance_key,
    validate_permutation,
)

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "pinned.json"

DEMO_PERMUTATION = [1, 9, 10, 5, 0, 11, 2, 7, 3, 6, 8, 4]

QUERIES = [
    (DEMO_PERMUTATION, 3, NetworkObjective.CROSSBAR, True),
    (DEMO_PERMUTATION, 3, NetworkObjective.BARREL_SHIFTER, True),
    ([0, 1, 2, 3], 2, NetworkObjective.CROSSBAR, True),
]


def oracle_entries() -> dict:
    entries = {}
    for permutation, parallelism, objective, fixed in QUERIES:
        spec = ProblemSpec(validate_permutation(permutation), parallelism)
        solutions = brute_force_solve(SchedulePair.from_problem(spec), objective, fixed)
        key = instance_key(permutation, parallelism, objective, fixed)
        entries[key] = {
            "permutation": permutation,
            "parallelism": parallelism,
            "objective": objective.value,
            "fix_first_column": fixed,
            "solution_count": len(solutions),
            "sample_solution": list(solutions[0]) if solutions else None,
        }
    return entries


def find_barrel_infeasible(seed: int = 0) -> dict:
    """First seeded random instance with no barrel-realizable mapping."""
    rng = random.Random(seed)
    attempts = 0
    while True:
        attempts += 1
        length = rng.choice([6, 9, 12])
        entries = list(range(length))
        rng.shuffle(entries)
        spec = ProblemSpec(validate_permutation(entries), 3)
        pair = SchedulePair.from_problem(spec)
        if not brute_force_solve(pair, NetworkObjective.BARREL_SHIFTER, True):
            return {"permutation": entries, "parallelism": 3, "attempts": attempts}


def find_greedy_gap(seed: int = 0) -> dict:
    """First seeded random instance where greedy_fill leaves a cell empty."""
    rng = random.Random(seed)
    attempts = 0
    while True:
        attempts += 1
        length = rng.choice([9, 12])
        entries = list(range(length))
        rng.shuffle(entries)
        spec = ProblemSpec(validate_permutation(entries), 3)
        tiles = build_tiles(SchedulePair.from_problem(spec))
        partial = greedy_fill(tiles)
        if any(b is None for b in partial):
            return {
                "permutation": entries,
                "parallelism": 3,
                "empty_data": [d for d, b in enumerate(partial) if b is None],
                "attempts": attempts,
            }


def main() -> None:
    fixtures = {
        "oracle_counts": oracle_entries(),
        "barrel_infeasible": find_barrel_infeasible(),
        "greedy_gap": find_greedy_gap(),
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(fixtures, indent=2) + "\n")
    print(f"wrote {OUT}")
    for key, entry in fixtures["oracle_counts"].items():
        print(f"  {key}: {entry['objective']} -> {entry['solution_count']} solutions")
    print(f"  barrel-infeasible after {fixtures['barrel_infeasible']['attempts']} attempt(s): "
          f"{fixtures['barrel_infeasible']['permutation']}")
    print(f"  greedy gap after {fixtures['greedy_gap']['attempts']} attempt(s): "
          f"{fixtures['greedy_gap']['permutation']}")


if __name__ == "__main__":
    main()
