"""Shared generators and comparison helpers for the test suite."""

import itertools

from hypothesis import strategies as st

from bankmap import ProblemSpec, validate_permutation


def size_parallelism_pairs(max_size, parallelisms):
    return [
        (length, x)
        for x in parallelisms
        for length in range(x, max_size + 1, x)
    ]


def random_problem(rng, pairs):
    """One random instance with (size, parallelism) drawn from pairs."""
    length, x = rng.choice(pairs)
    entries = list(range(length))
    rng.shuffle(entries)
    return ProblemSpec(validate_permutation(entries), x)


@st.composite
def problems(draw, max_size=24, parallelisms=(1, 2, 3, 4)):
    x = draw(st.sampled_from(parallelisms))
    cycles = draw(st.integers(1, max(1, max_size // x)))
    entries = draw(st.permutations(tuple(range(x * cycles))))
    return ProblemSpec(validate_permutation(entries), x)


def relabel_equal(a, b):
    """True when some bank relabeling carries mapping a onto mapping b."""
    if len(a) != len(b):
        return False
    banks = sorted(set(a) | set(b))
    for sigma in itertools.permutations(banks):
        if all(sigma[v] == w for v, w in zip(a, b)):
            return True
    return False
