"""Generators shared by the property tests."""

from __future__ import annotations

import itertools
import random
from typing import Iterator

from cwcheck import counters as C
from cwcheck.words import CountedWord, Entry, _prefix_counts, strengthen


def random_word(
    rng: random.Random, n: int, max_base: int = 3, max_bound: int = 2, min_base: int = 0
) -> CountedWord:
    """A random strengthened word.

    The base is drawn first; every counter atom is either the exact count seen
    by the base or a ``>=`` atom below it, so the result is well formed.
    Exact atoms above ``max_bound`` are turned into ``>=`` atoms.
    """
    k = rng.randint(min_base, max_base)
    base = [rng.randrange(n) for _ in range(k)]
    pre = _prefix_counts(base, n)
    total = pre[-1]

    def atom(count: int) -> int:
        if count <= max_bound and rng.random() < 0.5:
            return count
        return ~rng.randint(0, min(count, max_bound))

    entries = []
    for i, q in enumerate(base):
        left = C.Counter(atom(pre[i][s]) for s in range(n))
        right = C.Counter(atom(total[s] - pre[i + 1][s]) for s in range(n))
        entries.append(Entry(left, q, right))
    return strengthen(CountedWord(entries))


def all_atoms(max_bound: int) -> list[int]:
    return list(range(max_bound + 1)) + [~k for k in range(max_bound + 1)]


def all_counters(n: int, max_bound: int) -> Iterator[C.Counter]:
    for atoms in itertools.product(all_atoms(max_bound), repeat=n):
        yield C.Counter(atoms)


def random_counter(rng: random.Random, n: int, max_bound: int) -> C.Counter:
    atoms = all_atoms(max_bound)
    return C.Counter(rng.choice(atoms) for _ in range(n))


def multisets(n: int, top: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(top + 1), repeat=n)


def atom_options(count: int, max_bound: int) -> list[int]:
    """Atoms consistent with an exact count: ``=count`` (if small) or ``>= j``."""
    exact = [count] if count <= max_bound else []
    return exact + [~j for j in range(min(count, max_bound) + 1)]


def well_formed_family(n: int, max_base: int, max_bound: int) -> Iterator[CountedWord]:
    """Every well-formed word with base length <= ``max_base`` and atom bounds
    <= ``max_bound``, unstrengthened."""
    for k in range(max_base + 1):
        for base in itertools.product(range(n), repeat=k):
            pre = _prefix_counts(base, n)
            total = pre[-1]
            slots = []
            for i in range(k):
                slots.append([atom_options(pre[i][s], max_bound) for s in range(n)])
                slots.append([atom_options(total[s] - pre[i + 1][s], max_bound) for s in range(n)])
            flat = [opts for slot in slots for opts in slot]
            for choice in itertools.product(*flat):
                entries = []
                for i, q in enumerate(base):
                    left = C.Counter(choice[(2 * i) * n:(2 * i + 1) * n])
                    right = C.Counter(choice[(2 * i + 1) * n:(2 * i + 2) * n])
                    entries.append(Entry(left, q, right))
                yield CountedWord(entries)
