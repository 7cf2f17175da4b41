"""Brute-force ground truth for bounded checks.

Nothing here uses the symbolic machinery except ``models`` (the definition of
denotation) and ``step_concrete`` (the definition of the transition relation).
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Iterable, Iterator, Sequence

from . import counters as C
from .system import ParameterizedSystem, step_concrete
from .words import Configuration, CountedWord, lc, models, rc

MAX_CONFIGS = 10**7


class OracleLimit(ValueError):
    pass


def all_configurations(n: int, max_len: int) -> Iterator[Configuration]:
    total = sum(n**k for k in range(max_len + 1))
    if total > MAX_CONFIGS:
        raise OracleLimit(f"{total} configurations exceed the enumeration limit")
    for k in range(max_len + 1):
        yield from itertools.product(range(n), repeat=k)


def enumerate_denotation(phi: CountedWord, max_len: int, n: int) -> set[Configuration]:
    return {w for w in all_configurations(n, max_len) if models(w, phi, n)}


def denotation_of_set(
    words: Iterable[CountedWord], max_len: int, n: int
) -> set[Configuration]:
    words = list(words)
    return {
        w for w in all_configurations(n, max_len) if any(models(w, phi, n) for phi in words)
    }


def explicit_reach(
    system: ParameterizedSystem, size: int
) -> tuple[set[Configuration], bool]:
    """Configurations reachable from ``init^size``; second item flags a bad one."""
    reached, bad = explicit_search(system, size)
    return reached, bad is not None


def explicit_search(
    system: ParameterizedSystem, size: int
) -> tuple[set[Configuration], list[tuple[Configuration, str]] | None]:
    """Breadth-first reachability; returns the reached set and, if a bad
    configuration is reachable, a shortest run to it as ``(config, via)``
    pairs (``via`` is the transition id that produced ``config``)."""
    if system.n**size > MAX_CONFIGS:
        raise OracleLimit(f"{system.n}^{size} configurations exceed the enumeration limit")
    start = (system.init_state,) * size
    parent: dict[Configuration, tuple[Configuration | None, str]] = {start: (None, "")}
    queue = deque([start])
    n = system.n

    def is_bad(c: Configuration) -> bool:
        return any(models(c, phi, n) for phi in system.bad_set)

    found = start if is_bad(start) else None
    while queue and found is None:
        c = queue.popleft()
        for t in system.transitions:
            for d in step_concrete(c, t):
                if d in parent:
                    continue
                parent[d] = (c, t.id)
                if is_bad(d):
                    found = d
                    break
                queue.append(d)
            if found is not None:
                break
    if found is None:
        return set(parent), None
    run = []
    c: Configuration | None = found
    while c is not None:
        prev, via = parent[c]
        run.append((c, via))
        c = prev
    run.reverse()
    return set(parent), run


# -- goodness of zip outputs ---------------------------------------------------


def _is_increasing(h: Sequence[int], limit: int) -> bool:
    return all(0 <= x < limit for x in h) and all(a < b for a, b in zip(h, h[1:]))


def check_goodness(
    z: CountedWord,
    u: CountedWord,
    v: CountedWord,
    u2: CountedWord,
    v2: CountedWord,
    h1: Sequence[int],
    h2: Sequence[int],
    n: int,
) -> bool:
    """Literal check that ``(z : (u, v) : (u2, v2))`` is good for injections
    ``h1: u -> z`` and ``h2: u2 -> z`` (0-based position lists)."""
    if len(h1) != len(u) or len(h2) != len(u2):
        return False
    if not (_is_increasing(h1, len(z)) and _is_increasing(h2, len(z))):
        return False
    img1, img2 = set(h1), set(h2)
    if img1 | img2 != set(range(len(z))):
        return False
    inv1 = {j: i for i, j in enumerate(h1)}
    inv2 = {j: i for i, j in enumerate(h2)}
    for j in range(len(z)):
        if j in img1 and j in img2:
            a, b = u[inv1[j]], u2[inv2[j]]
            ml = C.meet_counter(a.left, b.left)
            mr = C.meet_counter(a.right, b.right)
            if ml.is_bottom or mr.is_bottom or a.state != b.state:
                return False
            if z[j] != (ml, a.state, mr):
                return False
        else:
            solo, solo_h, other, other_h, other_rest = (
                (u, inv1, u2, h2, v2) if j in img1 else (u2, inv2, u, h1, v)
            )
            e = solo[solo_h[j]]
            # number of entries of the other word mapped at or before j
            k = sum(1 for x in other_h if x <= j)
            before = CountedWord(other[:k])
            after = CountedWord(other[k:] + other_rest)
            if not (rc(before, n)[e.state] < 0 and lc(after, n)[e.state] < 0):
                return False
            if z[j] != e:
                return False
    return True


def good_completions(phi: CountedWord, other: CountedWord, n: int) -> set[CountedWord]:
    """Every ``z`` making ``(z : (phi, eps) : (other, eps))`` good, by enumerating
    all pairs of injections into all possible lengths."""
    out = set()
    a, b = len(phi), len(other)
    for size in range(max(a, b), a + b + 1):
        for h1 in itertools.combinations(range(size), a):
            for h2 in itertools.combinations(range(size), b):
                if set(h1) | set(h2) != set(range(size)):
                    continue
                z = _assemble(phi, other, h1, h2, size)
                if z is not None and check_goodness(z, phi, CountedWord(()), other, CountedWord(()), h1, h2, n):
                    out.add(z)
    return out


def _assemble(phi, other, h1, h2, size):
    inv1 = {j: i for i, j in enumerate(h1)}
    inv2 = {j: i for i, j in enumerate(h2)}
    entries = []
    for j in range(size):
        if j in inv1 and j in inv2:
            a, b = phi[inv1[j]], other[inv2[j]]
            if a.state != b.state:
                return None
            entries.append(
                type(a)(C.meet_counter(a.left, b.left), a.state, C.meet_counter(a.right, b.right))
            )
        elif j in inv1:
            entries.append(phi[inv1[j]])
        else:
            entries.append(other[inv2[j]])
    return CountedWord(entries)
