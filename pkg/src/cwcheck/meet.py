"""Intersection of counted words.

``zip_words`` builds every constrained shuffle of two words; ``meet_words``
strengthens the shuffles and keeps an entailment-minimal set of them.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

from . import counters as C
from .words import (
    CountedWord,
    Entry,
    entails_word,
    is_well_formed,
    strengthen,
)


class Insertion(NamedTuple):
    prefix: CountedWord
    inserted: Entry
    suffix: CountedWord

    def joined(self) -> CountedWord:
        return CountedWord(self.prefix + (self.inserted,) + self.suffix)


def insert_positions(
    q: int, phi: CountedWord, n: int, lo: int = 0, hi: int | None = None
) -> list[Insertion]:
    """All ways of placing state ``q`` in ``phi`` (the ``q ⊗ phi`` operator).

    ``lo``/``hi`` restrict the placements to split points ``lo..hi``, i.e. to
    explicit positions ``lo..hi-1`` and gaps ``lo..hi``.  Candidates that are
    not well formed are dropped.
    """
    k = len(phi)
    hi = k if hi is None else hi
    out = []
    top = C.top(n)
    for cut in range(lo, hi + 1):
        rc_before = phi[cut - 1].right if cut > 0 else top
        lc_after = phi[cut].left if cut < k else top
        if rc_before[q] < 0 and lc_after[q] < 0:
            cand = Insertion(
                CountedWord(phi[:cut]), Entry(lc_after, q, rc_before), CountedWord(phi[cut:])
            )
            if is_well_formed(cand.joined(), n):
                out.append(cand)
        if cut < hi and phi[cut].state == q:
            out.append(Insertion(CountedWord(phi[:cut]), phi[cut], CountedWord(phi[cut + 1:])))
    return out


def zip_words(phi: CountedWord, other: CountedWord, n: int) -> set[CountedWord]:
    """Every constrained shuffle of ``phi`` and ``other``.

    Iterative version of the three-branch recursion: an entry of ``phi`` may be
    taken alone when the surrounding counters of ``other`` tolerate its state,
    two entries with the same state may be merged when both counter meets are
    satisfiable, and symmetrically for ``other``.  The work items are
    ``(z, i, j)`` with ``i``/``j`` the number of consumed entries.
    """
    top = C.top(n)
    a, b = len(phi), len(other)
    results: set[CountedWord] = set()
    seen: set[tuple] = set()
    stack = [((), 0, 0)]
    while stack:
        z, i, j = stack.pop()
        if i == a and j == b:
            results.add(CountedWord(z))
            continue
        key = (z, i, j)
        if key in seen:
            continue
        seen.add(key)
        if i < a:
            h = phi[i]
            rp = other[j - 1].right if j > 0 else top
            ls = other[j].left if j < b else top
            if rp[h.state] < 0 and ls[h.state] < 0:
                stack.append((z + (h,), i + 1, j))
            if j < b:
                h2 = other[j]
                if h.state == h2.state:
                    ml = C.meet_counter(h.left, h2.left)
                    if not ml.is_bottom:
                        mr = C.meet_counter(h.right, h2.right)
                        if not mr.is_bottom:
                            stack.append((z + (Entry(ml, h.state, mr),), i + 1, j + 1))
        if j < b:
            h2 = other[j]
            rp = phi[i - 1].right if i > 0 else top
            ls = phi[i].left if i < a else top
            if rp[h2.state] < 0 and ls[h2.state] < 0:
                stack.append((z + (h2,), i, j + 1))
    return results


def minimize(words: Iterable[CountedWord]) -> list[CountedWord]:
    """Entailment-minimal subset: drop any word entailed from another kept one.

    Among mutually entailing words the first one seen survives.  The result is
    ordered deterministically (shortest first, then by insertion order).
    """
    kept: list[CountedWord] = []
    for w in sorted(dict.fromkeys(words), key=len):
        if any(entails_word(k, w) for k in kept):
            continue
        kept = [k for k in kept if not entails_word(w, k)]
        kept.append(w)
    return kept


def meet_words(phi: CountedWord, other: CountedWord, n: int) -> list[CountedWord]:
    out = []
    for z in zip_words(phi, other, n):
        if not is_well_formed(z, n):
            continue
        out.append(strengthen(z))
    return minimize(out)


def meet_sets(
    words: Iterable[CountedWord], others: Iterable[CountedWord], n: int
) -> list[CountedWord]:
    others = list(others)
    out = []
    for phi in words:
        for other in others:
            out.extend(meet_words(phi, other, n))
    return minimize(out)


def meets(words: Iterable[CountedWord], others: Iterable[CountedWord], n: int) -> bool:
    """Cheaper emptiness test: stop at the first well-formed shuffle."""
    others = list(others)
    for phi in words:
        for other in others:
            for z in zip_words(phi, other, n):
                if is_well_formed(z, n):
                    return True
    return False

