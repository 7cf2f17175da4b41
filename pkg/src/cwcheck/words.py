"""Counted words: sequences of (left counter, state, right counter) entries.

A configuration ``w`` is modeled by a counted word when the word's base embeds
into ``w`` and, at every embedded position, the Parikh image of ``w`` strictly
to the left (right) satisfies the entry's left (right) counter.
"""

from __future__ import annotations

import re
from typing import Iterable, NamedTuple, Sequence

from . import counters as C
from .counters import BOTTOM, Counter

Configuration = tuple[int, ...]


class StrengtheningError(AssertionError):
    """A counter collapsed to bottom while strengthening (input not well formed)."""


class Entry(NamedTuple):
    left: Counter
    state: int
    right: Counter


class CountedWord(tuple):
    """Immutable sequence of :class:`Entry`; the empty word is ``EPSILON``."""

    __slots__ = ()

    @property
    def base(self) -> Configuration:
        return tuple(e.state for e in self)

    def __repr__(self) -> str:
        return f"CountedWord({render_word(self)})"


EPSILON = CountedWord(())


def word(entries: Iterable[Entry | tuple]) -> CountedWord:
    return CountedWord(Entry(*e) for e in entries)


def lc(phi: CountedWord, n: int) -> Counter:
    return phi[0].left if phi else C.top(n)


def rc(phi: CountedWord, n: int) -> Counter:
    return phi[-1].right if phi else C.top(n)


def parikh(letters: Sequence[int], n: int) -> tuple[int, ...]:
    m = [0] * n
    for q in letters:
        m[q] += 1
    return tuple(m)


def _prefix_counts(letters: Sequence[int], n: int) -> list[list[int]]:
    """``out[j]`` is the Parikh image of ``letters[:j]``."""
    out = [[0] * n]
    for q in letters:
        nxt = out[-1][:]
        nxt[q] += 1
        out.append(nxt)
    return out


def _accepts(cr: Counter, pre: Sequence[int]) -> bool:
    for x, k in zip(cr, pre):
        if x >= 0:
            if k != x:
                return False
        elif k < ~x:
            return False
    return True


def _accepts_suffix(cr: Counter, total: Sequence[int], upto: Sequence[int]) -> bool:
    for x, t, u in zip(cr, total, upto):
        k = t - u
        if x >= 0:
            if k != x:
                return False
        elif k < ~x:
            return False
    return True


def is_well_formed(phi: CountedWord, n: int | None = None) -> bool:
    if not phi:
        return True
    n = n if n is not None else len(phi[0].left) or len(phi[0].right)
    pre = _prefix_counts(phi.base, n)
    total = pre[-1]
    for i, e in enumerate(phi):
        if e.left.is_bottom or e.right.is_bottom:
            return False
        if not _accepts(e.left, pre[i]):
            return False
        if not _accepts_suffix(e.right, total, pre[i + 1]):
            return False
    return True


def models(w: Sequence[int], phi: CountedWord, n: int | None = None) -> bool:
    """Does configuration ``w`` belong to the denotation of ``phi``?

    Each base position can be placed independently of the others, so the
    leftmost-first search never needs to backtrack.
    """
    if not phi:
        return True
    if len(phi) > len(w):
        return False
    n = n if n is not None else len(phi[0].left)
    pre = _prefix_counts(w, n)
    total = pre[-1]
    j = 0
    m = len(w)
    for i, e in enumerate(phi):
        slack = len(phi) - i - 1
        while j < m - slack:
            if (
                w[j] == e.state
                and _accepts(e.left, pre[j])
                and _accepts_suffix(e.right, total, pre[j + 1])
            ):
                break
            j += 1
        else:
            return False
        j += 1
    return True


def entails_word(phi: CountedWord, other: CountedWord) -> bool:
    """``phi ⊑ other``: ``other`` is entailed from ``phi`` (so denotes less)."""
    if not phi:
        return True
    if len(phi) > len(other):
        return False
    entails = C.entails_counter
    j = 0
    m = len(other)
    for i, e in enumerate(phi):
        slack = len(phi) - i - 1
        while j < m - slack:
            o = other[j]
            if o.state == e.state and entails(e.left, o.left) and entails(e.right, o.right):
                break
            j += 1
        else:
            return False
        j += 1
    return True


def is_subword(small: Sequence[int], big: Sequence[int]) -> bool:
    it = iter(big)
    return all(any(x == y for y in it) for x in small)


# -- strengthening -------------------------------------------------------------


def _sum(target: int, a: int, ua: bool, b: int, c: int, uc: bool):
    """One component of ``target ⊓ (a ⊕ u_a ⊕ (b ⊖ (c ⊕ u_c)))``; ``None`` on bottom."""
    if uc:
        c = c + 1 if c >= 0 else c - 1
    # b ⊖ c
    if b >= 0:
        if c >= 0:
            if b < c:
                return None
            d = b - c
        else:
            if b < ~c:
                return None
            d = 0 if b == ~c else -1
    elif c >= 0:
        d = ~b - c
        d = ~d if d > 0 else -1
    else:
        d = -1
    if ua:
        a = a + 1 if a >= 0 else a - 1
    # a ⊕ d
    if a >= 0 and d >= 0:
        v = a + d
    else:
        v = ~((a if a >= 0 else ~a) + (d if d >= 0 else ~d))
    # target ⊓ v
    if target >= 0:
        if v >= 0:
            return target if target == v else None
        return target if target >= ~v else None
    if v >= 0:
        return v if v >= ~target else None
    return target if target < v else v


def _diff(target: int, b: int, ub: bool):
    """One component of ``target ⊓ (b ⊖ u_b)``; ``None`` on bottom."""
    if ub:
        if b >= 0:
            if b == 0:
                return None
            b -= 1
        elif b < -1:
            b += 1
    if target >= 0:
        if b >= 0:
            return target if target == b else None
        return target if target >= ~b else None
    if b >= 0:
        return b if b >= ~target else None
    return target if target < b else b


def _strengthen_component(ls: list, rs: list, marks: list, sweeps) -> bool:
    """Fixpoint of the four pair rules on one state's atoms, in place."""
    any_change = False
    while True:
        changed = False
        for sweep in sweeps:
            for i in sweep:
                l, r, l2, r2 = ls[i], rs[i], ls[i + 1], rs[i + 1]
                u, u2 = marks[i], marks[i + 1]
                x = _sum(r, r2, u2, l2, l, u)  # right
                if x is None:
                    raise StrengtheningError(f"right counter at {i} became bottom")
                if x != r:
                    rs[i] = r = x
                    changed = True
                x = _diff(l, l2, u)  # left
                if x is None:
                    raise StrengtheningError(f"left counter at {i} became bottom")
                if x != l:
                    ls[i] = l = x
                    changed = True
                x = _diff(r2, r, u2)  # right'
                if x is None:
                    raise StrengtheningError(f"right counter at {i + 1} became bottom")
                if x != r2:
                    rs[i + 1] = r2 = x
                    changed = True
                x = _sum(l2, l, u, r, r2, u2)  # left'
                if x is None:
                    raise StrengtheningError(f"left counter at {i + 1} became bottom")
                if x != l2:
                    ls[i + 1] = x
                    changed = True
        if not changed:
            return any_change
        any_change = True


def strengthen(phi: CountedWord, order: str = "both") -> CountedWord:
    """Propagate counter information between neighbours until nothing changes.

    ``order`` picks the sweep direction: ``"lr"``, ``"rl"`` or alternating
    ``"both"``.  All orders reach the same fixpoint.

    The rules never mix states, so each state's atoms are brought to their
    fixpoint separately; states absent from the base whose atoms are all
    ``>= 0`` are already stable and skipped.
    """
    k = len(phi)
    if k < 2:
        return phi
    forward = range(k - 1)
    backward = range(k - 2, -1, -1)
    if order == "lr":
        sweeps = (forward,)
    elif order == "rl":
        sweeps = (backward,)
    elif order == "both":
        sweeps = (forward, backward)
    else:
        raise ValueError(f"unknown order {order!r}")
    if order == "both":
        cached = _cache.get(phi)
        if cached is not None:
            return cached
    states = [e.state for e in phi]
    lefts = [list(e.left) for e in phi]
    rights = [list(e.right) for e in phi]
    if any(not x for x in lefts) or any(not x for x in rights):
        raise StrengtheningError("bottom counter")
    in_base = set(states)
    touched = False
    for s in range(len(lefts[0])):
        ls = [c[s] for c in lefts]
        rs = [c[s] for c in rights]
        if s not in in_base and all(x == -1 for x in ls) and all(x == -1 for x in rs):
            continue
        marks = [q == s for q in states]
        if order == "both":
            key = (tuple(ls), tuple(rs), tuple(marks))
            hit = _column_cache.get(key)
            if hit is None:
                try:
                    changed = _strengthen_component(ls, rs, marks, sweeps)
                    hit = (changed, ls, rs)
                except StrengtheningError as exc:
                    hit = exc
                if len(_column_cache) >= _CACHE_SIZE:
                    _column_cache.clear()
                _column_cache[key] = hit
            if isinstance(hit, StrengtheningError):
                raise StrengtheningError(*hit.args)
            changed, ls, rs = hit
        else:
            changed = _strengthen_component(ls, rs, marks, sweeps)
        if changed:
            touched = True
            for i in range(k):
                lefts[i][s] = ls[i]
                rights[i][s] = rs[i]
    if touched:
        out = CountedWord(
            Entry(Counter(l), q, Counter(r)) for l, q, r in zip(lefts, states, rights)
        )
    else:
        out = phi
    if order == "both":
        if len(_cache) >= _CACHE_SIZE:
            _cache.clear()
        _cache[phi] = out
    return out


_CACHE_SIZE = 200_000
_cache: dict[CountedWord, CountedWord] = {}
_column_cache: dict[tuple, object] = {}


def try_strengthen(phi: CountedWord, n: int) -> CountedWord | None:
    """Strengthen ``phi`` if it is well formed, otherwise ``None``."""
    if not is_well_formed(phi, n):
        return None
    return strengthen(phi)


def relax_word(phi: CountedWord, rho: Sequence[int]) -> CountedWord:
    relaxed = CountedWord(
        Entry(C.relax_counter(e.left, rho), e.state, C.relax_counter(e.right, rho)) for e in phi
    )
    return strengthen(relaxed)


def precision_word(phi: CountedWord, n: int) -> C.Multiset:
    best = [0] * n
    for e in phi:
        for cr in (e.left, e.right):
            for s, x in enumerate(cr):
                if x >= 0 and x + 1 > best[s]:
                    best[s] = x + 1
    return tuple(best)


def counters_of(phi: CountedWord) -> Iterable[Counter]:
    for e in phi:
        yield e.left
        yield e.right


# -- text rendering ----------------------------------------------------------


def _names(n: int, names: Sequence[str] | None) -> Sequence[str]:
    return names if names is not None else [f"#{i}" for i in range(n)]


def render_word(phi: CountedWord, names: Sequence[str] | None = None) -> str:
    if not phi:
        return "eps"
    parts = []
    for e in phi:
        n = len(e.left) or len(e.right)
        nm = _names(n, names)
        left = C.render_counter(e.left, nm) or "true"
        right = C.render_counter(e.right, nm) or "true"
        parts.append(f"({left} | {nm[e.state]} | {right})")
    return " ".join(parts)


_ATOM_RE = re.compile(r"^\s*(\S+?)\s*(>=|=)\s*(\d+)\s*$")


def parse_counter(text: str, names: Sequence[str]) -> Counter:
    index = {nm: i for i, nm in enumerate(names)}
    atoms = [-1] * len(names)
    text = text.strip()
    if text == "false":
        return BOTTOM
    if text in ("", "true"):
        return Counter(atoms)
    for part in text.split(","):
        m = _ATOM_RE.match(part)
        if not m:
            raise ValueError(f"bad counter atom {part.strip()!r}")
        name, op, k = m.group(1), m.group(2), int(m.group(3))
        if name not in index:
            raise ValueError(f"unknown state {name!r}")
        atoms[index[name]] = k if op == "=" else ~k
    return Counter(atoms)


def _entries_text(text: str) -> list[str]:
    """Split ``(...) (...)`` into entry bodies; state names may hold parentheses."""
    out = []
    i, m = 0, len(text)
    while i < m:
        if text[i].isspace():
            i += 1
            continue
        if text[i] != "(":
            raise ValueError(f"unexpected text {text[i:]!r}")
        depth, j = 1, i + 1
        while j < m and depth:
            depth += {"(": 1, ")": -1}.get(text[j], 0)
            j += 1
        if depth:
            raise ValueError(f"unbalanced parentheses in {text[i:]!r}")
        out.append(text[i + 1:j - 1])
        i = j
    return out


def parse_word(text: str, names: Sequence[str]) -> CountedWord:
    """Inverse of :func:`render_word`."""
    text = text.strip()
    if text in ("eps", ""):
        return EPSILON
    index = {nm: i for i, nm in enumerate(names)}
    entries = []
    for body in _entries_text(text):
        parts = body.split("|")
        if len(parts) != 3:
            raise ValueError(f"cannot parse entry {body!r}")
        state = parts[1].strip()
        if state not in index:
            raise ValueError(f"unknown state {state!r}")
        entries.append(
            Entry(parse_counter(parts[0], names), index[state], parse_counter(parts[2], names))
        )
    return CountedWord(entries)


def upward_word(base: Sequence[int], n: int) -> CountedWord:
    """Strengthened word denoting every configuration with ``base`` as a subword."""
    t = C.top(n)
    return strengthen(CountedWord(Entry(t, q, t) for q in base))


def exact_word(base: Sequence[int], n: int) -> CountedWord:
    """Word whose only model is ``base`` itself."""
    pre = _prefix_counts(base, n)
    total = pre[-1]
    return CountedWord(
        Entry(Counter(pre[i]), q, Counter(t - u for t, u in zip(total, pre[i + 1])))
        for i, q in enumerate(base)
    )
