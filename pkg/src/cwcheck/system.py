"""Parameterized systems: concrete semantics and symbolic post/pre on counted words."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from . import counters as C
from .meet import insert_positions, minimize
from .words import Configuration, CountedWord, Entry, is_well_formed, render_word, strengthen


class Quantifier(Enum):
    EXISTS_L = "exists_l"
    EXISTS_R = "exists_r"
    EXISTS_LR = "exists_lr"
    FORALL_L = "forall_l"
    FORALL_R = "forall_r"
    FORALL_LR = "forall_lr"

    @property
    def universal(self) -> bool:
        return self.value.startswith("forall")

    @property
    def left(self) -> bool:
        return self.value.endswith("_l") or self.value.endswith("_lr")

    @property
    def right(self) -> bool:
        return self.value.endswith("_r") or self.value.endswith("_lr")


@dataclass(frozen=True)
class Guard:
    quantifier: Quantifier
    witnesses: frozenset[int]

    def holds(self, left: Sequence[int], right: Sequence[int]) -> bool:
        q, p = self.quantifier, self.witnesses
        sides = []
        if q.left:
            sides.append(left)
        if q.right:
            sides.append(right)
        if q.universal:
            return all(s in p for side in sides for s in side)
        return any(s in p for side in sides for s in side)


@dataclass(frozen=True)
class Transition:
    id: str
    source: int
    target: int
    guard: Guard | None = None

    @property
    def is_local(self) -> bool:
        return self.guard is None

    def reversed(self) -> Transition:
        return Transition(self.id, self.target, self.source, self.guard)


@dataclass
class ParameterizedSystem:
    states: tuple[str, ...]
    transitions: tuple[Transition, ...]
    init_state: int
    init_set: tuple[CountedWord, ...]
    bad_set: tuple[CountedWord, ...]
    name: str = ""
    notes: list[str] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.states)

    def index(self, name: str) -> int:
        return self.states.index(name)

    def transition(self, tid: str) -> Transition:
        for t in self.transitions:
            if t.id == tid:
                return t
        raise KeyError(tid)

    def render(self, phi: CountedWord) -> str:
        return render_word(phi, self.states)

    def render_config(self, c: Sequence[int]) -> str:
        return " ".join(self.states[q] for q in c) if c else "eps"


# -- concrete semantics --------------------------------------------------------


def step_concrete(c: Configuration, t: Transition) -> set[Configuration]:
    out = set()
    for j, q in enumerate(c):
        if q != t.source:
            continue
        if t.guard is None or t.guard.holds(c[:j], c[j + 1:]):
            out.add(c[:j] + (t.target,) + c[j + 1:])
    return out


def pre_concrete(c: Configuration, t: Transition) -> set[Configuration]:
    return step_concrete(c, t.reversed())


# -- symbolic post/pre ---------------------------------------------------------


def _fire(phi: CountedWord, f: int, source: int, target: int) -> CountedWord | None:
    """Turn the entry at ``f`` from ``source`` into ``target`` and fix the counters
    that see it: right counters before ``f`` and left counters after ``f``."""
    entries = []
    for i, e in enumerate(phi):
        if i < f:
            r = C.shift(e.right, target, source)
            if r.is_bottom:
                return None
            entries.append(Entry(e.left, e.state, r))
        elif i == f:
            entries.append(Entry(e.left, target, e.right))
        else:
            l = C.shift(e.left, target, source)
            if l.is_bottom:
                return None
            entries.append(Entry(l, e.state, e.right))
    return CountedWord(entries)


def _restrict(phi: CountedWord, f: int, zero: C.Counter, left: bool, right: bool):
    """Constrain every counter looking at the guarded side(s) of position ``f``
    to avoid the non-witness states."""
    entries = list(phi)
    if left:
        for i in range(f + 1):
            e = entries[i]
            l = C.meet_counter(e.left, zero)
            if l.is_bottom:
                return None
            entries[i] = Entry(l, e.state, e.right)
    if right:
        for i in range(f, len(entries)):
            e = entries[i]
            r = C.meet_counter(e.right, zero)
            if r.is_bottom:
                return None
            entries[i] = Entry(e.left, e.state, r)
    return CountedWord(entries)


def _candidates(phi: CountedWord, t: Transition, n: int):
    """Widened words with the firing position marked, before counters are updated."""
    for ins in insert_positions(t.source, phi, n):
        widened = ins.joined()
        f = len(ins.prefix)
        g = t.guard
        if g is None:
            yield widened, f
            continue
        q = g.quantifier
        if q.universal:
            if q.left and any(e.state not in g.witnesses for e in ins.prefix):
                continue
            if q.right and any(e.state not in g.witnesses for e in ins.suffix):
                continue
            zero = C.zero_on(n, (s for s in range(n) if s not in g.witnesses))
            restricted = _restrict(widened, f, zero, q.left, q.right)
            if restricted is not None:
                yield restricted, f
            continue
        for p in sorted(g.witnesses):
            if q.left:
                for ins2 in insert_positions(p, widened, n, 0, f):
                    w2 = ins2.joined()
                    yield w2, (f + 1 if len(w2) > len(widened) else f)
            if q.right:
                for ins2 in insert_positions(p, widened, n, f + 1, len(widened)):
                    yield ins2.joined(), f


def post_word(phi: CountedWord, t: Transition, n: int) -> list[CountedWord]:
    """Strengthened words denoting exactly the ``t``-successors of ``phi``."""
    out = []
    for widened, f in _candidates(phi, t, n):
        fired = _fire(widened, f, t.source, t.target)
        if fired is None or not is_well_formed(fired, n):
            continue
        out.append(strengthen(fired))
    return minimize(out)


def pre_word(phi: CountedWord, t: Transition, n: int) -> list[CountedWord]:
    """Strengthened words denoting exactly the ``t``-predecessors of ``phi``."""
    return post_word(phi, t.reversed(), n)
