"""Reachability checking with refinement of the relaxation.

``check_reachability`` explores relaxed successors until it either saturates
or finds a word meeting the target set.  ``analyze_trace`` replays such a
trace exactly, backwards, and either produces a concrete run or a stronger
resolution.  ``verify`` loops the two.
"""

from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

from . import counters as C
from .meet import meet_sets, meets
from .separation import xi
from .system import ParameterizedSystem, Transition, post_word, pre_word, step_concrete
from .words import Configuration, CountedWord, entails_word, is_subword, models, relax_word


class Direction(Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


class TraceError(ValueError):
    """A trace that does not satisfy the trace invariant."""


@dataclass(frozen=True)
class Trace:
    """Alternating ``e0 t1 e1 ... em``; ``steps`` holds ``(t_i, e_i)`` for ``i >= 1``."""

    start: CountedWord
    steps: tuple[tuple[str, CountedWord], ...] = ()

    @property
    def words(self) -> list[CountedWord]:
        return [self.start] + [e for _, e in self.steps]

    @property
    def transitions(self) -> list[str]:
        return [t for t, _ in self.steps]

    def __len__(self) -> int:
        return len(self.steps)

    def key(self) -> tuple:
        """Shape used to detect repeated traces: bases and transition ids."""
        return (self.start.base,) + tuple((t, e.base) for t, e in self.steps)

    def render(self, system: ParameterizedSystem) -> str:
        lines = [f"  {system.render(self.start)}"]
        for t, e in self.steps:
            lines.append(f"  --{t}--> {system.render(e)}")
        return "\n".join(lines)


class _Node:
    __slots__ = ("word", "tid", "parent")

    def __init__(self, word, tid=None, parent=None):
        self.word = word
        self.tid = tid
        self.parent = parent

    def trace(self) -> Trace:
        steps = []
        node = self
        while node.parent is not None:
            steps.append((node.tid, node.word))
            node = node.parent
        steps.reverse()
        return Trace(node.word, tuple(steps))


@dataclass
class Stats:
    steps: int = 0
    words: int = 0
    seconds: float = 0.0


@dataclass
class Unreachable:
    stats: Stats


@dataclass
class TraceFound:
    trace: Trace
    stats: Stats


@dataclass
class BudgetExhausted:
    stats: Stats


@dataclass
class Reachable:
    trace: Trace
    run: list[tuple[Configuration, str]]


@dataclass
class Wiring:
    """Direction-specific roles: exploration goes from ``source`` with ``step``."""

    source: tuple[CountedWord, ...]
    target: tuple[CountedWord, ...]
    step: Callable[[CountedWord, Transition, int], list[CountedWord]]
    back: Callable[[CountedWord, Transition, int], list[CountedWord]]


def wiring(system: ParameterizedSystem, direction: Direction) -> Wiring:
    if direction is Direction.FORWARD:
        return Wiring(system.init_set, system.bad_set, post_word, pre_word)
    return Wiring(system.bad_set, system.init_set, pre_word, post_word)


class _Antichain:
    """Words kept pairwise incomparable under entailment, bucketed by base.

    An entailing word's base is a subword of the entailed word's base, so a
    subsumption query only visits the buckets of the query's subwords.
    """

    def __init__(self, n: int):
        self.n = n
        self.items: dict[Configuration, set[CountedWord]] = {}

    def __len__(self) -> int:
        return sum(len(b) for b in self.items.values())

    def subsumed(self, word: CountedWord) -> bool:
        base = word.base
        for sub in _subwords(base):
            bucket = self.items.get(sub)
            if bucket and any(entails_word(old, word) for old in bucket):
                return True
        return False

    def evict(self, word: CountedWord) -> list[CountedWord]:
        gone = []
        base = word.base
        for other_base, bucket in self.items.items():
            if len(other_base) < len(base) or not is_subword(base, other_base):
                continue
            for old in [o for o in bucket if entails_word(word, o)]:
                bucket.discard(old)
                gone.append(old)
        return gone

    def add(self, word: CountedWord) -> None:
        self.items.setdefault(word.base, set()).add(word)

    def __contains__(self, word: CountedWord) -> bool:
        return word in self.items.get(word.base, ())


def _subwords(base: Configuration) -> set[Configuration]:
    out = {()}
    for q in base:
        out |= {s + (q,) for s in out}
    return out


def check_reachability(
    system: ParameterizedSystem,
    rho: Sequence[int],
    direction: Direction = Direction.BACKWARD,
    budget: float | None = None,
) -> Unreachable | TraceFound | BudgetExhausted:
    """Worklist exploration of relaxed successors.

    The worklist pops shorter words first (ties in insertion order).  Short
    words are the most general ones, so settling them early lets them evict
    long words before those are expanded.
    """
    n = system.n
    w = wiring(system, direction)
    start = time.monotonic()
    stats = Stats()
    seen = _Antichain(n)
    queue: list[tuple[int, int, _Node]] = []
    order = itertools.count()

    def offer(word: CountedWord, node_factory) -> None:
        if seen.subsumed(word):
            return
        seen.evict(word)
        seen.add(word)
        heapq.heappush(queue, (len(word), next(order), node_factory(word)))

    for e in w.source:
        for r in [relax_word(e, rho)]:
            stats.words += 1
            offer(r, _Node)

    while queue:
        if budget is not None and time.monotonic() - start > budget:
            stats.seconds = time.monotonic() - start
            return BudgetExhausted(stats)
        node = heapq.heappop(queue)[2]
        if node.word not in seen:
            continue  # evicted by a weaker word found later
        stats.steps += 1
        if meets([node.word], w.target, n):
            stats.seconds = time.monotonic() - start
            return TraceFound(node.trace(), stats)
        for t in system.transitions:
            for e in w.step(node.word, t, n):
                r = relax_word(e, rho)
                stats.words += 1
                offer(r, lambda word, t=t: _Node(word, t.id, node))
    stats.seconds = time.monotonic() - start
    return Unreachable(stats)


def analyze_trace(
    system: ParameterizedSystem,
    trace: Trace,
    rho: Sequence[int],
    direction: Direction = Direction.BACKWARD,
) -> Reachable | C.Resolution:
    """Replay ``trace`` exactly; a concrete run or a stronger resolution."""
    n = system.n
    w = wiring(system, direction)
    words = trace.words
    tids = trace.transitions
    current = meet_sets([words[-1]], w.target, n)
    if not current:
        raise TraceError("the last word of the trace does not meet the target set")
    layers = [current]
    for i in range(len(tids) - 1, -1, -1):
        t = system.transition(tids[i])
        pre: list[CountedWord] = []
        for c in current:
            pre.extend(w.back(c, t, n))
        predecessor = meet_sets(pre, [words[i]], n)
        if not predecessor:
            return xi(w.step(words[i], t, n), current, rho, n)
        current = predecessor
        layers.append(current)
    hit = meet_sets(current, w.source, n)
    if not hit:
        return xi(w.source, current, rho, n)
    layers[-1] = hit
    layers.reverse()
    return Reachable(trace, _witness(system, layers, tids, direction))


def _witness(
    system: ParameterizedSystem,
    layers: list[list[CountedWord]],
    tids: list[str],
    direction: Direction,
) -> list[tuple[Configuration, str]]:
    """Concrete run through the exact layers, oriented from the initial state."""
    n = system.n
    c = layers[0][0].base  # a well formed word models its own base
    configs = [c]
    for i, tid in enumerate(tids):
        t = system.transition(tid)
        moves = step_concrete(c, t) if direction is Direction.FORWARD else step_concrete(c, t.reversed())
        nxt = sorted(d for d in moves if any(models(d, phi, n) for phi in layers[i + 1]))
        if not nxt:
            raise TraceError(f"no concrete move for {tid} at step {i + 1}")
        c = nxt[0]
        configs.append(c)
    if direction is Direction.FORWARD:
        return [(configs[0], "")] + [(c, t) for c, t in zip(configs[1:], tids)]
    configs.reverse()
    tids = tids[::-1]
    return [(configs[0], "")] + [(c, t) for c, t in zip(configs[1:], tids)]


def replays(system: ParameterizedSystem, run: list[tuple[Configuration, str]]) -> bool:
    """Does ``run`` start in ``init^k``, follow the transitions and end in a bad
    configuration?"""
    if not run:
        return False
    first = run[0][0]
    if any(q != system.init_state for q in first):
        return False
    for (c, _), (d, tid) in zip(run, run[1:]):
        if d not in step_concrete(c, system.transition(tid)):
            return False
    return any(models(run[-1][0], phi, system.n) for phi in system.bad_set)


# -- refinement loop -------------------------------------------------------------


@dataclass
class Refinement:
    index: int
    resolution: C.Resolution
    outcome: str  # "trace", "unreachable", "reachable", "budget"
    stats: Stats
    trace: Trace | None = None


@dataclass
class Verdict:
    status: str  # "unreachable", "reachable", "budget"
    refinements: list[Refinement] = field(default_factory=list)
    resolution: C.Resolution = ()
    run: list[tuple[Configuration, str]] | None = None
    trace: Trace | None = None

    @property
    def seconds(self) -> float:
        return sum(r.stats.seconds for r in self.refinements)

    def traces(self) -> list[Trace]:
        return [r.trace for r in self.refinements if r.trace is not None]


def verify(
    system: ParameterizedSystem,
    direction: Direction = Direction.BACKWARD,
    rho: Sequence[int] | None = None,
    budget: float | None = 1200.0,
    total_budget: float | None = None,
    max_refinements: int | None = None,
    on_refinement: Callable[[Refinement], None] | None = None,
) -> Verdict:
    """Check, analyse, refine until a definite answer or a budget runs out.

    ``budget`` bounds each exploration, ``total_budget`` the whole run.
    """
    rho = tuple(rho) if rho is not None else (0,) * system.n
    verdict = Verdict("budget", resolution=rho)
    began = time.monotonic()
    index = 0
    while True:
        index += 1
        limit = budget
        if total_budget is not None:
            left = total_budget - (time.monotonic() - began)
            limit = left if limit is None else min(limit, left)
            if limit <= 0:
                return verdict
        result = check_reachability(system, rho, direction, limit)
        if isinstance(result, Unreachable):
            rec = Refinement(index, rho, "unreachable", result.stats)
        elif isinstance(result, BudgetExhausted):
            rec = Refinement(index, rho, "budget", result.stats)
        else:
            t0 = time.monotonic()
            answer = analyze_trace(system, result.trace, rho, direction)
            result.stats.seconds += time.monotonic() - t0
            if isinstance(answer, Reachable):
                rec = Refinement(index, rho, "reachable", result.stats, result.trace)
                verdict.run = answer.run
                verdict.trace = result.trace
            else:
                rec = Refinement(index, rho, "trace", result.stats, result.trace)
        verdict.refinements.append(rec)
        if on_refinement is not None:
            on_refinement(rec)
        if rec.outcome != "trace":
            verdict.status = rec.outcome
            return verdict
        rho = answer
        verdict.resolution = rho
        if max_refinements is not None and index >= max_refinements:
            return verdict
