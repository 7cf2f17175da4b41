"""Choosing a stronger resolution that rules out a spurious intersection.

``augzip`` replays the shuffle search of :func:`cwcheck.meet.zip_words` on a
relaxed word while keeping the unrelaxed word alongside, and records which
threshold increases would have made each successful test fail.  The result is
a positive and/or formula over atoms ``v_q > k``; any resolution satisfying it
keeps the relaxed meet empty.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import counters as C
from .meet import meets
from .words import CountedWord, Entry, is_well_formed, precision_word, relax_word


class SeparationError(ValueError):
    """The inputs do not describe a spurious intersection."""


# -- avoid formulas ------------------------------------------------------------


class AvoidFormula:
    __slots__ = ()

    def holds(self, rho: Sequence[int]) -> bool:
        return _holds(self, rho, {})


@dataclass(frozen=True)
class _Const(AvoidFormula):
    value: bool

    def __repr__(self) -> str:
        return "true" if self.value else "false"


TRUE = _Const(True)
FALSE = _Const(False)


@dataclass(frozen=True)
class Atom(AvoidFormula):
    """``v_state > bound``."""

    state: int
    bound: int

    def __repr__(self) -> str:
        return f"v{self.state}>{self.bound}"


class _Junction(AvoidFormula):
    __slots__ = ("parts", "_hash")
    _sep = ""

    def __init__(self, parts: frozenset):
        self.parts = parts
        self._hash = hash((type(self).__name__, parts))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return (
            type(other) is type(self)
            and other._hash == self._hash
            and (other is self or other.parts == self.parts)
        )

    def __repr__(self) -> str:
        return "(" + self._sep.join(sorted(map(repr, self.parts))) + ")"


class And(_Junction):
    __slots__ = ()
    _sep = " & "


class Or(_Junction):
    __slots__ = ()
    _sep = " | "


def conj(parts: Iterable[AvoidFormula]) -> AvoidFormula:
    flat = set()
    for p in parts:
        if p is FALSE or p == FALSE:
            return FALSE
        if p == TRUE:
            continue
        if isinstance(p, And):
            flat |= p.parts
        else:
            flat.add(p)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return next(iter(flat))
    return And(frozenset(flat))


def disj(parts: Iterable[AvoidFormula]) -> AvoidFormula:
    flat = set()
    for p in parts:
        if p == TRUE:
            return TRUE
        if p == FALSE:
            continue
        if isinstance(p, Or):
            flat |= p.parts
        else:
            flat.add(p)
    if not flat:
        return FALSE
    if len(flat) == 1:
        return next(iter(flat))
    # atoms on the same state: the weakest one subsumes the others
    atoms: dict[int, int] = {}
    rest = set()
    for p in flat:
        if isinstance(p, Atom):
            atoms[p.state] = min(atoms.get(p.state, p.bound), p.bound)
        else:
            rest.add(p)
    flat = rest | {Atom(q, k) for q, k in atoms.items()}
    if len(flat) == 1:
        return next(iter(flat))
    return Or(frozenset(flat))


def _holds(f: AvoidFormula, rho: Sequence[int], memo: dict) -> bool:
    if isinstance(f, Atom):
        return rho[f.state] > f.bound
    if isinstance(f, _Const):
        return f.value
    key = id(f)
    if key in memo:
        return memo[key]
    if isinstance(f, And):
        out = all(_holds(p, rho, memo) for p in f.parts)
    else:
        out = any(_holds(p, rho, memo) for p in f.parts)
    memo[key] = out
    return out


# -- reasons -------------------------------------------------------------------


def reasons_context(q: int, cr: C.Counter) -> AvoidFormula:
    """Threshold that keeps ``q`` out of the relaxed context of ``cr``."""
    x = cr[q]
    if x < 0:
        return FALSE
    return Atom(q, x + 1)


def reasons_meet(cr: C.Counter, other: C.Counter) -> AvoidFormula:
    """Thresholds that would keep the failing atoms of ``cr ⊓ other`` exact."""
    failing = []
    for q, (x, y) in enumerate(zip(cr, other)):
        if C.atom_meet(x, y) is None:
            failing.append(Atom(q, x + 1 if x >= 0 else 0))
    return disj(failing)


# -- augzip --------------------------------------------------------------------


def augzip(
    relaxed: CountedWord, exact: CountedWord, other: CountedWord, n: int, collect: bool = True
) -> tuple[set[CountedWord], AvoidFormula]:
    """Shuffle ``relaxed`` with ``other`` and build the avoid formula.

    ``exact`` is the word before relaxation and must have the same length as
    ``relaxed``.  A completed shuffle that is not well formed contributes
    ``true``: it stays ill formed under any stronger resolution.
    """
    if len(relaxed) != len(exact):
        raise SeparationError("relaxed and exact words differ in length")
    top = C.top(n)
    a, b = len(relaxed), len(other)
    memo: dict[tuple, tuple[frozenset, AvoidFormula]] = {}

    def go(z: tuple, i: int, j: int) -> tuple[frozenset, AvoidFormula]:
        key = (z, i, j)
        if key in memo:
            return memo[key]
        if i == a and j == b:
            zw = CountedWord(z)
            if is_well_formed(zw, n):
                out = (frozenset([zw]) if collect else frozenset(), FALSE)
            else:
                out = (frozenset(), TRUE)
            memo[key] = out
            return out
        found: set[CountedWord] = set()
        avoid: list[AvoidFormula] = []
        if i < a:
            h = relaxed[i]
            rp = other[j - 1].right if j > 0 else top
            ls = other[j].left if j < b else top
            if rp[h.state] < 0 and ls[h.state] < 0:
                c, v = go(z + (h,), i + 1, j)
                found |= c
                avoid.append(v)
            if j < b:
                h2 = other[j]
                if h.state == h2.state:
                    ml = C.meet_counter(h.left, h2.left)
                    mr = C.meet_counter(h.right, h2.right)
                    if not ml.is_bottom and not mr.is_bottom:
                        c, v = go(z + (Entry(ml, h.state, mr),), i + 1, j + 1)
                        found |= c
                        hx = exact[i]
                        avoid.append(
                            disj((v, reasons_meet(hx.left, h2.left), reasons_meet(hx.right, h2.right)))
                        )
        if j < b:
            h2 = other[j]
            rp = relaxed[i - 1].right if i > 0 else top
            ls = relaxed[i].left if i < a else top
            if rp[h2.state] < 0 and ls[h2.state] < 0:
                c, v = go(z + (h2,), i, j + 1)
                found |= c
                xp = exact[i - 1].right if i > 0 else top
                xs = exact[i].left if i < a else top
                avoid.append(
                    disj((v, reasons_context(h2.state, xp), reasons_context(h2.state, xs)))
                )
        out = (frozenset(found), conj(avoid))
        memo[key] = out
        return out

    found, avoid = go((), 0, 0)
    return set(found), avoid


# -- solving -------------------------------------------------------------------


def _cost(f: AvoidFormula, rho: Sequence[int], memo: dict) -> float:
    """Cheap estimate of the total threshold increase needed to satisfy ``f``."""
    if isinstance(f, Atom):
        return max(0, f.bound + 1 - rho[f.state])
    if isinstance(f, _Const):
        return 0 if f.value else float("inf")
    key = id(f)
    if key not in memo:
        costs = [_cost(p, rho, memo) for p in f.parts]
        memo[key] = sum(costs) if isinstance(f, And) else min(costs)
    return memo[key]


def solve_avoid(
    f: AvoidFormula, n: int, start: Sequence[int] | None = None
) -> C.Resolution | None:
    """A resolution ``>= start`` satisfying ``f``, or ``None`` if there is none.

    Greedy: conjuncts are satisfied one after the other, and for a disjunction
    that is not yet satisfied the cheapest disjunct is chosen.  The formula is
    monotone, so raising thresholds never breaks an earlier conjunct.
    """
    rho = list(start) if start is not None else [0] * n

    def go(g: AvoidFormula) -> bool:
        if _holds(g, rho, {}):
            return True
        if isinstance(g, Atom):
            rho[g.state] = max(rho[g.state], g.bound + 1)
            return True
        if isinstance(g, _Const):
            return g.value
        if isinstance(g, And):
            for p in sorted(g.parts, key=repr):
                if not go(p):
                    return False
            return True
        memo: dict = {}
        options = sorted(g.parts, key=lambda p: (_cost(p, rho, memo), repr(p)))
        for p in options:
            if _cost(p, rho, {}) == float("inf"):
                break
            saved = rho[:]
            if go(p):
                return True
            rho[:] = saved
        return False

    if not go(f):
        return None
    return tuple(rho)


# -- the separation operator ----------------------------------------------------


def _relaxed_meets(words: Sequence[CountedWord], others: Sequence[CountedWord], rho, n) -> bool:
    return meets([relax_word(e, rho) for e in words], others, n)


def xi(
    words: Iterable[CountedWord],
    others: Iterable[CountedWord],
    rho: Sequence[int],
    n: int,
    check: bool = True,
) -> C.Resolution:
    """Strictly stronger resolution under which the relaxed ``words`` no longer
    meet ``others``.

    Requires that ``words`` and ``others`` do not meet while the relaxation of
    ``words`` under ``rho`` does.  When the formula route fails, every
    threshold is raised above the precision of ``words``, which makes
    relaxation the identity on them.
    """
    words = list(words)
    others = list(others)
    rho = tuple(rho)
    if check:
        if meets(words, others, n):
            raise SeparationError("the exact sets already intersect")
        if not _relaxed_meets(words, others, rho, n):
            raise SeparationError("the relaxed sets do not intersect")
    avoid = []
    for e in words:
        relaxed = relax_word(e, rho)
        for other in others:
            if not meets([relaxed], [other], n):
                continue
            avoid.append(augzip(relaxed, e, other, n, collect=False)[1])
    solved = solve_avoid(conj(avoid), n, rho)
    if solved is not None and solved != rho and not _relaxed_meets(words, others, solved, n):
        return solved
    return fallback(words, rho, n)


def fallback(words: Iterable[CountedWord], rho: Sequence[int], n: int) -> C.Resolution:
    best = list(rho)
    for e in words:
        for q, k in enumerate(precision_word(e, n)):
            best[q] = max(best[q], k)
    return tuple(best)
