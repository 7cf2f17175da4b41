"""Counters: per-state constraints ``v_q = k`` / ``v_q >= k`` on Parikh images.

An atom is stored as a single int.  A non-negative value ``k`` means
``v_q = k``; a negative value ``~k`` (that is ``-k - 1``) means ``v_q >= k``.
With this encoding ``>= 0`` is ``-1`` and a meet of two lower bounds is a
plain ``min``.  A counter is a tuple of atoms, one per state of the alphabet;
the empty tuple is reserved for the unsatisfiable counter.
"""

from __future__ import annotations

from enum import Enum
from typing import Iterable, NamedTuple, Sequence

Multiset = tuple[int, ...]
Resolution = tuple[int, ...]

# sentinel for an unsatisfiable atom inside the per-state helpers
_BOT = None


class AlphabetMismatch(ValueError):
    pass


class Kind(Enum):
    EQ = "="
    GEQ = ">="


class Atom(NamedTuple):
    kind: Kind
    bound: int

    def encode(self) -> int:
        if self.bound < 0:
            raise ValueError(f"negative bound {self.bound}")
        return self.bound if self.kind is Kind.EQ else ~self.bound


def decode(x: int) -> Atom:
    return Atom(Kind.EQ, x) if x >= 0 else Atom(Kind.GEQ, ~x)


def eq(k: int) -> int:
    return k


def geq(k: int) -> int:
    return ~k


# -- per-atom arithmetic -----------------------------------------------------


def atom_holds(x: int, n: int) -> bool:
    return n == x if x >= 0 else n >= ~x


def atom_meet(x: int, y: int):
    if x >= 0:
        if y >= 0:
            return x if x == y else _BOT
        return x if x >= ~y else _BOT
    if y >= 0:
        return y if y >= ~x else _BOT
    return x if x < y else y


def atom_entails(x: int, y: int) -> bool:
    """True iff atom ``y`` implies atom ``x``."""
    if x >= 0:
        return y == x
    if y >= 0:
        return y >= ~x
    return y <= x


def atom_add(x: int, y: int) -> int:
    if x >= 0 and y >= 0:
        return x + y
    return ~((x if x >= 0 else ~x) + (y if y >= 0 else ~y))


def atom_sub(x: int, y: int):
    """Difference of atoms; the ``Eq(a) - Geq(b), a > b`` case over-approximates."""
    if x >= 0:
        if y >= 0:
            return x - y if x >= y else _BOT
        b = ~y
        if x < b:
            return _BOT
        return 0 if x == b else -1
    if y >= 0:
        d = ~x - y
        return ~d if d > 0 else -1
    return -1


def _sub_is_exact(x: int, y: int) -> bool:
    return not (x >= 0 and y < 0 and x > ~y)


# -- counters ------------------------------------------------------------------


class Counter(tuple):
    """Immutable conjunction of one atom per state.

    Equality and hashing are structural (inherited from ``tuple``).
    """

    __slots__ = ()

    @property
    def is_bottom(self) -> bool:
        return len(self) == 0

    def atom(self, q: int) -> Atom:
        if self.is_bottom:
            raise ValueError("bottom counter has no atoms")
        return decode(self[q])

    def __repr__(self) -> str:
        if self.is_bottom:
            return "Counter(BOTTOM)"
        return f"Counter({render_counter(self)!r})"


BOTTOM = Counter(())


def make(atoms: Iterable[int]) -> Counter:
    """Build a counter from encoded atoms; any unsatisfiable atom collapses it."""
    atoms = tuple(atoms)
    if any(a is None for a in atoms):
        return BOTTOM
    return Counter(atoms)


def from_atoms(atoms: Sequence[Atom]) -> Counter:
    return Counter(a.encode() for a in atoms)


def top(n: int) -> Counter:
    return Counter((-1,) * n)


def exact(m: Sequence[int]) -> Counter:
    """The counter accepting exactly the multiset ``m``."""
    return Counter(m)


def unit(n: int, q: int) -> Counter:
    """``cr_q``: exactly one ``q`` and nothing else."""
    return Counter(1 if i == q else 0 for i in range(n))


def zero_on(n: int, states: Iterable[int]) -> Counter:
    """``0_P``: no occurrence of a state in ``states``, anything else allowed."""
    states = set(states)
    return Counter(0 if i in states else -1 for i in range(n))


def _check(cr: Sequence, other: Sequence) -> None:
    if len(cr) != len(other):
        raise AlphabetMismatch(f"alphabet sizes differ: {len(cr)} vs {len(other)}")


def satisfies(cr: Counter, m: Sequence[int]) -> bool:
    if cr.is_bottom:
        return False
    _check(cr, m)
    for x, n in zip(cr, m):
        if x >= 0:
            if n != x:
                return False
        elif n < ~x:
            return False
    return True


def meet_counter(cr: Counter, other: Counter) -> Counter:
    if cr.is_bottom or other.is_bottom:
        return BOTTOM
    _check(cr, other)
    out = []
    for x, y in zip(cr, other):
        z = atom_meet(x, y)
        if z is None:
            return BOTTOM
        out.append(z)
    return Counter(out)


def entails_counter(cr: Counter, other: Counter) -> bool:
    """``cr ⊑ other``: every multiset accepted by ``other`` is accepted by ``cr``."""
    if other.is_bottom:
        return True
    if cr.is_bottom:
        return False
    _check(cr, other)
    for x, y in zip(cr, other):
        if x >= 0:
            if y != x:
                return False
        elif y >= 0:
            if y < ~x:
                return False
        elif y > x:
            return False
    return True


def sum_counter(cr: Counter, other: Counter) -> Counter:
    if cr.is_bottom or other.is_bottom:
        return BOTTOM
    _check(cr, other)
    return Counter(atom_add(x, y) for x, y in zip(cr, other))


def diff_counter_flagged(cr: Counter, other: Counter) -> tuple[Counter, bool]:
    """Difference plus a flag telling whether the result over-approximates."""
    if cr.is_bottom or other.is_bottom:
        return BOTTOM, False
    _check(cr, other)
    out = []
    approx = False
    for x, y in zip(cr, other):
        z = atom_sub(x, y)
        if z is None:
            return BOTTOM, False
        if not _sub_is_exact(x, y):
            approx = True
        out.append(z)
    return Counter(out), approx


def diff_counter(cr: Counter, other: Counter) -> Counter:
    return diff_counter_flagged(cr, other)[0]


def precision(cr: Counter) -> Multiset:
    if cr.is_bottom:
        raise ValueError("precision of the bottom counter is undefined")
    return tuple(x + 1 if x >= 0 else 0 for x in cr)


def context(cr: Counter) -> frozenset[int]:
    if cr.is_bottom:
        raise ValueError("context of the bottom counter is undefined")
    return frozenset(i for i, x in enumerate(cr) if x < 0)


def relax_counter(cr: Counter, rho: Sequence[int]) -> Counter:
    if cr.is_bottom:
        raise ValueError("cannot relax the bottom counter")
    _check(cr, rho)
    return Counter(x if x < 0 or x < r else ~x for x, r in zip(cr, rho))


def add_unit(cr: Counter, q: int) -> Counter:
    """``cr ⊕ cr_q``."""
    if cr.is_bottom:
        return cr
    x = cr[q]
    lst = list(cr)
    lst[q] = x + 1 if x >= 0 else x - 1
    return Counter(lst)


def sub_unit(cr: Counter, q: int) -> Counter:
    """``cr ⊖ cr_q`` (always exact)."""
    if cr.is_bottom:
        return cr
    x = cr[q]
    lst = list(cr)
    if x >= 0:
        if x == 0:
            return BOTTOM
        lst[q] = x - 1
    elif x < -1:
        lst[q] = x + 1
    return Counter(lst)


def shift(cr: Counter, add: int, sub: int) -> Counter:
    """``cr ⊕ cr_add ⊖ cr_sub``."""
    if add == sub:
        return cr
    return sub_unit(add_unit(cr, add), sub)


def multiset_leq(m: Sequence[int], other: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(m, other))


def render_counter(cr: Counter, names: Sequence[str] | None = None) -> str:
    """Comma-separated atoms, ``>=0`` atoms omitted; ``false`` for bottom."""
    if cr.is_bottom:
        return "false"
    parts = []
    for i, x in enumerate(cr):
        name = names[i] if names is not None else f"#{i}"
        if x >= 0:
            parts.append(f"{name}={x}")
        elif x != -1:
            parts.append(f"{name}>={~x}")
    return ", ".join(parts)
