"""Line-oriented model files.

::

    system burns
    state q(1:0) q(2:0)
    init q(1:0)
    transition t4: q(2:0) -> q(3:0) forall_l {q(1:0), q(2:0), q(3:0)}
    bad q(6:1) q(6:1)
    badword (true | q(6:1) | true) (q(6:1)>=1 | q(6:1) | true)

``#`` starts a comment.  ``bad`` gives a base word whose upward closure is
bad; ``badword``/``initword`` give explicit counted words in the rendering
used by traces.  Without ``initword`` lines the initial set is the single word
denoting ``init+``.
"""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path

from . import counters as C
from .system import Guard, ParameterizedSystem, Quantifier, Transition
from .words import CountedWord, Entry, is_well_formed, parse_word, strengthen, upward_word

BUNDLED = ("burns", "szymanski_compact", "szymanski", "gribomont_zenner")


class ModelError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


_TRANSITION_RE = re.compile(
    r"^transition\s+(?P<id>[^\s:]+)\s*:\s*(?P<src>\S+)\s*->\s*(?P<dst>[^\s{]+)"
    r"(?:\s+(?P<quant>\w+)\s*\{(?P<wit>[^}]*)\})?\s*$"
)


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def initial_word(n: int, init: int) -> CountedWord:
    """``(cr_i, init, cr_i)`` with ``cr_i`` allowing only ``init``: denotes ``init+``."""
    cr = C.Counter(-1 if q == init else 0 for q in range(n))
    return CountedWord((Entry(cr, init, cr),))


def parse_model(text: str, name: str = "") -> ParameterizedSystem:
    states: list[str] = []
    init: str | None = None
    raw_transitions = []
    bad_bases = []
    bad_words = []
    init_words = []
    system_name = name
    saw_content = False

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        saw_content = True
        column = len(line) - len(line.lstrip()) + 1
        line = line.strip()
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "system":
            system_name = rest
        elif keyword == "state":
            if not rest:
                raise ModelError("'state' needs at least one name", lineno, column)
            for s in rest.split():
                if s in states:
                    raise ModelError(f"state {s!r} declared twice", lineno, column)
                states.append(s)
        elif keyword == "init":
            if not rest or len(rest.split()) != 1:
                raise ModelError("'init' takes exactly one state", lineno, column)
            init = rest
        elif keyword == "transition":
            m = _TRANSITION_RE.match(line)
            if not m:
                raise ModelError("malformed transition", lineno, column)
            raw_transitions.append((m, lineno, column))
        elif keyword == "bad":
            if not rest:
                raise ModelError("'bad' needs a base word", lineno, column)
            bad_bases.append((rest.split(), lineno, column))
        elif keyword == "badword":
            bad_words.append((rest, lineno, column))
        elif keyword == "initword":
            init_words.append((rest, lineno, column))
        else:
            raise ModelError(f"unknown keyword {keyword!r}", lineno, column)

    if not saw_content:
        raise ModelError("empty model", 1, 1)
    if not states:
        raise ModelError("no states declared")
    if init is None:
        raise ModelError("no initial state")
    index = {s: i for i, s in enumerate(states)}
    if init not in index:
        raise ModelError(f"undeclared initial state {init!r}")
    n = len(states)

    def lookup(s: str, lineno: int, column: int) -> int:
        if s not in index:
            raise ModelError(f"undeclared state {s!r}", lineno, column)
        return index[s]

    transitions = []
    seen_ids = set()
    for m, lineno, column in raw_transitions:
        tid = m.group("id")
        if tid in seen_ids:
            raise ModelError(f"duplicate transition id {tid!r}", lineno, column)
        seen_ids.add(tid)
        guard = None
        if m.group("quant"):
            try:
                quant = Quantifier(m.group("quant").lower())
            except ValueError:
                raise ModelError(f"unknown quantifier {m.group('quant')!r}", lineno, column)
            wit = [w.strip() for w in m.group("wit").split(",") if w.strip()]
            guard = Guard(quant, frozenset(lookup(w, lineno, column) for w in wit))
        transitions.append(
            Transition(
                tid,
                lookup(m.group("src"), lineno, column),
                lookup(m.group("dst"), lineno, column),
                guard,
            )
        )

    bad_set = []
    for base, lineno, column in bad_bases:
        bad_set.append(upward_word([lookup(s, lineno, column) for s in base], n))
    for text_word, lineno, column in bad_words + init_words:
        try:
            phi = parse_word(text_word, states)
        except ValueError as exc:
            raise ModelError(str(exc), lineno, column) from None
        if not is_well_formed(phi, n):
            raise ModelError("counted word is not well formed", lineno, column)
    bad_set += [strengthen(parse_word(t, states)) for t, _, _ in bad_words]
    if not bad_set:
        raise ModelError("at least one bad pattern is required")
    if init_words:
        init_set = [strengthen(parse_word(t, states)) for t, _, _ in init_words]
    else:
        init_set = [initial_word(n, index[init])]

    return ParameterizedSystem(
        states=tuple(states),
        transitions=tuple(transitions),
        init_state=index[init],
        init_set=tuple(init_set),
        bad_set=tuple(bad_set),
        name=system_name,
    )


def load_model(path: str | Path) -> ParameterizedSystem:
    path = Path(path)
    return parse_model(path.read_text(encoding="utf-8"), name=path.stem)


def bundled_text(name: str) -> str:
    return resources.files("cwcheck.models").joinpath(f"{name}.model").read_text(encoding="utf-8")


def bundled(name: str) -> ParameterizedSystem:
    if name not in BUNDLED and not name.startswith("burns_"):
        raise KeyError(f"no bundled model {name!r}")
    return parse_model(bundled_text(name), name=name)


def resolve_model(spec: str) -> ParameterizedSystem:
    """A path to a model file, or the name of a bundled model."""
    path = Path(spec)
    if path.exists():
        return load_model(path)
    try:
        return bundled(spec.removesuffix(".model"))
    except (KeyError, FileNotFoundError):
        raise ModelError(f"no such model file or bundled model: {spec}") from None
