import random

import numpy as np
import pytest

from cwcheck.modelfile import BUNDLED, bundled
from cwcheck.system import Guard, Quantifier, Transition, post_word, pre_concrete, pre_word, step_concrete
from cwcheck.words import entails_word, is_well_formed, parse_word, strengthen

from fastdenote import ConfigSpace
from helpers import random_word

LENGTH = 4
WORDS_PER_SYSTEM = 200

_spaces: dict[int, ConfigSpace] = {}


def space(n: int) -> ConfigSpace:
    if n not in _spaces:
        _spaces[n] = ConfigSpace(n, LENGTH)
    return _spaces[n]


def image(sp: ConfigSpace, mask: np.ndarray, t: Transition, step) -> np.ndarray:
    out = set()
    for c in sp.members(mask):
        out |= step(c, t)
    return sp.mask_from(out)


@pytest.mark.parametrize("name", BUNDLED)
def test_vectorized_image_matches_step_concrete(name):
    system = bundled(name)
    sp = space(system.n)
    rng = random.Random(name + "image")
    for _ in range(10):
        mask = sp.mask(random_word(rng, system.n, max_base=2, min_base=1))
        for t in system.transitions:
            assert (sp.step_mask(mask, t) == image(sp, mask, t, step_concrete)).all()
            assert (sp.step_mask(mask, t.reversed()) == image(sp, mask, t, pre_concrete)).all()


# -- concrete semantics ----------------------------------------------------------------


def test_guards():
    p = frozenset({0})
    assert Guard(Quantifier.FORALL_L, p).holds((0, 0), (1,))
    assert not Guard(Quantifier.FORALL_LR, p).holds((0, 0), (1,))
    assert Guard(Quantifier.EXISTS_R, p).holds((1,), (1, 0))
    assert not Guard(Quantifier.EXISTS_L, p).holds((1,), (0,))
    assert Guard(Quantifier.FORALL_R, p).holds((1,), ())
    assert not Guard(Quantifier.EXISTS_LR, p).holds((), ())


def test_step_concrete_fires_each_position():
    t = Transition("t", 0, 1)
    assert step_concrete((0, 1, 0), t) == {(1, 1, 0), (0, 1, 1)}
    assert pre_concrete((1, 1, 0), t) == {(0, 1, 0), (1, 0, 0)}
    guarded = Transition("g", 0, 1, Guard(Quantifier.FORALL_L, frozenset({1})))
    assert step_concrete((0, 1, 0), guarded) == {(1, 1, 0)}


# -- bounded exactness of symbolic post and pre -------------------------------------------


@pytest.mark.parametrize("name", BUNDLED)
def test_post_and_pre_are_exact(name):
    system = bundled(name)
    n = system.n
    sp = space(n)
    rng = random.Random(name)
    for _ in range(WORDS_PER_SYSTEM):
        phi = random_word(rng, n, max_base=3, max_bound=2)
        mask = sp.mask(phi)
        for t in system.transitions:
            post = post_word(phi, t, n)
            assert all(is_well_formed(e, n) for e in post)
            assert (sp.mask_of_set(post) == sp.step_mask(mask, t)).all(), (t.id, phi)
            pre = pre_word(phi, t, n)
            assert all(is_well_formed(e, n) for e in pre)
            assert (sp.mask_of_set(pre) == sp.step_mask(mask, t.reversed())).all(), (t.id, phi)


def test_local_pre_on_exact_word():
    names = ("a", "b")
    t = Transition("t", 0, 1)
    phi = parse_word("(a=0, b=0 | b | a=1, b=0) (a=0, b=1 | a | a=0, b=0)", names)
    got = pre_word(phi, t, 2)
    sp = space(2)
    assert (sp.mask_of_set(got) == sp.mask_from({(0, 0)})).all()


def test_post_is_monotone():
    system = bundled("burns")
    n = system.n
    rng = random.Random(8)
    checked = 0
    while checked < 100:
        weak = random_word(rng, n, max_base=2, max_bound=1)
        strong = random_word(rng, n, max_base=3, max_bound=2)
        if not entails_word(weak, strong):
            continue
        checked += 1
        for t in system.transitions:
            for e in post_word(strong, t, n):
                assert any(entails_word(w, e) for w in post_word(weak, t, n))


def test_post_on_upward_words_stays_strengthened():
    system = bundled("burns")
    n = system.n
    for phi in system.bad_set:
        for t in system.transitions:
            for e in pre_word(phi, t, n):
                assert strengthen(e) == e
