import pytest

from cwcheck import oracle
from cwcheck.engine import replays
from cwcheck.modelfile import bundled
from cwcheck.oracle import (
    OracleLimit,
    all_configurations,
    check_goodness,
    denotation_of_set,
    enumerate_denotation,
    explicit_reach,
    explicit_search,
    good_completions,
)
from cwcheck.system import step_concrete
from cwcheck.words import EPSILON, parse_word, strengthen

AB = ("a", "b")
EXAMPLE = parse_word("(a=0 | a | true) (a=1, b=0 | a | a=0)", AB)


def test_all_configurations_counts():
    assert len(list(all_configurations(2, 3))) == 1 + 2 + 4 + 8
    assert list(all_configurations(3, 0)) == [()]


def test_enumeration_limit(monkeypatch):
    monkeypatch.setattr(oracle, "MAX_CONFIGS", 10)
    with pytest.raises(OracleLimit):
        list(all_configurations(2, 3))
    with pytest.raises(OracleLimit):
        explicit_reach(bundled("burns"), 3)


def test_example_denotation():
    assert enumerate_denotation(EXAMPLE, 4, 2) == {(0, 0), (0, 0, 1), (0, 0, 1, 1)}
    assert len(enumerate_denotation(EPSILON, 2, 2)) == 7
    other = parse_word("(true | b | true)", AB)
    both = denotation_of_set([EXAMPLE, other], 3, 2)
    assert both == enumerate_denotation(EXAMPLE, 3, 2) | enumerate_denotation(other, 3, 2)


def test_burns_is_safe_for_small_sizes():
    system = bundled("burns")
    for size in (2, 3):
        reached, bad = explicit_reach(system, size)
        assert not bad
        assert (0,) * size in reached


def test_mutant_reaches_bad_with_replayable_run():
    system = bundled("burns_mutant_t9")
    _, run = explicit_search(system, 2)
    assert run is not None
    assert replays(system, run)
    for (c, _), (d, tid) in zip(run, run[1:]):
        assert d in step_concrete(c, system.transition(tid))


def test_t4_mutant_stays_safe():
    system = bundled("burns_mutant_t4")
    for size in (2, 3, 4):
        assert explicit_reach(system, size) == explicit_reach(bundled("burns"), size)


def test_goodness_of_plain_merge():
    phi = strengthen(parse_word("(true | a | true)", AB))
    assert check_goodness(phi, phi, EPSILON, phi, EPSILON, [0], [0], 2)
    assert not check_goodness(phi, phi, EPSILON, phi, EPSILON, [0], [], 2)
    assert good_completions(phi, EPSILON, 2) == {phi}
