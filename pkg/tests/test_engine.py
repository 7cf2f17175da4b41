import random

import pytest

from cwcheck.engine import (
    BudgetExhausted,
    Direction,
    Reachable,
    Trace,
    TraceError,
    TraceFound,
    Unreachable,
    _Antichain,
    _subwords,
    analyze_trace,
    check_reachability,
    replays,
    verify,
)
from cwcheck.modelfile import bundled
from cwcheck.oracle import explicit_reach
from cwcheck.words import entails_word, exact_word, relax_word

from helpers import random_word

FORWARD, BACKWARD = Direction.FORWARD, Direction.BACKWARD


@pytest.fixture(scope="module")
def burns():
    return bundled("burns")


def test_subwords():
    assert _subwords((0, 1)) == {(), (0,), (1,), (0, 1)}
    assert len(_subwords((0, 0, 0))) == 4


def test_antichain_matches_brute_force():
    rng = random.Random(1)
    chain = _Antichain(2)
    kept = []
    for _ in range(400):
        w = random_word(rng, 2, max_base=3, max_bound=1)
        expect = any(entails_word(old, w) for old in kept)
        assert chain.subsumed(w) == expect
        if expect:
            continue
        gone = set(chain.evict(w))
        assert gone == {old for old in kept if entails_word(w, old)}
        kept = [old for old in kept if old not in gone] + [w]
        chain.add(w)
        assert w in chain and len(chain) == len(kept)


def test_backward_burns_is_unreachable(burns):
    result = check_reachability(burns, (0,) * burns.n, BACKWARD)
    assert isinstance(result, Unreachable)
    assert result.stats.steps > 0 and result.stats.words > 0


def test_forward_first_trace_is_the_relaxed_initial_word(burns):
    result = check_reachability(burns, (0,) * burns.n, FORWARD)
    assert isinstance(result, TraceFound)
    assert len(result.trace) == 0
    assert result.trace.start == relax_word(burns.init_set[0], (0,) * burns.n)


def test_budget_is_enforced(burns):
    result = check_reachability(burns, (0,) * burns.n, FORWARD, budget=-1.0)
    assert isinstance(result, BudgetExhausted)


def test_forward_refinement_raises_critical_threshold(burns):
    rho = (0,) * burns.n
    trace = check_reachability(burns, rho, FORWARD).trace
    new = analyze_trace(burns, trace, rho, FORWARD)
    assert not isinstance(new, Reachable)
    assert new[burns.index("q(6:1)")] >= 1
    assert all(x >= y for x, y in zip(new, rho)) and new != rho


def test_forward_burns_verifies_without_repeating_traces(burns):
    verdict = verify(burns, FORWARD)
    assert verdict.status == "unreachable"
    keys = [t.key() for t in verdict.traces()]
    assert len(keys) == len(set(keys))
    resolutions = [r.resolution for r in verdict.refinements]
    for a, b in zip(resolutions, resolutions[1:]):
        assert all(x <= y for x, y in zip(a, b)) and a != b


def test_mutant_is_reachable_with_replayable_witness():
    system = bundled("burns_mutant_t9")
    verdict = verify(system, BACKWARD)
    assert verdict.status == "reachable"
    assert replays(system, verdict.run)
    assert len(verdict.run[0][0]) <= 5
    reached, bad = explicit_reach(system, len(verdict.run[0][0]))
    assert bad and verdict.run[-1][0] in reached


def test_replays_rejects_broken_runs(burns):
    system = bundled("burns_mutant_t9")
    run = verify(system, BACKWARD).run
    assert not replays(system, [])
    assert not replays(system, run[:-1])
    assert not replays(burns, run)  # the original guards forbid some step


def test_trace_must_end_in_target(burns):
    start = exact_word((burns.index("q(1:0)"),), burns.n)
    with pytest.raises(TraceError):
        analyze_trace(burns, Trace(start), (0,) * burns.n, FORWARD)


def test_trace_rendering(burns):
    trace = check_reachability(burns, (0,) * burns.n, FORWARD).trace
    text = trace.render(burns)
    assert text.strip().startswith("(") and "q(1:0)" in text
    assert trace.words == [trace.start] and trace.transitions == []


def test_max_refinements_stops_early(burns):
    verdict = verify(burns, FORWARD, max_refinements=1)
    assert verdict.status == "budget" and len(verdict.refinements) == 1
    assert verdict.resolution[burns.index("q(6:1)")] >= 1
