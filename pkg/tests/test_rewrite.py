import random

import pytest
from hypothesis import given, settings, strategies as st

from igcert import rewrite
from igcert.rewrite import (
    CONTRACT,
    EXPAND,
    Budget,
    BudgetError,
    EndpointMismatch,
    PatternMismatch,
    Proved,
    Refuted,
    Transition,
    TransitionPath,
    Unknown,
    apply_transition,
    concat,
    embed,
    eval_image,
    greedy_reduce,
    identity_path,
    invert,
    neighbors,
    path_valid,
    prove_equiv,
    replay_path,
)


def random_walk(E, rng, start, steps, max_len=9):
    w, path = tuple(start), []
    for _ in range(steps):
        moves = neighbors(E, w, max_len)
        t, w = rng.choice(moves)
        path.append(t)
    return TransitionPath(tuple(start), tuple(path))


def test_neighbors_singleton_expansions_only():
    from igcert.biorder import extract_biorder
    from igcert.semigroup import from_table

    E = extract_biorder(from_table([[0]]))
    assert neighbors(E, (0,)) == [(Transition(0, EXPAND, (0, 0, 0)), (0, 0))]


def test_neighbors_right_zero(rz):
    moves = neighbors(rz, (0, 1))
    assert (Transition(0, CONTRACT, (0, 1, 1)), (1,)) in moves
    assert moves[0][0].kind == CONTRACT


def test_neighbors_band(band):
    moves = neighbors(band, (0, 3))
    assert all(t.kind == EXPAND for t, _ in moves)
    assert {t.pos for t, _ in moves} == {0, 1}


def test_neighbors_respect_max_len(rz):
    assert all(t.kind == CONTRACT for t, _ in neighbors(rz, (0, 1), max_len=2))


def test_apply_transition(rz):
    assert apply_transition(rz, (0, 1), Transition(0, CONTRACT, (0, 1, 1))) == (1,)
    assert apply_transition(rz, (1,), Transition(0, EXPAND, (0, 1, 1))) == (0, 1)
    with pytest.raises(PatternMismatch):
        apply_transition(rz, (0, 1), Transition(0, CONTRACT, (1, 0, 0)))


def test_apply_checks_the_product(band):
    # syntactically fine, but (1,1)(2,2) is not a basic pair
    with pytest.raises(PatternMismatch):
        apply_transition(band, (0, 3), Transition(0, CONTRACT, (0, 3, 1)))


def test_replay(rz):
    assert replay_path(rz, identity_path((0, 1))) == (0, 1)
    p = TransitionPath((0, 1), (Transition(0, CONTRACT, (0, 1, 1)), Transition(0, EXPAND, (0, 1, 1))))
    assert replay_path(rz, p) == (0, 1)
    bad = TransitionPath((0, 1), (p.steps[0], Transition(3, EXPAND, (0, 1, 1)), p.steps[1]))
    with pytest.raises(PatternMismatch) as info:
        replay_path(rz, bad)
    assert info.value.step == 1


def test_eval_image(rz):
    assert eval_image(rz, (0,)) == rz.to_source[0]
    assert eval_image(rz, (0, 1)) == rz.to_source[1]


def test_prove_equiv_examples(rz, band):
    v = prove_equiv(rz, (0, 1), (0, 1))
    assert isinstance(v, Proved) and v.path.steps == ()
    v = prove_equiv(rz, (0, 1), (1,))
    assert isinstance(v, Proved) and len(v.path) == 1
    assert prove_equiv(band, (0,), (3,)) == Refuted(band.to_source[0], band.to_source[3])


def test_prove_equiv_unknown_on_small_budget(band):
    # (1,1)(2,2) and (1,2) share an image but lie in different classes of IG(E)
    v = prove_equiv(band, (0, 3), (1,), Budget(max_nodes=500))
    assert isinstance(v, Unknown)
    assert v.max_len == 2 * 2 + 8


def test_budget_errors(rz):
    with pytest.raises(BudgetError):
        prove_equiv(rz, (0,), (1,), Budget(max_nodes=0))
    with pytest.raises(BudgetError):
        prove_equiv(rz, (0, 1, 0), (0,), Budget(max_len=2))


def test_path_algebra(rz):
    p = TransitionPath((0, 1), (Transition(0, CONTRACT, (0, 1, 1)),))
    q = invert(p)
    assert q == TransitionPath((1,), (Transition(0, EXPAND, (0, 1, 1)),))
    assert replay_path(rz, concat(p, q)) == (0, 1)
    e = embed(p, left=(1,))
    assert e.start == (1, 0, 1) and e.steps[0].pos == 1
    assert replay_path(rz, e) == (1, 1)
    with pytest.raises(EndpointMismatch):
        concat(p, p)


def test_serialization_round_trip(m2):
    rng = random.Random(3)
    p = random_walk(m2, rng, (1, 2, 3), 25)
    assert TransitionPath.from_dict(p.as_dict()) == p
    assert set(p.as_dict()) == {"start", "steps"}
    assert set(p.as_dict()["steps"][0]) == {"pos", "kind", "triple"}


def test_greedy_reduce(m2):
    rng = random.Random(11)
    for _ in range(200):
        w = tuple(rng.randrange(m2.size) for _ in range(rng.randint(1, 7)))
        p = greedy_reduce(m2, w)
        end = replay_path(m2, p)
        assert all(not m2.defined(a, b) for a, b in zip(end, end[1:]))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(0, 40))
def test_random_paths_preserve_image(corpus, seed, n):
    rng = random.Random(seed)
    for E in corpus.values():
        start = tuple(rng.randrange(E.size) for _ in range(rng.randint(1, 4)))
        p = random_walk(E, rng, start, n)
        w = p.start
        for t in p.steps:
            w = apply_transition(E, w, t)
            assert eval_image(E, w) == eval_image(E, start)
        assert path_valid(E, invert(p), p.end, start)


def test_proved_paths_replay(m2):
    rng = random.Random(5)
    for _ in range(40):
        w1 = tuple(rng.randrange(m2.size) for _ in range(rng.randint(1, 4)))
        w2 = random_walk(m2, rng, w1, rng.randint(0, 12)).end
        v = prove_equiv(m2, w1, w2)
        if isinstance(v, Proved):
            assert path_valid(m2, v.path, w1, w2)
        else:
            assert isinstance(v, Unknown)


def test_engines_agree(m2, band):
    rng = random.Random(9)
    for E in (m2, band):
        for _ in range(25):
            w1 = tuple(rng.randrange(E.size) for _ in range(rng.randint(2, 4)))
            w2 = tuple(rng.randrange(E.size) for _ in range(rng.randint(2, 4)))
            r1, r2 = greedy_reduce(E, w1).end, greedy_reduce(E, w2).end
            if r1 == r2 or eval_image(E, r1) != eval_image(E, r2):
                continue
            a = rewrite._search(E, r1, r2, 12, 3000, "jit")
            b = rewrite._search(E, r1, r2, 12, 3000, "python")
            assert a == b


def test_search_is_deterministic(m2):
    budget = Budget(max_nodes=20000)
    a = rewrite._search(m2, (1, 6, 1), (1, 6, 1, 6), 14, 20000, "python")
    b = rewrite._search(m2, (1, 6, 1), (1, 6, 1, 6), 14, 20000, "python")
    assert a == b
    assert prove_equiv(m2, (1, 6), (1, 6, 1, 6), budget) == prove_equiv(m2, (1, 6), (1, 6, 1, 6), budget)
