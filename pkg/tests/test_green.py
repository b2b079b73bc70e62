import random

import pytest

from igcert.decompose import decompose
from igcert.green import (
    LEFT,
    RIGHT,
    GreenWitness,
    HWitness,
    SideError,
    VerificationError,
    compose_transitive,
    from_path,
    h_from_path,
    idempotent_root,
    invert_witness,
    lemma1_dual_h_witness,
    lemma1_h_witness,
    power,
    reflexive,
    root_letter,
    transport,
    verify_witness,
    witness_from_dict,
    witness_problem,
)
from igcert.rewrite import (
    Budget,
    EndpointMismatch,
    Proved,
    Refuted,
    Transition,
    TransitionPath,
    Unknown,
    eval_image,
    identity_path,
    invert,
    neighbors,
    prove_equiv,
)


def path(E, w1, w2):
    v = prove_equiv(E, w1, w2)
    assert isinstance(v, Proved)
    return v.path


def walk_from_letter(E, rng, steps, max_len=8):
    w, out = (rng.randrange(E.size),), []
    start = w
    for _ in range(steps):
        t, w = rng.choice(neighbors(E, w, max_len))
        out.append(t)
    return TransitionPath(start, tuple(out))


def sample_witnesses(E, rng, count):
    """Genuine R- and L-witnesses, read off decompositions of random paths to a letter."""
    out = []
    while len(out) < count:
        p = invert(walk_from_letter(E, rng, rng.randint(1, 10)))
        d = decompose(E, p.start, p)
        out += [d.lwit, d.rwit]
    return out


def rz_r_witness(rz):
    # [0] R [0,1]: 0.1 is the word 01 itself, and 01.0 ~ 0
    return GreenWitness("R", (0,), (0, 1), (1,), (0,), identity_path((0, 1)), path(rz, (0, 1, 0), (0,)))


def test_reflexive_verifies(rz):
    assert verify_witness(rz, reflexive("R", (0, 1)))
    assert verify_witness(rz, reflexive("L", (1,)))


def test_right_zero_r_witness(rz):
    w = rz_r_witness(rz)
    assert verify_witness(rz, w)
    assert verify_witness(rz, invert_witness(w))
    assert witness_from_dict(w.as_dict()) == w


def test_corrupted_witness_rejected(rz):
    w = rz_r_witness(rz)
    step = w.bwd_proof.steps[0]
    broken = TransitionPath(w.bwd_proof.start, (Transition(step.pos + 1, step.kind, step.triple),) + w.bwd_proof.steps[1:])
    bad = GreenWitness(w.kind, w.a, w.b, w.fwd_mult, w.bwd_mult, w.fwd_proof, broken)
    assert not verify_witness(rz, bad)
    assert "backward" in witness_problem(rz, bad)
    wrong_mult = GreenWitness(w.kind, w.a, w.b, (0,), w.bwd_mult, w.fwd_proof, w.bwd_proof)
    assert not verify_witness(rz, wrong_mult)


def test_transport_reflexive():
    w = transport(reflexive("L", (0,)), (1, 0), RIGHT)
    assert (w.a, w.b) == ((0, 1, 0), (0, 1, 0))
    assert w.fwd_mult == () and w.bwd_mult == ()


def test_transport_side_errors(rz):
    with pytest.raises(SideError):
        transport(reflexive("L", (0,)), (1,), LEFT)
    with pytest.raises(SideError):
        transport(rz_r_witness(rz), (1,), RIGHT)


def test_transport_keeps_multipliers(rz):
    w = rz_r_witness(rz)
    t = transport(w, (1, 1), LEFT)
    assert (t.fwd_mult, t.bwd_mult) == (w.fwd_mult, w.bwd_mult)
    assert (t.a, t.b) == ((1, 1, 0), (1, 1, 0, 1))
    assert verify_witness(rz, t)


def test_transport_random_witnesses(corpus):
    rng = random.Random(21)
    for E in corpus.values():
        for w in sample_witnesses(E, rng, 30):
            assert verify_witness(E, w)
            x = tuple(rng.randrange(E.size) for _ in range(rng.randint(0, 3)))
            side = RIGHT if w.kind == "L" else LEFT
            assert verify_witness(E, transport(w, x, side))


def test_compose(rz):
    w = rz_r_witness(rz)
    same = compose_transitive(reflexive("R", (0,)), w)
    assert (same.a, same.b, same.fwd_mult, same.bwd_mult) == (w.a, w.b, w.fwd_mult, w.bwd_mult)
    assert verify_witness(rz, same)
    # [0] R [0,1] R [0]: a two-hop chain back to the start
    loop = compose_transitive(w, invert_witness(w))
    assert (loop.a, loop.b) == ((0,), (0,))
    assert verify_witness(rz, loop)


def test_compose_with_bridge(rz):
    w = rz_r_witness(rz)
    bridge = path(rz, (0, 1), (1,))
    target = from_path("R", path(rz, (1,), (0, 1)))
    c = compose_transitive(w, target, bridge)
    assert (c.a, c.b) == ((0,), (0, 1)) and verify_witness(rz, c)


def test_compose_mismatch(rz):
    with pytest.raises(EndpointMismatch):
        compose_transitive(rz_r_witness(rz), reflexive("R", (1,)))
    with pytest.raises(EndpointMismatch):
        compose_transitive(reflexive("R", (0,)), reflexive("L", (0,)))


def test_h_witness_checks_both_parts(rz):
    h = h_from_path(path(rz, (0, 1), (1,)))
    assert isinstance(h, HWitness) and verify_witness(rz, h)
    assert witness_from_dict(h.as_dict()) == h
    mixed = HWitness(h.r, reflexive("L", (0, 1)))
    assert witness_problem(rz, mixed) == "R and L parts relate different pairs"


def test_lemma1_trivial(rz):
    rho = identity_path((1,))
    h = lemma1_h_witness(rz, (1,), 1, 1, 1, reflexive("R", (1,)), rho)
    assert verify_witness(rz, h) and (h.a, h.b) == ((1,), (1,))


def test_lemma1_right_zero(rz):
    w = (0, 1)
    for p in range(1, 4):
        for q in range(p, 5):
            rwit = from_path("R", path(rz, power(w, p), (1,)))
            rho = path(rz, power(w, q), (1,))
            for h in (
                lemma1_h_witness(rz, w, p, q, 1, rwit, rho),
                lemma1_dual_h_witness(rz, w, p, q, 1, from_path("L", rwit.fwd_proof), rho),
            ):
                assert verify_witness(rz, h)
                assert (h.a, h.b) == (power(w, p), (1,))


def test_lemma1_nontrivial_multipliers(rz):
    # with p < q the L-part carries w^(q-p) forward and w^p backward
    w = (1, 0)
    rwit = GreenWitness("R", w, (0,), (), (), path(rz, w, (0,)), path(rz, (0,), w))
    h = lemma1_h_witness(rz, w, 1, 2, 0, rwit, path(rz, power(w, 2), (0,)))
    assert verify_witness(rz, h)
    assert h.l.fwd_mult == w and h.l.bwd_mult == w


def test_lemma1_rejects_bad_input(rz):
    rwit = reflexive("R", (1,))
    with pytest.raises(ValueError):
        lemma1_h_witness(rz, (1,), 2, 1, 1, rwit, identity_path((1,)))
    with pytest.raises(VerificationError):
        lemma1_h_witness(rz, (1,), 1, 2, 1, rwit, identity_path((1,)))


def test_idempotent_root_examples(rz, band, m2):
    v = idempotent_root(rz, (0,))
    assert isinstance(v, Proved) and v.path.steps == ()
    v = idempotent_root(rz, (0, 1))
    assert root_letter(v) == 1
    assert isinstance(idempotent_root(band, (0, 3), Budget(max_nodes=1000)), Unknown)
    # a word over M2(GF2) whose image is a non-idempotent matrix
    w = next(
        (a, b) for a in range(m2.size) for b in range(m2.size)
        if m2.source.mul(eval_image(m2, (a, b)), eval_image(m2, (a, b))) != eval_image(m2, (a, b))
    )
    x = eval_image(m2, w)
    assert idempotent_root(m2, w) == Refuted(x, m2.source.mul(x, x))


def test_idempotent_root_letter_has_the_image(m2):
    rng = random.Random(4)
    for _ in range(100):
        w = tuple(rng.randrange(m2.size) for _ in range(rng.randint(1, 4)))
        v = idempotent_root(m2, w)
        if isinstance(v, Proved):
            e = root_letter(v)
            assert m2.to_source[e] == eval_image(m2, w)
            assert v.path.start == w and v.path.end == (e,)
