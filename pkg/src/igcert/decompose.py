"""Factor a word equal to a letter as ``u f v`` with ``uf L f R fv``.

Given a transition path from ``w`` to a one-letter word, :func:`decompose`
starts from the trivial factorization of the last word and pulls it back one
transition at a time.  Each pull-back only rearranges the witnesses it already
has (transport, composition, and short fixed bridges), so the result is
assembled without any search.
"""
from __future__ import annotations

from dataclasses import dataclass

from .biorder import BiorderedSet, basic_product
from .green import (
    LEFT,
    RIGHT,
    GreenWitness,
    compose_transitive,
    invert_witness,
    reflexive,
    retarget,
    transport,
    witness_from_dict,
    witness_problem,
)
from .rewrite import (
    CONTRACT,
    EXPAND,
    PatternMismatch,
    Transition,
    TransitionPath,
    Word,
    apply_transition,
    concat,
    embed,
    identity_path,
    invert,
    single_step,
)


class CaseError(ValueError):
    pass


@dataclass(frozen=True)
class Decomposition:
    u: Word
    f_letter: int
    f_pos: int
    v: Word
    lwit: GreenWitness    # u f  L  f
    rwit: GreenWitness    # f  R  f v

    @property
    def word(self) -> Word:
        return self.u + (self.f_letter,) + self.v

    def as_dict(self) -> dict:
        return {
            "u": list(self.u),
            "f_letter": self.f_letter,
            "f_pos": self.f_pos,
            "v": list(self.v),
            "lwit": self.lwit.as_dict(),
            "rwit": self.rwit.as_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Decomposition":
        return cls(
            tuple(d["u"]), int(d["f_letter"]), int(d["f_pos"]), tuple(d["v"]),
            witness_from_dict(d["lwit"]), witness_from_dict(d["rwit"]),
        )


def _step(w: Word, pos: int, kind: str, triple) -> TransitionPath:
    return single_step(w, Transition(pos, kind, tuple(triple)))


def _collapse(kind: str, e1: int, e2: int, tag: int) -> TransitionPath:
    """Two-step path ``e1 e2 e1 -> e1`` (kind 'left') or ``e2 e1 e2 -> e2`` (kind 'right').

    The first contraction is the defining equation of the basic-pair case ``tag``:
    1: e1e2 = e1, 2: e1e2 = e2, 3: e2e1 = e1, 4: e2e1 = e2.
    """
    if kind == "left":
        first = {1: (0, (e1, e2, e1)), 3: (1, (e2, e1, e1))}[tag]
        return concat(_step((e1, e2, e1), first[0], CONTRACT, first[1]), _step((e1, e1), 0, CONTRACT, (e1, e1, e1)))
    first = {2: (1, (e1, e2, e2)), 4: (0, (e2, e1, e2))}[tag]
    return concat(_step((e2, e1, e2), first[0], CONTRACT, first[1]), _step((e2, e2), 0, CONTRACT, (e2, e2, e2)))


def base_decomposition(e: int) -> Decomposition:
    return Decomposition((), e, 0, (), reflexive("L", (e,)), reflexive("R", (e,)))


def _contract_at_site(E: BiorderedSet, t: Transition, d: Decomposition) -> Decomposition:
    e1, e2, e3 = t.triple
    bp = basic_product(E, e1, e2)
    if bp is None:
        raise CaseError(f"({e1}, {e2}) is not a basic pair; the transition cannot be valid")
    tag = min(bp[1])
    x, y = d.u, d.v
    contract12 = _step((e1, e2), 0, CONTRACT, t.triple)
    if tag in (1, 3):
        back = _collapse("left", e1, e2, tag)
        lw = retarget(d.lwit, before=_step(x + (e1, e2), len(x), CONTRACT, t.triple), after=invert(contract12))
        lw = transport(lw, (e1,), RIGHT)
        lw = retarget(lw, before=invert(embed(back, left=x)), after=back)
        rw = GreenWitness("R", (e1,), (e1, e2), (e2,), (e1,), identity_path((e1, e2)), back)
        rw = retarget(rw, after=contract12)
        rw = compose_transitive(rw, d.rwit)
        rw = retarget(rw, after=_step((e3,) + y, 0, EXPAND, t.triple))
        return Decomposition(x, e1, t.pos, (e2,) + y, lw, rw)

    back = _collapse("right", e1, e2, tag)
    rw = retarget(d.rwit, before=contract12, after=_step((e3,) + y, 0, EXPAND, t.triple))
    rw = transport(rw, (e2,), LEFT)
    rw = retarget(rw, before=invert(back), after=embed(back, right=y))
    lw = GreenWitness("L", (e2,), (e1, e2), (e1,), (e2,), identity_path((e1, e2)), back)
    lw = retarget(lw, after=contract12)
    lw = compose_transitive(lw, invert_witness(d.lwit))
    lw = retarget(lw, after=_step(x + (e3,), len(x), EXPAND, t.triple))
    return Decomposition(x + (e1,), e2, t.pos + 1, y, invert_witness(lw), rw)


def _expand_at_site(E: BiorderedSet, t: Transition, d: Decomposition) -> Decomposition:
    e1, e2, e3 = t.triple
    contract12 = _step((e1, e2), 0, CONTRACT, t.triple)
    if d.f_pos == t.pos:
        x, y = d.u, d.v[1:]
        lw = transport(d.lwit, (e2,), RIGHT)
        lw = retarget(lw, before=_step(x + (e3,), len(x), EXPAND, t.triple), after=contract12)
        r1 = retarget(d.rwit, after=_step((e1, e2) + y, 0, CONTRACT, t.triple))
        t_mult = d.rwit.bwd_mult
        r0 = GreenWitness(
            "R", (e3,), (e1,), y + t_mult, (e2,),
            concat(_step((e3,) + y + t_mult, 0, EXPAND, t.triple), d.rwit.bwd_proof),
            contract12,
        )
        return Decomposition(x, e3, t.pos, y, lw, compose_transitive(r0, r1))

    x, y = d.u[:-1], d.v
    rw = transport(d.rwit, (e1,), LEFT)
    rw = retarget(rw, before=invert(contract12), after=_step((e1, e2) + y, 0, CONTRACT, t.triple))
    l1 = retarget(d.lwit, before=_step(x + (e3,), len(x), EXPAND, t.triple))
    s_mult = d.lwit.fwd_mult
    l0 = GreenWitness(
        "L", (e2,), (e3,), (e1,), s_mult + x,
        contract12,
        concat(_step(s_mult + x + (e3,), len(s_mult) + len(x), EXPAND, t.triple), d.lwit.fwd_proof),
    )
    return Decomposition(x, e3, t.pos, y, compose_transitive(l1, l0), rw)


def lift(E: BiorderedSet, w: Word, t: Transition, d: Decomposition) -> Decomposition:
    """Pull a decomposition of the word after ``t`` back to ``w`` (the word before ``t``)."""
    e1, e2, e3 = t.triple
    pos, fp = t.pos, d.f_pos
    f = d.f_letter
    if t.kind == CONTRACT:
        if fp < pos:
            bridge = _step((f,) + d.v, pos - fp, EXPAND, t.triple)
            return Decomposition(d.u, f, fp, w[fp + 1 :], d.lwit, retarget(d.rwit, after=bridge))
        if fp > pos:
            u = w[: fp + 1]
            before = _step(u + (f,), pos, CONTRACT, t.triple)
            return Decomposition(u, f, fp + 1, d.v, retarget(d.lwit, before=before), d.rwit)
        return _contract_at_site(E, t, d)
    if fp < pos:
        bridge = _step((f,) + d.v, pos - fp, CONTRACT, t.triple)
        return Decomposition(d.u, f, fp, w[fp + 1 :], d.lwit, retarget(d.rwit, after=bridge))
    if fp > pos + 1:
        u = w[: fp - 1]
        before = _step(u + (f,), pos, EXPAND, t.triple)
        return Decomposition(u, f, fp - 1, d.v, retarget(d.lwit, before=before), d.rwit)
    return _expand_at_site(E, t, d)


def decompose(E: BiorderedSet, w, path: TransitionPath) -> Decomposition:
    w = tuple(w)
    if path.start != w:
        raise PatternMismatch(f"path starts at {list(path.start)}, not at {list(w)}")
    words = [w]
    for i, t in enumerate(path.steps):
        try:
            words.append(apply_transition(E, words[-1], t))
        except PatternMismatch as exc:
            raise PatternMismatch(str(exc), i) from None
    if len(words[-1]) != 1:
        raise ValueError(f"path ends at {list(words[-1])}, which is not a single letter")
    d = base_decomposition(words[-1][0])
    for i in range(len(path.steps) - 1, -1, -1):
        d = lift(E, words[i], path.steps[i], d)
    return d


def decomposition_problem(E: BiorderedSet, w, d: Decomposition) -> str | None:
    w = tuple(w)
    if d.word != w:
        return f"u f v spells {list(d.word)}, not {list(w)}"
    if len(d.u) != d.f_pos or not 0 <= d.f_pos < len(w) or w[d.f_pos] != d.f_letter:
        return "distinguished position is inconsistent with u and f"
    if d.lwit.kind != "L" or d.lwit.a != d.u + (d.f_letter,) or d.lwit.b != (d.f_letter,):
        return "L-witness does not relate u f and f"
    if d.rwit.kind != "R" or d.rwit.a != (d.f_letter,) or d.rwit.b != (d.f_letter,) + d.v:
        return "R-witness does not relate f and f v"
    return witness_problem(E, d.lwit) or witness_problem(E, d.rwit)


def verify_decomposition(E: BiorderedSet, w, d: Decomposition) -> bool:
    return decomposition_problem(E, w, d) is None
