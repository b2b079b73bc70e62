"""Certificates for Green's relations between word images in IG(E).

An R-witness for a pair of words ``(a, b)`` stores multiplier words ``s`` and
``t`` (possibly empty, standing for the adjoined identity) together with paths
``a.s -> b`` and ``b.t -> a``.  L-witnesses are the mirror image with the
multipliers on the left, and an H-witness is one of each for the same pair.
Every operation here builds its output from the paths it is given, so checking
a witness never needs a search.
"""
from __future__ import annotations

from dataclasses import dataclass

from .biorder import BiorderedSet
from .rewrite import (
    CONTRACT,
    Budget,
    EndpointMismatch,
    PatternMismatch,
    Proved,
    Refuted,
    Transition,
    TransitionPath,
    Verdict,
    Word,
    check_word,
    concat,
    embed,
    eval_image,
    identity_path,
    invert,
    prove_equiv,
    replay_path,
    single_step,
)

RIGHT = "right"
LEFT = "left"


class SideError(ValueError):
    pass


class VerificationError(ValueError):
    pass


@dataclass(frozen=True)
class GreenWitness:
    kind: str                 # "R" or "L"
    a: Word
    b: Word
    fwd_mult: Word
    bwd_mult: Word
    fwd_proof: TransitionPath
    bwd_proof: TransitionPath

    def fwd_start(self) -> Word:
        return self.a + self.fwd_mult if self.kind == "R" else self.fwd_mult + self.a

    def bwd_start(self) -> Word:
        return self.b + self.bwd_mult if self.kind == "R" else self.bwd_mult + self.b

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "a": list(self.a),
            "b": list(self.b),
            "fwd_mult": list(self.fwd_mult),
            "bwd_mult": list(self.bwd_mult),
            "fwd_proof": self.fwd_proof.as_dict(),
            "bwd_proof": self.bwd_proof.as_dict(),
        }


@dataclass(frozen=True)
class HWitness:
    r: GreenWitness
    l: GreenWitness
    kind = "H"

    @property
    def a(self) -> Word:
        return self.r.a

    @property
    def b(self) -> Word:
        return self.r.b

    def as_dict(self) -> dict:
        return {"kind": "H", "a": list(self.a), "b": list(self.b), "r": self.r.as_dict(), "l": self.l.as_dict()}


def witness_from_dict(d: dict):
    if d["kind"] == "H":
        return HWitness(witness_from_dict(d["r"]), witness_from_dict(d["l"]))
    return GreenWitness(
        d["kind"],
        tuple(d["a"]),
        tuple(d["b"]),
        tuple(d["fwd_mult"]),
        tuple(d["bwd_mult"]),
        TransitionPath.from_dict(d["fwd_proof"]),
        TransitionPath.from_dict(d["bwd_proof"]),
    )


def witness_problem(E: BiorderedSet, w) -> str | None:
    """First reason ``w`` fails to check, or None when every path replays."""
    if isinstance(w, HWitness):
        if (w.r.a, w.r.b) != (w.l.a, w.l.b):
            return "R and L parts relate different pairs"
        if w.r.kind != "R" or w.l.kind != "L":
            return "H-witness parts have the wrong kinds"
        return witness_problem(E, w.r) or witness_problem(E, w.l)
    if w.kind not in ("R", "L"):
        return f"unknown witness kind {w.kind!r}"
    for name, proof, start, end in (
        ("forward", w.fwd_proof, w.fwd_start(), w.b),
        ("backward", w.bwd_proof, w.bwd_start(), w.a),
    ):
        if proof.start != start:
            return f"{w.kind} {name} proof starts at {list(proof.start)}, expected {list(start)}"
        try:
            got = replay_path(E, proof)
        except PatternMismatch as exc:
            return f"{w.kind} {name} proof: {exc}"
        if got != end:
            return f"{w.kind} {name} proof ends at {list(got)}, expected {list(end)}"
    return None


def verify_witness(E: BiorderedSet, w) -> bool:
    return witness_problem(E, w) is None


def reflexive(kind: str, a: Word) -> GreenWitness:
    a = tuple(a)
    return GreenWitness(kind, a, a, (), (), identity_path(a), identity_path(a))


def from_path(kind: str, path: TransitionPath) -> GreenWitness:
    """Equal images are related by every Green relation, with empty multipliers."""
    return GreenWitness(kind, path.start, path.end, (), (), path, invert(path))


def h_from_path(path: TransitionPath) -> HWitness:
    return HWitness(from_path("R", path), from_path("L", path))


def invert_witness(w):
    if isinstance(w, HWitness):
        return HWitness(invert_witness(w.r), invert_witness(w.l))
    return GreenWitness(w.kind, w.b, w.a, w.bwd_mult, w.fwd_mult, w.bwd_proof, w.fwd_proof)


def transport(w: GreenWitness, x, side: str) -> GreenWitness:
    """Multiply both ends of ``w`` by ``x``: L on the right, R on the left."""
    x = tuple(x)
    if isinstance(w, HWitness) or (w.kind, side) not in (("L", RIGHT), ("R", LEFT)):
        raise SideError(f"{w.kind}-witnesses cannot be multiplied on the {side}")
    if w.kind == "L":
        return GreenWitness(
            "L", w.a + x, w.b + x, w.fwd_mult, w.bwd_mult,
            embed(w.fwd_proof, right=x), embed(w.bwd_proof, right=x),
        )
    return GreenWitness(
        "R", x + w.a, x + w.b, w.fwd_mult, w.bwd_mult,
        embed(w.fwd_proof, left=x), embed(w.bwd_proof, left=x),
    )


def compose_transitive(w1, w2, bridge: TransitionPath | None = None):
    """Chain ``a ~ b`` and ``b' ~ c`` into ``a ~ c``; ``bridge`` joins ``b`` to ``b'``."""
    if isinstance(w1, HWitness) or isinstance(w2, HWitness):
        if not (isinstance(w1, HWitness) and isinstance(w2, HWitness)):
            raise EndpointMismatch("cannot compose an H-witness with an R- or L-witness")
        return HWitness(compose_transitive(w1.r, w2.r, bridge), compose_transitive(w1.l, w2.l, bridge))
    if w1.kind != w2.kind:
        raise EndpointMismatch(f"cannot compose {w1.kind}- and {w2.kind}-witnesses")
    if bridge is None:
        bridge = identity_path(w1.b)
    if bridge.start != w1.b or bridge.end != w2.a:
        raise EndpointMismatch(
            f"witness ends at {list(w1.b)} but the next one starts at {list(w2.a)}"
        )
    s1, s2, t1, t2 = w1.fwd_mult, w2.fwd_mult, w1.bwd_mult, w2.bwd_mult
    if w1.kind == "R":
        fwd = concat(embed(w1.fwd_proof, right=s2), embed(bridge, right=s2), w2.fwd_proof)
        bwd = concat(embed(w2.bwd_proof, right=t1), embed(invert(bridge), right=t1), w1.bwd_proof)
        return GreenWitness("R", w1.a, w2.b, s1 + s2, t2 + t1, fwd, bwd)
    fwd = concat(embed(w1.fwd_proof, left=s2), embed(bridge, left=s2), w2.fwd_proof)
    bwd = concat(embed(w2.bwd_proof, left=t1), embed(invert(bridge), left=t1), w1.bwd_proof)
    return GreenWitness("L", w1.a, w2.b, s2 + s1, t1 + t2, fwd, bwd)


def retarget(w: GreenWitness, before: TransitionPath | None = None, after: TransitionPath | None = None):
    """Move the ends of ``w`` along paths: ``before`` ends at ``w.a``, ``after`` starts at ``w.b``."""
    if before is not None:
        w = compose_transitive(from_path(w.kind, before), w)
    if after is not None:
        w = compose_transitive(w, from_path(w.kind, after))
    return w


def power(w: Word, n: int) -> Word:
    return tuple(w) * n


def _require(E, path: TransitionPath, start: Word, end: Word, what: str) -> None:
    if path.start != start:
        raise VerificationError(f"{what} starts at {list(path.start)}, expected {list(start)}")
    try:
        got = replay_path(E, path)
    except PatternMismatch as exc:
        raise VerificationError(f"{what}: {exc}") from None
    if got != end:
        raise VerificationError(f"{what} ends at {list(got)}, expected {list(end)}")


def _check_lemma1_inputs(E, w, p, q, e, wit, rho, kind):
    if not 1 <= p <= q:
        raise ValueError(f"need 1 <= p <= q, got p={p}, q={q}")
    ap = power(w, p)
    if wit.kind != kind or wit.a != ap or wit.b != (e,):
        raise VerificationError(f"expected an {kind}-witness between {list(ap)} and [{e}]")
    problem = witness_problem(E, wit)
    if problem:
        raise VerificationError(problem)
    _require(E, rho, power(w, q), (e,), "idempotent path")
    return ap


def lemma1_h_witness(E: BiorderedSet, w, p: int, q: int, e: int, rwit: GreenWitness, rho: TransitionPath) -> HWitness:
    """From ``w^p R e`` and ``w^q ~ e`` (``p <= q``) build ``w^p H e``.

    The L-part uses ``w^(q-p) . w^p = w^q ~ e`` one way and, the other way,
    ``w^p e ~ w^p w^q = w^q w^p ~ e w^p ~ e e t ~ e t ~ w^p`` where ``t`` is the
    backward multiplier of ``rwit``.
    """
    w = tuple(w)
    ap = _check_lemma1_inputs(E, w, p, q, e, rwit, rho, "R")
    if p == q:
        return HWitness(rwit, from_path("L", rho))
    t = rwit.bwd_mult
    back = concat(
        embed(invert(rho), left=ap),
        embed(rho, right=ap),
        embed(invert(rwit.bwd_proof), left=(e,)),
        single_step((e, e) + t, Transition(0, CONTRACT, (e, e, e))),
        rwit.bwd_proof,
    )
    lwit = GreenWitness("L", ap, (e,), power(w, q - p), ap, rho, back)
    return HWitness(rwit, lwit)


def lemma1_dual_h_witness(E: BiorderedSet, w, p: int, q: int, e: int, lwit: GreenWitness, rho: TransitionPath) -> HWitness:
    """Mirror of :func:`lemma1_h_witness`: from ``w^p L e`` and ``w^q ~ e`` build ``w^p H e``."""
    w = tuple(w)
    ap = _check_lemma1_inputs(E, w, p, q, e, lwit, rho, "L")
    if p == q:
        return HWitness(from_path("R", rho), lwit)
    t = lwit.bwd_mult
    back = concat(
        embed(invert(rho), right=ap),
        embed(rho, left=ap),
        embed(invert(lwit.bwd_proof), right=(e,)),
        single_step(t + (e, e), Transition(len(t), CONTRACT, (e, e, e))),
        lwit.bwd_proof,
    )
    rwit = GreenWitness("R", ap, (e,), power(w, q - p), ap, rho, back)
    return HWitness(rwit, lwit)


def idempotent_root(E: BiorderedSet, w, budget: Budget = Budget()) -> Verdict:
    """Look for a single letter equal to ``w`` in IG(E).

    Distinct idempotents have distinct images, so the only candidate is the
    letter whose image is the image of ``w``; when that image is not idempotent
    the answer is :class:`Refuted` (carrying the images of ``w`` and ``ww``).
    A proved verdict's path ends at ``[e]``.
    """
    w = check_word(E, w)
    budget.resolve(w)
    x = eval_image(E, w)
    xx = E.source.mul(x, x)
    if xx != x:
        return Refuted(x, xx)
    e = E.from_source[x]
    return prove_equiv(E, w, (e,), budget)


def root_letter(verdict: Verdict) -> int | None:
    return verdict.path.end[0] if isinstance(verdict, Proved) else None
