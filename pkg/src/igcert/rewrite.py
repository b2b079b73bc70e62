"""Elementary transitions on words over E and budgeted equivalence search.

Two words of ``E+`` have the same image in IG(E) exactly when they are joined by
a finite chain of transitions ``x e1 e2 y <-> x e3 y`` with ``e1 o e2 = e3``.
A :class:`TransitionPath` records such a chain and is the basic certificate;
:func:`replay_path` checks it without any search.

Words are plain tuples of idempotent indices.
"""
from __future__ import annotations

import functools
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .biorder import BiorderedSet

try:
    from . import _search_jit
except ImportError:  # numba missing: the pure-Python loop does the same traversal
    _search_jit = None

Word = tuple[int, ...]

CONTRACT = "contract"
EXPAND = "expand"

DEFAULT_MAX_NODES = 100_000
SEARCH_ENGINE = os.environ.get("IGCERT_SEARCH", "jit")


class PatternMismatch(ValueError):
    def __init__(self, message: str, step: int | None = None):
        self.step = step
        if step is not None:
            message = f"step {step}: {message}"
        super().__init__(message)


class EndpointMismatch(ValueError):
    pass


class BudgetError(ValueError):
    pass


@dataclass(frozen=True)
class Transition:
    pos: int
    kind: str
    triple: tuple[int, int, int]

    def inverted(self) -> "Transition":
        return Transition(self.pos, EXPAND if self.kind == CONTRACT else CONTRACT, self.triple)

    def shifted(self, offset: int) -> "Transition":
        return Transition(self.pos + offset, self.kind, self.triple)

    def as_dict(self) -> dict:
        return {"pos": self.pos, "kind": self.kind, "triple": list(self.triple)}

    @classmethod
    def from_dict(cls, d: dict) -> "Transition":
        return cls(int(d["pos"]), d["kind"], tuple(int(x) for x in d["triple"]))


def _rewrite(w: Word, t: Transition) -> Word:
    """Apply ``t`` syntactically; the product table is not consulted."""
    e1, e2, e3 = t.triple
    p = t.pos
    if t.kind == CONTRACT:
        if p < 0 or p + 1 >= len(w) or w[p] != e1 or w[p + 1] != e2:
            raise PatternMismatch(f"cannot contract {e1},{e2} at position {p} of {list(w)}")
        return w[:p] + (e3,) + w[p + 2 :]
    if t.kind == EXPAND:
        if p < 0 or p >= len(w) or w[p] != e3:
            raise PatternMismatch(f"cannot expand {e3} at position {p} of {list(w)}")
        return w[:p] + (e1, e2) + w[p + 1 :]
    raise PatternMismatch(f"unknown transition kind {t.kind!r}")


@dataclass(frozen=True)
class TransitionPath:
    start: Word
    steps: tuple[Transition, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "start", tuple(self.start))
        object.__setattr__(self, "steps", tuple(self.steps))

    @cached_property
    def end(self) -> Word:
        w = self.start
        for i, t in enumerate(self.steps):
            try:
                w = _rewrite(w, t)
            except PatternMismatch as exc:
                raise PatternMismatch(str(exc), i) from None
        return w

    def __len__(self) -> int:
        return len(self.steps)

    def as_dict(self) -> dict:
        return {"start": list(self.start), "steps": [t.as_dict() for t in self.steps]}

    @classmethod
    def from_dict(cls, d: dict) -> "TransitionPath":
        return cls(tuple(int(x) for x in d["start"]), tuple(Transition.from_dict(s) for s in d["steps"]))


@dataclass(frozen=True)
class Budget:
    """Search limits.  ``max_len=None`` means ``2 * (longest input) + 8``."""

    max_len: int | None = None
    max_nodes: int = DEFAULT_MAX_NODES

    def resolve(self, *words: Word) -> int:
        longest = max(len(w) for w in words)
        if self.max_nodes <= 0:
            raise BudgetError("max_nodes must be positive")
        if self.max_len is None:
            return 2 * longest + 8
        if self.max_len <= 0:
            raise BudgetError("max_len must be positive")
        if self.max_len < longest:
            raise BudgetError(f"max_len {self.max_len} is shorter than an input word ({longest})")
        return self.max_len

    def scaled(self, factor: int) -> "Budget":
        return Budget(
            None if self.max_len is None else self.max_len * factor,
            self.max_nodes * factor,
        )


@dataclass(frozen=True)
class Proved:
    path: TransitionPath
    status: str = field(default="proved", init=False)

    def as_dict(self) -> dict:
        return {"status": self.status, "path": self.path.as_dict()}


@dataclass(frozen=True)
class Refuted:
    image1: int
    image2: int
    status: str = field(default="refuted", init=False)

    def as_dict(self) -> dict:
        return {"status": self.status, "images": [self.image1, self.image2]}


@dataclass(frozen=True)
class Unknown:
    nodes: int
    max_len: int
    status: str = field(default="unknown", init=False)

    def as_dict(self) -> dict:
        return {"status": self.status, "nodes": self.nodes, "max_len": self.max_len}


Verdict = Union[Proved, Refuted, Unknown]


def check_word(E: BiorderedSet, w: Sequence[int], allow_empty: bool = False) -> Word:
    w = tuple(int(x) for x in w)
    if not w and not allow_empty:
        raise ValueError("words must be non-empty")
    for x in w:
        if not 0 <= x < E.size:
            raise ValueError(f"letter {x} is not an idempotent index (|E| = {E.size})")
    return w


def neighbors(E: BiorderedSet, w: Word, max_len: int | None = None) -> list[tuple[Transition, Word]]:
    """All one-step moves from ``w``, ordered by position, contract before expand, triple."""
    out = []
    product = E.product
    pre = E.preimages
    grow = max_len is None or len(w) < max_len
    for p, c in enumerate(w):
        if p + 1 < len(w):
            g = product[c][w[p + 1]]
            if g is not None:
                out.append((Transition(p, CONTRACT, (c, w[p + 1], g)), w[:p] + (g,) + w[p + 2 :]))
        if grow:
            head, tail = w[:p], w[p + 1 :]
            for e1, e2 in pre[c]:
                out.append((Transition(p, EXPAND, (e1, e2, c)), head + (e1, e2) + tail))
    return out


def apply_transition(E: BiorderedSet, w: Word, t: Transition) -> Word:
    e1, e2, e3 = t.triple
    for x in t.triple:
        if not 0 <= x < E.size:
            raise PatternMismatch(f"triple {t.triple} names a letter outside E")
    if E.product[e1][e2] != e3:
        raise PatternMismatch(f"{e1} o {e2} = {e3} is not a defined product")
    return _rewrite(tuple(w), t)


def replay_path(E: BiorderedSet, path: TransitionPath) -> Word:
    w = tuple(path.start)
    for i, t in enumerate(path.steps):
        try:
            w = apply_transition(E, w, t)
        except PatternMismatch as exc:
            raise PatternMismatch(str(exc), i) from None
    return w


def path_valid(E: BiorderedSet, path: TransitionPath, start: Word, end: Word) -> bool:
    if tuple(path.start) != tuple(start):
        return False
    try:
        return replay_path(E, path) == tuple(end)
    except PatternMismatch:
        return False


def eval_image(E: BiorderedSet, w: Sequence[int]) -> int:
    rows = E.source.rows
    src = E.to_source
    it = iter(w)
    acc = src[next(it)]
    for x in it:
        acc = rows[acc][src[x]]
    return acc


# -- path algebra -------------------------------------------------------------------------


def identity_path(w: Word) -> TransitionPath:
    return TransitionPath(tuple(w), ())


def concat(*paths: TransitionPath) -> TransitionPath:
    first, rest = paths[0], paths[1:]
    steps = list(first.steps)
    end = first.end
    for p in rest:
        if p.start != end:
            raise EndpointMismatch(f"cannot join path ending at {list(end)} to one starting at {list(p.start)}")
        steps.extend(p.steps)
        end = p.end
    out = TransitionPath(first.start, tuple(steps))
    out.__dict__["end"] = end
    return out


def invert(p: TransitionPath) -> TransitionPath:
    out = TransitionPath(p.end, tuple(t.inverted() for t in reversed(p.steps)))
    out.__dict__["end"] = p.start
    return out


def embed(p: TransitionPath, left: Sequence[int] = (), right: Sequence[int] = ()) -> TransitionPath:
    left, right = tuple(left), tuple(right)
    if left:
        steps = tuple(t.shifted(len(left)) for t in p.steps)
    else:
        steps = p.steps
    out = TransitionPath(left + p.start + right, steps)
    out.__dict__["end"] = left + p.end + right
    return out


def single_step(w: Word, t: Transition) -> TransitionPath:
    return TransitionPath(tuple(w), (t,))


# -- search -------------------------------------------------------------------------------


class _Tables:
    """Rewrite tables for the search loops (built once per biordered set)."""

    def __init__(self, E: BiorderedSet):
        self.contract = {}
        self.expand = [[] for _ in range(E.size)]
        for e1, row in enumerate(E.product):
            for e2, g in enumerate(row):
                if g is not None:
                    self.contract[bytes((e1, e2))] = bytes((g,))
        for g, pairs in enumerate(E.preimages):
            self.expand[g] = [(bytes(pair), pair) for pair in pairs]
        self.contract_array = np.array(
            [[-1 if g is None else g for g in row] for row in E.product], dtype=np.int64
        )
        sizes = [len(p) for p in E.preimages]
        self.pre_start = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
        flat = [pair for pairs in E.preimages for pair in pairs]
        self.pre_pairs = np.array(flat, dtype=np.uint8).reshape(len(flat), 2)


def _tables(E: BiorderedSet) -> _Tables:
    t = E.__dict__.get("_search_tables")
    if t is None:
        t = E.__dict__["_search_tables"] = _Tables(E)
    return t


def _decode_steps(parents: dict, w: bytes) -> list[Transition]:
    """Transitions from the root of ``parents`` to ``w``."""
    steps = []
    while True:
        link = parents[w]
        if link is None:
            break
        prev, p, pair = link
        if pair is None:
            steps.append(Transition(p, CONTRACT, (prev[p], prev[p + 1], w[p])))
        else:
            steps.append(Transition(p, EXPAND, (pair[0], pair[1], prev[p])))
        w = prev
    steps.reverse()
    return steps


def _bfs_jit(E: BiorderedSet, w1: Word, w2: Word, max_len: int, limit: int) -> Verdict:
    t = _tables(E)
    status, visited, mf, mb, words, lens, parent, mpos, mcode = _search_jit.bfs(
        np.array(w1, dtype=np.uint8), np.array(w2, dtype=np.uint8), max_len, limit,
        t.contract_array, t.pre_start, t.pre_pairs,
    )
    if not status:
        return Unknown(int(visited), max_len)

    def chain(node):
        steps = []
        while parent[node] >= 0:
            prev = int(parent[node])
            pw = words[prev, : lens[prev]]
            p, code = int(mpos[node]), int(mcode[node])
            if code < 0:
                steps.append(Transition(p, CONTRACT, (int(pw[p]), int(pw[p + 1]), int(words[node, p]))))
            else:
                e1, e2 = E.preimages[pw[p]][code]
                steps.append(Transition(p, EXPAND, (e1, e2, int(pw[p]))))
            node = prev
        steps.reverse()
        return steps

    head, tail = chain(mf), chain(mb)
    return Proved(TransitionPath(w1, tuple(head + [s.inverted() for s in reversed(tail)])))


def _bfs_python(E: BiorderedSet, w1: Word, w2: Word, max_len: int, limit: int) -> Verdict:
    if E.size > 256:
        return _bfs_tuples(E, w1, w2, max_len, limit)
    tables = _tables(E)
    cmap, emap = tables.contract, tables.expand
    b1, b2 = bytes(w1), bytes(w2)
    fwd = {b1: None}
    bwd = {b2: None}
    front_f, front_b = [b1], [b2]
    visited = 2
    while front_f and front_b:
        forward = len(front_f) <= len(front_b)
        front, mine, other = (front_f, fwd, bwd) if forward else (front_b, bwd, fwd)
        front.sort(key=lambda b: (len(b), b))
        nxt = []
        for w in front:
            n = len(w)
            grow = n < max_len
            for p in range(n):
                if p + 1 < n:
                    g = cmap.get(w[p : p + 2])
                    if g is not None:
                        nw = w[:p] + g + w[p + 2 :]
                        if nw not in mine:
                            mine[nw] = (w, p, None)
                            if nw in other:
                                return _joined(w1, fwd, bwd, nw)
                            visited += 1
                            if visited >= limit:
                                return Unknown(visited, max_len)
                            nxt.append(nw)
                if grow:
                    head, tail = w[:p], w[p + 1 :]
                    for rep, pair in emap[w[p]]:
                        nw = head + rep + tail
                        if nw not in mine:
                            mine[nw] = (w, p, pair)
                            if nw in other:
                                return _joined(w1, fwd, bwd, nw)
                            visited += 1
                            if visited >= limit:
                                return Unknown(visited, max_len)
                            nxt.append(nw)
        if forward:
            front_f = nxt
        else:
            front_b = nxt
    return Unknown(visited, max_len)


def _joined(w1: Word, fwd: dict, bwd: dict, meet) -> Proved:
    head = _decode_steps(fwd, meet)
    tail = _decode_steps(bwd, meet)
    steps = head + [s.inverted() for s in reversed(tail)]
    return Proved(TransitionPath(w1, tuple(steps)))


def _bfs_tuples(E: BiorderedSet, w1: Word, w2: Word, max_len: int, limit: int) -> Verdict:
    # same traversal as _bfs for alphabets that do not fit in a byte
    fwd = {w1: None}
    bwd = {w2: None}
    front_f, front_b = [w1], [w2]
    visited = 2
    while front_f and front_b:
        forward = len(front_f) <= len(front_b)
        front, mine, other = (front_f, fwd, bwd) if forward else (front_b, bwd, fwd)
        front.sort(key=lambda b: (len(b), b))
        nxt = []
        for w in front:
            for t, nw in neighbors(E, w, max_len):
                if nw in mine:
                    continue
                mine[nw] = (w, t.pos, None if t.kind == CONTRACT else t.triple[:2])
                if nw in other:
                    return _joined(w1, fwd, bwd, nw)
                visited += 1
                if visited >= limit:
                    return Unknown(visited, max_len)
                nxt.append(nw)
        if forward:
            front_f = nxt
        else:
            front_b = nxt
    return Unknown(visited, max_len)


def prove_equiv(E: BiorderedSet, w1: Sequence[int], w2: Sequence[int], budget: Budget = Budget()) -> Verdict:
    """Search for a transition path from ``w1`` to ``w2``.

    Words with different images in the source semigroup are refuted at once.
    Both words are then contracted greedily (see :func:`greedy_reduce`); if the
    results differ, a bidirectional breadth-first search joins them over words of
    length at most ``max_len``.  Each layer is expanded in shortlex order, moves
    in the order of :func:`neighbors`, and the smaller frontier grows first (ties
    go to the ``w1`` side).  Reaching ``max_nodes`` visited words, or running out
    of words within ``max_len``, gives :class:`Unknown`.
    """
    w1 = check_word(E, w1)
    w2 = check_word(E, w2)
    max_len = budget.resolve(w1, w2)
    i1, i2 = eval_image(E, w1), eval_image(E, w2)
    if i1 != i2:
        return Refuted(i1, i2)
    if w1 == w2:
        return Proved(identity_path(w1))
    red1, red2 = greedy_reduce(E, w1), greedy_reduce(E, w2)
    if red1.end == red2.end:
        return Proved(concat(red1, invert(red2)))
    verdict = _search_memo(E, red1.end, red2.end, max_len, budget.max_nodes, SEARCH_ENGINE)
    if isinstance(verdict, Proved):
        return Proved(concat(red1, verdict.path, invert(red2)))
    return verdict


@functools.lru_cache(maxsize=1 << 16)
def _search_memo(E, r1, r2, max_len, limit, engine):
    return _search(E, r1, r2, max_len, limit, engine)


def _search(E: BiorderedSet, w1: Word, w2: Word, max_len: int, limit: int, engine: str | None = None) -> Verdict:
    engine = engine or SEARCH_ENGINE
    if engine == "jit" and _search_jit is not None and E.size <= 256:
        return _bfs_jit(E, w1, w2, max_len, limit)
    return _bfs_python(E, w1, w2, max_len, limit)


def greedy_reduce(E: BiorderedSet, w: Sequence[int]) -> TransitionPath:
    """Contract the leftmost defined adjacent pair until none is left."""
    start = w = tuple(w)
    steps = []
    product = E.product
    p = 0
    while p + 1 < len(w):
        g = product[w[p]][w[p + 1]]
        if g is None:
            p += 1
            continue
        steps.append(Transition(p, CONTRACT, (w[p], w[p + 1], g)))
        w = w[:p] + (g,) + w[p + 2 :]
        p = max(p - 1, 0)
    return TransitionPath(start, tuple(steps))
