"""Biordered set of a finite semigroup and the presentation of IG(E).

The idempotents of ``S`` are renumbered ``0 .. |E|-1`` in increasing order of
their element index.  The partial product ``e o f`` is kept exactly on basic
pairs, i.e. when one of ``ef = e``, ``ef = f``, ``fe = e``, ``fe = f`` holds in
``S``; it is then the product ``ef`` computed in ``S``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .semigroup import FiniteSemigroup, idempotents


@dataclass(frozen=True, eq=False)
class BiorderedSet:
    product: tuple[tuple[int | None, ...], ...]
    to_source: tuple[int, ...]
    source: FiniteSemigroup

    @property
    def size(self) -> int:
        return len(self.to_source)

    @cached_property
    def from_source(self) -> dict[int, int]:
        return {s: e for e, s in enumerate(self.to_source)}

    @cached_property
    def preimages(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """``preimages[g]`` lists the pairs ``(e, f)`` with ``e o f = g``, sorted."""
        out = [[] for _ in range(self.size)]
        for e, row in enumerate(self.product):
            for f, g in enumerate(row):
                if g is not None:
                    out[g].append((e, f))
        return tuple(tuple(p) for p in out)

    def defined(self, e: int, f: int) -> bool:
        return self.product[e][f] is not None

    def label(self, e: int) -> str:
        return self.source.label(self.to_source[e])

    def as_dict(self) -> dict:
        return {
            "size": self.size,
            "product": [list(row) for row in self.product],
            "to_source": list(self.to_source),
        }


@dataclass(frozen=True)
class Relation:
    lhs: tuple[int, int]
    rhs: tuple[int]

    def as_dict(self) -> dict:
        return {"lhs": list(self.lhs), "rhs": list(self.rhs)}


def case_tags(S: FiniteSemigroup, a: int, b: int) -> frozenset[int]:
    """Which of ab=a (1), ab=b (2), ba=a (3), ba=b (4) hold for elements of S."""
    ab, ba = S.mul(a, b), S.mul(b, a)
    tags = set()
    if ab == a:
        tags.add(1)
    if ab == b:
        tags.add(2)
    if ba == a:
        tags.add(3)
    if ba == b:
        tags.add(4)
    return frozenset(tags)


def extract_biorder(S: FiniteSemigroup) -> BiorderedSet:
    idem = idempotents(S)
    pos = {x: n for n, x in enumerate(idem)}
    rows = S.rows
    product = []
    for e in idem:
        row = []
        for f in idem:
            ef, fe = rows[e][f], rows[f][e]
            basic = ef in (e, f) or fe in (e, f)
            row.append(pos[ef] if basic else None)
        product.append(tuple(row))
    return BiorderedSet(tuple(product), tuple(idem), S)


def basic_product(E: BiorderedSet, e: int, f: int) -> tuple[int, frozenset[int]] | None:
    """The partial product ``e o f`` with the set of basic-pair cases that hold.

    Returns None when the pair is not basic.
    """
    tags = case_tags(E.source, E.to_source[e], E.to_source[f])
    if not tags:
        return None
    return E.product[e][f], tags


def presentation(E: BiorderedSet) -> list[Relation]:
    return [
        Relation((e, f), (g,))
        for e, row in enumerate(E.product)
        for f, g in enumerate(row)
        if g is not None
    ]
