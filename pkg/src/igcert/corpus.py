"""Small named semigroups used by the tests, the selftest command and the docs."""
from __future__ import annotations

import itertools
import random

from .biorder import BiorderedSet, extract_biorder
from .semigroup import FiniteSemigroup, from_table, from_transformations, matrix_monoid


def right_zero(n: int = 2) -> FiniteSemigroup:
    return from_table([[j for j in range(n)] for _ in range(n)])


def rectangular_band(rows: int = 2, cols: int = 2) -> FiniteSemigroup:
    """Pairs (i, j), 1-based in the labels, with (i,j)(k,l) = (i,l)."""
    cells = list(itertools.product(range(rows), range(cols)))
    index = {c: n for n, c in enumerate(cells)}
    table = [[index[(i, l)] for (_, l) in cells] for (i, _) in cells]
    labels = [f"({i + 1},{j + 1})" for i, j in cells]
    return from_table(table, labels)


def cyclic_group(n: int) -> FiniteSemigroup:
    return from_table([[(i + j) % n for j in range(n)] for i in range(n)])


def full_transformation_monoid(n: int) -> FiniteSemigroup:
    return from_transformations(list(itertools.product(range(n), repeat=n)), n)


def random_transformation_semigroup(rng: random.Random, points: int, ngens: int) -> FiniteSemigroup:
    gens = [tuple(rng.randrange(points) for _ in range(points)) for _ in range(ngens)]
    return from_transformations(gens, points, adjoin_identity=False)


def standard_corpus() -> dict[str, BiorderedSet]:
    """The biordered sets the end-to-end checks run over."""
    return {
        "right-zero": extract_biorder(right_zero(2)),
        "T2": extract_biorder(full_transformation_monoid(2)),
        "rect-band-2x2": extract_biorder(rectangular_band(2, 2)),
        "M2(GF2)": extract_biorder(matrix_monoid(2, 2)),
    }
