"""Finite semigroups given by Cayley tables.

Elements are the integers ``0 .. order-1``; ``table[i, j]`` is the index of the
product ``i*j``.  Semigroups can be built from an explicit table, from a set of
transformations (closure under composition), or as a full matrix monoid over a
small prime field.  Green's relations, index/period and subgroup membership are
computed directly from the table and double as brute-force oracles for the
rewriting side of the package.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

SOURCES = ("cayley-file", "transformation-closure", "matrix-monoid")
MATRIX_FIELDS = (2, 3)
MAX_MATRIX_DIM = 3


class SpecError(ValueError):
    """Malformed semigroup description (bad spec file, images out of range, ...)."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class AssociativityError(ValueError):
    def __init__(self, triple: tuple[int, int, int]):
        self.triple = triple
        i, j, k = triple
        super().__init__(f"table is not associative: ({i}*{j})*{k} != {i}*({j}*{k})")


@dataclass(frozen=True, eq=False)
class FiniteSemigroup:
    table: np.ndarray
    labels: tuple[str, ...] | None = None
    source: str = "cayley-file"

    def __post_init__(self):
        t = np.asarray(self.table)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise SpecError(f"Cayley table must be a non-empty square array, got shape {t.shape}")
        if t.min() < 0 or t.max() >= t.shape[0]:
            raise SpecError("Cayley table entry out of range")
        t = t.astype(_index_dtype(t.shape[0]))
        t.setflags(write=False)
        object.__setattr__(self, "table", t)
        if self.labels is not None and len(self.labels) != t.shape[0]:
            raise SpecError("label count does not match order")
        if self.source not in SOURCES:
            raise SpecError(f"unknown source tag {self.source!r}")

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @cached_property
    def rows(self) -> list[list[int]]:
        # plain-int view for the hot loops; only materialized on demand
        return self.table.tolist()

    def mul(self, i: int, j: int) -> int:
        return int(self.table[i, j])

    def product(self, elements: Sequence[int]) -> int:
        rows = self.rows
        it = iter(elements)
        acc = next(it)
        for x in it:
            acc = rows[acc][x]
        return acc

    def power(self, a: int, n: int) -> int:
        if n < 1:
            raise ValueError("powers start at 1")
        rows = self.rows
        acc = a
        for _ in range(n - 1):
            acc = rows[acc][a]
        return acc

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def as_dict(self) -> dict:
        d = {"order": self.order, "source": self.source, "table": self.rows}
        if self.labels is not None:
            d["labels"] = list(self.labels)
        return d


@dataclass(frozen=True)
class GreenStructure:
    r_classes: tuple[tuple[int, ...], ...]
    l_classes: tuple[tuple[int, ...], ...]
    h_classes: tuple[tuple[int, ...], ...]

    def as_dict(self) -> dict:
        return {
            "r_classes": [list(c) for c in self.r_classes],
            "l_classes": [list(c) for c in self.l_classes],
            "h_classes": [list(c) for c in self.h_classes],
        }


@dataclass(frozen=True)
class IndexPeriod:
    index_h: int
    period_d: int


@dataclass(frozen=True)
class SemigroupSpec:
    """Parsed description of a semigroup; see :func:`parse_spec`."""

    kind: str
    table: tuple[tuple[int, ...], ...] | None = None
    points: int | None = None
    generators: tuple[tuple[int, ...], ...] = ()
    adjoin_identity: bool = True
    dim: int | None = None
    field: int | None = None


def _index_dtype(n: int):
    if n <= 256:
        return np.uint8
    if n <= 65536:
        return np.uint16
    return np.int64


def find_nonassociative(table: np.ndarray, generators: Sequence[int] | None = None):
    """Return a triple ``(i, j, k)`` with ``(ij)k != i(jk)``, or None.

    With ``generators`` given, only ``k`` in that set is tried, which suffices
    when the semigroup is generated by them (Light's test).
    """
    t = np.asarray(table, dtype=np.int64)
    ks = range(t.shape[0]) if generators is None else generators
    for k in ks:
        left = t[t, k]            # (i*j)*k for all i, j
        right = t[:, t[:, k]]     # i*(j*k) for all i, j
        bad = np.argwhere(left != right)
        if len(bad):
            i, j = bad[0]
            return int(i), int(j), int(k)
    return None


def check_associative(table, generators: Sequence[int] | None = None) -> None:
    triple = find_nonassociative(np.asarray(table), generators)
    if triple is not None:
        raise AssociativityError(triple)


def from_table(table, labels: Sequence[str] | None = None) -> FiniteSemigroup:
    arr = np.asarray(table)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise SpecError("Cayley table must be square")
    if arr.size and (arr.min() < 0 or arr.max() >= arr.shape[0]):
        raise SpecError("Cayley table entry out of range")
    check_associative(arr)
    return FiniteSemigroup(arr, tuple(labels) if labels is not None else None, "cayley-file")


def compose(f: tuple[int, ...], g: tuple[int, ...]) -> tuple[int, ...]:
    """Left-to-right composition: apply ``f`` first, then ``g``."""
    return tuple(g[x] for x in f)


def from_transformations(
    generators: Sequence[Sequence[int]], points: int | None = None, adjoin_identity: bool = True
) -> FiniteSemigroup:
    gens = [tuple(int(x) for x in g) for g in generators]
    if not gens and not adjoin_identity:
        raise SpecError("no generators given")
    if points is None:
        if not gens:
            raise SpecError("number of points unknown")
        points = len(gens[0])
    for g in gens:
        if len(g) != points:
            raise SpecError(f"transformation {list(g)} does not act on {points} points")
        if any(x < 0 or x >= points for x in g):
            raise SpecError(f"transformation {list(g)} has an image outside 0..{points - 1}")
    if adjoin_identity:
        gens.append(tuple(range(points)))
    gens = sorted(set(gens))

    index: dict[tuple[int, ...], int] = {}
    elements: list[tuple[int, ...]] = []
    queue = deque()
    for g in gens:
        if g not in index:
            index[g] = len(elements)
            elements.append(g)
            queue.append(g)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose(x, g)
            if y not in index:
                index[y] = len(elements)
                elements.append(y)
                queue.append(y)

    n = len(elements)
    arr = np.asarray(elements, dtype=np.int64)          # n x points
    table = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        prods = arr[:, arr[i]]  # row j is f_i followed by g_j
        table[i] = [index[tuple(r)] for r in prods.tolist()]
    labels = tuple("[" + ",".join(map(str, e)) + "]" for e in elements)
    return FiniteSemigroup(table, labels, "transformation-closure")


def matrix_monoid(dim: int, q: int) -> FiniteSemigroup:
    """All ``dim x dim`` matrices over GF(q) under multiplication.

    Matrices are indexed by their row-major entries read as a base-q number.
    """
    if q not in MATRIX_FIELDS:
        raise SpecError(f"unsupported field size {q}; expected one of {MATRIX_FIELDS}")
    if not 1 <= dim <= MAX_MATRIX_DIM:
        raise SpecError(f"unsupported dimension {dim}; expected 1..{MAX_MATRIX_DIM}")
    cells = dim * dim
    n = q**cells
    digits = np.array(list(itertools.product(range(q), repeat=cells)), dtype=np.int64)
    mats = digits.reshape(n, dim, dim)
    weights = q ** np.arange(cells - 1, -1, -1, dtype=np.int64)
    table = np.empty((n, n), dtype=_index_dtype(n))
    for i in range(n):
        prod = np.matmul(mats[i], mats) % q                 # A_i @ A_j for every j
        table[i] = prod.reshape(n, cells) @ weights
    labels = tuple(
        "[" + ",".join("[" + ",".join(map(str, row)) + "]" for row in m) + "]" for m in mats.tolist()
    )
    return FiniteSemigroup(table, labels, "matrix-monoid")


def build_semigroup(spec: SemigroupSpec) -> FiniteSemigroup:
    if spec.kind == "cayley":
        if spec.table is None:
            raise SpecError("cayley spec without a table")
        return from_table(spec.table)
    if spec.kind == "transformations":
        return from_transformations(spec.generators, spec.points, spec.adjoin_identity)
    if spec.kind == "matrix":
        if spec.dim is None or spec.field is None:
            raise SpecError("matrix spec needs both 'dim' and 'field'")
        return matrix_monoid(spec.dim, spec.field)
    raise SpecError(f"unknown semigroup kind {spec.kind!r}")


def _ints(tokens: list[str], lineno: int, line: str) -> list[int]:
    out = []
    for tok in tokens:
        try:
            out.append(int(tok))
        except ValueError:
            raise SpecError(f"expected an integer, got {tok!r}", lineno, line.find(tok) + 1) from None
    return out


def parse_spec(text: str) -> SemigroupSpec:
    """Parse the line-oriented semigroup description format.

    ::

        kind cayley|transformations|matrix
        order N            # cayley, followed by N lines "row i: v0 ... v(N-1)"
        points N           # transformations, then "gen: i0 ... i(N-1)" lines
        adjoin-identity true|false
        dim N / field Q    # matrix
    """
    kind = None
    order = points = dim = q = None
    rows: dict[int, list[int]] = {}
    gens: list[list[int]] = []
    adjoin = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        col = raw.find(line) + 1
        if line.startswith("row ") or line.startswith("gen:") or line.startswith("gen "):
            head, sep, rest = line.partition(":")
            if not sep:
                raise SpecError("missing ':'", lineno, col)
            values = _ints(rest.split(), lineno, raw)
            if head.startswith("row"):
                (i,) = _ints(head.split()[1:2] or ["?"], lineno, raw)
                if i in rows:
                    raise SpecError(f"duplicate row {i}", lineno, col)
                rows[i] = values
            else:
                gens.append(values)
            continue
        key, _, value = line.partition(" ")
        value = value.strip()
        if key == "kind":
            if value not in ("cayley", "transformations", "matrix"):
                raise SpecError(f"unknown kind {value!r}", lineno, col + len(key) + 1)
            kind = value
        elif key in ("order", "points", "dim", "field"):
            (n,) = _ints([value], lineno, raw)
            if n <= 0:
                raise SpecError(f"{key} must be positive", lineno, col + len(key) + 1)
            if key == "order":
                order = n
            elif key == "points":
                points = n
            elif key == "dim":
                dim = n
            else:
                q = n
        elif key == "adjoin-identity":
            if value not in ("true", "false"):
                raise SpecError("adjoin-identity must be true or false", lineno, col + len(key) + 1)
            adjoin = value == "true"
        else:
            raise SpecError(f"unrecognized directive {key!r}", lineno, col)

    if kind is None:
        raise SpecError("missing 'kind' line", 1, 1)
    if kind == "cayley":
        if order is None:
            raise SpecError("cayley spec needs an 'order' line")
        if sorted(rows) != list(range(order)):
            raise SpecError(f"expected rows 0..{order - 1}, got {sorted(rows)}")
        for i, r in rows.items():
            if len(r) != order:
                raise SpecError(f"row {i} has {len(r)} entries, expected {order}")
            if any(v < 0 or v >= order for v in r):
                raise SpecError(f"row {i} has an entry outside 0..{order - 1}")
        return SemigroupSpec("cayley", table=tuple(tuple(rows[i]) for i in range(order)))
    if kind == "transformations":
        if points is None:
            raise SpecError("transformations spec needs a 'points' line")
        return SemigroupSpec(
            "transformations", points=points, generators=tuple(map(tuple, gens)), adjoin_identity=adjoin
        )
    return SemigroupSpec("matrix", dim=dim, field=q)


def load_semigroup(path) -> FiniteSemigroup:
    with open(path, encoding="utf-8") as fh:
        return build_semigroup(parse_spec(fh.read()))


def idempotents(S: FiniteSemigroup) -> list[int]:
    diag = S.table[np.arange(S.order), np.arange(S.order)]
    return [int(i) for i in np.flatnonzero(diag == np.arange(S.order))]


def _partition(keys: Sequence) -> tuple[tuple[int, ...], ...]:
    classes: dict = {}
    for i, k in enumerate(keys):
        classes.setdefault(k, []).append(i)
    return tuple(tuple(c) for c in sorted(classes.values()))


def green_classes(S: FiniteSemigroup) -> GreenStructure:
    """Green's R, L and H classes via principal one-sided ideals of S^1."""
    t = S.table
    right = [frozenset(t[a].tolist()) | {a} for a in range(S.order)]      # a S^1
    left = [frozenset(t[:, a].tolist()) | {a} for a in range(S.order)]    # S^1 a
    r = _partition(right)
    l = _partition(left)
    h = _partition(list(zip(right, left)))
    return GreenStructure(r, l, h)


def green_classes_bruteforce(S: FiniteSemigroup) -> GreenStructure:
    """Definition-based oracle: a R b iff ax = b and by = a for some x, y in S^1."""
    n = S.order
    rows = S.rows

    def related(a, b, right_side):
        if a == b:
            return True
        if right_side:
            return any(rows[a][x] == b for x in range(n)) and any(rows[b][y] == a for y in range(n))
        return any(rows[x][a] == b for x in range(n)) and any(rows[y][b] == a for y in range(n))

    def classes(right_side):
        label = [-1] * n
        for a in range(n):
            if label[a] < 0:
                label[a] = a
                for b in range(a + 1, n):
                    if label[b] < 0 and related(a, b, right_side):
                        label[b] = a
        return label

    rl, ll = classes(True), classes(False)
    return GreenStructure(_partition(rl), _partition(ll), _partition(list(zip(rl, ll))))


def index_period(S: FiniteSemigroup, a: int) -> IndexPeriod:
    rows = S.rows
    seen = {a: 1}
    x, k = a, 1
    while True:
        x = rows[x][a]
        k += 1
        if x in seen:
            h = seen[x]
            return IndexPeriod(h, k - h)
        seen[x] = k


def lies_in_subgroup(S: FiniteSemigroup, a: int) -> bool:
    return index_period(S, a).index_h == 1


def h_related_to_idempotent(S: FiniteSemigroup, a: int, green: GreenStructure | None = None) -> bool:
    """Second characterization of subgroup membership, used as a cross-check."""
    green = green or green_classes(S)
    idem = set(idempotents(S))
    for cls in green.h_classes:
        if a in cls:
            return any(x in idem for x in cls)
    raise ValueError(f"element {a} missing from H-partition")


def _class_index(classes) -> dict[int, int]:
    return {x: n for n, cls in enumerate(classes) for x in cls}


def lemma1_violations(S: FiniteSemigroup, green: GreenStructure | None = None) -> list[tuple[int, int, int]]:
    """Triples ``(a, p, q)`` with ``p <= q``, ``a^q`` idempotent, ``a^p R a^q`` but not ``a^p H a^q``.

    Powers of ``a`` repeat with the index and period of ``a``, so exponents
    ``1 .. h+d-1`` for ``p`` and a window of ``h+d`` exponents above it for
    ``q`` reach every pair of power values; the result is empty whenever R
    implies H between a power and an idempotent power.
    """
    green = green or green_classes(S)
    r_of, h_of = _class_index(green.r_classes), _class_index(green.h_classes)
    rows = S.rows
    out = []
    for a in range(S.order):
        ip = index_period(S, a)
        span = ip.index_h + ip.period_d
        pw = [None, a]
        for _ in range(2 * span):
            pw.append(rows[pw[-1]][a])
        for p in range(1, span):
            for q in range(p, p + span):
                x, y = pw[p], pw[q]
                if rows[y][y] == y and r_of[x] == r_of[y] and h_of[x] != h_of[y]:
                    out.append((a, p, q))
    return out
