"""Certificates that periodic elements of IG(E) lie in subgroups.

Pipeline for a word ``w = e_1 ... e_n``:

1. :func:`find_periodicity` proves ``w^h ~ w^(h+d)`` for the first pair found.
2. ``k`` is the least multiple of ``d`` with ``k >= h``; ``w^k`` is then
   idempotent in IG(E) and a search finds the letter ``e`` with ``w^k ~ e``.
3. That path is decomposed as ``w^k = w^l (e_1..e_{i-1}) e_i (e_{i+1}..e_n) w^m``
   with ``w^l e_1..e_i  L  e_i  R  e_i..e_n w^m``.
4. Transport and composition give ``w^(l+1) R e``; Lemma 1 upgrades it to H,
   which yields ``w L e``, and the mirrored Lemma 1 turns that into ``w H e``.

Only steps 1 and 2 search; everything after is assembled from their paths.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .biorder import BiorderedSet
from .decompose import Decomposition, decompose, decomposition_problem
from .green import (
    LEFT,
    RIGHT,
    GreenWitness,
    HWitness,
    compose_transitive,
    from_path,
    h_from_path,
    idempotent_root,
    invert_witness,
    lemma1_dual_h_witness,
    lemma1_h_witness,
    power,
    transport,
    witness_from_dict,
    witness_problem,
)
from .rewrite import (
    Budget,
    PatternMismatch,
    Proved,
    Refuted,
    TransitionPath,
    Verdict,
    Word,
    check_word,
    concat,
    embed,
    identity_path,
    prove_equiv,
    replay_path,
)

DEFAULT_POWER_CAP = 8
METADATA = {
    "basic_pairs": "ef=e | ef=f | fe=e | fe=f",
    "grid": "E1-E8 by transport and composition of the decomposition witnesses",
}


class CertificateUnavailable(RuntimeError):
    """A search inside the pipeline did not prove what it needed; nothing is claimed."""

    def __init__(self, stage: str, verdict: Verdict):
        self.stage = stage
        self.verdict = verdict
        super().__init__(f"{stage}: search returned {verdict.status}")

    def report(self) -> dict:
        return {"stage": self.stage, "verdict": self.verdict.as_dict()}


@dataclass(frozen=True)
class PeriodicityCertificate:
    w: Word
    h: int
    d: int
    proof: TransitionPath

    def as_dict(self) -> dict:
        return {"w": list(self.w), "h": self.h, "d": self.d, "proof": self.proof.as_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "PeriodicityCertificate":
        return cls(tuple(d["w"]), int(d["h"]), int(d["d"]), TransitionPath.from_dict(d["proof"]))


@dataclass(frozen=True)
class SubgroupCertificate:
    w: Word
    e: int
    k: int
    ell: int
    m: int
    i: int
    periodicity: PeriodicityCertificate
    idempotency_path: TransitionPath     # w^k  ->  w^(2k)
    idem_path: TransitionPath            # w^k  ->  e
    decomposition: Decomposition
    grid: tuple[tuple[str, GreenWitness], ...]
    hwit: HWitness
    metadata: dict = field(default_factory=lambda: dict(METADATA))

    def as_dict(self) -> dict:
        return {
            "w": list(self.w),
            "e": self.e,
            "k": self.k,
            "ell": self.ell,
            "m": self.m,
            "i": self.i,
            "periodicity": self.periodicity.as_dict(),
            "idempotency_path": self.idempotency_path.as_dict(),
            "idem_path": self.idem_path.as_dict(),
            "decomposition": self.decomposition.as_dict(),
            "grid": [{"label": label, "witness": wit.as_dict()} for label, wit in self.grid],
            "hwit": self.hwit.as_dict(),
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SubgroupCertificate":
        return cls(
            tuple(d["w"]), int(d["e"]), int(d["k"]), int(d["ell"]), int(d["m"]), int(d["i"]),
            PeriodicityCertificate.from_dict(d["periodicity"]),
            TransitionPath.from_dict(d["idempotency_path"]),
            TransitionPath.from_dict(d["idem_path"]),
            Decomposition.from_dict(d["decomposition"]),
            tuple((g["label"], witness_from_dict(g["witness"])) for g in d["grid"]),
            witness_from_dict(d["hwit"]),
            dict(d.get("metadata", {})),
        )


def power_pairs(power_cap: int):
    """(h, d) with h + d <= power_cap, by increasing h + d and then h."""
    for total in range(2, power_cap + 1):
        for h in range(1, total):
            yield h, total - h


def periodicity_search(E: BiorderedSet, w, budget: Budget = Budget(), power_cap: int = DEFAULT_POWER_CAP):
    """Return ``(certificate or None, [(h, d, verdict), ...])`` for every pair tried."""
    w = check_word(E, w)
    budget.resolve(w)
    tried = []
    for h, d in power_pairs(power_cap):
        verdict = prove_equiv(E, power(w, h), power(w, h + d), budget)
        tried.append((h, d, verdict))
        if isinstance(verdict, Proved):
            return PeriodicityCertificate(w, h, d, verdict.path), tried
    return None, tried


def find_periodicity(E: BiorderedSet, w, budget: Budget = Budget(), power_cap: int = DEFAULT_POWER_CAP):
    return periodicity_search(E, w, budget, power_cap)[0]


def periodicity_problem(E: BiorderedSet, pc: PeriodicityCertificate) -> str | None:
    if pc.h < 1 or pc.d < 1 or not pc.w:
        return "periodicity certificate needs a non-empty word and h, d >= 1"
    return _path_problem(E, pc.proof, power(pc.w, pc.h), power(pc.w, pc.h + pc.d), "periodicity proof")


def _path_problem(E, path: TransitionPath, start: Word, end: Word, what: str) -> str | None:
    if path.start != tuple(start):
        return f"{what} starts at {list(path.start)}, expected {list(start)}"
    try:
        got = replay_path(E, path)
    except PatternMismatch as exc:
        return f"{what}: {exc}"
    if got != tuple(end):
        return f"{what} ends at {list(got)}, expected {list(end)}"
    return None


def canonical_k(h: int, d: int) -> int:
    return d * -(-h // d)


def idempotency_path(pc: PeriodicityCertificate, k: int) -> TransitionPath:
    """``w^k -> w^(2k)`` by shifting the periodicity proof along ``k/d`` times."""
    w, h, d = pc.w, pc.h, pc.d
    pieces = [embed(pc.proof, right=power(w, j)) for j in range(k - h, 2 * k - h, d)]
    return concat(*pieces)


def grid_endpoints(w: Word, k: int, ell: int, i: int, e: int) -> dict[str, tuple[str, Word, Word]]:
    """Expected (kind, a, b) for every grid edge."""
    P, f, Q = w[: i - 1], w[i - 1], w[i:]
    head = power(w, ell) + P + (f,)
    return {
        "E1": ("L", power(w, ell + 1), (f,) + Q),
        "E2": ("R", (f,), (f,) + Q),
        "E3": ("R", head, power(w, ell + 1)),
        "E4": ("R", head, power(w, k)),
        "E5": ("R", power(w, ell + 1), (e,)),
        "E6": ("L", (f,) + Q, tuple(w)),
        "E7": ("L", tuple(w), power(w, ell + 1)),
        "E8": ("L", tuple(w), (e,)),
    }


def _grid(E, w: Word, k: int, ell: int, m: int, i: int, e: int, dec: Decomposition, idem: TransitionPath):
    P, f, Q = w[: i - 1], w[i - 1], w[i:]
    u = dec.u
    e1 = transport(dec.lwit, Q, RIGHT)
    e2 = GreenWitness(
        "R", (f,), (f,) + Q, Q, power(w, m) + dec.rwit.bwd_mult,
        identity_path((f,) + Q), dec.rwit.bwd_proof,
    )
    e3 = transport(e2, u, LEFT)
    e4 = transport(dec.rwit, u, LEFT)
    e5 = compose_transitive(compose_transitive(invert_witness(e3), e4), from_path("R", idem))
    h1 = lemma1_h_witness(E, w, ell + 1, k, e, e5, idem)
    e6 = GreenWitness(
        "L", (f,) + Q, w, P, dec.lwit.fwd_mult + power(w, ell),
        identity_path(w), embed(dec.lwit.fwd_proof, right=Q),
    )
    e7 = compose_transitive(invert_witness(e6), invert_witness(e1))
    e8 = compose_transitive(e7, h1.l)
    hwit = lemma1_dual_h_witness(E, w, 1, k, e, e8, idem)
    grid = (("E1", e1), ("E2", e2), ("E3", e3), ("E4", e4), ("E5", e5), ("E6", e6), ("E7", e7), ("E8", e8))
    return grid, hwit


def subgroup_certificate(
    E: BiorderedSet, w, pc: PeriodicityCertificate, budget: Budget = Budget()
) -> SubgroupCertificate:
    w = check_word(E, w)
    if pc.w != w:
        raise ValueError("periodicity certificate is for a different word")
    problem = periodicity_problem(E, pc)
    if problem:
        from .green import VerificationError

        raise VerificationError(problem)
    k = canonical_k(pc.h, pc.d)
    idem_sq = idempotency_path(pc, k)
    root = idempotent_root(E, power(w, k), budget)
    if not isinstance(root, Proved):
        raise CertificateUnavailable(f"idempotent root of w^{k}", root)
    idem = root.path
    e = idem.end[0]
    dec = decompose(E, power(w, k), idem)
    n = len(w)
    ell, rem = divmod(dec.f_pos, n)
    i = rem + 1
    m = k - ell - 1
    if k == 1:
        grid, hwit = (), h_from_path(idem)
    else:
        grid, hwit = _grid(E, w, k, ell, m, i, e, dec, idem)
    return SubgroupCertificate(w, e, k, ell, m, i, pc, idem_sq, idem, dec, grid, hwit)


def certificate_problem(E: BiorderedSet, c: SubgroupCertificate) -> str | None:
    """First failing component of ``c``, or None when everything replays."""
    w = tuple(c.w)
    n = len(w)
    if not w or not all(0 <= x < E.size for x in w) or not 0 <= c.e < E.size:
        return "word or idempotent index out of range"
    problem = periodicity_problem(E, c.periodicity)
    if problem:
        return problem
    if c.periodicity.w != w:
        return "periodicity certificate is for a different word"
    if c.k != canonical_k(c.periodicity.h, c.periodicity.d):
        return f"k = {c.k} is not the least multiple of d = {c.periodicity.d} that is >= h = {c.periodicity.h}"
    if not (0 <= c.ell < c.k and 0 <= c.m < c.k and c.ell + c.m + 1 == c.k and 1 <= c.i <= n):
        return "index arithmetic fails: need 0 <= ell, m < k, ell + m + 1 = k, 1 <= i <= |w|"
    if c.decomposition.f_pos != c.ell * n + c.i - 1:
        return "decomposition position does not match ell and i"
    wk = power(w, c.k)
    problem = _path_problem(E, c.idempotency_path, wk, wk + wk, "idempotency path")
    if problem:
        return problem
    problem = _path_problem(E, c.idem_path, wk, (c.e,), "idempotent path")
    if problem:
        return problem
    problem = decomposition_problem(E, wk, c.decomposition)
    if problem:
        return f"decomposition: {problem}"
    if c.k == 1:
        if c.grid:
            return "k = 1 certificates carry no grid"
    else:
        expected = grid_endpoints(w, c.k, c.ell, c.i, c.e)
        labels = [label for label, _ in c.grid]
        if labels != list(expected):
            return f"grid labels {labels} differ from {list(expected)}"
        for label, wit in c.grid:
            kind, a, b = expected[label]
            if (wit.kind, wit.a, wit.b) != (kind, a, b):
                return f"grid edge {label} relates the wrong words"
            problem = witness_problem(E, wit)
            if problem:
                return f"grid edge {label}: {problem}"
    if not isinstance(c.hwit, HWitness) or c.hwit.a != w or c.hwit.b != (c.e,):
        return "H-witness does not relate w and e"
    problem = witness_problem(E, c.hwit)
    if problem:
        return f"H-witness: {problem}"
    return None


def verify_subgroup_certificate(E: BiorderedSet, c: SubgroupCertificate) -> bool:
    return certificate_problem(E, c) is None


def certify(E: BiorderedSet, w, budget: Budget = Budget(), power_cap: int = DEFAULT_POWER_CAP) -> SubgroupCertificate:
    pc, tried = periodicity_search(E, w, budget, power_cap)
    if pc is None:
        if not tried:
            raise ValueError("power_cap must be at least 2")
        unknown = [v for _, _, v in tried if not isinstance(v, Refuted)]
        raise CertificateUnavailable("periodicity", unknown[-1] if unknown else tried[-1][2])
    return subgroup_certificate(E, w, pc, budget)


def index_collapse(E: BiorderedSet, w, d: int, budget: Budget = Budget(), multiplier: int = 10) -> Verdict:
    """Search for ``w ~ w^(d+1)``, which must hold once ``w`` lies in a subgroup of period ``d``."""
    w = check_word(E, w)
    return prove_equiv(E, w, power(w, d + 1), budget.scaled(multiplier))
