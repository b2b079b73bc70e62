"""Command-line front end.

Every command reads a semigroup spec file (see :func:`igcert.semigroup.parse_spec`)
and prints canonical JSON (sorted keys, LF endings) or a short text summary.
Words are comma-separated idempotent indices such as ``0,2,1``.

Exit codes: 0 proved / ok, 1 refuted / invalid, 2 unknown / budget exhausted,
3 input error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from .biorder import BiorderedSet, extract_biorder, presentation
from .corpus import full_transformation_monoid, random_transformation_semigroup, right_zero
from .decompose import Decomposition, decompose, decomposition_problem
from .green import idempotent_root, witness_from_dict, witness_problem
from .rewrite import (
    DEFAULT_MAX_NODES,
    Budget,
    BudgetError,
    PatternMismatch,
    Proved,
    Refuted,
    TransitionPath,
    check_word,
    eval_image,
    neighbors,
    path_valid,
    prove_equiv,
    replay_path,
)
from .semigroup import (
    SpecError,
    green_classes,
    green_classes_bruteforce,
    idempotents,
    lemma1_violations,
    load_semigroup,
    matrix_monoid,
)
from .theorem import (
    DEFAULT_POWER_CAP,
    CertificateUnavailable,
    PeriodicityCertificate,
    SubgroupCertificate,
    certificate_problem,
    index_collapse,
    periodicity_problem,
    periodicity_search,
    subgroup_certificate,
)

EXIT_OK, EXIT_REFUTED, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2, 3
STATUS_EXIT = {"proved": EXIT_OK, "refuted": EXIT_REFUTED, "unknown": EXIT_UNKNOWN}


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str | None = None
    max_len: int | None = None
    max_nodes: int = DEFAULT_MAX_NODES
    power_cap: int = DEFAULT_POWER_CAP
    budget_multiplier: int = 10
    fmt: str = "json"
    seed: int = 0

    def __post_init__(self):
        if self.max_nodes <= 0 or (self.max_len is not None and self.max_len <= 0):
            raise InputError("budgets must be positive")
        if self.power_cap < 2 or self.budget_multiplier < 1:
            raise InputError("--power-cap must be at least 2 and --budget-multiplier at least 1")
        if self.fmt not in ("json", "text"):
            raise InputError(f"unknown format {self.fmt!r}")

    @property
    def budget(self) -> Budget:
        return Budget(self.max_len, self.max_nodes)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


def parse_word(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"cannot read word {text!r}; expected comma-separated integers like 0,2,1") from None


def _word(E: BiorderedSet, text: str):
    try:
        return check_word(E, parse_word(text))
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _load(path: str) -> BiorderedSet:
    try:
        return extract_biorder(load_semigroup(path))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _verdict_exit(verdict) -> int:
    return STATUS_EXIT[verdict.status]


# -- commands ---------------------------------------------------------------------------
# Each returns (payload, exit code, one-line text summary).


def cmd_extract(cfg, E, args):
    labels = [E.label(e) for e in range(E.size)]
    payload = {"type": "biordered-set", **E.as_dict(), "labels": labels}
    return payload, EXIT_OK, f"|E| = {E.size}, {sum(g is not None for row in E.product for g in row)} defined products"


def cmd_presentation(cfg, E, args):
    rels = presentation(E)
    text = "\n".join(f"{r.lhs[0]} {r.lhs[1]} = {r.rhs[0]}" for r in rels)
    return {"type": "presentation", "size": E.size, "relations": [r.as_dict() for r in rels]}, EXIT_OK, text


def cmd_neighbors(cfg, E, args):
    w = _word(E, args.word)
    moves = neighbors(E, w, cfg.max_len)
    payload = {
        "type": "neighbors",
        "word": list(w),
        "moves": [{"transition": t.as_dict(), "word": list(v)} for t, v in moves],
    }
    text = "\n".join(f"{t.kind} @{t.pos} {list(t.triple)} -> {list(v)}" for t, v in moves)
    return payload, EXIT_OK, text


def cmd_equiv(cfg, E, args):
    w1, w2 = _word(E, args.w1), _word(E, args.w2)
    verdict = prove_equiv(E, w1, w2, cfg.budget)
    payload = {"type": "equiv", "w1": list(w1), "w2": list(w2), "verdict": verdict.as_dict()}
    return payload, _verdict_exit(verdict), _verdict_text(verdict)


def cmd_idem_root(cfg, E, args):
    w = _word(E, args.word)
    verdict = idempotent_root(E, w, cfg.budget)
    payload = {"type": "idem-root", "w": list(w), "verdict": verdict.as_dict()}
    return payload, _verdict_exit(verdict), _verdict_text(verdict)


def cmd_decompose(cfg, E, args):
    w = _word(E, args.word)
    verdict = idempotent_root(E, w, cfg.budget)
    if not isinstance(verdict, Proved):
        payload = {"type": "report", "stage": "idempotent root", "w": list(w), "verdict": verdict.as_dict()}
        return payload, _verdict_exit(verdict), _verdict_text(verdict)
    dec = decompose(E, w, verdict.path)
    payload = {"type": "decomposition", "w": list(w), "idem_path": verdict.path.as_dict(), "decomposition": dec.as_dict()}
    text = f"u = {list(dec.u)}, f = {dec.f_letter} at position {dec.f_pos}, v = {list(dec.v)}"
    return payload, EXIT_OK, text


def _no_period(w, tried):
    attempts = [{"h": h, "d": d, "verdict": v.as_dict()} for h, d, v in tried]
    code = EXIT_REFUTED if all(isinstance(v, Refuted) for _, _, v in tried) else EXIT_UNKNOWN
    return {"type": "report", "stage": "periodicity", "w": list(w), "attempts": attempts}, code, "no (h, d) proved"


def cmd_periodic(cfg, E, args):
    w = _word(E, args.word)
    pc, tried = periodicity_search(E, w, cfg.budget, cfg.power_cap)
    if pc is None:
        return _no_period(w, tried)
    collapse = index_collapse(E, w, pc.d, cfg.budget, cfg.budget_multiplier)
    payload = {"type": "periodicity", **pc.as_dict(), "collapse": collapse.as_dict()}
    return payload, EXIT_OK, f"h = {pc.h}, d = {pc.d}; w ~ w^{pc.d + 1}: {collapse.status}"


def cmd_certify(cfg, E, args):
    w = _word(E, args.word)
    pc, tried = periodicity_search(E, w, cfg.budget, cfg.power_cap)
    if pc is None:
        return _no_period(w, tried)
    try:
        cert = subgroup_certificate(E, w, pc, cfg.budget)
    except CertificateUnavailable as exc:
        return {"type": "report", "w": list(w), **exc.report()}, _verdict_exit(exc.verdict), str(exc)
    payload = {"type": "subgroup", **cert.as_dict()}
    return payload, EXIT_OK, f"w H [{cert.e}] with k = {cert.k}, ell = {cert.ell}, m = {cert.m}, i = {cert.i}"


def verification_problem(E: BiorderedSet, doc: dict) -> str | None:
    """Replay-only check of any JSON document the other commands emit."""
    kind = doc.get("type")
    if kind is None:
        kind = "witness" if "kind" in doc else "path"
    if kind == "path":
        try:
            replay_path(E, TransitionPath.from_dict(doc))
        except PatternMismatch as exc:
            return str(exc)
        return None
    if kind == "witness":
        return witness_problem(E, witness_from_dict(doc))
    if kind in ("equiv", "idem-root"):
        w1 = tuple(doc["w1"] if kind == "equiv" else doc["w"])
        v = doc["verdict"]
        if v["status"] == "proved":
            path = TransitionPath.from_dict(v["path"])
            end = tuple(doc["w2"]) if kind == "equiv" else path.end
            if len(end) != 1 and kind == "idem-root":
                return "idempotent-root path does not end at a single letter"
            return None if path_valid(E, path, w1, end) else "path does not replay between the stated words"
        if v["status"] == "refuted":
            a, b = v["images"]
            if kind == "equiv":
                ok = (a, b) == (eval_image(E, w1), eval_image(E, doc["w2"])) and a != b
            else:
                a0 = eval_image(E, w1)
                ok = (a, b) == (a0, E.source.mul(a0, a0)) and a != b
            return None if ok else "refutation images do not match the words"
        return "an unknown verdict carries nothing to check"
    if kind == "decomposition":
        w = tuple(doc["w"])
        idem = TransitionPath.from_dict(doc["idem_path"])
        if len(idem.end) != 1 or not path_valid(E, idem, w, idem.end):
            return "idempotent path does not replay to a single letter"
        return decomposition_problem(E, w, Decomposition.from_dict(doc["decomposition"]))
    if kind == "periodicity":
        pc = PeriodicityCertificate.from_dict(doc)
        problem = periodicity_problem(E, pc)
        if problem or "collapse" not in doc or doc["collapse"]["status"] != "proved":
            return problem
        collapse = TransitionPath.from_dict(doc["collapse"]["path"])
        target = pc.w * (pc.d + 1)
        return None if path_valid(E, collapse, pc.w, target) else "index-collapse path does not replay"
    if kind == "subgroup":
        return certificate_problem(E, SubgroupCertificate.from_dict(doc))
    return f"nothing to verify in a document of type {kind!r}"


def cmd_verify(cfg, E, args):
    try:
        with open(args.certificate, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {args.certificate}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise InputError("certificate must be a JSON object")
    try:
        problem = verification_problem(E, doc)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        problem = f"malformed certificate: {exc!r}"
    payload = {"type": "verification", "ok": problem is None, "problem": problem}
    return payload, EXIT_OK if problem is None else EXIT_REFUTED, "ok" if problem is None else problem


def selftest_checks(seed: int = 0, samples: int = 50) -> list[tuple[str, bool]]:
    """Finite oracles: extraction counts, Green cross-check, Lemma 1, a tiny certificate."""
    checks = []
    T2, T3, M2 = full_transformation_monoid(2), full_transformation_monoid(3), matrix_monoid(2, 2)
    checks.append(("idempotent counts T2=3 T3=10 M2(GF2)=8", [len(idempotents(S)) for S in (T2, T3, M2)] == [3, 10, 8]))
    for name, S in (("T3", T3), ("M2(GF2)", M2)):
        checks.append((f"green classes {name}", green_classes(S) == green_classes_bruteforce(S)))
    rng = random.Random(seed)
    ok = not lemma1_violations(T3)
    for _ in range(samples):
        ok = ok and not lemma1_violations(random_transformation_semigroup(rng, 4, rng.randint(1, 3)))
    checks.append((f"lemma 1 oracle on T3 and {samples} subsemigroups of T4", ok))
    E = extract_biorder(right_zero(2))
    pc, _ = periodicity_search(E, (0, 1))
    cert = subgroup_certificate(E, (0, 1), pc) if pc else None
    checks.append(("certificate for 0,1 over a right-zero band", cert is not None and certificate_problem(E, cert) is None))
    return checks


def _verdict_text(verdict) -> str:
    if isinstance(verdict, Proved):
        return f"proved in {len(verdict.path.steps)} steps: {list(verdict.path.start)} -> {list(verdict.path.end)}"
    if isinstance(verdict, Refuted):
        return f"refuted: images {verdict.image1} != {verdict.image2}"
    return f"unknown after {verdict.nodes} words (max length {verdict.max_len})"


COMMANDS = {
    "extract": (cmd_extract, ()),
    "presentation": (cmd_presentation, ()),
    "neighbors": (cmd_neighbors, ("word",)),
    "equiv": (cmd_equiv, ("w1", "w2")),
    "idem-root": (cmd_idem_root, ("word",)),
    "decompose": (cmd_decompose, ("word",)),
    "periodic": (cmd_periodic, ("word",)),
    "certify": (cmd_certify, ("word",)),
    "verify": (cmd_verify, ("certificate",)),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--max-len", type=int, default=None)
    common.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    common.add_argument("--power-cap", type=int, default=DEFAULT_POWER_CAP)
    common.add_argument("--budget-multiplier", type=int, default=10)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0)
    parser = _Parser(prog="igcert", description="Certificates for the free idempotent generated semigroup IG(E).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, positionals) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common])
        p.add_argument("spec")
        for pos in positionals:
            p.add_argument(pos)
    sub.add_parser("selftest", parents=[common])
    return parser


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(
            args.command, getattr(args, "spec", None), args.max_len, args.max_nodes,
            args.power_cap, args.budget_multiplier, args.format, args.seed,
        )
        if cfg.command == "selftest":
            checks = selftest_checks(cfg.seed)
            payload = {"type": "selftest", "checks": [{"name": n, "ok": ok} for n, ok in checks]}
            code = EXIT_OK if all(ok for _, ok in checks) else EXIT_REFUTED
            text = "\n".join(f"{'PASS' if ok else 'FAIL'} {n}" for n, ok in checks)
        else:
            E = _load(cfg.input)
            payload, code, text = COMMANDS[cfg.command][0](cfg, E, args)
    except (InputError, SpecError, BudgetError) as exc:
        err.write(f"igcert: {exc}\n")
        return EXIT_INPUT
    except SystemExit as exc:   # --help
        return EXIT_OK if not exc.code else EXIT_INPUT
    out.write(dumps(payload) if cfg.fmt == "json" else text.rstrip("\n") + "\n")
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
