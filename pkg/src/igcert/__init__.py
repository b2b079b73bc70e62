"""Biordered sets, rewriting in IG(E), and replayable Green's-relation certificates."""
from .biorder import BiorderedSet, extract_biorder, presentation
from .decompose import Decomposition, decompose, verify_decomposition
from .green import GreenWitness, HWitness, idempotent_root, verify_witness
from .rewrite import Budget, Proved, Refuted, TransitionPath, Unknown, prove_equiv, replay_path
from .semigroup import FiniteSemigroup, build_semigroup, load_semigroup, parse_spec
from .theorem import (
    PeriodicityCertificate,
    SubgroupCertificate,
    find_periodicity,
    subgroup_certificate,
    verify_subgroup_certificate,
)

__version__ = "0.1.0"
