import itertools

import pytest

from igcert.green import VerificationError, power, verify_witness
from igcert.rewrite import Budget, Proved, Transition, TransitionPath, prove_equiv
from igcert.theorem import (
    CertificateUnavailable,
    PeriodicityCertificate,
    SubgroupCertificate,
    canonical_k,
    certificate_problem,
    certify,
    find_periodicity,
    grid_endpoints,
    idempotency_path,
    index_collapse,
    periodicity_problem,
    power_pairs,
    subgroup_certificate,
    verify_subgroup_certificate,
)


def forced(E, w, h, d):
    """A periodicity certificate for a chosen (h, d), not necessarily the first one found."""
    v = prove_equiv(E, power(w, h), power(w, h + d))
    assert isinstance(v, Proved)
    return PeriodicityCertificate(tuple(w), h, d, v.path)


def test_power_pair_order():
    assert list(power_pairs(4)) == [(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1)]


def test_canonical_k():
    assert [canonical_k(h, d) for h, d in [(1, 1), (1, 3), (2, 1), (3, 2), (4, 2), (5, 3)]] == [1, 3, 2, 4, 4, 6]


def test_letter_is_periodic(rz):
    pc = find_periodicity(rz, (0,))
    assert (pc.h, pc.d) == (1, 1)
    assert len(pc.proof.steps) == 1
    assert periodicity_problem(rz, pc) is None


def test_right_zero_pair(rz):
    pc = find_periodicity(rz, (0, 1))
    assert (pc.h, pc.d) == (1, 1)
    c = subgroup_certificate(rz, (0, 1), pc)
    assert (c.k, c.e, c.grid) == (1, 1, ())
    assert verify_subgroup_certificate(rz, c)


def test_band_diagonal_not_periodic(band):
    assert find_periodicity(band, (0, 3), Budget(max_nodes=2000)) is None
    with pytest.raises(CertificateUnavailable) as info:
        certify(band, (0, 3), Budget(max_nodes=2000))
    assert info.value.report()["verdict"]["status"] == "unknown"


def test_trivial_branch(m2):
    c = subgroup_certificate(m2, (5,), find_periodicity(m2, (5,)))
    assert (c.k, c.ell, c.m, c.i) == (1, 0, 0, 1)
    assert c.hwit.a == (5,) and c.hwit.b == (5,)
    assert verify_subgroup_certificate(m2, c)


def test_idempotency_path(m2):
    pc = forced(m2, (1, 2), 2, 3)
    k = canonical_k(2, 3)
    p = idempotency_path(pc, k)
    assert p.start == power((1, 2), k) and p.end == power((1, 2), 2 * k)


@pytest.mark.parametrize("h, d", [(1, 2), (2, 1), (2, 2), (1, 3), (3, 2)])
def test_grid_branch(corpus, h, d):
    # non-minimal (h, d) force k > 1, so the full transport grid and both Lemma 1 steps run
    seen = set()
    for E in corpus.values():
        for w in itertools.chain.from_iterable(itertools.product(range(E.size), repeat=n) for n in (1, 2, 3)):
            v = prove_equiv(E, power(w, h), power(w, h + d))
            if not isinstance(v, Proved):
                continue
            c = subgroup_certificate(E, w, PeriodicityCertificate(w, h, d, v.path))
            assert c.k == canonical_k(h, d) > 1
            assert c.ell + c.m + 1 == c.k and c.ell + 1 <= c.k
            assert [label for label, _ in c.grid] == ["E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8"]
            assert all(verify_witness(E, wit) for _, wit in c.grid)
            assert (c.hwit.a, c.hwit.b) == (w, (c.e,))
            assert E.source.mul(E.to_source[c.e], E.to_source[c.e]) == E.to_source[c.e]
            assert certificate_problem(E, c) is None
            seen.add((c.ell, c.i))
    assert {0, c.k - 1} <= {ell for ell, _ in seen}
    assert {1, 2, 3} <= {i for _, i in seen}


def tampered(c, **changes):
    d = c.as_dict()
    d.update(changes)
    return SubgroupCertificate.from_dict(d)


@pytest.fixture(scope="module")
def grid_cert(m2):
    return subgroup_certificate(m2, (1, 2), forced(m2, (1, 2), 2, 2))


def test_grid_endpoints_match(grid_cert):
    c = grid_cert
    expected = grid_endpoints(c.w, c.k, c.ell, c.i, c.e)
    for label, wit in c.grid:
        assert (wit.kind, wit.a, wit.b) == expected[label]


def test_tampered_ell(m2, grid_cert):
    assert verify_subgroup_certificate(m2, grid_cert)
    bad = tampered(grid_cert, ell=grid_cert.ell + 1)
    assert "index arithmetic" in certificate_problem(m2, bad)


def test_tampered_k(m2, grid_cert):
    bad = tampered(grid_cert, k=grid_cert.k + 1, m=grid_cert.m + 1)
    assert "least multiple" in certificate_problem(m2, bad)


def test_truncated_grid_path(m2, grid_cert):
    d = grid_cert.as_dict()
    for entry in d["grid"]:
        steps = entry["witness"]["fwd_proof"]["steps"]
        if steps:
            steps.pop()
            break
    bad = SubgroupCertificate.from_dict(d)
    assert not verify_subgroup_certificate(m2, bad)
    assert certificate_problem(m2, bad).startswith("grid edge")


def test_wrong_letter(m2, grid_cert):
    bad = tampered(grid_cert, e=(grid_cert.e + 1) % m2.size)
    assert not verify_subgroup_certificate(m2, bad)


def test_round_trip(m2, grid_cert):
    again = SubgroupCertificate.from_dict(grid_cert.as_dict())
    assert again.as_dict() == grid_cert.as_dict()
    assert verify_subgroup_certificate(m2, again)
    keys = set(grid_cert.as_dict())
    assert {"w", "e", "k", "ell", "m", "i", "idem_path", "decomposition", "grid", "hwit"} <= keys


def test_invalid_periodicity_rejected(rz):
    bogus = PeriodicityCertificate((0, 1), 1, 1, TransitionPath((0, 1), (Transition(0, "contract", (0, 1, 0)),)))
    with pytest.raises(VerificationError):
        subgroup_certificate(rz, (0, 1), bogus)


def test_index_collapse(m2):
    for w in [(1,), (1, 2), (2, 1, 2)]:
        pc = find_periodicity(m2, w)
        assert isinstance(index_collapse(m2, w, pc.d), Proved)
