import itertools
import time

from igcert.biorder import basic_product, case_tags, extract_biorder, presentation
from igcert.corpus import full_transformation_monoid, rectangular_band
from igcert.semigroup import from_table


def test_right_zero(rz):
    assert rz.size == 2
    assert rz.product == ((0, 1), (0, 1))


def test_right_zero_tags(rz):
    assert basic_product(rz, 0, 1) == (1, frozenset({2, 3}))
    assert basic_product(rz, 0, 0) == (0, frozenset({1, 2, 3, 4}))


def test_band_basic_pairs(band):
    # cells (1,1) (1,2) (2,1) (2,2) as indices 0..3
    cells = [(1, 1), (1, 2), (2, 1), (2, 2)]
    for (e, ce), (f, cf) in itertools.product(enumerate(cells), repeat=2):
        share = ce[0] == cf[0] or ce[1] == cf[1]
        assert band.defined(e, f) == share
        if share:
            assert band.product[e][f] == cells.index((ce[0], cf[1]))
    assert basic_product(band, 0, 3) is None
    assert len(presentation(band)) == 12


def test_t2_all_basic(t2):
    assert t2.size == 3
    assert all(g is not None for row in t2.product for g in row)
    assert len(presentation(t2)) == 9


def test_singleton():
    E = extract_biorder(from_table([[0]]))
    rels = presentation(E)
    assert [(r.lhs, r.rhs) for r in rels] == [((0, 0), (0,))]


def test_products_match_source(corpus, t3):
    for E in list(corpus.values()) + [t3]:
        S = E.source
        for e, f in itertools.product(range(E.size), repeat=2):
            a, b = E.to_source[e], E.to_source[f]
            ab, ba = S.mul(a, b), S.mul(b, a)
            basic = ab in (a, b) or ba in (a, b)
            g = E.product[e][f]
            assert (g is not None) == basic
            if basic:
                assert E.to_source[g] == ab
                assert S.mul(ab, ab) == ab
        for e in range(E.size):
            assert E.product[e][e] == e


def test_presentation_consistent(m2):
    rels = presentation(m2)
    assert len(rels) == sum(g is not None for row in m2.product for g in row) == 46
    for r in rels:
        assert m2.product[r.lhs[0]][r.lhs[1]] == r.rhs[0]
    assert [r.lhs for r in rels] == sorted(r.lhs for r in rels)


def test_case_tags_are_definitions(t3):
    S = t3.source
    for a, b in itertools.product(t3.to_source, repeat=2):
        tags = case_tags(S, a, b)
        ab, ba = S.mul(a, b), S.mul(b, a)
        assert (1 in tags, 2 in tags, 3 in tags, 4 in tags) == (ab == a, ab == b, ba == a, ba == b)


def test_single_tags():
    # on three points only tags 2 and 3 ever hold alone; four points realize all four
    for n, expected in ((3, {2, 3}), (4, {1, 2, 3, 4})):
        E = extract_biorder(full_transformation_monoid(n))
        seen = set()
        for e, f in itertools.product(range(E.size), repeat=2):
            bp = basic_product(E, e, f)
            if bp and len(bp[1]) == 1:
                seen |= bp[1]
        assert seen == expected


def test_extraction_is_fast():
    S = full_transformation_monoid(3)
    t = time.perf_counter()
    E = extract_biorder(S)
    assert time.perf_counter() - t < 1.0
    assert E.size == 10


def test_preimages(band):
    for g in range(band.size):
        for e, f in band.preimages[g]:
            assert band.product[e][f] == g
    assert sum(len(p) for p in band.preimages) == 12
