import pytest

from annulus_tate.khovanov import (
    Theory,
    build_complex,
    homology,
    k_filtration_pages,
    total_rank,
)
from annulus_tate.links import DiagramTooLarge, close_braid, parse_braid_word

STAB = close_braid(parse_braid_word("1", 2))
HOPF = close_braid(parse_braid_word("1 1", 2))
UNKNOT = close_braid(parse_braid_word("", 1))


def test_stabilized_unknot_complex_shape():
    gc = build_complex(STAB, Theory.AKH)
    assert gc.n_generators == 6
    assert gc.n_arrows() == 2


def test_hopf_complex_shape():
    gc = build_complex(HOPF, Theory.AKH)
    assert gc.n_generators == 12


def test_crossing_guard():
    from annulus_tate.links import AnnularDiagram, Crossing

    too_big = AnnularDiagram(
        strands=2, crossings=tuple(Crossing(0, 1) for _ in range(23))
    )
    with pytest.raises(DiagramTooLarge):
        build_complex(too_big, Theory.AKH)


def test_akh_arrows_preserve_j_and_k():
    for d in (STAB, HOPF, close_braid(parse_braid_word("-1 2", 3))):
        gc = build_complex(d, Theory.AKH)
        for src, tgt in gc.arrows():
            assert gc.gi[tgt] - gc.gi[src] == 1
            assert gc.gj[tgt] == gc.gj[src]
            assert gc.gk[tgt] == gc.gk[src]


def test_kh_arrows_shift_k_by_zero_or_two():
    for d in (STAB, HOPF, close_braid(parse_braid_word("-1 2", 3))):
        gc = build_complex(d, Theory.KH)
        for src, tgt in gc.arrows():
            assert gc.gi[tgt] - gc.gi[src] == 1
            assert gc.gj[tgt] == gc.gj[src]
            assert gc.gk[tgt] - gc.gk[src] in (0, -2)


def test_kh_arrow_set_contains_akh_arrows():
    for d in (STAB, HOPF, close_braid(parse_braid_word("1 -2 1", 3))):
        akh = build_complex(d, Theory.AKH)
        kh = build_complex(d, Theory.KH)
        akh_arrows = akh.arrow_set()
        kh_arrows = kh.arrow_set()
        assert akh_arrows <= kh_arrows
        for src, tgt in kh_arrows - akh_arrows:
            assert kh.gk[tgt] - kh.gk[src] == -2


def test_stabilized_unknot_akh_table():
    assert homology(STAB, Theory.AKH) == {
        (0, 3, 2): 1,
        (0, 1, 0): 1,
        (0, -1, -2): 1,
        (1, 3, 0): 1,
    }


def test_hopf_akh_table():
    assert homology(HOPF, Theory.AKH) == {
        (0, 4, 2): 1,
        (0, 2, 0): 1,
        (0, 0, -2): 1,
        (1, 4, 0): 1,
        (2, 6, 0): 1,
        (2, 4, 0): 1,
    }


def test_unknot_akh_table():
    assert homology(UNKNOT, Theory.AKH) == {(0, 1, 1): 1, (0, -1, -1): 1}


def test_trefoil_kh_over_f2():
    table = homology(close_braid(parse_braid_word("1 1 1", 2)), Theory.KH)
    assert total_rank(table) == 6
    assert table == {
        (0, 1): 1,
        (0, 3): 1,
        (2, 5): 1,
        (2, 7): 1,
        (3, 7): 1,
        (3, 9): 1,
    }


def test_conjugate_words_same_akh():
    a = homology(close_braid(parse_braid_word("1 2", 3)), Theory.AKH)
    b = homology(close_braid(parse_braid_word("2 1", 3)), Theory.AKH)
    assert a == b


def test_akh_dominates_kh_per_ij():
    for text, m in [("1", 2), ("1 1", 2), ("-1 2", 3), ("1 1 1", 2)]:
        d = close_braid(parse_braid_word(text, m))
        akh = homology(d, Theory.AKH)
        kh = homology(d, Theory.KH)
        summed = {}
        for (i, j, k), r in akh.items():
            summed[(i, j)] = summed.get((i, j), 0) + r
        for key, r in kh.items():
            assert summed.get(key, 0) >= r


def test_k_filtration_stabilized_unknot():
    pages = k_filtration_pages(STAB)
    akh = homology(STAB, Theory.AKH)
    kh = homology(STAB, Theory.KH)
    assert pages.total(1) == total_rank(akh) == 4
    assert pages.total(pages.max_page) == total_rank(kh) == 2
    # page 1 carries the AKh table, re-keyed (-k, i, j)
    page1 = {key: r for key, r in pages.table(1).items() if r}
    assert page1 == {(-k, i, j): r for (i, j, k), r in akh.items()}
    # the limit page carries the Kh table after forgetting k
    final = {}
    for (mk, i, j), r in pages.table(pages.max_page).items():
        final[(i, j)] = final.get((i, j), 0) + r
    assert final == kh


def test_k_filtration_no_crossings_collapses_immediately():
    pages = k_filtration_pages(UNKNOT)
    assert pages.table(1) == pages.table(pages.max_page)
    assert not any(pages.d_nonzero.values())


def test_k_filtration_totals_monotone():
    pages = k_filtration_pages(HOPF)
    totals = [pages.total(r) for r in range(pages.max_page + 1)]
    assert all(x >= y for x, y in zip(totals, totals[1:]))
    assert totals[1] == 6  # AKh total
