import pytest

from annulus_tate.cube import hamming
from annulus_tate.khovanov import Theory, build_complex
from annulus_tate.links import BraidWord, close_braid, double_cover, parse_braid_word
from annulus_tate.tate import (
    PeriodicRun,
    WindowTooSmall,
    build_tate,
    check_equivariance,
    default_window,
    hv_pages,
    minimum_window,
    tau_sharp,
    tau_table,
    total_diagonal_ranks,
    verify_cascade,
    verify_collapse,
    verify_diagonals,
    verify_e2_correspondence,
    verify_khtate_limit,
    verify_rank_inequality,
    vh_pages,
)

SIGMA1 = parse_braid_word("1", 2)


def hopf_cover(theory=Theory.AKH):
    cover, pairing = double_cover(SIGMA1)
    return build_complex(cover, theory), pairing


def test_tau_moves_single_circle_label():
    gc, pairing = hopf_cover()
    # vertex 10 has a single trivial circle; its positive labeling maps to
    # the positive labeling at vertex 01
    src = gc.index(0b01, 0b1)
    tgt = tau_sharp(gc, pairing, src)
    assert gc.vertex_of[tgt] == 0b10
    assert gc.labels_of[tgt] == 0b1
    assert (gc.gi[src], gc.gj[src], gc.gk[src]) == (
        gc.gi[tgt], gc.gj[tgt], gc.gk[tgt])


def test_tau_fixes_symmetric_labelings():
    gc, pairing = hopf_cover()
    g = gc.index(0b00, 0b11)  # both strand circles labeled "+"
    assert tau_sharp(gc, pairing, g) == g


def test_tau_is_involution_on_all_generators():
    gc, pairing = hopf_cover()
    tau = tau_table(gc, pairing)
    assert len(tau) == 12
    assert all(tau[tau[g]] == g for g in range(12))


def test_tau_requires_cover_diagram():
    gc = build_complex(close_braid(SIGMA1), Theory.AKH)
    _, pairing = double_cover(SIGMA1)
    with pytest.raises(ValueError):
        tau_table(gc, pairing)


def test_equivariance_hopf_akh():
    gc, pairing = hopf_cover()
    report = check_equivariance(gc, pairing)
    assert report.ok
    assert report.commutes and report.involution_ok
    assert report.n_equivariant == 6
    tau = tau_table(gc, pairing)
    by_vertex = {}
    for g in range(gc.n_generators):
        if tau[g] == g:
            by_vertex[gc.vertex_of[g]] = by_vertex.get(gc.vertex_of[g], 0) + 1
    assert by_vertex == {0b00: 4, 0b11: 2}
    assert all(hamming(v) % 2 == 0 for v in by_vertex)


def test_equivariance_hopf_kh():
    gc, pairing = hopf_cover(Theory.KH)
    assert check_equivariance(gc, pairing).ok


def test_equivariance_empty_cover():
    cover, pairing = double_cover(parse_braid_word("", 2))
    gc = build_complex(cover, Theory.AKH)
    report = check_equivariance(gc, pairing)
    assert report.ok
    assert report.n_equivariant == gc.n_generators


def test_build_tate_window_and_total_differential():
    gc, pairing = hopf_cover()
    b = build_tate(gc, pairing, window=7)
    assert b.n_generators == 12 * 7
    assert b.interior_columns() == [3]
    full = b.make_filtered(
        lambda g, t: gc.gi[g] + t, lambda g, t: (gc.gj[g], gc.gk[g])
    )
    full.check_d_squared()
    full.check_nonnegative()


def test_build_tate_rejects_small_window():
    gc, pairing = hopf_cover()
    assert minimum_window(gc.i_span()) == 7
    with pytest.raises(WindowTooSmall):
        build_tate(gc, pairing, window=6)


def test_default_window_has_three_interior_columns():
    gc, pairing = hopf_cover()
    b = build_tate(gc, pairing)
    assert b.window == default_window(2) == 9
    assert len(b.interior_columns()) == 3


def test_hv_pages_hopf():
    gc, pairing = hopf_cover()
    b = build_tate(gc, pairing)
    hv = hv_pages(b)
    assert hv.odd_pages_ok
    # page 1 is generated by the equivariant generators in every interior column
    page1 = hv.pages.table(1)
    for t in hv.interior_columns:
        count = sum(r for key, r in page1.items() if key[-1] == t)
        assert count == 6
    # the limit page carries the quotient ranks along (2j - k, k)
    final, constant = hv.interior_table(hv.pages.max_page)
    assert not constant
    by_jk = {}
    for (i, j, k), r in final.items():
        if r:
            by_jk[(j, k)] = by_jk.get((j, k), 0) + r
    assert by_jk == {(4, 2): 1, (2, 0): 1, (0, -2): 1, (6, 0): 1}


def test_hv_e1_equals_e2():
    gc, pairing = hopf_cover()
    hv = hv_pages(build_tate(gc, pairing))
    one, c1 = hv.interior_table(1)
    two, c2 = hv.interior_table(2)
    assert not c1 and not c2
    assert one == two


def test_vh_pages_interior_columns_carry_cover_homology():
    gc, pairing = hopf_cover()
    b = build_tate(gc, pairing)
    vh = vh_pages(b)
    assert vh.e1_ok
    page1 = vh.pages.table(1)
    for t in vh.interior_columns:
        column_total = sum(r for key, r in page1.items() if key[0] == t)
        assert column_total == 6
    totals = [vh.pages.total(r) for r in range(vh.pages.max_page + 1)]
    assert all(x >= y for x, y in zip(totals, totals[1:]))


def test_vh_pages_no_crossings():
    cover, pairing = double_cover(parse_braid_word("", 1))
    gc = build_complex(cover, Theory.AKH)
    b = build_tate(gc, pairing)
    vh = vh_pages(b)
    assert vh.e1_ok
    assert vh.pages.table(0) == vh.pages.table(1)


def test_interior_diagonals_independent_of_window():
    for text, m in [("1", 2), ("-1 2", 3)]:
        word = parse_braid_word(text, m)
        cover, pairing = double_cover(word)
        gc = build_complex(cover, Theory.AKH)
        span = gc.i_span()
        small = build_tate(gc, pairing, window=default_window(span))
        large = build_tate(gc, pairing, window=default_window(span) + 2)

        def interior_common(b):
            table = total_diagonal_ranks(b)
            values = {}
            diags = set(b.interior_diagonals())
            for (d, j, k), r in table.items():
                if d in diags and r:
                    values.setdefault((j, k), set()).add(r)
            assert all(len(v) == 1 for v in values.values())
            return {key: v.pop() for key, v in values.items()}

        assert interior_common(small) == interior_common(large)


def test_e2_correspondence_sigma1():
    run = PeriodicRun(SIGMA1)
    verdict = verify_e2_correspondence(run)
    assert verdict.passed
    assert verdict.details["equivariant_generators"] == 6
    assert verdict.details["quotient_generators"] == 6
    assert verdict.details["d2_arrows_per_column"] == 2


def test_e2_specific_d2_arrow():
    # the type-E quotient arrow v+v- -> w- lifts to a length-2 differential
    run = PeriodicRun(SIGMA1)
    hv = run.hv(Theory.AKH)
    gq = run.quotient_complex(Theory.AKH)
    gcov = run.cover_complex(Theory.AKH)
    from annulus_tate.tate import _lift_table

    lift, problems = _lift_table(run)
    assert not problems
    src = lift[gq.index(0, 0b01)]  # v+ v- at the braid-like vertex
    tgt = lift[gq.index(1, 0b0)]  # w- at the turnback vertex
    assert gcov.vertex_of[src] == 0b00 and gcov.vertex_of[tgt] == 0b11
    interior = hv.interior_columns
    pairs = [(t, t - 1) for t in interior if t - 1 in interior]
    assert pairs
    for t, t1 in pairs:
        assert (src, t, tgt, t1) in hv.d2_observed


def test_e2_correspondence_empty_word():
    verdict = verify_e2_correspondence(PeriodicRun(parse_braid_word("", 2)))
    assert verdict.passed
    assert verdict.details["d2_arrows_per_column"] == 0


def test_collapse_akh_examples():
    assert verify_collapse(PeriodicRun(SIGMA1), Theory.AKH).passed
    assert verify_collapse(PeriodicRun(parse_braid_word("", 2)), Theory.AKH).passed


def test_collapse_kh_zero_positive_crossings():
    verdict = verify_collapse(PeriodicRun(parse_braid_word("-1 -2", 3)), Theory.KH)
    assert verdict.passed
    assert verdict.details["asserted"]


def test_unproven_family_is_recorded_not_asserted():
    run = PeriodicRun(BraidWord(2, (1, 1, -1, -1)))
    assert not run.proven_family
    for verdict in (
        verify_collapse(run, Theory.KH),
        verify_khtate_limit(run),
        verify_cascade(run),
    ):
        assert verdict.passed is None
        assert not verdict.failed
        assert verdict.details["observed_ok"] is True


def test_rank_inequality_examples():
    verdict = verify_rank_inequality(PeriodicRun(SIGMA1))
    assert verdict.passed
    assert verdict.details["checked"] == 4
    assert verify_rank_inequality(PeriodicRun(parse_braid_word("", 2))).passed
    assert verify_rank_inequality(PeriodicRun(parse_braid_word("-1", 2))).passed


def test_cascade_examples():
    run = PeriodicRun(parse_braid_word("-1", 2))
    verdict = verify_cascade(run)
    assert verdict.passed
    assert verdict.details["totals"] == [6, 4, 4, 2]
    assert verify_cascade(PeriodicRun(SIGMA1)).passed
    empty = verify_cascade(PeriodicRun(parse_braid_word("", 2)))
    assert empty.passed
    assert empty.details["totals"] == [4, 4, 4, 4]


def test_khtate_limit_sigma1():
    assert verify_khtate_limit(PeriodicRun(SIGMA1)).passed


def test_diagonals_sigma1():
    verdict = verify_diagonals(PeriodicRun(SIGMA1))
    assert verdict.passed


def test_hv_pages_cached_on_run():
    run = PeriodicRun(SIGMA1)
    assert run.hv(Theory.AKH) is run.hv(Theory.AKH)


def test_verify_accepts_bare_words():
    assert verify_rank_inequality(SIGMA1).passed
    assert verify_diagonals(parse_braid_word("", 1)).passed
