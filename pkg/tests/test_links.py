import itertools

import pytest

from annulus_tate.khovanov import Theory, homology, total_rank
from annulus_tate.links import (
    BraidError,
    BraidWord,
    DiagramTooLarge,
    close_braid,
    double_cover,
    mirror,
    parse_braid_word,
)


def test_parse_positive_word():
    w = parse_braid_word("1 1", 2)
    assert w.letters == (1, 1)
    assert (w.n_pos, w.n_neg) == (2, 0)


def test_parse_empty_word_is_annular_unknot():
    w = parse_braid_word("", 1)
    assert w.letters == ()
    assert len(w) == 0
    d = close_braid(w)
    assert d.n_crossings == 0 and d.strands == 1


def test_parse_mixed_signs():
    w = parse_braid_word("-1 2 -1", 3)
    assert (w.n_pos, w.n_neg) == (1, 2)


@pytest.mark.parametrize(
    "text,strands",
    [("2", 2), ("0", 2), ("x", 2), ("1", 1), ("1.5", 3)],
)
def test_parse_rejects_bad_input(text, strands):
    with pytest.raises(BraidError):
        parse_braid_word(text, strands)


def test_close_braid_crossing_data():
    d = close_braid(parse_braid_word("1 -2", 3))
    assert [(c.position, c.sign) for c in d.crossings] == [(0, 1), (1, -1)]
    assert (d.n_pos, d.n_neg) == (1, 1)


def test_close_braid_guard():
    with pytest.raises(DiagramTooLarge):
        close_braid(BraidWord(2, (1,) * 23))


def test_double_cover_sigma1():
    cover, pairing = double_cover(parse_braid_word("1", 2))
    assert cover.n_crossings == 2
    assert pairing.pair_crossing(0) == 1 and pairing.pair_crossing(1) == 0


def test_double_cover_empty():
    cover, pairing = double_cover(parse_braid_word("", 1))
    assert cover.n_crossings == 0
    assert pairing.quotient_crossings == 0
    assert pairing.shift_level(0) == 0


def test_double_cover_mixed_word():
    cover, pairing = double_cover(parse_braid_word("1 -2", 3))
    assert [(c.position, c.sign) for c in cover.crossings] == [
        (0, 1), (1, -1), (0, 1), (1, -1)]
    assert {i: pairing.pair_crossing(i) for i in range(4)} == {0: 2, 1: 3, 2: 0, 3: 1}


def test_pairing_is_fixed_point_free_involution():
    for length in (1, 2, 3):
        for letters in itertools.product([1, -1], repeat=length):
            _, pairing = double_cover(BraidWord(2, letters))
            n = 2 * length
            for i in range(n):
                assert pairing.pair_crossing(i) != i
                assert pairing.pair_crossing(pairing.pair_crossing(i)) == i


def test_mirror_flips_signs():
    w = parse_braid_word("1 1", 2)
    assert mirror(w).letters == (-1, -1)
    assert mirror(parse_braid_word("", 2)).letters == ()


def test_mirror_is_involution():
    for letters in itertools.product([1, -1, 2, -2], repeat=2):
        w = BraidWord(3, letters)
        assert mirror(mirror(w)) == w


def test_mirror_preserves_total_kh_rank():
    w = parse_braid_word("1 1 1", 2)
    lhs = total_rank(homology(close_braid(w), Theory.KH))
    rhs = total_rank(homology(close_braid(mirror(w)), Theory.KH))
    assert lhs == rhs == 6
