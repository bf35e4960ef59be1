import itertools

import pytest

from annulus_tate.f2algebra import dense_rank
from annulus_tate.khovanov import GradedComplex, Theory
from annulus_tate.links import BraidWord


def corpus_words() -> list[BraidWord]:
    """B2 words up to 4 letters and B3 words up to 3 letters."""
    words = []
    for length in range(5):
        for letters in itertools.product([1, -1], repeat=length):
            words.append(BraidWord(2, letters))
    for length in range(4):
        for letters in itertools.product([1, -1, 2, -2], repeat=length):
            words.append(BraidWord(3, letters))
    return words


def dense_homology_of(gc: GradedComplex) -> dict[tuple, int]:
    """Rank-nullity homology via dense Gaussian elimination (oracle path).

    Same keys as ``homology_of``: (i, j, k) for AKh, (i, j) for Kh.
    """
    if gc.theory is Theory.AKH:
        key_of = lambda g: (gc.gj[g], gc.gk[g])
    else:
        key_of = lambda g: (gc.gj[g],)
    groups: dict[tuple, list[int]] = {}
    for g in range(gc.n_generators):
        groups.setdefault((key_of(g), gc.gi[g]), []).append(g)

    ranks: dict[tuple, int] = {}
    for (key, i), gens in groups.items():
        targets = groups.get((key, i + 1))
        if not targets:
            ranks[(key, i)] = 0
            continue
        tindex = {g: col for col, g in enumerate(targets)}
        matrix = []
        for g in gens:
            row = [0] * len(targets)
            for y in gc.out[g]:
                row[tindex[y]] ^= 1
            matrix.append(row)
        ranks[(key, i)] = dense_rank(matrix)

    table: dict[tuple, int] = {}
    for (key, i), gens in groups.items():
        h = len(gens) - ranks.get((key, i), 0) - ranks.get((key, i - 1), 0)
        if h:
            table[(i, *key)] = h
    return table


@pytest.fixture(scope="session")
def b2_b3_corpus():
    return corpus_words()
