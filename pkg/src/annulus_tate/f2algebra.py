"""Finite F2 chain complexes with filtered graded bases.

Arrows are stored as adjacency bitsets keyed by generator index (one
Python int per generator, bit y of ``out[x]`` meaning an arrow x -> y with
coefficient 1).  Homology and spectral-sequence pages are computed by
Gaussian cancellation: cancelling an arrow k -> l removes both endpoint
generators and toggles an arrow x -> y for every pair x -> l, k -> y,
which is a single XOR of the successor row into each predecessor row.
Rank tables are independent of the cancellation order; bases are not, so
only ranks are exposed.
"""

from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator


class MissingArrowError(KeyError):
    """Requested arrow is not present in the complex."""


class FilteredComplexError(ValueError):
    """Structural violation: d^2 != 0 or a negative filtration shift."""


def _bits(mask: int) -> Iterator[int]:
    if mask == 0:
        return
    if mask.bit_count() <= 32 or mask.bit_length() <= 1024:
        # sparse or narrow: peel set bits directly
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low
        return
    # wide dense masks: one bytes conversion beats repeated big-int shifts
    data = mask.to_bytes((mask.bit_length() + 7) // 8, "little")
    base = 0
    for byte in data:
        if byte:
            while byte:
                low = byte & -byte
                yield base + low.bit_length() - 1
                byte ^= low
        base += 8


class FilteredComplex:
    """A chain complex over F2 with a distinguished filtered graded basis.

    Each generator carries an integer filtration degree and a tuple of
    auxiliary gradings.  Generators keep their indices after cancellation
    removes them (dead rows are simply masked out), so gradings never
    move.
    """

    __slots__ = ("fdeg", "aux", "out", "inc", "alive")

    def __init__(self) -> None:
        self.fdeg: list[int] = []
        self.aux: list[tuple] = []
        self.out: list[int] = []
        self.inc: list[int] = []
        self.alive: int = 0

    # -- construction -------------------------------------------------

    def add_generator(self, fdeg: int, aux: tuple = ()) -> int:
        g = len(self.fdeg)
        self.fdeg.append(fdeg)
        self.aux.append(tuple(aux))
        self.out.append(0)
        self.inc.append(0)
        self.alive |= 1 << g
        return g

    def add_arrow(self, src: int, tgt: int) -> None:
        if (self.out[src] >> tgt) & 1:
            raise FilteredComplexError(f"arrow {src}->{tgt} already present")
        self.out[src] |= 1 << tgt
        self.inc[tgt] |= 1 << src

    def toggle_arrow(self, src: int, tgt: int) -> bool:
        """Flip an arrow mod 2; returns True when the arrow is now present."""
        self.out[src] ^= 1 << tgt
        self.inc[tgt] ^= 1 << src
        return bool((self.out[src] >> tgt) & 1)

    # -- queries -------------------------------------------------------

    def is_alive(self, g: int) -> bool:
        return bool((self.alive >> g) & 1)

    def generators(self) -> Iterator[int]:
        return _bits(self.alive)

    def n_generators(self) -> int:
        return self.alive.bit_count()

    def has_arrow(self, src: int, tgt: int) -> bool:
        return bool(
            (self.alive >> src) & 1
            and (self.alive >> tgt) & 1
            and (self.out[src] >> tgt) & 1
        )

    def targets(self, src: int) -> Iterator[int]:
        return _bits(self.out[src] & self.alive)

    def sources(self, tgt: int) -> Iterator[int]:
        return _bits(self.inc[tgt] & self.alive)

    def arrows(self) -> Iterator[tuple[int, int]]:
        for src in self.generators():
            for tgt in self.targets(src):
                yield src, tgt

    def n_arrows(self) -> int:
        return sum((self.out[g] & self.alive).bit_count() for g in self.generators())

    def shift(self, src: int, tgt: int) -> int:
        return self.fdeg[tgt] - self.fdeg[src]

    def grading_key(self, g: int) -> tuple:
        return (self.fdeg[g], *self.aux[g])

    def copy(self) -> "FilteredComplex":
        dup = FilteredComplex()
        dup.fdeg = list(self.fdeg)
        dup.aux = list(self.aux)
        dup.out = list(self.out)
        dup.inc = list(self.inc)
        dup.alive = self.alive
        return dup

    # -- validation ----------------------------------------------------

    def check_d_squared(self) -> None:
        """Raise unless d^2 vanishes (XOR of target rows is zero)."""
        for x in self.generators():
            acc = 0
            for y in self.targets(x):
                acc ^= self.out[y] & self.alive
            if acc:
                raise FilteredComplexError(
                    f"d^2 != 0: generator {x} double-hits {list(_bits(acc))[:5]}"
                )

    def check_nonnegative(self) -> None:
        for src, tgt in self.arrows():
            if self.shift(src, tgt) < 0:
                raise FilteredComplexError(
                    f"arrow {src}->{tgt} shifts filtration by {self.shift(src, tgt)}"
                )

    # -- cancellation ---------------------------------------------------

    def cancel_arrow(self, k: int, l: int) -> tuple[int, int]:
        """Cancel the arrow k -> l, toggling x -> y for all x -> l, k -> y.

        Returns the (predecessor, successor) masks that were toggled
        against each other.  Homology ranks at every grading are
        preserved.
        """
        bit_k, bit_l = 1 << k, 1 << l
        if not (self.alive & bit_k and self.alive & bit_l and self.out[k] & bit_l):
            raise MissingArrowError(f"no arrow {k}->{l} to cancel")
        preds = self.inc[l] & self.alive & ~bit_k
        succs = self.out[k] & self.alive & ~bit_l
        self.alive &= ~(bit_k | bit_l)
        if succs:
            for x in _bits(preds):
                self.out[x] ^= succs
        if preds:
            for y in _bits(succs):
                self.inc[y] ^= preds
        return preds, succs


def rank_table(C: FilteredComplex) -> dict[tuple, int]:
    """Ranks of the alive generators grouped by (filtration degree, *aux)."""
    return dict(Counter(C.grading_key(g) for g in C.generators()))


def _sweep_cancel(work: FilteredComplex, target_mask_of) -> bool:
    """Cancel, in lexicographic (source, target) order, every arrow whose
    targets ``target_mask_of(x)`` allows; returns True if anything acted.

    A min-heap of candidate sources keeps the order exact: cancelling can
    only create eligible arrows at the predecessors of the cancelled
    target, and those are pushed back on the heap.
    """
    acted = False
    out = work.out
    heap = []
    for x in _bits(work.alive):
        if out[x] & work.alive & target_mask_of(x):
            heap.append(x)
    heapq.heapify(heap)
    while heap:
        x = heapq.heappop(heap)
        if not work.is_alive(x):
            continue
        m = out[x] & work.alive & target_mask_of(x)
        if not m:
            continue
        l = (m & -m).bit_length() - 1
        preds, _ = work.cancel_arrow(x, l)
        acted = True
        for p in _bits(preds):
            heapq.heappush(heap, p)
    return acted


def homology_ranks(
    C: FilteredComplex, tie_break: str = "lex", validate: bool = False
) -> dict[tuple, int]:
    """Homology ranks per grading, by cancelling until no arrows remain.

    ``tie_break`` picks the deterministic cancellation order ("lex" or
    "revlex"); the resulting table does not depend on it.
    """
    work = C.copy()
    if tie_break == "lex":
        full = (1 << len(work.fdeg)) - 1
        _sweep_cancel(work, lambda x: full)
    elif tie_break == "revlex":
        # mirror image of the lexicographic sweep
        x = len(work.fdeg) - 1
        while x >= 0:
            if not (work.alive >> x) & 1:
                x -= 1
                continue
            m = work.out[x] & work.alive
            if not m:
                x -= 1
                continue
            l = m.bit_length() - 1
            preds, _ = work.cancel_arrow(x, l)
            if preds:
                high = preds.bit_length() - 1
                if high > x:
                    x = high
    else:
        raise ValueError(f"unknown tie_break {tie_break!r}")
    if validate:
        work.check_d_squared()
    if work.n_arrows():
        raise FilteredComplexError("cancellation finished with arrows left")
    return rank_table(work)


@dataclass
class PageTable:
    """Spectral-sequence rank tables: page r -> grading key -> rank.

    Keys are (filtration degree, *aux).  ``d_nonzero[r]`` records whether
    any differential acted while page r was current.  Pages stabilize once
    r exceeds the largest filtration shift, so ``table(r)`` clamps r to
    ``max_page``.
    """

    max_page: int
    ranks: dict[int, dict[tuple, int]] = field(default_factory=dict)
    d_nonzero: dict[int, bool] = field(default_factory=dict)

    def table(self, r: int) -> dict[tuple, int]:
        return self.ranks[min(r, self.max_page)]

    def rank(self, r: int, key: tuple) -> int:
        return self.table(r).get(key, 0)

    def total(self, r: int) -> int:
        return sum(self.table(r).values())

    @classmethod
    def merge(cls, tables: Iterable["PageTable"], max_page: int) -> "PageTable":
        merged = cls(max_page=max_page)
        for r in range(max_page + 1):
            merged.ranks[r] = {}
            merged.d_nonzero[r] = False
        for pt in tables:
            if pt.max_page != max_page:
                raise ValueError("cannot merge page tables with different max_page")
            for r in range(max_page + 1):
                target = merged.ranks[r]
                for gkey, rk in pt.ranks[r].items():
                    target[gkey] = target.get(gkey, 0) + rk
                merged.d_nonzero[r] = merged.d_nonzero[r] or pt.d_nonzero[r]
        return merged


def degree_masks(C: FilteredComplex) -> dict[int, int]:
    """Bitmask of generators per filtration degree (computed once; dead
    bits are masked out by the callers)."""
    masks: dict[int, int] = {}
    for g in C.generators():
        masks[C.fdeg[g]] = masks.get(C.fdeg[g], 0) | (1 << g)
    return masks


def cancel_shift_level(
    work: FilteredComplex, r: int, masks: dict[int, int]
) -> bool:
    """Cancel every arrow of filtration shift exactly r (mutating ``work``);
    returns True if anything acted."""
    return _sweep_cancel(work, lambda x: masks.get(work.fdeg[x] + r, 0))


def spectral_pages(C: FilteredComplex, max_page: int, validate: bool = False) -> PageTable:
    """Pages of the filtration spectral sequence by shift-ordered cancellation.

    Page r is the complex surviving after every arrow of filtration shift
    < r has been cancelled, lexicographically by (shift, source, target);
    d^r consists of the arrows of shift exactly r on that page.  Choose
    ``max_page`` larger than the i-span to reach the limit term.
    """
    work = C.copy()
    if validate:
        work.check_nonnegative()
    masks = degree_masks(work)
    pages = PageTable(max_page=max_page)
    for r in range(max_page + 1):
        pages.ranks[r] = rank_table(work)
        pages.d_nonzero[r] = cancel_shift_level(work, r, masks)
    return pages


def dense_rank(matrix: Iterable[Iterable[int]]) -> int:
    """GF(2) rank of a dense 0/1 matrix by straightforward row elimination.

    Test oracle only; independent of the cancellation machinery above.
    """
    rank = 0
    pivots: dict[int, int] = {}
    for row in matrix:
        bits = 0
        for col, v in enumerate(row):
            if v % 2:
                bits |= 1 << col
        while bits:
            low = bits & -bits
            other = pivots.get(low)
            if other is None:
                pivots[low] = bits
                rank += 1
                break
            bits ^= other
    return rank
