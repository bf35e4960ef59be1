"""Braid words, their annular closures, and 2-periodic double covers.

A braid word in B_m is a sequence of signed Artin generators.  Its closure
lives in a thickened annulus, with a marked seam where crossing level c is
glued back to level 0.  A 2-periodic link is always presented here as the
closure of a doubled word w.w together with the pairing of crossing i with
crossing i + n; the 180-degree rotation of the annulus then acts on
bitstrings by swapping the two halves.
"""

from __future__ import annotations

from dataclasses import dataclass

# Cube size 2^22 is the desk-scale ceiling for every diagram we accept.
MAX_CROSSINGS = 22


class BraidError(ValueError):
    """Malformed braid input: bad token, zero letter, or index out of range."""


class DiagramTooLarge(ValueError):
    """Diagram exceeds the crossing-count guard."""


@dataclass(frozen=True)
class BraidWord:
    """A word in B_strands; letters are nonzero ints g with |g| <= strands - 1."""

    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", tuple(self.letters))
        if self.strands < 1:
            raise BraidError(f"strand count must be positive, got {self.strands}")
        for g in self.letters:
            if g == 0:
                raise BraidError("0 is not a braid generator")
            if abs(g) >= self.strands:
                raise BraidError(
                    f"generator {g} needs at least {abs(g) + 1} strands, have {self.strands}"
                )

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def n_pos(self) -> int:
        return sum(1 for g in self.letters if g > 0)

    @property
    def n_neg(self) -> int:
        return sum(1 for g in self.letters if g < 0)

    def repeated(self) -> "BraidWord":
        """The doubled word w.w presenting the 2-periodic cover."""
        return BraidWord(self.strands, self.letters + self.letters)

    def as_text(self) -> str:
        return " ".join(str(g) for g in self.letters)


@dataclass(frozen=True)
class Crossing:
    """One crossing of an annular diagram: strand position and sign."""

    position: int
    sign: int


@dataclass(frozen=True)
class AnnularDiagram:
    """An annular braid-closure diagram.

    Crossing order is braid-word letter order; crossing i sits at level i
    and is controlled by bit i of a resolution bitstring.  The seam glues
    level n_crossings back to level 0.
    """

    strands: int
    crossings: tuple[Crossing, ...]

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def n_pos(self) -> int:
        return sum(1 for cr in self.crossings if cr.sign > 0)

    @property
    def n_neg(self) -> int:
        return sum(1 for cr in self.crossings if cr.sign < 0)


@dataclass(frozen=True)
class CoverPairing:
    """Crossing pairing i <-> i + n of a 2-periodic double cover."""

    quotient_crossings: int

    def pair_crossing(self, i: int) -> int:
        n = self.quotient_crossings
        if not 0 <= i < 2 * n:
            raise ValueError(f"crossing index {i} out of range for a {2 * n}-crossing cover")
        return (i + n) % (2 * n)

    def shift_level(self, level: int) -> int:
        """Image of a port level under the half-turn; levels are taken mod 2n."""
        n = self.quotient_crossings
        if n == 0:
            return level
        return (level + n) % (2 * n)


def parse_braid_word(text: str, strands: int) -> BraidWord:
    """Parse whitespace-separated signed generator indices, e.g. "1 1 -2"."""
    letters = []
    for token in text.split():
        try:
            letters.append(int(token))
        except ValueError:
            raise BraidError(f"braid letter {token!r} is not an integer") from None
    return BraidWord(strands, tuple(letters))


def close_braid(word: BraidWord) -> AnnularDiagram:
    """Annular closure of a braid word, one crossing per letter in word order."""
    if len(word) > MAX_CROSSINGS:
        raise DiagramTooLarge(
            f"{len(word)} crossings exceeds the {MAX_CROSSINGS}-crossing guard"
        )
    crossings = tuple(
        Crossing(position=abs(g) - 1, sign=1 if g > 0 else -1) for g in word.letters
    )
    return AnnularDiagram(strands=word.strands, crossings=crossings)


def double_cover(word: BraidWord) -> tuple[AnnularDiagram, CoverPairing]:
    """Closure of the doubled word w.w and the crossing pairing i <-> i + n."""
    cover = close_braid(word.repeated())
    return cover, CoverPairing(quotient_crossings=len(word))


def mirror(word: BraidWord) -> BraidWord:
    """Mirror image: every letter sign flipped."""
    return BraidWord(word.strands, tuple(-g for g in word.letters))
