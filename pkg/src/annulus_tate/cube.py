"""Resolutions of annular diagrams: circles, seam parity, edges, generators.

The port model is fixed once and for all.  Ports are pairs (level, strand)
with level in [0, c] and strand in [0, m); a port is encoded as the int
level * m + strand, so sorting port ids is level-major.  The crossing at
level l and position p unions

  * braid-like smoothing: (l, s)-(l+1, s) for every strand s,
  * turnback smoothing:   (l, p)-(l, p+1), (l+1, p)-(l+1, p+1), and
    (l, s)-(l+1, s) for s outside {p, p+1},

and the seam unions (c, s)-(0, s) close the diagram.  A circle is a
union-find class of ports; it is nontrivial exactly when it meets the seam
an odd number of times.

Smoothing convention: at a positive crossing bit 0 is braid-like and bit 1
is the turnback; at a negative crossing the bits are swapped.
"""

from __future__ import annotations

from dataclasses import dataclass

from .links import AnnularDiagram


def hamming(bits: int) -> int:
    return bits.bit_count()


def bit_increments(bits: int, width: int) -> list[int]:
    """All bitstrings covering ``bits`` (one extra bit set)."""
    return [bits | (1 << b) for b in range(width) if not (bits >> b) & 1]


def swap_halves(bits: int, width: int) -> int:
    """The involution a1a2 -> a2a1 on a bitstring of even width."""
    if width % 2:
        raise ValueError("swap_halves needs an even bitstring width")
    half = width // 2
    lo = bits & ((1 << half) - 1)
    return (bits >> half) | (lo << half)


def format_bits(bits: int, width: int) -> str:
    """Render with the crossing-0 bit first, e.g. bits=1, width=2 -> "10"."""
    return "".join(str((bits >> i) & 1) for i in range(width))


def parse_bits(text: str) -> tuple[int, int]:
    """Inverse of :func:`format_bits`; returns (bits, width)."""
    bits = 0
    for i, ch in enumerate(text):
        if ch == "1":
            bits |= 1 << i
        elif ch != "0":
            raise ValueError(f"invalid bitstring character {ch!r}")
    return bits, len(text)


@dataclass(frozen=True)
class Circle:
    """One smoothing component: its ports, and how often it meets the seam."""

    ports: frozenset[int]
    seam_count: int

    @property
    def trivial(self) -> bool:
        return self.seam_count % 2 == 0

    @property
    def min_port(self) -> int:
        return min(self.ports)


@dataclass(frozen=True)
class Resolution:
    """A complete smoothing of a diagram at one cube vertex.

    Circles are listed in canonical order: ascending minimal port id.
    """

    vertex: int
    width: int
    strands: int
    circles: tuple[Circle, ...]

    @property
    def n_circles(self) -> int:
        return len(self.circles)

    @property
    def trivial_flags(self) -> tuple[bool, ...]:
        return tuple(c.trivial for c in self.circles)

    def circle_of_port(self, port: int) -> int:
        for idx, circle in enumerate(self.circles):
            if port in circle.ports:
                return idx
        raise KeyError(f"port {port} not on any circle")


class UnclassifiableEdge(ValueError):
    """Circle pattern across an edge is not one of the six annular types."""


def resolve(diagram: AnnularDiagram, alpha: int) -> Resolution:
    """Smooth every crossing of ``diagram`` according to the bitstring ``alpha``."""
    c, m = diagram.n_crossings, diagram.strands
    if alpha < 0 or alpha >> c:
        raise ValueError(f"bitstring {alpha} does not fit {c} crossings")

    n_ports = (c + 1) * m
    parent = list(range(n_ports))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for level, cr in enumerate(diagram.crossings):
        bit = (alpha >> level) & 1
        braidlike = (bit == 0) == (cr.sign > 0)
        base, above = level * m, (level + 1) * m
        if braidlike:
            for s in range(m):
                union(base + s, above + s)
        else:
            p = cr.position
            union(base + p, base + p + 1)
            union(above + p, above + p + 1)
            for s in range(m):
                if s != p and s != p + 1:
                    union(base + s, above + s)

    seam_base = c * m
    for s in range(m):
        union(seam_base + s, s)

    members: dict[int, list[int]] = {}
    for port in range(n_ports):
        members.setdefault(find(port), []).append(port)
    seam_counts: dict[int, int] = {}
    for s in range(m):
        root = find(seam_base + s)
        seam_counts[root] = seam_counts.get(root, 0) + 1

    circles = [
        Circle(ports=frozenset(ports), seam_count=seam_counts.get(root, 0))
        for root, ports in members.items()
    ]
    circles.sort(key=lambda circle: circle.min_port)
    return Resolution(vertex=alpha, width=c, strands=m, circles=tuple(circles))


@dataclass(frozen=True)
class EdgeType:
    """A classified cube edge.

    ``source_circles``/``target_circles`` hold the participating circle
    indices, nontrivial circles first; ``correspondence`` maps each
    nonparticipating source circle index to its (identical-port-set)
    target index.
    """

    kind: str  # "merge" | "split"
    annular_class: str  # "A".."F"
    source_circles: tuple[int, ...]
    target_circles: tuple[int, ...]
    correspondence: dict[int, int]


def _participants(kind: str, res: Resolution, unmatched: list[int]) -> tuple[int, ...]:
    # Nontrivial-first ordering so type D/A maps can address the v circle directly.
    return tuple(sorted(unmatched, key=lambda i: (res.circles[i].trivial, i)))


def classify_resolutions(source: Resolution, target: Resolution) -> EdgeType:
    """Classify the edge between two resolutions differing at one crossing."""
    target_index = {circle.ports: i for i, circle in enumerate(target.circles)}
    source_index = {circle.ports: i for i, circle in enumerate(source.circles)}

    src_unmatched = [
        i for i, circle in enumerate(source.circles) if circle.ports not in target_index
    ]
    tgt_unmatched = [
        i for i, circle in enumerate(target.circles) if circle.ports not in source_index
    ]
    correspondence = {
        i: target_index[circle.ports]
        for i, circle in enumerate(source.circles)
        if circle.ports in target_index
    }

    if len(src_unmatched) == 2 and len(tgt_unmatched) == 1:
        kind = "merge"
    elif len(src_unmatched) == 1 and len(tgt_unmatched) == 2:
        kind = "split"
    else:
        raise UnclassifiableEdge(
            f"{len(src_unmatched)} source / {len(tgt_unmatched)} target circles changed"
        )

    src_part = _participants(kind, source, src_unmatched)
    tgt_part = _participants(kind, target, tgt_unmatched)
    src_trivial = tuple(source.circles[i].trivial for i in src_part)
    tgt_trivial = tuple(target.circles[i].trivial for i in tgt_part)

    if kind == "merge":
        table = {
            ((False, False), (True,)): "E",
            ((False, True), (False,)): "D",
            ((True, True), (True,)): "F",
        }
    else:
        table = {
            ((False,), (False, True)): "A",
            ((True,), (False, False)): "B",
            ((True,), (True, True)): "C",
        }
    annular_class = table.get((src_trivial, tgt_trivial))
    if annular_class is None:
        raise UnclassifiableEdge(
            f"{kind} with triviality pattern {src_trivial} -> {tgt_trivial}"
        )
    return EdgeType(
        kind=kind,
        annular_class=annular_class,
        source_circles=src_part,
        target_circles=tgt_part,
        correspondence=correspondence,
    )


def classify_edge(diagram: AnnularDiagram, alpha: int, alpha_prime: int) -> EdgeType:
    """Classify a cube edge given by a bit increment alpha -> alpha_prime."""
    diff = alpha ^ alpha_prime
    if hamming(diff) != 1 or not (alpha_prime & diff):
        raise ValueError(
            f"{format_bits(alpha_prime, diagram.n_crossings)} is not a bit increment "
            f"from {format_bits(alpha, diagram.n_crossings)}"
        )
    return classify_resolutions(resolve(diagram, alpha), resolve(diagram, alpha_prime))


MAX_CIRCLES = 24


@dataclass(frozen=True)
class Generator:
    """A labeled resolution: bit c of ``labels`` is 1 when circle c is "+"."""

    vertex: int
    labels: int
    i: int
    j: int
    k: int


def gradings(res: Resolution, labels: int, n_pos: int, n_neg: int) -> tuple[int, int, int]:
    """The (i, j, k) gradings of a labeled resolution."""
    weight = hamming(res.vertex)
    plus = hamming(labels)
    p = 2 * plus - res.n_circles
    k = 0
    for idx, circle in enumerate(res.circles):
        if not circle.trivial:
            k += 1 if (labels >> idx) & 1 else -1
    i = weight - n_neg
    j = p + weight + n_pos - 2 * n_neg
    return i, j, k


def enumerate_generators(res: Resolution, n_pos: int, n_neg: int) -> list[Generator]:
    """All 2^|circles| labeled generators of a resolution, labels ascending."""
    if res.n_circles > MAX_CIRCLES:
        raise OverflowError(f"{res.n_circles} circles exceeds the {MAX_CIRCLES}-circle guard")
    out = []
    for labels in range(1 << res.n_circles):
        i, j, k = gradings(res, labels, n_pos, n_neg)
        out.append(Generator(vertex=res.vertex, labels=labels, i=i, j=j, k=k))
    return out
