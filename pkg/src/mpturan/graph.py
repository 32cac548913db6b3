"""Multipartite graphs with bitset adjacency, plus the plain-text graph format.

Vertices are ``0..N-1`` and are laid out contiguously per part, part 1 first.
Neighbourhoods are Python ints used as bitsets, so intersections and
degree-to-part queries are a couple of word operations for the graph sizes
this package deals with.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import (
    DegeneratePartsError,
    GraphParseError,
    InvalidSizesError,
    PartViolationError,
)


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class PartSizes:
    """Class sizes ``(n_1, ..., n_r)`` in their original (possibly unsorted) order."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(self.sizes)
        if not sizes:
            raise InvalidSizesError("at least one part is required")
        for s in sizes:
            if not isinstance(s, int) or isinstance(s, bool) or s < 1:
                raise InvalidSizesError(f"part sizes must be positive integers, got {sizes!r}")
        object.__setattr__(self, "sizes", sizes)

    @classmethod
    def of(cls, sizes: PartSizes | Iterable[int]) -> PartSizes:
        if isinstance(sizes, PartSizes):
            return sizes
        return cls(tuple(sizes))

    @property
    def r(self) -> int:
        return len(self.sizes)

    @property
    def total(self) -> int:
        return sum(self.sizes)

    def __len__(self) -> int:
        return len(self.sizes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.sizes)

    def __getitem__(self, part: int) -> int:
        """1-based access, ``ns[1]`` is the first part."""
        if not 1 <= part <= len(self.sizes):
            raise IndexError(part)
        return self.sizes[part - 1]

    def sorted_view(self) -> tuple[int, ...]:
        return tuple(sorted(self.sizes, reverse=True))

    def sort_permutation(self) -> tuple[int, ...]:
        """Original 1-based part ids listed in non-ascending size order (stable)."""
        order = sorted(range(len(self.sizes)), key=lambda i: -self.sizes[i])
        return tuple(i + 1 for i in order)

    def block_sum(self, parts: Iterable[int]) -> int:
        return sum(self.sizes[i - 1] for i in parts)

    def __str__(self) -> str:
        return ",".join(map(str, self.sizes))


class MultipartiteGraph:
    """A simple graph living inside the complete multipartite host ``K_{n_1..n_r}``."""

    __slots__ = ("parts", "part_of", "offsets", "adj", "_m")

    def __init__(self, parts: PartSizes | Iterable[int]):
        self.parts = PartSizes.of(parts)
        offsets = [0]
        part_of: list[int] = []
        for i, s in enumerate(self.parts.sizes, start=1):
            part_of.extend([i] * s)
            offsets.append(offsets[-1] + s)
        self.offsets = tuple(offsets)
        self.part_of = tuple(part_of)
        self.adj = [0] * len(part_of)
        self._m = 0

    # -- construction -------------------------------------------------------

    @classmethod
    def from_edges(cls, parts, edges: Iterable[tuple[int, int]]) -> MultipartiteGraph:
        g = cls(parts)
        for x, y in edges:
            g.add_edge(x, y)
        return g

    def copy(self) -> MultipartiteGraph:
        h = MultipartiteGraph.__new__(MultipartiteGraph)
        h.parts = self.parts
        h.part_of = self.part_of
        h.offsets = self.offsets
        h.adj = list(self.adj)
        h._m = self._m
        return h

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < len(self.adj):
            raise IndexError(f"vertex {v} out of range 0..{len(self.adj) - 1}")

    def add_edge(self, x: int, y: int) -> MultipartiteGraph:
        self._check_vertex(x)
        self._check_vertex(y)
        if self.part_of[x] == self.part_of[y]:
            raise PartViolationError(
                f"vertices {x} and {y} both lie in part {self.part_of[x]}"
            )
        if not (self.adj[x] >> y) & 1:
            self.adj[x] |= 1 << y
            self.adj[y] |= 1 << x
            self._m += 1
        return self

    def remove_edge(self, x: int, y: int) -> MultipartiteGraph:
        if (self.adj[x] >> y) & 1:
            self.adj[x] &= ~(1 << y)
            self.adj[y] &= ~(1 << x)
            self._m -= 1
        return self

    # -- queries ------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.adj)

    @property
    def r(self) -> int:
        return self.parts.r

    @property
    def num_edges(self) -> int:
        return self._m

    def vertices(self) -> range:
        return range(len(self.adj))

    def part_vertices(self, part: int) -> range:
        return range(self.offsets[part - 1], self.offsets[part])

    def part_mask(self, part: int) -> int:
        lo, hi = self.offsets[part - 1], self.offsets[part]
        return ((1 << (hi - lo)) - 1) << lo

    def parts_mask(self, parts: Iterable[int]) -> int:
        m = 0
        for i in parts:
            m |= self.part_mask(i)
        return m

    def has_edge(self, x: int, y: int) -> bool:
        return bool((self.adj[x] >> y) & 1)

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(iter_bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degree_to(self, v: int, parts: Iterable[int]) -> int:
        """``|N(v) ∩ V_I|`` for a set ``I`` of 1-based part ids."""
        return (self.adj[v] & self.parts_mask(parts)).bit_count()

    def min_degree(self) -> int:
        return min((a.bit_count() for a in self.adj), default=0)

    def edges(self) -> list[tuple[int, int]]:
        """All edges as ``(min, max)`` pairs in lexicographic order."""
        out = []
        for x, a in enumerate(self.adj):
            for y in iter_bits(a >> (x + 1)):
                out.append((x, x + 1 + y))
        return out

    def common_neighbors(self, x: int, y: int) -> frozenset[int]:
        if self.part_of[x] == self.part_of[y]:
            raise PartViolationError(f"vertices {x} and {y} are in the same part")
        return frozenset(iter_bits(self.adj[x] & self.adj[y]))

    def edges_incident(self, T: Iterable[int]) -> int:
        """``e(T; G) = e(G) - e(G - T)``: the number of edges meeting ``T``."""
        tmask = mask_of(T)
        inside = 0
        touching = 0
        for v in iter_bits(tmask):
            touching += self.adj[v].bit_count()
            inside += (self.adj[v] & tmask).bit_count()
        # edges with both ends in T were counted twice
        return touching - inside // 2

    def remove_vertices(self, T: Iterable[int]) -> MultipartiteGraph:
        """Induced subgraph on ``V - T`` with shrunken part sizes, ids relabelled."""
        tmask = mask_of(T)
        for v in iter_bits(tmask):
            self._check_vertex(v)
        keep = [v for v in self.vertices() if not (tmask >> v) & 1]
        new_sizes = []
        for i in range(1, self.r + 1):
            s = sum(1 for v in self.part_vertices(i) if not (tmask >> v) & 1)
            if s == 0:
                raise DegeneratePartsError(f"removing {sorted(iter_bits(tmask))} empties part {i}")
            new_sizes.append(s)
        index = {v: j for j, v in enumerate(keep)}
        h = MultipartiteGraph(new_sizes)
        for x, y in self.edges():
            if x in index and y in index:
                h.add_edge(index[x], index[y])
        return h

    def check_invariants(self) -> None:
        """Raise ``AssertionError`` if symmetry, looplessness or part discipline fail."""
        total = 0
        for v, a in enumerate(self.adj):
            assert not (a >> v) & 1, f"loop at {v}"
            assert a >> len(self.adj) == 0, f"neighbour out of range at {v}"
            assert a & self.part_mask(self.part_of[v]) == 0, f"intra-part edge at {v}"
            for w in iter_bits(a):
                assert (self.adj[w] >> v) & 1, f"asymmetric pair {v},{w}"
            total += a.bit_count()
        assert total == 2 * self._m, "edge counter out of sync"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultipartiteGraph):
            return NotImplemented
        return self.parts == other.parts and self.adj == other.adj

    def __hash__(self):
        return hash((self.parts, tuple(self.adj)))

    def __repr__(self) -> str:
        return f"MultipartiteGraph(parts={self.parts.sizes}, edges={self._m})"


def new_graph(parts: PartSizes | Iterable[int]) -> MultipartiteGraph:
    return MultipartiteGraph(parts)


# -- text format ---------------------------------------------------------------


def serialize_graph(g: MultipartiteGraph) -> str:
    lines = ["parts " + " ".join(map(str, g.parts.sizes))]
    lines.extend(f"edge {x} {y}" for x, y in g.edges())
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> MultipartiteGraph:
    g = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if g is None:
            if fields[0] != "parts" or len(fields) < 2:
                raise GraphParseError("expected header 'parts s1 s2 ...'", lineno)
            try:
                g = MultipartiteGraph([int(f) for f in fields[1:]])
            except ValueError as exc:
                raise GraphParseError(f"bad part sizes: {exc}", lineno) from None
            continue
        if fields[0] != "edge" or len(fields) != 3:
            raise GraphParseError(f"expected 'edge u v', got {line!r}", lineno)
        try:
            x, y = int(fields[1]), int(fields[2])
        except ValueError:
            raise GraphParseError(f"non-integer vertex id in {line!r}", lineno) from None
        if not (0 <= x < g.n and 0 <= y < g.n):
            raise GraphParseError(f"vertex id out of range 0..{g.n - 1}", lineno)
        if x == y:
            raise GraphParseError(f"loop at vertex {x}", lineno)
        try:
            g.add_edge(x, y)
        except PartViolationError as exc:
            raise GraphParseError(str(exc), lineno) from None
    if g is None:
        raise GraphParseError("missing 'parts' header")
    return g
