"""Clique enumeration, exact disjoint-clique packing, and rich-edge structure."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .formulas import optimal_bipartition
from .graph import MultipartiteGraph, iter_bits, mask_of


def cliques_in(adj: list[int], avail: int, t: int) -> list[int]:
    """All ``t``-cliques inside ``avail`` as vertex bitmasks, in ascending
    lexicographic order of their sorted vertex tuples."""
    out: list[int] = []
    if t <= 0:
        return out

    def extend(clique: int, cand: int, left: int):
        if left == 0:
            out.append(clique)
            return
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            # only higher neighbours, so each clique is produced once
            extend(clique | low, cand & adj[v], left - 1)

    extend(0, avail, t)
    return out


def enumerate_cliques(g: MultipartiteGraph, t: int) -> Iterator[tuple[int, ...]]:
    for c in cliques_in(g.adj, (1 << g.n) - 1, t):
        yield tuple(iter_bits(c))


def enumerate_triangles(g: MultipartiteGraph) -> Iterator[tuple[int, int, int]]:
    """Every triangle exactly once, as an ascending triple."""
    adj = g.adj
    for x in range(g.n):
        higher = adj[x] >> (x + 1) << (x + 1)
        for y in iter_bits(higher):
            for z in iter_bits(higher & adj[y] >> (y + 1) << (y + 1)):
                yield (x, y, z)


def _hitting_bound(live: list[int], cap: int) -> int:
    """Size of a greedy vertex set meeting every clique, stopping at ``cap``.

    Disjoint cliques need distinct hitting vertices, so this bounds the packing number.
    """
    remaining = live
    used = 0
    while remaining and used < cap:
        freq: dict[int, int] = {}
        for c in remaining:
            for v in iter_bits(c):
                freq[v] = freq.get(v, 0) + 1
        best = max(freq, key=lambda v: (freq[v], -v))
        remaining = [c for c in remaining if not (c >> best) & 1]
        used += 1
    return used if not remaining else cap + 1


def pack(cliques: list[int], avail: int, need: int, t: int) -> list[int] | None:
    """Find ``need`` pairwise disjoint cliques from ``cliques`` inside ``avail``.

    Branches on the lowest vertex that still lies in a usable clique: either one
    of its cliques is taken, or the vertex is dropped.
    """
    if need <= 0:
        return []
    live = [c for c in cliques if c & avail == c]
    if len(live) < need:
        return None
    union = 0
    for c in live:
        union |= c
    if union.bit_count() < t * need:
        return None
    chosen: list[int] = []
    used = 0
    for c in live:
        if not c & used:
            chosen.append(c)
            used |= c
            if len(chosen) == need:
                return chosen
    if _hitting_bound(live, need) < need:
        return None
    low = union & -union
    for c in live:
        if c & low:
            rest = pack(live, avail & ~c, need - 1, t)
            if rest is not None:
                return [c] + rest
    return pack(live, avail & ~low, need, t)


@dataclass(frozen=True)
class PackingWitness:
    cliques: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.cliques)

    def verify(self, g: MultipartiteGraph, k: int, t: int) -> bool:
        """Independent re-check through the graph primitives."""
        if len(self.cliques) != k:
            return False
        seen: set[int] = set()
        for c in self.cliques:
            if len(c) != t or len(set(c)) != t:
                return False
            if len({g.part_of[v] for v in c}) != t:
                return False
            for a in range(t):
                for b in range(a + 1, t):
                    if not g.has_edge(c[a], c[b]):
                        return False
            if seen & set(c):
                return False
            seen |= set(c)
        return True

    def edges(self) -> list[tuple[int, int]]:
        return [(c[a], c[b]) for c in self.cliques for a in range(len(c)) for b in range(a + 1, len(c))]


def find_clique_packing(g: MultipartiteGraph, k: int, t: int) -> PackingWitness | None:
    if k < 1 or t < 2:
        raise ValueError(f"need k >= 1 and t >= 2, got k={k}, t={t}")
    full = (1 << g.n) - 1
    found = pack(cliques_in(g.adj, full, t), full, k, t)
    if found is None:
        return None
    return PackingWitness(tuple(sorted(tuple(iter_bits(c)) for c in found)))


def is_kkt_free(g: MultipartiteGraph, k: int, t: int) -> bool:
    return find_clique_packing(g, k, t) is None


def max_packing_size(g: MultipartiteGraph, t: int) -> int:
    full = (1 << g.n) - 1
    cliques = cliques_in(g.adj, full, t)
    best = 0
    used = 0
    for c in cliques:
        if not c & used:
            best += 1
            used |= c
    while pack(cliques, full, best + 1, t) is not None:
        best += 1
    return best


# -- structure around rich edges ------------------------------------------------


@dataclass
class RichEdgeReport:
    k: int
    rich_edges: list[tuple[int, int]]
    z_set: frozenset[int]
    per_edge_counts: dict[tuple[int, int], tuple[int, ...]]
    max_same_class_rich_degree: int
    max_rich_degree: int
    cover_size: int
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "rich_edges": [list(e) for e in self.rich_edges],
            "z_set": sorted(self.z_set),
            "per_edge_counts": {f"{x}-{y}": list(c) for (x, y), c in self.per_edge_counts.items()},
            "max_same_class_rich_degree": self.max_same_class_rich_degree,
            "max_rich_degree": self.max_rich_degree,
            "cover_size": self.cover_size,
            "diagnostics": self.diagnostics,
        }


def _part_counts(g: MultipartiteGraph, mask: int) -> tuple[int, ...]:
    return tuple((mask & g.part_mask(i)).bit_count() for i in range(1, g.r + 1))


def _greedy_cover(edges: list[tuple[int, int]]) -> int:
    left = list(edges)
    size = 0
    while left:
        deg: dict[int, int] = {}
        for x, y in left:
            deg[x] = deg.get(x, 0) + 1
            deg[y] = deg.get(y, 0) + 1
        v = max(deg, key=lambda u: (deg[u], -u))
        left = [e for e in left if v not in e]
        size += 1
    return size


def rich_edges(g: MultipartiteGraph, k: int) -> RichEdgeReport:
    """Edges whose ends have at least ``k`` common neighbours inside one part.

    The bounds reported under ``diagnostics`` are only guaranteed for
    counterexample graphs, so they are reported, not asserted.
    """
    rich: list[tuple[int, int]] = []
    counts: dict[tuple[int, int], tuple[int, ...]] = {}
    for x, y in g.edges():
        per_part = _part_counts(g, g.adj[x] & g.adj[y])
        if max(per_part) >= k:
            rich.append((x, y))
            counts[(x, y)] = per_part
    z = frozenset(v for e in rich for v in e)
    same_class = 0
    rdeg: dict[int, int] = {}
    for v in z:
        towards: dict[int, int] = {}
        for x, y in rich:
            if v in (x, y):
                other = y if v == x else x
                towards[g.part_of[other]] = towards.get(g.part_of[other], 0) + 1
                rdeg[v] = rdeg.get(v, 0) + 1
        same_class = max(same_class, max(towards.values(), default=0))
    cover = _greedy_cover(rich)
    diagnostics = {
        "rich_edge_count": len(rich),
        "same_class_degree_vs_k_minus_1": [same_class, k - 1],
        "max_rich_degree_vs_3k_minus_3": [max(rdeg.values(), default=0), 3 * k - 3],
        "rich_edges_vs_6(k-1)^2": [len(rich), 6 * (k - 1) ** 2],
        "z_size_vs_6k^2": [len(z), 6 * k * k],
    }
    return RichEdgeReport(
        k=k,
        rich_edges=rich,
        z_set=z,
        per_edge_counts=counts,
        max_same_class_rich_degree=same_class,
        max_rich_degree=max(rdeg.values(), default=0),
        cover_size=cover,
        diagnostics=diagnostics,
    )


class PairClass(str, enum.Enum):
    FULL = "Full"
    EMPTY = "Empty"
    MIXED = "Mixed"


def classify_pair(g: MultipartiteGraph, z_set: Iterable[int], i: int, j: int) -> PairClass:
    """Full: every vertex of ``V_i - Z`` sees all of ``V_j`` and vice versa.
    Empty: no ``V_i``-``V_j`` edge has an end outside ``Z``.

    Empty is tested first, so a pair with both sides inside ``Z`` is Empty.
    """
    if i == j:
        raise ValueError("classify_pair needs two distinct parts")
    zmask = mask_of(z_set)
    Vi, Vj = g.part_mask(i), g.part_mask(j)
    outside_i = [v for v in iter_bits(Vi & ~zmask)]
    outside_j = [v for v in iter_bits(Vj & ~zmask)]
    if all(not g.adj[v] & Vj for v in outside_i) and all(not g.adj[v] & Vi for v in outside_j):
        return PairClass.EMPTY
    if all(g.adj[v] & Vj == Vj for v in outside_i) and all(g.adj[v] & Vi == Vi for v in outside_j):
        return PairClass.FULL
    return PairClass.MIXED


def mindeg_threshold(g: MultipartiteGraph) -> int | None:
    if g.r < 2:
        return None
    return optimal_bipartition(g.parts).mindeg_threshold


def triangle_exists_under_mindeg(g: MultipartiteGraph) -> tuple[int, int, int] | None:
    """Return some triangle of ``g`` or ``None``.

    When the minimum degree exceeds the optimal-bipartition threshold a
    triangle is guaranteed to exist, so ``None`` never comes back in that regime.
    """
    return next(enumerate_triangles(g), None)
