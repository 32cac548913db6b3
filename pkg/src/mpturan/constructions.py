"""Generators for the extremal and near-extremal graphs.

Size vectors may be given in any order. Parts keep their original ids in the
output graph; the roles ``V_1..V_4`` are assigned by a stable non-ascending
sort and the permutation is recorded on :class:`Construction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import InfeasibleConstructionError, InvalidParameterError
from .formulas import BlockPartition, bet_value, conj_value, g_terms, optimal_bipartition
from .graph import MultipartiteGraph, PartSizes

KINDS = ("g1", "g2", "conj", "bipartite", "complete")


@dataclass(frozen=True)
class ConstructionSpec:
    kind: str
    ns: PartSizes
    k: int = 1
    t: int = 3
    partition: BlockPartition | None = None


@dataclass
class Construction:
    spec: ConstructionSpec
    graph: MultipartiteGraph
    z: tuple[int, ...]
    expected_edges: int
    permutation: tuple[int, ...]
    partition: BlockPartition | None = None

    def sidecar(self) -> dict:
        return {
            "kind": self.spec.kind,
            "ns": list(self.spec.ns.sizes),
            "k": self.spec.k,
            "t": self.spec.t,
            "expected_edges": self.expected_edges,
            "edges": self.graph.num_edges,
            "partition": self.partition.as_lists() if self.partition else None,
            "z": list(self.z),
            "permutation": list(self.permutation),
        }


def _join(g: MultipartiteGraph, left: Iterable[int], right: Iterable[int]) -> None:
    right = list(right)
    for x in left:
        for y in right:
            g.add_edge(x, y)


def _four_roles(ns, k: int):
    ns = PartSizes.of(ns)
    if ns.r != 4:
        raise InvalidParameterError(f"construction needs 4 parts, got {ns.r}")
    if k < 1:
        raise InvalidParameterError(f"k must be >= 1, got {k}")
    perm = ns.sort_permutation()
    n4 = ns[perm[3]]
    if n4 < k - 1:
        raise InfeasibleConstructionError(f"smallest part has {n4} < k-1 = {k - 1} vertices")
    g = MultipartiteGraph(ns)
    V = [list(g.part_vertices(p)) for p in perm]
    return ns, perm, g, V


def _g1(ns, k: int) -> Construction:
    ns, perm, g, (V1, V2, V3, V4) = _four_roles(ns, k)
    Z = V4[: k - 1]
    _join(g, V1 + V4, V2 + V3)
    _join(g, Z, V1)
    expected = g_terms(*ns.sorted_view(), k)[0]
    return Construction(ConstructionSpec("g1", ns, k), g, tuple(Z), expected, perm)


def _g2(ns, k: int) -> Construction:
    ns, perm, g, (V1, V2, V3, V4) = _four_roles(ns, k)
    Z = V4[: k - 1]
    _join(g, V1, V2 + V3 + V4)
    _join(g, Z, V2 + V3)
    expected = g_terms(*ns.sorted_view(), k)[1]
    return Construction(ConstructionSpec("g2", ns, k), g, tuple(Z), expected, perm)


def build_g1(ns, k: int) -> MultipartiteGraph:
    return _g1(ns, k).graph


def build_g2(ns, k: int) -> MultipartiteGraph:
    return _g2(ns, k).graph


def _conjectured(ns, t: int, k: int, partition: BlockPartition | None) -> Construction:
    ns = PartSizes.of(ns)
    if partition is None:
        partition = (conj_value(ns, t, k) if ns.r >= t - 1 else bet_value(ns, t)).partition
    elif len(partition) > t - 1:
        raise InvalidParameterError(f"partition has {len(partition)} blocks, at most t-1 = {t - 1} allowed")
    else:
        partition = BlockPartition.from_blocks(partition.blocks, ns)
    g = MultipartiteGraph(ns)
    super_classes = [[v for i in block for v in g.part_vertices(i)] for block in partition.blocks]
    for a in range(len(super_classes)):
        for b in range(a + 1, len(super_classes)):
            _join(g, super_classes[a], super_classes[b])
    block = partition.blocks[partition.surplus_block()]
    i0 = min(block, key=lambda i: (ns[i], i))
    if ns[i0] < k - 1:
        raise InfeasibleConstructionError(f"class {i0} has {ns[i0]} < k-1 = {k - 1} vertices")
    Z = list(g.part_vertices(i0))[: k - 1]
    _join(g, Z, [v for i in block if i != i0 for v in g.part_vertices(i)])
    expected = (k - 1) * partition.surplus + partition.cross_products
    spec = ConstructionSpec("conj", ns, k, t, partition)
    return Construction(spec, g, tuple(Z), expected, ns.sort_permutation(), partition)


def build_conjectured(ns, t: int, k: int, partition: BlockPartition | None = None) -> MultipartiteGraph:
    """Complete "super-partite" graph along the blocks, plus ``k-1`` vertices of
    the smallest class of the max-surplus block joined to the rest of that block."""
    return _conjectured(ns, t, k, partition).graph


def _bipartite(ns, partition: BlockPartition | None) -> Construction:
    ns = PartSizes.of(ns)
    if partition is None:
        partition = optimal_bipartition(ns)
    if len(partition) != 2:
        raise InvalidParameterError("need a partition with exactly two blocks")
    partition = BlockPartition.from_blocks(partition.blocks, ns)
    g = MultipartiteGraph(ns)
    left, right = ([v for i in b for v in g.part_vertices(i)] for b in partition.blocks)
    _join(g, left, right)
    expected = partition.block_sums[0] * partition.block_sums[1]
    spec = ConstructionSpec("bipartite", ns, 1, 3, partition)
    return Construction(spec, g, (), expected, ns.sort_permutation(), partition)


def build_bipartite_along(ns, partition: BlockPartition | None = None) -> MultipartiteGraph:
    return _bipartite(ns, partition).graph


def build_complete(ns) -> MultipartiteGraph:
    ns = PartSizes.of(ns)
    g = MultipartiteGraph(ns)
    full = (1 << g.n) - 1
    for v in g.vertices():
        g.adj[v] = full & ~g.part_mask(g.part_of[v])
    g._m = (ns.total**2 - sum(s * s for s in ns.sizes)) // 2
    return g


def construct(spec: ConstructionSpec) -> Construction:
    kind = spec.kind
    if kind == "g1":
        return _g1(spec.ns, spec.k)
    if kind == "g2":
        return _g2(spec.ns, spec.k)
    if kind == "conj":
        return _conjectured(spec.ns, spec.t, spec.k, spec.partition)
    if kind == "bipartite":
        return _bipartite(spec.ns, spec.partition)
    if kind == "complete":
        g = build_complete(spec.ns)
        return Construction(spec, g, (), g.num_edges, PartSizes.of(spec.ns).sort_permutation())
    raise InvalidParameterError(f"unknown construction kind {kind!r}; expected one of {KINDS}")
