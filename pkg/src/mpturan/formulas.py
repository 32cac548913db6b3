"""Closed-form extremal values and the partition optimisations behind them.

All partition maxima are computed by plain enumeration of set partitions of
the part-index set; ``r`` is small in every use case here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import InvalidParameterError, InvalidSizesError
from .graph import PartSizes

Blocks = tuple[tuple[int, ...], ...]


def set_partitions(r: int, max_blocks: int | None = None, exact: int | None = None) -> Iterator[Blocks]:
    """Partitions of ``{1..r}`` in canonical form (blocks ordered by least element).

    ``max_blocks`` caps the number of blocks; ``exact`` asks for exactly that
    many. Generated via restricted growth strings.
    """
    if max_blocks is None:
        max_blocks = r
    if exact is not None:
        max_blocks = min(max_blocks, exact)
    if r == 0:
        if exact in (None, 0):
            yield ()
        return
    rgs = [0] * r

    def rec(i: int, used: int):
        if i == r:
            if exact is None or used == exact:
                blocks = [[] for _ in range(used)]
                for part, b in enumerate(rgs, start=1):
                    blocks[b].append(part)
                yield tuple(tuple(b) for b in blocks)
            return
        # not enough positions left to open the required blocks
        if exact is not None and used + (r - i) < exact:
            return
        for b in range(min(used + 1, max_blocks)):
            rgs[i] = b
            yield from rec(i + 1, max(used, b + 1))

    yield from rec(0, 0)


@dataclass(frozen=True)
class BlockPartition:
    blocks: Blocks
    block_sums: tuple[int, ...]
    block_mins: tuple[int, ...]
    surplus: int

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], ns: PartSizes | Iterable[int]) -> BlockPartition:
        ns = PartSizes.of(ns)
        canon = sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0] if b else 0)
        seen: list[int] = []
        for b in canon:
            if not b:
                raise InvalidParameterError("blocks must be nonempty")
            seen.extend(b)
        if sorted(seen) != list(range(1, ns.r + 1)):
            raise InvalidParameterError(f"blocks {canon} do not partition 1..{ns.r}")
        sums = tuple(ns.block_sum(b) for b in canon)
        mins = tuple(min(ns[i] for i in b) for b in canon)
        surplus = max(s - m for s, m in zip(sums, mins))
        return cls(tuple(canon), sums, mins, surplus)

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def cross_products(self) -> int:
        """``sum over unordered block pairs of n_I * n_I'``."""
        total = sum(self.block_sums)
        return (total * total - sum(s * s for s in self.block_sums)) // 2

    @property
    def mindeg_threshold(self) -> int:
        if len(self.blocks) != 2:
            raise InvalidParameterError("threshold is defined for bipartitions only")
        return min(self.block_sums)

    def surplus_block(self) -> int:
        """Index of the first block attaining the maximum surplus ``n_I - m_I``."""
        gaps = [s - m for s, m in zip(self.block_sums, self.block_mins)]
        return gaps.index(max(gaps))

    def as_lists(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    def __str__(self) -> str:
        return "|".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)


@dataclass(frozen=True)
class FormulaResult:
    value: int
    partition: BlockPartition | None = None
    witness_term: str = ""
    terms: tuple[int, ...] = ()
    sort_permutation: tuple[int, ...] | None = None
    special_block: tuple[int, ...] | None = None
    extra: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "partition": self.partition.as_lists() if self.partition else None,
            "surplus": self.partition.surplus if self.partition else None,
            "witness_term": self.witness_term,
        }


def _check_k(k: int) -> None:
    if not isinstance(k, int) or k < 1:
        raise InvalidParameterError(f"k must be a positive integer, got {k!r}")


def _sizes(ns) -> PartSizes:
    try:
        return PartSizes.of(ns)
    except InvalidSizesError as exc:
        raise InvalidParameterError(str(exc)) from None


def g_terms(n1: int, n2: int, n3: int, n4: int, k: int) -> tuple[int, int]:
    """The two candidate values on already-sorted sizes."""
    first = (n1 + n4) * (n2 + n3) + (k - 1) * n1
    second = n1 * (n2 + n3 + n4) + (k - 1) * (n2 + n3)
    return first, second


def g_value(ns: Sequence[int] | PartSizes, k: int) -> FormulaResult:
    """The 4-partite kK_3 extremal value; unsorted input is sorted first."""
    ns = _sizes(ns)
    _check_k(k)
    if ns.r != 4:
        raise InvalidParameterError(f"g is defined for 4 parts, got {ns.r}")
    first, second = g_terms(*ns.sorted_view(), k)
    if first == second:
        which = "both"
    elif first > second:
        which = "first"
    else:
        which = "second"
    return FormulaResult(
        value=max(first, second),
        witness_term=which,
        terms=(first, second),
        sort_permutation=ns.sort_permutation(),
    )


def _best_partition(ns: PartSizes, candidates: Iterable[Blocks], score) -> tuple[int, BlockPartition]:
    best_val = None
    best = None
    for blocks in candidates:
        bp = BlockPartition.from_blocks(blocks, ns)
        val = score(bp)
        # canonical blocks are generated in increasing order, so '>' keeps the
        # lexicographically least maximiser; compare explicitly to be safe.
        if best_val is None or val > best_val or (val == best_val and bp.blocks < best.blocks):
            best_val, best = val, bp
    return best_val, best


def bet_value(ns, t: int) -> FormulaResult:
    """Max of the pairwise block-product sum over partitions into at most ``t-1`` blocks."""
    ns = _sizes(ns)
    if t < 2:
        raise InvalidParameterError(f"t must be >= 2, got {t}")
    val, bp = _best_partition(ns, set_partitions(ns.r, max_blocks=t - 1), lambda p: p.cross_products)
    return FormulaResult(value=val, partition=bp, witness_term=str(bp))


def conj_value(ns, t: int, k: int) -> FormulaResult:
    """``max_P (k-1) n_P + sum n_I n_I'`` over partitions into exactly ``t-1`` blocks."""
    ns = _sizes(ns)
    _check_k(k)
    if t < 2:
        raise InvalidParameterError(f"t must be >= 2, got {t}")
    if ns.r < t - 1:
        raise InvalidParameterError(f"need at least t-1 = {t - 1} parts, got {ns.r}")
    val, bp = _best_partition(
        ns,
        set_partitions(ns.r, exact=t - 1),
        lambda p: (k - 1) * p.surplus + p.cross_products,
    )
    return FormulaResult(
        value=val,
        partition=bp,
        witness_term=str(bp),
        special_block=bp.blocks[bp.surplus_block()],
    )


def matching_extremal_value(ns, k: int) -> int:
    """``(k-1)`` times the total size minus the smallest part."""
    ns = _sizes(ns)
    _check_k(k)
    return (k - 1) * (ns.total - min(ns.sizes))


def optimal_bipartition(ns) -> BlockPartition:
    """Bipartition maximising the smaller side; ties go to the lexicographically
    least block containing part 1."""
    ns = _sizes(ns)
    if ns.r < 2:
        raise InvalidParameterError("an optimal bipartition needs at least 2 parts")
    best = None
    for blocks in set_partitions(ns.r, exact=2):
        bp = BlockPartition.from_blocks(blocks, ns)
        if best is None or bp.mindeg_threshold > best.mindeg_threshold or (
            bp.mindeg_threshold == best.mindeg_threshold and bp.blocks[0] < best.blocks[0]
        ):
            best = bp
    return best


def delta_excess(e_count: int, ns, k: int) -> int:
    ns = _sizes(ns)
    if ns.r != 4:
        raise InvalidParameterError(f"excess is defined for 4 parts, got {ns.r}")
    return max(0, e_count - g_value(ns, k).value)


def induction_gap(ns, ns_reduced, k: int) -> int:
    """``g(ns) - g(ns')`` for a coordinatewise smaller size vector; may be negative."""
    ns = _sizes(ns)
    ns_reduced = _sizes(ns_reduced)
    if ns.r != 4 or ns_reduced.r != 4:
        raise InvalidParameterError("induction gap needs two 4-part size vectors")
    if any(b > a for a, b in zip(ns.sizes, ns_reduced.sizes)):
        raise InvalidParameterError(f"{ns_reduced.sizes} is not dominated by {ns.sizes}")
    return g_value(ns, k).value - g_value(ns_reduced, k).value
