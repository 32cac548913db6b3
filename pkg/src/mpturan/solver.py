"""Exact ``ex(K_{n_1..n_r}, kK_t)`` at desk scale by branch and bound.

The host's cross-part pairs ("slots") are decided in row-major order, include
before exclude. Pruning uses

* an incumbent seeded from the known constructions,
* a disjoint-conflict bound: every undecided slot whose addition would create
  ``kK_t`` must be dropped, and every host clique that avoids a fixed
  ``(k-1)K_t`` and is not yet broken needs one of its undecided slots dropped,
* within-part symmetry: the neighbourhood of each vertex must be
  lexicographically at least that of the next vertex of its part.

For ``k >= 2`` the search is split by the first ``(k-1)K_t`` the answer
contains. Up to host symmetry that packing can be pinned on the lowest vertices
of its parts, which makes the clique bound bite from the root. Graphs with no
such packing are covered by the ``k-1`` answer, computed recursively.
"""

from __future__ import annotations

import enum
import itertools
import math
import time
from dataclasses import dataclass, field

from .constructions import build_conjectured, build_g1, build_g2
from .errors import CapExceededError, InfeasibleConstructionError, InvalidParameterError
from .formulas import bet_value, conj_value, g_value, matching_extremal_value
from .graph import MultipartiteGraph, PartSizes, iter_bits
from .packing import cliques_in, is_kkt_free, pack

HARD_CAP = 14


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 20_000_000
    max_seconds: float = 3600.0
    initial_incumbent: int | None = None

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_seconds <= 0:
            raise InvalidParameterError("budget limits must be positive")


class Status(str, enum.Enum):
    MATCHES = "MatchesFormula"
    EXCEEDS = "ExceedsFormula"
    BELOW = "BelowFormula"
    NO_FORMULA = "NoApplicableFormula"
    BUDGET = "BudgetExceeded"


@dataclass
class ExtremalRecord:
    ns: PartSizes
    t: int
    k: int
    exact_value: int | None
    best_value: int
    witness: MultipartiteGraph
    formula_g: int | None = None
    formula_bet: int | None = None
    formula_conj: int | None = None
    formula_matching: int | None = None
    status: Status = Status.NO_FORMULA
    status_formula: str | None = None
    gap: int | None = None
    finding: bool = False
    nodes_explored: int = 0
    elapsed: float = 0.0
    comparisons: dict = field(default_factory=dict)

    @property
    def solved(self) -> bool:
        return self.exact_value is not None

    def formulas(self) -> dict[str, int | None]:
        return {
            "g": self.formula_g,
            "bet": self.formula_bet,
            "conj": self.formula_conj,
            "matching": self.formula_matching,
        }

    def status_label(self) -> str:
        if self.status in (Status.MATCHES,):
            return f"{self.status.value}({self.status_formula})"
        if self.status in (Status.EXCEEDS, Status.BELOW):
            return f"{self.status.value}({self.status_formula},{self.gap})"
        return self.status.value


class _BudgetExceeded(Exception):
    pass


class _Clock:
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.nodes = 0
        self.start = time.monotonic()
        self.exceeded = False

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes >= self.budget.max_nodes:
            self.exceeded = True
            raise _BudgetExceeded
        if self.nodes & 4095 == 0 and time.monotonic() - self.start > self.budget.max_seconds:
            self.exceeded = True
            raise _BudgetExceeded


class _Host:
    """Slots and cliques of the complete multipartite host."""

    def __init__(self, ns: PartSizes, t: int):
        self.ns = ns
        self.t = t
        g = MultipartiteGraph(ns)
        self.n = g.n
        self.part_of = g.part_of
        self.offsets = g.offsets
        self.slots: list[tuple[int, int]] = []
        self.slot_of: dict[tuple[int, int], int] = {}
        for a in range(g.n):
            for b in range(a + 1, g.n):
                if g.part_of[a] != g.part_of[b]:
                    self.slot_of[(a, b)] = len(self.slots)
                    self.slots.append((a, b))
        full = (1 << g.n) - 1
        host_adj = [full & ~g.part_mask(g.part_of[v]) for v in range(g.n)]
        self.cliques: list[tuple[int, int]] = []
        for c in cliques_in(host_adj, full, t):
            vs = list(iter_bits(c))
            smask = 0
            for i in range(t):
                for j in range(i + 1, t):
                    smask |= 1 << self.slot_of[(vs[i], vs[j])]
            self.cliques.append((c, smask))

    def clique_slots(self, vmask: int) -> int:
        vs = list(iter_bits(vmask))
        m = 0
        for i in range(len(vs)):
            for j in range(i + 1, len(vs)):
                m |= 1 << self.slot_of[(vs[i], vs[j])]
        return m


class _Incumbent:
    def __init__(self, value: int, adj: list[int] | None):
        self.value = value
        self.adj = adj

    @property
    def target(self) -> int:
        # without a witness graph we must still find one at the seeded value
        return self.value + 1 if self.adj is not None else self.value

    def offer(self, value: int, adj: list[int]) -> None:
        if value > self.value or self.adj is None and value >= self.value:
            self.value = value
            self.adj = list(adj)


def _has_clique(adj: list[int], cand: int, size: int) -> bool:
    if size == 0:
        return True
    if cand.bit_count() < size:
        return False
    while cand:
        low = cand & -cand
        cand ^= low
        if _has_clique(adj, cand & adj[low.bit_length() - 1], size - 1):
            return True
    return False


def _case_search(host: _Host, k: int, fixed: list[int], inc: _Incumbent, clock: _Clock) -> None:
    """Maximise edges over kK_t-free graphs containing the cliques in ``fixed``."""
    t = host.t
    n = host.n
    slots = host.slots
    slot_of = host.slot_of
    part_of = host.part_of
    pmask = 0
    for c in fixed:
        pmask |= c

    adj = [0] * n
    fixed_slots = 0
    for c in fixed:
        fixed_slots |= host.clique_slots(c)
        for a in iter_bits(c):
            adj[a] |= c & ~(1 << a)
    cur0 = fixed_slots.bit_count()

    order = [s for s in range(len(slots)) if not (fixed_slots >> s) & 1]
    suffix = [0] * (len(order) + 1)
    for j in range(len(order) - 1, -1, -1):
        suffix[j] = suffix[j + 1] | (1 << order[j])
    vslots = [0] * n
    for s, (a, b) in enumerate(slots):
        vslots[a] |= 1 << s
        vslots[b] |= 1 << s

    # pred[v] = v-1 when swapping v-1 and v is a host automorphism fixing the
    # pinned packing: same part, or two singleton parts
    sizes = host.ns.sizes
    pred = [-1] * n
    for v in range(1, n):
        if (pmask >> v) & 1 or (pmask >> (v - 1)) & 1:
            continue
        same = part_of[v - 1] == part_of[v]
        singles = sizes[part_of[v - 1] - 1] == 1 and sizes[part_of[v] - 1] == 1
        if same or singles:
            pred[v] = v - 1

    full = (1 << n) - 1
    need_more = k - 1
    tm2 = t - 2
    nbuckets = t * (t - 1) // 2 + 1

    def creates_packing(s: int, cache: list) -> bool:
        """Would adding slot ``s`` to the current graph create kK_t?

        ``cache`` holds the current graph's t-cliques once computed.
        """
        a, b = slots[s]
        common = adj[a] & adj[b]
        if need_more == 0:
            return _has_clique(adj, common, tm2)
        through = [0] if tm2 == 0 else cliques_in(adj, common, tm2)
        ab = (1 << a) | (1 << b)
        for c in through:
            if not (c | ab) & pmask:
                return True
        if not through:
            return False
        if not cache:
            cache.append(cliques_in(adj, full, t))
        gcl = cache[0]
        for c in through:
            if pack(gcl, full & ~(c | ab), need_more, t) is not None:
                return True
        return False

    def scan(candidates: int) -> int:
        dead = 0
        cache: list = []
        for s in iter_bits(candidates):
            if creates_packing(s, cache):
                dead |= 1 << s
        return dead

    def touched(a: int, b: int) -> int:
        """Slots whose deadness can change when edge ab appears (k = 1)."""
        m = vslots[a] | vslots[b]
        if tm2 >= 2:
            w = adj[a] & adj[b]
            for x in iter_bits(w):
                for y in iter_bits(w >> (x + 1) << (x + 1)):
                    sl = slot_of.get((x, y))
                    if sl is not None:
                        m |= 1 << sl
        return m

    def sym_ok(a: int, b: int) -> bool:
        # column rule: b against its predecessor, compared on bits below a
        p = pred[b]
        if p >= 0 and p != a:
            if not (adj[p] ^ adj[b]) & ((1 << a) - 1) and not (adj[p] >> a) & 1:
                return False
        # row rule: a against its predecessor, compared on bits below b
        p = pred[a]
        if p >= 0:
            below = ((1 << b) - 1) & ~((1 << p) | (1 << a))
            if not (adj[p] ^ adj[a]) & below and not (adj[p] >> b) & 1:
                return False
        return True

    last = len(order)

    def node(j: int, cur: int, dead: int, confl: list[int]) -> None:
        clock.tick()
        undecided = suffix[j]
        und = undecided.bit_count()
        target = inc.target
        if cur + und < target:
            return
        if j == last:
            inc.offer(cur, adj)
            return
        if need_more:
            dead = scan(undecided)
        else:
            dead &= undecided
        used = dead
        lower = dead.bit_count()
        if cur + und - lower < target:
            return
        buckets: list[list[int]] = [[] for _ in range(nbuckets)]
        for sm in confl:
            u = sm & undecided
            if not u & used:
                buckets[u.bit_count()].append(u)
        for bucket in buckets:
            for u in bucket:
                if not u & used:
                    used |= u
                    lower += 1
        if cur + und - lower < target:
            return
        s = order[j]
        bit = 1 << s
        a, b = slots[s]
        if not dead & bit and sym_ok(a, b):
            adj[a] |= 1 << b
            adj[b] |= 1 << a
            child_dead = dead
            if not need_more:
                cand = touched(a, b) & suffix[j + 1] & ~dead
                child_dead |= scan(cand)
            node(j + 1, cur + 1, child_dead, confl)
            adj[a] &= ~(1 << b)
            adj[b] &= ~(1 << a)
        node(j + 1, cur, dead, [sm for sm in confl if not sm & bit])

    conflicts = [sm for vm, sm in host.cliques if not vm & pmask]
    node(0, cur0, scan(suffix[0]) if not need_more else 0, conflicts)


def _packing_types(ns: PartSizes, t: int, m: int) -> list[tuple[tuple[int, ...], ...]]:
    """Multisets of ``m`` t-subsets of parts that fit the part sizes, one per
    orbit under permutations of equal-size parts."""
    r = ns.r
    subsets = list(itertools.combinations(range(r), t))
    groups: dict[int, list[int]] = {}
    for i, s in enumerate(ns.sizes):
        groups.setdefault(s, []).append(i)
    group_size = math.prod(math.factorial(len(v)) for v in groups.values())
    perms: list[list[int]] | None = None
    if group_size <= 5040:
        perms = []
        classes = list(groups.values())
        for choice in itertools.product(*(itertools.permutations(c) for c in classes)):
            pi = list(range(r))
            for src, dst in zip(classes, choice):
                for x, y in zip(src, dst):
                    pi[x] = y
            perms.append(pi)
    seen = set()
    out = []
    for combo in itertools.combinations_with_replacement(subsets, m):
        use = [0] * r
        for sub in combo:
            for i in sub:
                use[i] += 1
        if any(use[i] > ns.sizes[i] for i in range(r)):
            continue
        if perms is None:
            key = combo
        else:
            key = min(tuple(sorted(tuple(sorted(pi[i] for i in sub)) for sub in combo)) for pi in perms)
        if key in seen:
            continue
        seen.add(key)
        out.append(combo)
    return out


def _place(host: _Host, combo) -> list[int]:
    nxt = list(host.offsets[:-1])
    out = []
    for sub in combo:
        c = 0
        for i in sub:
            c |= 1 << nxt[i]
            nxt[i] += 1
        out.append(c)
    return out


def _graph_from_adj(ns: PartSizes, adj: list[int]) -> MultipartiteGraph:
    g = MultipartiteGraph(ns)
    for x, a in enumerate(adj):
        for y in iter_bits(a >> (x + 1)):
            g.add_edge(x, x + 1 + y)
    return g


def _seed_constructions(ns: PartSizes, t: int, k: int) -> list[MultipartiteGraph]:
    out = []
    builders = []
    if ns.r >= t - 1:
        builders.append(lambda: build_conjectured(ns, t, k))
    if ns.r == 4 and t == 3:
        builders.append(lambda: build_g1(ns, k))
        builders.append(lambda: build_g2(ns, k))
    for build in builders:
        try:
            g = build()
        except InfeasibleConstructionError:
            continue
        if is_kkt_free(g, k, t):
            out.append(g)
    return out


def _solve_sorted(ns: PartSizes, t: int, k: int, clock: _Clock, seed: int | None, memo: dict) -> tuple[int, list[int], bool]:
    """Returns ``(value, adjacency, complete)`` for a host in any part order."""
    key = (ns.sizes, t, k)
    if key in memo:
        return memo[key]
    host = _Host(ns, t)
    full_adj = [0] * host.n
    for a, b in host.slots:
        full_adj[a] |= 1 << b
        full_adj[b] |= 1 << a
    all_edges = len(host.slots)
    if not host.cliques or pack([c for c, _ in host.cliques], (1 << host.n) - 1, k, t) is None:
        memo[key] = (all_edges, full_adj, True)
        return memo[key]

    inc = _Incumbent(0, [0] * host.n)
    for g in _seed_constructions(ns, t, k):
        inc.offer(g.num_edges, g.adj)
    complete = True
    base = None
    if k >= 2:
        base = _solve_sorted(ns, t, k - 1, clock, None, memo)
        inc.offer(base[0], base[1])
        complete = base[2]
    if seed is not None and seed > inc.value:
        inc = _Incumbent(seed, None)
    try:
        if k == 1:
            _case_search(host, 1, [], inc, clock)
        else:
            for combo in _packing_types(ns, t, k - 1):
                _case_search(host, k, _place(host, combo), inc, clock)
    except _BudgetExceeded:
        complete = False
    if inc.adj is None:
        # seeded value was unattainable; fall back to an unseeded search
        return _solve_sorted(ns, t, k, clock, None, memo)
    result = (inc.value, inc.adj, complete)
    if complete:
        memo[key] = result
    return result


def _relabel(ns: PartSizes, sorted_ns: PartSizes, perm: tuple[int, ...], adj: list[int]) -> MultipartiteGraph:
    src = MultipartiteGraph(sorted_ns)
    dst = MultipartiteGraph(ns)
    mapping = [0] * src.n
    for pos, orig in enumerate(perm, start=1):
        for a, b in zip(src.part_vertices(pos), dst.part_vertices(orig)):
            mapping[a] = b
    for x, a in enumerate(adj):
        for y in iter_bits(a >> (x + 1)):
            dst.add_edge(mapping[x], mapping[x + 1 + y])
    return dst


def exact_extremal(
    ns,
    t: int,
    k: int,
    budget: SearchBudget | None = None,
    cap: int = HARD_CAP,
    canonical_order: bool = True,
) -> ExtremalRecord:
    """Maximum edge count of a kK_t-free spanning subgraph of ``K_ns``.

    With ``canonical_order`` the parts are sorted non-ascending before the
    search and the witness is mapped back; the value does not depend on it.
    """
    ns = PartSizes.of(ns)
    if t < 2 or k < 1:
        raise InvalidParameterError(f"need t >= 2 and k >= 1, got t={t}, k={k}")
    if ns.total > cap:
        raise CapExceededError(f"host has {ns.total} vertices, cap is {cap}")
    budget = budget or SearchBudget()
    clock = _Clock(budget)
    if canonical_order:
        perm = ns.sort_permutation()
        work = PartSizes(ns.sorted_view())
    else:
        perm = tuple(range(1, ns.r + 1))
        work = ns
    value, adj, complete = _solve_sorted(work, t, k, clock, budget.initial_incumbent, {})
    witness = _relabel(ns, work, perm, adj)
    rec = ExtremalRecord(
        ns=ns,
        t=t,
        k=k,
        exact_value=value if complete else None,
        best_value=value,
        witness=witness,
        nodes_explored=clock.nodes,
        elapsed=time.monotonic() - clock.start,
    )
    if not complete:
        rec.status = Status.BUDGET
    return rec


def applicable_formulas(ns: PartSizes, t: int, k: int) -> dict[str, int | None]:
    ns = PartSizes.of(ns)
    return {
        "g": g_value(ns, k).value if ns.r == 4 and t == 3 else None,
        "bet": bet_value(ns, t).value if k == 1 else None,
        "conj": conj_value(ns, t, k).value if t >= 3 and ns.r >= t - 1 else None,
        "matching": matching_extremal_value(ns, k) if t == 2 else None,
    }


def primary_formula(ns: PartSizes, t: int, k: int) -> str | None:
    if k == 1:
        return "bet"
    if t == 2:
        return "matching"
    if ns.r == 4 and t == 3:
        return "g"
    if t >= 3 and ns.r >= t - 1:
        return "conj"
    return None


def classify(rec: ExtremalRecord) -> ExtremalRecord:
    """Attach every applicable formula to ``rec`` and set its status."""
    values = applicable_formulas(rec.ns, rec.t, rec.k)
    rec.formula_g = values["g"]
    rec.formula_bet = values["bet"]
    rec.formula_conj = values["conj"]
    rec.formula_matching = values["matching"]
    observed = rec.exact_value if rec.solved else rec.best_value
    rec.comparisons = {}
    for name, val in values.items():
        if val is None:
            continue
        rec.comparisons[name] = "match" if observed == val else ("exceeds" if observed > val else "below")
    name = primary_formula(rec.ns, rec.t, rec.k)
    if not rec.solved:
        rec.status = Status.BUDGET
        rec.status_formula = name
        return rec
    if name is None:
        rec.status = Status.NO_FORMULA
        return rec
    val = values[name]
    rec.status_formula = name
    rec.gap = rec.exact_value - val
    if rec.gap == 0:
        rec.status = Status.MATCHES
    elif rec.gap > 0:
        rec.status = Status.EXCEEDS
    else:
        rec.status = Status.BELOW
    # the 4-partite kK_3 bound is only claimed for large parts, so small
    # disagreements are data, not failures
    rec.finding = rec.status != Status.MATCHES and name in ("g", "conj")
    return rec


def verify_point(ns, t: int, k: int, budget: SearchBudget | None = None, cap: int = HARD_CAP) -> ExtremalRecord:
    return classify(exact_extremal(ns, t, k, budget, cap))
