"""Exact branch-and-bound for f(n, k, l) and La(n, P), plus a local-search lower bound.

Both problems maximise a family under a hereditary constraint, so they share
one engine: candidates (all subsets of [n]) are decided in canonical order,
include before exclude.  Pruning uses a symmetric chain decomposition of
2^[n]: every feasible family meets each chain in a bounded number of sets.
"""

from __future__ import annotations

import logging
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Callable, Optional

from .constructions import all_bands, band, conjecture_rhs, level, midband
from .family import (
    SetFamily,
    TraceProblem,
    canonical_key,
    check_ground,
    full_mask,
    is_strict_subset,
    is_tight_path,
    is_trace_sperner,
    masks_of_popcount,
    shadow,
    submasks_ascending,
)
from .poset import TreePoset, build_complete_tree_poset, contains_poset, embeds_with_root

log = logging.getLogger(__name__)

PROVEN = "proven-optimal"
LOWER_BOUND = "lower-bound-only"

# Candidate lists hold all 2^n subsets.
SEARCH_GROUND_LIMIT = 20


@dataclass(frozen=True)
class SearchBudget:
    max_seconds: float = 600.0
    max_nodes: int = 10**9
    threads: int = 1
    deterministic: bool = False
    seed: int = 0

    def __post_init__(self):
        if not self.max_seconds > 0:
            raise ValueError("max_seconds must be positive")
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be positive")
        if self.threads < 1:
            raise ValueError("threads must be positive")


@dataclass(frozen=True)
class SearchResult:
    best_size: int
    witnesses: tuple
    status: str
    nodes_explored: int
    elapsed: float

    @property
    def proven(self) -> bool:
        return self.status == PROVEN


class InequalityViolation(AssertionError):
    """An exact instance contradicts the proven inequality: the engine is wrong."""


# ------------------------------------------------------------------ helpers


def symmetric_chain_decomposition(n: int) -> list:
    """Partition of 2^[n] into symmetric saturated chains (de Bruijn et al.)."""
    chains = [[0]]
    for e in range(n):
        bit = 1 << e
        nxt = []
        for ch in chains:
            nxt.append(ch + [ch[-1] | bit])
            if len(ch) > 1:
                nxt.append([m | bit for m in ch[:-1]])
        chains = nxt
    return chains


@lru_cache(maxsize=1 << 18)
def _bits_chain_length(bits: int, window: int) -> int:
    """Longest chain among the trace values whose bits are set in ``bits``."""
    g = {}
    for x in submasks_ascending(window):
        b = 0
        rest = x
        while rest:
            low = rest & -rest
            v = g[x ^ low]
            if v > b:
                b = v
            rest ^= low
        g[x] = b + ((bits >> x) & 1)
    return g[window]


class _TraceState:
    """Per-window multiset of trace values, updated on add/remove."""

    def __init__(self, n: int, k: int, l: int):
        self.k = k
        self.windows = list(masks_of_popcount(n, l))
        self.present = [0] * len(self.windows)
        self.counts = [dict() for _ in self.windows]

    def can_add(self, s: int) -> bool:
        k = self.k
        present = self.present
        for wi, w in enumerate(self.windows):
            bit = 1 << (s & w)
            p = present[wi]
            if p & bit:
                continue
            p |= bit
            if p.bit_count() > k and _bits_chain_length(p, w) > k:
                return False
        return True

    def add(self, s: int):
        for wi, w in enumerate(self.windows):
            t = s & w
            c = self.counts[wi]
            c[t] = c.get(t, 0) + 1
            self.present[wi] |= 1 << t

    def remove(self, s: int):
        for wi, w in enumerate(self.windows):
            t = s & w
            c = self.counts[wi]
            c[t] -= 1
            if not c[t]:
                del c[t]
                self.present[wi] &= ~(1 << t)


class _TreeFreeState:
    """Members so far; inserts come in canonical order, so a new set can only be a root image."""

    def __init__(self, poset: TreePoset):
        self.poset = poset
        self.members = []

    def can_add(self, s: int) -> bool:
        self.members.append(s)
        try:
            return not embeds_with_root(self.members, self.poset, s)
        finally:
            self.members.pop()

    def add(self, s: int):
        self.members.append(s)

    def remove(self, s: int):
        self.members.pop()


class _Incumbent:
    def __init__(self, best: int, max_witnesses: int, start: float, shared_nodes=None):
        self.best = best
        self.witnesses = []
        self.max_witnesses = max_witnesses
        self.full = False
        self.lock = threading.Lock()
        self.start = start
        self.shared_nodes = shared_nodes

    def offer(self, size: int, family: SetFamily, nodes: int):
        with self.lock:
            if size > self.best:
                self.best = size
                self.witnesses = [family]
                self.full = len(self.witnesses) >= self.max_witnesses
                log.info(
                    "incumbent size=%d elapsed=%.3fs nodes=%d",
                    size,
                    time.perf_counter() - self.start,
                    nodes,
                )
            elif size == self.best and not self.full:
                self.witnesses.append(family)
                self.full = len(self.witnesses) >= self.max_witnesses


class _Abort(Exception):
    pass


@dataclass
class _Context:
    n: int
    make_state: Callable
    chain_cap: int
    symmetry: bool
    candidates: list = field(init=False)
    chain_of: list = field(init=False)
    caps: list = field(init=False)
    rem: list = field(init=False)
    transpositions: list = field(init=False)

    def __post_init__(self):
        n = self.n
        self.candidates = sorted(range(1 << n), key=canonical_key)
        index = {m: i for i, m in enumerate(self.candidates)}
        chains = symmetric_chain_decomposition(n)
        self.chain_of = [0] * len(self.candidates)
        for ci, ch in enumerate(chains):
            for m in ch:
                self.chain_of[index[m]] = ci
        self.caps = [min(len(ch), self.chain_cap) for ch in chains]
        total = len(self.candidates)
        rem = [[0] * len(chains) for _ in range(total + 1)]
        for i in range(total - 1, -1, -1):
            row = rem[i] = list(rem[i + 1])
            row[self.chain_of[i]] += 1
        self.rem = rem
        self.transpositions = []
        if self.symmetry:
            for a, b in combinations(range(n), 2):
                perm = list(range(n))
                perm[a], perm[b] = b, a
                tp = []
                for m in self.candidates:
                    ma, mb = (m >> a) & 1, (m >> b) & 1
                    img = m
                    if ma != mb:
                        img ^= (1 << a) | (1 << b)
                    tp.append(index[img])
                self.transpositions.append(tp)


class _Limits:
    def __init__(self, deadline: float, node_cap: int, shared: bool):
        self.deadline = deadline
        self.node_cap = node_cap
        self.shared = shared
        self.shared_nodes = 0
        self.stop = threading.Event()


class _Worker:
    def __init__(self, ctx: _Context, inc: _Incumbent, limits: _Limits):
        self.ctx = ctx
        self.inc = inc
        self.limits = limits
        self.state = ctx.make_state()
        self.x = [0] * len(ctx.candidates)
        self.used = [0] * len(ctx.caps)
        self.members = []
        self.nodes = 0
        self.aborted = False

    def leader_ok(self, i: int) -> bool:
        x = self.x
        for tp in self.ctx.transpositions:
            for j in range(i):
                jj = tp[j]
                if jj == j:
                    continue
                if jj >= i:
                    break
                a, b = x[j], x[jj]
                if a != b:
                    if b > a:
                        return False
                    break
        return True

    def run(self, prefix: tuple):
        ctx = self.ctx
        for i, d in enumerate(prefix):
            self.x[i] = d
            if d:
                s = ctx.candidates[i]
                self.state.add(s)
                self.members.append(s)
                self.used[ctx.chain_of[i]] += 1
        try:
            self._dfs(len(prefix), len(self.members))
        except _Abort:
            self.aborted = True
        return self

    def _tick(self):
        lim = self.limits
        if lim.stop.is_set():
            raise _Abort
        if time.perf_counter() > lim.deadline:
            lim.stop.set()
            raise _Abort
        if lim.shared:
            lim.shared_nodes += 1024
            over = lim.shared_nodes >= lim.node_cap
        else:
            over = self.nodes >= lim.node_cap
        if over:
            if lim.shared:
                lim.stop.set()
            raise _Abort

    def _dfs(self, i: int, size: int):
        self.nodes += 1
        if not self.nodes & 1023:
            self._tick()
        ctx = self.ctx
        rem = ctx.rem[i]
        caps = ctx.caps
        used = self.used
        bound = size
        for c in range(len(caps)):
            room = caps[c] - used[c]
            r = rem[c]
            bound += r if r < room else room
        inc = self.inc
        if bound < inc.best or (bound == inc.best and inc.full):
            return
        if i == len(ctx.candidates):
            inc.offer(size, SetFamily(ctx.n, tuple(self.members)), self.nodes)
            return
        s = ctx.candidates[i]
        sym = ctx.symmetry
        if self.state.can_add(s):
            self.x[i] = 1
            if not sym or self.leader_ok(i + 1):
                c = ctx.chain_of[i]
                self.state.add(s)
                self.members.append(s)
                used[c] += 1
                self._dfs(i + 1, size + 1)
                used[c] -= 1
                self.members.pop()
                self.state.remove(s)
        self.x[i] = 0
        if not sym or self.leader_ok(i + 1):
            self._dfs(i + 1, size)


def _frontier(ctx: _Context, depth: int) -> list:
    """Decision prefixes over the first ``depth`` candidates that survive feasibility and symmetry."""
    depth = min(depth, len(ctx.candidates))
    out = []
    probe = _Worker(ctx, None, None)

    def walk(i):
        if i == depth:
            out.append(tuple(probe.x[:depth]))
            return
        s = ctx.candidates[i]
        if probe.state.can_add(s):
            probe.x[i] = 1
            if not ctx.symmetry or probe.leader_ok(i + 1):
                probe.state.add(s)
                walk(i + 1)
                probe.state.remove(s)
        probe.x[i] = 0
        if not ctx.symmetry or probe.leader_ok(i + 1):
            walk(i + 1)

    walk(0)
    return out


FRONTIER_DEPTH = 3


def _branch_and_bound(
    ctx: _Context,
    seed: SetFamily,
    budget: SearchBudget,
    max_witnesses: int,
) -> SearchResult:
    start = time.perf_counter()
    deadline = start + budget.max_seconds
    prefixes = _frontier(ctx, FRONTIER_DEPTH)
    lb = len(seed)

    if budget.deterministic:
        cap = max(1, budget.max_nodes // max(1, len(prefixes)))

        def job(prefix):
            inc = _Incumbent(lb, max_witnesses, start)
            return _Worker(ctx, inc, _Limits(deadline, cap, shared=False)).run(prefix)

        with ThreadPoolExecutor(max_workers=budget.threads) as pool:
            workers = list(pool.map(job, prefixes))
        found = [w.inc for w in workers if w.inc.witnesses]
        best = max((inc.best for inc in found), default=lb)
        witnesses = [f for inc in found if inc.best == best for f in inc.witnesses]
        witnesses = witnesses[:max_witnesses]
    else:
        inc = _Incumbent(lb, max_witnesses, start)
        limits = _Limits(deadline, budget.max_nodes, shared=True)
        if budget.threads == 1:
            workers = [_Worker(ctx, inc, limits).run(())]
        else:
            with ThreadPoolExecutor(max_workers=budget.threads) as pool:
                workers = list(pool.map(lambda p: _Worker(ctx, inc, limits).run(p), prefixes))
        best = inc.best
        witnesses = list(inc.witnesses)

    aborted = any(w.aborted for w in workers)
    nodes = sum(w.nodes for w in workers)
    if not witnesses:
        # nothing at or above the seed size was reached before the budget ran out
        best, witnesses = lb, [seed]
    return SearchResult(
        best_size=best,
        witnesses=tuple(witnesses),
        status=LOWER_BOUND if aborted else PROVEN,
        nodes_explored=nodes,
        elapsed=time.perf_counter() - start,
    )


def _check_search_ground(n: int):
    check_ground(n)
    if n > SEARCH_GROUND_LIMIT:
        raise ValueError(
            f"searches enumerate all 2^n subsets; n={n} exceeds the limit {SEARCH_GROUND_LIMIT}"
        )


def best_band_seed(n: int, feasible: Callable[[SetFamily], bool]) -> SetFamily:
    """Largest union of consecutive levels accepted by ``feasible`` (empty family if none)."""
    best = SetFamily(n, ())
    for spec in sorted(all_bands(n), key=lambda s: (-s.size, s.lo)):
        if spec.size <= len(best):
            break
        fam = band(spec)
        if feasible(fam):
            return fam
    return best


# ------------------------------------------------------------------ public API


def max_trace_sperner(
    problem: TraceProblem,
    budget: Optional[SearchBudget] = None,
    *,
    symmetry: bool = True,
    max_witnesses: int = 4,
) -> SearchResult:
    """f(n, k, l): the largest ``l``-trace ``k``-Sperner family in 2^[n]."""
    budget = budget or SearchBudget()
    n, k, l = problem.n, problem.k, problem.l
    _check_search_ground(n)
    seed = best_band_seed(n, lambda f: is_trace_sperner(f, problem))
    # a chain of m sets keeps at least m - (n - l) distinct traces on any l-window
    ctx = _Context(n, lambda: _TraceState(n, k, l), k + (n - l), symmetry)
    return _branch_and_bound(ctx, seed, budget, max_witnesses)


def max_p_free(
    n: int,
    poset: TreePoset,
    budget: Optional[SearchBudget] = None,
    *,
    symmetry: bool = True,
    max_witnesses: int = 4,
) -> SearchResult:
    """La(n, P): the largest family in 2^[n] not containing the tree poset ``poset``."""
    budget = budget or SearchBudget()
    _check_search_ground(n)
    size = poset.node_count
    if poset.is_chain() and size >= 2:
        make_state = lambda: _TraceState(n, size - 1, n)
    else:
        make_state = lambda: _TreeFreeState(poset)
    seed = best_band_seed(n, lambda f: contains_poset(f, poset) is None)
    # any poset on N nodes embeds into a chain of N sets via a linear extension
    ctx = _Context(n, make_state, size - 1, symmetry)
    return _branch_and_bound(ctx, seed, budget, max_witnesses)


def heuristic_lower_bound(
    problem: TraceProblem,
    budget: Optional[SearchBudget] = None,
    *,
    stall_limit: int = 200,
) -> SearchResult:
    """Local search from the best valid band: greedy additions plus remove-one/refill moves.

    Moves are drawn from ``random.Random(budget.seed)``; the result is
    reproducible unless the time budget cuts the run short.
    """
    budget = budget or SearchBudget()
    start = time.perf_counter()
    n, k, l = problem.n, problem.k, problem.l
    _check_search_ground(n)
    rng = random.Random(budget.seed)
    seed = best_band_seed(n, lambda f: is_trace_sperner(f, problem))
    state = _TraceState(n, k, l)
    current = set(seed.members)
    for s in seed.members:
        state.add(s)
    pool = sorted(range(1 << n), key=canonical_key)
    nodes = 0

    def fill():
        nonlocal nodes
        order = [s for s in pool if s not in current]
        rng.shuffle(order)
        for s in order:
            nodes += 1
            if state.can_add(s):
                state.add(s)
                current.add(s)

    fill()
    best = set(current)
    stall = 0
    while stall < stall_limit and nodes < budget.max_nodes:
        if time.perf_counter() - start > budget.max_seconds:
            break
        if not current:
            break
        snapshot = set(current)
        victim = rng.choice(sorted(current, key=canonical_key))
        state.remove(victim)
        current.discard(victim)
        fill()
        if len(current) > len(best):
            best = set(current)
            stall = 0
            log.info("incumbent size=%d elapsed=%.3fs nodes=%d", len(best), time.perf_counter() - start, nodes)
        else:
            stall += 1
            if len(current) < len(snapshot):
                for s in current - snapshot:
                    state.remove(s)
                for s in snapshot - current:
                    state.add(s)
                current = snapshot
    family = SetFamily.of(n, best)
    return SearchResult(
        best_size=len(family),
        witnesses=(family,),
        status=LOWER_BOUND,
        nodes_explored=nodes,
        elapsed=time.perf_counter() - start,
    )


@dataclass(frozen=True)
class Theorem3Report:
    n: int
    k: int
    lp: int
    lhs: int
    base: int
    la: int
    status: str  # "holds" or "inconclusive"

    @property
    def rhs(self) -> int:
        return self.base + self.la

    @property
    def slack(self) -> int:
        return self.rhs - self.lhs


def theorem3_inequality_check(n: int, k: int, lp: int, budget: Optional[SearchBudget] = None) -> Theorem3Report:
    """Compare f(n,k,n-lp) with f(n,lp,n-lp) + La(n, P_{k-lp+1, 2^lp}), all exact.

    Raises :class:`InequalityViolation` if three proven-optimal values break
    the inequality.
    """
    if not 1 <= lp < k:
        raise ValueError(f"need 1 <= lp < k, got k={k}, lp={lp}")
    if lp >= n:
        raise ValueError(f"need lp < n so that windows are non-empty, got n={n}, lp={lp}")
    lhs = max_trace_sperner(TraceProblem.co(n, k, lp), budget)
    base = max_trace_sperner(TraceProblem.co(n, lp, lp), budget)
    la = max_p_free(n, build_complete_tree_poset(k - lp + 1, 2**lp), budget)
    exact = lhs.proven and base.proven and la.proven
    if exact and lhs.best_size > base.best_size + la.best_size:
        raise InequalityViolation(
            f"f({n},{k},{n - lp})={lhs.best_size} > "
            f"f({n},{lp},{n - lp})={base.best_size} + La={la.best_size}"
        )
    return Theorem3Report(
        n, k, lp, lhs.best_size, base.best_size, la.best_size, "holds" if exact else "inconclusive"
    )


# ------------------------------------------------------------ tight-path-free levels


def _max_independent_set(adj: list) -> int:
    """Maximum independent set size of a graph given as neighbour bitsets."""
    count = len(adj)
    best = 0

    def cover_bound(cand: int) -> int:
        cliques = 0
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            common = adj[v] & cand
            clique = low
            while common:
                u_low = common & -common
                clique |= u_low
                common &= adj[u_low.bit_length() - 1]
            cand &= ~clique
            cliques += 1
        return cliques

    def expand(cand: int, size: int):
        nonlocal best
        if not cand:
            if size > best:
                best = size
            return
        if size + cover_bound(cand) <= best:
            return
        low = cand & -cand
        v = low.bit_length() - 1
        expand(cand & ~adj[v] & ~low, size + 1)
        expand(cand & ~low, size)

    expand((1 << count) - 1, 0)
    return best


def max_tight_path_free_level(n: int, i: int) -> int:
    """Largest subfamily of level(n, i) with no tight path of two sets, by exhaustive search."""
    members = level(n, i).members
    adj = [0] * len(members)
    for a, x in enumerate(members):
        for b, y in enumerate(members):
            if a != b and is_tight_path((x, y)):
                adj[a] |= 1 << b
    return _max_independent_set(adj)


def max_disjoint_shadow_level(n: int, i: int) -> int:
    """Largest subfamily of level(n, i) whose members have pairwise disjoint shadows."""
    members = level(n, i).members
    shadows = [set(shadow(m, n).members) for m in members]
    adj = [0] * len(members)
    for a in range(len(members)):
        for b in range(a + 1, len(members)):
            if shadows[a] & shadows[b]:
                adj[a] |= 1 << b
                adj[b] |= 1 << a
    return _max_independent_set(adj)


def central_binomial(n: int) -> int:
    return comb(n, n // 2)


__all__ = [
    "PROVEN",
    "LOWER_BOUND",
    "SearchBudget",
    "SearchResult",
    "Theorem3Report",
    "InequalityViolation",
    "max_trace_sperner",
    "max_p_free",
    "heuristic_lower_bound",
    "theorem3_inequality_check",
    "max_tight_path_free_level",
    "max_disjoint_shadow_level",
    "symmetric_chain_decomposition",
    "best_band_seed",
    "central_binomial",
    "midband",
    "conjecture_rhs",
    "is_strict_subset",
    "full_mask",
]
