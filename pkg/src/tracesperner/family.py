"""Subsets of [n] as bitmasks, set families, traces, chains and tight paths.

Element ``i`` of the ground set ``[n] = {1, ..., n}`` is bit ``i - 1`` of a
mask.  Every family is kept in canonical order: by cardinality, then by
numeric value of the mask.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

MAX_GROUND = 64


class GroundMismatchError(ValueError):
    """A mask uses elements outside the ground set."""


class EmptyInputError(ValueError):
    pass


class UniformityError(ValueError):
    pass


def check_ground(n: int) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= MAX_GROUND:
        raise ValueError(f"ground size must be an integer in 1..{MAX_GROUND}, got {n!r}")
    return n


def full_mask(n: int) -> int:
    return (1 << n) - 1


def popcount(mask: int) -> int:
    return mask.bit_count()


def canonical_key(mask: int) -> tuple[int, int]:
    return (mask.bit_count(), mask)


def is_strict_subset(a: int, b: int) -> bool:
    return a != b and a & ~b == 0


def mask_of(elements: Iterable[int]) -> int:
    """Mask of a collection of 1-based elements."""
    m = 0
    for e in elements:
        if e < 1:
            raise ValueError(f"elements are 1-based, got {e}")
        m |= 1 << (e - 1)
    return m


def elements_of(mask: int) -> list[int]:
    """1-based elements of a mask, increasing."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def masks_of_popcount(n: int, r: int) -> Iterator[int]:
    """All r-subsets of [n] in increasing numeric order (Gosper's hack)."""
    if r < 0 or r > n:
        return
    if r == 0:
        yield 0
        return
    m = (1 << r) - 1
    limit = 1 << n
    while m < limit:
        yield m
        c = m & -m
        r_ = m + c
        m = (((r_ ^ m) >> 2) // c) | r_


def submasks_ascending(universe: int) -> Iterator[int]:
    """All submasks of ``universe`` in increasing numeric order, 0 first."""
    sub = 0
    while True:
        yield sub
        if sub == universe:
            return
        sub = (sub - universe) & universe


@dataclass(frozen=True)
class SetFamily:
    """Deduplicated family of subsets of [n] in canonical order.

    Build with :meth:`of` (or :meth:`from_sets`) unless the members are
    already canonical; the constructor validates instead of normalizing.
    """

    n: int
    members: tuple[int, ...] = ()

    def __post_init__(self):
        check_ground(self.n)
        outside = ~full_mask(self.n)
        prev = None
        for m in self.members:
            if m < 0 or m & outside:
                raise GroundMismatchError(f"mask {m:#x} is not a subset of [{self.n}]")
            key = canonical_key(m)
            if prev is not None and key <= prev:
                raise ValueError("members must be distinct and in canonical order")
            prev = key

    @classmethod
    def of(cls, n: int, masks: Iterable[int]) -> "SetFamily":
        return cls(n, tuple(sorted(set(masks), key=canonical_key)))

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "SetFamily":
        return cls.of(n, (mask_of(s) for s in sets))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, mask) -> bool:
        return mask in self._member_set

    @property
    def _member_set(self) -> frozenset:
        cached = self.__dict__.get("_ms")
        if cached is None:
            cached = frozenset(self.members)
            object.__setattr__(self, "_ms", cached)
        return cached

    def to_sets(self) -> list[list[int]]:
        return [elements_of(m) for m in self.members]

    def complement(self) -> "SetFamily":
        """Family of complements ``[n] minus F``."""
        full = full_mask(self.n)
        return SetFamily.of(self.n, (full ^ m for m in self.members))

    def permute(self, perm: Sequence[int]) -> "SetFamily":
        """Relabel elements: 0-based element ``j`` goes to ``perm[j]``."""
        return SetFamily.of(self.n, (permute_mask(m, perm) for m in self.members))

    def __repr__(self):
        body = ", ".join("{" + ",".join(map(str, s)) + "}" for s in self.to_sets())
        return f"SetFamily(n={self.n}, [{body}])"


def permute_mask(mask: int, perm: Sequence[int]) -> int:
    out = 0
    j = 0
    while mask:
        if mask & 1:
            out |= 1 << perm[j]
        mask >>= 1
        j += 1
    return out


@dataclass(frozen=True)
class Chain:
    """Strictly increasing sequence of sets; its length counts sets."""

    links: tuple[int, ...]

    def __post_init__(self):
        if not self.links:
            raise ValueError("a chain has at least one link")
        for a, b in zip(self.links, self.links[1:]):
            if not is_strict_subset(a, b):
                raise ValueError("chain links must strictly increase under inclusion")

    def __len__(self):
        return len(self.links)

    def __iter__(self):
        return iter(self.links)


@dataclass(frozen=True)
class TightPath:
    steps: tuple[int, ...]

    def __post_init__(self):
        if not is_tight_path(self.steps):
            raise ValueError("steps do not form a tight path")

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)


def is_tight_path(steps: Sequence[int]) -> bool:
    """Equal-size sets, each step swapping one element for a never-seen one."""
    if not steps:
        return False
    size = steps[0].bit_count()
    seen = steps[0]
    for prev, cur in zip(steps, steps[1:]):
        if cur.bit_count() != size:
            return False
        new = cur & ~prev
        if new.bit_count() != 1 or new & seen:
            return False
        seen |= cur
    return True


@dataclass(frozen=True)
class TraceProblem:
    """Parameters of f(n, k, l): windows of size ``l``, chains of ``k + 1`` forbidden."""

    n: int
    k: int
    l: int

    def __post_init__(self):
        check_ground(self.n)
        if not 1 <= self.l <= self.n:
            raise ValueError(f"window size l must be in 1..{self.n}, got {self.l}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")

    @classmethod
    def co(cls, n: int, k: int, lp: int) -> "TraceProblem":
        """Problem with windows of size ``n - lp``."""
        return cls(n, k, n - lp)

    @property
    def lp(self) -> int:
        return self.n - self.l


# ---------------------------------------------------------------- operations


def trace(family: SetFamily, window: int) -> SetFamily:
    if window < 0 or window & ~full_mask(family.n):
        raise GroundMismatchError(f"window {window:#x} is not a subset of [{family.n}]")
    return SetFamily.of(family.n, (m & window for m in family.members))


def uniform_slice(family: SetFamily, i: int) -> SetFamily:
    if not 0 <= i <= family.n:
        raise ValueError(f"cardinality must be in 0..{family.n}, got {i}")
    return SetFamily(family.n, tuple(m for m in family.members if m.bit_count() == i))


def _longest_chain_dag(members: Sequence[int]) -> list[int]:
    """Lexicographically first longest chain of a canonically ordered list."""
    count = len(members)
    up = [1] * count
    succ = [-1] * count
    for j in range(count - 1, -1, -1):
        mj = members[j]
        best, arg = 0, -1
        for i in range(j + 1, count):
            mi = members[i]
            if mj != mi and mj & ~mi == 0 and up[i] > best:
                best, arg = up[i], i
        up[j] = best + 1
        succ[j] = arg
    start = max(range(count), key=lambda j: (up[j], -j))
    out = []
    while start != -1:
        out.append(members[start])
        start = succ[start]
    return out


def longest_chain(family: SetFamily) -> Chain:
    """A longest chain inside ``family``.

    Among all longest chains the one whose links come first in canonical
    order (compared from the bottom link up) is returned.
    """
    if not family.members:
        raise EmptyInputError("longest_chain of an empty family")
    return Chain(tuple(_longest_chain_dag(family.members)))


def chain_length(values: Iterable[int], universe: Optional[int] = None) -> int:
    """Length of the longest chain among a set of masks.

    Uses a dynamic program over the subset lattice of ``universe`` when that
    is cheaper than the pairwise containment DAG.
    """
    vals = set(values)
    if not vals:
        return 0
    if universe is None:
        universe = 0
        for v in vals:
            universe |= v
    u = universe.bit_count()
    m = len(vals)
    if u <= 20 and (u << u) < m * m:
        return _lattice_chain_length(vals, universe)
    ordered = sorted(vals, key=canonical_key)
    best = [1] * m
    for j in range(m):
        mj = ordered[j]
        b = 0
        for i in range(j):
            mi = ordered[i]
            if mi & ~mj == 0 and best[i] > b:
                b = best[i]
        best[j] = b + 1
    return max(best)


def _lattice_chain_length(vals, universe: int) -> int:
    # g[x] = [x in vals] + max over one-element deletions of g
    g = {}
    for x in submasks_ascending(universe):
        b = 0
        rest = x
        while rest:
            low = rest & -rest
            v = g[x ^ low]
            if v > b:
                b = v
            rest ^= low
        g[x] = b + (1 if x in vals else 0)
    return g[universe]


def is_k_sperner(family: SetFamily, k: int) -> bool:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if len(family) <= k:
        return True
    return chain_length(family.members, full_mask(family.n)) <= k


def _windows(n: int, l: int) -> Iterator[int]:
    return masks_of_popcount(n, l)


def is_trace_sperner(family: SetFamily, problem: TraceProblem) -> bool:
    """Whether every trace of ``family`` on an ``l``-window is ``k``-Sperner."""
    _check_problem(family, problem)
    if len(family) <= problem.k:
        return True
    k = problem.k
    for window in _windows(problem.n, problem.l):
        traces = {m & window for m in family.members}
        if len(traces) > k and chain_length(traces, window) > k:
            return False
    return True


def _check_problem(family: SetFamily, problem: TraceProblem):
    if family.n != problem.n:
        raise GroundMismatchError(
            f"family is over [{family.n}] but the problem is over [{problem.n}]"
        )


@dataclass(frozen=True)
class Violation:
    """A window on which the trace holds a chain of ``k + 1`` distinct sets.

    ``removed`` is the complement of the window, i.e. the deleted elements.
    """

    window: int
    removed: int
    chain: Chain


def find_violation(family: SetFamily, problem: TraceProblem) -> Optional[Violation]:
    """First window (numeric order) whose trace is not ``k``-Sperner, with a chain."""
    _check_problem(family, problem)
    if len(family) <= problem.k:
        return None
    k = problem.k
    full = full_mask(problem.n)
    for window in _windows(problem.n, problem.l):
        traces = {m & window for m in family.members}
        if len(traces) > k and chain_length(traces, window) > k:
            links = _longest_chain_dag(sorted(traces, key=canonical_key))
            return Violation(window, full ^ window, Chain(tuple(links[: k + 1])))
    return None


def shadow(mask: int, n: int) -> SetFamily:
    """All subsets of ``mask`` with one element fewer."""
    return modified_shadow(mask, mask, n)


def modified_shadow(mask: int, anchor: int, n: int) -> SetFamily:
    """One-element deletions of ``mask`` whose deleted element lies in ``anchor``."""
    if mask == 0:
        raise EmptyInputError("the empty set has no shadow")
    rest = mask & anchor
    out = []
    while rest:
        low = rest & -rest
        out.append(mask ^ low)
        rest ^= low
    return SetFamily.of(n, out)


def find_tight_path(family: SetFamily, length: int) -> Optional[TightPath]:
    """Exhaustive depth-first search for a tight path of ``length`` members."""
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    members = family.members
    if not members:
        return None
    size = members[0].bit_count()
    if any(m.bit_count() != size for m in members):
        raise UniformityError("tight paths are defined for uniform families only")

    path: list[int] = []

    def extend(seen: int) -> bool:
        if len(path) == length:
            return True
        last = path[-1]
        for m in members:
            new = m & ~last
            if new.bit_count() == 1 and not new & seen:
                path.append(m)
                if extend(seen | m):
                    return True
                path.pop()
        return False

    for first in members:
        path.append(first)
        if extend(first):
            return TightPath(tuple(path))
        path.pop()
    return None
