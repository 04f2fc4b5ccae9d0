"""Plain exhaustive enumeration over every family F of 2^[n], for n <= 4.

These share no code with the branch-and-bound: a family is the integer whose
bit ``s`` says whether subset ``s`` belongs to it, all 2^(2^n) of them are
tested at once with numpy, and forbidden configurations are listed outright
(all chains of k+1 trace values, all images of an embedded poset).
"""

from __future__ import annotations

from itertools import permutations

import numpy as np

from .poset import TreePoset

ORACLE_GROUND_LIMIT = 4


def _families(n: int) -> np.ndarray:
    if not 1 <= n <= ORACLE_GROUND_LIMIT:
        raise ValueError(f"exhaustive enumeration supports 1 <= n <= {ORACLE_GROUND_LIMIT}")
    return np.arange(1 << (1 << n), dtype=np.int64)


def _sizes(fams: np.ndarray, n: int) -> np.ndarray:
    sizes = np.zeros(fams.shape, dtype=np.int64)
    for s in range(1 << n):
        sizes += (fams >> s) & 1
    return sizes


def _chains(universe: int, length: int):
    """Every chain of ``length`` distinct subsets of ``universe``, as sequences."""
    subs = [s for s in range(universe + 1) if s & ~universe == 0]

    def grow(chain):
        if len(chain) == length:
            yield tuple(chain)
            return
        last = chain[-1]
        for s in subs:
            if s != last and last & ~s == 0:
                yield from grow(chain + [s])

    for s in subs:
        yield from grow([s])


def _best(fams, ok, n):
    sizes = np.where(ok, _sizes(fams, n), -1)
    arg = int(np.argmax(sizes))
    witness = [s for s in range(1 << n) if (arg >> s) & 1]
    return int(sizes[arg]), witness


def trace_sperner_mask(n: int, k: int, l: int) -> np.ndarray:
    """Boolean array over all families: is family ``i`` l-trace k-Sperner."""
    fams = _families(n)
    bad = np.zeros(fams.shape, dtype=bool)
    for window in range(1 << n):
        if bin(window).count("1") != l:
            continue
        traced = np.zeros(fams.shape, dtype=np.int64)
        for s in range(1 << n):
            traced |= ((fams >> s) & 1) << (s & window)
        for chain in _chains(window, k + 1):
            pattern = 0
            for t in chain:
                pattern |= 1 << t
            bad |= (traced & pattern) == pattern
    return ~bad


def exhaustive_max_trace_sperner(n: int, k: int, l: int):
    """``(f(n,k,l), one maximum family as a list of masks)``."""
    return _best(_families(n), trace_sperner_mask(n, k, l), n)


def embedding_images(n: int, poset: TreePoset) -> set:
    """Bit patterns (over the 2^n subsets) of all injective order-preserving images of ``poset``."""
    subsets = list(range(1 << n))
    parent = poset.parent
    images = set()
    assign = [None] * poset.node_count

    def place(i):
        if i == poset.node_count:
            pattern = 0
            for x in assign:
                pattern |= 1 << x
            images.add(pattern)
            return
        top = assign[parent[i]]
        for y in subsets:
            if y != top and y & ~top == 0 and y not in assign[:i]:
                assign[i] = y
                place(i + 1)
        assign[i] = None

    for root in subsets:
        assign[0] = root
        place(1)
    return images


def p_free_mask(n: int, poset: TreePoset) -> np.ndarray:
    fams = _families(n)
    bad = np.zeros(fams.shape, dtype=bool)
    for pattern in embedding_images(n, poset):
        bad |= (fams & pattern) == pattern
    return ~bad


def exhaustive_max_p_free(n: int, poset: TreePoset):
    """``(La(n, P), one maximum family as a list of masks)``."""
    return _best(_families(n), p_free_mask(n, poset), n)


def brute_force_contains(members, poset: TreePoset) -> bool:
    """Try every injective assignment of nodes to members; check all comparabilities."""
    members = list(members)
    count = poset.node_count
    if count > len(members):
        return False
    pairs = [(p, q) for p in range(count) for q in range(count) if poset.below(p, q)]
    for assign in permutations(members, count):
        if all(assign[p] != assign[q] and assign[p] & ~assign[q] == 0 for p, q in pairs):
            return True
    return False


def all_tree_posets(max_nodes: int):
    """Every rooted tree shape (as a TreePoset) with 1..max_nodes nodes, up to isomorphism."""
    seen = set()
    out = []

    def canon(parent):
        kids = [[] for _ in parent]
        for i, p in enumerate(parent):
            if p is not None:
                kids[p].append(i)

        def code(v):
            return "(" + "".join(sorted(code(c) for c in kids[v])) + ")"

        return code(0)

    frontier = [(None,)]
    while frontier:
        parent = frontier.pop()
        key = canon(parent)
        if key in seen:
            continue
        seen.add(key)
        out.append(TreePoset.from_parents(list(parent)))
        if len(parent) < max_nodes:
            for p in range(len(parent)):
                frontier.append(parent + (p,))
    return sorted(out, key=lambda t: (t.node_count, t.parent))
