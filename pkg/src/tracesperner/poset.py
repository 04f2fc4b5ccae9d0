"""Tree posets (Hasse graph a tree with a unique maximum) and their embeddings.

Node 0 is the root (the maximum).  Nodes are numbered breadth-first from the
root, so ``parent[i] < i`` and the parent sequence is non-decreasing.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .family import Chain, SetFamily, canonical_key, is_strict_subset

DEFAULT_NODE_CAP = 10**6


class CapacityError(ValueError):
    pass


class PigeonholeError(RuntimeError):
    """No child of the current node keeps the trace chain strict."""


@dataclass(frozen=True)
class TreePoset:
    """``parent[i]`` is the Hasse-parent of node ``i``; ``parent[0]`` is None."""

    parent: tuple

    def __post_init__(self):
        if not self.parent or self.parent[0] is not None:
            raise ValueError("node 0 must be the root and have no parent")
        prev = 0
        for i, p in enumerate(self.parent[1:], start=1):
            if not isinstance(p, int) or not 0 <= p < i or p < prev:
                raise ValueError("nodes must be numbered breadth-first from the root")
            prev = p

    @classmethod
    def from_parents(cls, parents: Sequence[Optional[int]]) -> "TreePoset":
        """Build from arbitrary parent links, relabelling nodes breadth-first.

        Exactly one entry must be None (the root).  Children keep the
        relative order of their original indices.
        """
        count = len(parents)
        roots = [i for i, p in enumerate(parents) if p is None]
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root, found {len(roots)}")
        children = [[] for _ in range(count)]
        for i, p in enumerate(parents):
            if p is None:
                continue
            if not isinstance(p, int) or not 0 <= p < count or p == i:
                raise ValueError(f"invalid parent {p!r} for node {i}")
            children[p].append(i)
        order, new_parent = [], {}
        queue = deque([(roots[0], None)])
        while queue:
            old, par = queue.popleft()
            new_parent[len(order)] = par
            idx = len(order)
            order.append(old)
            for c in children[old]:
                queue.append((c, idx))
        if len(order) != count:
            raise ValueError("parent links do not form a single tree")
        return cls(tuple(new_parent[i] for i in range(count)))

    @property
    def node_count(self) -> int:
        return len(self.parent)

    @property
    def root(self) -> int:
        return 0

    @property
    def children(self) -> tuple:
        cached = self.__dict__.get("_children")
        if cached is None:
            ch = [[] for _ in self.parent]
            for i, p in enumerate(self.parent[1:], start=1):
                ch[p].append(i)
            cached = tuple(tuple(c) for c in ch)
            object.__setattr__(self, "_children", cached)
        return cached

    @property
    def depth(self) -> tuple:
        d = [0] * len(self.parent)
        for i, p in enumerate(self.parent[1:], start=1):
            d[i] = d[p] + 1
        return tuple(d)

    def is_chain(self) -> bool:
        return all(len(c) <= 1 for c in self.children)

    def below(self, p: int, q: int) -> bool:
        """Whether ``p < q`` in the poset, i.e. q is a proper ancestor of p."""
        while p != 0:
            p = self.parent[p]
            if p == q:
                return True
        return False


@dataclass(frozen=True)
class Embedding:
    assignment: tuple


def build_chain_poset(k: int) -> TreePoset:
    if k < 1:
        raise ValueError(f"chain length must be >= 1, got {k}")
    return TreePoset((None,) + tuple(range(k - 1)))


def build_complete_tree_poset(h: int, c: int, cap: int = DEFAULT_NODE_CAP) -> TreePoset:
    """Poset whose Hasse graph is the complete ``c``-ary tree with ``h`` levels."""
    if h < 1 or c < 1:
        raise ValueError(f"need h >= 1 and c >= 1, got h={h}, c={c}")
    total = sum(c**i for i in range(h))
    if total > cap:
        raise CapacityError(f"complete tree h={h}, c={c} has {total} nodes (cap {cap})")
    parent = [None]
    level_start, level_size = 0, 1
    for _ in range(h - 1):
        for j in range(level_size):
            parent.extend([level_start + j] * c)
        level_start += level_size
        level_size *= c
    return TreePoset(tuple(parent))


def height_and_level_count(poset: TreePoset) -> tuple[int, int]:
    """``(h, l)``: longest chain (in nodes) and the consecutive-levels number ``h - 1``."""
    h = max(poset.depth) + 1
    return h, h - 1


def validate_embedding(emb: Embedding, poset: TreePoset, family: SetFamily) -> bool:
    """Check an embedding against the full order relation, not just Hasse arcs."""
    a = emb.assignment
    if len(a) != poset.node_count or len(set(a)) != len(a):
        return False
    if any(x not in family for x in a):
        return False
    for p in range(poset.node_count):
        for q in range(poset.node_count):
            if poset.below(p, q) and not is_strict_subset(a[p], a[q]):
                return False
    return True


class _Embedder:
    """Depth-first injective assignment, root first, with a call-local memo."""

    def __init__(self, members: Sequence[int], poset: TreePoset):
        self.members = list(members)
        self.poset = poset
        self.children = poset.children
        self.memo: dict = {}
        self._below: dict = {}
        self._subtree_size = self._sizes()

    def _sizes(self):
        size = [1] * self.poset.node_count
        for i in range(self.poset.node_count - 1, 0, -1):
            size[self.poset.parent[i]] += size[i]
        return size

    def below(self, x: int) -> list:
        got = self._below.get(x)
        if got is None:
            got = [m for m in self.members if m != x and m & ~x == 0]
            self._below[x] = got
        return got

    def fits(self, v: int, x: int) -> bool:
        """Relaxed test: subtree of ``v`` maps under ``x`` ignoring collisions across branches."""
        key = (v, x)
        got = self.memo.get(key)
        if got is not None:
            return got
        ok = True
        kids = self.children[v]
        if kids:
            cand = self.below(x)
            if len(cand) < self._subtree_size[v] - 1:
                ok = False
            else:
                for c in kids:
                    if not any(self.fits(c, y) for y in cand):
                        ok = False
                        break
        self.memo[key] = ok
        return ok

    def embed_with_root(self, root_image: int) -> Optional[tuple]:
        if not self.fits(0, root_image):
            return None
        count = self.poset.node_count
        assign = [None] * count
        assign[0] = root_image
        used = {root_image}
        parent = self.poset.parent

        children = self.children

        def place(i: int) -> bool:
            if i == count:
                return True
            cand = self.below(assign[parent[i]])
            # inner nodes need room underneath: try the largest sets first
            for y in reversed(cand) if children[i] else cand:
                if y in used or not self.fits(i, y):
                    continue
                assign[i] = y
                used.add(y)
                if place(i + 1):
                    return True
                used.discard(y)
            return False

        return tuple(assign) if place(1) else None

    def embed(self) -> Optional[tuple]:
        for x in self.members:
            got = self.embed_with_root(x)
            if got is not None:
                return got
        return None


def contains_poset(family: SetFamily, poset: TreePoset) -> Optional[Embedding]:
    """First embedding of ``poset`` into ``family``, or None if the family is P-free."""
    got = _Embedder(family.members, poset).embed()
    return None if got is None else Embedding(got)


def embeds_with_root(members: Sequence[int], poset: TreePoset, root_image: int) -> bool:
    """Whether some embedding maps the root of ``poset`` to ``root_image``."""
    return _Embedder(members, poset).embed_with_root(root_image) is not None


def peel_roots(family: SetFamily, poset: TreePoset) -> tuple[SetFamily, SetFamily]:
    """Repeatedly delete the root image of the first embedding until none is left.

    Returns ``(removed, residual)``.
    """
    residual = list(family.members)
    removed = []
    while True:
        got = _Embedder(residual, poset).embed()
        if got is None:
            break
        removed.append(got[0])
        residual.remove(got[0])
    return SetFamily.of(family.n, removed), SetFamily(family.n, tuple(residual))


def descend_chain_avoiding(emb: Embedding, poset: TreePoset, forbidden: int) -> Chain:
    """Walk from the root down one node per level, never stepping by a subset of ``forbidden``.

    Each step picks the first child (canonical order of images) whose set
    difference to the current image is not contained in ``forbidden``, so the
    traces on the complement of ``forbidden`` stay strictly nested.
    """
    a = emb.assignment
    node = 0
    links = [a[0]]
    while poset.children[node]:
        cur = a[node]
        kids = sorted(poset.children[node], key=lambda c: canonical_key(a[c]))
        for c in kids:
            if (cur & ~a[c]) & ~forbidden:
                node = c
                break
        else:
            raise PigeonholeError(
                f"every child of node {node} differs from it only inside the forbidden set"
            )
        links.append(a[node])
    return Chain(tuple(reversed(links)))
