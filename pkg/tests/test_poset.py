import random

import pytest

from tracesperner import oracle
from tracesperner.constructions import band, level, power_set, BandSpec
from tracesperner.family import SetFamily, chain_length, full_mask, longest_chain, mask_of, trace
from tracesperner.poset import (
    CapacityError,
    Embedding,
    PigeonholeError,
    TreePoset,
    build_chain_poset,
    build_complete_tree_poset,
    contains_poset,
    descend_chain_avoiding,
    height_and_level_count,
    peel_roots,
    validate_embedding,
)


def random_family(rng, n, max_size):
    size = rng.randint(0, max_size)
    return SetFamily.of(n, rng.sample(range(1 << n), min(size, 1 << n)))


def test_chain_poset():
    assert build_chain_poset(1).node_count == 1
    p = build_chain_poset(3)
    assert p.node_count == 3 and height_and_level_count(p) == (3, 2)
    with pytest.raises(ValueError):
        build_chain_poset(0)


def test_complete_tree_sizes():
    assert build_complete_tree_poset(3, 2).node_count == 7
    t = build_complete_tree_poset(2, 4)
    assert t.node_count == 5 and t.children[0] == (1, 2, 3, 4)
    assert height_and_level_count(build_complete_tree_poset(3, 2)) == (3, 2)
    assert height_and_level_count(build_complete_tree_poset(1, 5)) == (1, 0)
    for h in range(1, 5):
        for c in range(1, 4):
            t = build_complete_tree_poset(h, c)
            assert t.node_count == sum(c**i for i in range(h))
            assert all(len(ch) in (0, c) for ch in t.children)
            assert height_and_level_count(t)[0] == h
    with pytest.raises(CapacityError):
        build_complete_tree_poset(30, 2)


def test_tree_poset_from_parents_relabels_breadth_first():
    # root is old node 2; old 0 hangs below old 1
    t = TreePoset.from_parents([1, 2, None])
    assert t.parent == (None, 0, 1)
    with pytest.raises(ValueError):
        TreePoset.from_parents([None, 2, 1])
    with pytest.raises(ValueError):
        TreePoset((None, 1))


def test_contains_examples():
    v = build_complete_tree_poset(2, 2)
    emb = contains_poset(power_set(2), v)
    assert emb is not None and emb.assignment[0] == 0b11
    assert set(emb.assignment[1:]) <= {0, 0b01, 0b10}
    assert validate_embedding(emb, v, power_set(2))
    assert contains_poset(level(4, 2), build_chain_poset(2)) is None
    f = SetFamily.from_sets(3, [[2], [1, 3]])
    assert contains_poset(f, build_chain_poset(1)).assignment[0] in f


def test_contains_chain_poset_matches_longest_chain():
    rng = random.Random(1)
    for n in range(1, 5):
        # exhaustive over all families for n <= 3, sampled at n = 4
        fams = range(1 << (1 << n)) if n <= 3 else (rng.randrange(1 << 16) for _ in range(400))
        for code in fams:
            f = SetFamily.of(n, [s for s in range(1 << n) if code >> s & 1])
            longest = len(longest_chain(f)) if len(f) else 0
            for k in range(1, n + 2):
                assert (contains_poset(f, build_chain_poset(k)) is not None) == (longest >= k)
    for _ in range(200):
        n = rng.randint(5, 8)
        f = random_family(rng, n, 12)
        longest = len(longest_chain(f)) if len(f) else 0
        k = rng.randint(1, 5)
        assert (contains_poset(f, build_chain_poset(k)) is not None) == (longest >= k)


def test_contains_matches_brute_force_enumerator():
    rng = random.Random(2)
    posets = oracle.all_tree_posets(5) + [build_complete_tree_poset(3, 2), TreePoset((None, 0, 0, 1, 1, 2))]
    for _ in range(300):
        n = rng.randint(1, 4)
        p = rng.choice(posets)
        f = random_family(rng, n, 8 if p.node_count <= 5 else 7)
        emb = contains_poset(f, p)
        assert (emb is not None) == oracle.brute_force_contains(f.members, p)
        if emb is not None:
            assert validate_embedding(emb, p, f)


def test_containment_monotone_under_subfamilies():
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(2, 5)
        p = rng.choice(oracle.all_tree_posets(4))
        f = random_family(rng, n, 10)
        if contains_poset(f, p) is None:
            sub = SetFamily.of(n, [m for m in f if rng.random() < 0.6])
            assert contains_poset(sub, p) is None


def test_level_window_for_l_of_p():
    # h-1 consecutive full levels never contain P_{h,c}; some h consecutive levels do
    for n in range(2, 9):
        for h in (2, 3):
            t = build_complete_tree_poset(h, 2)
            for lo in range(0, n - h + 3):
                hi = lo + h - 2
                if 0 <= lo and hi <= n:
                    assert contains_poset(band(BandSpec(n, lo, hi)), t) is None
            if n >= h + 1:
                assert any(
                    contains_poset(band(BandSpec(n, lo, lo + h - 1)), t) is not None
                    for lo in range(0, n - h + 2)
                )


def test_peel_roots_examples():
    v = build_complete_tree_poset(2, 2)
    removed, residual = peel_roots(level(4, 2), v)
    assert len(removed) == 0 and residual == level(4, 2)
    removed, residual = peel_roots(power_set(2), v)
    assert removed.members == (0b11,)
    assert residual.members == (0, 0b01, 0b10)
    again, same = peel_roots(residual, v)
    assert len(again) == 0 and same == residual


def test_peel_roots_partition_and_fixed_point():
    rng = random.Random(4)
    for _ in range(100):
        n = rng.randint(2, 5)
        p = rng.choice([build_complete_tree_poset(2, 2), build_complete_tree_poset(3, 2), build_chain_poset(3)])
        f = random_family(rng, n, 20)
        removed, residual = peel_roots(f, p)
        assert set(removed.members) | set(residual.members) == set(f.members)
        assert not set(removed.members) & set(residual.members)
        assert contains_poset(residual, p) is None


def _traces_strict(chain, window):
    t = [m & window for m in chain]
    return all(a != b and a & ~b == 0 for a, b in zip(t, t[1:]))


def test_descend_chain_avoiding():
    t = build_complete_tree_poset(3, 2)
    emb = contains_poset(power_set(4), t)
    ch = descend_chain_avoiding(emb, t, 0)
    # leftmost root-to-leaf path by image order
    assert len(ch) == 3 and ch.links[-1] == emb.assignment[0]
    rng = random.Random(5)
    n = 5
    for lp in (1, 2):
        t = build_complete_tree_poset(3, 2**lp)
        f = power_set(n) if lp == 1 else power_set(6)
        n_ = f.n
        emb = contains_poset(f, t)
        assert emb is not None
        for _ in range(10):
            forbidden = mask_of(rng.sample(range(1, n_ + 1), lp))
            ch = descend_chain_avoiding(emb, t, forbidden)
            assert len(ch) == 3
            assert _traces_strict(ch.links, full_mask(n_) ^ forbidden)
            window = full_mask(n_) ^ forbidden
            assert chain_length(set(trace(SetFamily.of(n_, ch.links), window).members)) == 3


def test_descend_raises_when_branching_too_small():
    t = build_complete_tree_poset(2, 2)
    emb = Embedding((0b111, 0b011, 0b101))
    with pytest.raises(PigeonholeError):
        descend_chain_avoiding(emb, t, 0b110)
