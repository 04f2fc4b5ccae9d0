from itertools import combinations, permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tracesperner.constructions import level, midband, power_set
from tracesperner.family import (
    Chain,
    EmptyInputError,
    GroundMismatchError,
    SetFamily,
    TightPath,
    TraceProblem,
    UniformityError,
    chain_length,
    elements_of,
    find_tight_path,
    find_violation,
    full_mask,
    is_k_sperner,
    is_tight_path,
    is_trace_sperner,
    longest_chain,
    mask_of,
    masks_of_popcount,
    modified_shadow,
    shadow,
    trace,
    uniform_slice,
)


def fam(n, *sets):
    return SetFamily.from_sets(n, sets)


# --------------------------------------------------------------- value types


def test_setfamily_canonical_order_and_dedupe():
    f = SetFamily.of(3, [0b110, 0b001, 0b000, 0b110, 0b100])
    assert f.members == (0, 1, 4, 6)


def test_setfamily_rejects_unsorted_and_out_of_ground():
    with pytest.raises(ValueError):
        SetFamily(3, (4, 1))
    with pytest.raises(GroundMismatchError):
        SetFamily(2, (0b100,))
    with pytest.raises(ValueError):
        SetFamily(65, ())


def test_chain_requires_strict_increase():
    with pytest.raises(ValueError):
        Chain((0b01, 0b10))
    with pytest.raises(ValueError):
        Chain(())
    assert len(Chain((0, 1, 3))) == 3


def test_trace_problem_bounds():
    assert TraceProblem.co(5, 3, 2).l == 3
    for bad in [(3, 1, 0), (3, 1, 4), (3, 0, 2)]:
        with pytest.raises(ValueError):
            TraceProblem(*bad)


def test_masks_of_popcount_is_numeric_order():
    got = list(masks_of_popcount(5, 2))
    assert got == sorted(got)
    assert got == sorted(mask_of(c) for c in combinations(range(1, 6), 2))


# -------------------------------------------------------------------- trace


def test_trace_examples():
    f = fam(3, [1, 2], [1, 3], [3])
    assert trace(f, full_mask(3)) == f
    assert trace(fam(3, []), 0b101) == fam(3, [])
    # direct intersection with {1,2}: {1,2}, {1}, {} after dedupe
    expected = SetFamily.of(3, [mask_of(s & {1, 2}) for s in ({1, 2}, {1, 3}, {3})])
    assert trace(f, mask_of([1, 2])) == expected == fam(3, [1, 2], [1], [])


def test_trace_rejects_window_outside_ground():
    with pytest.raises(GroundMismatchError):
        trace(fam(2, [1]), 0b100)


# ------------------------------------------------------------ longest chain


def test_longest_chain_examples():
    assert longest_chain(fam(2, [], [1], [1, 2])).links == (0, 1, 3)
    assert len(longest_chain(level(5, 2))) == 1
    assert longest_chain(power_set(3)).links == (0, 0b001, 0b011, 0b111)
    with pytest.raises(EmptyInputError):
        longest_chain(SetFamily(3, ()))


def test_is_k_sperner_examples():
    assert is_k_sperner(fam(3, [1], [2], [3]), 1)
    assert not is_k_sperner(fam(2, [], [1], [1, 2]), 2)
    assert is_k_sperner(fam(2, [], [1], [1, 2]), 3)
    assert is_k_sperner(SetFamily(4, ()), 1)


@given(st.integers(1, 7).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(0, (1 << n) - 1), max_size=20))))
@settings(max_examples=200, deadline=None)
def test_chain_length_routes_agree(case):
    n, masks = case
    f = SetFamily.of(n, masks)
    expected = len(longest_chain(f)) if masks else 0
    assert chain_length(masks, full_mask(n)) == expected
    from tracesperner.family import _lattice_chain_length

    if masks:
        assert _lattice_chain_length(set(masks), full_mask(n)) == expected


# ------------------------------------------------------------ trace sperner


def _brute_violation(family, l, k):
    """Windows in numeric order via combinations; longest chain by trying all (k+1)-subsets."""
    n = family.n
    windows = sorted(mask_of(c) for c in combinations(range(1, n + 1), l))
    for w in windows:
        traces = sorted({m & w for m in family}, key=lambda m: (bin(m).count("1"), m))
        for combo in combinations(traces, k + 1):
            if all(a != b and a & ~b == 0 for a, b in zip(combo, combo[1:])):
                return w
    return None


def test_trace_sperner_examples():
    assert not is_trace_sperner(power_set(3), TraceProblem(3, 2, 2))
    f = fam(3, [1], [1, 2], [1, 2, 3])
    assert not is_trace_sperner(f, TraceProblem(3, 2, 2))
    assert _brute_violation(f, 2, 2) == mask_of([2, 3])
    for n in range(2, 8):
        for lp in (1, 2):
            for k in range(lp + 1, lp + 3):
                if n > lp:
                    assert is_trace_sperner(midband(n, k, lp), TraceProblem.co(n, k, lp))


def test_find_violation_examples():
    v = find_violation(power_set(2), TraceProblem(2, 1, 2))
    assert v.window == 0b11 and v.chain.links == (0, 0b01)
    f = fam(3, [1], [1, 2], [1, 2, 3])
    v = find_violation(f, TraceProblem(3, 2, 2))
    assert v.window == mask_of([2, 3])
    assert v.removed == mask_of([1])
    assert v.chain.links == (0, mask_of([2]), mask_of([2, 3]))
    assert find_violation(midband(6, 3, 1), TraceProblem.co(6, 3, 1)) is None


def test_find_violation_empty_family_and_ground_mismatch():
    assert find_violation(SetFamily(4, ()), TraceProblem(4, 1, 2)) is None
    assert is_trace_sperner(SetFamily(4, ()), TraceProblem(4, 1, 2))
    with pytest.raises(GroundMismatchError):
        is_trace_sperner(SetFamily(3, ()), TraceProblem(4, 1, 2))


@given(
    st.integers(1, 6).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.sets(st.integers(0, (1 << n) - 1), max_size=10),
            st.integers(1, n),
            st.integers(1, 3),
        )
    )
)
@settings(max_examples=300, deadline=None)
def test_find_violation_matches_brute_force(case):
    n, masks, l, k = case
    f = SetFamily.of(n, masks)
    v = find_violation(f, TraceProblem(n, k, l))
    brute = _brute_violation(f, l, k)
    assert (v is None) == (brute is None) == is_trace_sperner(f, TraceProblem(n, k, l))
    if v is not None:
        assert v.window == brute
        assert len(v.chain) == k + 1
        traced = {m & v.window for m in f}
        assert all(c in traced for c in v.chain)


# -------------------------------------------------------------------- shadows


def test_shadow_examples():
    assert shadow(mask_of([1, 2, 3]), 3) == fam(3, [1, 2], [1, 3], [2, 3])
    assert shadow(mask_of([5]), 5) == fam(5, [])
    for m in range(1, 64):
        assert len(shadow(m, 6)) == bin(m).count("1")
    with pytest.raises(EmptyInputError):
        shadow(0, 3)


def test_modified_shadow_examples():
    s, anchor = mask_of([2, 3, 4]), mask_of([1, 2, 3])
    direct = [mask_of(set(elements_of(s)) - {e}) for e in elements_of(s) if e in elements_of(anchor)]
    assert modified_shadow(s, anchor, 4) == SetFamily.of(4, direct) == fam(4, [3, 4], [2, 4])
    for m in range(1, 32):
        assert modified_shadow(m, m, 5) == shadow(m, 5)
        assert len(modified_shadow(m, 0, 5)) == 0
        assert len(modified_shadow(m, 0b10110, 5)) == bin(m & 0b10110).count("1")


# --------------------------------------------------------------- tight paths


def _brute_tight_path(members, length):
    return any(is_tight_path(p) for p in permutations(members, length))


def test_find_tight_path_examples():
    p = find_tight_path(fam(4, [1, 2], [2, 3], [3, 4]), 3)
    assert p.steps == (mask_of([1, 2]), mask_of([2, 3]), mask_of([3, 4]))
    assert find_tight_path(fam(5, [2], [4]), 2) is not None
    tri = fam(3, [1, 2], [1, 3], [2, 3])
    assert not _brute_tight_path(tri.members, 3)
    assert find_tight_path(tri, 3) is None
    assert find_tight_path(tri, 2) is not None


def test_find_tight_path_rejects_non_uniform():
    with pytest.raises(UniformityError):
        find_tight_path(fam(3, [1], [1, 2]), 2)
    with pytest.raises(ValueError):
        TightPath((mask_of([1, 2]), mask_of([1, 2])))


@given(
    st.integers(2, 6).flatmap(
        lambda n: st.integers(1, n - 1).flatmap(
            lambda i: st.tuples(
                st.just(n),
                st.lists(st.sampled_from(list(masks_of_popcount(n, i))), unique=True, max_size=6),
                st.integers(1, 4),
            )
        )
    )
)
@settings(max_examples=200, deadline=None)
def test_find_tight_path_matches_brute_force(case):
    n, masks, length = case
    f = SetFamily.of(n, masks)
    got = find_tight_path(f, length)
    assert (got is not None) == _brute_tight_path(f.members, length)
    if got is not None:
        assert len(got) == length and all(s in f for s in got)


# ------------------------------------------------------------------ slices


def test_uniform_slice():
    p = power_set(2)
    assert uniform_slice(p, 1) == fam(2, [1], [2])
    with pytest.raises(ValueError):
        uniform_slice(p, 3)
    f = power_set(5)
    assert sum(len(uniform_slice(f, i)) for i in range(6)) == len(f)


# ---------------------------------------------------------------- invariants


@given(
    st.integers(1, 8).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.lists(st.integers(0, (1 << n) - 1), max_size=12),
            st.integers(0, (1 << n) - 1),
            st.integers(0, (1 << n) - 1),
        )
    )
)
def test_trace_composition_and_size(case):
    n, masks, x, y = case
    f = SetFamily.of(n, masks)
    assert trace(trace(f, x), y) == trace(f, x & y)
    assert len(trace(f, x)) <= min(len(f), 2 ** bin(x).count("1"))


@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
def test_trace_monotone(a, b, x):
    g, g2 = a & b, a
    assert (g & x) & ~(g2 & x) == 0


def test_complement_reverses_chains():
    f = fam(4, [1], [1, 2], [1, 2, 3])
    assert is_trace_sperner(f.complement(), TraceProblem(4, 2, 3)) == is_trace_sperner(f, TraceProblem(4, 2, 3))
