"""Full levels, consecutive bands and low/high level unions of 2^[n]."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .family import SetFamily, check_ground, full_mask, masks_of_popcount


@dataclass(frozen=True)
class BandSpec:
    n: int
    lo: int
    hi: int

    def __post_init__(self):
        check_ground(self.n)
        if not 0 <= self.lo <= self.hi <= self.n:
            raise ValueError(f"need 0 <= lo <= hi <= n, got lo={self.lo}, hi={self.hi}, n={self.n}")

    @property
    def size(self) -> int:
        return sum(comb(self.n, i) for i in range(self.lo, self.hi + 1))


def level(n: int, i: int) -> SetFamily:
    check_ground(n)
    if not 0 <= i <= n:
        raise ValueError(f"level must be in 0..{n}, got {i}")
    return SetFamily(n, tuple(masks_of_popcount(n, i)))


def band(spec: BandSpec) -> SetFamily:
    members = []
    for i in range(spec.lo, spec.hi + 1):
        members.extend(masks_of_popcount(spec.n, i))
    return SetFamily(spec.n, tuple(members))


def low_levels(n: int, l: int) -> SetFamily:
    """All sets of size at most ``l - 1``."""
    check_ground(n)
    if not 1 <= l <= n:
        raise ValueError(f"l must be in 1..{n}, got {l}")
    return band(BandSpec(n, 0, l - 1))


def high_levels(n: int, l: int) -> SetFamily:
    """All sets of size at least ``n - l + 1``; the complement image of :func:`low_levels`."""
    check_ground(n)
    if not 1 <= l <= n:
        raise ValueError(f"l must be in 1..{n}, got {l}")
    return band(BandSpec(n, n - l + 1, n))


def midband_spec(n: int, k: int, lp: int) -> BandSpec:
    """The ``k - lp`` consecutive levels starting at floor((n - (k - lp)) / 2) + 1.

    Requires ``lp < k``.  When ``k - lp`` exceeds ``n + 1`` the band is
    clipped to all of 2^[n].
    """
    check_ground(n)
    if lp < 1 or k <= lp:
        raise ValueError(f"midband needs 1 <= lp < k, got k={k}, lp={lp}")
    width = k - lp
    lo = (n - width) // 2 + 1
    hi = lo + width - 1
    return BandSpec(n, max(lo, 0), min(hi, n))


def midband(n: int, k: int, lp: int) -> SetFamily:
    return band(midband_spec(n, k, lp))


def conjecture_rhs(n: int, k: int, lp: int) -> int:
    """Sum over i = 1..k-lp of C(n, floor((n - (k - lp))/2 + i)); 0 when k <= lp."""
    width = k - lp
    total = 0
    for i in range(1, width + 1):
        # floor((n - width)/2 + i) == floor((n - width)/2) + i for integer i
        j = (n - width) // 2 + i
        if 0 <= j <= n:
            total += comb(n, j)
    return total


def all_bands(n: int):
    for lo in range(n + 1):
        for hi in range(lo, n + 1):
            yield BandSpec(n, lo, hi)


def power_set(n: int) -> SetFamily:
    return SetFamily.of(n, range(full_mask(n) + 1))
