"""One-dimensional intervals and canonical interval sets.

All geometric reasoning in this package is symbolic over interval
endpoints.  Endpoint values come from parsed literals (64-bit-ish ints,
binary floats, or small category codes), never from accumulated
arithmetic, so exact comparison is safe.

Two endpoint disciplines exist:

* continuous ("real") intervals keep their open/closed flags;
* discrete ("integer") intervals are normalised to closed finite bounds,
  e.g. ``(0..5]`` becomes ``[1..5]`` and ``< 5`` becomes ``(-inf..4]``.

Sweep algorithms order endpoint events by value and, at equal values, by
a fixed tie rank: upper-open < lower-closed < upper-closed < lower-open.
That ordering makes closed-touching intervals count as intersecting
(an input of 1000 triggers both ``[0..1000]`` and ``[1000..2000]``)
while open-touching intervals stay disjoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

NEG_INF = float("-inf")
POS_INF = float("inf")

# Event tie ranks for sweeps; see module docstring.
UPPER_OPEN = 0
LOWER_CLOSED = 1
UPPER_CLOSED = 2
LOWER_OPEN = 3


def event_rank(is_lower: bool, closed: bool) -> int:
    """Tie rank of a bound event at equal endpoint values."""
    if is_lower:
        return LOWER_CLOSED if closed else LOWER_OPEN
    return UPPER_CLOSED if closed else UPPER_OPEN


@dataclass(frozen=True, slots=True)
class Interval1D:
    """A non-empty interval with independent open/closed bounds.

    Instances are only created through :func:`interval`, which rejects
    empty combinations and normalises discrete bounds, so code holding
    an ``Interval1D`` may assume it denotes at least one value.
    """

    lo: float
    lo_closed: bool
    hi: float
    hi_closed: bool

    def contains(self, x) -> bool:
        if x < self.lo or (x == self.lo and not self.lo_closed):
            return False
        if x > self.hi or (x == self.hi and not self.hi_closed):
            return False
        return True

    def intersect(self, other: "Interval1D") -> Optional["Interval1D"]:
        lo, lo_closed = self.lo, self.lo_closed
        if (other.lo, not other.lo_closed) > (lo, not lo_closed):
            lo, lo_closed = other.lo, other.lo_closed
        hi, hi_closed = self.hi, self.hi_closed
        if (other.hi, other.hi_closed) < (hi, hi_closed):
            hi, hi_closed = other.hi, other.hi_closed
        return interval(lo, lo_closed, hi, hi_closed)

    def is_point(self) -> bool:
        return self.lo == self.hi

    def as_tuple(self) -> tuple:
        return (self.lo, self.lo_closed, self.hi, self.hi_closed)


def interval(lo, lo_closed: bool, hi, hi_closed: bool,
             discrete: bool = False) -> Optional[Interval1D]:
    """Build an interval, or return None when the combination is empty.

    Infinite bounds are forced open.  With ``discrete=True`` finite open
    bounds are tightened to the nearest enclosed integer.
    """
    if lo == NEG_INF:
        lo_closed = False
    if hi == POS_INF:
        hi_closed = False
    if discrete:
        if lo != NEG_INF and not lo_closed:
            lo, lo_closed = lo + 1, True
        if hi != POS_INF and not hi_closed:
            hi, hi_closed = hi - 1, True
    if lo > hi:
        return None
    if lo == hi and not (lo_closed and hi_closed):
        return None
    return Interval1D(lo, lo_closed, hi, hi_closed)


def _mergeable(a: Interval1D, b: Interval1D, discrete: bool) -> bool:
    # a sorted before b by lower bound; True when a union b is one interval.
    if discrete:
        return b.lo <= a.hi + 1
    if b.lo < a.hi:
        return True
    if b.lo == a.hi:
        return a.hi_closed or b.lo_closed
    return False


def contiguous(a: Interval1D, b: Interval1D, discrete: bool) -> bool:
    """True when a and b are disjoint but their union is one interval.

    Discrete intervals are contiguous when ``a.hi + 1 == b.lo`` (or the
    mirror image); continuous ones when they meet at an equal endpoint
    with complementary openness, e.g. ``[0..2)`` followed by ``[2..5]``.
    """
    if a.lo > b.lo:
        a, b = b, a
    if discrete:
        return a.hi + 1 == b.lo
    return a.hi == b.lo and (a.hi_closed != b.lo_closed)


@dataclass(frozen=True)
class IntervalSet:
    """A canonical union of intervals: sorted, disjoint, non-contiguous.

    The ``discrete`` flag selects integer endpoint discipline for
    normalisation, contiguity, and complement.  Construction goes
    through :meth:`build`; structural equality of canonical sets then
    coincides with semantic equality.
    """

    members: tuple[Interval1D, ...] = ()
    discrete: bool = False

    @classmethod
    def build(cls, parts: Iterable[Optional[Interval1D]],
              discrete: bool = False) -> "IntervalSet":
        normal = []
        for p in parts:
            if p is None:
                continue
            p = interval(p.lo, p.lo_closed, p.hi, p.hi_closed, discrete)
            if p is not None:
                normal.append(p)
        normal.sort(key=lambda iv: (iv.lo, not iv.lo_closed, iv.hi, iv.hi_closed))
        merged: list[Interval1D] = []
        for iv in normal:
            if merged and _mergeable(merged[-1], iv, discrete):
                last = merged[-1]
                hi, hi_closed = last.hi, last.hi_closed
                if (iv.hi, iv.hi_closed) > (hi, hi_closed):
                    hi, hi_closed = iv.hi, iv.hi_closed
                merged[-1] = Interval1D(last.lo, last.lo_closed, hi, hi_closed)
            else:
                merged.append(iv)
        return cls(tuple(merged), discrete)

    @classmethod
    def full(cls, discrete: bool = False) -> "IntervalSet":
        return cls((Interval1D(NEG_INF, False, POS_INF, False),), discrete)

    @classmethod
    def empty(cls, discrete: bool = False) -> "IntervalSet":
        return cls((), discrete)

    @property
    def is_empty(self) -> bool:
        return not self.members

    def __iter__(self) -> Iterator[Interval1D]:
        return iter(self.members)

    def contains(self, x) -> bool:
        return any(iv.contains(x) for iv in self.members)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        self._check_peer(other)
        return IntervalSet.build(self.members + other.members, self.discrete)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        self._check_peer(other)
        out: list[Interval1D] = []
        i = j = 0
        a, b = self.members, other.members
        while i < len(a) and j < len(b):
            piece = a[i].intersect(b[j])
            if piece is not None:
                out.append(piece)
            # advance whichever interval ends first
            if (a[i].hi, a[i].hi_closed) < (b[j].hi, b[j].hi_closed):
                i += 1
            else:
                j += 1
        return IntervalSet.build(out, self.discrete)

    def complement(self) -> "IntervalSet":
        pieces: list[Optional[Interval1D]] = []
        lo, lo_closed = NEG_INF, False
        for iv in self.members:
            pieces.append(interval(lo, lo_closed, iv.lo, not iv.lo_closed,
                                   self.discrete))
            lo, lo_closed = iv.hi, not iv.hi_closed
        pieces.append(interval(lo, lo_closed, POS_INF, False, self.discrete))
        return IntervalSet.build(pieces, self.discrete)

    def hull(self) -> Optional[Interval1D]:
        """Smallest single interval covering the set, None when empty."""
        if not self.members:
            return None
        first, last = self.members[0], self.members[-1]
        return Interval1D(first.lo, first.lo_closed, last.hi, last.hi_closed)

    def _check_peer(self, other: "IntervalSet") -> None:
        if self.discrete != other.discrete:
            raise ValueError("cannot combine discrete and continuous sets")
