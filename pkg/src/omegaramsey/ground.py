"""Finite ground objects: universes, indexed families, and the largeness predicate.

A Family is a finite, bijectively indexed sequence of proper nonempty subsets
of a finite point universe.  A Subfamily selects some of those indices.  The
largeness notion used throughout the package is the depth-d cover test: every
point set of size at most d must lie inside some selected member.  Subfamilies
that pass the cover test and a minimum-size gate are called admissible; they
are the finite stand-in for infinite large subfamilies, and every search in
the package quantifies over them.

Members may never equal the whole universe, so a cover at depth M is
impossible by construction; the depth is required to stay strictly below the
universe size.  That restriction is the price of working at finite scale.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence


class EngineError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(EngineError):
    """Malformed value: bad indices, bad points, bad shapes."""


class ContractError(EngineError):
    """A documented precondition of an operation was violated."""


class DegenerateError(EngineError):
    """The input is too small or too empty for the operation to mean anything."""


class InternalCheckError(EngineError):
    """A self-verification that must never fail did fail; this is a bug."""


class ThreeVal(Enum):
    """Three-valued verdict.  UNKNOWN means a search budget ran out.

    Deliberately not coercible to bool so that UNKNOWN can never be silently
    treated as a definite answer.
    """

    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, flag: bool) -> "ThreeVal":
        return cls.TRUE if flag else cls.FALSE

    def __bool__(self) -> bool:
        raise TypeError("ThreeVal does not coerce to bool; compare against "
                        "ThreeVal.TRUE / FALSE / UNKNOWN explicitly")


TRUE = ThreeVal.TRUE
FALSE = ThreeVal.FALSE
UNKNOWN = ThreeVal.UNKNOWN

#: Hard cap on exhaustive subset enumerations taken in one gulp.  Above this
#: the budgeted streaming paths are used instead.
EXHAUSTIVE_CAP = 65536


def colex_key(t: Sequence[int]) -> tuple[int, ...]:
    """Sort key realizing colexicographic order on sorted index tuples."""
    return tuple(reversed(t))


def subsets_canonical(pool: Iterable[int], min_size: int = 0,
                      max_size: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """All subsets of pool in canonical order: size ascending, colex within size."""
    items = sorted(pool)
    hi = len(items) if max_size is None else min(max_size, len(items))
    for size in range(min_size, hi + 1):
        yield from sorted(itertools.combinations(items, size), key=colex_key)


def subsets_lazy(pool: Iterable[int], min_size: int = 0) -> Iterator[tuple[int, ...]]:
    """Size-ascending subset stream without the colex sort.

    Used by budgeted scans over pools too large to materialize a size layer;
    those scans are order-independent, so only laziness matters here.
    """
    items = sorted(pool)
    for size in range(min_size, len(items) + 1):
        yield from itertools.combinations(items, size)


@dataclass(frozen=True)
class Universe:
    """A finite point universe; points are 1..size."""

    size: int

    def __post_init__(self) -> None:
        if not isinstance(self.size, int) or self.size < 2:
            raise StructuralError(f"universe size must be an integer >= 2, got {self.size!r}")

    def points(self) -> range:
        return range(1, self.size + 1)


@dataclass(frozen=True)
class Family:
    """An indexed sequence of proper nonempty point sets.

    Indices are 1-based and fixed: they are labels, so duplicate point sets at
    distinct indices are allowed.
    """

    universe: Universe
    members: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        pts = set(self.universe.points())
        for i, m in enumerate(self.members, start=1):
            if not isinstance(m, frozenset):
                raise StructuralError(f"member {i} must be a frozenset")
            if not m:
                raise StructuralError(f"member {i} is empty")
            if not m <= pts:
                raise StructuralError(f"member {i} has points outside the universe")
            if m == pts:
                raise StructuralError(f"member {i} equals the whole universe")

    def __len__(self) -> int:
        return len(self.members)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(range(1, len(self.members) + 1))

    def member(self, index: int) -> frozenset[int]:
        if not 1 <= index <= len(self.members):
            raise StructuralError(f"index {index} out of range 1..{len(self.members)}")
        return self.members[index - 1]

    @classmethod
    def of(cls, universe_size: int, members: Iterable[Iterable[int]]) -> "Family":
        return cls(Universe(universe_size),
                   tuple(frozenset(m) for m in members))

    def to_json(self) -> dict:
        return {"universe": self.universe.size,
                "members": [sorted(m) for m in self.members]}

    @classmethod
    def from_json(cls, data: dict) -> "Family":
        if not isinstance(data, dict) or "universe" not in data or "members" not in data:
            raise StructuralError("family JSON needs 'universe' and 'members'")
        return cls.of(data["universe"], data["members"])


@dataclass(frozen=True)
class Subfamily:
    """A sorted set of indices into a Family."""

    family: Family
    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.family)
        last = 0
        for i in self.indices:
            if not isinstance(i, int) or not 1 <= i <= n:
                raise StructuralError(f"index {i!r} out of range 1..{n}")
            if i <= last:
                raise StructuralError("indices must be strictly increasing")
            last = i

    @classmethod
    def of(cls, family: Family, indices: Iterable[int]) -> "Subfamily":
        return cls(family, tuple(sorted(set(indices))))

    @classmethod
    def full(cls, family: Family) -> "Subfamily":
        return cls(family, family.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, index: int) -> bool:
        return index in set(self.indices)

    def members(self) -> tuple[frozenset[int], ...]:
        return tuple(self.family.member(i) for i in self.indices)

    def to_json(self) -> list[int]:
        return list(self.indices)

    @classmethod
    def from_json(cls, data: list, family: Family) -> "Subfamily":
        if not isinstance(data, list):
            raise StructuralError("subfamily JSON must be an index array")
        return cls.of(family, data)


@dataclass(frozen=True)
class LargenessParams:
    """Parameters of the largeness predicate and the search budgets.

    d is the cover depth, min_size the size gate for admissibility, and
    search_bound caps enumeration work before an operation gives up and
    answers UNKNOWN.
    """

    d: int
    min_size: int
    search_bound: int = 1_000_000

    def __post_init__(self) -> None:
        if self.d < 1:
            raise StructuralError("cover depth d must be >= 1")
        if self.min_size < 1:
            raise StructuralError("min_size must be >= 1")
        if self.search_bound < 1:
            raise StructuralError("search_bound must be >= 1")


@dataclass(frozen=True)
class CoverVerdict:
    """Outcome of a depth-d cover check.

    status TRUE means cover; FALSE carries a concrete uncovered point set as
    witness; UNKNOWN means the enumeration budget ran out first.
    """

    status: ThreeVal
    witness: Optional[frozenset[int]] = None


def _check_depth(family: Family, p: LargenessParams) -> None:
    if p.d >= family.universe.size:
        raise StructuralError(
            f"cover depth d={p.d} must be smaller than the universe size "
            f"{family.universe.size}")


def check_d_omega_cover(sub: Subfamily, p: LargenessParams) -> CoverVerdict:
    """Does every point set of size <= d lie inside some member of sub?

    Point sets are scanned in canonical order (size ascending, colex), so the
    witness of a failed check is deterministic.
    """
    fam = sub.family
    _check_depth(fam, p)
    members = sub.members()
    budget = p.search_bound
    for size in range(1, p.d + 1):
        for f_tuple in sorted(itertools.combinations(fam.universe.points(), size),
                              key=colex_key):
            budget -= 1
            if budget < 0:
                return CoverVerdict(UNKNOWN)
            f_set = frozenset(f_tuple)
            if not any(f_set <= m for m in members):
                return CoverVerdict(FALSE, f_set)
    return CoverVerdict(TRUE)


@lru_cache(maxsize=None)
def _admissible_cached(family: Family, indices: tuple[int, ...],
                       p: LargenessParams) -> ThreeVal:
    if len(indices) < p.min_size:
        return FALSE
    return check_d_omega_cover(Subfamily(family, indices), p).status


def admissible(sub: Subfamily, p: LargenessParams) -> ThreeVal:
    """Size gate plus depth-d cover, as a three-valued verdict."""
    _check_depth(sub.family, p)
    return _admissible_cached(sub.family, sub.indices, p)


def enumerate_admissible(B: Subfamily, p: LargenessParams,
                         limit: Optional[int] = None) -> Iterator[Subfamily]:
    """Admissible subsets of B in canonical order (size ascending, colex).

    Yields at most `limit` items; exhaustive when the total count fits.
    """
    if limit is not None and limit < 0:
        raise StructuralError("limit must be >= 0")
    emitted = 0
    for combo in subsets_canonical(B.indices, min_size=p.min_size):
        if limit is not None and emitted >= limit:
            return
        if _admissible_cached(B.family, combo, p) is TRUE:
            yield Subfamily(B.family, combo)
            emitted += 1


@lru_cache(maxsize=None)
def _admissible_subsets_asc(family: Family, indices: tuple[int, ...],
                            p: LargenessParams) -> tuple[tuple[tuple[int, ...], ...], bool]:
    """All admissible subsets of an index pool, ascending canonical order.

    Second component flags whether any subset had UNKNOWN admissibility.
    Only used when the pool is small enough to enumerate exhaustively.
    """
    out = []
    saw_unknown = False
    for combo in subsets_canonical(indices, min_size=p.min_size):
        verdict = _admissible_cached(family, combo, p)
        if verdict is TRUE:
            out.append(combo)
        elif verdict is UNKNOWN:
            saw_unknown = True
    return tuple(out), saw_unknown


def admissible_subsets(B: Subfamily, p: LargenessParams,
                       descending: bool = False) -> tuple[tuple[int, ...], ...]:
    """Cached exhaustive list of admissible subsets of B.

    Ascending canonical order by default; descending flips the size order
    while keeping colex ties, which is the order used by witness searches.
    Callers must keep the pool small (2**len(B) <= EXHAUSTIVE_CAP).
    """
    if 2 ** len(B.indices) > EXHAUSTIVE_CAP:
        raise EngineError(f"pool of {len(B.indices)} indices is too large for "
                          f"exhaustive admissible-subset listing")
    subs, _ = _admissible_subsets_asc(B.family, B.indices, p)
    if descending:
        return tuple(sorted(subs, key=lambda t: (-len(t), colex_key(t))))
    return subs


def admissible_subsets_unknown_flag(B: Subfamily, p: LargenessParams) -> bool:
    """True when some subset of B had UNKNOWN admissibility in the cached scan."""
    _, flag = _admissible_subsets_asc(B.family, B.indices, p)
    return flag
