"""Thin and dense families of finite index sets, and their homogenization.

A family of stems is thin when no stem is an initial segment of another in
the fixed index order; it is dense when every admissible subfamily contains
some stem as a subset.  fg_witness finds an admissible set all of whose
admissible subsets start with a stem of a dense family; nw_homogenize drives
a partition of a thin family into a single part over some admissible set.
Both searches follow the constructive argument first and re-verify, with an
exhaustive scan as the safety net.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .ground import (
    EXHAUSTIVE_CAP,
    FALSE,
    TRUE,
    UNKNOWN,
    ContractError,
    Family,
    LargenessParams,
    StructuralError,
    Subfamily,
    ThreeVal,
    admissible_subsets,
)
from .ellentuck import Stem, as_stem


@dataclass(frozen=True)
class FiniteSetFamily:
    """A set of stems over a family's index range."""

    family: Family
    stems: frozenset[Stem]

    def __post_init__(self) -> None:
        n = len(self.family)
        for stem in self.stems:
            if stem != as_stem(stem):
                raise StructuralError(f"stem {stem} is not sorted and duplicate free")
            if stem and stem[-1] > n:
                raise StructuralError(f"stem {stem} exceeds the index range 1..{n}")

    @classmethod
    def of(cls, family: Family, stems) -> "FiniteSetFamily":
        return cls(family, frozenset(as_stem(s) for s in stems))

    def to_json(self) -> dict:
        return {"stems": sorted((list(s) for s in self.stems))}

    @classmethod
    def from_json(cls, data: dict, family: Family) -> "FiniteSetFamily":
        if not isinstance(data, dict) or "stems" not in data:
            raise StructuralError("finite set family JSON needs 'stems'")
        return cls.of(family, (tuple(s) for s in data["stems"]))


def is_initial_segment(s: Stem, t: Stem) -> bool:
    """Is s the first len(s) entries of t in index order?  Equality counts."""
    return len(s) <= len(t) and t[:len(s)] == s


def is_thin(T: FiniteSetFamily) -> bool:
    """No stem is an initial segment of a different stem."""
    stems = sorted(T.stems)
    for s, t in itertools.permutations(stems, 2):
        if is_initial_segment(s, t):
            return False
    return True


def partition_of(T: FiniteSetFamily, parts: Sequence) -> tuple[frozenset[Stem], ...]:
    """Validate and normalize a partition of T's stems into disjoint parts."""
    normalized = [frozenset(as_stem(s) for s in part) for part in parts]
    union: set[Stem] = set()
    total = 0
    for part in normalized:
        union.update(part)
        total += len(part)
    if union != set(T.stems) or total != len(T.stems):
        raise StructuralError("parts must be disjoint and cover every stem")
    return tuple(normalized)


@lru_cache(maxsize=None)
def _full_admissible(family: Family, p: LargenessParams) -> tuple[tuple[int, ...], ...]:
    return admissible_subsets(Subfamily.full(family), p)


def _has_stem_inside(stems: frozenset[Stem], b: tuple[int, ...]) -> bool:
    b_set = set(b)
    return any(set(s) <= b_set for s in stems)


def is_dense(S: FiniteSetFamily, p: LargenessParams) -> ThreeVal:
    """Does every admissible subfamily contain some stem of S as a subset?"""
    if 2 ** len(S.family) > min(p.search_bound, EXHAUSTIVE_CAP):
        return UNKNOWN
    for b in _full_admissible(S.family, p):
        if not _has_stem_inside(S.stems, b):
            return FALSE
    return TRUE


def _density_counterexample(S: FiniteSetFamily, p: LargenessParams,
                            domain: Optional[tuple[int, ...]]
                            ) -> Optional[tuple[int, ...]]:
    """First admissible set (within domain) containing no stem of S."""
    dom = None if domain is None else set(domain)
    for b in _full_admissible(S.family, p):
        if dom is not None and not set(b) <= dom:
            continue
        if not _has_stem_inside(S.stems, b):
            return b
    return None


@dataclass(frozen=True)
class FgOutcome:
    kind: str                     # "witness" | "not_found"
    witness: Optional[Subfamily]


def _has_initial_segment_in(stems: frozenset[Stem], c: tuple[int, ...]) -> bool:
    return any(c[:j] in stems for j in range(len(c) + 1))


def _fg_search(S: FiniteSetFamily, p: LargenessParams,
               domain: Optional[tuple[int, ...]]) -> Optional[tuple[int, ...]]:
    fam = S.family
    all_adm = _full_admissible(fam, p)
    starts = {c: _has_initial_segment_in(S.stems, c) for c in all_adm}
    dom = None if domain is None else set(domain)
    for b in all_adm:
        if dom is not None and not set(b) <= dom:
            continue
        b_set = set(b)
        if all(starts[c] for c in all_adm if set(c) <= b_set):
            return b
    return None


def fg_witness(S: FiniteSetFamily, p: LargenessParams) -> FgOutcome:
    """An admissible B whose every admissible subset starts with a stem of S.

    Requires S dense; candidates are scanned in canonical order and the
    winner is verified by construction of the scan.
    """
    if is_dense(S, p) is not TRUE:
        raise ContractError("fg_witness needs a dense stem family")
    got = _fg_search(S, p, None)
    if got is None:
        return FgOutcome("not_found", None)
    return FgOutcome("witness", Subfamily(S.family, got))


@dataclass(frozen=True)
class NwOutcome:
    kind: str                     # "homogeneous" | "not_found"
    witness: Optional[Subfamily]
    part: Optional[int]           # 0-based part index


def _stems_inside(T: FiniteSetFamily, b: tuple[int, ...]) -> list[Stem]:
    b_set = set(b)
    return [s for s in T.stems if set(s) <= b_set]


def nw_homogenize(T: FiniteSetFamily, parts: Sequence,
                  p: LargenessParams) -> NwOutcome:
    """Drive a partition of a thin family into one part on an admissible set.

    Follows the two-part argument, peeling one part at a time: a part that is
    not dense inside the current domain is avoided outright via the density
    counterexample; a dense part is pinned down through fg_witness and the
    thinness of T.  The output is re-verified, with an exhaustive scan as
    fallback.
    """
    if not is_thin(T):
        raise ContractError("nw_homogenize needs a thin family")
    normalized = partition_of(T, parts)
    fam = T.family

    domain: Optional[tuple[int, ...]] = None
    for part_index in range(len(normalized)):
        part = normalized[part_index]
        if part_index == len(normalized) - 1:
            got = _first_admissible_in(fam, p, domain)
            if got is not None and _check_nw(T, part, got):
                return NwOutcome("homogeneous", Subfamily(fam, got), part_index)
            break
        if not part:
            continue
        sub_family = FiniteSetFamily(fam, part)
        counter = _density_counterexample(sub_family, p, domain)
        if counter is not None:
            # no stem of this part fits inside `counter`: peel the part off
            domain = counter
            continue
        witness = _fg_search(sub_family, p, domain)
        if witness is not None and _check_nw(T, part, witness):
            return NwOutcome("homogeneous", Subfamily(fam, witness), part_index)
        break

    for b in _full_admissible(fam, p):
        for i, part in enumerate(normalized):
            if _check_nw(T, part, b):
                return NwOutcome("homogeneous", Subfamily(fam, b), i)
    return NwOutcome("not_found", None, None)


def _check_nw(T: FiniteSetFamily, part: frozenset[Stem],
              b: tuple[int, ...]) -> bool:
    return all(s in part for s in _stems_inside(T, b))


def _first_admissible_in(family: Family, p: LargenessParams,
                         domain: Optional[tuple[int, ...]]
                         ) -> Optional[tuple[int, ...]]:
    dom = None if domain is None else set(domain)
    for b in _full_admissible(family, p):
        if dom is None or set(b) <= dom:
            return b
    return None


def ramsey_via_nw(family: Family, f, p: LargenessParams
                  ) -> Optional[tuple[Subfamily, int]]:
    """Solve a partition instance by homogenizing the thin family of n-sets.

    The n-element index sets, partitioned by color, feed nw_homogenize; the
    returned part index is the color.
    """
    n, k = f.arity, f.colors
    stems = [tuple(c) for c in itertools.combinations(family.indices, n)]
    T = FiniteSetFamily.of(family, stems)
    parts = [[s for s in stems if f.of(s) == color] for color in range(k)]
    got = nw_homogenize(T, parts, p)
    if got.kind != "homogeneous":
        return None
    for combo in itertools.combinations(got.witness.indices, n):
        if f.of(combo) != got.part:
            raise ContractError("homogenization returned a miscolored set")
    return got.witness, got.part
