"""Brute-force reference evaluators for everything the engine searches for.

Each function here is a direct transcription of a definition with every
quantifier expanded, no pruning and no shared search code with the engine
paths it validates.  Sizes are hard-guarded: past the guard the oracle
refuses outright rather than approximating, so an oracle answer is always
exact.  Engine-versus-oracle disagreements are resolved in the oracle's
favor during triage.
"""

from __future__ import annotations

import itertools
from typing import Optional, Sequence

from .ground import EngineError, Family, LargenessParams, Subfamily
from .ellentuck import Region, as_stem

SIZE_LIMIT = 12


class OracleSizeError(EngineError):
    """The instance is too large for exact brute force; refuse, never guess."""


def _guard(count: int, what: str) -> None:
    if count > SIZE_LIMIT:
        raise OracleSizeError(f"{what} of size {count} exceeds the oracle "
                              f"limit of {SIZE_LIMIT}")


_ADM_MEMO: dict = {}


def _is_admissible(family: Family, indices: tuple[int, ...],
                   p: LargenessParams) -> bool:
    """Size gate plus cover check, written out point set by point set."""
    key = (family, indices, p.d, p.min_size)
    hit = _ADM_MEMO.get(key)
    if hit is not None:
        return hit
    ok = len(indices) >= p.min_size
    if ok:
        members = [family.member(i) for i in indices]
        for size in range(1, p.d + 1):
            for points in itertools.combinations(family.universe.points(), size):
                if not any(set(points) <= m for m in members):
                    ok = False
                    break
            if not ok:
                break
    _ADM_MEMO[key] = ok
    return ok


def _subsets(pool: Sequence[int]):
    pool = sorted(pool)
    for size in range(len(pool) + 1):
        yield from itertools.combinations(pool, size)


def brute_accepts(B: Subfamily, s, R: Region, p: LargenessParams) -> bool:
    """Every admissible D with s <= D <= s u B and D \\ s above s lies in R."""
    _guard(len(B.indices), "reservoir")
    s = as_stem(s)
    fam = B.family
    for extra in _subsets(B.indices):
        d_indices = tuple(sorted(set(s) | set(extra)))
        if set(extra) - set(s) and s and min(set(extra) - set(s)) <= max(s):
            continue
        if not _is_admissible(fam, d_indices, p):
            continue
        if not R.contains(Subfamily(fam, d_indices)):
            return False
    return True


def brute_rejects(B: Subfamily, s, R: Region, p: LargenessParams) -> bool:
    """No admissible subset of B accepts s."""
    _guard(len(B.indices), "reservoir")
    s = as_stem(s)
    fam = B.family
    for combo in _subsets(B.indices):
        if not _is_admissible(fam, combo, p):
            continue
        if brute_accepts(Subfamily(fam, combo), s, R, p):
            return False
    return True


def brute_cr(R: Region, s, B: Subfamily,
             p: LargenessParams) -> Optional[tuple[str, Subfamily]]:
    """First admissible C <= B with [s, C] inside R or disjoint from R.

    Returns ("inside", C) or ("outside", C), or None when no admissible
    subset of B is decided either way.
    """
    _guard(len(B.indices), "reservoir")
    s = as_stem(s)
    fam = B.family
    for combo in _subsets(B.indices):
        if not _is_admissible(fam, combo, p):
            continue
        inside = True
        outside = True
        for extra in _subsets(combo):
            d_indices = tuple(sorted(set(s) | set(extra)))
            if set(extra) - set(s) and s and min(set(extra) - set(s)) <= max(s):
                continue
            if not _is_admissible(fam, d_indices, p):
                continue
            if R.contains(Subfamily(fam, d_indices)):
                outside = False
            else:
                inside = False
            if not inside and not outside:
                break
        if inside:
            return ("inside", Subfamily(fam, combo))
        if outside:
            return ("outside", Subfamily(fam, combo))
    return None


def brute_homogeneous(family: Family, f, r: int, k: int,
                      min_size: int) -> list[tuple[tuple[int, ...], int]]:
    """All subfamilies of size >= min_size on which f is constant.

    Powerset filter; a set qualifies when it has at least one r-subset and
    all of them share one color.
    """
    _guard(len(family), "family")
    if f.arity != r or f.colors != k:
        raise EngineError("coloring shape does not match the requested check")
    out: list[tuple[tuple[int, ...], int]] = []
    for combo in _subsets(family.indices):
        if len(combo) < max(min_size, 1):
            continue
        tuples = list(itertools.combinations(combo, r))
        if not tuples:
            continue
        colors = {f.of(t) for t in tuples}
        if len(colors) == 1:
            out.append((combo, colors.pop()))
    return out


def brute_nw(T, parts: Sequence, p: LargenessParams
             ) -> list[tuple[tuple[int, ...], int]]:
    """All (B, part index) with B admissible and every stem of T in B in
    that single part."""
    family = T.family
    _guard(len(family), "family")
    normalized = [frozenset(as_stem(s) for s in part) for part in parts]
    out: list[tuple[tuple[int, ...], int]] = []
    for combo in _subsets(family.indices):
        if not _is_admissible(family, combo, p):
            continue
        inside = [s for s in T.stems if set(s) <= set(combo)]
        for i, part in enumerate(normalized):
            if all(s in part for s in inside):
                out.append((combo, i))
    return out
