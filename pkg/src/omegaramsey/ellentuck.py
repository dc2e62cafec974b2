"""Ellentuck basic sets, the accept/reject/decide calculus, and region handling.

A basic set [s, B] consists of every subfamily D with stem s <= D <= s u B
whose non-stem part lies entirely above the stem in the fixed enumeration.
Regions are sets of admissible subfamilies given explicitly, as finite unions
of basics, or as predicates; they are closed under union, intersection and
complement so that closure laws can be tested on composed values directly.

A reservoir B accepts a stem s against a region R when every admissible
member of [s, B] lies in R; it rejects s when no admissible subset of B
accepts s.  The decide search realizes the accept-or-reject dichotomy, and
cr_witness looks for a sub-reservoir on which a region is decided one way or
the other (the completely Ramsey property at finite scale).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Optional

from .ground import (
    EXHAUSTIVE_CAP,
    FALSE,
    TRUE,
    UNKNOWN,
    ContractError,
    DegenerateError,
    Family,
    LargenessParams,
    StructuralError,
    Subfamily,
    ThreeVal,
    _admissible_cached,
    admissible,
    admissible_subsets,
    admissible_subsets_unknown_flag,
    subsets_canonical,
    subsets_lazy,
)

Stem = tuple[int, ...]


def as_stem(indices: Iterable[int]) -> Stem:
    """Normalize an index iterable into a sorted, duplicate-free stem."""
    out = tuple(sorted(set(indices)))
    for i in out:
        if not isinstance(i, int) or i < 1:
            raise StructuralError(f"stem entry {i!r} is not a positive index")
    return out


def precedes(s: Iterable[int], B) -> bool:
    """s < B: the stem is empty or every index of s is below every index of B."""
    s_t = tuple(s)
    b_t = B.indices if isinstance(B, Subfamily) else tuple(B)
    if not s_t or not b_t:
        return True
    return max(s_t) < min(b_t)


def restrict(B: Subfamily, s: Iterable[int]) -> Subfamily:
    """B past s: the members of B whose index exceeds every index in s."""
    s_t = tuple(s)
    if not s_t:
        return B
    cut = max(s_t)
    return Subfamily(B.family, tuple(i for i in B.indices if i > cut))


@dataclass(frozen=True)
class EllentuckBasic:
    """A basic set [s, B]: stem plus reservoir, with s < B."""

    stem: Stem
    reservoir: Subfamily

    def __post_init__(self) -> None:
        if self.stem != as_stem(self.stem):
            raise StructuralError("basic stem must be sorted and duplicate free")
        if not precedes(self.stem, self.reservoir):
            raise ContractError("basic needs stem < reservoir")

    def to_json(self) -> dict:
        return {"stem": list(self.stem), "reservoir": self.reservoir.to_json()}

    @classmethod
    def from_json(cls, data: dict, family: Family) -> "EllentuckBasic":
        return cls(as_stem(data["stem"]),
                   Subfamily.from_json(data["reservoir"], family))


def basic_contains(b: EllentuckBasic, D: Subfamily) -> bool:
    """Is D a member of [s, B]?  Needs s <= D <= s u B with D \\ s above s."""
    s = set(b.stem)
    d = set(D.indices)
    if not s <= d:
        return False
    if not d <= s | set(b.reservoir.indices):
        return False
    return precedes(b.stem, tuple(d - s))


class Region:
    """A set of admissible subfamilies with a total membership test."""

    def contains(self, D: Subfamily) -> bool:
        raise NotImplementedError

    def union(self, other: "Region") -> "Region":
        return UnionRegion((self, other))

    def intersect(self, other: "Region") -> "Region":
        return IntersectionRegion((self, other))

    def complement(self) -> "Region":
        return ComplementRegion(self)


@dataclass(frozen=True)
class ExplicitRegion(Region):
    """A finite list of subfamilies, held as index tuples."""

    member_sets: frozenset[tuple[int, ...]]

    @classmethod
    def of(cls, subfamilies: Iterable[Subfamily]) -> "ExplicitRegion":
        return cls(frozenset(sf.indices for sf in subfamilies))

    @classmethod
    def empty(cls) -> "ExplicitRegion":
        return cls(frozenset())

    def contains(self, D: Subfamily) -> bool:
        return D.indices in self.member_sets


@dataclass(frozen=True)
class BasicUnionRegion(Region):
    """A finite union of Ellentuck basics; the open sets of the engine."""

    basics: tuple[EllentuckBasic, ...]

    def contains(self, D: Subfamily) -> bool:
        return any(basic_contains(b, D) for b in self.basics)


@dataclass(frozen=True, eq=False)
class PredicateRegion(Region):
    """A region given by an effect-free, total predicate on subfamilies."""

    fn: Callable[[Subfamily], bool]
    label: str = "predicate"

    def contains(self, D: Subfamily) -> bool:
        return bool(self.fn(D))


@dataclass(frozen=True)
class UnionRegion(Region):
    parts: tuple[Region, ...]

    def contains(self, D: Subfamily) -> bool:
        return any(r.contains(D) for r in self.parts)


@dataclass(frozen=True)
class IntersectionRegion(Region):
    parts: tuple[Region, ...]

    def contains(self, D: Subfamily) -> bool:
        return all(r.contains(D) for r in self.parts)


@dataclass(frozen=True)
class ComplementRegion(Region):
    """Complement relative to the admissible subfamilies (the ambient space)."""

    inner: Region

    def contains(self, D: Subfamily) -> bool:
        return not self.inner.contains(D)


@dataclass(frozen=True)
class MeagerPresentation:
    """An increasing finite ladder of regions, each intended nowhere dense."""

    levels: tuple[Region, ...]

    def __post_init__(self) -> None:
        if not self.levels:
            raise StructuralError("a meager presentation needs at least one level")

    def level(self, k: int) -> Region:
        """1-based level access, clamped at the top (the ladder is increasing)."""
        return self.levels[min(k, len(self.levels)) - 1]


def region_to_json(region: Region) -> dict:
    if isinstance(region, ExplicitRegion):
        return {"type": "explicit",
                "sets": sorted((list(t) for t in region.member_sets))}
    if isinstance(region, BasicUnionRegion):
        return {"type": "basicUnion",
                "basics": [b.to_json() for b in region.basics]}
    if isinstance(region, UnionRegion):
        return {"type": "union", "parts": [region_to_json(r) for r in region.parts]}
    if isinstance(region, IntersectionRegion):
        return {"type": "intersection",
                "parts": [region_to_json(r) for r in region.parts]}
    if isinstance(region, ComplementRegion):
        return {"type": "complement", "inner": region_to_json(region.inner)}
    raise StructuralError(f"region of type {type(region).__name__} is not serializable")


def region_from_json(data: dict, family: Family) -> Region:
    if not isinstance(data, dict) or "type" not in data:
        raise StructuralError("region JSON needs a 'type' tag")
    kind = data["type"]
    if kind == "explicit":
        return ExplicitRegion(frozenset(
            Subfamily.of(family, s).indices for s in data["sets"]))
    if kind == "basicUnion":
        return BasicUnionRegion(tuple(
            EllentuckBasic.from_json(b, family) for b in data["basics"]))
    if kind == "union":
        return UnionRegion(tuple(region_from_json(r, family) for r in data["parts"]))
    if kind == "intersection":
        return IntersectionRegion(tuple(
            region_from_json(r, family) for r in data["parts"]))
    if kind == "complement":
        return ComplementRegion(region_from_json(data["inner"], family))
    raise StructuralError(f"unknown region type {kind!r}")


# --- accept / reject / decide ------------------------------------------------

@dataclass(frozen=True)
class DecideOutcome:
    """kind is 'accepts', 'rejects' or 'unknown'; witness carries the set."""

    kind: str
    witness: Optional[Subfamily]


@dataclass(frozen=True)
class CrOutcome:
    """kind is 'inside', 'outside' or 'not_found'."""

    kind: str
    witness: Optional[Subfamily]


@dataclass(frozen=True)
class NwdOutcome:
    """kind is 'witness' or 'not_found'."""

    kind: str
    witness: Optional[Subfamily]


@dataclass(frozen=True)
class StrongRejectResult:
    """The element-wise rejection filter, plus whether it stayed admissible."""

    subfamily: Subfamily
    admissible: ThreeVal


def _require_precedes(s: Stem, B: Subfamily) -> None:
    if not precedes(s, B):
        raise ContractError(f"stem {s} does not precede reservoir {B.indices}")


@lru_cache(maxsize=None)
def _basic_content(family: Family, stem: Stem, reservoir: tuple[int, ...],
                   p: LargenessParams) -> tuple[tuple[Subfamily, ...], bool]:
    """The admissible members of [stem, reservoir], ascending canonical order.

    Second component flags UNKNOWN admissibility somewhere in the block.
    """
    out = []
    saw_unknown = False
    for extra in subsets_canonical(reservoir):
        d_indices = tuple(sorted(set(stem) | set(extra)))
        verdict = _admissible_cached(family, d_indices, p)
        if verdict is TRUE:
            out.append(Subfamily(family, d_indices))
        elif verdict is UNKNOWN:
            saw_unknown = True
    return tuple(out), saw_unknown


def basic_content(b: EllentuckBasic, p: LargenessParams) -> tuple[Subfamily, ...]:
    """Admissible members of a basic, for callers that want the list itself."""
    content, _ = _basic_content(b.reservoir.family, b.stem, b.reservoir.indices, p)
    return content


def accepts(B: Subfamily, s: Stem, R: Region, p: LargenessParams) -> ThreeVal:
    """Does every admissible member of [s, B] lie in R?"""
    s = as_stem(s)
    _require_precedes(s, B)
    if 2 ** len(B.indices) <= min(p.search_bound, EXHAUSTIVE_CAP):
        content, saw_unknown = _basic_content(B.family, s, B.indices, p)
        for D in content:
            if not R.contains(D):
                return FALSE
        return UNKNOWN if saw_unknown else TRUE
    budget = p.search_bound
    saw_unknown = False
    for extra in subsets_lazy(B.indices):
        budget -= 1
        if budget < 0:
            return UNKNOWN
        d_indices = tuple(sorted(set(s) | set(extra)))
        verdict = _admissible_cached(B.family, d_indices, p)
        if verdict is UNKNOWN:
            saw_unknown = True
        elif verdict is TRUE and not R.contains(Subfamily(B.family, d_indices)):
            return FALSE
    return UNKNOWN if saw_unknown else TRUE


_REJECTS_CACHE: dict = {}


def rejects(B: Subfamily, s: Stem, R: Region, p: LargenessParams) -> ThreeVal:
    """Does no admissible subset of B accept s?"""
    s = as_stem(s)
    _require_precedes(s, B)
    key = (B.family, B.indices, s, R, p)
    cached = _REJECTS_CACHE.get(key)
    if cached is not None:
        return cached
    if 2 ** len(B.indices) <= min(p.search_bound, EXHAUSTIVE_CAP):
        saw_unknown = admissible_subsets_unknown_flag(B, p)
        for c_indices in admissible_subsets(B, p):
            a = accepts(Subfamily(B.family, c_indices), s, R, p)
            if a is TRUE:
                _REJECTS_CACHE[key] = FALSE
                return FALSE
            if a is UNKNOWN:
                saw_unknown = True
        out = UNKNOWN if saw_unknown else TRUE
        _REJECTS_CACHE[key] = out
        return out
    budget = p.search_bound
    saw_unknown = False
    for combo in subsets_lazy(B.indices, min_size=p.min_size):
        budget -= 1
        if budget < 0:
            return UNKNOWN
        verdict = _admissible_cached(B.family, combo, p)
        if verdict is UNKNOWN:
            saw_unknown = True
            continue
        if verdict is FALSE:
            continue
        a = accepts(Subfamily(B.family, combo), s, R, p)
        if a is TRUE:
            return FALSE
        if a is UNKNOWN:
            saw_unknown = True
    return UNKNOWN if saw_unknown else TRUE


_DECIDE_CACHE: dict = {}


def decide(B: Subfamily, s: Stem, R: Region, p: LargenessParams) -> DecideOutcome:
    """Find an admissible C <= B accepting s, else report that B rejects s.

    Candidates are scanned largest first (size descending, colex ties), so the
    full reservoir is tried before any shrinking.  Raises DegenerateError when
    B has no admissible subset at all.
    """
    s = as_stem(s)
    _require_precedes(s, B)
    key = (B.family, B.indices, s, R, p)
    cached = _DECIDE_CACHE.get(key)
    if cached is not None:
        return cached
    candidates = admissible_subsets(B, p, descending=True)
    saw_unknown = admissible_subsets_unknown_flag(B, p)
    if not candidates:
        if saw_unknown:
            return DecideOutcome("unknown", None)
        raise DegenerateError("reservoir has no admissible subset to decide with")
    out = None
    for c_indices in candidates:
        a = accepts(Subfamily(B.family, c_indices), s, R, p)
        if a is TRUE:
            out = DecideOutcome("accepts", Subfamily(B.family, c_indices))
            break
        if a is UNKNOWN:
            saw_unknown = True
    if out is None:
        out = DecideOutcome("unknown", None) if saw_unknown else DecideOutcome("rejects", B)
    if len(_DECIDE_CACHE) > 400_000:
        _DECIDE_CACHE.clear()
    _DECIDE_CACHE[key] = out
    return out


def strong_reject_set(t: Stem, B: Subfamily, R: Region,
                      p: LargenessParams) -> StrongRejectResult:
    """The elements u of B whose tail past t u {u} still rejects t u {u}.

    Requires that B past t rejects t.  The result is the candidate pool for
    the rejection-propagating strategy; whether it stayed admissible is
    reported rather than assumed, since finite truncation can break it.
    """
    t = as_stem(t)
    if rejects(restrict(B, t), t, R, p) is not TRUE:
        raise ContractError("strong_reject_set needs `B past t rejects t` to hold")
    kept = []
    for u in B.indices:
        stem_u = as_stem(t + (u,))
        if rejects(restrict(B, stem_u), stem_u, R, p) is TRUE:
            kept.append(u)
    sub = Subfamily(B.family, tuple(kept))
    return StrongRejectResult(sub, admissible(sub, p))


def cr_witness(R: Region, s: Stem, B: Subfamily, p: LargenessParams,
               innings: int = 4, subset_cap: int = 3,
               route: str = "auto") -> CrOutcome:
    """Find admissible C <= B with [s, C] inside R or disjoint from R.

    route 'auto' tries the constructive path first (decide the finite subsets
    along a play, then propagate rejection) and falls back to the exhaustive
    scan; 'exhaustive' skips straight to the scan.  Success is the same either
    way, the routes differ in which witness comes back first.  Every witness
    is re-verified before being returned.
    """
    s = as_stem(s)
    _require_precedes(s, B)
    if route not in ("auto", "exhaustive"):
        raise StructuralError(f"unknown cr_witness route {route!r}")

    # B itself settles the trivial cases and is the best witness when it works
    if admissible(B, p) is TRUE:
        content, saw_unknown = _basic_content(B.family, s, B.indices, p)
        if not saw_unknown:
            flags = [R.contains(D) for D in content]
            if all(flags):
                return CrOutcome("inside", B)
            if not any(flags):
                return CrOutcome("outside", B)

    if route == "auto" and len(s) <= subset_cap:
        got = _cr_constructive(R, s, B, p, innings, subset_cap)
        if got is not None:
            return got

    for c_indices in admissible_subsets(B, p, descending=True):
        C = Subfamily(B.family, c_indices)
        content, saw_unknown = _basic_content(B.family, s, c_indices, p)
        if saw_unknown:
            continue
        flags = [R.contains(D) for D in content]
        if all(flags):
            return CrOutcome("inside", C)
        if not any(flags):
            return CrOutcome("outside", C)
    return CrOutcome("not_found", None)


def _cr_constructive(R: Region, s: Stem, B: Subfamily, p: LargenessParams,
                     innings: int, subset_cap: int) -> Optional[CrOutcome]:
    from . import games  # local import; games builds on this module

    # the refinement play consumes picks from the decided base, so the base
    # play gets extra innings and the refinement only as many as largeness
    # needs
    base_innings = max(innings, p.min_size + 3)
    refine_innings = max(2, p.min_size)
    try:
        outcome = games.decide_all_finite(s, B, R, base_innings, p,
                                          subset_cap=subset_cap)
    except (ContractError, DegenerateError, games.StrategyFault):
        return None
    if not isinstance(outcome, games.DecidedAll):
        return None
    picks = outcome.picks
    verdict = dict(outcome.table).get(s)
    if verdict == "accepts":
        if accepts(picks, s, R, p) is TRUE:
            return CrOutcome("inside", picks)
        return None
    if verdict != "rejects":
        return None
    try:
        strategy = games.RejectionOne(s, picks, R, p, subset_cap=subset_cap)
        transcript = games.play(strategy, games.GreedyTwo(p), refine_innings, p)
    except (ContractError, games.StrategyFault):
        return None
    D = Subfamily(B.family, transcript.picks)
    if admissible(D, p) is not TRUE:
        return None
    if accepts(D, s, ComplementRegion(R), p) is TRUE:
        return CrOutcome("outside", D)
    return None


class _TooLargeForBasics(Exception):
    """Internal: the family is too big to enumerate every basic."""


@lru_cache(maxsize=None)
def _all_basics_with_content(family: Family, p: LargenessParams
                             ) -> tuple[tuple[Stem, tuple[int, ...], frozenset], ...]:
    """Every basic with an admissible reservoir and nonempty admissible content.

    Reservoirs are required admissible: they stand in for the infinite large
    reservoirs of the idealized setting, and keeping them large is what stops
    single-point basics from acting as atoms.  Entries are (stem, reservoir,
    content keyset) in canonical order over stems, then reservoirs.
    """
    n = len(family)
    if 2 ** n > 4096:
        raise _TooLargeForBasics(n)
    out = []
    for stem in subsets_canonical(range(1, n + 1)):
        tail = tuple(i for i in range(1, n + 1) if not stem or i > max(stem))
        for reservoir in subsets_canonical(tail, min_size=p.min_size):
            if _admissible_cached(family, reservoir, p) is not TRUE:
                continue
            content, _ = _basic_content(family, stem, reservoir, p)
            if content:
                out.append((stem, reservoir,
                            frozenset(D.indices for D in content)))
    return tuple(out)


def is_nowhere_dense(R: Region, family: Family, p: LargenessParams) -> ThreeVal:
    """Can every nonempty basic be shrunk to a nonempty sub-basic missing R?

    Quantifies over basics with admissible reservoirs and nonempty admissible
    content; sub-basic means containment of the admissible member sets.
    Bounded by the search budget.
    """
    if 3 ** len(family) > p.search_bound:
        return UNKNOWN
    try:
        basics = _all_basics_with_content(family, p)
    except _TooLargeForBasics:
        return UNKNOWN
    free = [keys for (_, _, keys) in basics
            if all(not R.contains(Subfamily(family, d)) for d in keys)]
    for _, _, keys in basics:
        if not any(v <= keys for v in free):
            return FALSE
    return TRUE


def nwd_witness(R: Region, s: Stem, B: Subfamily, p: LargenessParams) -> NwdOutcome:
    """Find admissible C <= B with [s, C] disjoint from a nowhere dense R.

    The nowhere-density of R is checked first; a definite failure is a
    contract violation.  Candidates are scanned largest first.
    """
    s = as_stem(s)
    _require_precedes(s, B)
    nd = is_nowhere_dense(R, B.family, p)
    if nd is FALSE:
        raise ContractError("nwd_witness needs a nowhere dense region")
    for c_indices in admissible_subsets(B, p, descending=True):
        content, saw_unknown = _basic_content(B.family, s, c_indices, p)
        if saw_unknown:
            continue
        if all(not R.contains(D) for D in content):
            return NwdOutcome("witness", Subfamily(B.family, c_indices))
    return NwdOutcome("not_found", None)


def baire_region(open_part: BasicUnionRegion,
                 meager: MeagerPresentation) -> Region:
    """Symmetric difference of an open region and a meager ladder's union.

    This is the only Baire-style shape the engine represents: open sets are
    finite unions of basics, meager sets come as explicit ladders, and
    everything else has to be composed from these.
    """
    m = UnionRegion(meager.levels)
    return UnionRegion((
        IntersectionRegion((open_part, ComplementRegion(m))),
        IntersectionRegion((m, ComplementRegion(open_part))),
    ))


def nwd_meager_report(pres: MeagerPresentation, family: Family,
                      p: LargenessParams) -> dict:
    """Compare levelwise nowhere-density with nowhere-density of the union.

    At finite scale a union of nowhere dense levels need not be nowhere
    dense, so the two checks are exposed side by side and any disagreement
    is flagged instead of papered over.
    """
    level_verdicts = [is_nowhere_dense(r, family, p) for r in pres.levels]
    union_verdict = is_nowhere_dense(UnionRegion(pres.levels), family, p)
    agree: ThreeVal
    if any(v is UNKNOWN for v in level_verdicts) or union_verdict is UNKNOWN:
        agree = UNKNOWN
    else:
        all_levels_nwd = all(v is TRUE for v in level_verdicts)
        agree = ThreeVal.of(all_levels_nwd == (union_verdict is TRUE))
    return {"levels": [v.value for v in level_verdicts],
            "union": union_verdict.value,
            "agreement": agree.value}
