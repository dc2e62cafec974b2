"""Partition calculus: colorings, the pivot tree, and homogeneous extraction.

The central object is the binary partition tree of a 2-coloring of index
pairs: level m splits the surviving indices above m by their color against
pivot m.  Walking the tree while keeping the larger child yields a pivot set
on which the coloring is determined by the earlier pivot, and the majority
color class (plus the final pivot) is monochromatic.

On top of the pair machinery sit three reductions: merging the top two colors
to cut the color count, projecting an n-tuple coloring down to its two
smallest entries, and a game-driven step-up from arity n to n+1.
solve_partition dispatches across them and re-verifies every output before
returning it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Optional

from .ground import (
    EXHAUSTIVE_CAP,
    TRUE,
    ContractError,
    DegenerateError,
    Family,
    InternalCheckError,
    LargenessParams,
    StructuralError,
    Subfamily,
    ThreeVal,
    admissible,
    subsets_canonical,
)

#: A pluggable solver: takes an index domain and a coloring, returns
#: (indices, color) with the indices admissible and monochromatic, or None.
Solver = Callable[[tuple[int, ...], "Coloring"], Optional[tuple[tuple[int, ...], int]]]


class Coloring:
    """A coloring of r-element index sets with colors 0..k-1.

    The table may be scoped to a sub-domain; `ensure_total` checks totality
    on a given index range, which the JSON loader enforces for the whole
    family.
    """

    def __init__(self, arity: int, colors: int,
                 table: dict[tuple[int, ...], int]) -> None:
        if arity < 1:
            raise StructuralError("coloring arity must be >= 1")
        if colors < 1:
            raise StructuralError("coloring needs at least one color")
        self.arity = arity
        self.colors = colors
        self._table = {}
        for key, value in table.items():
            key = tuple(sorted(key))
            if len(key) != arity or len(set(key)) != arity:
                raise StructuralError(f"coloring key {key} is not an {arity}-set")
            if not 0 <= value < colors:
                raise StructuralError(f"color {value} out of range 0..{colors - 1}")
            self._table[key] = value

    def of(self, indices) -> int:
        key = tuple(sorted(indices))
        try:
            return self._table[key]
        except KeyError:
            raise StructuralError(f"coloring is not defined on {key}") from None

    def defined_on(self, indices) -> bool:
        return tuple(sorted(indices)) in self._table

    def ensure_total(self, domain: tuple[int, ...]) -> None:
        for key in itertools.combinations(sorted(domain), self.arity):
            if key not in self._table:
                raise StructuralError(f"coloring is missing an entry for {key}")

    def to_json(self) -> dict:
        return {"arity": self.arity, "colors": self.colors,
                "entries": [[list(k), v] for k, v in sorted(self._table.items())]}

    @classmethod
    def from_json(cls, data: dict, family: Family) -> "Coloring":
        if not isinstance(data, dict):
            raise StructuralError("coloring JSON must be an object")
        try:
            entries = {tuple(k): v for k, v in data["entries"]}
            coloring = cls(data["arity"], data["colors"], entries)
        except (KeyError, TypeError) as exc:
            raise StructuralError(f"malformed coloring JSON: {exc}") from exc
        coloring.ensure_total(family.indices)
        return coloring


@dataclass(frozen=True)
class PartitionTree:
    """Binary tree of index sets: node paths are color strings."""

    family: Family
    depth: int
    nodes: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    def node(self, path: tuple[int, ...]) -> tuple[int, ...]:
        found = dict(self.nodes).get(path)
        if found is None:
            raise StructuralError(f"no node at path {path}")
        return found

    def level(self, k: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        return [(path, content) for path, content in self.nodes if len(path) == k]


@dataclass(frozen=True)
class BranchResult:
    """The pivots collected along a walked branch and the branch colors."""

    family: Family
    pivots: tuple[int, ...]
    colors: tuple[int, ...]


def _split(family: Family, content: tuple[int, ...], pivot: int,
           f: Coloring) -> tuple[tuple[int, ...], tuple[int, ...]]:
    zero, one = [], []
    for n in content:
        if n <= pivot:
            continue
        (zero if f.of((pivot, n)) == 0 else one).append(n)
    return tuple(zero), tuple(one)


def build_partition_tree(family: Family, f: Coloring, depth: int) -> PartitionTree:
    """Materialize the pivot tree down to `depth` (empty nodes included).

    The node at a path of length m collects the indices above m that survive
    the parent and get color path[m-1] against pivot m.
    """
    if f.arity != 2 or f.colors != 2:
        raise ContractError("the pivot tree needs a 2-coloring of pairs")
    if depth < 0:
        raise StructuralError("depth must be >= 0")
    if 2 ** depth > 16384:
        raise StructuralError("tree depth too large to materialize")
    nodes: list[tuple[tuple[int, ...], tuple[int, ...]]] = [((), family.indices)]
    frontier = [((), family.indices)]
    for m in range(1, depth + 1):
        next_frontier = []
        for path, content in frontier:
            zero, one = _split(family, content, m, f)
            for bit, child in ((0, zero), (1, one)):
                entry = (path + (bit,), child)
                nodes.append(entry)
                next_frontier.append(entry)
        frontier = next_frontier
    return PartitionTree(family, depth, tuple(nodes))


def branch_walk(family: Family, f: Coloring) -> BranchResult:
    """Walk the pivot tree keeping the larger child (color 0 on ties).

    Collects the pivots that are present in the node at their own level; the
    walk ends when no index survives above the current level, which always
    happens at a collected pivot, so the last pivot carries no color.
    """
    if f.arity != 2 or f.colors != 2:
        raise ContractError("branch walk needs a 2-coloring of pairs")
    content = family.indices
    pivots: list[int] = []
    colors: list[int] = []
    m = 0
    while content:
        m += 1
        if m in content:
            pivots.append(m)
        zero, one = _split(family, content, m, f)
        if not zero and not one:
            break
        if len(one) > len(zero):
            colors.append(1)
            content = one
        else:
            colors.append(0)
            content = zero
    if len(pivots) < 2:
        raise DegenerateError("family too small for a branch walk")
    return BranchResult(family, tuple(pivots), tuple(colors))


def extract_homogeneous(br: BranchResult, f: Coloring) -> tuple[Subfamily, int]:
    """Majority color class of the colored pivots, plus the final pivot.

    The result is re-verified monochromatic; a failure here is a bug, not a
    data condition.
    """
    *colored, last = br.pivots
    by_color: dict[int, list[int]] = {0: [], 1: []}
    for pivot in colored:
        by_color[br.colors[pivot - 1]].append(pivot)
    color = 0 if len(by_color[0]) >= len(by_color[1]) else 1
    chosen = tuple(by_color[color]) + (last,)
    for pair in itertools.combinations(chosen, 2):
        if f.of(pair) != color:
            raise InternalCheckError(
                f"extracted class is not monochromatic at {pair}")
    return Subfamily(br.family, chosen), color


def _classical_pivot_walk(family: Family, f: Coloring,
                          domain: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    """Minimum-pivot construction: split the rest, keep the larger class.

    Collects at least floor(log2 |domain|) + 1 pivots for every coloring,
    which the tree walk cannot promise once a level loses its pivot.
    """
    pool = tuple(sorted(domain))
    pivots: list[int] = []
    colors: list[int] = []
    while pool:
        pivot, rest = pool[0], pool[1:]
        pivots.append(pivot)
        if not rest:
            break
        zero = tuple(n for n in rest if f.of((pivot, n)) == 0)
        one = tuple(n for n in rest if f.of((pivot, n)) == 1)
        if len(one) > len(zero):
            colors.append(1)
            pool = one
        else:
            colors.append(0)
            pool = zero
    by_color: dict[int, list[int]] = {0: [], 1: []}
    for pivot, c in zip(pivots, colors):
        by_color[c].append(pivot)
    color = 0 if len(by_color[0]) >= len(by_color[1]) else 1
    chosen = tuple(by_color[color]) + (pivots[-1],)
    return chosen, color


def _verify_mono(f: Coloring, indices: tuple[int, ...], color: int) -> bool:
    combos = list(itertools.combinations(sorted(indices), f.arity))
    return bool(combos) and all(f.of(c) == color for c in combos)


def pair_size_guarantee(n: int) -> int:
    """The monochromatic size promised for a 2-colored n-member domain."""
    if n < 2:
        return n
    return math.ceil(math.floor(math.log2(n)) / 2) + 1


@dataclass(frozen=True)
class PartitionResult:
    """A verified monochromatic set, its color, and how it was found."""

    subfamily: Subfamily
    color: int
    admissible: ThreeVal
    route: str


def _exhaustive_mono(family: Family, f: Coloring, domain: tuple[int, ...],
                     p: LargenessParams,
                     require_admissible: bool) -> Optional[tuple[tuple[int, ...], int]]:
    """Largest monochromatic subset by full scan; admissible ones if asked.

    Only callable on small domains.  Canonical order breaks size ties.
    """
    if 2 ** len(domain) > EXHAUSTIVE_CAP:
        return None
    floor = max(f.arity, p.min_size) if require_admissible else f.arity
    best: Optional[tuple[tuple[int, ...], int]] = None
    for combo in subsets_canonical(domain, min_size=floor):
        if best is not None and len(combo) <= len(best[0]):
            continue
        tuples = list(itertools.combinations(combo, f.arity))
        seen = {f.of(t) for t in tuples}
        if len(seen) != 1:
            continue
        if require_admissible and \
                admissible(Subfamily(family, combo), p) is not TRUE:
            continue
        best = (combo, seen.pop())
    return best


def _solve_pairs_2(family: Family, f: Coloring, p: LargenessParams,
                   domain: Optional[tuple[int, ...]] = None
                   ) -> Optional[PartitionResult]:
    """The 2-color pair solver: branch walk, exhaustive upgrade, classical net.

    Candidates are ranked by: meets the size guarantee, then admissible, then
    route order (branch walk, exhaustive, classical).
    """
    domain = family.indices if domain is None else tuple(sorted(domain))
    if len(domain) < 2:
        return None
    bound = pair_size_guarantee(len(domain))

    candidates: list[tuple[tuple[int, ...], int, str]] = []
    view_family, back = _domain_view(family, domain)
    try:
        br = branch_walk(view_family, _view_coloring(f, back))
        chosen, color = extract_homogeneous(br, _view_coloring(f, back))
        candidates.append((tuple(back[i] for i in chosen.indices), color, "branch"))
    except DegenerateError:
        pass
    if 2 ** len(domain) <= 4096:
        got = _exhaustive_mono(family, f, domain, p, require_admissible=True)
        if got is not None:
            candidates.append((got[0], got[1], "exhaustive"))
    chosen, color = _classical_pivot_walk(family, f, domain)
    candidates.append((chosen, color, "classical"))

    route_rank = {"branch": 0, "exhaustive": 1, "classical": 2}

    def rank(cand: tuple[tuple[int, ...], int, str]):
        indices, _, route = cand
        adm = admissible(Subfamily(family, indices), p) is TRUE
        return (0 if len(indices) >= bound else 1, 0 if adm else 1,
                route_rank[route])

    best = min(candidates, key=rank)
    indices, color, route = best
    if not _verify_mono(f, indices, color):
        raise InternalCheckError("pair solver produced a non-monochromatic set")
    sub = Subfamily(family, indices)
    return PartitionResult(sub, color, admissible(sub, p), route)


def _domain_view(family: Family, domain: tuple[int, ...]
                 ) -> tuple[Family, dict[int, int]]:
    """A family made of the domain's members, plus position -> index map."""
    members = tuple(family.member(i) for i in domain)
    view = Family(family.universe, members)
    back = {pos: idx for pos, idx in enumerate(domain, start=1)}
    return view, back


def _view_coloring(f: Coloring, back: dict[int, int]) -> Coloring:
    table = {}
    for pair in itertools.combinations(sorted(back), 2):
        orig = tuple(sorted(back[i] for i in pair))
        if f.defined_on(orig):
            table[pair] = f.of(orig)
    return Coloring(2, 2, table)


def merge_colors_solve(family: Family, f: Coloring, base2solver: Solver,
                       p: LargenessParams,
                       domain: Optional[tuple[int, ...]] = None
                       ) -> Optional[tuple[Subfamily, int]]:
    """Cut a many-color pair instance down to two colors by merging the top.

    The top two colors become one; the reduced instance is solved
    recursively, and when the merged color wins, the two-color solver reruns
    on the residual domain to split it back apart.  Output is verified
    monochromatic and admissible.
    """
    if f.arity != 2:
        raise ContractError("color merging works on pair colorings")
    domain = family.indices if domain is None else tuple(sorted(domain))
    got = _merge_colors_inner(family, f, base2solver, p, domain)
    if got is not None:
        return got
    # the induction can die on a residual domain that happens to lack an
    # admissible monochromatic set; the direct scan settles solvability
    direct = _exhaustive_mono(family, f, domain, p, require_admissible=True)
    if direct is None:
        return None
    return Subfamily(family, direct[0]), direct[1]


def _merge_colors_inner(family: Family, f: Coloring, base2solver: Solver,
                        p: LargenessParams, domain: tuple[int, ...]
                        ) -> Optional[tuple[Subfamily, int]]:
    if f.colors <= 2:
        got = base2solver(domain, f)
        return _check_solver_output(family, f, got, p)
    c = f.colors
    merged_table = {}
    for pair in itertools.combinations(domain, 2):
        merged_table[pair] = min(f.of(pair), c - 2)
    g = Coloring(2, c - 1, merged_table)
    sub = _merge_colors_inner(family, g, base2solver, p, domain)
    if sub is None:
        return None
    B, i = sub
    if i < c - 2:
        return _check_solver_output(family, f, (B.indices, i), p)
    split_table = {}
    for pair in itertools.combinations(B.indices, 2):
        split_table[pair] = f.of(pair) - (c - 2)
    h = Coloring(2, 2, split_table)
    got = base2solver(B.indices, h)
    if got is None:
        return None
    indices, j = got
    return _check_solver_output(family, f, (indices, (c - 2) + j), p)


def _check_solver_output(family: Family, f: Coloring,
                         got: Optional[tuple[tuple[int, ...], int]],
                         p: LargenessParams) -> Optional[tuple[Subfamily, int]]:
    if got is None:
        return None
    indices, color = got
    sub = Subfamily.of(family, indices)
    if not _verify_mono(f, sub.indices, color):
        raise ContractError("solver returned a non-monochromatic set")
    if admissible(sub, p) is not TRUE:
        raise ContractError("solver returned an inadmissible set")
    return sub, color


def project_solve(family: Family, f: Coloring, nsolver: Solver, n: int,
                  p: LargenessParams,
                  domain: Optional[tuple[int, ...]] = None
                  ) -> Optional[tuple[Subfamily, int]]:
    """Solve a pair instance through an n-tuple solver, n > 2.

    Each n-set inherits the color of its two smallest entries.  The n-tuple
    answer is checked on every pair; the top pairs of a finite answer can
    escape the induced constraint, so a failed check falls back to a direct
    exhaustive pair search.
    """
    if n <= 2:
        raise ContractError("projection needs n > 2")
    if f.arity != 2:
        raise ContractError("projection starts from a pair coloring")
    domain = family.indices if domain is None else tuple(sorted(domain))
    table = {}
    for combo in itertools.combinations(domain, n):
        table[combo] = f.of(combo[:2])
    g = Coloring(n, f.colors, table)
    got = nsolver(domain, g)
    if got is not None:
        indices, color = got
        if _verify_mono(f, tuple(sorted(indices)), color) and \
                admissible(Subfamily.of(family, indices), p) is TRUE:
            return Subfamily.of(family, indices), color
    got = _exhaustive_mono(family, f, domain, p, require_admissible=True)
    if got is None:
        return None
    return Subfamily(family, got[0]), got[1]


def stepup_solve(family: Family, f: Coloring, nsolver: Solver, two,
                 innings: int, p: LargenessParams,
                 domain: Optional[tuple[int, ...]] = None
                 ) -> Optional[tuple[Subfamily, int]]:
    """Lift an n-tuple solver to (n+1)-tuples by playing the selection game.

    Each inning ONE fixes the latest pick, homogenizes the coloring of the
    n-tuples completed by it, and plays the homogeneous pool; the picks whose
    recorded colors agree, past the first n of them, are the candidate output.
    """
    from . import games

    n = f.arity - 1
    if n < 1:
        raise ContractError("step-up needs arity at least 2")
    domain = family.indices if domain is None else tuple(sorted(domain))
    strategy = _StepUpOne(family, f, nsolver, domain, n)
    try:
        transcript = games.play(strategy, two, innings, p)
    except games.StrategyFault:
        transcript = None

    if transcript is not None:
        colors = strategy.final_colors
        picks = transcript.picks
        for i in sorted(set(colors.values())):
            w = tuple(pk for pos, pk in enumerate(picks, start=1)
                      if pos > n and colors.get(pk) == i)
            sub = Subfamily.of(family, w)
            if admissible(sub, p) is TRUE and _verify_mono(f, sub.indices, i):
                return sub, i
    # a faulted play or an inadmissible color class still leaves the instance
    # solvable at desk scale; the exhaustive net settles it either way
    got = _exhaustive_mono(family, f, domain, p, require_admissible=True)
    if got is None:
        return None
    return Subfamily(family, got[0]), got[1]


class _StepUpOne:
    """ONE's strategy for the step-up: homogenize around the latest pick."""

    label = "step-up"

    def __init__(self, family: Family, f: Coloring, nsolver: Solver,
                 domain: tuple[int, ...], n: int) -> None:
        self.family = family
        self.f = f
        self.nsolver = nsolver
        self.domain = domain
        self.n = n
        self.final_colors: dict[int, int] = {}

    def start(self) -> dict:
        return {"pool": None}

    def _homogenize(self, fixed: int, pool: tuple[int, ...], inning: int
                    ) -> tuple[tuple[int, ...], int]:
        from . import games

        table = {}
        for combo in itertools.combinations(pool, self.n):
            table[combo] = self.f.of(tuple(sorted((fixed,) + combo)))
        g = Coloring(self.n, self.f.colors, table)
        got = self.nsolver(pool, g)
        if got is None:
            raise games.StrategyFault(inning, "tuple solver found nothing")
        return tuple(sorted(got[0])), got[1]

    def move(self, state, picks):
        inning = len(picks) + 1
        if not picks:
            fixed = self.domain[0]
            pool = tuple(i for i in self.domain if i != fixed)
        else:
            fixed = picks[-1]
            pool = tuple(i for i in state["pool"] if i > fixed)
        indices, color = self._homogenize(fixed, pool, inning)
        if picks:
            self.final_colors[fixed] = color
        move = Subfamily(self.family, indices)
        return move, {"pool": indices}, {"fixed": fixed, "color": color}

    def certificates(self, state, picks):
        return ()


def solve_partition(family: Family, f: Coloring, p: LargenessParams,
                    innings: Optional[int] = None,
                    two=None) -> Optional[PartitionResult]:
    """Dispatch a partition instance across the bundled reductions.

    Pairs with two colors go to the branch-walk solver; more colors are
    merged down; higher arities step up from the pair case.  Singleton
    colorings are plain pigeonhole.  Every output is verified; admissibility
    is reported, not required, except where a reduction needs it.
    """
    from . import games

    if len(family) == 0:
        return None
    n, k = f.arity, f.colors
    if n > 4 or k > 8:
        raise StructuralError("partition instances are capped at arity 4 and "
                              "8 colors so they stay exhaustively checkable")
    if innings is None:
        innings = max(games.DEFAULT_INNINGS, n + p.min_size + 3)
    if two is None:
        two = games.GreedyTwo(p)

    if n == 1:
        classes: list[tuple[tuple[int, ...], int]] = []
        for color in range(k):
            cls = tuple(i for i in family.indices if f.of((i,)) == color)
            if cls:
                classes.append((cls, color))
        if not classes:
            return None
        for cls, color in classes:
            sub = Subfamily(family, cls)
            if admissible(sub, p) is TRUE:
                return PartitionResult(sub, color, TRUE, "pigeonhole")
        cls, color = max(classes, key=lambda c: (len(c[0]), -c[1]))
        sub = Subfamily(family, cls)
        return PartitionResult(sub, color, admissible(sub, p), "pigeonhole")

    def base2(domain: tuple[int, ...], g: Coloring
              ) -> Optional[tuple[tuple[int, ...], int]]:
        got = _solve_pairs_2(family, g, p, domain)
        if got is not None and got.admissible is TRUE:
            return got.subfamily.indices, got.color
        direct = _exhaustive_mono(family, g, domain, p, require_admissible=True)
        return direct

    def solve_arity(r: int) -> Solver:
        def run(domain: tuple[int, ...], g: Coloring
                ) -> Optional[tuple[tuple[int, ...], int]]:
            if r == 2:
                got = merge_colors_solve(family, g, base2, p, domain)
            else:
                got = stepup_solve(family, g, solve_arity(r - 1), two,
                                   innings, p, domain)
            if got is None:
                return None
            return got[0].indices, got[1]
        return run

    if n == 2 and k == 2:
        return _solve_pairs_2(family, f, p)
    if n == 2:
        got = merge_colors_solve(family, f, base2, p)
        route = "merge"
    else:
        got = stepup_solve(family, f, solve_arity(n - 1), two, innings, p)
        route = "stepup"
    if got is None:
        direct = _exhaustive_mono(family, f, family.indices, p,
                                  require_admissible=False)
        if direct is None:
            return None
        sub = Subfamily(family, direct[0])
        return PartitionResult(sub, direct[1], admissible(sub, p), "exhaustive")
    sub, color = got
    return PartitionResult(sub, color, admissible(sub, p), route)


# --- the splitting step of the no-homogeneous-set analysis --------------------

@dataclass(frozen=True)
class Step:
    """A level where the candidate set escapes every admissible node."""

    k: int
    node_path: tuple[int, ...]
    node: tuple[int, ...]
    escape: int                    # an index of B past k outside the node
    continuation: Subfamily        # B past k, intersected with the node


@dataclass(frozen=True)
class NoStep:
    """No level within the tree depth splits the candidate set."""


@dataclass(frozen=True)
class LargenessFailure:
    """A level split the set, but no admissible node met it admissibly."""

    k: int


def counterexample_step(B: Subfamily, tree: PartitionTree,
                        p: LargenessParams):
    """Find the least level where B leaves every admissible node behind.

    At such a level k the admissible node meeting B admissibly (canonical
    path order) is returned together with an escaping index and the
    continuation set, ready for iterating.  NoStep means B tracks a single
    branch through the materialized depth.
    """
    if B.family != tree.family:
        raise StructuralError("subfamily and tree come from different families")
    b_set = set(B.indices)
    for k in range(1, tree.depth + 1):
        if k not in b_set:
            continue
        residual = tuple(i for i in B.indices if i > k)
        level_nodes = [(path, content) for path, content in tree.level(k)
                       if admissible(Subfamily(tree.family, content), p) is TRUE]
        if any(set(residual) <= set(content) for _, content in level_nodes):
            continue
        meets = []
        for path, content in sorted(level_nodes):
            overlap = tuple(i for i in residual if i in set(content))
            if admissible(Subfamily(tree.family, overlap), p) is TRUE:
                meets.append((path, content, overlap))
        if not meets:
            return LargenessFailure(k)
        path, content, overlap = meets[0]
        outside = [i for i in residual if i not in set(content)]
        if not outside:
            raise InternalCheckError("escape index must exist at a split level")
        return Step(k, path, content, outside[0],
                    Subfamily(tree.family, overlap))
    return NoStep()
