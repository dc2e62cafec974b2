"""Batch front end: load JSON fixtures, run one operation, emit a report.

Every invocation prints a single report (JSON by default, stable key order)
and exits 0 when the operation produced a definite result, 2 when it ended
in NotFound or Unknown, and 1 on usage, structural, or contract errors.
Reports are byte-reproducible for a fixed seed.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import random
import sys
from typing import Optional

from . import barriers, ellentuck, games, ground, mathias, oracle, ramsey

REPORT_SCHEMA = "omegaramsey-report/1"

#: environment override for the default enumeration budget
BOUND_ENV_VAR = "OMEGARAMSEY_SEARCH_BOUND"


def default_search_bound() -> int:
    raw = os.environ.get(BOUND_ENV_VAR)
    if raw is None:
        return 1_000_000
    try:
        return int(raw)
    except ValueError:
        raise ground.StructuralError(
            f"{BOUND_ENV_VAR} must be an integer, got {raw!r}")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_FOUND = 2


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError:
        raise ground.StructuralError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise ground.StructuralError(
            f"malformed JSON in {path} at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}")


def canonical_dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _params(args) -> ground.LargenessParams:
    return ground.LargenessParams(d=args.d, min_size=args.minsize,
                                  search_bound=args.search_bound)


def _family(args) -> ground.Family:
    return ground.Family.from_json(_load_json(args.family))


def _emit(args, command: str, result: dict, exit_code: int) -> int:
    report = {
        "schema": REPORT_SCHEMA,
        "command": command,
        "params": {"d": args.d, "minsize": args.minsize,
                   "searchBound": args.search_bound},
        "result": result,
    }
    if getattr(args, "seed", None) is not None:
        report["seed"] = args.seed
    if args.format == "json":
        sys.stdout.write(canonical_dumps(report))
    else:
        sys.stdout.write(f"{command}: {json.dumps(result, sort_keys=True)}\n")
    return exit_code


def _three(v: ground.ThreeVal) -> str:
    return v.value


# --- subcommand handlers -----------------------------------------------------

def _cmd_cover_check(args) -> int:
    fam = _family(args)
    sub = ground.Subfamily.from_json(_load_json(args.sub), fam)
    verdict = ground.check_d_omega_cover(sub, _params(args))
    result = {"verdict": _three(verdict.status)}
    if verdict.witness is not None:
        result["witness"] = sorted(verdict.witness)
    code = EXIT_NOT_FOUND if verdict.status is ground.UNKNOWN else EXIT_OK
    return _emit(args, "cover-check", result, code)


def _cmd_decide(args) -> int:
    fam = _family(args)
    p = _params(args)
    stem = ellentuck.as_stem(args.stem)
    if args.sub:
        B = ground.Subfamily.from_json(_load_json(args.sub), fam)
    else:
        B = ellentuck.restrict(ground.Subfamily.full(fam), stem)
    region = ellentuck.region_from_json(_load_json(args.region), fam)
    outcome = ellentuck.decide(B, stem, region, p)
    result = {"verdict": outcome.kind}
    if outcome.witness is not None:
        result["witness"] = outcome.witness.to_json()
    code = EXIT_NOT_FOUND if outcome.kind == "unknown" else EXIT_OK
    return _emit(args, "decide", result, code)


def _cmd_cr_witness(args) -> int:
    fam = _family(args)
    p = _params(args)
    stem = ellentuck.as_stem(args.stem)
    if args.sub:
        B = ground.Subfamily.from_json(_load_json(args.sub), fam)
    else:
        B = ellentuck.restrict(ground.Subfamily.full(fam), stem)
    region = ellentuck.region_from_json(_load_json(args.region), fam)
    outcome = ellentuck.cr_witness(region, stem, B, p, innings=args.innings,
                                   subset_cap=args.subset_cap)
    result = {"verdict": outcome.kind}
    if outcome.witness is not None:
        result["witness"] = outcome.witness.to_json()
    if outcome.kind != "not_found" and len(B.indices) <= oracle.SIZE_LIMIT:
        check = oracle.brute_cr(region, stem, B, p)
        result["oracleAgrees"] = check is not None
    code = EXIT_NOT_FOUND if outcome.kind == "not_found" else EXIT_OK
    return _emit(args, "cr-witness", result, code)


def _cmd_nwd_witness(args) -> int:
    fam = _family(args)
    p = _params(args)
    stem = ellentuck.as_stem(args.stem)
    if args.sub:
        B = ground.Subfamily.from_json(_load_json(args.sub), fam)
    else:
        B = ellentuck.restrict(ground.Subfamily.full(fam), stem)
    region = ellentuck.region_from_json(_load_json(args.region), fam)
    outcome = ellentuck.nwd_witness(region, stem, B, p)
    result = {"verdict": outcome.kind}
    if outcome.witness is not None:
        result["witness"] = outcome.witness.to_json()
    code = EXIT_NOT_FOUND if outcome.kind == "not_found" else EXIT_OK
    return _emit(args, "nwd-witness", result, code)


def _one_strategy(args, fam, p):
    stem = ellentuck.as_stem(args.stem)
    base = ellentuck.restrict(ground.Subfamily.full(fam), stem)
    if args.one == "constant":
        if not args.one_move:
            raise ground.StructuralError("constant strategy needs --one-move")
        move = ground.Subfamily.from_json(_load_json(args.one_move), fam)
        return games.ConstantOne(move)
    if args.one == "fusion":
        if not args.region:
            raise ground.StructuralError("fusion strategy needs --region")
        region = ellentuck.region_from_json(_load_json(args.region), fam)
        return games.fusion_one(stem, base, region, p, subset_cap=args.subset_cap)
    if args.one == "meager":
        if not args.ladder:
            raise ground.StructuralError("avoidance strategy needs --ladder")
        levels = tuple(ellentuck.region_from_json(r, fam)
                       for r in _load_json(args.ladder))
        ladder = ellentuck.MeagerPresentation(levels)
        return games.meager_avoid_one(stem, base, ladder, p,
                                      subset_cap=args.subset_cap)
    raise ground.StructuralError(f"unknown ONE strategy {args.one!r}")


def _cmd_play(args) -> int:
    fam = _family(args)
    p = _params(args)
    one = _one_strategy(args, fam, p)
    two = games.GreedyTwo(p) if args.two == "greedy" else games.LeastIndexTwo()
    try:
        transcript = games.play(one, two, args.innings, p)
    except games.StrategyFault as fault:
        return _emit(args, "play",
                     {"verdict": "fault", "inning": fault.inning,
                      "reason": fault.reason}, EXIT_NOT_FOUND)
    return _emit(args, "play", transcript.to_json(), EXIT_OK)


def _cmd_s1_select(args) -> int:
    fam = _family(args)
    p = _params(args)
    covers = [ground.Subfamily.from_json(c, fam) for c in _load_json(args.covers)]
    got = games.s1_select(covers, p)
    if isinstance(got, games.Selection):
        return _emit(args, "s1-select",
                     {"verdict": "selection", "picks": list(got.indices)}, EXIT_OK)
    return _emit(args, "s1-select",
                 {"verdict": "not_found", "reason": got.reason}, EXIT_NOT_FOUND)


def _cmd_ramsey_solve(args) -> int:
    fam = _family(args)
    p = _params(args)
    coloring = ramsey.Coloring.from_json(_load_json(args.coloring), fam)
    got = ramsey.solve_partition(fam, coloring, p)
    if got is None:
        return _emit(args, "ramsey-solve", {"verdict": "not_found"}, EXIT_NOT_FOUND)
    result = {"verdict": "solved", "set": got.subfamily.to_json(),
              "color": got.color, "admissible": _three(got.admissible),
              "route": got.route}
    if len(fam) <= oracle.SIZE_LIMIT:
        matches = oracle.brute_homogeneous(fam, coloring, coloring.arity,
                                           coloring.colors, len(got.subfamily))
        result["oracleVerified"] = (got.subfamily.indices, got.color) in matches
    return _emit(args, "ramsey-solve", result, EXIT_OK)


def _cmd_tree_build(args) -> int:
    fam = _family(args)
    coloring = ramsey.Coloring.from_json(_load_json(args.coloring), fam)
    tree = ramsey.build_partition_tree(fam, coloring, args.depth)
    nodes = {"".join(map(str, path)): list(content)
             for path, content in tree.nodes}
    return _emit(args, "tree-build", {"depth": tree.depth, "nodes": nodes},
                 EXIT_OK)


def _cmd_nw(args) -> int:
    fam = _family(args)
    p = _params(args)
    T = barriers.FiniteSetFamily.from_json(_load_json(args.stems), fam)
    parts = [[tuple(s) for s in part] for part in _load_json(args.partition)]
    got = barriers.nw_homogenize(T, parts, p)
    if got.kind != "homogeneous":
        return _emit(args, "nw", {"verdict": "not_found"}, EXIT_NOT_FOUND)
    return _emit(args, "nw", {"verdict": "homogeneous",
                              "set": got.witness.to_json(),
                              "part": got.part}, EXIT_OK)


def _cmd_fg(args) -> int:
    fam = _family(args)
    p = _params(args)
    S = barriers.FiniteSetFamily.from_json(_load_json(args.stems), fam)
    got = barriers.fg_witness(S, p)
    if got.kind != "witness":
        return _emit(args, "fg", {"verdict": "not_found"}, EXIT_NOT_FOUND)
    return _emit(args, "fg", {"verdict": "witness",
                              "set": got.witness.to_json()}, EXIT_OK)


def _cmd_mathias_check(args) -> int:
    fam = _family(args)
    cond = mathias.Condition.from_json(_load_json(args.condition), fam)
    ok = mathias.valid_condition(cond, _params(args))
    return _emit(args, "mathias-check", {"valid": ok}, EXIT_OK)


def _cmd_mathias_extends(args) -> int:
    fam = _family(args)
    c1 = mathias.Condition.from_json(_load_json(args.condition), fam)
    c2 = mathias.Condition.from_json(_load_json(args.weaker), fam)
    return _emit(args, "mathias-extends",
                 {"extends": mathias.extends(c1, c2)}, EXIT_OK)


def _cmd_mathias_meet(args) -> int:
    fam = _family(args)
    p = _params(args)
    cond = mathias.Condition.from_json(_load_json(args.condition), fam)
    floor = args.min_stem_size

    def predicate(c: mathias.Condition) -> bool:
        return len(c.stem) >= floor

    got = mathias.dense_meet(cond, predicate, p)
    if got is None:
        return _emit(args, "mathias-meet", {"verdict": "not_found"},
                     EXIT_NOT_FOUND)
    return _emit(args, "mathias-meet",
                 {"verdict": "met", "condition": got.to_json()}, EXIT_OK)


def _cmd_oracle(args) -> int:
    fam = _family(args)
    p = _params(args)
    which = args.oracle_op
    if which in ("accepts", "rejects", "cr"):
        stem = ellentuck.as_stem(args.stem)
        if args.sub:
            B = ground.Subfamily.from_json(_load_json(args.sub), fam)
        else:
            B = ellentuck.restrict(ground.Subfamily.full(fam), stem)
        region = ellentuck.region_from_json(_load_json(args.region), fam)
        if which == "accepts":
            return _emit(args, "oracle-accepts",
                         {"accepts": oracle.brute_accepts(B, stem, region, p)},
                         EXIT_OK)
        if which == "rejects":
            return _emit(args, "oracle-rejects",
                         {"rejects": oracle.brute_rejects(B, stem, region, p)},
                         EXIT_OK)
        got = oracle.brute_cr(region, stem, B, p)
        if got is None:
            return _emit(args, "oracle-cr", {"verdict": "none"}, EXIT_NOT_FOUND)
        return _emit(args, "oracle-cr",
                     {"verdict": got[0], "witness": got[1].to_json()}, EXIT_OK)
    if which == "homogeneous":
        coloring = ramsey.Coloring.from_json(_load_json(args.coloring), fam)
        found = oracle.brute_homogeneous(fam, coloring, coloring.arity,
                                         coloring.colors, args.min_set_size)
        return _emit(args, "oracle-homogeneous",
                     {"count": len(found),
                      "sets": [[list(b), c] for b, c in found]}, EXIT_OK)
    if which == "nw":
        T = barriers.FiniteSetFamily.from_json(_load_json(args.stems), fam)
        parts = [[tuple(s) for s in part] for part in _load_json(args.partition)]
        found = oracle.brute_nw(T, parts, p)
        return _emit(args, "oracle-nw",
                     {"count": len(found),
                      "pairs": [[list(b), i] for b, i in found]}, EXIT_OK)
    raise ground.StructuralError(f"unknown oracle operation {which!r}")


def _cmd_suite(args) -> int:
    """A compact deterministic battery: pair solving plus decide-vs-oracle."""
    if args.seed is None:
        raise ground.StructuralError("suite needs an explicit --seed")
    rng = random.Random(args.seed)
    p = ground.LargenessParams(d=args.d, min_size=args.minsize,
                               search_bound=args.search_bound)
    cases = 0
    failures = []

    members = [frozenset(c) for c in itertools.combinations(range(1, 7), 4)]
    fam = ground.Family(ground.Universe(6), tuple(members))
    for trial in range(args.cases):
        table = {pair: rng.randint(0, 1)
                 for pair in itertools.combinations(fam.indices, 2)}
        coloring = ramsey.Coloring(2, 2, table)
        got = ramsey.solve_partition(fam, coloring, p)
        cases += 1
        bound = ramsey.pair_size_guarantee(len(fam))
        if got is None or len(got.subfamily) < bound:
            failures.append(f"pair case {trial}: undersized result")

    grid_fam = ground.Family.of(
        5, [{1, 2, 3}, {3, 4, 5}, {1, 4, 5}, {2, 4, 5}, {1, 2, 5},
            {2, 3, 4}, {1, 3, 4}])
    gp = ground.LargenessParams(d=1, min_size=3, search_bound=args.search_bound)
    full = ground.Subfamily.full(grid_fam)
    region = ellentuck.BasicUnionRegion((
        ellentuck.EllentuckBasic((1,), ground.Subfamily.of(grid_fam, [2, 3, 4, 5])),))
    for stem in [(), (1,), (2,)]:
        B = ellentuck.restrict(full, stem)
        engine = ellentuck.decide(B, stem, region, gp).kind
        against = "rejects" if oracle.brute_rejects(B, stem, region, gp) \
            else "accepts"
        cases += 1
        if engine != against:
            failures.append(f"decide grid stem {stem}: {engine} vs {against}")

    # extension-order transitivity on sampled descending chains
    twelve = ground.Family.of(6, [
        {1, 2, 3, 4}, {1, 2, 5, 6}, {3, 4, 5, 6}, {1, 3, 5}, {2, 4, 6},
        {1, 4, 6}, {2, 3, 5}, {1, 2, 3, 5}, {1, 3, 4, 6}, {2, 4, 5, 6},
        {1, 2, 4, 6}, {1, 3, 4, 5}])
    checked = 0
    while checked < 50:
        side = sorted(rng.sample(range(1, 13), rng.randint(6, 12)))
        c3 = mathias.Condition((), ground.Subfamily.of(twelve, side))
        if not mathias.valid_condition(c3, p):
            continue
        moved = sorted(rng.sample(side, rng.randint(0, 2)))
        stem = tuple(moved)
        keep = [i for i in side if (not stem or i > max(stem))]
        if len(keep) < 3:
            continue
        c2 = mathias.Condition(stem, ground.Subfamily.of(twelve, keep))
        if not (mathias.valid_condition(c2, p) and mathias.extends(c2, c3)):
            continue
        keep2 = sorted(rng.sample(keep, max(3, len(keep) - 1)))
        c1 = mathias.Condition(stem, ground.Subfamily.of(twelve, keep2))
        if not (mathias.valid_condition(c1, p) and mathias.extends(c1, c2)):
            continue
        checked += 1
        cases += 1
        if not mathias.extends(c1, c3):
            failures.append("extension order failed to compose")

    # thin pair families homogenize into a part the oracle also reports
    eight = ground.Family.of(5, [{1, 2, 3}, {3, 4, 5}, {1, 4, 5}, {2, 4, 5},
                                 {1, 2, 5}, {2, 3, 4}, {1, 3, 4}, {2, 3, 5}])
    pairs = [(i, j) for i in range(1, 9) for j in range(i + 1, 9)]
    for _ in range(5):
        stems = rng.sample(pairs, rng.randint(6, len(pairs)))
        left = set(rng.sample(stems, rng.randint(0, len(stems))))
        parts = [[s for s in stems if s in left],
                 [s for s in stems if s not in left]]
        T = barriers.FiniteSetFamily.of(eight, stems)
        got = barriers.nw_homogenize(T, parts, gp)
        matches = oracle.brute_nw(T, parts, gp)
        cases += 1
        if got.kind == "homogeneous":
            if (got.witness.indices, got.part) not in matches:
                failures.append("homogenization left the oracle's result set")
        elif matches:
            failures.append("homogenization missed a solvable partition")

    result = {"cases": cases, "failures": failures, "pass": not failures}
    return _emit(args, "suite", result, EXIT_OK if not failures else EXIT_NOT_FOUND)


# --- argument wiring ----------------------------------------------------------

def _add_common(sp: argparse.ArgumentParser, family: bool = True) -> None:
    if family:
        sp.add_argument("--family", required=True, help="family JSON file")
    sp.add_argument("--d", type=int, default=2, help="cover depth")
    sp.add_argument("--minsize", type=int, default=3,
                    help="admissibility size gate")
    sp.add_argument("--search-bound", dest="search_bound", type=int,
                    default=None,
                    help=f"enumeration budget (default 1000000, or "
                         f"${BOUND_ENV_VAR})")
    sp.add_argument("--format", choices=("json", "text"), default="json")
    sp.add_argument("--seed", type=int, default=None)


def _add_stem_region(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--stem", type=int, nargs="*", default=[])
    sp.add_argument("--sub", help="reservoir JSON (defaults to the full tail)")
    sp.add_argument("--region", required=True, help="region JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omegaramsey",
        description="Finite engine for cover-family Ramsey combinatorics")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("cover-check", help="depth-d cover check")
    _add_common(sp)
    sp.add_argument("--sub", required=True)
    sp.set_defaults(handler=_cmd_cover_check)

    sp = sub.add_parser("decide", help="accept-or-reject search")
    _add_common(sp)
    _add_stem_region(sp)
    sp.set_defaults(handler=_cmd_decide)

    sp = sub.add_parser("cr-witness", help="inside/outside witness search")
    _add_common(sp)
    _add_stem_region(sp)
    sp.add_argument("--innings", type=int, default=4)
    sp.add_argument("--subset-cap", dest="subset_cap", type=int, default=3)
    sp.set_defaults(handler=_cmd_cr_witness)

    sp = sub.add_parser("nwd-witness", help="avoidance witness search")
    _add_common(sp)
    _add_stem_region(sp)
    sp.set_defaults(handler=_cmd_nwd_witness)

    sp = sub.add_parser("play", help="run a bounded play of the selection game")
    _add_common(sp)
    sp.add_argument("--one", choices=("constant", "fusion", "meager"),
                    required=True)
    sp.add_argument("--two", choices=("greedy", "least"), default="greedy")
    sp.add_argument("--innings", type=int, default=4)
    sp.add_argument("--subset-cap", dest="subset_cap", type=int, default=3)
    sp.add_argument("--stem", type=int, nargs="*", default=[])
    sp.add_argument("--one-move", dest="one_move",
                    help="move JSON for the constant strategy")
    sp.add_argument("--region", help="region JSON for the fusion strategy")
    sp.add_argument("--ladder", help="JSON list of regions for avoidance")
    sp.set_defaults(handler=_cmd_play)

    sp = sub.add_parser("s1-select", help="one pick per cover, admissible union")
    _add_common(sp)
    sp.add_argument("--covers", required=True,
                    help="JSON list of subfamily index arrays")
    sp.set_defaults(handler=_cmd_s1_select)

    sp = sub.add_parser("ramsey-solve", help="find a monochromatic subfamily")
    _add_common(sp)
    sp.add_argument("--coloring", required=True)
    sp.set_defaults(handler=_cmd_ramsey_solve)

    sp = sub.add_parser("tree-build", help="materialize the pivot tree")
    _add_common(sp)
    sp.add_argument("--coloring", required=True)
    sp.add_argument("--depth", type=int, default=4)
    sp.set_defaults(handler=_cmd_tree_build)

    sp = sub.add_parser("nw", help="homogenize a partition of a thin family")
    _add_common(sp)
    sp.add_argument("--stems", required=True)
    sp.add_argument("--partition", required=True)
    sp.set_defaults(handler=_cmd_nw)

    sp = sub.add_parser("fg", help="initial-segment witness for a dense family")
    _add_common(sp)
    sp.add_argument("--stems", required=True)
    sp.set_defaults(handler=_cmd_fg)

    sp = sub.add_parser("mathias-check", help="validate a condition")
    _add_common(sp)
    sp.add_argument("--condition", required=True)
    sp.set_defaults(handler=_cmd_mathias_check)

    sp = sub.add_parser("mathias-extends", help="test the extension order")
    _add_common(sp)
    sp.add_argument("--condition", required=True)
    sp.add_argument("--weaker", required=True)
    sp.set_defaults(handler=_cmd_mathias_extends)

    sp = sub.add_parser("mathias-meet", help="meet a stem-size requirement")
    _add_common(sp)
    sp.add_argument("--condition", required=True)
    sp.add_argument("--min-stem-size", dest="min_stem_size", type=int,
                    required=True)
    sp.set_defaults(handler=_cmd_mathias_meet)

    for op in ("accepts", "rejects", "cr", "homogeneous", "nw"):
        sp = sub.add_parser(f"oracle-{op}", help=f"brute-force {op} evaluation")
        _add_common(sp)
        sp.set_defaults(handler=_cmd_oracle, oracle_op=op)
        if op in ("accepts", "rejects", "cr"):
            _add_stem_region(sp)
        elif op == "homogeneous":
            sp.add_argument("--coloring", required=True)
            sp.add_argument("--min-set-size", dest="min_set_size", type=int,
                            default=1)
        else:
            sp.add_argument("--stems", required=True)
            sp.add_argument("--partition", required=True)

    sp = sub.add_parser("suite", help="compact deterministic check battery")
    _add_common(sp, family=False)
    sp.add_argument("--cases", type=int, default=20)
    sp.set_defaults(handler=_cmd_suite)

    return parser


def run(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else EXIT_OK
    try:
        if getattr(args, "search_bound", None) is None:
            args.search_bound = default_search_bound()
        return args.handler(args)
    except (ground.StructuralError, ground.ContractError,
            ground.DegenerateError, oracle.OracleSizeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    except ground.EngineError as exc:
        sys.stderr.write(f"engine error: {exc}\n")
        return EXIT_ERROR


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
