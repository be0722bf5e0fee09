"""Command-line front end.

Exit codes: 0 success or verified, 1 refuted (a witness is printed),
2 usage or parse error, 3 a budget was exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from . import io
from .automata import MODES as SEPARATION_MODES
from .automata import automaton_from_tree, is_separating
from .errors import BudgetExceeded, IncompatiblePriorities, ParseError, PreconditionError
from .games import EVE, PLAYER_NAMES, random_game, solve_parity_via_automaton, solve_parity_via_universal, zielonka
from .graphs import Path, PriorityGraph
from .saturation import saturate
from .trees import complete_universal_tree, graph_of_tree, is_universal_tree, minimal_universal_tree
from .trees import tree_and_leaf_map
from .universal import is_universal_graph, theorem1_ledger, universal_graph_from_automaton

OK, REFUTED, USAGE, OVER_BUDGET = 0, 1, 2, 3


class Report:
    """One result value; the JSON document and the text rendering both come from it."""

    def __init__(self, command, status=OK, **data):
        self.data = {"command": command, "status": ["ok", "refuted", "error", "over-budget"][status], **data}
        self.status = status
        self.lines = []

    def say(self, line=""):
        self.lines.append(line)
        return self

    def render(self, as_json):
        if as_json:
            return json.dumps(self.data, indent=2, sort_keys=True, default=_jsonable) + "\n"
        return "".join(line + "\n" for line in self.lines)


def _jsonable(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x, key=str)
    if isinstance(x, tuple):
        return list(x)
    return str(x)


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(path, text):
    if path:
        with open(path, "w") as fh:
            fh.write(text)


def _path_doc(p: Path) -> dict:
    return {"start": p.start, "steps": [list(e) for e in p.steps]}


def _path_text(p: Path) -> str:
    parts = [str(p.start)]
    for _, i, w in p.steps:
        parts.append(f"-{i}-> {w}")
    return " ".join(parts)


def _budget(args, default=None):
    return args.budget if args.budget is not None else default


def _even(d):
    return d + d % 2


# --------------------------------------------------------------------------
# solve

ROUTES = ("universal", "automaton", "zielonka", "all")


def cmd_solve(args) -> Report:
    text = _read(args.game)
    loader = {"auto": io.loads_any_game, "native": io.loads_game, "pgsolver": io.loads_pgsolver}[args.format]
    game = loader(text, complete=args.complete_dead_ends)
    n, d = len(game), _even(game.d)
    routes = ["universal", "automaton", "zielonka"] if args.route == "all" else [args.route]
    results, info = {}, {}
    for route in routes:
        start = time.perf_counter()
        if route == "zielonka":
            res = zielonka(game)
        else:
            tree = complete_universal_tree(n, d, budget=_budget(args, 1 << 16))
            if route == "universal":
                res = solve_parity_via_universal(game, graph_of_tree(tree))
            else:
                res = solve_parity_via_automaton(game, automaton_from_tree(tree))
            info[route] = {"tree_leaves": tree.size, **res.info}
        info.setdefault(route, {})["seconds"] = round(time.perf_counter() - start, 6)
        results[route] = res
    first = results[routes[0]]
    disagree = sorted((v for v in game.vertices if len({r.winner[v] for r in results.values()}) > 1), key=str)
    if disagree:
        raise AssertionError(f"routes disagree on vertices {disagree}")
    order = list(game.vertices)
    winners = {str(v): PLAYER_NAMES[first.winner[v]] for v in order}
    strategy_route = "zielonka" if "zielonka" in results else routes[0]
    sigma = results[strategy_route].eve_strategy
    rep = Report("solve", routes=routes, vertices=len(order), d=game.d, winners=winners,
                 eve_region=[v for v in order if first.winner[v] == EVE],
                 agreement=True if len(routes) > 1 else None, stats=info)
    if sigma is not None:
        mine = [v for v in order if v in game.eve and first.winner[v] == EVE]
        rep.data["eve_strategy"] = {str(v): list(sigma.choice[v]) for v in mine}
        if args.strategy_out:
            _write(args.strategy_out, io.dumps_strategy(sigma, mine))
    for v in order:
        rep.say(f"{PLAYER_NAMES[first.winner[v]].capitalize()} wins vertex {v}")
    if len(routes) > 1:
        rep.say(f"routes {', '.join(routes)} agree on all {len(order)} vertices")
    return rep


# --------------------------------------------------------------------------
# saturate


def cmd_saturate(args) -> Report:
    g = io.loads_graph(_read(args.graph))
    lifted = g.d % 2 == 1
    if lifted:
        g = g.lift(g.d + 1)
    sat = saturate(g)
    tree, leaf_of = tree_and_leaf_map(sat)
    text = io.dumps_graph(sat)
    _write(args.output, text)
    if args.tree_out:
        _write(args.tree_out, io.dumps_tree(tree))
    rep = Report("saturate", graph=io.graph_to_json(sat), tree=io.tree_to_json(tree),
                 leaf_of={str(v): leaf_of[v] for v in sat.vertices},
                 added_edges=len(sat.edges) - len(g.edges), lifted_d=lifted)
    if not args.output:
        rep.say(text.rstrip("\n"))
    rep.say(f"# added {len(sat.edges) - len(g.edges)} edges; tree has {tree.size} leaves: {tree.to_nested()}")
    return rep


# --------------------------------------------------------------------------
# mk


def _mk_tree(args):
    if args.minimal:
        stats = {}
        tree = minimal_universal_tree(args.n, args.d, budget=_budget(args, 1 << 16), stats=stats)
        return tree, stats
    return complete_universal_tree(args.n, args.d, budget=_budget(args, 1 << 22)), {}


def cmd_mk(args) -> Report:
    what = args.what
    if what == "tree":
        tree, stats = _mk_tree(args)
        text = io.dumps_tree(tree)
        rep = Report("mk", kind="tree", n=args.n, d=args.d, size=tree.size, tree=io.tree_to_json(tree),
                     construction="minimal" if args.minimal else "complete", search=stats)
        summary = f"# (n={args.n}, d={args.d}) universal tree with {tree.size} leaves: {tree.to_nested()}"
    elif what == "automaton":
        tree = io.loads_tree(_read(args.tree))
        aut = automaton_from_tree(tree)
        text = io.dumps_automaton(aut)
        rep = Report("mk", kind="automaton", d=aut.d, size=len(aut), deterministic=aut.deterministic,
                     automaton=io.automaton_to_json(aut))
        summary = f"# {len(aut)}-state {'deterministic' if aut.deterministic else 'nondeterministic'} automaton"
    else:
        if args.tree:
            g = graph_of_tree(io.loads_tree(_read(args.tree)))
        elif args.automaton:
            if args.n is None:
                raise UsageError("mk graph --automaton needs -n")
            aut = io.loads_automaton(_read(args.automaton))
            g = universal_graph_from_automaton(aut, args.n, aut.d)
        else:
            raise UsageError("mk graph needs --tree or --automaton")
        text = io.dumps_graph(g)
        rep = Report("mk", kind="graph", d=g.d, size=len(g), graph=io.graph_to_json(g))
        summary = f"# universal graph on {len(g)} vertices"
    _write(args.output, text)
    if not args.output:
        rep.say(text.rstrip("\n"))
    rep.say(summary)
    return rep


# --------------------------------------------------------------------------
# verify


def _check_sampling(args):
    if args.mode == "sample" and args.seed is None:
        raise UsageError("sample mode needs --seed")


def cmd_verify(args) -> Report:
    what, n, d = args.what, args.n, args.d
    _check_sampling(args)
    common = {"kind": what, "n": n, "d": d, "mode": args.mode, "seed": args.seed}
    if what == "tree":
        tree = io.loads_tree(_read(args.file))
        r = is_universal_tree(tree, n, d, budget=_budget(args, 1 << 22))
        ok, witness = r.ok, (io.tree_to_json(r.counterexample) if r.counterexample else None)
        rep = Report("verify", OK if ok else REFUTED, verified=ok, checked=r.checked, witness=witness, **common)
        rep.say(f"tree with {tree.size} leaves is {'' if ok else 'NOT '}({n},{d})-universal"
                f" ({r.checked} trees checked)")
        if not ok:
            rep.say(f"does not embed: {r.counterexample.to_nested()}")
        return rep
    if what == "graph":
        g = io.loads_graph(_read(args.file))
        mode = "exhaustive" if args.mode == "auto" else args.mode
        r = is_universal_graph(g, n, d, mode=mode, seed=args.seed, count=args.count,
                               budget=_budget(args, 1 << 22), jobs=args.jobs)
        common["mode"] = mode
        ok = r.ok
        witness = None
        if not ok:
            ce = r.counterexample
            witness = {"odd_cycle": _path_doc(ce)} if isinstance(ce, Path) else {"graph": io.graph_to_json(ce)}
        rep = Report("verify", OK if ok else REFUTED, verified=ok, checked=r.checked, witness=witness,
                     complete=mode != "sample", **common)
        rep.say(f"graph on {len(g)} vertices is {'' if ok else 'NOT '}({n},{d})-universal"
                f" ({mode}, {r.checked} graphs checked)")
        if not ok:
            if isinstance(r.counterexample, Path):
                rep.say(f"odd cycle: {_path_text(r.counterexample)}")
            else:
                rep.say("no homomorphism from:")
                rep.say(io.dumps_graph(r.counterexample).rstrip("\n"))
        return rep
    aut = io.loads_automaton(_read(args.file))
    witness_graph = io.loads_graph(_read(args.witness)) if args.witness else None
    r = is_separating(aut, n, d, mode=args.mode, seed=args.seed, count=args.count, witness=witness_graph,
                      budget=_budget(args, 1 << 22), jobs=args.jobs)
    ok = r.separating
    common["mode"] = r.mode
    witness = None
    if not ok:
        if r.failure == "accepted-odd-lasso":
            witness = {"failure": r.failure, "prefix": list(r.prefix), "loop": list(r.loop)}
        else:
            witness = {"failure": r.failure, "graph": io.graph_to_json(r.graph), "path": _path_doc(r.path)}
    rep = Report("verify", OK if ok else REFUTED, verified=ok, checked=r.checked, complete=r.complete,
                 witness=witness, **common)
    rep.say(f"{len(aut)}-state automaton is {'' if ok else 'NOT '}({n},{d})-separating"
            f" ({r.mode}, {r.checked} graphs checked{'' if r.complete else ', refutation only'})")
    if not ok:
        if r.failure == "accepted-odd-lasso":
            rep.say(f"accepts the odd lasso {list(r.prefix)} ({list(r.loop)})^omega")
        else:
            rep.say(f"rejects the path {_path_text(r.path)} of the parity graph:")
            rep.say(io.dumps_graph(r.graph).rstrip("\n"))
    return rep


# --------------------------------------------------------------------------
# theorem1


def cmd_theorem1(args) -> Report:
    rows = []
    status = OK
    for d in args.d:
        for n in args.n:
            led = theorem1_ledger(n, d, budget=_budget(args, 1 << 17))
            row = led.row()
            row["seconds"] = round(led.seconds, 3)
            rows.append(row)
            if not led.complete:
                status = max(status, OVER_BUDGET)
            elif not led.equal:
                status = REFUTED if status == OK else status
    rep = Report("theorem1", status, rows=rows)
    head = ("n", "d", "tree", "aut(det)", "aut(nondet)", "graph", "equal", "note")
    table = [head]
    for r in rows:
        cells = [r["universal_tree"], r["separating_automaton_det"], r["separating_automaton_nondet"],
                 r["universal_graph"]]
        note = "over budget: " + ", ".join(r["over_budget"]) if r["over_budget"] else ""
        table.append((str(r["n"]), str(r["d"]), *("-" if c is None else str(c) for c in cells),
                      "?" if r["equal"] is None else ("yes" if r["equal"] else "NO"), note))
    widths = [max(len(row[k]) for row in table) for k in range(len(head))]
    for row in table:
        rep.say("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return rep


# --------------------------------------------------------------------------
# gen-game


def cmd_gen_game(args) -> Report:
    rng = random.Random(args.seed)
    game = random_game(args.n, args.d, rng, max_out=args.max_out, exact=True)
    if args.format == "pgsolver":
        # one priority per vertex: keep the first outgoing priority on all of its edges
        first = {v: game.graph.out_edges(v)[0][1] for v in game.vertices}
        edges = frozenset((v, first[v], w) for v, _, w in game.graph.edges)
        game = type(game)(PriorityGraph(game.d, game.vertices, edges), game.eve)
        text = io.dumps_pgsolver(game)
    else:
        text = io.dumps_game(game)
    _write(args.output, text)
    rep = Report("gen-game", n=args.n, d=args.d, seed=args.seed, format=args.format, text=text)
    if not args.output:
        rep.say(text.rstrip("\n"))
    return rep


# --------------------------------------------------------------------------
# argument parsing


class UsageError(Exception):
    pass


def _positive(s):
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                   help="print one JSON document instead of text")
    p.add_argument("--budget", type=_positive, default=argparse.SUPPRESS,
                   help="cap on enumeration sizes")
    p.add_argument("--jobs", type=_positive, default=argparse.SUPPRESS,
                   help="worker processes for exhaustive checks (default: $UNIVPARITY_JOBS or 1)")
    return p


def build_parser() -> argparse.ArgumentParser:
    # separate copies: set_defaults on the top parser would otherwise leak into the subcommands
    parser = argparse.ArgumentParser(prog="univparity", parents=[_common()],
                                     description="Universal trees, separating automata, universal graphs "
                                                 "and parity game solving.")
    parser.set_defaults(json=False, budget=None, jobs=None)
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    p = sub.add_parser("solve", parents=[common], help="solve a parity game")
    p.add_argument("game", help="game file (native 'game n d' format or PGSolver), '-' for stdin")
    p.add_argument("--route", choices=ROUTES, default="zielonka")
    p.add_argument("--format", choices=("auto", "native", "pgsolver"), default="auto")
    p.add_argument("--strategy-out", metavar="FILE", help="write Eve's positional strategy here")
    p.add_argument("--complete-dead-ends", action="store_true",
                   help="make stuck vertices losing for their owner instead of rejecting the file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("saturate", parents=[common], help="saturate a parity graph and read off its tree")
    p.add_argument("graph")
    p.add_argument("-o", "--output", metavar="FILE", help="write the saturated graph here")
    p.add_argument("--tree-out", metavar="FILE", help="write the tree here")
    p.set_defaults(func=cmd_saturate)

    def add_mk(name, what_fixed=None):
        p = sub.add_parser(name, parents=[common],
                           help="build a universal tree, its automaton, or a universal graph")
        if what_fixed is None:
            p.add_argument("what", choices=("tree", "automaton", "graph"))
        else:
            p.set_defaults(what=what_fixed)
        kind = p.add_mutually_exclusive_group()
        kind.add_argument("--complete", action="store_true", help="full n-ary tree (default)")
        kind.add_argument("--minimal", action="store_true", help="smallest universal tree, by search")
        p.add_argument("-n", type=_positive)
        p.add_argument("-d", type=_positive)
        p.add_argument("--tree", metavar="FILE", help="input tree (mk automaton, mk graph)")
        p.add_argument("--automaton", metavar="FILE", help="input separating automaton (mk graph)")
        p.add_argument("-o", "--output", metavar="FILE")
        p.set_defaults(func=cmd_mk)

    add_mk("mk")
    add_mk("mk-automaton", "automaton")

    def add_verify(name, what_fixed=None):
        p = sub.add_parser(name, parents=[common], help="check universality or separation")
        if what_fixed is None:
            p.add_argument("what", choices=("tree", "graph", "separating"))
        else:
            p.set_defaults(what=what_fixed)
        p.add_argument("file")
        p.add_argument("-n", type=_positive, required=True)
        p.add_argument("-d", type=_positive, required=True)
        p.add_argument("--mode", default="auto",
                       choices=sorted(set(SEPARATION_MODES) | {"trees"}),
                       help="graph: exhaustive|trees|sample; separating: exhaustive|universal-witness|sample|auto")
        p.add_argument("--seed", type=int, help="required in sample mode")
        p.add_argument("--count", type=_positive, default=1000, help="samples in sample mode")
        p.add_argument("--witness", metavar="FILE", help="universal graph for universal-witness mode")
        p.set_defaults(func=cmd_verify)

    add_verify("verify")
    add_verify("verify-separating", "separating")

    p = sub.add_parser("theorem1", parents=[common],
                       help="minimal sizes of the three objects, side by side")
    p.add_argument("-n", type=_positive, nargs="+", required=True)
    p.add_argument("-d", type=_positive, nargs="+", required=True)
    p.set_defaults(func=cmd_theorem1)

    p = sub.add_parser("gen-game", parents=[common], help="emit a seeded random game")
    p.add_argument("-n", type=_positive, required=True)
    p.add_argument("-d", type=_positive, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-out", type=_positive, default=3)
    p.add_argument("--format", choices=("native", "pgsolver"), default="native")
    p.add_argument("-o", "--output", metavar="FILE")
    p.set_defaults(func=cmd_gen_game)
    return parser


def _validate(args):
    if args.command in ("mk", "mk-automaton"):
        if args.what == "tree" and (args.n is None or args.d is None):
            raise UsageError("mk tree needs -n and -d")
        if args.what == "automaton" and not args.tree:
            raise UsageError("mk automaton needs --tree FILE")
    if args.command in ("verify", "verify-separating"):
        allowed = {"tree": {"auto"}, "graph": {"auto", "exhaustive", "trees", "sample"},
                   "separating": set(SEPARATION_MODES)}[args.what]
        if args.mode not in allowed:
            raise UsageError(f"verify {args.what} does not take --mode {args.mode}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        rep = args.func(args)
    except UsageError as exc:
        return _fail(args, USAGE, "usage", str(exc))
    except ParseError as exc:
        return _fail(args, USAGE, "parse", str(exc), line=exc.line)
    except (IncompatiblePriorities, ValueError, OSError) as exc:
        if isinstance(exc, PreconditionError):
            return _precondition(args, exc)
        return _fail(args, USAGE, "usage", str(exc))
    except BudgetExceeded as exc:
        return _fail(args, OVER_BUDGET, "budget", str(exc), count=exc.count, cap=exc.cap)
    sys.stdout.write(rep.render(args.json))
    return rep.status


def _precondition(args, exc):
    w = exc.witness
    extra = {}
    if isinstance(w, Path):
        extra["odd_cycle"] = _path_doc(w)
        msg = f"{exc}: {_path_text(w)}"
    else:
        msg = str(exc)
    return _fail(args, REFUTED, "precondition", msg, **extra)


def _fail(args, code, kind, message, **extra):
    if getattr(args, "json", False):
        rep = Report(args.command, code, error={"kind": kind, "message": message, **extra})
        sys.stdout.write(rep.render(True))
    print(f"univparity {args.command}: {message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
