"""teashare command line: simulate, bound, search, limit, duality, verify.

Results go to stdout as JSON (or a plain table), diagnostics to stderr.
Exit codes: 0 ok, 1 a verify property failed, 2 unreadable input,
3 invalid move, 4 a needed source/target vertex is missing, 5 any other error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import __version__
from .bounds import (
    BoundError,
    EXHAUSTIVE_LIMIT,
    check_feasible,
    distance_bound,
    phi_bound,
    support_bound,
)
from .dynamics import (
    InvalidMoveError,
    Weights,
    apply_adjoint_sequence,
    apply_edge_quasi_sequence,
    apply_quasi_sequence,
    as_sequence,
    inner_product,
    trace_sequence,
)
from .generators import make_rng, random_connected_graph, random_rational, random_sequence, random_weights
from .graph import GraphError
from .io import (
    InputError,
    Instance,
    dumps,
    graph_from_json,
    is_quasi_file,
    load_instance,
    load_json,
    moves_from_json,
    quasi_from_json,
    weights_from_json,
)
from .limits import family_components, iterate_to_convergence, limit_distribution
from .search import ALL_CONNECTED, EDGES_ONLY, SearchConfig, SearchError, search_optimal
from .verify import SUITES, run_suites

EXIT_VERIFY, EXIT_PARSE, EXIT_MOVE, EXIT_MISSING, EXIT_OTHER = 1, 2, 3, 4, 5


class MissingVertex(Exception):
    pass


# ---------------------------------------------------------------- input helpers


def read_instance(args, need_weights: bool = True) -> Instance:
    if args.instance:
        inst = load_instance(args.instance)
        if args.weights:
            inst.weights = weights_from_json(inst.graph, load_json(args.weights))
        return inst
    if not args.graph:
        raise InputError("give --instance FILE, or --graph FILE with --weights FILE")
    g = graph_from_json(load_json(args.graph))
    if args.weights:
        return Instance(g, weights_from_json(g, load_json(args.weights)))
    if need_weights:
        raise InputError("--weights FILE is required with --graph")
    return Instance(g, Weights.uniform(g, 0))


def pick(args, inst: Instance, key: str) -> str:
    name = getattr(args, key, None) or getattr(inst, key)
    if name is None:
        raise MissingVertex(f"this command needs a {key} vertex: pass --{key} or set it in the instance")
    if name not in inst.graph:
        raise MissingVertex(f"{key} {name!r} is not a vertex of the graph")
    return name


# ---------------------------------------------------------------- output


def to_float(obj):
    """Mirror of ``obj`` with every rational replaced by a float (other leaves dropped)."""
    if isinstance(obj, Fraction):
        return float(obj)
    if isinstance(obj, Weights):
        return {k: float(x) for k, x in obj.items()}
    if isinstance(obj, dict):
        out = {k: to_float(x) for k, x in obj.items()}
        return {k: x for k, x in out.items() if x is not None and x != {} and x != []}
    if isinstance(obj, (list, tuple)):
        out = [to_float(x) for x in obj]
        return out if any(x is not None for x in out) else None
    return None


def render_table(obj, indent: str = "") -> list[str]:
    from .io import _plain

    plain = _plain(obj)
    lines = []
    if isinstance(plain, dict):
        width = max((len(str(k)) for k in plain), default=0)
        for k, x in plain.items():
            if isinstance(x, dict) and x:
                lines.append(f"{indent}{k}:")
                lines.extend(render_table(x, indent + "  "))
            elif isinstance(x, list) and x and all(isinstance(y, dict) for y in x):
                lines.append(f"{indent}{k}:")
                for i, y in enumerate(x):
                    lines.append(f"{indent}  [{i}]")
                    lines.extend(render_table(y, indent + "    "))
            else:
                lines.append(f"{indent}{str(k).ljust(width)}  {_cell(x)}")
    else:
        lines.append(indent + _cell(plain))
    return lines


def _cell(x) -> str:
    if isinstance(x, list):
        return " ".join("{" + ",".join(map(str, y)) + "}" if isinstance(y, list) else str(y) for y in x)
    if isinstance(x, bool):
        return "true" if x else "false"
    return "-" if x is None else str(x)


def emit(args, result: dict) -> None:
    if args.float:
        result = dict(result)
        result["approximate_float"] = to_float(result)
    if args.format == "table":
        print("\n".join(render_table(result)))
    else:
        print(dumps(result))


# ---------------------------------------------------------------- commands


def cmd_simulate(args) -> int:
    inst = read_instance(args)
    w = inst.weights
    raw = load_json(args.moves) if args.moves else []
    out: dict = {"initial": w}
    if is_quasi_file(raw):
        items = quasi_from_json(raw)
        qs = apply_edge_quasi_sequence(w, items)
        states = apply_quasi_sequence(w, qs)
        steps = [{"edge": [q.x, q.y], "s": q.amount} for q in qs]
    else:
        seq = as_sequence(inst.graph, moves_from_json(raw))
        states = trace_sequence(w, seq)
        steps = [{"move": list(m.vertices)} for m in seq]
    final = states[-1]
    out["final"] = final
    out["total_initial"] = w.total()
    out["total_final"] = final.total()
    out["conserved"] = w.total() == final.total()
    target = args.target or inst.target
    if target is not None:
        if target not in inst.graph:
            raise MissingVertex(f"target {target!r} is not a vertex of the graph")
        out["target"] = target
        out["target_value"] = final[target]
    if args.trace:
        for step, state in zip(steps, states[1:]):
            step["state"] = state
        out["trace"] = steps
    emit(args, out)
    return 0


def cmd_bound(args) -> int:
    inst = read_instance(args)
    g, w = inst.graph, inst.weights
    out: dict = {"kind": args.kind}
    if args.kind == "distance":
        r, v = pick(args, inst, "source"), pick(args, inst, "target")
        out["value"] = distance_bound(g, r, v, w.total())
        out["witness"] = {"source": r, "target": v, "distance": g.distance(r, v), "total": w.total()}
        if len(g) <= EXHAUSTIVE_LIMIT:
            rep = check_feasible(g, r, w)
            # the bound is only certified for source-feasible weights
            out["source_feasible"] = rep.feasible
            out["worst_subset"] = list(rep.worst_subset)
    elif args.kind == "phi":
        v = pick(args, inst, "target")
        cert = phi_bound(g, v, w)
        out["value"] = cert.value
        out["witness"] = {"target": v, "start": cert.start, "enumeration": list(cert.enumeration), "ell": cert.ell}
    elif args.kind == "feasibility":
        r = pick(args, inst, "source")
        rep = check_feasible(g, r, w)
        out["feasible"] = rep.feasible
        out["value"] = rep.slack
        out["worst_subset"] = list(rep.worst_subset)
        out["witness"] = {"source": r, "subsets_checked": rep.checked, "status": rep.status}
    else:
        v = pick(args, inst, "target")
        out["value"] = support_bound(g, v, w)
        out["witness"] = {"target": v, "support": [x for x in g.vertices if w[x] > 0], "max_weight": max(w.values)}
    emit(args, out)
    return 0


def cmd_search(args) -> int:
    inst = read_instance(args)
    v = pick(args, inst, "target")
    cfg = SearchConfig(
        max_depth=args.depth,
        universe=args.universe,
        prune_phi=not args.no_prune,
        prune_feasibility=args.feasibility_prune,
        dedup=not args.no_dedup,
        max_move_size=args.max_move_size,
        workers=args.workers,
        node_limit=args.node_limit,
    )
    res = search_optimal(inst.graph, inst.weights, v, cfg)
    out = {
        "best": res.best_value,
        "witness": [list(m.vertices) for m in res.witness],
        "explored": res.explored,
        "pruned": res.pruned,
        "phi_bound": res.bound_certificate.value,
        "optimal_within_depth": res.max_depth if res.exhaustive else None,
        "exhaustive": res.exhaustive,
        "target": v,
        "universe": args.universe,
        "universe_size": res.universe_size,
    }
    if res.feasibility_cap is not None:
        out["feasibility_cap"] = res.feasibility_cap
    emit(args, out)
    return 0


def cmd_limit(args) -> int:
    inst = read_instance(args)
    g, w = inst.graph, inst.weights
    fam = as_sequence(g, moves_from_json(load_json(args.family)))
    if not fam:
        raise InputError("the family file lists no moves")
    lim = limit_distribution(g, w, fam)
    rep = iterate_to_convergence(g, w, fam, repeats=args.repeats, tol=args.tol)
    out = {
        "limit": lim,
        "components": [list(c) for c in family_components(g, fam)],
        "cycles_to_tol": rep.cycles,
        "converged": rep.converged,
        "tol": args.tol,
        "certified_envelope": rep.envelope,
    }
    emit(args, out)
    return 0


def _random_duality_case(seed: int):
    rng = make_rng(seed)
    g = random_connected_graph(rng, int(rng.integers(2, 8)), extra=0.3)
    w = random_weights(rng, g)
    seq = random_sequence(rng, g, int(rng.integers(1, 9)), edge_prob=0.3)
    return g, w, seq


def cmd_duality(args) -> int:
    if args.instance or args.graph:
        inst = read_instance(args)
        g, w = inst.graph, inst.weights
        seq = as_sequence(g, moves_from_json(load_json(args.moves))) if args.moves else []
        source = "files"
    else:
        g, w, seq = _random_duality_case(args.seed)
        source = f"random (seed {args.seed})"
    if args.cost:
        c = weights_from_json(g, load_json(args.cost), signed=True)
    else:
        rng = make_rng(args.seed, 1)
        c = Weights(g, [random_rational(rng) * (1 if rng.random() < 0.7 else -1) for _ in g.vertices], signed=True)
    from .dynamics import apply_sequence

    forward = apply_sequence(w, seq)
    backward = apply_adjoint_sequence(c, seq)
    lhs, rhs = inner_product(c, forward), inner_product(w, backward)
    out = {
        "lhs": lhs,
        "rhs": rhs,
        "equal": lhs == rhs,
        "instance": source,
        "moves": [list(m.vertices) for m in seq],
        "w": w,
        "c": c,
    }
    emit(args, out)
    return 0 if lhs == rhs else EXIT_OTHER


def cmd_verify(args) -> int:
    results = run_suites(args.suite, seed=args.seed, trials=args.trials)
    failed = [r for r in results if not r.ok]
    out = {
        "suite": args.suite,
        "seed": args.seed,
        "trials": args.trials,
        "passed": not failed,
        "properties": [r.as_dict() for r in results],
    }
    emit(args, out)
    for r in failed:
        print(f"FAILED: {r.suite} / {r.name} ({r.failed} of {r.checked})", file=sys.stderr)
    return EXIT_VERIFY if failed else 0


# ---------------------------------------------------------------- parser


def _rational_arg(text: str) -> Fraction:
    from .rational import to_rational

    try:
        q = to_rational(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return q


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda x: argparse.SUPPRESS) if suppress else (lambda x: x)
    p.add_argument("--instance", metavar="PATH", default=d(None), help="instance JSON (graph, weights, target, source)")
    p.add_argument("--graph", metavar="PATH", default=d(None), help="graph JSON")
    p.add_argument("--weights", metavar="PATH", default=d(None), help="weights JSON")
    p.add_argument("--format", choices=("json", "table"), default=d("json"))
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--trials", type=int, default=d(100))
    p.add_argument("--float", action="store_true", default=d(False), help="add approximate decimal values")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="teashare", description="Exact sharing-move dynamics on graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="apply a move file")
    p.add_argument("moves", nargs="?", help="JSON array of moves, or of {edge, s} quasi moves")
    p.add_argument("--target", help="also report this vertex's final value")
    p.add_argument("--trace", action="store_true", help="print every intermediate state")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bound", parents=[common], help="upper bounds and feasibility")
    p.add_argument("--kind", choices=("distance", "phi", "feasibility", "dual"), default="phi")
    p.add_argument("--source")
    p.add_argument("--target")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("search", parents=[common], help="best target value within a depth")
    p.add_argument("--target")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--universe", choices=(ALL_CONNECTED, EDGES_ONLY), default=ALL_CONNECTED)
    p.add_argument("--max-move-size", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--node-limit", type=int, help="stop early; the result is then marked non-exhaustive")
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--no-dedup", action="store_true")
    p.add_argument("--feasibility-prune", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("limit", parents=[common], help="limit of a move family repeated forever")
    p.add_argument("family", help="JSON array of moves")
    p.add_argument("--repeats", type=int, default=10_000)
    p.add_argument("--tol", type=_rational_arg, default=Fraction(1, 10**9))
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("duality", parents=[common], help="check <c, seq(w)> = <w, reversed seq(c)>")
    p.add_argument("moves", nargs="?")
    p.add_argument("--cost", metavar="PATH", help="cost vector JSON (may be signed); random if omitted")
    p.set_defaults(func=cmd_duality)

    p = sub.add_parser("verify", parents=[common], help="run the seeded property suites")
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvalidMoveError as exc:
        where = "" if exc.index is None else f" (move index {exc.index})"
        print(f"invalid move{where}: {exc}", file=sys.stderr)
        return EXIT_MOVE
    except MissingVertex as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (GraphError, BoundError, SearchError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
