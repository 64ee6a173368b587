"""Command-line front end.

Exit status: 0 success, 1 validation error (bad input, failed reproduction),
2 analysis limitation (no pure equilibrium, enumeration cap exceeded).  On a
non-zero exit a one-line JSON reason is written to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import generators as gen
from .dynamics import (
    enumerate_pne,
    find_improvement_cycle,
    format_number,
    format_profile,
    format_strategy,
    run_dynamics,
)
from .game import (
    DEFAULT_ENUMERATION_CAP,
    EnumerationCapExceeded,
    GameError,
    load_game,
    serialize_game,
    to_number,
)
from .mediators import (
    AXIOMS,
    Mediator,
    check_axioms,
    display_distribution,
    empirical_distribution,
    shapley_sample_many,
    total_variation,
)
from .metrics import UtilityConfig, describe, price_of_anarchy, results_to_csv, user_price_of_anarchy
from .reproduce import reproduce_paper, rows_to_csv
from .upoa_numeric import curve_to_csv, min_utility_curve

GENERATORS = ("example1", "impossibility", "tight-poa", "prop6", "prop7", "random")

COLUMNS = {
    "mediate": "user, outcome, probability",
    "sample-check": "user, outcome, exact, empirical, tv_distance",
    "axioms": "axiom, verdict, user, profile, detail",
    "dynamics": "step, player, from, to, payoff_delta, potential_delta",
    "pne": "profile",
    "poa": "game_id, mediator, metric, optimum, worst_eq, ratio",
    "upoa": "game_id, mediator, metric, optimum, worst_eq, ratio",
    "upoa-curve": "N, U_star, upoa_bound, residual",
    "generate": "(writes a JSON game file)",
    "reproduce-paper": "check, expected, observed, status",
}

EPILOG = "CSV columns per subcommand:\n" + "".join(
    f"  {name:<16} {cols}\n" for name, cols in COLUMNS.items()
)


class AnalysisLimit(Exception):
    def __init__(self, reason: str, message: str):
        self.reason = reason
        super().__init__(message)


def _add_common(p: argparse.ArgumentParser, game=True, mediator=True):
    if game:
        src = p.add_mutually_exclusive_group()
        src.add_argument("--game", metavar="PATH", help="game file (JSON)")
        src.add_argument("--generator", choices=GENERATORS, help="built-in instance")
        p.add_argument("--n", type=int, default=3, help="players for tight-poa / random")
        p.add_argument("--x", default="0.9")
        p.add_argument("--y", default="0.5")
        p.add_argument("--eps", default="0.01")
        p.add_argument("--delta", default="0.01")
        p.add_argument("--personalized", action="store_true", help="random: budgeted item sets")
    if mediator:
        p.add_argument("--mediator", default="shapley", choices=[m.value for m in Mediator])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shapley-mediator",
        description="Mediators, equilibria and efficiency bounds for recommendation games.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add(name, help):
        return subparsers.add_parser(name, help=help, epilog=f"CSV columns: {COLUMNS[name]}")

    p = add("mediate", help="display distribution for every user")
    _add_common(p)
    p.add_argument("--profile", required=True, help="comma list, e.g. l2,l3 (sets as a+b)")

    p = add("sample-check", help="compare the sampler with the exact distribution")
    _add_common(p, mediator=False)
    p.add_argument("--profile", required=True)
    p.add_argument("--draws", type=int, default=1_000_000)

    p = add("axioms", help="fairness / efficiency / completeness checks")
    _add_common(p)
    p.add_argument("--games", type=int, default=100, help="random games when no --game")
    p.add_argument("--trials", type=int, default=20, help="profiles per game")

    p = add("dynamics", help="better-response dynamics trace")
    _add_common(p)
    p.add_argument("--profile", help="initial profile (default: first in menu order)")
    p.add_argument("--schedule", choices=("round-robin", "random"), default="round-robin")
    p.add_argument("--max-steps", type=int, default=10_000)
    p.add_argument("--best-response", action="store_true")

    p = add("pne", help="enumerate pure Nash equilibria")
    _add_common(p)

    p = add("poa", help="price of anarchy (welfare)")
    _add_common(p)

    p = add("upoa", help="user price of anarchy")
    _add_common(p)
    p.add_argument("--plain", default="0", help="utility of showing nothing, in [0,1]")

    p = add("upoa-curve", help="minimum single-user utility for N = 1..n-max")
    _add_common(p, game=False, mediator=False)
    p.add_argument("--n-max", type=int, default=1000)

    p = add("generate", help="write a built-in instance as a game file")
    _add_common(p, mediator=False)

    p = add("reproduce-paper", help="run every worked example and bound")
    _add_common(p, game=False, mediator=False)
    p.add_argument("--n-max", type=int, default=1000)
    return parser


def _load(args):
    if args.game:
        try:
            return load_game(args.game)
        except OSError as exc:
            raise GameError(f"cannot read game file: {exc.strerror}", args.game) from None
    name = args.generator or "example1"
    if name == "example1":
        return gen.gen_example1()
    if name == "impossibility":
        return gen.gen_impossibility(to_number(args.x, "--x"), to_number(args.y, "--y"))
    if name == "tight-poa":
        return gen.gen_tight_poa(args.n)
    if name == "prop6":
        return gen.gen_prop6(to_number(args.eps, "--eps"))
    if name == "prop7":
        return gen.gen_prop7(to_number(args.delta, "--delta"), to_number(args.eps, "--eps"))
    rng = np.random.default_rng(args.seed)
    return gen.random_game(rng, n_players=args.n, personalized=args.personalized)


def _table(args, header, rows, extra=None) -> str:
    meta = {"command": args.command, "seed": args.seed}
    if getattr(args, "mediator", None):
        meta["mediator"] = args.mediator
    if extra:
        meta.update(extra)
    if args.format == "json":
        return json.dumps({**meta, "columns": header, "rows": rows}, indent=2) + "\n"
    import csv
    import io

    buf = io.StringIO()
    buf.write("# " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_mediate(args):
    game = _load(args)
    profile = game.parse_profile(args.profile)
    rows = []
    for u in game.users:
        dist = display_distribution(game, args.mediator, profile, u)
        for p, x in zip(game.players, dist.per_player):
            rows.append([u, p.name, format_number(x)])
        rows.append([u, "none", format_number(dist.none_prob)])
    return _table(args, ["user", "outcome", "probability"], rows, {"profile": format_profile(profile)})


def cmd_sample_check(args):
    game = _load(args)
    profile = game.parse_profile(args.profile)
    rng = np.random.default_rng(args.seed)
    rows = []
    for u in game.users:
        values = game.user_vector(profile, u)
        exact = display_distribution(game, Mediator.SHAPLEY, profile, u).as_tuple()
        draws = shapley_sample_many(values, rng, args.draws)
        emp = empirical_distribution(draws, game.n_players)
        tv = total_variation(exact, emp)
        names = [p.name for p in game.players] + ["none"]
        for name, e, f in zip(names, exact, emp):
            rows.append([u, name, format_number(e), f"{f:.6f}", f"{tv:.6f}"])
    return _table(
        args, ["user", "outcome", "exact", "empirical", "tv_distance"], rows,
        {"draws": args.draws, "profile": format_profile(profile)},
    )


def cmd_axioms(args):
    rng = np.random.default_rng(args.seed)
    if args.game or args.generator:
        games = [_load(args)]
    else:
        games = [gen.random_game(rng, grid=10) for _ in range(args.games)]
    report = check_axioms(args.mediator, games, args.trials, rng)
    rows = []
    for axiom in AXIOMS:
        cx = report.counterexamples.get(axiom)
        if cx is None:
            rows.append([axiom, "pass", "", "", ""])
        else:
            rows.append([axiom, "counterexample", cx.user, format_profile(cx.profile), cx.detail])
    return _table(args, ["axiom", "verdict", "user", "profile", "detail"], rows, {"checked": report.checked})


def cmd_dynamics(args):
    game = _load(args)
    initial = game.parse_profile(args.profile) if args.profile else tuple(
        s[0] for s in game.strategy_spaces()
    )
    trace = run_dynamics(
        game, args.mediator, initial, schedule=args.schedule, seed=args.seed,
        max_steps=args.max_steps, best=args.best_response,
    )
    rows = [
        [k, s.player, format_strategy(s.old), format_strategy(s.new), format_number(s.payoff_delta),
         "" if s.potential_delta is None else format_number(s.potential_delta)]
        for k, s in enumerate(trace.steps, start=1)
    ]
    text = _table(
        args, ["step", "player", "from", "to", "payoff_delta", "potential_delta"], rows,
        {"converged": trace.converged, "terminal": format_profile(trace.terminal)},
    )
    if not trace.converged:
        _emit(args, text)
        raise AnalysisLimit("not_converged", f"no convergence within {args.max_steps} steps")
    return text


def cmd_pne(args):
    game = _load(args)
    eqs = enumerate_pne(game, args.mediator, cap=args.cap)
    text = _table(args, ["profile"], [[format_profile(p)] for p in eqs], {"count": len(eqs)})
    if not eqs:
        _emit(args, text)
        cycle = find_improvement_cycle(game, args.mediator)
        witness = " -> ".join(f"({format_profile(p)})" for p in cycle or [])
        raise AnalysisLimit("no_pne", f"no pure equilibrium; cycle {witness}")
    return text


def _poa_report(args, result):
    if args.format == "json":
        body = {
            "command": args.command, "seed": args.seed, "mediator": result.mediator,
            "metric": result.metric, "optimum": format_number(result.optimum),
            "worst_eq": None if result.worst_eq is None else format_number(result.worst_eq),
            "ratio": "inf" if not result.bounded else format_number(result.ratio),
            "summary": describe(result),
        }
        text = json.dumps(body, indent=2) + "\n"
    else:
        text = f"# command={args.command} seed={args.seed}\n" + results_to_csv([(args.game or args.generator or "example1", result)])
    if not result.bounded:
        _emit(args, text)
        raise AnalysisLimit("no_pne", describe(result))
    return text


def cmd_poa(args):
    return _poa_report(args, price_of_anarchy(_load(args), args.mediator, cap=args.cap))


def cmd_upoa(args):
    config = UtilityConfig(to_number(args.plain, "--plain"))
    return _poa_report(args, user_price_of_anarchy(_load(args), args.mediator, config, cap=args.cap))


def cmd_upoa_curve(args):
    text = curve_to_csv(min_utility_curve(args.n_max))
    if args.format == "json":
        import csv
        import io

        rows = list(csv.reader(io.StringIO(text)))
        return json.dumps({"command": args.command, "seed": args.seed, "columns": rows[0], "rows": rows[1:]}, indent=2) + "\n"
    return f"# command={args.command} seed={args.seed}\n" + text


def cmd_generate(args):
    return serialize_game(_load(args)) + "\n"


def cmd_reproduce(args):
    rows = reproduce_paper(curve_n_max=args.n_max, seed=args.seed)
    text = rows_to_csv(rows)
    if args.format == "json":
        text = json.dumps([r.__dict__ for r in rows], indent=2) + "\n"
    failed = [r.check for r in rows if not r.passed]
    if failed:
        _emit(args, text)
        raise GameError(f"{len(failed)} reproduction check(s) failed: {failed}")
    return text


COMMANDS = {
    "mediate": cmd_mediate,
    "sample-check": cmd_sample_check,
    "axioms": cmd_axioms,
    "dynamics": cmd_dynamics,
    "pne": cmd_pne,
    "poa": cmd_poa,
    "upoa": cmd_upoa,
    "upoa-curve": cmd_upoa_curve,
    "generate": cmd_generate,
    "reproduce-paper": cmd_reproduce,
}


def _fail(code: int, reason: str, message: str) -> int:
    sys.stderr.write(json.dumps({"status": code, "reason": reason, "message": message}) + "\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = COMMANDS[args.command](args)
    except AnalysisLimit as exc:
        return _fail(2, exc.reason, str(exc))
    except EnumerationCapExceeded as exc:
        return _fail(2, "cap_exceeded", str(exc))
    except (GameError, ValueError) as exc:
        return _fail(1, "validation_error", str(exc))
    _emit(args, text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
