"""Command line: play, gen-setups, experiment, report."""

from __future__ import annotations

import argparse
import logging
import random
import sys
from pathlib import Path

from ..rules import ConfigError, GameConfig, new_game
from .common import AgentConfig, derive_seed, play_game, timing_summary
from .config import load_config
from .experiment import RecordsError, run_experiment
from .report import build_report, load_records, render_machine, render_text
from .setups import LibraryError, SetupLibrary, build_setup_library, make_setup

log = logging.getLogger("pandemic_rhea")


def _add_agent_args(p: argparse.ArgumentParser) -> None:
    d = AgentConfig()
    p.add_argument("--agent", choices=("hpa", "rpa", "rhea"), default="rhea")
    p.add_argument("--fitness", default=d.fitness, help="e.g. f_od, mean(f_oa,f_cm), p(mean(f_oa,f_cm))")
    p.add_argument("--c-p", type=float, default=d.c_p)
    p.add_argument("--literal-foa", action="store_true")
    p.add_argument("--horizon", type=int, default=d.horizon)
    p.add_argument("--generations", type=int, default=d.generations)
    p.add_argument("--repetitions", type=int, default=d.repetitions)
    p.add_argument("--mutation-start", type=float, default=d.mutation_start)
    p.add_argument("--mutation-end", type=float, default=d.mutation_end)


def _agent_config(a: argparse.Namespace) -> AgentConfig:
    return AgentConfig(
        kind=a.agent,
        fitness=a.fitness,
        c_p=a.c_p,
        literal_foa=a.literal_foa,
        horizon=a.horizon,
        generations=a.generations,
        repetitions=a.repetitions,
        mutation_start=a.mutation_start,
        mutation_end=a.mutation_end,
    )


def cmd_play(a: argparse.Namespace) -> int:
    if a.library:
        lib = SetupLibrary.load(a.library)
        matches = [e for e in lib.setups if e.id == a.setup_id] if a.setup_id else lib.medoids()[:1]
        if not matches:
            raise LibraryError(f"setup {a.setup_id!r} not in {a.library}")
        setup = matches[0].game_state()
        print(f"setup {matches[0].id} from {a.library}")
    elif a.random_roles:
        setup = make_setup(a.seed, a.players, a.epidemics, "random")
    else:
        setup = new_game(GameConfig(a.players, a.epidemics, GameConfig().roles[:a.players], a.seed))
    print("roles: " + ", ".join(r.name.lower() for r in setup.roles))
    agent = _agent_config(a).make(random.Random(derive_seed(a.seed, "agent")))
    res = play_game(setup, agent, derive_seed(a.seed, "game"), log=print)
    s = res.state
    cause = f" ({s.loss_cause.value})" if s.loss_cause else ""
    t = timing_summary(res.decision_times)
    print(f"result: {s.status.value}{cause} after {s.turn} turns, {s.n_cured} cured, {s.outbreaks} outbreaks")
    if t["decisions"]:
        print(f"decisions: {t['decisions']}, mean {t['mean']:.3f}s, max {t['max']:.3f}s")
    return 0


def cmd_gen_setups(a: argparse.Namespace) -> int:
    def progress(i, n):
        if i % max(1, n // 20) == 0 or i == n:
            log.info("rated %d/%d candidates", i, n)

    lib = build_setup_library(
        a.candidates, a.trials, a.k, players=a.players, epidemics=a.epidemics, seed=a.seed,
        top_fraction=a.top_fraction, roles=a.roles, jobs=a.jobs, progress=progress,
    )
    lib.save(a.out)
    med = lib.medoids()
    mean = sum(e.win_ratio for e in med) / len(med)
    print(f"wrote {a.out}: {len(lib.setups)} candidates, {len(lib.selected())} selected, {len(med)} medoids")
    print(f"medoid HPA win ratio: mean {100 * mean:.1f}% "
          f"(range {100 * min(e.win_ratio for e in med):.1f}%..{100 * max(e.win_ratio for e in med):.1f}%)")
    return 0


def cmd_experiment(a: argparse.Namespace) -> int:
    config = load_config(a.config)

    def progress(i, n, rec):
        log.info("game %d/%d: %s", i, n, rec.get("outcome"))

    out = a.out or config.run.out
    records = run_experiment(config, out=out, jobs=a.jobs, resume=a.resume, overwrite=a.overwrite, progress=progress)
    wins = sum(r.get("outcome") == "won" for r in records)
    print(f"wrote {out}: {len(records)} games, {wins} won")
    return 0


def cmd_report(a: argparse.Namespace) -> int:
    report = build_report(load_records(a.inputs))
    text = render_machine(report) if a.format == "machine" else render_text(report)
    if a.out:
        Path(a.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pandemic-rhea", description="Pandemic engine, agents and experiment harness")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("play", help="play one game with a turn-by-turn log")
    _add_agent_args(p)
    p.add_argument("--players", type=int, default=4)
    p.add_argument("--epidemics", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random-roles", action="store_true", help="sample roles instead of the fixed order")
    p.add_argument("--library", help="play a stored setup instead of a fresh one")
    p.add_argument("--setup-id", help="setup id within --library (default: first medoid)")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("gen-setups", help="build a setup library ranked by HPA win ratio")
    p.add_argument("--candidates", type=int, default=10_000)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--players", type=int, default=4)
    p.add_argument("--epidemics", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--top-fraction", type=float, default=0.1)
    p.add_argument("--roles", choices=("fixed", "random"), default="fixed")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_setups)

    p = sub.add_parser("experiment", help="play a batch of games from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="records file (default: run.out from the config)")
    p.add_argument("--jobs", type=int, help="worker processes (default: run.jobs from the config)")
    p.add_argument("--resume", action="store_true", help="continue an interrupted records file")
    p.add_argument("--overwrite", action="store_true", help="replace an existing records file")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("report", help="summarize one or more records files")
    p.add_argument("--in", dest="inputs", nargs="+", required=True)
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("--out", help="write to a file instead of stdout")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    a = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(message)s")
    try:
        return a.func(a)
    except (ConfigError, LibraryError, RecordsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
