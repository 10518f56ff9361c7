"""Command-line front end: solve one instance, benchmark a corpus, generate
benchmark families, or launch the HTTP service."""

from __future__ import annotations

import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple

import click

from .engine import EngineConfig, Verdict, solve
from .families import FAMILY_NAMES, gen_family
from .prefix import Quantifier
from .qcir import QcirParseError, parse_qcir
from .runner import CSV_HEADER, RunRecord, parse_config, run_file

EXIT_TRUE = 10
EXIT_FALSE = 20
EXIT_UNKNOWN = 30
EXIT_ERROR = 1


@click.group()
def main() -> None:
    """Expansion-based QBF solver with strategy learning."""


@main.command("solve")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--k", "k", type=int, default=64, show_default=True,
              help="Learn every K iterations.")
@click.option("--no-learn", is_flag=True, help="Disable learning (plain refinement).")
@click.option("--forgetful", is_flag=True, help="Do not accumulate learned strategies.")
@click.option("--time-limit", type=float, default=None, help="Time limit in seconds.")
@click.option("--stats", "show_stats", is_flag=True, help="Print solver statistics.")
def cmd_solve(path: str, k: int, no_learn: bool, forgetful: bool,
              time_limit: Optional[float], show_stats: bool) -> None:
    """Solve one QCIR file. Exit code: 10 TRUE, 20 FALSE, 30 UNKNOWN, 1 error."""
    if no_learn and forgetful:
        click.echo("error: --forgetful requires learning", err=True)
        sys.exit(EXIT_ERROR)
    try:
        cfg = EngineConfig(learn_interval=k, learning_enabled=not no_learn,
                           accumulate=not forgetful, time_limit=time_limit)
        with open(path) as fh:
            text = fh.read()
        game, table = parse_qcir(text)
    except (OSError, QcirParseError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_ERROR)

    result = solve(table, game, cfg)
    click.echo(f"s {result.verdict}")
    if result.winning_move is not None and game.prefix.blocks:
        lits = []
        for v in game.prefix.blocks[0].variables:
            name = table.name_of(v)
            lits.append(name if result.winning_move.get(v) else f"-{name}")
        click.echo("v " + " ".join(lits))
    if show_stats:
        s = result.stats
        click.echo(f"c iterations {s.iterations}")
        click.echo(f"c refinements {s.refinements}")
        click.echo(f"c learn_calls {s.learn_calls}")
        click.echo(f"c kept_strategies {s.kept_strategies}")
    sys.exit({Verdict.TRUE: EXIT_TRUE, Verdict.FALSE: EXIT_FALSE,
              Verdict.UNKNOWN: EXIT_UNKNOWN}[result.verdict])


def _bench_task(args: Tuple[str, str, Optional[float]]) -> RunRecord:
    path, config, time_limit = args
    return run_file(path, config, time_limit)


@main.command("bench")
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
@click.option("--config", "configs", multiple=True, default=("default",),
              show_default=True,
              help="Configuration spec, e.g. no-learn, k=16, k=64,forgetful. Repeatable.")
@click.option("--time-limit", type=float, default=60.0, show_default=True,
              help="Per-instance time limit in seconds.")
@click.option("--output", "-o", type=click.Path(dir_okay=False), default="bench.csv",
              show_default=True, help="CSV output path.")
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Parallel worker processes.")
def cmd_bench(directory: str, configs: Tuple[str, ...], time_limit: float,
              output: str, jobs: int) -> None:
    """Run every .qcir file under every configuration; write one CSV row each."""
    for spec in configs:
        try:
            parse_config(spec)
        except ValueError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_ERROR)
    paths = sorted(str(p) for p in Path(directory).glob("*.qcir"))
    tasks = [(p, c, time_limit) for p in paths for c in configs]

    if jobs > 1 and tasks:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_bench_task, tasks))
    else:
        records = [_bench_task(t) for t in tasks]

    records.sort(key=lambda r: (r.instance, r.config))
    with open(output, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for rec in records:
            fh.write(rec.csv_row() + "\n")

    for spec in configs:
        mine = [r for r in records if r.config == spec]
        solved = sum(r.verdict in (Verdict.TRUE, Verdict.FALSE) for r in mine)
        total = sum(r.time_s for r in mine)
        click.echo(f"config={spec} solved={solved}/{len(mine)} total_time={total:.2f}s")
    sys.exit(0)


@main.command("gen")
@click.argument("name", type=click.Choice(FAMILY_NAMES))
@click.argument("n", type=int)
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
              help="Write to a file instead of stdout.")
def cmd_gen(name: str, n: int, output: Optional[str]) -> None:
    """Emit a benchmark family instance as QCIR."""
    try:
        text = gen_family(name, n)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_ERROR)
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def cmd_serve(host: str, port: int) -> None:
    """Run the HTTP solving service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
