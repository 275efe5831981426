"""Command-line surface.

Commands: validate, solve, case, elicit, serve. All of them exit 0 on
success and 1 with a diagnostic on domain errors; usage mistakes exit 2
(click's default).
"""

from __future__ import annotations

import sys

import click

from . import cases
from .engine import init_session, run_process
from .errors import DecisionError
from .formulation import validate_formulation
from .model_io import load_model, save_model
from .oracle import TableOracle
from .relations import levels_partition, nearest_total_preorder
from .solvers import optimize_covering


def _fail(exc: Exception) -> None:
    click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
    sys.exit(1)


@click.group()
def main() -> None:
    """Decision-analysis engine: formulate, elicit, aggregate, solve."""


@main.command()
@click.argument("model", type=click.Path(exists=True, dir_okay=False))
def validate(model: str) -> None:
    """Check that MODEL parses and states a workable decision problem."""
    try:
        doc = load_model(model)
        if doc.formulation is not None:
            diag = validate_formulation(doc.formulation)
            if not diag.ok:
                for p in diag.problems:
                    click.echo(f"problem: {p}", err=True)
                sys.exit(1)
            for f in diag.flags:
                click.echo(f"flag: {f}")
        click.echo("ok")
    except DecisionError as exc:
        _fail(exc)


@main.command()
@click.argument("model", type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", default="exact", type=click.Choice(["exact", "greedy"]),
              help="covering solver mode")
def solve(model: str, mode: str) -> None:
    """Solve whatever MODEL carries: a covering instance or a relation."""
    try:
        doc = load_model(model)
        if doc.covering is not None:
            sol = optimize_covering(doc.covering, mode=mode)
            click.echo(f"openings={sol.o} covered={sol.c}")
            return
        if doc.relation is not None:
            repaired = nearest_total_preorder(doc.relation)
            part = levels_partition(repaired)
            for i, cls in enumerate(part.classes):
                click.echo(f"class {i + 1}: {', '.join(sorted(cls))}")
            return
        click.echo("error: model carries nothing to solve", err=True)
        sys.exit(1)
    except DecisionError as exc:
        _fail(exc)


@main.command()
@click.argument("which", type=click.Choice(["covering", "alice"]))
@click.option("--with-sw", is_flag=True,
              help="alice: include the submit-and-wait option")
@click.option("--variant", default="full_cover",
              type=click.Choice(["full_cover", "max_cover"]),
              help="covering: objective variant")
@click.option("--fixture", default="city20",
              type=click.Choice(["p5", "k4", "city20"]),
              help="covering: which committed fixture to run")
def case(which: str, with_sw: bool, variant: str, fixture: str) -> None:
    """Run a built-in end-to-end case and print its report."""
    try:
        if which == "alice":
            instance, _ = cases.build_alice_case(include_sw=with_sw)
            report = cases.run_alice_case(instance)
            for s in instance.scenarios:
                click.echo(f"{s}: {report.scenario_orders[s]}")
            order = [sorted(c) for c in report.aggregate.classes]
            click.echo("aggregate: "
                       + " ≻ ".join("{" + ", ".join(c) + "}" for c in order))
            return
        builders = {"p5": cases.path_instance,
                    "k4": cases.complete_instance,
                    "city20": cases.twenty_district_instance}
        inst = builders[fixture](mode=variant)
        if variant == "max_cover" and inst.budget is None:
            inst = cases.CoveringInstance(inst.adjacency, mode=variant,
                                          budget=inst.size)
        report, _ = cases.run_covering_case(inst)
        click.echo(f"districts={report.rating_problems} "
                   f"openings={report.openings} covered={report.covered}")
    except DecisionError as exc:
        _fail(exc)


@main.command()
@click.argument("model", type=click.Path(exists=True, dir_okay=False))
@click.option("--transcript", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON list of [key, answer] pairs")
@click.option("--session-id", default="cli",
              help="id for the session stored back into the model")
def elicit(model: str, transcript: str, session_id: str) -> None:
    """Drive the interactive loop from a recorded TRANSCRIPT."""
    try:
        doc = load_model(model)
        if doc.formulation is None:
            click.echo("error: model has no formulation to elicit against",
                       err=True)
            sys.exit(1)
        seeds = [a for a in doc.formulation.attributes if a.separable]
        if not seeds:
            validate_formulation(doc.formulation)  # raises NoDecisionProblem
        session = init_session(seeds[0], doc.formulation.statement,
                               session_id=session_id)
        oracle = TableOracle.load(transcript)
        partition, session = run_process(session, oracle)
        doc.sessions[session.id] = session
        doc.transcripts[session.id] = [list(t) for t in oracle.transcript]
        save_model(doc, model)
        click.echo(f"status={session.status} iterations={session.iteration}")
        if partition is not None:
            for i, cls in enumerate(partition.classes):
                click.echo(f"class {i + 1}: {', '.join(sorted(cls))}")
    except DecisionError as exc:
        _fail(exc)


@main.command()
@click.option("--port", default=8000, type=int, show_default=True)
@click.option("--store", default=None,
              help="storage directory (defaults to $DECISIONKIT_STORE)")
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(port: int, store: str | None, host: str) -> None:
    """Run the HTTP session service."""
    from .service import serve as run_service

    run_service(port=port, store=store, host=host)


if __name__ == "__main__":
    main()
