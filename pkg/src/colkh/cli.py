"""Command line entry point: ``colkh compute`` and ``colkh verify-paper``."""

from __future__ import annotations

import json
import sys
import time
from dataclasses import dataclass, field

import click

from .cabling import MARKINGS, CableSpec, coloured_diagram
from .diagram import Diagram, builtin, parse_braid_text, parse_pd
from .errors import DiagramError, KhovanovError, ResourceLimit
from .homology import betti
from .khcube import DEFAULT_MAX_CROSSINGS, build_complex

EXIT_INPUT = 2
EXIT_RESOURCE = 3


@dataclass
class RunConfig:
    name: str | None = None
    pd: str | None = None
    braid: str | None = None
    strands: int | None = None
    colour: int = 1
    reduced: bool | None = None
    framing: tuple[int, ...] = ()
    blackboard: bool = False
    basepoint_strand: int = 0
    marking: str = "strands"
    flip: tuple[int, ...] = ()
    max_crossings: int = DEFAULT_MAX_CROSSINGS
    workers: int = 1
    extra: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        given = [k for k in ("name", "pd", "braid") if getattr(self, k) is not None]
        if len(given) != 1:
            raise DiagramError("give exactly one of --name, --pd or --braid")
        if self.braid is not None and self.strands is None:
            raise DiagramError("--braid needs --strands")
        if self.colour < 1:
            raise DiagramError(f"colour must be >= 1, got {self.colour}")
        if self.reduced is None:
            self.reduced = self.colour > 1

    def diagram(self) -> Diagram:
        if self.name is not None:
            return builtin(self.name)
        if self.pd is not None:
            return parse_pd(self.pd, flip=self.flip)
        return parse_braid_text(self.braid, self.strands)

    def input_echo(self, d: Diagram) -> dict:
        if self.name is not None:
            src = {"name": self.name}
        elif self.pd is not None:
            src = {"pd": self.pd}
        else:
            src = {"braid": self.braid, "strands": self.strands}
        src.update(
            crossings=d.n_crossings,
            components=d.n_components,
            framing="blackboard" if self.blackboard else list(self.framing or (0,)),
            basepoint_strand=self.basepoint_strand,
            marking=self.marking,
        )
        return src


def run(cfg: RunConfig) -> dict:
    """diagram -> cable -> complex -> Betti table, as a JSON-ready report."""
    start = time.perf_counter()
    d = cfg.diagram()
    spec = CableSpec(
        n=cfg.colour,
        framing=tuple(cfg.framing) or (0,),
        basepoint_strand=cfg.basepoint_strand,
        blackboard=cfg.blackboard,
        marking=cfg.marking,
    )
    cable = coloured_diagram(d, spec)
    colour_meta = {"n": cfg.colour, "marking": cfg.marking}
    c = build_complex(cable, reduced=cfg.reduced, colour=colour_meta, max_crossings=cfg.max_crossings)
    table = betti(c, workers=cfg.workers)
    return {
        "input": cfg.input_echo(d),
        "colour": cfg.colour,
        "reduced": cfg.reduced,
        "coefficients": "F2",
        "cable_crossings": cable.n_crossings,
        "betti": table.rows(),
        "total_rank": table.total_rank,
        "wall_ms": int(round((time.perf_counter() - start) * 1000)),
    }


def dump(report: dict) -> str:
    return json.dumps(report, indent=2)


def _render_table(report: dict) -> str:
    from .homology import BettiTable

    table = BettiTable({(r["i"], r["j"]): r["rank"] for r in report["betti"]})
    kind = "reduced" if report["reduced"] else "unreduced"
    head = (
        f"{kind} Kh over F2, colour {report['colour']}, "
        f"{report['cable_crossings']} crossings, {report['wall_ms']} ms"
    )
    return head + "\n" + table.format()


def _fail(exc: Exception) -> None:
    code = EXIT_RESOURCE if isinstance(exc, ResourceLimit) else EXIT_INPUT
    if not isinstance(exc, (DiagramError, ResourceLimit)):
        code = 1
    click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
    sys.exit(code)


@click.group()
def main() -> None:
    """Khovanov homology over F2, plain or coloured via framed cables."""


@main.command()
@click.option("--name", help="Built-in diagram name.")
@click.option("--pd", help='PD code, e.g. "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)".')
@click.option("--braid", help='Braid word as signed integers, e.g. "1 1 -2 1".')
@click.option("--strands", type=int, help="Strand count for --braid.")
@click.option("--flip", type=int, multiple=True, help="Reverse this PD component (repeatable).")
@click.option("--colour", "--color", "colour", type=int, default=1, show_default=True)
@click.option("--reduced/--unreduced", default=None, help="Default: reduced when colour > 1.")
@click.option("--framing", type=int, multiple=True, help="Target framing (repeat per component).")
@click.option("--blackboard-framing", is_flag=True, help="Keep the diagram's own framing.")
@click.option("--basepoint-strand", type=int, default=0, show_default=True)
@click.option("--marking", type=click.Choice(MARKINGS), default="strands", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="table", show_default=True)
@click.option("--max-crossings", type=int, default=DEFAULT_MAX_CROSSINGS, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
def compute(name, pd, braid, strands, flip, colour, reduced, framing, blackboard_framing,
            basepoint_strand, marking, fmt, max_crossings, workers) -> None:
    """Compute one Betti table."""
    try:
        cfg = RunConfig(
            name=name, pd=pd, braid=braid, strands=strands, colour=colour, reduced=reduced,
            framing=tuple(framing), blackboard=blackboard_framing,
            basepoint_strand=basepoint_strand, marking=marking, flip=tuple(flip),
            max_crossings=max_crossings, workers=workers,
        )
        report = run(cfg)
    except KhovanovError as exc:
        _fail(exc)
    click.echo(dump(report) if fmt == "json" else _render_table(report))


# (label, config, expected total rank)
PUBLISHED_CASES = (
    ("trefoil", dict(name="trefoil_rh"), 9),
    ("figure-eight", dict(name="figure8"), 25),
    ("T(2,4)", dict(name="t2_4"), 18),
)

SANITY_CASES = tuple(
    (f"{name} {'reduced' if red else 'unreduced'}", dict(name=name, reduced=red), rank * (1 if red else 2))
    for name, rank in (
        ("unknot", 1),
        ("unknot_kink_pos", 1),
        ("unknot_kink_neg", 1),
        ("trefoil_rh", 3),
        ("trefoil_lh", 3),
        ("figure8", 5),
        ("t2_4", 4),
        ("hopf_pos", 2),
    )
    for red in (True, False)
)


@main.command("verify-paper")
@click.option("--quick", is_flag=True, help="Only the figure-eight and T(2,4) cables.")
@click.option("--framing-offset", type=int, default=0, help="Add this to the target framing (harness control).")
@click.option("--workers", type=int, default=1, show_default=True)
def verify_paper(quick: bool, framing_offset: int, workers: int) -> None:
    """Recompute the published coloured ranks and an uncoloured sanity suite."""
    cases = [(label, dict(kw, colour=2, framing=(framing_offset,)), want)
             for label, kw, want in PUBLISHED_CASES]
    if quick:
        cases = cases[1:]
    else:
        cases += [(label, dict(kw, colour=1), want) for label, kw, want in SANITY_CASES]
    click.echo(f"{'case':<28}{'crossings':>10}{'expected':>10}{'computed':>10}  result")
    for label, kw, want in cases:
        try:
            report = run(RunConfig(workers=workers, **kw))
        except KhovanovError as exc:
            _fail(exc)
        got = report["total_rank"]
        ok = got == want
        click.echo(
            f"{label:<28}{report['cable_crossings']:>10}{want:>10}{got:>10}  {'PASS' if ok else 'FAIL'}"
        )
        if not ok:
            click.echo(f"mismatch on {label}", err=True)
            sys.exit(1)
    click.echo("all checks passed")


if __name__ == "__main__":
    main()
