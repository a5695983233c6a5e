from pathlib import Path
from typing import Annotated, Optional

import typer
from rich import box
from rich.console import Console
from rich.table import Table

from ..config.experiment_config import ExperimentConfigLoader
from ..core.constants.enums import VerifySubset
from ..core.controllers import VerificationController
from ..core.controllers.experiments.verification import FAULTS
from ..core.exceptions import VerificationFailure
from ..core.schemas.verification import VerificationReport
from ..utils.common.decorator import exit_on_error

console = Console(stderr=True)


def render(report: VerificationReport) -> Table:
    table = Table(title="metalin verify", box=box.ROUNDED, header_style="bold magenta")
    table.add_column("check", style="cyan", no_wrap=True)
    table.add_column("module")
    table.add_column("measured", justify="right")
    table.add_column("tolerance", justify="right")
    table.add_column("result")
    for check in report.checks:
        table.add_row(
            check.name,
            str(check.module),
            f"{check.measured:.4g}",
            "" if check.tolerance is None else f"{check.tolerance:.0e}",
            "[green]pass[/green]" if check.passed else "[bold red]FAIL[/bold red]",
        )
    return table


def run_verify(
    subset: Optional[VerifySubset] = None,
    report_path: Optional[Path] = None,
    threads: Optional[int] = None,
    fault: Optional[str] = None,
    seed: Optional[int] = None,
) -> VerificationReport:
    loader = ExperimentConfigLoader()
    report = VerificationController(
        seed=seed, threads=loader.resolve_threads(threads), subset=subset, fault=fault
    ).run()
    if report_path is not None:
        report_path.parent.mkdir(parents=True, exist_ok=True)
        report_path.write_text(report.model_dump_json(indent=2) + "\n")
    console.print(render(report))
    if not report.passed:
        names = ", ".join(check.name for check in report.failures)
        raise VerificationFailure(f"{len(report.failures)} check(s) failed: {names}")
    return report


@exit_on_error
def verify(
    subset: Annotated[
        Optional[VerifySubset], typer.Option("--subset", help="Only run one module's checks.")
    ] = None,
    report: Annotated[
        Optional[Path], typer.Option("--report", help="Write the JSON report here.")
    ] = None,
    threads: Annotated[Optional[int], typer.Option("--threads", min=1)] = None,
    seed: Annotated[Optional[int], typer.Option("--seed", min=0)] = None,
    fault: Annotated[Optional[str], typer.Option("--fault", hidden=True)] = None,
) -> None:
    """Run the fixed-seed invariant checks of every module."""
    if fault is not None and fault not in FAULTS:
        raise typer.BadParameter(f"expected one of {FAULTS}", param_hint="--fault")
    run_verify(subset, report, threads, fault, seed)


def register_verify(app: typer.Typer) -> None:
    app.command("verify")(verify)
