import typer

from .experiments import register_experiments
from .verify import register_verify


def include_routers(app: typer.Typer) -> None:
    register_experiments(app)
    register_verify(app)
