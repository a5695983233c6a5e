import typer

from .routers import include_routers

description = """
Closed-form meta-linear-regression learners (ERM, MAML, iMAML, BaMAML),
their risk decomposition and statistical-error constants.
"""

app = typer.Typer(
    name="metalin",
    help=description,
    add_completion=False,
    no_args_is_help=True,
    rich_markup_mode="rich",
)

include_routers(app)


if __name__ == "__main__":
    app()
