import os

from dynaconf import Dynaconf, Validator  # type: ignore

current_directory = os.path.dirname(os.path.realpath(__file__))

settings = Dynaconf(
    envvar_prefix="METALIN",
    env_switcher="METALIN_ENV",
    settings_files=[
        f"{current_directory}/settings.toml",
        f"{current_directory}/.secrets.toml",
    ],
    load_dotenv=True,
    environments=True,
)

settings.validators.register(
    Validator("THREADS", cast=int, gte=1),
    Validator("TASK_POOL", cast=int, gte=1),
    Validator("SEED", cast=int, gte=0),
    Validator(
        "LOG_LEVEL",
        cast=str,
        is_in=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
    ),
)
settings.validators.validate()
