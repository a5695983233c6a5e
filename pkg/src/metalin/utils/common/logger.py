import logging.config
from logging import getLogger

from ...settings.config import settings

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {
            "format": "[%(levelname)s] [%(asctime)s] %(message)s",
            "datefmt": "%Y-%m-%dT%H:%M:%S",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "plain",
            "stream": "ext://sys.stderr",
        },
    },
    "loggers": {
        "metalin": {
            "handlers": ["console"],
            "level": settings.get("LOG_LEVEL", "INFO"),
            "propagate": False,
        }
    },
}
# initializing logging
logging.config.dictConfig(LOGGING)
logger = getLogger("metalin")
