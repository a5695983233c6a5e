from concurrent.futures import Future, ThreadPoolExecutor, as_completed
from typing import Callable, Generic, Sequence, TypeVar

from tqdm import tqdm

from .utils.common.logger import logger

C = TypeVar("C")
R = TypeVar("R")


class CellPool(Generic[C, R]):
    """Runs experiment cells on a thread pool and returns results in cell order.

    Each call receives ``(cell_index, cell)``; callers derive their random
    streams from the index so results do not depend on scheduling.
    """

    def __init__(self, threads: int = 1, description: str = "cells") -> None:
        if threads < 1:
            raise ValueError(f"threads must be >= 1, got {threads}")
        self.threads = threads
        self.description = description

    def map(self, fn: Callable[[int, C], R], cells: Sequence[C]) -> list[R]:
        if self.threads == 1:
            return [
                fn(index, cell)
                for index, cell in tqdm(
                    list(enumerate(cells)), desc=self.description, disable=None
                )
            ]

        with ThreadPoolExecutor(
            max_workers=self.threads, thread_name_prefix="metalin"
        ) as executor:
            futures: list[Future[R]] = [
                executor.submit(fn, index, cell) for index, cell in enumerate(cells)
            ]
            for future in tqdm(
                as_completed(futures),
                total=len(futures),
                desc=self.description,
                disable=None,
            ):
                if future.exception() is not None:
                    logger.error(f"{self.description}: cell failed: {future.exception()}")
            return [future.result() for future in futures]
