import json
from pathlib import Path
from typing import Any, Optional, Sequence

import pandas as pd

from ...core.exceptions import MetalinError
from ...core.schemas.experiment import RESULT_COLUMNS, ResultRow
from .logger import logger

ROW_KEY = ["experiment", "method", "hyperparameters", "d", "N", "T", "s", "seed", "metric"]
INTEGER_COLUMNS = {"d": "Int64", "N": "Int64", "T": "Int64", "seed": "UInt64"}


class ResultWriter:
    """Writes result rows as CSV plus a ``<out>.meta.json`` sibling."""

    def __init__(self, out: Path, float_format: str = "%.17g") -> None:
        self.out = Path(out)
        self.float_format = float_format

    @property
    def meta_path(self) -> Path:
        return self.out.with_name(self.out.name + ".meta.json")

    @staticmethod
    def to_frame(rows: Sequence[ResultRow]) -> pd.DataFrame:
        records = [row.model_dump() for row in rows]
        frame = pd.DataFrame(records, columns=RESULT_COLUMNS)
        # nullable integer columns, built from the ints so 64-bit seeds stay exact
        for column, dtype in INTEGER_COLUMNS.items():
            frame[column] = pd.array([record[column] for record in records], dtype=dtype)
        duplicated = frame.duplicated(subset=ROW_KEY, keep=False)
        if duplicated.any():
            sample = frame.loc[duplicated, ROW_KEY].head(3).to_dict("records")
            raise MetalinError(f"result rows are not unique, e.g. {sample}")
        return frame

    def write(
        self, rows: Sequence[ResultRow], metadata: Optional[dict[str, Any]] = None
    ) -> pd.DataFrame:
        frame = self.to_frame(rows)
        self.out.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(
            self.out, index=False, float_format=self.float_format, lineterminator="\n"
        )
        self.meta_path.write_text(
            json.dumps(metadata or {}, indent=2, sort_keys=True, default=str) + "\n"
        )
        logger.info(f"wrote {len(frame)} rows to {self.out}")
        return frame
