from typing import Sequence

import numpy as np


def powers_of_ten(exponents: Sequence[float]) -> list[int]:
    """Integer grid ``round(10**x)`` for log-spaced T or N."""
    return [int(round(10.0**x)) for x in exponents]


def summarize(values: Sequence[float]) -> dict[str, float]:
    """Median, mean and interquartile range, in that order."""
    arr = np.asarray(values, dtype=np.float64)
    q1, median, q3 = np.percentile(arr, [25.0, 50.0, 75.0])
    return {"median": float(median), "mean": float(arr.mean()), "iqr": float(q3 - q1)}


def loglog_slope(x: Sequence[float], y: Sequence[float]) -> float:
    slope, _ = np.polyfit(np.log10(x), np.log10(y), 1)
    return float(slope)
