from typing import Optional


class MetalinError(Exception):
    """Base error. ``exit_code`` is what the CLI returns when it surfaces."""

    exit_code: int = 1

    def __init__(self, detail: str, exit_code: Optional[int] = None) -> None:
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class ConfigError(MetalinError):
    exit_code = 1

    def __init__(self, detail: str, fields: Optional[list[str]] = None) -> None:
        super().__init__(detail)
        self.fields = fields or []


class VerificationFailure(MetalinError):
    exit_code = 2


class NumericalError(MetalinError):
    exit_code = 3


class NotPositiveDefiniteError(NumericalError):
    pass


class NotSymmetricError(NumericalError):
    pass


class UnderDeterminedError(NumericalError):
    def __init__(
        self, method: str, tasks: int, n_train: int, n_val: int, dimension: int
    ) -> None:
        super().__init__(
            f"{method}: aggregate weight matrix is singular "
            f"(T={tasks}, N1={n_train}, N2={n_val}, d={dimension})"
        )
        self.method = method
        self.tasks = tasks
        self.n_train = n_train
        self.n_val = n_val
        self.dimension = dimension


class DegenerateDistributionError(NumericalError):
    pass


class InvalidDimensionError(MetalinError, ValueError):
    pass


class InvalidSplitError(MetalinError, ValueError):
    def __init__(self, n: int, s: float, n_train: int) -> None:
        super().__init__(
            f"split s={s} of N={n} gives N1={n_train}, N2={n - n_train}; "
            "both splits must be non-empty"
        )
        self.n = n
        self.s = s
        self.n_train = n_train


class UnsupportedRegimeError(MetalinError, ValueError):
    pass


class UnsupportedMethodError(MetalinError, ValueError):
    pass
