from typing import Optional


class SignalOptError(Exception):
    """Base error. `exit_code` is what the CLI returns when this escapes a subcommand."""
    exit_code = 3

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class InstanceValidationError(SignalOptError, ValueError):
    exit_code = 2

    def __init__(self, detail: str, field: Optional[str] = None):
        super().__init__(f"{field}: {detail}" if field else detail)
        self.field = field


class MalformedDocumentError(InstanceValidationError):
    pass


class UnsupportedInstanceError(SignalOptError, ValueError):
    exit_code = 2


class EnumerationCapError(SignalOptError):
    def __init__(self, what: str, required: int, cap: int):
        super().__init__(
            f"{what} too large: {required} elements exceed the cap of {cap} "
            f"(raise the cap to at least {required})")
        self.required = required
        self.cap = cap


class LpInputError(SignalOptError, ValueError):
    pass


class DecompositionInfeasibleError(SignalOptError):
    pass


class InternalSolverError(SignalOptError):
    pass


class VerificationFailedError(SignalOptError):
    exit_code = 4
