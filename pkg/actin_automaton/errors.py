"""
Error types shared by the library and the CLI.

Every error carries a human readable ``detail`` and the process exit code
the CLI should use. Library code raises; only ``main()`` turns an error
into an exit code.
"""

# ======================================================
# EXIT CODES
# ======================================================

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2


# ======================================================
# BASE
# ======================================================

class ActinError(Exception):
    exit_code = EXIT_INPUT

    def __init__(self, detail: str, exit_code: int | None = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


# ======================================================
# CLI / INPUT
# ======================================================

class UsageError(ActinError):
    exit_code = EXIT_USAGE


class InputError(ActinError):
    """Unreadable or malformed input file."""


class ConfigError(ActinError):
    pass


# ======================================================
# DOMAIN
# ======================================================

class ConfigurationLengthError(ActinError):
    pass


class StimulationError(ActinError):
    pass


class EmptyStimulationError(StimulationError):
    """rho * N floors to zero nodes."""


class RingStateError(ActinError):
    """Ring is not in the state a write/erase requires."""


class FitInputError(ActinError):
    pass


class CycleCertificationError(ActinError):
    # replaying c steps from the cycle entry did not reproduce it
    pass
