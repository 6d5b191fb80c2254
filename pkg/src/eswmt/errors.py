"""Exception and warning classes raised across the eswmt package."""


class EswmtError(RuntimeError):
    """General exception class for eswmt."""
    exit_code = 3


class ConfigError(EswmtError):
    """Malformed or inconsistent run configuration."""
    exit_code = 2


class EswmtIOError(EswmtError):
    """Reading or writing an artifact failed."""
    exit_code = 4


class NumericalError(EswmtError):
    """A numerical procedure failed or a precondition on data was violated."""
    exit_code = 3


class ProfileError(NumericalError):
    pass


class InconclusiveLimit(ProfileError):
    pass


class RootBracketError(NumericalError):
    pass


class GeneratrixError(NumericalError):
    pass


class StiffIntegrationError(GeneratrixError):
    pass


class ImmersionError(NumericalError):
    pass


class WeierstrassError(NumericalError):
    pass


class KenmotsuError(NumericalError):
    pass


class CodazziError(NumericalError):
    pass


class TailFitError(NumericalError):
    pass


class EndFitError(NumericalError):
    pass


class EswmtWarning(RuntimeWarning):
    """General warning class for eswmt."""
    pass
