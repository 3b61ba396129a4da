"""Exception hierarchy shared by every module."""


class QHEError(Exception):
    """Base class for all errors raised by the package."""


class InvalidParams(QHEError, ValueError):
    pass


class StiffnessFailure(QHEError, RuntimeError):
    """The adaptive integrator could not keep the step size above its floor."""

    def __init__(self, message, time):
        super().__init__(f"{message} (t = {time!r} ps)")
        self.time = time


class DegenerateSteadyState(QHEError, RuntimeError):
    pass


class OscillatoryRegime(QHEError, ValueError):
    """The overdamped square root in the effective decay rate became imaginary."""


class BeyondHorizon(QHEError, ValueError):
    pass


class LowTemperatureRegime(QHEError, ValueError):
    pass


class SingularCoupling(QHEError, ZeroDivisionError):
    pass


class ResonanceRequired(QHEError, ValueError):
    pass


class ConfigError(QHEError, ValueError):
    pass
