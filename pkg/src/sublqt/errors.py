"""Exception hierarchy shared by all sublqt modules."""


class SublqtError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(SublqtError, ValueError):
    pass


class SymmetryError(SublqtError, ValueError):
    pass


class ResonantSpectrumError(SublqtError, ArithmeticError):
    """The Kronecker-sum operator of a Lyapunov equation is singular."""


class NetworkError(SublqtError, ValueError):
    """Invalid follower graph or pinning structure."""


class StabilizationError(SublqtError, ArithmeticError):
    pass


class ConvergenceError(SublqtError, ArithmeticError):
    pass


class IndefiniteIterateError(SublqtError, ArithmeticError):
    pass


class InadmissibleCouplingError(SublqtError, ValueError):
    pass


class InfiniteCostError(SublqtError, ArithmeticError):
    pass


class DivergenceError(SublqtError, ArithmeticError):
    def __init__(self, time: float, message: str | None = None):
        self.time = time
        super().__init__(message or f"state became non-finite at t = {time:.6g} s")


class ConfigError(SublqtError, ValueError):
    pass
