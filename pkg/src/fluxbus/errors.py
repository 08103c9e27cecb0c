"""Exception hierarchy shared by all fluxbus modules."""


class FluxbusError(Exception):
    """Base class for every error raised by the package."""


class InvalidDimensionError(FluxbusError, ValueError):
    pass


class SpaceMismatchError(FluxbusError, ValueError):
    pass


class NormalizationError(FluxbusError, ValueError):
    pass


class HermiticityError(FluxbusError, ValueError):
    """An operator required to be Hermitian is not, within tolerance."""


class UnphysicalParameterError(FluxbusError, ValueError):
    pass


class RegimeError(FluxbusError, ValueError):
    """Parameters fall outside the regime an approximation is defined for."""


class SqueezedFrameError(RegimeError):
    def __init__(self, beta: float):
        super().__init__(
            f"squeezed frame undefined: squeezing beta = {beta:.6g} must exceed 2"
        )
        self.beta = beta


class ResidualTooLargeError(FluxbusError):
    def __init__(self, residual: float, tolerance: float):
        super().__init__(
            f"generator residual {residual:.3e} exceeds tolerance {tolerance:.1e}"
        )
        self.residual = residual
        self.tolerance = tolerance


class ConfigError(FluxbusError):
    pass
