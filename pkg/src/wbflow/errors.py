"""Exception and warning types."""


class ConfigError(ValueError):
    """Invalid configuration or scenario description."""


class UnsupportedConfigurationError(ValueError):
    """Requested a configuration outside the supported family (e.g. gamma != 1
    closed-form equilibria)."""


class SimulationError(RuntimeError):
    """Numerical abort; carries step/cell context when available."""

    def __init__(self, message, step=None, cell=None):
        if step is not None:
            message = f"{message} (step {step})"
        if cell is not None:
            message = f"{message} at cell {cell}"
        super().__init__(message)
        self.step = step
        self.cell = cell


class NearSonicWarning(UserWarning):
    """A regularized eigendecomposition was used near a sonic state."""
