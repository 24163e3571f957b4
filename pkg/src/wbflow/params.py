"""Model parameters for the Tait-closed two-phase system."""

from dataclasses import dataclass


@dataclass(frozen=True)
class ModelParams:
    """Fluid and model constants.

    k0: compressibility constant [Pa], sets the sound speed
    rho0: reference liquid density [kg/m^3]
    gamma: Tait exponent (all paper experiments use 1)
    g: gravity magnitude [m/s^2]
    epsilon: gas-phase volume-fraction floor
    """

    k0: float
    rho0: float = 1000.0
    gamma: float = 1.0
    g: float = 9.81
    epsilon: float = 1.0e-3

    def __post_init__(self):
        if not self.k0 > 0.0:
            raise ValueError(f"k0 must be positive, got {self.k0}")
        if not self.rho0 > 0.0:
            raise ValueError(f"rho0 must be positive, got {self.rho0}")
        if not self.gamma >= 1.0:
            raise ValueError(f"gamma must be >= 1, got {self.gamma}")
        if not self.g >= 0.0:
            raise ValueError(f"g must be non-negative, got {self.g}")
        if not 0.0 < self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in (0, 0.5), got {self.epsilon}")

    @property
    def sound_speed_ref(self):
        """Sound speed at the reference density."""
        from . import state
        return state.sound_speed(self.rho0, self)
