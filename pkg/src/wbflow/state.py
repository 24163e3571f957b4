"""State vectors, variable conversions, Tait EOS and the analytical
water-at-rest equilibrium family.

Conserved states are length-5 float arrays (a*rho, a*rho*u, a*rho*v, a, y);
primitive states are length-5 float arrays (rho, u, v, alpha, p). Pressure is
never stored independently of density: it is always recomputed through the
Tait law so the EOS invariant stays testable.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import UnsupportedConfigurationError
from .params import ModelParams

__all__ = [
    "ModelParams",
    "tait_pressure",
    "sound_speed",
    "cons_to_prim",
    "prim_to_cons",
    "EquilibriumProfile",
    "equilibrium_state",
]


def tait_pressure(rho, params):
    """Relative pressure k0 ((rho/rho0)^gamma - 1)."""
    if np.any(np.asarray(rho) <= 0.0):
        raise ValueError(f"density must be positive, got {rho}")
    if np.isscalar(rho):
        return kernels.tait_p(float(rho), params.k0, params.rho0, params.gamma)
    rho = np.asarray(rho, dtype=np.float64)
    out = np.empty_like(rho)
    flat = rho.ravel()
    oflat = out.ravel()
    for n in range(flat.size):
        oflat[n] = kernels.tait_p(flat[n], params.k0, params.rho0, params.gamma)
    return out


def sound_speed(rho, params):
    """sqrt(gamma k0 / rho0 (rho/rho0)^(gamma-1)); constant for gamma = 1."""
    if np.any(np.asarray(rho) <= 0.0):
        raise ValueError(f"density must be positive, got {rho}")
    if np.isscalar(rho):
        return math.sqrt(kernels.sound_c2(float(rho), params.k0, params.rho0,
                                          params.gamma))
    rho = np.asarray(rho, dtype=np.float64)
    return np.sqrt([kernels.sound_c2(r, params.k0, params.rho0, params.gamma)
                    for r in rho])


def cons_to_prim(q, params, cell=None):
    """(a*rho, a*rho*u, a*rho*v, a, y) -> (rho, u, v, alpha, p)."""
    q = np.asarray(q, dtype=np.float64)
    if not (q[0] > 0.0 and q[3] > 0.0):
        where = f" at cell {cell}" if cell is not None else ""
        raise ValueError(
            f"corrupted state{where}: a*rho = {q[0]}, alpha = {q[3]}")
    rho = q[0] / q[3]
    return np.array([rho, q[1] / q[0], q[2] / q[0], q[3],
                     tait_pressure(rho, params)])


def prim_to_cons(w, y):
    """(rho, u, v, alpha, p) and a cell height -> conserved 5-vector."""
    w = np.asarray(w, dtype=np.float64)
    ar = w[3] * w[0]
    return np.array([ar, ar * w[1], ar * w[2], w[3], float(y)])


@dataclass(frozen=True)
class EquilibriumProfile:
    """Water-at-rest family: u = 0, alpha constant, exponential rho(y).

    y0 is the free-surface position (rho(y0) = rho0, p(y0) = 0). Only the
    gamma = 1 closed form is supported; other exponents would need an ODE
    integration none of the experiments exercise.
    """

    y0: float
    params: ModelParams
    alpha_eq: float = 1.0

    def __post_init__(self):
        if self.params.gamma != 1.0:
            raise UnsupportedConfigurationError(
                "closed-form equilibria require gamma = 1, got "
                f"{self.params.gamma}")
        if not 0.0 < self.alpha_eq <= 1.0:
            raise ValueError(f"alpha_eq must lie in (0, 1], got {self.alpha_eq}")

    def rho(self, y):
        p = self.params
        if np.isscalar(y):
            return kernels.eq_rho(float(y), self.y0, p.k0, p.rho0, p.g)
        y = np.asarray(y, dtype=np.float64)
        out = np.empty_like(y)
        for n in range(y.size):
            out.flat[n] = kernels.eq_rho(y.flat[n], self.y0, p.k0, p.rho0, p.g)
        return out

    def pressure(self, y):
        return tait_pressure(self.rho(y), self.params)

    def primitive(self, y):
        """(rho(y), 0, 0, alpha_eq, p(y))."""
        r = self.rho(y)
        return np.array([r, 0.0, 0.0, self.alpha_eq,
                         tait_pressure(r, self.params)])

    def conserved(self, y):
        return prim_to_cons(self.primitive(y), y)


def equilibrium_state(profile, y):
    """Primitive water-at-rest state of the profile at height y."""
    return profile.primitive(y)
