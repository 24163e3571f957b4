"""Automatic free-surface detection, per-column equilibrium references and
the equilibrium/fluctuation path family used by the y-direction solver."""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .params import ModelParams
from .state import EquilibriumProfile

__all__ = ["detect_free_surface", "detect_column_reference",
           "ColumnEquilibrium", "column_equilibrium", "path_point",
           "profile_from_reference"]


def detect_free_surface(grid, alpha_field, mask=None):
    """Per-column surface height y0_i = y_L + (sum over fluid cells alpha) dy.

    y_L is the column's lowest fluid face; solid cells are skipped. Returns
    an array of nx heights.
    """
    alpha = np.asarray(alpha_field, dtype=np.float64)
    if mask is None:
        mask = grid.mask
    q = np.zeros((grid.nx, grid.ny, 5))
    q[:, :, 3] = alpha
    y0 = np.empty(grid.nx)
    aeq = np.empty(grid.nx)
    kernels.detect_columns(q, mask, grid.y_faces, grid.dy, y0, aeq)
    return y0


def detect_column_reference(grid, q):
    """Surface heights and reference volume fractions for every column.

    alpha_eq is taken from the lowest fluid cell so that water-at-rest data
    (including the all-liquid alpha = 1 equilibrium tests) decompose with
    exactly zero fluctuations.
    """
    y0 = np.empty(grid.nx)
    aeq = np.empty(grid.nx)
    kernels.detect_columns(q, grid.mask, grid.y_faces, grid.dy, y0, aeq)
    return y0, aeq


@dataclass(frozen=True)
class ColumnEquilibrium:
    """Cell-centered equilibrium reference states of one column.

    q_eq[j] is the conserved equilibrium state at the center of cell j,
    evaluated on the profile with surface height y0 (midpoint evaluation).
    """

    y0: float
    alpha_eq: float
    params: ModelParams
    y_centers: np.ndarray
    q_eq: np.ndarray

    def profile(self):
        return EquilibriumProfile(self.y0, self.params, self.alpha_eq)


def column_equilibrium(y0, y_centers, params, alpha_eq):
    """Build the per-cell equilibrium conserved states of a column."""
    y_centers = np.asarray(y_centers, dtype=np.float64)
    q_eq = np.empty((y_centers.size, 5))
    for j, y in enumerate(y_centers):
        r = kernels.eq_rho(y, y0, params.k0, params.rho0, params.g)
        q_eq[j, 0] = alpha_eq * r
        q_eq[j, 1] = 0.0
        q_eq[j, 2] = 0.0
        q_eq[j, 3] = alpha_eq
        q_eq[j, 4] = y
    return ColumnEquilibrium(float(y0), float(alpha_eq), params,
                             y_centers, q_eq)


def profile_from_reference(eq_state, params):
    """Recover (y0, alpha_eq) from a conserved equilibrium reference state.

    Inverts rho_E = rho0 exp(-g rho0 / k0 (y - y0)); with g = 0 the profile
    is uniform and y0 is immaterial.
    """
    alpha_eq = float(eq_state[3])
    y = float(eq_state[4])
    rho_e = float(eq_state[0]) / alpha_eq
    if params.g == 0.0:
        return y, alpha_eq
    a = params.g * params.rho0 / params.k0
    y0 = y + math.log(rho_e / params.rho0) / a
    return y0, alpha_eq


def path_point(s, left, right, eq_left, eq_right, params):
    """State on the well-balanced path Phi(s) = Phi^E(s) + Phi^f(s).

    Phi^E is the stationary profile reparameterized linearly in height
    between the two cell centers; Phi^f is the straight segment between the
    fluctuations. Endpoints reproduce left/right exactly.
    """
    s = float(s)
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"path parameter must lie in [0, 1], got {s}")
    left = np.asarray(left, dtype=np.float64)
    right = np.asarray(right, dtype=np.float64)
    if s == 0.0:
        return left.copy()
    if s == 1.0:
        return right.copy()
    eq_left = np.asarray(eq_left, dtype=np.float64)
    eq_right = np.asarray(eq_right, dtype=np.float64)
    y0, aeq = profile_from_reference(eq_left, params)
    fl = left - eq_left
    fr = right - eq_right
    ys = left[4] + s * (right[4] - left[4])
    r = kernels.eq_rho(ys, y0, params.k0, params.rho0, params.g)
    eq_s = np.array([aeq * r, 0.0, 0.0, aeq, ys])
    return eq_s + fl + s * (fr - fl)
