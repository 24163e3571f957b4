"""System matrices A1, A2 and their closed-form eigendecompositions.

The decompositions come straight from the analytical right-eigenvector
matrices and inverses; no numerical eigensolver is involved, which keeps
|A| and sign(A) bit-reproducible.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NearSonicWarning

__all__ = ["DirectionalJacobian", "EigenDecomposition", "jacobian",
           "eigendecompose", "abs_matrix", "sign_matrix"]


@dataclass(frozen=True)
class DirectionalJacobian:
    direction: str          # 'x' or 'y'
    a: np.ndarray           # 5x5 quasi-linear matrix
    state: np.ndarray       # primitive state it was evaluated at
    params: object
    g: float


@dataclass(frozen=True)
class EigenDecomposition:
    r: np.ndarray
    r_inv: np.ndarray
    lam: np.ndarray
    direction: str


def _check_direction(direction):
    if direction not in ("x", "y"):
        raise ValueError(f"direction must be 'x' or 'y', got {direction!r}")


def jacobian(w, direction, params):
    """Quasi-linear system matrix A = dF/dq + B at a primitive state."""
    _check_direction(direction)
    rho, u, v, alpha, p = (float(t) for t in w)
    c2 = kernels.sound_c2(rho, params.k0, params.rho0, params.gamma)
    g = params.g
    if direction == "x":
        a = np.array([
            [0.0, 1.0, 0.0, 0.0, 0.0],
            [c2 - u * u, 2.0 * u, 0.0, p - rho * c2, 0.0],
            [-u * v, v, u, 0.0, 0.0],
            [0.0, 0.0, 0.0, u, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0]])
    else:
        a = np.array([
            [0.0, 0.0, 1.0, 0.0, 0.0],
            [-u * v, v, u, 0.0, 0.0],
            [c2 - v * v, 0.0, 2.0 * v, p - rho * c2, alpha * rho * g],
            [0.0, 0.0, 0.0, v, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0]])
    return DirectionalJacobian(direction, a, np.asarray(w, dtype=float),
                               params, g)


def eigendecompose(j):
    """Closed-form R, Lambda, R^{-1} of a directional Jacobian.

    Near-sonic y-direction states (|v^2 - c^2| below the guard) are
    regularized and reported through a NearSonicWarning.
    """
    rho, u, v, alpha, p = j.state
    params = j.params
    c2 = kernels.sound_c2(rho, params.k0, params.rho0, params.gamma)
    c = math.sqrt(c2)
    rcp = rho * c2 - p
    if j.direction == "x":
        lam = np.array([u - c, u, u, 0.0, u + c])
        r = np.array([
            [1.0, 0.0, rcp, 0.0, 1.0],
            [u - c, 0.0, u * rcp, 0.0, u + c],
            [v, 1.0, 0.0, 0.0, v],
            [0.0, 0.0, c2, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0, 0.0]])
        r_inv = np.array([
            [0.5 * (c + u) / c, -0.5 / c, 0.0, -0.5 * rcp / c2, 0.0],
            [-v, 0.0, 1.0, v * rcp / c2, 0.0],
            [0.0, 0.0, 0.0, 1.0 / c2, 0.0],
            [0.0, 0.0, 0.0, 0.0, 1.0],
            [0.5 * (c - u) / c, 0.5 / c, 0.0, -0.5 * rcp / c2, 0.0]])
        return EigenDecomposition(r, r_inv, lam, "x")

    arg = alpha * rho * j.g
    guard = kernels.SONIC_GUARD
    cmv = v * v - c2
    near_sonic = abs(cmv) < guard * c2 or abs(c - v) < guard * c \
        or abs(c + v) < guard * c
    if near_sonic:
        warnings.warn("near-sonic y-direction state regularized "
                      f"(v = {v}, c = {c})", NearSonicWarning)
    vmc2 = kernels._guarded(cmv, guard * c2)
    cm = kernels._guarded(c - v, guard * c)
    cp = kernels._guarded(c + v, guard * c)
    lam = np.array([v - c, v, v, 0.0, v + c])
    r = np.array([
        [1.0, 0.0, rcp, arg, 1.0],
        [u, 1.0, 0.0, u * arg, u],
        [v - c, 0.0, v * rcp, 0.0, v + c],
        [0.0, 0.0, c2, 0.0, 0.0],
        [0.0, 0.0, 0.0, vmc2, 0.0]])
    r_inv = np.array([
        [0.5 * (c + v) / c, 0.0, -0.5 / c, -0.5 * rcp / c2,
         0.5 / c * arg / cm],
        [-u, 1.0, 0.0, u * rcp / c2, 0.0],
        [0.0, 0.0, 0.0, 1.0 / c2, 0.0],
        [0.0, 0.0, 0.0, 0.0, 1.0 / vmc2],
        [0.5 * (c - v) / c, 0.0, 0.5 / c, -0.5 * rcp / c2,
         0.5 / c * arg / cp]])
    return EigenDecomposition(r, r_inv, lam, "y")


def abs_matrix(e):
    """|A| = R |Lambda| R^{-1}."""
    return e.r @ np.diag(np.abs(e.lam)) @ e.r_inv


def sign_matrix(e):
    """sign(A) = R sign(Lambda) R^{-1}; sign of the structural zero is 0."""
    return e.r @ np.diag(np.sign(e.lam)) @ e.r_inv
