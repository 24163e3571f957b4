"""Path-conservative fluctuations at edges: standard Osher in x (segment
path, Gauss-Legendre-3) and well-balanced Osher-Romberg in y (equilibrium/
fluctuation path, Romberg nodes with the 1/(2 eps) factors absorbed)."""

from collections import namedtuple

import numpy as np

from . import kernels
from .wellbalance import profile_from_reference

__all__ = ["Fluctuation", "QuadratureRule", "GAUSS_LEGENDRE_3", "ROMBERG_3",
           "physical_flux", "roe_velocity", "b_jump_x", "b_jump_y",
           "osher_fluctuation_x", "osher_romberg_fluctuation_y",
           "osher_romberg_conservative"]

Fluctuation = namedtuple("Fluctuation", ["d_minus", "d_plus"])

QuadratureRule = namedtuple("QuadratureRule", ["nodes", "weights", "offsets"])

GAUSS_LEGENDRE_3 = QuadratureRule(np.array(kernels.GL3_NODES),
                                  np.array(kernels.GL3_WEIGHTS), None)
ROMBERG_3 = QuadratureRule(np.array(kernels.OR_NODES),
                           np.array(kernels.OR_WEIGHTS),
                           np.array(kernels.OR_OFFSETS))


def physical_flux(w, direction, params):
    """Physical flux of a primitive state; the y-flux carries no pressure
    term (it lives in the non-conservative part)."""
    rho, u, v, alpha, p = (float(t) for t in w)
    ar = alpha * rho
    if direction == "x":
        return np.array([ar * u, ar * u * u + alpha * p, ar * u * v, 0.0, 0.0])
    if direction == "y":
        return np.array([ar * v, ar * u * v, ar * v * v, 0.0, 0.0])
    raise ValueError(f"direction must be 'x' or 'y', got {direction!r}")


def roe_velocity(wl, wr, component="u"):
    """Density-square-root weighted velocity average."""
    idx = {"u": 1, "v": 2}[component]
    return kernels.roe_avg(float(wl[idx]), float(wl[0]),
                           float(wr[idx]), float(wr[0]))


def b_jump_x(wl, wr):
    """Non-conservative jump across a vertical edge: only u_bar * d(alpha).

    u_bar is the Gauss-Legendre path average of the velocity along the
    segment path in conserved variables, matching the viscosity quadrature.
    """
    arl = float(wl[3]) * float(wl[0])
    arr = float(wr[3]) * float(wr[0])
    qm = np.array([arl, arl * float(wl[1]), arl * float(wl[2]), float(wl[3])])
    qp = np.array([arr, arr * float(wr[1]), arr * float(wr[2]), float(wr[3])])
    ubar = 0.0
    for sk, wk in zip(kernels.GL3_NODES, kernels.GL3_WEIGHTS):
        ps = qm + sk * (qp - qm)
        ubar += wk * (ps[1] / ps[0])
    out = np.zeros(5)
    out[3] = ubar * (float(wr[3]) - float(wl[3]))
    return out


def b_jump_y(ql, qr, eq_l, eq_r, params):
    """Non-conservative jump across a horizontal edge.

    Component 3 combines the mixed equilibrium/fluctuation pressure products
    with the midpoint-averaged gravity term; component 4 is v_bar * d(alpha)
    with v_bar taken at the path midpoint (consistent with the viscosity
    nodes). Both states must decompose against the same column equilibrium.
    """
    ql = np.asarray(ql, dtype=np.float64)
    qr = np.asarray(qr, dtype=np.float64)
    eq_l = np.asarray(eq_l, dtype=np.float64)
    eq_r = np.asarray(eq_r, dtype=np.float64)
    aeq = float(eq_l[3])
    k0, rho0, gamma, g = params.k0, params.rho0, params.gamma, params.g
    dl = kernels._decomp_y(ql[0], ql[1], ql[2], ql[3], ql[4],
                           eq_l[0] / aeq, aeq, k0, rho0, gamma)
    dr = kernels._decomp_y(qr[0], qr[1], qr[2], qr[3], qr[4],
                           eq_r[0] / aeq, aeq, k0, rho0, gamma)
    from .wellbalance import path_point
    mid = path_point(0.5, ql, qr, eq_l, eq_r, params)
    b3, b4 = kernels._b_pair_y(dl, dr, mid[2] / mid[0], aeq, g)
    out = np.zeros(5)
    out[2] = b3
    out[3] = b4
    return out


def osher_fluctuation_x(ql, qr, params):
    """D-/D+ across a vertical edge (standard path-conservative Osher)."""
    ql = np.asarray(ql, dtype=np.float64)
    qr = np.asarray(qr, dtype=np.float64)
    res = kernels.osher_x_edge(ql[0], ql[1], ql[2], ql[3], ql[4],
                               qr[0], qr[1], qr[2], qr[3], qr[4],
                               params.k0, params.rho0, params.gamma)
    return Fluctuation(np.array(res[:5]), np.array(res[5:]))


def osher_romberg_fluctuation_y(ql, qr, eq_l, eq_r, params):
    """D-/D+ across a horizontal edge (well-balanced Osher-Romberg).

    eq_l/eq_r are the conserved column-equilibrium references of the two
    states; when both states sit on that equilibrium the result is exactly
    zero.
    """
    ql = np.asarray(ql, dtype=np.float64)
    qr = np.asarray(qr, dtype=np.float64)
    y0, aeq = profile_from_reference(np.asarray(eq_l, dtype=np.float64), params)
    res = kernels.or_y_edge(ql[0], ql[1], ql[2], ql[3], ql[4],
                            qr[0], qr[1], qr[2], qr[3], qr[4],
                            y0, aeq, params.k0, params.rho0, params.gamma,
                            params.g)
    return Fluctuation(np.array(res[:5]), np.array(res[5:]))


def osher_romberg_conservative(ql, qr, flux, sign_apply):
    """Generic conservative Osher-Romberg viscosity on a segment path.

    flux(q) evaluates the physical flux; sign_apply(q, vec) applies the
    Jacobian sign matrix at a state. The Romberg weights already absorb the
    1/(2 eps_k) factors of the flux differences.
    """
    ql = np.asarray(ql, dtype=np.float64)
    qr = np.asarray(qr, dtype=np.float64)
    if np.array_equal(ql, qr):
        return np.zeros_like(ql)
    dq = qr - ql

    def path(s):
        if s == 0.0:
            return ql
        if s == 1.0:
            return qr
        return ql + s * dq

    visc = np.zeros_like(ql)
    for s, w, eps in zip(kernels.OR_NODES, kernels.OR_ABSORBED,
                         kernels.OR_OFFSETS):
        fp = np.asarray(flux(path(s + eps)), dtype=np.float64)
        fm = np.asarray(flux(path(s - eps)), dtype=np.float64)
        visc += w * np.asarray(sign_apply(path(s), fp - fm), dtype=np.float64)
    return visc
