"""Second-order well-balanced MUSCL reconstruction of fluctuations with
Barth-Jespersen limiting and the discrete time-derivative term.

The cell-local math lives in kernels.cell_reconstruct; this module provides
the per-operation surface on top of it. A CellPolynomial carries the inputs
of one cell's reconstruction; face values are evaluated on demand (the
reconstruction is evaluated, never projected back, so the stored average is
untouched).
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .params import ModelParams

__all__ = ["fluctuations", "muscl_gradient", "barth_jespersen",
           "time_derivative", "CellPolynomial", "cell_polynomial",
           "edge_values", "cell_volume_integral"]


def fluctuations(q_field, y0s, alpha_eqs, grid, params):
    """Q - Q^E against each column's equilibrium; height component is zero."""
    nx, ny = grid.nx, grid.ny
    out = np.zeros((nx, ny, 5))
    yc = grid.y_centers
    for i in range(nx):
        for j in range(ny):
            if grid.mask[i, j] == 0:
                continue
            r = kernels.eq_rho(yc[j], y0s[i], params.k0, params.rho0, params.g)
            out[i, j, 0] = q_field[i, j, 0] - alpha_eqs[i] * r
            out[i, j, 1] = q_field[i, j, 1]
            out[i, j, 2] = q_field[i, j, 2]
            out[i, j, 3] = q_field[i, j, 3] - alpha_eqs[i]
            out[i, j, 4] = q_field[i, j, 4] - yc[j]
    return out


def muscl_gradient(stencil, dx, dy):
    """Central-difference slopes from a 3x3 fluctuation stencil.

    stencil[di+1, dj+1] holds the fluctuation of neighbor (i+di, j+dj);
    only the four face neighbors enter the slopes. Returns (2, ncomp).
    """
    st = np.asarray(stencil, dtype=np.float64)
    gx = (st[2, 1] - st[0, 1]) / (2.0 * dx)
    gy = (st[1, 2] - st[1, 0]) / (2.0 * dy)
    return np.stack([gx, gy])


def barth_jespersen(center, gradient, face_neighbors, dx, dy):
    """Largest psi in [0,1] keeping face-midpoint values inside the local
    min/max of center and face neighbors; applied per scalar component."""
    center = np.atleast_1d(np.asarray(center, dtype=np.float64))
    grad = np.atleast_2d(np.asarray(gradient, dtype=np.float64))
    nbrs = np.asarray(face_neighbors, dtype=np.float64).reshape(4, -1)
    hx, hy = 0.5 * dx, 0.5 * dy
    psi = np.ones_like(center)
    for m in range(center.size):
        lo = min(center[m], nbrs[:, m].min())
        hi = max(center[m], nbrs[:, m].max())
        ps = 1.0
        for d in (grad[0, m] * hx, -grad[0, m] * hx,
                  grad[1, m] * hy, -grad[1, m] * hy):
            if d > 0.0:
                ps = min(ps, (hi - center[m]) / d)
            elif d < 0.0:
                ps = min(ps, (lo - center[m]) / d)
        psi[m] = ps
    return psi if psi.size > 1 else float(psi[0])


def time_derivative(q_cell, limited_grad, y0, alpha_eq, params):
    """dQ/dt from the quasi-linear form with equilibrium + limited
    fluctuation gradients; exactly balances to zero on equilibrium cells."""
    q = np.asarray(q_cell, dtype=np.float64)
    gxl = np.asarray(limited_grad, dtype=np.float64)[0]
    gyl = np.asarray(limited_grad, dtype=np.float64)[1]
    rho = q[0] / q[3]
    u = q[1] / q[0]
    v = q[2] / q[0]
    p = kernels.tait_p(rho, params.k0, params.rho0, params.gamma)
    c2 = kernels.sound_c2(rho, params.k0, params.rho0, params.gamma)
    r_eq = kernels.eq_rho(q[4], y0, params.k0, params.rho0, params.g)
    e1 = -alpha_eq * (params.g * params.rho0 / params.k0) * r_eq
    a1 = kernels.a1_apply(u, v, c2, rho, p,
                          gxl[0], gxl[1], gxl[2], gxl[3], gxl[4])
    a2 = kernels.a2_apply(u, v, c2, rho, p, q[3], params.g,
                          gyl[0] + e1, gyl[1], gyl[2], gyl[3], gyl[4] + 1.0)
    return -(np.array(a1) + np.array(a2))


@dataclass
class CellPolynomial:
    """Inputs of one cell's space-time reconstruction.

    q_cell: conserved cell average; fluct_stencil: (3,3,5) fluctuations of
    the cell and its neighborhood (ghost-resolved by the caller); y0 /
    alpha_eq: column equilibrium; y_center: cell-center height.
    """

    q_cell: np.ndarray
    fluct_stencil: np.ndarray
    y0: float
    alpha_eq: float
    y_center: float
    dx: float
    dy: float
    params: ModelParams
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def q_eq(self):
        r = kernels.eq_rho(self.y_center, self.y0, self.params.k0,
                           self.params.rho0, self.params.g)
        return np.array([self.alpha_eq * r, 0.0, 0.0, self.alpha_eq,
                         self.y_center])

    @property
    def q_fluct(self):
        return self.fluct_stencil[1, 1]

    @property
    def grad_fluct(self):
        return muscl_gradient(self.fluct_stencil, self.dx, self.dy)

    @property
    def second_order(self):
        return self.q_cell[3] > 10.0 * self.params.epsilon

    @property
    def limiter(self):
        if not self.second_order:
            return np.zeros(5)
        st = self.fluct_stencil
        nbrs = np.stack([st[0, 1], st[2, 1], st[1, 0], st[1, 2]])
        return np.atleast_1d(barth_jespersen(st[1, 1], self.grad_fluct, nbrs,
                                             self.dx, self.dy))

    @property
    def dt_term(self):
        if not self.second_order:
            return np.zeros(5)
        lim = self.limiter
        return time_derivative(self.q_cell, lim * self.grad_fluct,
                               self.y0, self.alpha_eq, self.params)

    def _evaluate(self, t_offset):
        """Run the cell kernel on a local 3x3 patch; returns faces/vol/psi.

        Neighbor cells are synthesized so that their fluctuations against
        the column equilibrium reproduce the stored stencil.
        """
        p = self.params
        mask = np.ones((3, 3), dtype=np.uint8)
        ycent = self.y_center + np.array([-self.dy, 0.0, self.dy])
        yfaces = self.y_center + (np.arange(4) - 1.5) * self.dy
        rhoE_c = np.empty((3, 3))
        rhoE_fy = np.empty((3, 4))
        for j in range(3):
            rhoE_c[:, j] = kernels.eq_rho(ycent[j], self.y0, p.k0, p.rho0, p.g)
        for j in range(4):
            rhoE_fy[:, j] = kernels.eq_rho(yfaces[j], self.y0, p.k0, p.rho0, p.g)
        fl = np.asarray(self.fluct_stencil, dtype=np.float64)
        q = np.zeros((3, 3, 5))
        for a in range(3):
            for b in range(3):
                q[a, b, 0] = fl[a, b, 0] + self.alpha_eq * rhoE_c[a, b]
                q[a, b, 1] = fl[a, b, 1]
                q[a, b, 2] = fl[a, b, 2]
                q[a, b, 3] = fl[a, b, 3] + self.alpha_eq
                q[a, b, 4] = fl[a, b, 4] + ycent[b]
        q[1, 1] = self.q_cell
        fW = np.zeros((3, 3, 5))
        fE = np.zeros((3, 3, 5))
        fS = np.zeros((3, 3, 5))
        fN = np.zeros((3, 3, 5))
        vol = np.zeros((3, 3, 5))
        psi = np.zeros((3, 3, 5))
        quiet = np.zeros((3, 3), dtype=np.uint8)
        aeqs = np.full(3, self.alpha_eq)
        kernels.cell_reconstruct(q, mask, 1, 1, aeqs,
                                 rhoE_c, rhoE_fy, ycent, yfaces,
                                 self.dx, self.dy, float(t_offset),
                                 kernels.BC_TRANSMISSIVE, kernels.BC_TRANSMISSIVE,
                                 kernels.BC_TRANSMISSIVE, kernels.BC_TRANSMISSIVE,
                                 p.epsilon, p.k0, p.rho0, p.gamma, p.g,
                                 fW, fE, fS, fN, vol, psi, quiet)
        return {"W": fW[1, 1], "E": fE[1, 1], "S": fS[1, 1], "N": fN[1, 1],
                "vol": vol[1, 1], "psi": psi[1, 1]}


def cell_polynomial(q_cell, fluct_stencil, y0, alpha_eq, y_center, dx, dy,
                    params):
    return CellPolynomial(np.asarray(q_cell, dtype=np.float64),
                          np.asarray(fluct_stencil, dtype=np.float64),
                          float(y0), float(alpha_eq), float(y_center),
                          float(dx), float(dy), params)


def edge_values(poly, t_offset=0.0):
    """Face-midpoint conserved states of the four sides at t^n + t_offset.

    Second order only where alpha > 10 epsilon; otherwise the cell value
    with the equilibrium re-centered at the face height.
    """
    res = poly._evaluate(t_offset)
    return {side: res[side].copy() for side in ("W", "E", "S", "N")}


def cell_volume_integral(poly, t_offset=0.0):
    """Volume integral of the non-conservative terms over the cell."""
    return poly._evaluate(t_offset)["vol"].copy()
