"""Time integration: CFL step control, the four-color edge sweeps, the cell
volume integral and the final conservative update.

One step performs: free-surface detection, well-balanced reconstruction of
face states at t^n + dt/2, the four edge-group sweeps (fixed order, each
group conflict-free so any thread count gives bit-identical results), the
volume integral and the buffer-swapped update.
"""

import time
from dataclasses import dataclass, field

import numba
import numpy as np

from . import kernels
from .errors import SimulationError
from .grid import BoundarySpec, enumerate_edges
from .state import prim_to_cons

__all__ = ["Simulation", "set_workers", "compute_dt", "advance_step",
           "total_mass"]

_ZERO4 = np.zeros(4)


def set_workers(n):
    """Pin the worker-thread count; results are bit-identical for any n."""
    limit = numba.config.NUMBA_NUM_THREADS
    numba.set_num_threads(max(1, min(int(n), limit)))


def _inflow_conserved(cond):
    if cond.kind != "inflow":
        return _ZERO4
    q = prim_to_cons(cond.state, 0.0)
    return np.ascontiguousarray(q[:4])


@dataclass
class StepStats:
    dt: float = 0.0
    max_rate: float = 0.0
    mass: float = 0.0
    cells_per_second: float = 0.0


class Simulation:
    """Double-buffered simulation state plus preallocated work arrays."""

    def __init__(self, grid, params, q0, boundary=None, cfl=0.45, workers=1):
        if not 0.0 < cfl < 1.0:
            raise SimulationError(f"cfl must lie in (0, 1), got {cfl}")
        self.grid = grid
        self.params = params
        self.boundary = boundary if boundary is not None else BoundarySpec()
        self.cfl = float(cfl)
        self.t = 0.0
        self.step_count = 0
        self.stats = StepStats()
        set_workers(workers)

        nx, ny = grid.nx, grid.ny
        q0 = np.asarray(q0, dtype=np.float64)
        if q0.shape != (nx, ny, 5):
            raise SimulationError(f"q0 must have shape {(nx, ny, 5)}, "
                                  f"got {q0.shape}")
        self.q = np.ascontiguousarray(q0.copy())
        self.q_next = np.zeros_like(self.q)

        self.edges = enumerate_edges(grid, self.boundary)
        self._groups = [(name, np.ascontiguousarray(a), np.ascontiguousarray(b),
                         np.ascontiguousarray(c))
                        for name, a, b, c in self.edges.groups]

        self.y0s = np.zeros(nx)
        self.aeqs = np.ones(nx)
        self._y0s_prev = np.full(nx, np.nan)
        self._col_rate = np.zeros(nx)
        self._ycent = np.ascontiguousarray(grid.y_centers)
        self._yfaces = np.ascontiguousarray(grid.y_faces)
        self.rhoE_c = np.zeros((nx, ny))
        self.rhoE_fy = np.zeros((nx, ny + 1))
        self.rate = np.zeros((nx, ny))
        self.quiet = np.zeros((nx, ny), dtype=np.uint8)
        self.psi = np.zeros((nx, ny, 5))
        self.fW = np.zeros((nx, ny, 5))
        self.fE = np.zeros((nx, ny, 5))
        self.fS = np.zeros((nx, ny, 5))
        self.fN = np.zeros((nx, ny, 5))
        self.vol = np.zeros((nx, ny, 5))
        self.DW = np.zeros((nx, ny, 5))
        self.DE = np.zeros((nx, ny, 5))
        self.DS = np.zeros((nx, ny, 5))
        self.DN = np.zeros((nx, ny, 5))
        self._flags = np.zeros((nx, ny), dtype=np.uint8)

        self._bc_codes = tuple(kernels.BC_REFLECTIVE
                               if self.boundary.side(s).kind == "reflective"
                               else kernels.BC_TRANSMISSIVE
                               for s in ("left", "right", "bottom", "top"))
        self._inflow = {s: _inflow_conserved(self.boundary.side(s))
                        for s in ("left", "right", "bottom", "top")}

    # -- diagnostics -------------------------------------------------------

    def primitive_fields(self):
        """(rho, u, v, alpha, p) arrays; solid cells hold zeros."""
        q = self.q
        fluid = self.grid.mask != 0
        rho = np.zeros_like(q[:, :, 0])
        u = np.zeros_like(rho)
        v = np.zeros_like(rho)
        p = np.zeros_like(rho)
        alpha = np.where(fluid, q[:, :, 3], 0.0)
        np.divide(q[:, :, 0], q[:, :, 3], out=rho, where=fluid)
        np.divide(q[:, :, 1], q[:, :, 0], out=u, where=fluid)
        np.divide(q[:, :, 2], q[:, :, 0], out=v, where=fluid)
        pr = self.params
        if pr.gamma == 1.0:
            np.multiply(rho / pr.rho0 - 1.0, pr.k0, out=p, where=fluid)
        else:
            np.multiply((rho / pr.rho0) ** pr.gamma - 1.0, pr.k0, out=p,
                        where=fluid)
        return rho, u, v, alpha, p

    def total_mass(self):
        """Sum of alpha*rho times cell area over fluid cells."""
        fluid = self.grid.mask != 0
        return float(np.sum(self.q[:, :, 0][fluid]) * self.grid.cell_area)

    def detect(self):
        kernels.detect_columns(self.q, self.grid.mask, self._yfaces,
                               self.grid.dy, self.y0s, self.aeqs)
        return self.y0s, self.aeqs

    def _raise_bad_cells(self, what):
        bad = np.argwhere(self._flags != 0)
        i, j = (int(v) for v in bad[0])
        raise SimulationError(f"{what}; q = {self.q[i, j]}",
                              step=self.step_count, cell=(i, j))

    def max_rate(self):
        """Detect columns, refresh profiles and return the CFL rate max."""
        g = self.grid
        p = self.params
        self._flags[:] = 0
        kernels.prepare_step(self.q, g.mask, self._yfaces, self._ycent,
                             g.dx, g.dy, p.k0, p.rho0, p.gamma, p.g,
                             self.y0s, self.aeqs, self._y0s_prev,
                             self.rhoE_c, self.rhoE_fy, self._col_rate,
                             self._flags)
        rmax = float(self._col_rate.max())
        if self._flags.any():
            self._raise_bad_cells("non-admissible cell state")
        if not np.isfinite(rmax) or rmax <= 0.0:
            raise SimulationError(f"non-finite wave speed (max rate {rmax})",
                                  step=self.step_count)
        return rmax

    # -- stepping ----------------------------------------------------------

    def advance(self, max_dt=None):
        """One full update; returns the dt actually taken."""
        wall0 = time.perf_counter()
        g = self.grid
        p = self.params

        rmax = self.max_rate()
        dt = self.cfl / rmax
        if max_dt is not None and dt > max_dt:
            dt = float(max_dt)

        self._flags[:] = 0
        kernels.pass_reconstruct(self.q, g.mask, self.aeqs, self.rhoE_c,
                                 self.rhoE_fy, self._ycent, self._yfaces,
                                 g.dx, g.dy, 0.5 * dt, *self._bc_codes,
                                 p.epsilon, p.k0, p.rho0, p.gamma, p.g,
                                 self.fW, self.fE, self.fS, self.fN,
                                 self.vol, self.psi, self.quiet, self._flags)
        if self._flags.any():
            self._raise_bad_cells("non-admissible reconstructed face state")

        for name, a, b, c in self._groups:
            if name.startswith("vertical"):
                kernels.sweep_vertical(a, b, c, self.fW, self.fE,
                                       self.DW, self.DE, self.y0s, self.aeqs,
                                       self.quiet, self._inflow["left"],
                                       self._inflow["right"],
                                       p.k0, p.rho0, p.gamma)
            else:
                kernels.sweep_horizontal(a, b, c, self.fS, self.fN,
                                         self.DS, self.DN, self.y0s,
                                         self.aeqs, self.quiet,
                                         self._inflow["bottom"],
                                         self._inflow["top"],
                                         p.k0, p.rho0, p.gamma, p.g)

        self._flags[:] = 0
        kernels.apply_update(self.q, self.q_next, g.mask,
                             self.fW, self.fE, self.fS, self.fN,
                             self.DW, self.DE, self.DS, self.DN, self.vol,
                             dt / g.dx, dt / g.dy, dt / g.cell_area,
                             p.k0, p.rho0, p.gamma, p.epsilon, self._flags)
        if self._flags.any():
            self._raise_bad_cells("negative mass or volume fraction after "
                                  "update")

        self.q, self.q_next = self.q_next, self.q
        self.t += dt
        self.step_count += 1

        wall = time.perf_counter() - wall0
        self.stats.dt = dt
        self.stats.max_rate = rmax
        self.stats.cells_per_second = (g.fluid_cell_count() / wall
                                       if wall > 0.0 else 0.0)
        return dt

    def run_until(self, t_end, callback=None, max_steps=None):
        """Advance to t_end, clamping the last steps to land exactly."""
        tiny = 1.0e-12 * max(1.0, abs(t_end))
        while self.t < t_end - tiny:
            self.advance(max_dt=t_end - self.t)
            if callback is not None:
                callback(self)
            if max_steps is not None and self.step_count >= max_steps:
                break
        return self.t


def compute_dt(sim, cfl=None):
    """CFL time step cfl / max((|u|+c)/dx + (|v|+c)/dy) over fluid cells."""
    c = sim.cfl if cfl is None else float(cfl)
    if not 0.0 < c < 1.0:
        raise SimulationError(f"cfl must lie in (0, 1), got {c}")
    return c / sim.max_rate()


def advance_step(sim, max_dt=None):
    return sim.advance(max_dt=max_dt)


def total_mass(sim):
    return sim.total_mass()
