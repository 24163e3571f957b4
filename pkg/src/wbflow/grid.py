"""Cartesian mesh, obstacle mask, boundary conditions and the four-color
edge partition used by the parallel sweeps."""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .kernels import BC_INFLOW, BC_REFLECTIVE, BC_TRANSMISSIVE

__all__ = ["CartesianGrid", "build_grid", "BoundaryCondition", "BoundarySpec",
           "ghost_state", "EdgeSet", "enumerate_edges"]

_KIND_CODES = {
    "reflective": BC_REFLECTIVE,
    "transmissive": BC_TRANSMISSIVE,
    "inflow": BC_INFLOW,
}


@dataclass(frozen=True)
class CartesianGrid:
    """Cell-centered N x M structured mesh with a fluid/solid mask."""

    nx: int
    ny: int
    x0: float
    y0_origin: float
    dx: float
    dy: float
    mask: np.ndarray  # uint8, 1 = fluid, 0 = solid

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ConfigError(f"grid must be at least 2x2, got "
                              f"{self.nx}x{self.ny}")
        if not (self.dx > 0.0 and self.dy > 0.0):
            raise ConfigError("grid spacings must be positive")

    @property
    def x_centers(self):
        return self.x0 + (np.arange(self.nx) + 0.5) * self.dx

    @property
    def y_centers(self):
        return self.y0_origin + (np.arange(self.ny) + 0.5) * self.dy

    @property
    def x_faces(self):
        return self.x0 + np.arange(self.nx + 1) * self.dx

    @property
    def y_faces(self):
        return self.y0_origin + np.arange(self.ny + 1) * self.dy

    @property
    def cell_area(self):
        return self.dx * self.dy

    def is_fluid(self, i, j):
        return self.mask[i, j] != 0

    def fluid_cell_count(self):
        return int(np.count_nonzero(self.mask))


def build_grid(domain, resolution, obstacles=()):
    """Build the mesh; obstacle rectangles are snapped to cell faces.

    domain: (x_min, x_max, y_min, y_max); resolution: (nx, ny);
    obstacles: iterable of (x_min, x_max, y_min, y_max) rectangles that are
    carved out of the fluid region (at least one cell wide after snapping).
    """
    x_min, x_max, y_min, y_max = (float(v) for v in domain)
    nx, ny = (int(v) for v in resolution)
    if not (x_max > x_min and y_max > y_min):
        raise ConfigError(f"empty domain {domain}")
    if nx < 2 or ny < 2:
        raise ConfigError(f"resolution must be at least 2x2, got {resolution}")
    dx = (x_max - x_min) / nx
    dy = (y_max - y_min) / ny
    mask = np.ones((nx, ny), dtype=np.uint8)
    for rect in obstacles:
        ox0, ox1, oy0, oy1 = (float(v) for v in rect)
        i0 = int(round((ox0 - x_min) / dx))
        i1 = int(round((ox1 - x_min) / dx))
        j0 = int(round((oy0 - y_min) / dy))
        j1 = int(round((oy1 - y_min) / dy))
        if i1 <= i0:
            i1 = i0 + 1
        if j1 <= j0:
            j1 = j0 + 1
        if i0 < 0 or i1 > nx or j0 < 0 or j1 > ny:
            raise ConfigError(f"obstacle {rect} lies outside the domain")
        mask[i0:i1, j0:j1] = 0
    return CartesianGrid(nx, ny, x_min, y_min, dx, dy, mask)


@dataclass(frozen=True)
class BoundaryCondition:
    """One side of the domain.

    kind: reflective | transmissive | inflow. For inflow, `segment` is the
    (lo, hi) coordinate range along the side where the prescribed primitive
    `state` enters; the rest of the side is reflective.
    """

    kind: str = "reflective"
    state: tuple = None
    segment: tuple = None

    def __post_init__(self):
        if self.kind not in _KIND_CODES:
            raise ConfigError(f"unknown boundary kind {self.kind!r}")
        if self.kind == "inflow":
            if self.state is None or self.segment is None:
                raise ConfigError("inflow boundaries need a state and a segment")
            lo, hi = self.segment
            if not hi > lo:
                raise ConfigError(f"empty inflow segment {self.segment}")


@dataclass(frozen=True)
class BoundarySpec:
    left: BoundaryCondition = field(default_factory=BoundaryCondition)
    right: BoundaryCondition = field(default_factory=BoundaryCondition)
    bottom: BoundaryCondition = field(default_factory=BoundaryCondition)
    top: BoundaryCondition = field(default_factory=BoundaryCondition)

    @staticmethod
    def all_reflective():
        return BoundarySpec()

    def side(self, name):
        return getattr(self, name)


def ghost_state(inside, condition, normal):
    """Ghost primitive state across a boundary face.

    normal: ('x' | 'y', +1 | -1), the outward axis and sign. Reflective
    mirrors the normal velocity (the inverse Riemann problem with u.n = 0),
    transmissive copies, inflow returns the prescribed state.
    """
    kind = condition.kind if isinstance(condition, BoundaryCondition) else condition
    w = np.asarray(inside, dtype=float).copy()
    axis, _ = normal
    if kind == "reflective":
        if axis == "x":
            w[1] = -w[1]
        else:
            w[2] = -w[2]
        return w
    if kind == "transmissive":
        return w
    if kind == "inflow":
        return np.asarray(condition.state, dtype=float).copy()
    raise ConfigError(f"unknown boundary kind {kind!r}")


class EdgeSet:
    """All fluid-adjacent edges split into four conflict-free groups.

    Groups (fixed sweep order): vertical-odd, vertical-even, horizontal-odd,
    horizontal-even, by face-index parity. Within a group no two edges touch
    the same cell. bcmode: 0 interior; sign marks which side is a ghost
    (negative = minus side), magnitude is the BC code.
    """

    def __init__(self, grid, boundary):
        self.grid = grid
        self.boundary = boundary
        vi, vj, vb = _vertical_edges(grid, boundary)
        hi, hj, hb = _horizontal_edges(grid, boundary)
        vodd = vi % 2 == 1
        hodd = hj % 2 == 1
        self.groups = (
            ("vertical-odd", vi[vodd], vj[vodd], vb[vodd]),
            ("vertical-even", vi[~vodd], vj[~vodd], vb[~vodd]),
            ("horizontal-odd", hi[hodd], hj[hodd], hb[hodd]),
            ("horizontal-even", hi[~hodd], hj[~hodd], hb[~hodd]),
        )
        self.vertical = (vi, vj, vb)
        self.horizontal = (hi, hj, hb)

    @property
    def n_edges(self):
        return sum(len(g[1]) for g in self.groups)

    def group_cells(self, group_index):
        """Fluid cells each edge of a group touches (for disjointness checks)."""
        name, a, b, bc = self.groups[group_index]
        cells = []
        vertical = name.startswith("vertical")
        for k in range(len(a)):
            touched = []
            if vertical:
                ifc, j, m = int(a[k]), int(b[k]), int(bc[k])
                if m >= 0:
                    touched.append((ifc - 1, j))
                if m <= 0:
                    touched.append((ifc, j))
            else:
                i, jfc, m = int(a[k]), int(b[k]), int(bc[k])
                if m >= 0:
                    touched.append((i, jfc - 1))
                if m <= 0:
                    touched.append((i, jfc))
            cells.append(touched)
        return cells


def _side_mode(cond, coord):
    """BC code for a boundary edge whose face midpoint sits at `coord`."""
    if cond.kind == "inflow":
        lo, hi = cond.segment
        if lo <= coord <= hi:
            return BC_INFLOW
        return BC_REFLECTIVE
    return _KIND_CODES[cond.kind]


def _vertical_edges(grid, boundary):
    mask = grid.mask
    nx, ny = grid.nx, grid.ny
    yc = grid.y_centers
    ifcs, js, bcs = [], [], []
    for ifc in range(nx + 1):
        for j in range(ny):
            left = ifc >= 1 and mask[ifc - 1, j] != 0
            right = ifc <= nx - 1 and mask[ifc, j] != 0
            if not left and not right:
                continue
            if left and right:
                mode = 0
            elif right:
                mode = -(_side_mode(boundary.left, yc[j]) if ifc == 0
                         else BC_REFLECTIVE)
            else:
                mode = (_side_mode(boundary.right, yc[j]) if ifc == nx
                        else BC_REFLECTIVE)
            ifcs.append(ifc)
            js.append(j)
            bcs.append(mode)
    return (np.asarray(ifcs, dtype=np.int64), np.asarray(js, dtype=np.int64),
            np.asarray(bcs, dtype=np.int8))


def _horizontal_edges(grid, boundary):
    mask = grid.mask
    nx, ny = grid.nx, grid.ny
    xc = grid.x_centers
    iis, jfcs, bcs = [], [], []
    for jfc in range(ny + 1):
        for i in range(nx):
            below = jfc >= 1 and mask[i, jfc - 1] != 0
            above = jfc <= ny - 1 and mask[i, jfc] != 0
            if not below and not above:
                continue
            if below and above:
                mode = 0
            elif above:
                mode = -(_side_mode(boundary.bottom, xc[i]) if jfc == 0
                         else BC_REFLECTIVE)
            else:
                mode = (_side_mode(boundary.top, xc[i]) if jfc == ny
                        else BC_REFLECTIVE)
            iis.append(i)
            jfcs.append(jfc)
            bcs.append(mode)
    return (np.asarray(iis, dtype=np.int64), np.asarray(jfcs, dtype=np.int64),
            np.asarray(bcs, dtype=np.int8))


def enumerate_edges(grid, boundary=None):
    """Build the four-group EdgeSet for a grid."""
    if boundary is None:
        boundary = BoundarySpec.all_reflective()
    return EdgeSet(grid, boundary)
