"""Uniform cell-centered grids and cell-averaged solution fields.

All models in this package live on these containers: 1D/2D tensor-product
meshes plus a Field wrapper holding one value (or a small vector) per cell.
Fields are plain value types; every operation returns a new Field.
"""

from dataclasses import dataclass, field, replace
import numpy as np

__all__ = [
    "Grid1D",
    "Grid2D",
    "Field",
    "make_grid_1d",
    "make_grid_2d",
    "project_function",
    "save_snapshot",
    "load_snapshot",
]


@dataclass(frozen=True)
class Grid1D:
    """Uniform cell-centered mesh on [x_min, x_max] with n_cells cells."""

    n_cells: int
    x_min: float
    x_max: float
    dx: float = field(compare=False)
    centers: np.ndarray = field(compare=False, repr=False)

    @property
    def cell_volume(self):
        return self.dx


@dataclass(frozen=True)
class Grid2D:
    """Tensor product of two uniform 1D meshes (x fast axis, y slow axis)."""

    nx: int
    ny: int
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    dx: float = field(compare=False)
    dy: float = field(compare=False)
    x_centers: np.ndarray = field(compare=False, repr=False)
    y_centers: np.ndarray = field(compare=False, repr=False)

    @property
    def n_cells(self):
        return self.nx * self.ny

    @property
    def cell_volume(self):
        return self.dx * self.dy

    def meshgrid(self):
        """Cell-center coordinate arrays X, Y of shape (ny, nx)."""
        return np.meshgrid(self.x_centers, self.y_centers, indexing="xy")


def make_grid_1d(n_cells, x_min, x_max):
    """Build a uniform 1D grid; centers[i] = x_min + (i + 1/2) dx."""
    n_cells = int(n_cells)
    if n_cells < 2:
        raise ValueError(f"need at least 2 cells, got {n_cells}")
    if not x_max > x_min:
        raise ValueError(f"empty interval [{x_min}, {x_max}]")
    dx = (x_max - x_min) / n_cells
    centers = x_min + (np.arange(n_cells) + 0.5) * dx
    return Grid1D(n_cells, float(x_min), float(x_max), dx, centers)


def make_grid_2d(nx, ny, x_min, x_max, y_min, y_max):
    """Build a uniform 2D tensor-product grid."""
    gx = make_grid_1d(nx, x_min, x_max)
    gy = make_grid_1d(ny, y_min, y_max)
    return Grid2D(gx.n_cells, gy.n_cells, gx.x_min, gx.x_max, gy.x_min,
                  gy.x_max, gx.dx, gy.dx, gx.centers, gy.centers)


@dataclass(frozen=True)
class Field:
    """Cell-averaged values on a grid.

    data shape: (n,) for 1D scalar, (n, components) for 1D systems,
    (ny, nx) for 2D scalar.
    """

    grid: object
    data: np.ndarray
    components: int = 1

    def __post_init__(self):
        expected = self.grid.n_cells * self.components
        if self.data.size != expected:
            raise ValueError(
                f"data size {self.data.size} != n_cells*components {expected}")

    def with_data(self, data):
        return replace(self, data=np.asarray(data, dtype=float))

    def copy(self):
        return self.with_data(self.data.copy())

    def validate(self):
        if not np.all(np.isfinite(self.data)):
            raise ValueError("field contains non-finite entries")
        return self

    def same_layout(self, other):
        return self.grid == other.grid and self.components == other.components

    # value-type arithmetic (exact per-entry IEEE operations)
    def __add__(self, other):
        return self.with_data(self.data + other.data)

    def __sub__(self, other):
        return self.with_data(self.data - other.data)

    def __mul__(self, a):
        return self.with_data(self.data * float(a))

    __rmul__ = __mul__

    def axpy(self, a, other):
        """self + a*other in one pass."""
        return self.with_data(self.data + float(a) * other.data)


def project_function(grid, f, components=1):
    """Field with data[i] = f(centers[i]) (midpoint-rule cell averages).

    f must accept numpy arrays: f(x) on a Grid1D, f(X, Y) on a Grid2D
    (X, Y of shape (ny, nx)).
    """
    if isinstance(grid, Grid2D):
        X, Y = grid.meshgrid()
        data = np.asarray(f(X, Y), dtype=float)
    else:
        data = np.asarray(f(grid.centers), dtype=float)
        data = np.broadcast_to(data, (grid.n_cells,) if components == 1 else
                               (grid.n_cells, components)).astype(float)
    if not np.all(np.isfinite(data)):
        raise ValueError("function produced non-finite values at cell centers")
    return Field(grid, data, components)


def save_snapshot(field, path):
    """Write a plain-text snapshot, 17 significant digits.

    1D scalar: one `x value` line per cell; 1D system: `x u0 u1 ...`;
    2D: one ny-by-nx matrix block per component.
    """
    fmt = "%.17g"
    with open(path, "w") as fh:
        if isinstance(field.grid, Grid2D):
            data = field.data.reshape(field.grid.ny, field.grid.nx, -1)
            for c in range(data.shape[2]):
                for row in data[:, :, c]:
                    fh.write(" ".join(fmt % v for v in row) + "\n")
        else:
            data = field.data.reshape(field.grid.n_cells, -1)
            for x, row in zip(field.grid.centers, data):
                fh.write(" ".join(fmt % v for v in (x, *row)) + "\n")


def load_snapshot(grid, path, components=1):
    """Read a snapshot written by save_snapshot back onto its grid."""
    raw = np.loadtxt(path)
    if isinstance(grid, Grid2D):
        data = raw.reshape(components, grid.ny, grid.nx)
        data = np.moveaxis(data, 0, -1)
        if components == 1:
            data = data[:, :, 0]
        return Field(grid, data, components)
    raw = raw.reshape(grid.n_cells, 1 + components)
    data = raw[:, 1:] if components > 1 else raw[:, 1]
    return Field(grid, data.copy(), components)
