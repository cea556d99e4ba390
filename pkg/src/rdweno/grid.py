"""Uniform 1D grids, multi-species state storage and Dirichlet boundary handling."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

GHOST_WIDTH = 3
MIN_CELLS = 6


class DomainError(ValueError):
    """Raised for an invalid interval or a grid too coarse for the 6-point stencil."""


@dataclass(frozen=True)
class Grid:
    a: float
    b: float
    n_cells: int
    dx: float

    @property
    def n_points(self) -> int:
        return self.n_cells + 1

    @property
    def x(self) -> np.ndarray:
        return self.a + np.arange(self.n_points) * self.dx


def make_grid(a: float, b: float, n_cells: int) -> Grid:
    a, b = float(a), float(b)
    if not b > a:
        raise DomainError(f"need b > a, got a={a}, b={b}")
    if int(n_cells) != n_cells or n_cells < MIN_CELLS:
        raise DomainError(f"n_cells must be an integer >= {MIN_CELLS}, got {n_cells}")
    n_cells = int(n_cells)
    return Grid(a, b, n_cells, (b - a) / n_cells)


@dataclass(frozen=True)
class BoundarySpec:
    left_values: tuple[float, ...]
    right_values: tuple[float, ...]

    def __post_init__(self):
        if len(self.left_values) != len(self.right_values):
            raise ValueError("left and right boundary values differ in species count")

    @property
    def species_count(self) -> int:
        return len(self.left_values)


@dataclass
class StateField:
    """Solution values, one contiguous row per species, ``values.shape == (n_species, N + 1)``."""

    values: np.ndarray
    blown_up: bool = field(default=False)

    def __post_init__(self):
        self.values = np.ascontiguousarray(np.atleast_2d(np.asarray(self.values, dtype=float)))
        if self.values.ndim != 2:
            raise ValueError(f"state values must be 2D, got shape {self.values.shape}")

    @property
    def species_count(self) -> int:
        return self.values.shape[0]

    @property
    def n_points(self) -> int:
        return self.values.shape[1]

    def copy(self) -> StateField:
        return StateField(self.values.copy(), self.blown_up)

    def check_grid(self, grid: Grid) -> None:
        if self.n_points != grid.n_points:
            raise ValueError(f"field has {self.n_points} points per species, grid has {grid.n_points}")


def _check_bc(field_: StateField, bc: BoundarySpec) -> None:
    if bc.species_count != field_.species_count:
        raise ValueError(
            f"boundary spec has {bc.species_count} species, field has {field_.species_count}"
        )


def extend_with_ghosts(field_: StateField, bc: BoundarySpec, ghost_width: int = GHOST_WIDTH) -> np.ndarray:
    """Pad each species row with ``ghost_width`` copies of its Dirichlet value on either side."""
    _check_bc(field_, bc)
    n_species, n_points = field_.values.shape
    out = np.empty((n_species, n_points + 2 * ghost_width))
    out[:, ghost_width:ghost_width + n_points] = field_.values
    out[:, :ghost_width] = np.asarray(bc.left_values, dtype=float)[:, None]
    out[:, ghost_width + n_points:] = np.asarray(bc.right_values, dtype=float)[:, None]
    return out


def restrict_interior(extended: np.ndarray, ghost_width: int = GHOST_WIDTH) -> np.ndarray:
    return extended[:, ghost_width:extended.shape[1] - ghost_width]


def pin_boundaries(values: np.ndarray, bc: BoundarySpec) -> None:
    """In-place variant of :func:`apply_dirichlet` for raw ``(n_species, N + 1)`` arrays."""
    values[:, 0] = bc.left_values
    values[:, -1] = bc.right_values


def apply_dirichlet(field_: StateField, bc: BoundarySpec) -> StateField:
    _check_bc(field_, bc)
    out = field_.copy()
    pin_boundaries(out.values, bc)
    return out
