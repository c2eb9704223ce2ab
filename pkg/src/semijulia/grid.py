"""Grid geometry and boolean set masks.

A Viewport discretizes a rectangle of the plane into rows x cols
cells; a SetMask marks a subset of those cells (plus an infinity flag
under the sphere metric).  All morphology is 8-neighbor (Chebyshev).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

PLANE = "plane"
SPHERE = "sphere"

_BOX3 = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True)
class Viewport:
    center: complex = 0j
    half_width: float = 1.0
    half_height: float = 1.0
    cols: int = 256
    rows: int = 256
    metric: str = PLANE

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if self.half_width <= 0 or self.half_height <= 0:
            raise ValueError("half_width and half_height must be positive")
        if self.cols < 1 or self.rows < 1:
            raise ValueError("cols and rows must be positive")
        if self.metric not in (PLANE, SPHERE):
            raise ValueError(f"metric must be {PLANE!r} or {SPHERE!r}")

    @property
    def cell_width(self) -> float:
        return 2.0 * self.half_width / self.cols

    @property
    def cell_height(self) -> float:
        return 2.0 * self.half_height / self.rows

    @property
    def horizon(self) -> float:
        """Radius past which a point counts as the sphere's infinity cell."""
        return abs(complex(self.half_width, self.half_height) + 0j) + abs(self.center)

    def contains(self, z: complex) -> bool:
        dz = complex(z) - self.center
        return abs(dz.real) <= self.half_width and abs(dz.imag) <= self.half_height

    def cell_index(self, z: complex) -> tuple[int, int]:
        """(row, col) of the cell holding z; row 0 is the top row (max Im)."""
        z = complex(z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError("cell_index requires a finite point")
        if not self.contains(z):
            raise ValueError(f"{z!r} lies outside the viewport")
        dz = z - self.center
        col = int((dz.real + self.half_width) / self.cell_width)
        row = int((self.half_height - dz.imag) / self.cell_height)
        return min(row, self.rows - 1), min(col, self.cols - 1)

    def cell_center(self, row: int, col: int) -> complex:
        x = self.center.real - self.half_width + (col + 0.5) * self.cell_width
        y = self.center.imag + self.half_height - (row + 0.5) * self.cell_height
        return complex(x, y)

    def centers(self) -> np.ndarray:
        """rows x cols complex array of cell centers."""
        xs = self.center.real - self.half_width + (np.arange(self.cols) + 0.5) * self.cell_width
        ys = self.center.imag + self.half_height - (np.arange(self.rows) + 0.5) * self.cell_height
        return xs[None, :] + 1j * ys[:, None]

    def locate(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Vectorized cell lookup: (rows, cols, inside) for an array of points."""
        z = np.asarray(z, dtype=complex)
        dx = z.real - self.center.real
        dy = z.imag - self.center.imag
        col = np.floor((dx + self.half_width) / self.cell_width).astype(np.int64)
        row = np.floor((self.half_height - dy) / self.cell_height).astype(np.int64)
        inside = (
            np.isfinite(z)
            & (col >= 0) & (col < self.cols)
            & (row >= 0) & (row < self.rows)
        )
        return row, col, inside


@dataclass
class SetMask:
    """Boolean cell mask over a viewport. Treat as immutable; ops return new masks."""

    viewport: Viewport
    bits: np.ndarray
    infinity_bit: bool = False

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=bool)
        if bits.shape != (self.viewport.rows, self.viewport.cols):
            raise ValueError(
                f"bits shape {bits.shape} does not match viewport "
                f"{(self.viewport.rows, self.viewport.cols)}"
            )
        self.bits = bits

    @classmethod
    def empty(cls, vp: Viewport) -> "SetMask":
        return cls(vp, np.zeros((vp.rows, vp.cols), dtype=bool))

    @classmethod
    def full(cls, vp: Viewport, infinity: bool = True) -> "SetMask":
        inf_bit = infinity and vp.metric == SPHERE
        return cls(vp, np.ones((vp.rows, vp.cols), dtype=bool), inf_bit)

    @property
    def area_fraction(self) -> float:
        return float(np.count_nonzero(self.bits)) / self.bits.size

    def count(self) -> int:
        return int(np.count_nonzero(self.bits))

    def is_empty(self) -> bool:
        return not self.bits.any() and not self.infinity_bit

    def complement(self) -> "SetMask":
        inf = (not self.infinity_bit) if self.viewport.metric == SPHERE else False
        return SetMask(self.viewport, ~self.bits, inf)

    def marked_centers(self) -> np.ndarray:
        """Complex coordinates of marked cell centers, row-major order."""
        rr, cc = np.nonzero(self.bits)
        vp = self.viewport
        xs = vp.center.real - vp.half_width + (cc + 0.5) * vp.cell_width
        ys = vp.center.imag + vp.half_height - (rr + 0.5) * vp.cell_height
        return xs + 1j * ys

    def same_viewport(self, other: "SetMask") -> bool:
        return self.viewport == other.viewport

    def __eq__(self, other):
        if not isinstance(other, SetMask):
            return NotImplemented
        return (
            self.viewport == other.viewport
            and self.infinity_bit == other.infinity_bit
            and bool(np.array_equal(self.bits, other.bits))
        )


def _require_same_viewport(m1: SetMask, m2: SetMask):
    if m1.viewport != m2.viewport:
        raise ValueError("masks live on different viewports")


def union(m1: SetMask, m2: SetMask) -> SetMask:
    _require_same_viewport(m1, m2)
    return SetMask(m1.viewport, m1.bits | m2.bits, m1.infinity_bit or m2.infinity_bit)


def intersect(m1: SetMask, m2: SetMask) -> SetMask:
    _require_same_viewport(m1, m2)
    return SetMask(m1.viewport, m1.bits & m2.bits, m1.infinity_bit and m2.infinity_bit)


def difference_count(m1: SetMask, m2: SetMask) -> int:
    """Number of cells marked in m1 but not in m2."""
    _require_same_viewport(m1, m2)
    return int(np.count_nonzero(m1.bits & ~m2.bits))


def dilate(m: SetMask, radius_cells: int) -> SetMask:
    """Chebyshev dilation: mark everything within `radius_cells` of a mark."""
    if radius_cells < 1:
        raise ValueError("dilation radius must be >= 1")
    bits = ndimage.binary_dilation(m.bits, structure=_BOX3, iterations=radius_cells)
    return SetMask(m.viewport, bits, m.infinity_bit)


def interior_disk_exists(m: SetMask, radius_cells: int) -> tuple[bool, tuple[int, int] | None]:
    """Look for a cell whose full Chebyshev-radius neighborhood is marked.

    The witness neighborhood must lie entirely inside the grid (edge
    cells cannot witness interior).  Among all witnesses the one
    closest to the grid center is returned, scanning row-major on ties.
    """
    if radius_cells < 2:
        raise ValueError("interior disk radius must be >= 2")
    size = 2 * radius_cells + 1
    core = ndimage.binary_erosion(
        m.bits, structure=np.ones((size, size), dtype=bool), border_value=0
    )
    if not core.any():
        return False, None
    rows, cols = m.bits.shape
    rr, cc = np.nonzero(core)
    d2 = (rr - (rows - 1) / 2.0) ** 2 + (cc - (cols - 1) / 2.0) ** 2
    i = int(np.argmin(d2))
    return True, (int(rr[i]), int(cc[i]))


def isolated_cells(m: SetMask) -> list[tuple[int, int]]:
    """Marked cells with all existing 8 neighbors unmarked."""
    foot = _BOX3.copy()
    foot[1, 1] = False  # neighbors only, not the cell itself
    has_marked_neighbor = ndimage.maximum_filter(
        m.bits.astype(np.uint8), footprint=foot, mode="constant", cval=0
    ).astype(bool)
    iso = m.bits & ~has_marked_neighbor
    return [(int(r), int(c)) for r, c in np.argwhere(iso)]


def hausdorff_cells(m1: SetMask, m2: SetMask) -> float:
    """Symmetric Hausdorff distance in Chebyshev cell units."""
    _require_same_viewport(m1, m2)
    if not m1.bits.any() or not m2.bits.any():
        raise ValueError("hausdorff_cells requires two nonempty masks")
    d_to_2 = ndimage.distance_transform_cdt(~m2.bits, metric="chessboard")
    d_to_1 = ndimage.distance_transform_cdt(~m1.bits, metric="chessboard")
    return float(max(d_to_2[m1.bits].max(), d_to_1[m2.bits].max()))


def touches_boundary(m: SetMask) -> bool:
    """True iff some edge-row or edge-column cell is marked."""
    b = m.bits
    return bool(b[0, :].any() or b[-1, :].any() or b[:, 0].any() or b[:, -1].any())
