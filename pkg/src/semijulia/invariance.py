"""Numerical invariance checks for masks under generator sets.

Forward: images of sampled marked centers must land in the (1-cell
dilated) mask; backward: every truncated inverse branch of a sampled
marked center must land there too.  The dilation absorbs the one-cell
boundary resolution of any grid mask.  Samples are drawn from marked
cell centers with a seeded generator, so reports are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .families import BranchRequest, GeneratorSpec, eval_generator, inverse_images
from .grid import SPHERE, SetMask

_BOX3 = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True)
class InvarianceReport:
    direction: str  # "forward" | "backward"
    samples_tested: int
    violations: int
    excluded_outside: int
    worst_witness: tuple[complex, int] | None

    @property
    def violation_fraction(self) -> float:
        return self.violations / self.samples_tested


def _sample_centers(m: SetMask, samples: int, seed: int) -> np.ndarray:
    centers = m.marked_centers()
    if centers.size == 0:
        raise ValueError("invariance checks require a nonempty mask")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, centers.size, size=samples)
    return centers[idx]


def _tolerant_bits(m: SetMask, tolerance_cells: int = 1) -> np.ndarray:
    if tolerance_cells == 0:
        return m.bits
    return ndimage.binary_dilation(m.bits, structure=_BOX3, iterations=tolerance_cells)


def _membership(m: SetMask, tol_bits: np.ndarray, pts: np.ndarray):
    """(inside_viewport, member) flags for an array of points.

    Under the sphere metric a point at or beyond the horizon counts as
    landing on the infinity cell.
    """
    vp = m.viewport
    row, col, ok = vp.locate(pts)
    member = np.zeros(pts.shape, dtype=bool)
    member[ok] = tol_bits[row[ok], col[ok]]
    considered = ok.copy()
    if vp.metric == SPHERE:
        finite = np.isfinite(pts)
        at_inf = finite & ~ok & (np.abs(pts) >= vp.horizon)
        member[at_inf] = m.infinity_bit
        considered |= at_inf
    return considered, member


def forward_invariance(
    m: SetMask,
    gens: list[GeneratorSpec],
    samples: int = 2000,
    seed: int = 0,
    tolerance_cells: int = 1,
) -> InvarianceReport:
    """Check f(z) stays in the mask for sampled marked z and every generator."""
    pts = _sample_centers(m, samples, seed)
    tol = _tolerant_bits(m, tolerance_cells)
    violated = np.zeros(samples, dtype=bool)
    excluded = 0
    worst = None
    worst_dist = -1.0
    dist_map = ndimage.distance_transform_cdt(~m.bits, metric="chessboard")
    for gi, g in enumerate(gens):
        imgs = np.array([eval_generator(g, z) for z in pts])
        considered, member = _membership(m, tol, imgs)
        excluded += int(np.count_nonzero(~considered))
        bad = considered & ~member
        violated |= bad
        for i in np.nonzero(bad)[0]:
            row, col, ok = m.viewport.locate(np.array([imgs[i]]))
            d = float(dist_map[row[0], col[0]]) if ok[0] else 0.0
            if d > worst_dist:
                worst_dist = d
                worst = (complex(pts[i]), gi)
    return InvarianceReport("forward", samples, int(np.count_nonzero(violated)), excluded, worst)


def backward_invariance(
    m: SetMask,
    gens: list[GeneratorSpec],
    branch_request: BranchRequest,
    samples: int = 2000,
    seed: int = 0,
    tolerance_cells: int = 1,
) -> InvarianceReport:
    """Check every truncated preimage of sampled marked z stays in the mask."""
    pts = _sample_centers(m, samples, seed)
    tol = _tolerant_bits(m, tolerance_cells)
    vp = m.viewport
    violated = np.zeros(samples, dtype=bool)
    excluded = 0
    worst = None
    worst_dist = -1.0
    dist_map = ndimage.distance_transform_cdt(~m.bits, metric="chessboard")
    for gi, g in enumerate(gens):
        for i, z in enumerate(pts):
            pres = inverse_images(g, complex(z), branch_request)
            for p in pres:
                if not vp.contains(p):
                    excluded += 1
                    continue
                row, col = vp.cell_index(p)
                if not tol[row, col]:
                    violated[i] = True
                    d = float(dist_map[row, col])
                    if d > worst_dist:
                        worst_dist = d
                        worst = (complex(z), gi)
    return InvarianceReport("backward", samples, int(np.count_nonzero(violated)), excluded, worst)


def complete_invariance(
    m: SetMask,
    gens: list[GeneratorSpec],
    branch_request: BranchRequest,
    samples: int = 2000,
    seed: int = 0,
    tolerance_cells: int = 1,
) -> tuple[InvarianceReport, InvarianceReport]:
    """Forward and backward reports over the same sample set."""
    fwd = forward_invariance(m, gens, samples, seed, tolerance_cells)
    bwd = backward_invariance(m, gens, branch_request, samples, seed, tolerance_cells)
    return fwd, bwd
