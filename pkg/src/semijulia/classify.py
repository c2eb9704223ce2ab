"""Fatou/Julia classification of points and grids.

A point is classified by the limit behavior of its orbit together
with eight probe orbits started probe_offset away: escape to infinity
(family-specific functional), settling onto an attractor, or
divergence of fates between the center and a probe (the normality
violation proxy).  For the transcendental families escape itself is a
Julia verdict; for the rational family escape is convergence to the
superattracting point at infinity and Julia cells are detected by the
probe test alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _kernels
from .families import (
    POWER_OVER_A,
    SCALED_EXP,
    SCALED_SINE,
    Z_MINUS_EXP_SHIFT,
    GeneratorSpec,
    SemigroupWord,
    attracting_fixed_point,
    enumerate_words,
)
from .grid import SPHERE, SetMask, Viewport

_FAM_CODE = {
    SCALED_SINE: _kernels.FAM_SINE,
    SCALED_EXP: _kernels.FAM_EXP,
    Z_MINUS_EXP_SHIFT: _kernels.FAM_ZES,
    POWER_OVER_A: _kernels.FAM_POW,
}

# probe displacement directions: 8 points of the compass, so that a
# basin boundary crossing a cell is met by a roughly radial probe
# whatever its orientation
_PROBE_DIRS = np.exp(1j * np.pi * np.arange(8) / 4.0)


class Verdict(Enum):
    FATOU = "fatou"
    JULIA = "julia"
    UNDETERMINED = "undetermined"


class Reason(Enum):
    ESCAPED = "escaped"
    CONVERGED_TO_ATTRACTOR = "converged_to_attractor"
    SEPARATED = "separated"
    EXHAUSTED = "exhausted"


_VERDICT_OF = {0: Verdict.UNDETERMINED, 1: Verdict.JULIA, 2: Verdict.FATOU}
_REASON_OF = {
    0: Reason.EXHAUSTED,
    1: Reason.ESCAPED,
    2: Reason.CONVERGED_TO_ATTRACTOR,
    3: Reason.SEPARATED,
}


@dataclass(frozen=True)
class ClassifyParams:
    max_iter: int = 200
    escape_radius: float = 50.0
    attract_tolerance: float = 1e-6
    separation_delta: float = 1.0
    # None: resolved to 3/4 of the ambient cell size at grid entry points
    probe_offset: float | None = None
    undetermined_as_julia: bool = True

    # fallback for point-level classification with no ambient viewport
    POINT_PROBE_OFFSET = 1e-3

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not (self.escape_radius > self.attract_tolerance > 0):
            raise ValueError("need escape_radius > attract_tolerance > 0")
        if self.probe_offset is not None and self.probe_offset <= 0:
            raise ValueError("probe_offset must be positive")
        if self.separation_delta <= 0:
            raise ValueError("separation_delta must be positive")

    def for_viewport(self, vp: Viewport) -> "ClassifyParams":
        """Resolve an unset probe offset to 3/4 of the cell size of vp."""
        if self.probe_offset is not None:
            return self
        cell = min(vp.cell_width, vp.cell_height)
        return ClassifyParams(
            self.max_iter,
            self.escape_radius,
            self.attract_tolerance,
            self.separation_delta,
            0.75 * cell,
            self.undetermined_as_julia,
        )

    def check_against(self, vp: Viewport):
        off = self.for_viewport(vp).probe_offset
        if off >= min(vp.cell_width, vp.cell_height):
            raise ValueError("probe_offset must be below the viewport cell size")


@dataclass(frozen=True)
class OrbitClassification:
    verdict: Verdict
    iterations_used: int
    reason: Reason

    def __post_init__(self):
        ok = {
            Verdict.JULIA: (Reason.ESCAPED, Reason.SEPARATED),
            Verdict.FATOU: (Reason.CONVERGED_TO_ATTRACTOR,),
            Verdict.UNDETERMINED: (Reason.EXHAUSTED,),
        }
        if self.reason not in ok[self.verdict]:
            raise ValueError(f"{self.verdict} cannot carry reason {self.reason}")


def _word_arrays(gens: list[GeneratorSpec], w: SemigroupWord):
    for i in w.indices:
        if i >= len(gens):
            raise IndexError(f"word index {i} out of range for {len(gens)} generators")
    steps = [gens[i] for i in w.indices]
    fams = np.array([_FAM_CODE[g.family] for g in steps], dtype=np.int64)
    par1 = np.empty(len(steps), dtype=complex)
    par2 = np.empty(len(steps), dtype=complex)
    for j, g in enumerate(steps):
        if g.family == POWER_OVER_A:
            par1[j] = g.a
            par2[j] = complex(g.degree, 0.0)
        else:
            par1[j] = g.lam
            par2[j] = g.shift
    return fams, par1, par2


def _word_attractor(gens: list[GeneratorSpec], w: SemigroupWord):
    """(q, has_q, ladder) for the settle test of one word."""
    steps = [gens[i] for i in w.indices]
    ladder = all(g.family == Z_MINUS_EXP_SHIFT for g in steps)
    if len(steps) == 1 and not ladder:
        q = attracting_fixed_point(steps[0])
        if q is not None:
            return q, True, False
    return 0j, False, ladder


def _escape_is_julia(gens: list[GeneratorSpec], w: SemigroupWord) -> bool:
    # a word escapes "as Julia" only for the transcendental families;
    # mixed transcendental/rational words are out of scope by viewport rules
    return any(gens[i].family != POWER_OVER_A for i in w.indices)


def classify_word_points(
    gens: list[GeneratorSpec],
    w: SemigroupWord,
    pts: np.ndarray,
    p: ClassifyParams,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Verdict/reason/iteration arrays for points under the word map."""
    fams, par1, par2 = _word_arrays(gens, w)
    q, has_q, ladder = _word_attractor(gens, w)
    pts = np.ascontiguousarray(pts, dtype=complex).ravel()
    verdict = np.zeros(pts.shape[0], dtype=np.int8)
    reason = np.zeros(pts.shape[0], dtype=np.int8)
    iters = np.zeros(pts.shape[0], dtype=np.int64)
    off = p.probe_offset if p.probe_offset is not None else ClassifyParams.POINT_PROBE_OFFSET
    offsets = np.ascontiguousarray(off * _PROBE_DIRS)
    _kernels.classify_pts(
        pts, offsets, fams, par1, par2,
        p.escape_radius, p.attract_tolerance, p.separation_delta,
        p.max_iter, q, has_q, ladder, _escape_is_julia(gens, w),
        verdict, reason, iters,
    )
    return verdict, reason, iters


def classify_single(g: GeneratorSpec, z: complex, p: ClassifyParams) -> OrbitClassification:
    """Classify one point under one generator."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("classify_single requires a finite point")
    v, r, it = classify_word_points([g], SemigroupWord((0,)), np.array([z]), p)
    return OrbitClassification(_VERDICT_OF[int(v[0])], int(it[0]), _REASON_OF[int(r[0])])


def _check_metric(gens: list[GeneratorSpec], vp: Viewport):
    if vp.metric == SPHERE and not all(g.family == POWER_OVER_A for g in gens):
        raise ValueError("the sphere metric is only supported for power_over_a generators")


@dataclass
class GridClassification:
    """Per-cell verdicts for one word over a viewport grid."""

    viewport: Viewport
    verdict: np.ndarray  # int8: 0 undet, 1 julia, 2 fatou
    reason: np.ndarray   # int8, kernel codes

    def julia_mask(self, undetermined_as_julia: bool) -> SetMask:
        bits = self.verdict == 1
        if undetermined_as_julia:
            bits = bits | (self.verdict == 0)
        return SetMask(self.viewport, bits)

    def escape_certified(self) -> SetMask:
        """Cells whose center provably escapes (Julia-side for transcendental maps)."""
        return SetMask(self.viewport, (self.verdict == 1) & (self.reason == 1))


def classify_word_grid(
    gens: list[GeneratorSpec],
    w: SemigroupWord,
    vp: Viewport,
    p: ClassifyParams,
    todo: np.ndarray | None = None,
) -> GridClassification:
    _check_metric([gens[i] for i in w.indices], vp)
    p = p.for_viewport(vp)
    p.check_against(vp)
    centers = vp.centers()
    verdict = np.zeros((vp.rows, vp.cols), dtype=np.int8)
    reason = np.zeros((vp.rows, vp.cols), dtype=np.int8)
    if todo is None:
        v, r, _ = classify_word_points(gens, w, centers.ravel(), p)
        verdict[:] = v.reshape(vp.rows, vp.cols)
        reason[:] = r.reshape(vp.rows, vp.cols)
    else:
        sel = np.asarray(todo, dtype=bool)
        if sel.any():
            v, r, _ = classify_word_points(gens, w, centers[sel], p)
            verdict[sel] = v
            reason[sel] = r
    return GridClassification(vp, verdict, reason)


def julia_mask_single(g: GeneratorSpec, vp: Viewport, p: ClassifyParams) -> SetMask:
    """Mask of cells whose center classifies Julia under g.

    Undetermined cells are included when p.undetermined_as_julia is set
    (the conservative default for seed sets).
    """
    gc = classify_word_grid([g], SemigroupWord((0,)), vp, p)
    return gc.julia_mask(p.undetermined_as_julia)


def julia_mask_semigroup(
    gens: list[GeneratorSpec],
    vp: Viewport,
    word_len: int,
    p: ClassifyParams,
    word_cap: int | None = None,
) -> SetMask:
    """Union of Julia masks for every word of length <= word_len.

    A cell already marked by an earlier word is skipped for later
    words, which leaves the union unchanged (enumeration order is
    fixed) but avoids redundant orbits.
    """
    _check_metric(gens, vp)
    kwargs = {} if word_cap is None else {"cap": word_cap}
    words = enumerate_words(len(gens), word_len, **kwargs)
    acc = np.zeros((vp.rows, vp.cols), dtype=bool)
    for w in words:
        todo = ~acc
        if not todo.any():
            break
        gc = classify_word_grid(gens, w, vp, p, todo=todo)
        acc |= gc.julia_mask(p.undetermined_as_julia).bits
    return SetMask(vp, acc)


def fatou_mask(j: SetMask) -> SetMask:
    """Cellwise complement within the viewport (and of the infinity flag)."""
    return j.complement()
