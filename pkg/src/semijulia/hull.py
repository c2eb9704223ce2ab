"""Stagewise completely-invariant hull iteration.

Starting from the union of single-word Julia masks, each generation
adds backward images (pointwise membership test through the forward
map, exact at grid resolution) and, in completely-invariant mode,
forward images.  Forward images are realized two ways, both sound on
a grid:

  * orbit flow: generator images of escape-certified cell centers
    (true Julia-side points) advanced generation by generation and
    thinned to a per-cell budget;
  * interior membership: a cell joins the forward image when one of
    its inverse-branch preimages lies in the eroded mask and the local
    derivative keeps the image accurate to a few cells.

Marking forward landings of arbitrary mask samples instead would let
half-cell seed error compound through expanding steps and flood
attracting basins, so it is deliberately avoided.

The whole-plane verdict requires both saturation signals: area
fraction above threshold AND an interior disk.  On these families the
Julia set itself can be grid-solid (sub-cell Fatou channels), so the
interior signal alone misfires at finite resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
from scipy import ndimage
from scipy.special import lambertw

from .classify import ClassifyParams, classify_word_grid
from .families import (
    LADDER_STEP,
    POWER_OVER_A,
    SCALED_EXP,
    SCALED_SINE,
    TWO_PI,
    Z_MINUS_EXP_SHIFT,
    BranchRequest,
    GeneratorSpec,
    SemigroupWord,
    enumerate_words,
    eval_generator_array,
)
from .grid import (
    SPHERE,
    SetMask,
    Viewport,
    dilate,
    interior_disk_exists,
    isolated_cells,
    touches_boundary,
)

_BOX3 = np.ones((3, 3), dtype=bool)


class HullMode(Enum):
    COMPLETELY_INVARIANT = "completely_invariant"  # E-construction
    BACKWARD_ONLY = "backward_only"                # J-construction


class HullStatus(Enum):
    CONVERGED = "converged"
    SATURATED_WHOLE_PLANE = "saturated_whole_plane"
    MAX_GENERATIONS = "max_generations"


@dataclass(frozen=True)
class HullParams:
    mode: HullMode = HullMode.COMPLETELY_INVARIANT
    max_generations: int = 40
    saturation_fraction: float = 0.99
    closure_dilation: int = 1
    forward_samples_per_cell: int = 4
    branch_request: BranchRequest = field(default_factory=BranchRequest)
    interior_radius: int = 5
    backward_tolerance: int | None = None  # None: use closure_dilation
    forward_derivative_guard: float = 2.0  # cells of certified image accuracy

    def __post_init__(self):
        if not (0.5 < self.saturation_fraction <= 1.0):
            raise ValueError("saturation_fraction must lie in (0.5, 1]")
        if self.closure_dilation < 0:
            raise ValueError("closure_dilation must be nonnegative")
        if self.forward_samples_per_cell < 1:
            raise ValueError("forward_samples_per_cell must be >= 1")
        if self.max_generations < 1:
            raise ValueError("max_generations must be >= 1")
        if self.interior_radius < 2:
            raise ValueError("interior_radius must be >= 2")
        if self.backward_tolerance is not None and self.backward_tolerance < 0:
            raise ValueError("backward_tolerance must be nonnegative")

    @property
    def effective_backward_tolerance(self) -> int:
        return self.closure_dilation if self.backward_tolerance is None else self.backward_tolerance


@dataclass(frozen=True)
class HullFingerprint:
    """Everything a J/E result pair must share for subset comparison."""

    viewport: Viewport
    generators: tuple[GeneratorSpec, ...]
    word_len: int
    classify: ClassifyParams
    closure_dilation: int
    backward_tolerance: int
    interior_radius: int


@dataclass
class HullResult:
    final_mask: SetMask
    status: HullStatus
    generations_run: int
    per_generation_area: list[float]
    interior_witness: tuple[int, int] | None
    forward_dropped: int
    fingerprint: HullFingerprint
    mode: HullMode


def _branch_window(vp: Viewport) -> tuple[int, int]:
    lo = vp.center.imag - vp.half_height
    hi = vp.center.imag + vp.half_height
    return int(math.floor(lo / TWO_PI)) - 1, int(math.ceil(hi / TWO_PI)) + 1


def _sine_k_window(vp: Viewport) -> tuple[int, int]:
    lo = vp.center.real - vp.half_width
    hi = vp.center.real + vp.half_width
    return int(math.floor(lo / TWO_PI)) - 1, int(math.ceil(hi / TWO_PI)) + 1


def _preimage_branches(g: GeneratorSpec, vp: Viewport, guard_cells: float):
    """Located inverse branches of every cell center, with the
    derivative-certified accuracy gate applied."""
    u = vp.centers()
    cell = min(vp.cell_width, vp.cell_height)
    branches = []

    def push(p, deriv):
        ok_guard = np.abs(deriv) * (cell / 2.0) <= guard_cells * cell
        row, col, ok = vp.locate(p)
        keep = ok & ok_guard
        if keep.any():
            branches.append((row, col, keep))

    with np.errstate(all="ignore"):
        if g.family == SCALED_SINE:
            base = np.arcsin(((u - g.shift) / g.lam).astype(complex))
            k0, k1 = _sine_k_window(vp)
            for k in range(k0, k1 + 1):
                for p in (base + TWO_PI * k, math.pi - base + TWO_PI * k):
                    push(p, g.lam * np.cos(p))
        elif g.family == SCALED_EXP:
            base = np.log((u - g.shift) / g.lam)
            k0, k1 = _branch_window(vp)
            for k in range(k0, k1 + 1):
                p = base + TWO_PI * 1j * k
                push(p, u - g.shift)  # f'(p) = lam e^p = u - shift
        elif g.family == POWER_OVER_A:
            t = g.a * u
            r = np.abs(t) ** (1.0 / g.degree)
            th = np.angle(t)
            for k in range(g.degree):
                p = r * np.exp(1j * (th + TWO_PI * k) / g.degree)
                push(p, g.degree * p ** (g.degree - 1) / g.a)
        else:  # z_minus_exp_shift, via the Lambert W branches of exp(z) = z + c
            c = LADDER_STEP - u
            k0, k1 = _branch_window(vp)
            for k in range(k0 - 1, k1 + 2):
                p = -lambertw(-np.exp(-c), k=k) - c
                push(p, 1.0 - np.exp(p))
    return branches


class HullStepper:
    """Precomputed per-viewport machinery for hull generations."""

    def __init__(self, gens: list[GeneratorSpec], vp: Viewport, hp: HullParams):
        self.gens = list(gens)
        self.vp = vp
        self.hp = hp
        self.flow: np.ndarray = np.empty(0, dtype=complex)
        self.dropped = 0
        centers = vp.centers()
        self._fwd = []
        self._inf_reach = []
        for g in gens:
            img = eval_generator_array(g, centers)
            self._fwd.append(vp.locate(img))
            if vp.metric == SPHERE:
                with np.errstate(all="ignore"):
                    self._inf_reach.append(
                        np.isfinite(img) & (np.abs(img) >= vp.horizon)
                    )
            else:
                self._inf_reach.append(None)
        if hp.mode == HullMode.COMPLETELY_INVARIANT:
            self._pre = []
            for g in gens:
                self._pre.extend(_preimage_branches(g, vp, hp.forward_derivative_guard))
        else:
            self._pre = []
        self._buckets = max(1, int(round(math.sqrt(hp.forward_samples_per_cell))))

    def seed_flow(self, certified: SetMask):
        self.flow = self._thin(certified.marked_centers())

    def _thin(self, pts: np.ndarray) -> np.ndarray:
        """Keep one representative point per sub-cell bucket.

        The lexicographically smallest point wins, so the result does
        not depend on generator order or concatenation order.
        """
        if pts.size == 0:
            return pts
        vp, b = self.vp, self._buckets
        col = np.floor(
            (pts.real - vp.center.real + vp.half_width) / (vp.cell_width / b)
        ).astype(np.int64)
        row = np.floor(
            (vp.center.imag + vp.half_height - pts.imag) / (vp.cell_height / b)
        ).astype(np.int64)
        key = row * (vp.cols * b + 4) + col
        order = np.lexsort((pts.imag, pts.real, key))
        key_sorted = key[order]
        first = np.ones(key_sorted.shape[0], dtype=bool)
        first[1:] = key_sorted[1:] != key_sorted[:-1]
        return pts[order[first]]

    def _advance_flow(self) -> np.ndarray:
        """One generator step of the certified point flow; returns landed bits."""
        bits = np.zeros((self.vp.rows, self.vp.cols), dtype=bool)
        if self.flow.size == 0:
            return bits
        nxt = []
        for g in self.gens:
            img = eval_generator_array(g, self.flow)
            fin = np.isfinite(img)
            inside = (
                fin
                & (np.abs(img.real - self.vp.center.real) <= self.vp.half_width)
                & (np.abs(img.imag - self.vp.center.imag) <= self.vp.half_height)
            )
            self.dropped += int(np.count_nonzero(fin & ~inside))
            nxt.append(img[inside])
        self.flow = self._thin(np.concatenate(nxt)) if nxt else self.flow
        if self.flow.size:
            row, col, ok = self.vp.locate(self.flow)
            bits[row[ok], col[ok]] = True
        return bits

    def _infinity_hit(self, m: SetMask) -> bool:
        if self.vp.metric != SPHERE or m.infinity_bit:
            return m.infinity_bit
        pts = m.marked_centers()
        for g in self.gens:
            with np.errstate(all="ignore"):
                img = eval_generator_array(g, pts)
            fin = np.isfinite(img)
            if (np.abs(img[fin]) >= self.vp.horizon).any():
                return True
        return False

    def step(self, m: SetMask) -> SetMask:
        """One hull generation: m union backward(m) [union forward(m)]."""
        tol = self.hp.effective_backward_tolerance
        target = m.bits
        if tol > 0:
            target = ndimage.binary_dilation(m.bits, structure=_BOX3, iterations=tol)
        new_bits = m.bits.copy()
        for (row, col, ok), inf_reach in zip(self._fwd, self._inf_reach):
            hit = np.zeros_like(new_bits)
            hit[ok] = target[row[ok], col[ok]]
            if m.infinity_bit and inf_reach is not None:
                hit |= inf_reach
            new_bits |= hit
        inf_bit = m.infinity_bit
        if self.hp.mode == HullMode.COMPLETELY_INVARIANT:
            core = ndimage.binary_erosion(m.bits, structure=_BOX3, border_value=0)
            for row, col, ok in self._pre:
                hit = np.zeros_like(new_bits)
                hit[ok] = core[row[ok], col[ok]]
                new_bits |= hit
            new_bits |= self._advance_flow()
            inf_bit = inf_bit or self._infinity_hit(m)
        return SetMask(self.vp, new_bits, inf_bit)


def build_seed(
    gens: list[GeneratorSpec],
    vp: Viewport,
    word_len: int,
    classify_params: ClassifyParams,
    word_cap: int | None = None,
) -> SetMask:
    """Union of single-word Julia masks over all words of length <= word_len."""
    seed, _certified = build_seed_with_certificates(
        gens, vp, word_len, classify_params, word_cap
    )
    return seed


def build_seed_with_certificates(
    gens: list[GeneratorSpec],
    vp: Viewport,
    word_len: int,
    classify_params: ClassifyParams,
    word_cap: int | None = None,
) -> tuple[SetMask, SetMask]:
    """Seed mask plus the subset of cells certified by an escaping center."""
    kwargs = {} if word_cap is None else {"cap": word_cap}
    words = enumerate_words(len(gens), word_len, **kwargs)
    acc = np.zeros((vp.rows, vp.cols), dtype=bool)
    certified = np.zeros((vp.rows, vp.cols), dtype=bool)
    for w in words:
        gc = classify_word_grid(gens, w, vp, classify_params)
        acc |= gc.julia_mask(classify_params.undetermined_as_julia).bits
        certified |= gc.escape_certified().bits
    return SetMask(vp, acc), SetMask(vp, certified)


def step_hull(m: SetMask, gens: list[GeneratorSpec], hp: HullParams) -> SetMask:
    """One standalone hull generation from an arbitrary mask.

    Uses the membership machinery only (the certified orbit flow is
    iteration state owned by iterate_hull).
    """
    if m.is_empty():
        raise ValueError("step_hull requires a nonempty mask")
    stepper = HullStepper(gens, m.viewport, hp)
    return stepper.step(m)


def _saturated(m: SetMask, hp: HullParams) -> tuple[bool, tuple[int, int] | None]:
    if m.area_fraction < hp.saturation_fraction:
        return False, None
    ok, witness = interior_disk_exists(m, hp.interior_radius)
    return ok, witness


def iterate_hull(
    gens: list[GeneratorSpec],
    vp: Viewport,
    hp: HullParams,
    classify_params: ClassifyParams,
    word_len: int,
) -> HullResult:
    """Iterate hull generations from the seed until the mask is stable,
    the whole-plane verdict fires, or the generation budget runs out.

    The final mask carries one closure dilation; a saturated run
    returns the full mask, which is what the verdict asserts.
    """
    classify_params = classify_params.for_viewport(vp)
    seed, certified = build_seed_with_certificates(gens, vp, word_len, classify_params)
    stepper = HullStepper(gens, vp, hp)
    if hp.mode == HullMode.COMPLETELY_INVARIANT:
        stepper.seed_flow(certified)
    fp = HullFingerprint(
        viewport=vp,
        generators=tuple(gens),
        word_len=word_len,
        classify=classify_params,
        closure_dilation=hp.closure_dilation,
        backward_tolerance=hp.effective_backward_tolerance,
        interior_radius=hp.interior_radius,
    )

    m = seed
    areas = [m.area_fraction]
    status = HullStatus.MAX_GENERATIONS
    gens_run = 0
    for gen in range(1, hp.max_generations + 1):
        nxt = stepper.step(m)
        gens_run = gen
        areas.append(nxt.area_fraction)
        if nxt == m:
            m = nxt
            status = HullStatus.CONVERGED
            break
        m = nxt
        sat, _w = _saturated(m, hp)
        if sat:
            status = HullStatus.SATURATED_WHOLE_PLANE
            break

    if status == HullStatus.SATURATED_WHOLE_PLANE:
        final = SetMask.full(vp)
    elif hp.closure_dilation > 0:
        final = dilate(m, hp.closure_dilation)
    else:
        final = m
    has_int, witness = interior_disk_exists(final, hp.interior_radius)
    return HullResult(
        final_mask=final,
        status=status,
        generations_run=gens_run,
        per_generation_area=areas,
        interior_witness=witness if has_int else None,
        forward_dropped=stepper.dropped,
        fingerprint=fp,
        mode=hp.mode,
    )


def perfectness_report(m: SetMask) -> dict:
    """Isolated-cell census; a converged hull is expected to have none."""
    if m.is_empty():
        raise ValueError("perfectness_report requires a nonempty mask")
    cells = isolated_cells(m)
    return {"isolated_count": len(cells), "locations": cells}


def subset_report(j: HullResult, e: HullResult) -> dict:
    """Count cells in a backward-only hull missing from the invariant hull."""
    if j.mode != HullMode.BACKWARD_ONLY or e.mode != HullMode.COMPLETELY_INVARIANT:
        raise ValueError("subset_report expects (backward-only, completely-invariant) results")
    if j.fingerprint != e.fingerprint:
        raise ValueError("hull results were built with different parameters")
    violations = int(np.count_nonzero(j.final_mask.bits & ~e.final_mask.bits))
    if j.final_mask.infinity_bit and not e.final_mask.infinity_bit:
        violations += 1
    return {"violations": violations}


def unboundedness_report(e: HullResult) -> dict:
    """Check that the complement of a converged hull reaches the viewport edge."""
    if e.status != HullStatus.CONVERGED:
        raise ValueError("unboundedness_report applies to converged hulls only")
    comp = e.final_mask.complement()
    return {"w_touches_edge": touches_boundary(comp)}
