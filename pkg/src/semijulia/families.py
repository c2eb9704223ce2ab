"""Generator families, word evaluation and inverse branches.

Four map families are supported:

    scaled_sine        z -> lam * sin(z) + shift
    scaled_exp         z -> lam * exp(z) + shift
    z_minus_exp_shift  z -> z - exp(z) + 1 + 2*pi*i
    power_over_a       z -> z**degree / a

A semigroup element is a word over a generator list; the word
(a1, ..., am) evaluates as f_a1 o f_a2 o ... o f_am, i.e. the last
index is applied first.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi
LADDER_STEP = 1.0 + 2j * math.pi

SCALED_SINE = "scaled_sine"
SCALED_EXP = "scaled_exp"
Z_MINUS_EXP_SHIFT = "z_minus_exp_shift"
POWER_OVER_A = "power_over_a"

FAMILIES = (SCALED_SINE, SCALED_EXP, Z_MINUS_EXP_SHIFT, POWER_OVER_A)

# forward-check tolerance for inverse branches; scaled by max(1, |w|)
ROUNDTRIP_TOL = 1e-9

_COMPLEX_INF = complex(math.inf, 0.0)


@dataclass(frozen=True)
class GeneratorSpec:
    """One parameterized holomorphic map in canonical form.

    Fields unused by a family must be exactly zero, so dataclass
    equality coincides with equality of canonical forms.
    """

    family: str
    lam: complex = 0j
    shift: complex = 0j
    a: complex = 0j
    degree: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        object.__setattr__(self, "lam", complex(self.lam))
        object.__setattr__(self, "shift", complex(self.shift))
        object.__setattr__(self, "a", complex(self.a))
        if self.family in (SCALED_SINE, SCALED_EXP):
            if self.lam == 0:
                raise ValueError(f"{self.family} requires lam != 0")
            if self.a != 0 or self.degree != 0:
                raise ValueError(f"{self.family} must have a = 0 and degree = 0")
        elif self.family == Z_MINUS_EXP_SHIFT:
            if self.lam != 0 or self.shift != 0 or self.a != 0 or self.degree != 0:
                raise ValueError("z_minus_exp_shift takes no parameters")
        else:  # power_over_a
            # a == 1 is the pure power map z**degree; otherwise |a| > 1.
            if self.a != 1 and abs(self.a) <= 1:
                raise ValueError("power_over_a requires |a| > 1 (or a == 1 for the pure power)")
            if self.degree < 2:
                raise ValueError("power_over_a requires degree >= 2")
            if self.lam != 0 or self.shift != 0:
                raise ValueError("power_over_a must have lam = 0 and shift = 0")

    @property
    def is_rational(self) -> bool:
        return self.family == POWER_OVER_A


def scaled_sine(lam, shift=0.0) -> GeneratorSpec:
    return GeneratorSpec(SCALED_SINE, lam=lam, shift=shift)


def scaled_exp(lam, shift=0.0) -> GeneratorSpec:
    return GeneratorSpec(SCALED_EXP, lam=lam, shift=shift)


def z_minus_exp_shift() -> GeneratorSpec:
    return GeneratorSpec(Z_MINUS_EXP_SHIFT)


def power_over_a(a, degree=2) -> GeneratorSpec:
    return GeneratorSpec(POWER_OVER_A, a=a, degree=degree)


@dataclass(frozen=True)
class SemigroupWord:
    """A finite composition sequence over generator indices.

    indices (a1, ..., am) evaluate as f_a1 o ... o f_am: the LAST
    index is applied first.  Empty words are rejected (no identity).
    """

    indices: tuple[int, ...]

    def __post_init__(self):
        ix = tuple(int(i) for i in self.indices)
        if len(ix) == 0:
            raise ValueError("a semigroup word must have length >= 1")
        if any(i < 0 for i in ix):
            raise ValueError("generator indices must be nonnegative")
        object.__setattr__(self, "indices", ix)

    def __len__(self):
        return len(self.indices)


@dataclass(frozen=True)
class BranchRequest:
    """Truncation window and Newton controls for inverse branches."""

    k_min: int = -3
    k_max: int = 3
    newton_tolerance: float = 1e-10
    newton_max_steps: int = 60
    seed_spacing: float = 0.7

    def __post_init__(self):
        if self.k_min > self.k_max:
            raise ValueError("k_min must be <= k_max")
        if self.newton_tolerance <= 0:
            raise ValueError("newton_tolerance must be positive")
        if self.newton_max_steps <= 0:
            raise ValueError("newton_max_steps must be positive")
        if self.seed_spacing <= 0:
            raise ValueError("seed_spacing must be positive")


def eval_generator(g: GeneratorSpec, z: complex) -> complex:
    """Apply one generator to a finite point.

    Total for all finite z: overflow yields a non-finite complex value
    (read downstream as escaped) rather than raising.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"eval_generator requires finite z, got {z!r}")
    try:
        if g.family == SCALED_SINE:
            return g.lam * cmath.sin(z) + g.shift
        if g.family == SCALED_EXP:
            return g.lam * cmath.exp(z) + g.shift
        if g.family == Z_MINUS_EXP_SHIFT:
            return z - cmath.exp(z) + LADDER_STEP
        return z**g.degree / g.a
    except OverflowError:
        return _COMPLEX_INF


def eval_generator_array(g: GeneratorSpec, z: np.ndarray) -> np.ndarray:
    """Vectorized eval_generator; non-finite inputs propagate to non-finite outputs."""
    z = np.asarray(z, dtype=complex)
    with np.errstate(all="ignore"):
        if g.family == SCALED_SINE:
            return g.lam * np.sin(z) + g.shift
        if g.family == SCALED_EXP:
            return g.lam * np.exp(z) + g.shift
        if g.family == Z_MINUS_EXP_SHIFT:
            return z - np.exp(z) + LADDER_STEP
        return z**g.degree / g.a


def eval_word(gens: list[GeneratorSpec], w: SemigroupWord, z: complex) -> complex:
    """Right-to-left composition: the last index of w is applied first."""
    for i in w.indices:
        if i >= len(gens):
            raise IndexError(f"word index {i} out of range for {len(gens)} generators")
    out = complex(z)
    for i in reversed(w.indices):
        if not (math.isfinite(out.real) and math.isfinite(out.imag)):
            return out  # signaled overflow propagates
        out = eval_generator(gens[i], out)
    return out


DEFAULT_WORD_CAP = 200_000


def enumerate_words(gen_count: int, max_len: int, cap: int = DEFAULT_WORD_CAP) -> list[SemigroupWord]:
    """All words of length 1..max_len in length-then-lexicographic order."""
    if gen_count < 1:
        raise ValueError("gen_count must be >= 1")
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    total = sum(gen_count**m for m in range(1, max_len + 1))
    if total > cap:
        raise ValueError(
            f"word enumeration would produce {total} words, exceeding the cap of {cap}"
        )
    out = []
    for m in range(1, max_len + 1):
        for ix in itertools.product(range(gen_count), repeat=m):
            out.append(SemigroupWord(ix))
    return out


def attracting_fixed_point(g: GeneratorSpec, max_steps: int = 500) -> complex | None:
    """Attracting fixed point of a single generator, or None.

    scaled_sine / scaled_exp: solved by damped fixed-point iteration
    from the shift, accepted only when |f'(q)| < 1.  power_over_a: 0
    (superattracting).  z_minus_exp_shift has no finite fixed
    attractor (its orbits settle on the 2*pi*i ladder instead).
    """
    if g.family == POWER_OVER_A:
        return 0j
    if g.family == Z_MINUS_EXP_SHIFT:
        return None
    q = complex(g.shift)
    for _ in range(max_steps):
        try:
            q_next = eval_generator(g, q)
        except ValueError:
            return None
        if not (math.isfinite(q_next.real) and math.isfinite(q_next.imag)):
            return None
        if abs(q_next - q) < 1e-14:
            q = q_next
            break
        q = q_next
    else:
        return None
    if g.family == SCALED_SINE:
        deriv = g.lam * cmath.cos(q)
    else:
        deriv = g.lam * cmath.exp(q)
    if abs(deriv) >= 1:
        return None
    return q


def _dedupe(points: list[complex], tol: float) -> list[complex]:
    out: list[complex] = []
    for p in sorted(points, key=lambda q: (q.real, q.imag)):
        if not any(abs(p - q) <= tol for q in out):
            out.append(p)
    return out


def _roundtrip_ok(g: GeneratorSpec, p: complex, w: complex) -> bool:
    try:
        v = eval_generator(g, p)
    except ValueError:
        return False
    return abs(v - w) <= ROUNDTRIP_TOL * max(1.0, abs(w))


def newton_preimages(w: complex, req: BranchRequest) -> tuple[list[complex], bool]:
    """Preimages of w under z - exp(z) + 1 + 2*pi*i by Newton from a seed lattice.

    The lattice spans the branch window [2*pi*k_min - pi, 2*pi*k_max + pi]
    in the imaginary direction (one root per window rung expected),
    extended to cover the near-translation root at w - 1 - 2*pi*i, and a
    real range wide enough for the logarithmic-scale roots.  Converged
    roots are deduplicated within newton_tolerance and forward-checked.

    Returns (roots, newton_failed) with newton_failed True when no seed
    converged at all.
    """
    c = LADDER_STEP - w  # solve exp(z) = z + c
    im_lo = min(TWO_PI * req.k_min - math.pi, (w - LADDER_STEP).imag - 1.0)
    im_hi = max(TWO_PI * req.k_max + math.pi, (w - LADDER_STEP).imag + 1.0)
    re_hi = math.log(abs(c) + TWO_PI * (max(abs(req.k_min), abs(req.k_max)) + 2) + 10.0) + 2.0
    re_lo = min(-c.real, 0.0) - 3.0
    res = np.arange(re_lo, re_hi + req.seed_spacing, req.seed_spacing)
    ims = np.arange(im_lo, im_hi + req.seed_spacing, req.seed_spacing)
    z = (res[:, None] + 1j * ims[None, :]).ravel()

    with np.errstate(all="ignore"):
        for _ in range(req.newton_max_steps):
            ez = np.exp(z)
            h = z - ez + LADDER_STEP - w
            dh = 1.0 - ez
            step = h / dh
            bad = ~np.isfinite(step)
            step[bad] = 0.0
            z = z - step
        ez = np.exp(z)
        resid = np.abs(z - ez + LADDER_STEP - w)
    ok = np.isfinite(z) & (resid <= req.newton_tolerance * max(1.0, abs(w)))
    if not ok.any():
        return [], True
    g = z_minus_exp_shift()
    roots = _dedupe([complex(p) for p in z[ok]], req.newton_tolerance * 10)
    roots = [p for p in roots if _roundtrip_ok(g, p, w)]
    return roots, len(roots) == 0


def inverse_images(g: GeneratorSpec, w: complex, req: BranchRequest) -> list[complex]:
    """Finite truncation of the preimage set of w under g.

    Every returned p satisfies |g(p) - w| <= 1e-9 * max(1, |w|).
    Results are sorted by (real, imag) so equal calls return equal lists.
    """
    w = complex(w)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise ValueError("inverse_images requires finite w")
    pts: list[complex]
    if g.family == SCALED_EXP:
        u = (w - g.shift) / g.lam
        if u == 0:
            return []  # exp never vanishes: no preimage
        base = cmath.log(u)
        pts = [base + TWO_PI * 1j * k for k in range(req.k_min, req.k_max + 1)]
    elif g.family == SCALED_SINE:
        u = (w - g.shift) / g.lam
        if not (math.isfinite(u.real) and math.isfinite(u.imag)):
            raise ValueError("w/lam must be finite for scaled_sine preimages")
        base = cmath.asin(u)
        pts = []
        for k in range(req.k_min, req.k_max + 1):
            pts.append(base + TWO_PI * k)
            pts.append(math.pi - base + TWO_PI * k)
        pts = _dedupe(pts, 1e-12)
    elif g.family == POWER_OVER_A:
        t = g.a * w
        if t == 0:
            return [0j]
        r = abs(t) ** (1.0 / g.degree)
        th = cmath.phase(t)
        pts = [
            r * cmath.exp(1j * (th + TWO_PI * k) / g.degree)
            for k in range(g.degree)
        ]
    else:
        pts, _failed = newton_preimages(w, req)
    pts = [p for p in pts if _roundtrip_ok(g, p, w)]
    return sorted(pts, key=lambda p: (p.real, p.imag))
