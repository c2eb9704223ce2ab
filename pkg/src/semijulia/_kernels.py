"""Numba kernels for orbit-fate classification.

An orbit is iterated under a word (family codes + parameters per
step, applied last-first) until it resolves:

    fate 1  escaped      family escape functional exceeded, or overflow
    fate 2  settled      3 consecutive word steps within attract_tolerance
                         of each other / of a known fixed point / of the
                         2*pi*i ladder (pure z-exp-shift words)
    fate 0  unresolved   budget exhausted

The settle limit is recorded so divergent limits can be compared.
Per-cell work is independent, so parallel schedules give identical
results.
"""

from __future__ import annotations

import cmath
import math

import numba
import numpy as np
from numba import njit, prange

FAM_SINE = 0
FAM_EXP = 1
FAM_ZES = 2
FAM_POW = 3

TWO_PI = 2.0 * math.pi
# below this real part, z - exp(z) + 1 + 2*pi*i is the translation
# z + 1 + 2*pi*i to double precision; the climb is applied in closed form
_ZES_DEEP = -30.0


@njit(cache=True)
def _apply(fam, p1, p2, z):
    if fam == FAM_SINE:
        return p1 * cmath.sin(z) + p2
    if fam == FAM_EXP:
        return p1 * cmath.exp(z) + p2
    if fam == FAM_ZES:
        w = z - cmath.exp(z) + complex(1.0, TWO_PI)
        if w.real < _ZES_DEEP and math.isfinite(w.real):
            k = math.ceil(_ZES_DEEP - w.real)
            w = w + k * complex(1.0, TWO_PI)
        return w
    d = int(p2.real)
    acc = z
    for _ in range(d - 1):
        acc = acc * z
    return acc / p1


@njit(cache=True)
def _escaped(fam, z, esc_r):
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return True
    if fam == FAM_SINE:
        return abs(z.imag) > esc_r
    if fam == FAM_EXP:
        return z.real > esc_r
    if fam == FAM_ZES:
        return z.real > esc_r
    return abs(z) > esc_r


@njit(cache=True)
def _orbit_fate(z0, fams, par1, par2, esc_r, attr_tol, max_apps,
                q, has_q, ladder):
    """Run one orbit; returns (fate, limit, word_apps_used)."""
    z = z0
    streak = 0
    nsteps = fams.shape[0]
    for it in range(max_apps):
        prev = z
        for j in range(nsteps - 1, -1, -1):
            z = _apply(fams[j], par1[j], par2[j], z)
            if _escaped(fams[j], z, esc_r):
                return 1, z, it + 1
        settled = abs(z - prev) < attr_tol
        if has_q and abs(z - q) < attr_tol:
            settled = True
        if ladder:
            k = round(z.imag / TWO_PI)
            if abs(z - complex(0.0, TWO_PI * k)) < attr_tol:
                settled = True
        if settled:
            streak += 1
            if streak >= 3:
                if ladder:
                    k = round(z.imag / TWO_PI)
                    return 2, z - complex(0.0, TWO_PI * k), it + 1
                return 2, z, it + 1
        else:
            streak = 0
    return 0, z, max_apps


@njit(cache=True, parallel=True)
def fate_grid(pts, fams, par1, par2, esc_r, attr_tol, max_apps,
              q, has_q, ladder, out_fate, out_lim, out_iters):
    for i in prange(pts.shape[0]):
        f, lim, used = _orbit_fate(pts[i], fams, par1, par2, esc_r,
                                   attr_tol, max_apps, q, has_q, ladder)
        out_fate[i] = f
        out_lim[i] = lim
        out_iters[i] = used


@njit(cache=True, parallel=True)
def classify_pts(pts, probe_offsets, fams, par1, par2, esc_r, attr_tol,
                 sep_delta, max_apps, q, has_q, ladder, escape_is_julia,
                 out_verdict, out_reason, out_iters):
    """Full fate-divergence classification of points under one word.

    verdict: 0 undetermined, 1 julia, 2 fatou
    reason:  0 exhausted, 1 escaped, 2 converged-to-attractor, 3 separated
    """
    nprobe = probe_offsets.shape[0]
    for i in prange(pts.shape[0]):
        mf, mlim, used = _orbit_fate(pts[i], fams, par1, par2, esc_r,
                                     attr_tol, max_apps, q, has_q, ladder)
        out_iters[i] = used
        if mf == 0:
            out_verdict[i] = 0
            out_reason[i] = 0
            continue
        if mf == 1 and escape_is_julia:
            # escaping orbits belong to the Julia set of these families;
            # no probe run needed
            out_verdict[i] = 1
            out_reason[i] = 1
            continue
        separated = False
        for k in range(nprobe):
            pf, plim, _pu = _orbit_fate(pts[i] + probe_offsets[k], fams,
                                        par1, par2, esc_r, attr_tol,
                                        max_apps, q, has_q, ladder)
            if pf == 0:
                continue
            if pf != mf:
                separated = True
                break
            if pf == 2 and mf == 2 and abs(plim - mlim) > sep_delta:
                separated = True
                break
        if separated:
            out_verdict[i] = 1
            out_reason[i] = 3
        else:
            # mf == 1 here means rational escape: the superattracting
            # basin of infinity, a Fatou verdict either way
            out_verdict[i] = 2
            out_reason[i] = 2
