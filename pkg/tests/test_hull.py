import math
from dataclasses import replace

import numpy as np
import pytest

import semijulia as sj
from semijulia.classify import ClassifyParams
from semijulia.hull import HullMode, HullParams, HullStatus, build_seed_with_certificates

TWO_PI = 2 * math.pi


def rational_setup(n=160):
    vp = sj.Viewport(0j, 3.0, 3.0, n, n, sj.SPHERE)
    gens = [sj.power_over_a(1.0), sj.power_over_a(2.0)]
    return vp, gens, ClassifyParams()


def sine_setup(n=160):
    vp = sj.Viewport(0j, 4 * math.pi, 4 * math.pi, n, n, sj.PLANE)
    gens = [sj.scaled_sine(0.9), sj.scaled_sine(0.9, TWO_PI)]
    return vp, gens, ClassifyParams()


def circle_mask(vp, r):
    z = vp.centers()
    w = min(vp.cell_width, vp.cell_height)
    return sj.SetMask(vp, np.abs(np.abs(z) - r) <= w / 2)


def annulus_mask(vp, r_in, r_out):
    z = vp.centers()
    w = min(vp.cell_width, vp.cell_height)
    return sj.SetMask(vp, (np.abs(z) >= r_in - w / 2) & (np.abs(z) <= r_out + w / 2))


# ---------------------------------------------------------------- params

def test_hull_params_validation():
    with pytest.raises(ValueError):
        HullParams(saturation_fraction=0.4)
    with pytest.raises(ValueError):
        HullParams(closure_dilation=-1)
    with pytest.raises(ValueError):
        HullParams(forward_samples_per_cell=0)
    with pytest.raises(ValueError):
        HullParams(interior_radius=1)
    assert HullParams(closure_dilation=1).effective_backward_tolerance == 1
    assert HullParams(closure_dilation=1, backward_tolerance=0).effective_backward_tolerance == 0


# ---------------------------------------------------------------- seeds

def test_seed_cyclic_square_is_circle_for_any_word_len():
    vp, gens, p = rational_setup(128)
    s1 = sj.build_seed([gens[0]], vp, 1, p)
    s3 = sj.build_seed([gens[0]], vp, 3, p)
    # classical iterates share one Julia set
    assert sj.hausdorff_cells(s1, s3) <= 1.0


def test_seed_rational_word_len_one_is_two_circles():
    vp, gens, p = rational_setup(128)
    seed = sj.build_seed(gens, vp, 1, p)
    pv = p.for_viewport(vp)
    two = sj.union(
        sj.julia_mask_single(gens[0], vp, pv),
        sj.julia_mask_single(gens[1], vp, pv),
    )
    assert seed == two


def test_seed_subset_of_first_generation():
    vp, gens, p = rational_setup(96)
    seed = sj.build_seed(gens, vp, 1, p.for_viewport(vp))
    hp = HullParams(mode=HullMode.COMPLETELY_INVARIANT)
    step1 = sj.step_hull(seed, gens, hp)
    assert not (seed.bits & ~step1.bits).any()


# ---------------------------------------------------------------- step

def test_step_fixed_for_pure_square_circle():
    vp, gens, p = rational_setup(192)
    g = [gens[0]]
    seed = sj.build_seed(g, vp, 1, p.for_viewport(vp))
    hp = HullParams(mode=HullMode.COMPLETELY_INVARIANT)
    out = sj.step_hull(seed, g, hp)
    # completely invariant set: fixed up to one cell of closure
    assert not (seed.bits & ~out.bits).any()
    assert not (out.bits & ~sj.dilate(seed, 1).bits).any()


def test_backward_only_step_subset_of_full_step():
    vp, gens, p = rational_setup(96)
    seed = sj.build_seed(gens, vp, 1, p.for_viewport(vp))
    j_step = sj.step_hull(seed, gens, HullParams(mode=HullMode.BACKWARD_ONLY))
    e_step = sj.step_hull(seed, gens, HullParams(mode=HullMode.COMPLETELY_INVARIANT))
    assert not (j_step.bits & ~e_step.bits).any()


def test_step_requires_nonempty():
    vp, gens, _ = rational_setup(32)
    with pytest.raises(ValueError):
        sj.step_hull(sj.SetMask.empty(vp), gens, HullParams())


# ---------------------------------------------------------------- iterate

def test_rational_j_mode_converges_to_annulus():
    vp, gens, p = rational_setup(192)
    hp = HullParams(mode=HullMode.BACKWARD_ONLY, max_generations=30)
    res = sj.iterate_hull(gens, vp, hp, p, 2)
    assert res.status is HullStatus.CONVERGED
    assert sj.hausdorff_cells(res.final_mask, annulus_mask(vp, 1.0, 2.0)) <= 3.0


def test_rational_e_mode_saturates():
    vp, gens, p = rational_setup(192)
    hp = HullParams(mode=HullMode.COMPLETELY_INVARIANT, max_generations=30)
    res = sj.iterate_hull(gens, vp, hp, p, 2)
    assert res.status is HullStatus.SATURATED_WHOLE_PLANE
    assert res.generations_run <= 30
    # saturated verdict returns the full mask it asserts
    assert res.final_mask.area_fraction == 1.0
    assert res.interior_witness is not None


def test_sine_e_mode_converges_close_to_single_julia():
    vp, gens, p = sine_setup(192)
    hp = HullParams(mode=HullMode.COMPLETELY_INVARIANT, max_generations=60,
                    backward_tolerance=0)
    res = sj.iterate_hull(gens, vp, hp, p, 1)
    assert res.status is HullStatus.CONVERGED
    jf = sj.julia_mask_single(gens[0], vp, p.for_viewport(vp))
    assert sj.hausdorff_cells(res.final_mask, jf) <= 3.0


def test_exp_pair_saturates():
    vp = sj.Viewport(0j, 4 * math.pi, 4 * math.pi, 160, 160, sj.PLANE)
    gens = [sj.scaled_exp(0.3), sj.z_minus_exp_shift()]
    hp = HullParams(mode=HullMode.COMPLETELY_INVARIANT, max_generations=40)
    res = sj.iterate_hull(gens, vp, hp, ClassifyParams(), 2)
    assert res.status is HullStatus.SATURATED_WHOLE_PLANE
    assert res.generations_run <= 40


def test_generation_areas_nondecreasing():
    vp, gens, p = rational_setup(128)
    for mode in (HullMode.BACKWARD_ONLY, HullMode.COMPLETELY_INVARIANT):
        res = sj.iterate_hull(gens, vp, HullParams(mode=mode, max_generations=20), p, 2)
        areas = res.per_generation_area
        assert all(a <= b + 1e-12 for a, b in zip(areas, areas[1:]))


def test_generator_order_independence():
    vp, gens, p = rational_setup(96)
    hp = HullParams(mode=HullMode.COMPLETELY_INVARIANT, max_generations=10)
    a = sj.iterate_hull(gens, vp, hp, p, 2)
    b = sj.iterate_hull(list(reversed(gens)), vp, hp, p, 2)
    assert a.final_mask == b.final_mask


def test_more_forward_samples_never_shrink():
    vp, gens, p = sine_setup(96)
    base = dict(mode=HullMode.COMPLETELY_INVARIANT, max_generations=8,
                backward_tolerance=0)
    lo = sj.iterate_hull(gens, vp, HullParams(forward_samples_per_cell=1, **base), p, 1)
    hi = sj.iterate_hull(gens, vp, HullParams(forward_samples_per_cell=4, **base), p, 1)
    assert not (lo.final_mask.bits & ~hi.final_mask.bits).any()


# ---------------------------------------------------------------- reports

def test_subset_report_zero_on_matched_runs():
    vp, gens, p = rational_setup(128)
    e = sj.iterate_hull(gens, vp, HullParams(mode=HullMode.COMPLETELY_INVARIANT), p, 2)
    j = sj.iterate_hull(gens, vp, HullParams(mode=HullMode.BACKWARD_ONLY), p, 2)
    assert sj.subset_report(j, e) == {"violations": 0}


def test_subset_report_rejects_mismatched_params():
    vp, gens, p = rational_setup(64)
    e = sj.iterate_hull(gens, vp, HullParams(mode=HullMode.COMPLETELY_INVARIANT), p, 2)
    j = sj.iterate_hull(gens, vp, HullParams(mode=HullMode.BACKWARD_ONLY), p, 1)
    with pytest.raises(ValueError):
        sj.subset_report(j, e)
    with pytest.raises(ValueError):
        sj.subset_report(e, e)


def test_perfectness_report():
    vp, gens, p = sine_setup(128)
    hp = HullParams(mode=HullMode.COMPLETELY_INVARIANT, max_generations=40,
                    backward_tolerance=0)
    res = sj.iterate_hull(gens, vp, hp, p, 1)
    assert res.status is HullStatus.CONVERGED
    assert sj.perfectness_report(res.final_mask)["isolated_count"] == 0
    bits = np.zeros((vp.rows, vp.cols), dtype=bool)
    bits[3:6, 3:6] = True
    bits[40, 40] = True  # one stray cell
    rep = sj.perfectness_report(sj.SetMask(vp, bits))
    assert rep["isolated_count"] == 1 and rep["locations"] == [(40, 40)]
    with pytest.raises(ValueError):
        sj.perfectness_report(sj.SetMask.empty(vp))


def test_unboundedness_report():
    vp, gens, p = sine_setup(128)
    hp = HullParams(mode=HullMode.COMPLETELY_INVARIANT, max_generations=40,
                    backward_tolerance=0)
    res = sj.iterate_hull(gens, vp, hp, p, 1)
    assert sj.unboundedness_report(res) == {"w_touches_edge": True}
    # inapplicable to a saturated run
    vpr, gr, pr = rational_setup(96)
    sat = sj.iterate_hull(gr, vpr, HullParams(mode=HullMode.COMPLETELY_INVARIANT), pr, 2)
    assert sat.status is HullStatus.SATURATED_WHOLE_PLANE
    with pytest.raises(ValueError):
        sj.unboundedness_report(sat)


def test_saturated_implies_area_or_witness():
    vp, gens, p = rational_setup(96)
    hp = HullParams(mode=HullMode.COMPLETELY_INVARIANT)
    res = sj.iterate_hull(gens, vp, hp, p, 2)
    assert res.status is HullStatus.SATURATED_WHOLE_PLANE
    assert (res.final_mask.area_fraction >= hp.saturation_fraction
            or res.interior_witness is not None)


def test_certified_seed_cells_are_escape_classified():
    vp, gens, p = sine_setup(96)
    seed, certified = build_seed_with_certificates(gens, vp, 1, p.for_viewport(vp))
    assert not (certified.bits & ~seed.bits).any()
    assert certified.count() > 0
