"""The exponential pair 0.3 e^z and z - e^z + 1 + 2*pi*i.

The first generator's Julia set is a Cantor bouquet of hairs; the
second settles orbits onto the 2*pi*i ladder and has a very different
Julia set.  Because the two sets differ and each map has a completely
invariant Fatou component, the invariant hull floods the viewport:
saturation is the expected outcome here, in contrast to the sine pair.
"""

from dataclasses import replace

import semijulia as sj

cfg = sj.preset_config("exp-pair", cols=384, rows=384)
gens = list(cfg.generators)
vp = cfg.viewport
classify = cfg.classify.for_viewport(vp)

jf = sj.julia_mask_single(gens[0], vp, classify)
jg = sj.julia_mask_single(gens[1], vp, classify)
print(f"bouquet area {jf.area_fraction:.3f}, ladder-web area {jg.area_fraction:.3f}")
print(f"the two Julia sets are {sj.hausdorff_cells(jf, jg):.0f} cells apart")

sj.emit_mask_image(jf, "exp_bouquet_julia.pgm")
sj.emit_mask_image(jg, "exp_ladder_julia.pgm")

e = sj.iterate_hull(gens, vp, replace(cfg.hull, mode=sj.HullMode.COMPLETELY_INVARIANT),
                    cfg.classify, cfg.seed_word_len)
print(f"invariant hull: {e.status.value} after {e.generations_run} generations")
print("area per generation:", ["%.3f" % a for a in e.per_generation_area])
print("(a saturation verdict is finite-viewport evidence, not a proof)")
print("wrote exp_bouquet_julia.pgm, exp_ladder_julia.pgm")
