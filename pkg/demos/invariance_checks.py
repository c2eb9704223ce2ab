"""Forward/backward invariance of the rational pair's Fatou and Julia sets.

The headline asymmetry of semigroup dynamics: the Fatou set stays
forward invariant under every generator, but it need not be backward
invariant.  For z^2 and z^2/2, preimages of points outside the big
circle land inside the Julia annulus, and the check below catches that
with a large violation fraction while the other three stay near zero.
"""

import semijulia as sj

cfg = sj.preset_config("rational-pair", cols=384, rows=384)
gens = list(cfg.generators)
classify = cfg.classify.for_viewport(cfg.viewport)

js = sj.julia_mask_semigroup(gens, cfg.viewport, cfg.word_len, classify)
fs = sj.fatou_mask(js)
req = cfg.hull.branch_request

fwd = sj.forward_invariance(fs, gens, samples=2000, seed=1)
print(f"Fatou forward:   {fwd.violation_fraction:.4f} violations "
      f"({fwd.excluded_outside} landings left the viewport)")

bwd = sj.backward_invariance(js, gens, req, samples=2000, seed=1)
print(f"Julia backward:  {bwd.violation_fraction:.4f} violations")

neg = sj.backward_invariance(fs, gens, req, samples=2000, seed=1)
print(f"Fatou backward:  {neg.violation_fraction:.4f} violations  <-- the negative control")
if neg.worst_witness:
    z, gi = neg.worst_witness
    print(f"   e.g. {z:.3f} has a generator-{gi} preimage deep in the annulus")
