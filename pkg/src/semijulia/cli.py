"""Batch command line: run, render, verify."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

FINITE_VIEWPORT_NOTE = (
    "note: a whole-plane verdict is saturation evidence on a finite viewport, "
    "not a proof; only the converse (convergence to a proper subset) is "
    "directly observable at this resolution."
)


def _apply_threads(args):
    n = os.environ.get("SJ_THREADS")
    if n is None and getattr(args, "threads", None):
        n = args.threads
    if n:
        import numba

        numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))


def _cmd_run(args) -> int:
    from .scenarios import load_config, run_scenario

    cfg = load_config(args.config)
    man = run_scenario(cfg, out_dir=args.out_dir)
    for stage, metric, value in man.rows(include_timings=True):
        print(f"{stage}/{metric} = {value}")
    if man.failed_stage:
        print(f"failed stage: {man.failed_stage}", file=sys.stderr)
        return 1
    return 0


def _cmd_render(args) -> int:
    from .classify import julia_mask_semigroup, julia_mask_single
    from .hull import HullMode, iterate_hull
    from .imaging import emit_mask_image
    from .scenarios import preset_config

    cfg = preset_config(args.scenario, cols=args.size, rows=args.size)
    classify = cfg.classify.for_viewport(cfg.viewport)
    gens = list(cfg.generators)
    which = args.set
    if which == "jf":
        mask = julia_mask_single(gens[0], cfg.viewport, classify)
    elif which == "jg":
        mask = julia_mask_single(gens[1], cfg.viewport, classify)
    elif which == "js":
        mask = julia_mask_semigroup(gens, cfg.viewport, cfg.word_len, classify)
    elif which == "e":
        hp = replace(cfg.hull, mode=HullMode.COMPLETELY_INVARIANT)
        mask = iterate_hull(gens, cfg.viewport, hp, cfg.classify, cfg.seed_word_len).final_mask
    else:  # "j"
        hp = replace(cfg.hull, mode=HullMode.BACKWARD_ONLY)
        mask = iterate_hull(gens, cfg.viewport, hp, cfg.classify, cfg.seed_word_len).final_mask
    out = args.out or f"{args.scenario.replace('-', '_')}_{which}.pgm"
    emit_mask_image(mask, out)
    print(f"wrote {out}")
    return 0


def _cmd_verify(args) -> int:
    from .classify import fatou_mask, julia_mask_semigroup
    from .hull import (
        HullMode,
        HullStatus,
        iterate_hull,
        perfectness_report,
        subset_report,
        unboundedness_report,
    )
    from .imaging import emit_mask_image, emit_report
    from .invariance import backward_invariance, forward_invariance
    from .scenarios import preset_config

    cfg = preset_config(args.scenario, cols=args.size, rows=args.size)
    classify = cfg.classify.for_viewport(cfg.viewport)
    gens = list(cfg.generators)
    checks: list[tuple[str, bool, str]] = []
    rows: list[tuple[str, str, object]] = []

    js = julia_mask_semigroup(gens, cfg.viewport, cfg.word_len, classify)
    fs = fatou_mask(js)
    e = iterate_hull(gens, cfg.viewport,
                     replace(cfg.hull, mode=HullMode.COMPLETELY_INVARIANT),
                     cfg.classify, cfg.seed_word_len)
    j = iterate_hull(gens, cfg.viewport,
                     replace(cfg.hull, mode=HullMode.BACKWARD_ONLY),
                     cfg.classify, cfg.seed_word_len)

    fwd = forward_invariance(fs, gens, cfg.invariance_samples, cfg.invariance_seed)
    checks.append((
        "fatou-forward-invariance",
        fwd.violation_fraction <= 0.01,
        f"violation_fraction={fwd.violation_fraction:.6g}",
    ))
    rows.append(("invariance", "fatou_forward_violation_fraction", fwd.violation_fraction))

    bwd = backward_invariance(js, gens, cfg.hull.branch_request,
                              cfg.invariance_samples, cfg.invariance_seed)
    checks.append((
        "julia-backward-invariance",
        bwd.violation_fraction <= 0.01,
        f"violation_fraction={bwd.violation_fraction:.6g}",
    ))
    rows.append(("invariance", "julia_backward_violation_fraction", bwd.violation_fraction))

    if cfg.scenario == "rational-pair":
        neg = backward_invariance(fs, gens, cfg.hull.branch_request,
                                  cfg.invariance_samples, cfg.invariance_seed)
        checks.append((
            "fatou-backward-negative-control",
            neg.violation_fraction > 0.05,
            f"violation_fraction={neg.violation_fraction:.6g} (expected substantial)",
        ))
        rows.append(("invariance", "fatou_backward_violation_fraction", neg.violation_fraction))

    sub = subset_report(j, e)
    checks.append(("subset-j-in-e", sub["violations"] == 0, f"violations={sub['violations']}"))
    rows.append(("subset", "violations", sub["violations"]))

    mono_e = all(a <= b + 1e-12 for a, b in zip(e.per_generation_area, e.per_generation_area[1:]))
    mono_j = all(a <= b + 1e-12 for a, b in zip(j.per_generation_area, j.per_generation_area[1:]))
    checks.append(("generation-monotonicity", mono_e and mono_j, "per-generation areas nondecreasing"))
    rows.append(("hulls", "e_status", e.status.value))
    rows.append(("hulls", "j_status", j.status.value))

    if e.status == HullStatus.CONVERGED:
        perf = perfectness_report(e.final_mask)
        checks.append(("perfectness", perf["isolated_count"] == 0,
                       f"isolated_count={perf['isolated_count']}"))
        rows.append(("perfectness", "isolated_count", perf["isolated_count"]))
        unb = unboundedness_report(e)
        checks.append(("unboundedness", unb["w_touches_edge"],
                       f"w_touches_edge={unb['w_touches_edge']}"))
        rows.append(("unboundedness", "w_touches_edge", unb["w_touches_edge"]))

    out = Path(args.out_dir) if args.out_dir else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        emit_mask_image(js, out / "julia_semigroup.pgm")
        emit_mask_image(e.final_mask, out / "e_hull.pgm")
        emit_mask_image(j.final_mask, out / "j_hull.pgm")
        emit_report(rows, out / "verify_report.csv")

    ok = True
    for name, passed, detail in checks:
        print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
        ok &= passed
    print(FINITE_VIEWPORT_NOTE)
    return 0 if ok else 1


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="semijulia",
                                 description="holomorphic semigroup set approximation")
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario from a config file")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out-dir", default=None)
    p_run.add_argument("--threads", type=int, default=None)
    p_run.set_defaults(fn=_cmd_run)

    p_render = sub.add_parser("render", help="render one set of a preset scenario")
    p_render.add_argument("--scenario", required=True,
                          choices=("sine-pair", "exp-pair", "rational-pair"))
    p_render.add_argument("--set", required=True, choices=("jf", "jg", "js", "e", "j"))
    p_render.add_argument("--out", default=None)
    p_render.add_argument("--size", type=int, default=512)
    p_render.add_argument("--threads", type=int, default=None)
    p_render.set_defaults(fn=_cmd_render)

    p_verify = sub.add_parser("verify", help="run the invariance/subset/perfectness suite")
    p_verify.add_argument("--scenario", required=True,
                          choices=("sine-pair", "exp-pair", "rational-pair"))
    p_verify.add_argument("--out-dir", default=None)
    p_verify.add_argument("--size", type=int, default=512)
    p_verify.add_argument("--threads", type=int, default=None)
    p_verify.set_defaults(fn=_cmd_verify)

    args = ap.parse_args(argv)
    _apply_threads(args)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
