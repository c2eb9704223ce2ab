"""Scenario presets, configuration files and batch orchestration.

Preset scenarios fix the generator pairs:

    sine-pair      lam*sin(z), lam*sin(z) + 2*pi        (0 < lam < 1)
    exp-pair       lam*exp(z), z - exp(z) + 1 + 2*pi*i  (0 < lam < 1/e)
    rational-pair  z**2, z**2/a                         (|a| > 1)

Configuration files are flat INI text ([section] headers, key=value
lines); every preset value can be overridden.
"""

from __future__ import annotations

import configparser
import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .classify import ClassifyParams, fatou_mask, julia_mask_semigroup, julia_mask_single
from .families import (
    BranchRequest,
    GeneratorSpec,
    power_over_a,
    scaled_exp,
    scaled_sine,
    z_minus_exp_shift,
)
from .grid import PLANE, SPHERE, SetMask, Viewport, hausdorff_cells
from .hull import (
    HullMode,
    HullParams,
    HullResult,
    HullStatus,
    iterate_hull,
    perfectness_report,
    subset_report,
    unboundedness_report,
)
from .imaging import emit_mask_image, emit_report
from .invariance import backward_invariance, complete_invariance, forward_invariance

TWO_PI = 2.0 * math.pi

PRESETS = ("sine-pair", "exp-pair", "rational-pair")
ALL_OUTPUTS = ("julia-single", "julia-semigroup", "e-hull", "j-hull", "invariance", "reports")


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    generators: tuple[GeneratorSpec, ...]
    viewport: Viewport
    classify: ClassifyParams
    hull: HullParams
    word_len: int
    seed_word_len: int = 2  # hull seeds need short words only; backward
    # iteration regenerates the deeper preimage ladder
    invariance_samples: int = 2000
    invariance_seed: int = 20260810
    outputs: tuple[str, ...] = ALL_OUTPUTS

    def __post_init__(self):
        for o in self.outputs:
            if o not in ALL_OUTPUTS:
                raise ValueError(f"unknown output {o!r}; choose from {ALL_OUTPUTS}")


def _sine_pair(lam: float) -> tuple[GeneratorSpec, ...]:
    if not (0 < lam < 1):
        raise ValueError("sine-pair requires 0 < lam < 1 (attracting fixed points)")
    return (scaled_sine(lam), scaled_sine(lam, TWO_PI))


def _exp_pair(lam: float) -> tuple[GeneratorSpec, ...]:
    if not (0 < lam < 1 / math.e):
        raise ValueError("exp-pair requires 0 < lam < 1/e")
    return (scaled_exp(lam), z_minus_exp_shift())


def _rational_pair(a: complex) -> tuple[GeneratorSpec, ...]:
    if abs(a) <= 1:
        raise ValueError("rational-pair requires |a| > 1")
    return (power_over_a(1.0), power_over_a(a))


def preset_config(
    name: str,
    lam: float | None = None,
    a: complex | None = None,
    cols: int = 512,
    rows: int = 512,
) -> ScenarioConfig:
    """Build a preset scenario with its tuned default parameters."""
    classify = ClassifyParams()
    if name == "sine-pair":
        gens = _sine_pair(0.9 if lam is None else lam)
        vp = Viewport(0j, 4 * math.pi, 4 * math.pi, cols, rows, PLANE)
        # exact backward targets: the weakly expanding hair tips would
        # otherwise creep one tolerance cell per generation
        hull = HullParams(max_generations=60, backward_tolerance=0)
        # every word of this pair shares one Julia set, so seeds need length 1
        word_len, seed_word_len = 3, 1
    elif name == "exp-pair":
        gens = _exp_pair(0.3 if lam is None else lam)
        vp = Viewport(0j, 4 * math.pi, 4 * math.pi, cols, rows, PLANE)
        hull = HullParams(max_generations=40)
        word_len, seed_word_len = 2, 2
    elif name == "rational-pair":
        gens = _rational_pair(2.0 if a is None else a)
        vp = Viewport(0j, 3.0, 3.0, cols, rows, SPHERE)
        hull = HullParams(max_generations=30)
        word_len, seed_word_len = 8, 2
    else:
        raise ValueError(f"unknown preset {name!r}; choose from {PRESETS}")
    return ScenarioConfig(name, gens, vp, classify, hull, word_len, seed_word_len)


_GEN_BUILDERS = {
    "scaled_sine": lambda args: scaled_sine(complex(args[0]), complex(args[1]) if len(args) > 1 else 0.0),
    "scaled_exp": lambda args: scaled_exp(complex(args[0]), complex(args[1]) if len(args) > 1 else 0.0),
    "z_minus_exp_shift": lambda args: z_minus_exp_shift(),
    "power_over_a": lambda args: power_over_a(complex(args[0]), int(args[1]) if len(args) > 1 else 2),
}


def load_config(path) -> ScenarioConfig:
    """Parse a scenario configuration file (INI-style sections)."""
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise FileNotFoundError(f"config file {path} not found or unreadable")
    if "scenario" not in cp:
        raise ValueError("config requires a [scenario] section")
    sc = cp["scenario"]
    name = sc.get("name", "custom")

    if name in PRESETS:
        cfg = preset_config(
            name,
            lam=sc.getfloat("lam", fallback=None),
            a=complex(sc.get("a")) if sc.get("a") is not None else None,
            cols=cp.getint("viewport", "cols", fallback=512),
            rows=cp.getint("viewport", "rows", fallback=512),
        )
    elif name == "custom":
        if "generators" not in cp:
            raise ValueError("custom scenarios require a [generators] section")
        gens = []
        for _key, spec in cp.items("generators"):
            parts = spec.split()
            fam, args = parts[0], parts[1:]
            if fam not in _GEN_BUILDERS:
                raise ValueError(f"unknown generator family {fam!r}")
            gens.append(_GEN_BUILDERS[fam](args))
        if not gens:
            raise ValueError("custom scenarios need at least one generator")
        metric = SPHERE if all(g.family == "power_over_a" for g in gens) else PLANE
        vp = Viewport(
            0j,
            cp.getfloat("viewport", "half_width", fallback=4 * math.pi),
            cp.getfloat("viewport", "half_height", fallback=4 * math.pi),
            cp.getint("viewport", "cols", fallback=512),
            cp.getint("viewport", "rows", fallback=512),
            metric,
        )
        cfg = ScenarioConfig(name, tuple(gens), vp, ClassifyParams(), HullParams(), 3, 2)
    else:
        raise ValueError(f"scenario name must be one of {PRESETS} or 'custom'")

    if "viewport" in cp:
        v = cp["viewport"]
        vp = cfg.viewport
        vp = Viewport(
            complex(v.getfloat("center_re", vp.center.real), v.getfloat("center_im", vp.center.imag)),
            v.getfloat("half_width", vp.half_width),
            v.getfloat("half_height", vp.half_height),
            v.getint("cols", vp.cols),
            v.getint("rows", vp.rows),
            v.get("metric", vp.metric),
        )
        cfg = replace(cfg, viewport=vp)
    if "classify" in cp:
        c = cp["classify"]
        base = cfg.classify
        cfg = replace(
            cfg,
            classify=ClassifyParams(
                c.getint("max_iter", base.max_iter),
                c.getfloat("escape_radius", base.escape_radius),
                c.getfloat("attract_tolerance", base.attract_tolerance),
                c.getfloat("separation_delta", base.separation_delta),
                c.getfloat("probe_offset", base.probe_offset),
                c.getboolean("undetermined_as_julia", base.undetermined_as_julia),
            ),
        )
    if "hull" in cp:
        h = cp["hull"]
        base = cfg.hull
        br = base.branch_request
        bt = h.get("backward_tolerance", fallback=None)
        cfg = replace(
            cfg,
            hull=HullParams(
                mode=base.mode,
                max_generations=h.getint("max_generations", base.max_generations),
                saturation_fraction=h.getfloat("saturation_fraction", base.saturation_fraction),
                closure_dilation=h.getint("closure_dilation", base.closure_dilation),
                forward_samples_per_cell=h.getint("forward_samples_per_cell", base.forward_samples_per_cell),
                branch_request=BranchRequest(
                    h.getint("k_min", br.k_min),
                    h.getint("k_max", br.k_max),
                    h.getfloat("newton_tolerance", br.newton_tolerance),
                    h.getint("newton_max_steps", br.newton_max_steps),
                    h.getfloat("seed_spacing", br.seed_spacing),
                ),
                interior_radius=h.getint("interior_radius", base.interior_radius),
                backward_tolerance=int(bt) if bt is not None else base.backward_tolerance,
                forward_derivative_guard=h.getfloat("forward_derivative_guard", base.forward_derivative_guard),
            ),
        )
        if h.get("word_len", fallback=None) is not None:
            cfg = replace(cfg, word_len=h.getint("word_len"))
        if h.get("seed_word_len", fallback=None) is not None:
            cfg = replace(cfg, seed_word_len=h.getint("seed_word_len"))
    if "invariance" in cp:
        iv = cp["invariance"]
        cfg = replace(
            cfg,
            invariance_samples=iv.getint("samples", cfg.invariance_samples),
            invariance_seed=iv.getint("seed", cfg.invariance_seed),
        )
    if "outputs" in cp and cp["outputs"].get("sets", fallback=None) is not None:
        sets = tuple(s.strip() for s in cp["outputs"]["sets"].split(",") if s.strip())
        cfg = replace(cfg, outputs=sets)
    return cfg


def config_echo(cfg: ScenarioConfig) -> list[tuple[str, str, object]]:
    rows: list[tuple[str, str, object]] = [("config", "scenario", cfg.scenario)]
    for i, g in enumerate(cfg.generators):
        desc = g.family
        if g.family in ("scaled_sine", "scaled_exp"):
            desc += f" lam={g.lam:.6g} shift={g.shift:.6g}"
        elif g.family == "power_over_a":
            desc += f" a={g.a:.6g} degree={g.degree}"
        rows.append(("config", f"generator_{i}", desc))
    vp = cfg.viewport
    rows += [
        ("config", "viewport_half_width", vp.half_width),
        ("config", "viewport_half_height", vp.half_height),
        ("config", "viewport_cols", vp.cols),
        ("config", "viewport_rows", vp.rows),
        ("config", "viewport_metric", vp.metric),
        ("config", "word_len", cfg.word_len),
        ("config", "seed_word_len", cfg.seed_word_len),
        ("config", "max_iter", cfg.classify.max_iter),
        ("config", "escape_radius", cfg.classify.escape_radius),
        ("config", "max_generations", cfg.hull.max_generations),
    ]
    return rows


@dataclass
class RunManifest:
    config_rows: list
    metric_rows: list = field(default_factory=list)
    timing_rows: list = field(default_factory=list)
    artifacts: list = field(default_factory=list)
    failed_stage: str | None = None
    masks: dict = field(default_factory=dict)
    hulls: dict = field(default_factory=dict)

    def rows(self, include_timings: bool = False) -> list:
        """Manifest rows; timings are excluded by default so that two
        runs of one config emit byte-identical reports."""
        out = list(self.config_rows) + list(self.metric_rows)
        if include_timings:
            out += list(self.timing_rows)
        if self.failed_stage is not None:
            out.append(("run", "failed_stage", self.failed_stage))
        return out


def _analytic_annulus(vp: Viewport, r_in: float, r_out: float) -> SetMask:
    z = vp.centers()
    w = min(vp.cell_width, vp.cell_height)
    bits = (np.abs(z) >= r_in - w / 2) & (np.abs(z) <= r_out + w / 2)
    return SetMask(vp, bits)


def run_scenario(cfg: ScenarioConfig, out_dir=None) -> RunManifest:
    """Execute the requested stages in dependency order and emit artifacts.

    A stage failure aborts the stages that depend on it; the manifest is
    still produced with the failing stage named.
    """
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    man = RunManifest(config_rows=config_echo(cfg))
    classify = cfg.classify.for_viewport(cfg.viewport)
    gens = list(cfg.generators)

    def emit(mask: SetMask, stem: str):
        if out is not None and "reports" in cfg.outputs:
            p = out / f"{stem}.pgm"
            emit_mask_image(mask, p)
            man.artifacts.append(str(p))

    stage = None
    try:
        if "julia-single" in cfg.outputs or "e-hull" in cfg.outputs or "j-hull" in cfg.outputs \
                or "invariance" in cfg.outputs or "julia-semigroup" in cfg.outputs:
            stage = "julia-single"
            t0 = time.perf_counter()
            for i, g in enumerate(gens):
                jm = julia_mask_single(g, cfg.viewport, classify)
                man.masks[f"julia_single_{i}"] = jm
                man.metric_rows.append((f"julia-single-{i}", "area_fraction", jm.area_fraction))
                emit(jm, f"julia_single_{i}")
            man.timing_rows.append(("julia-single", "seconds", time.perf_counter() - t0))

        if "julia-semigroup" in cfg.outputs or "invariance" in cfg.outputs:
            stage = "julia-semigroup"
            t0 = time.perf_counter()
            js = julia_mask_semigroup(gens, cfg.viewport, cfg.word_len, classify)
            man.masks["julia_semigroup"] = js
            man.metric_rows.append(("julia-semigroup", "area_fraction", js.area_fraction))
            emit(js, "julia_semigroup")
            man.timing_rows.append(("julia-semigroup", "seconds", time.perf_counter() - t0))

        for mode, key, label in (
            (HullMode.COMPLETELY_INVARIANT, "e_hull", "e-hull"),
            (HullMode.BACKWARD_ONLY, "j_hull", "j-hull"),
        ):
            if label not in cfg.outputs:
                continue
            stage = label
            t0 = time.perf_counter()
            hp = replace(cfg.hull, mode=mode)
            res = iterate_hull(gens, cfg.viewport, hp, cfg.classify, cfg.seed_word_len)
            man.hulls[key] = res
            man.metric_rows += [
                (label, "status", res.status.value),
                (label, "generations_run", res.generations_run),
                (label, "final_area_fraction", res.final_mask.area_fraction),
                (label, "forward_dropped", res.forward_dropped),
            ]
            if res.interior_witness is not None:
                man.metric_rows.append(
                    (label, "interior_witness", f"{res.interior_witness[0]}:{res.interior_witness[1]}")
                )
            emit(res.final_mask, key)
            man.timing_rows.append((label, "seconds", time.perf_counter() - t0))

        if cfg.scenario == "rational-pair" and "j_hull" in man.hulls:
            a = abs(cfg.generators[1].a)
            ann = _analytic_annulus(cfg.viewport, 1.0, a)
            hd = hausdorff_cells(man.hulls["j_hull"].final_mask, ann)
            man.metric_rows.append(("j-hull", "hausdorff_vs_analytic_annulus", hd))

        if "e-hull" in cfg.outputs and "j-hull" in cfg.outputs:
            stage = "subset"
            rep = subset_report(man.hulls["j_hull"], man.hulls["e_hull"])
            man.metric_rows.append(("subset", "violations", rep["violations"]))
            e = man.hulls["e_hull"]
            if e.status == HullStatus.CONVERGED:
                man.metric_rows.append(
                    ("perfectness", "isolated_count", perfectness_report(e.final_mask)["isolated_count"])
                )
                man.metric_rows.append(
                    ("unboundedness", "w_touches_edge", unboundedness_report(e)["w_touches_edge"])
                )

        if "invariance" in cfg.outputs:
            stage = "invariance"
            t0 = time.perf_counter()
            js = man.masks["julia_semigroup"]
            fs = fatou_mask(js)
            fwd = forward_invariance(fs, gens, cfg.invariance_samples, cfg.invariance_seed)
            man.metric_rows += [
                ("invariance", "fatou_forward_samples", fwd.samples_tested),
                ("invariance", "fatou_forward_violations", fwd.violations),
                ("invariance", "fatou_forward_violation_fraction", fwd.violation_fraction),
            ]
            bwd = backward_invariance(js, gens, cfg.hull.branch_request,
                                      cfg.invariance_samples, cfg.invariance_seed)
            man.metric_rows += [
                ("invariance", "julia_backward_samples", bwd.samples_tested),
                ("invariance", "julia_backward_violations", bwd.violations),
                ("invariance", "julia_backward_violation_fraction", bwd.violation_fraction),
            ]
            if cfg.scenario == "rational-pair":
                # negative control: this Fatou set is not backward invariant
                neg = backward_invariance(fs, gens, cfg.hull.branch_request,
                                          cfg.invariance_samples, cfg.invariance_seed)
                man.metric_rows.append(
                    ("invariance", "fatou_backward_violation_fraction", neg.violation_fraction)
                )
            if "e_hull" in man.hulls and man.hulls["e_hull"].status == HullStatus.CONVERGED:
                efwd, ebwd = complete_invariance(
                    man.hulls["e_hull"].final_mask, gens, cfg.hull.branch_request,
                    cfg.invariance_samples, cfg.invariance_seed,
                )
                man.metric_rows += [
                    ("invariance", "e_hull_forward_violation_fraction", efwd.violation_fraction),
                    ("invariance", "e_hull_backward_violation_fraction", ebwd.violation_fraction),
                ]
            man.timing_rows.append(("invariance", "seconds", time.perf_counter() - t0))
    except Exception:
        man.failed_stage = stage
        if out is not None:
            emit_report(man.rows(), out / "manifest.csv")
        raise

    if out is not None and "reports" in cfg.outputs:
        p = out / "manifest.csv"
        emit_report(man.rows(), p)
        man.artifacts.append(str(p))
    return man
