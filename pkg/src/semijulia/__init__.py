"""Numerical Fatou/Julia machinery for finitely generated holomorphic semigroups."""

from .classify import (
    ClassifyParams,
    OrbitClassification,
    Reason,
    Verdict,
    classify_single,
    fatou_mask,
    julia_mask_semigroup,
    julia_mask_single,
)
from .families import (
    BranchRequest,
    GeneratorSpec,
    SemigroupWord,
    attracting_fixed_point,
    enumerate_words,
    eval_generator,
    eval_word,
    inverse_images,
    newton_preimages,
    power_over_a,
    scaled_exp,
    scaled_sine,
    z_minus_exp_shift,
)
from .grid import (
    PLANE,
    SPHERE,
    SetMask,
    Viewport,
    dilate,
    hausdorff_cells,
    interior_disk_exists,
    isolated_cells,
    touches_boundary,
    union,
)
from .hull import (
    HullMode,
    HullParams,
    HullResult,
    HullStatus,
    build_seed,
    iterate_hull,
    perfectness_report,
    step_hull,
    subset_report,
    unboundedness_report,
)
from .imaging import emit_mask_image, emit_report
from .invariance import (
    InvarianceReport,
    backward_invariance,
    complete_invariance,
    forward_invariance,
)
from .scenarios import ScenarioConfig, load_config, preset_config, run_scenario

__version__ = "0.1.0"

__all__ = [
    "BranchRequest",
    "ClassifyParams",
    "GeneratorSpec",
    "HullMode",
    "HullParams",
    "HullResult",
    "HullStatus",
    "InvarianceReport",
    "OrbitClassification",
    "PLANE",
    "Reason",
    "SPHERE",
    "ScenarioConfig",
    "SemigroupWord",
    "SetMask",
    "Verdict",
    "Viewport",
    "attracting_fixed_point",
    "backward_invariance",
    "build_seed",
    "classify_single",
    "complete_invariance",
    "dilate",
    "emit_mask_image",
    "emit_report",
    "enumerate_words",
    "eval_generator",
    "eval_word",
    "fatou_mask",
    "forward_invariance",
    "hausdorff_cells",
    "interior_disk_exists",
    "inverse_images",
    "isolated_cells",
    "iterate_hull",
    "julia_mask_semigroup",
    "julia_mask_single",
    "load_config",
    "newton_preimages",
    "perfectness_report",
    "power_over_a",
    "preset_config",
    "run_scenario",
    "scaled_exp",
    "scaled_sine",
    "step_hull",
    "subset_report",
    "touches_boundary",
    "unboundedness_report",
    "union",
    "z_minus_exp_shift",
]
