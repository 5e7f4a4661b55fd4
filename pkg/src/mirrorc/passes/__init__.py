from .inline import INLINE, inline_kernel, inline_kernels
from .lower import LOWER_NATIVE, RULES, GateLoweringRule, lower_to_native
from .manager import Pass, PassError, check_pipeline, kernel_pass, run_pipeline
from .optimize import CANCEL, MERGE, cancel_adjacent_inverses, merge_rotations, normalize_angle

__all__ = [
    "CANCEL",
    "INLINE",
    "LOWER_NATIVE",
    "MERGE",
    "RULES",
    "GateLoweringRule",
    "Pass",
    "PassError",
    "cancel_adjacent_inverses",
    "check_pipeline",
    "inline_kernel",
    "inline_kernels",
    "kernel_pass",
    "lower_to_native",
    "merge_rotations",
    "normalize_angle",
    "run_pipeline",
]
