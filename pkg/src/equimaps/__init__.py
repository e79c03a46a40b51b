"""Equivariant maps between representation spheres of p-tori and tori."""
from .bounds import (
    BoundReport,
    DecisionReport,
    Verdict,
    decide_map_existence,
    global_bound,
    infinite_witness,
    parity_refine,
    refined_bounds,
)
from .reps import (
    GroupDescriptor,
    InputError,
    Representation,
    complex_dim,
    fixed_subrep,
    isotropy_subgroups,
    line_partition,
    maximal_isotropy,
    parse_representation,
    real_dim,
)
from .synth import (
    MapRefused,
    SynthesizedMap,
    act,
    evaluate,
    power_exponent,
    projection_map,
    synthesize_equivariant,
    synthesize_partial,
)
from .verify import (
    VerificationConfig,
    check_equivariance,
    estimate_local_dimension,
    sample_zero_set,
    verify_bound,
)

__version__ = "0.1.0"
