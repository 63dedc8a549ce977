"""Clarke-transform toolkit for displacement-actuated continuum robots.

Builds the generalized Clarke transform for arbitrary joint counts and
joint locations and uses it to retarget joint values between robot
designs, sample feasible configurations, plan C4-smooth joint
trajectories, and simulate closed-loop PD control of noisy first-order
actuators.
"""

__version__ = "0.1.0"

from .core import (
    ArcParameters,
    CONDITION_LIMIT,
    RobotDesign,
    TransformPair,
    arc_forward_matrix,
    arc_inverse_matrix,
    from_arc,
    gram_condition,
    inverse_clarke_matrix,
    modified_inverse_matrix,
    modified_transform_pair,
    symmetric_design,
    to_arc,
    transform_pair,
    wrap_angle,
)
from .designs import (
    builtin_designs,
    design_report,
    design_to_dict,
    get_design,
    load_design,
    save_design,
)
from .errors import (
    ClarkeError,
    DegenerateDesign,
    DimensionMismatch,
    InvalidParameter,
    OutOfRange,
    ParseError,
)
from .retarget import (
    PerturbationRecord,
    PerturbedDesign,
    TransferMap,
    make_transfer_map,
    perturbation_analysis,
    polar_clarke_grid,
    transfer_general,
    transfer_symmetric,
)
from .sampling import SampleBatch, sample_clarke_disk, sample_joints, write_samples_csv
from .simulate import (
    MODES,
    DesiredStream,
    Pt1Actuator,
    SimConfig,
    SimRun,
    desired_stream,
    pt1_step,
    run,
    run_experiment,
)
from .trajectory import (
    DEFAULT_A_MAX,
    DEFAULT_LIMITS,
    DEFAULT_V_MAX,
    PEAK_SLOPE,
    KinematicLimits,
    PlannedTrajectory,
    TrajectoryState,
    blend,
    evaluate,
    peak_abs,
    plan_segment,
    plan_trajectory,
    smoothstep,
    smoothstep_integral,
    smoothstep_slope,
    synchronize,
    write_trajectory_csv,
)

__all__ = [
    "ArcParameters",
    "CONDITION_LIMIT",
    "ClarkeError",
    "DEFAULT_A_MAX",
    "DEFAULT_LIMITS",
    "DEFAULT_V_MAX",
    "DegenerateDesign",
    "DesiredStream",
    "DimensionMismatch",
    "InvalidParameter",
    "KinematicLimits",
    "MODES",
    "OutOfRange",
    "PEAK_SLOPE",
    "ParseError",
    "PerturbationRecord",
    "PerturbedDesign",
    "PlannedTrajectory",
    "Pt1Actuator",
    "RobotDesign",
    "SampleBatch",
    "SimConfig",
    "SimRun",
    "TrajectoryState",
    "TransferMap",
    "TransformPair",
    "arc_forward_matrix",
    "arc_inverse_matrix",
    "blend",
    "builtin_designs",
    "design_report",
    "design_to_dict",
    "desired_stream",
    "evaluate",
    "from_arc",
    "get_design",
    "gram_condition",
    "inverse_clarke_matrix",
    "load_design",
    "make_transfer_map",
    "modified_inverse_matrix",
    "modified_transform_pair",
    "peak_abs",
    "perturbation_analysis",
    "plan_segment",
    "plan_trajectory",
    "polar_clarke_grid",
    "pt1_step",
    "run",
    "run_experiment",
    "sample_clarke_disk",
    "sample_joints",
    "save_design",
    "smoothstep",
    "smoothstep_integral",
    "smoothstep_slope",
    "symmetric_design",
    "synchronize",
    "to_arc",
    "transfer_general",
    "transfer_symmetric",
    "transform_pair",
    "wrap_angle",
    "write_samples_csv",
    "write_trajectory_csv",
]
