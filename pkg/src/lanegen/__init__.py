"""Synthetic multi-modal trajectory samples from lane graphs, plus matching
losses and forecasting metrics to score predictions against them."""

from .kinematics import (
    KinematicProfile,
    SamplingConfig,
    add_past_noise,
    arc_length_schedule,
    interpolate_along,
    sample_profile,
)
from .lane_graph import (
    LaneGraph,
    Lanelet,
    MapFormatError,
    MapValidationError,
    arc_length,
    dumps_lane_graph,
    load_lane_graph,
    predecessors,
    save_lane_graph,
    successors,
)
from .matching import (
    Assignment,
    PredictionSet,
    aux_loss,
    closest_gt_targets,
    combined_loss,
    hungarian,
    main_loss,
    mean_l2_cost,
    prob_loss,
    smooth_l1,
    wta_main_loss,
)
from .metrics import MetricReport, evaluate_files, is_miss, min_ade, min_fde
from .path_search import (
    Guideline,
    LanePath,
    PathCapExceeded,
    backward_path,
    build_guideline,
    enumerate_future_paths,
)
from .predictor import BaselinePredictor, PredictorConfig, map_match, predict
from .sample_gen import (
    MapTrajectoryGenerator,
    TrajectorySample,
    generate_dataset,
    generate_mt_ground_truths,
    generate_sample,
)

__version__ = "0.1.0"
