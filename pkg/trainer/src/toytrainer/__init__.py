"""Desk-scale training harness and accuracy oracle for frequency-domain curricula."""

from .data import load_cifar_dir, synthesize, upsample_to_64, write_cifar_batches
from .model import SmallCNN, config_hash, forward_flops_per_image, train_step_flops_per_image
from .schedule import (
    Schedule,
    ScheduleError,
    identity_schedule_dict,
    load_schedule,
    parse_schedule,
    save_schedule_dict,
    scaled_schedule_dict,
)
from .train import CSV_HEADER, TrainingDiverged, TrainResult, plan_from_schedule, train
from .transforms import (
    apply_transform_batch,
    crop_batch,
    downsample_mean_batch,
    highpass_batch,
    lowpass_batch,
)
from .trends import TrendConfig, run_trends

__version__ = "0.1.0"
