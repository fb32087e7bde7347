"""Frequency-domain curriculum toolkit.

Lossless low-frequency spectrum cropping, circular filtering, kernel-model
down-sampling with aliasing analysis, magnitude-scheduled augmentation,
epoch curricula with a quadratic cost model, and a greedy schedule search
driven by a pluggable accuracy oracle.
"""

from .augment import DEFAULT_OPS, AugPolicy, apply_op, magnitude_at, randaug
from .curriculum import (
    Crop,
    Downsample,
    HighPass,
    Identity,
    LowPass,
    MagnitudeRule,
    Schedule,
    Stage,
    TransformSpec,
    efficienttrain_schedule,
    load_schedule,
    lookup,
    relative_cost,
    save_schedule,
    schedule_from_dict,
    schedule_to_dict,
    schedule_to_json,
)
from .errors import (
    ConfigError,
    ConsistencyError,
    DataError,
    DimensionError,
    FreqTrainError,
    ProtocolError,
    RangeError,
    SymmetryError,
)
from .image import ImageTensor
from .io import load_image, read_tensor, save_pgm, save_png, write_tensor
from .pipeline import JobManifest, apply_transform, manifest_from_json, run_transform_job
from .resample import (
    KernelSpec,
    LeakageReport,
    alias_set,
    alpha,
    beta,
    downsample,
    fold_bin,
    leakage_report,
    measure_alpha,
    rational_leakage_fractions,
    rational_resample,
    upsample_nearest,
)
from .search import (
    OracleSpec,
    SearchConfig,
    SearchResult,
    TraceEntry,
    greedy_search,
    oracle_invoke,
    schedule_for_vector,
)
from .spectral import (
    CropParams,
    FilterParams,
    Spectrum,
    circular_mask,
    crop_spectrum,
    dft2,
    high_pass_filter,
    idft2,
    low_frequency_crop,
    low_pass_filter,
    recover_low_spectrum,
    spectral_energy,
)

__version__ = "0.1.0"
