"""Extended-neighborhood binary-weighted enhancement filter toolkit."""

from .baselines import (
    DiffusionConfig,
    NlmConfig,
    anisotropic_diffuse,
    gradient_magnitude,
    nlm_filter,
    prefilter_pipeline,
)
from .bwfilter import (
    FilterConfig,
    apply_filter,
    binary_map,
    direction_kspace,
    weight_image,
    zero_border,
)
from .estimation import (
    ContrastEstimate,
    NoiseEstimate,
    ThresholdBracketError,
    estimate_croi,
    estimate_noise_variance,
    select_threshold,
    skewness,
)
from .imagecore import (
    Roi,
    add_gaussian_noise,
    as_image,
    extract_roi,
    line_profile,
    load_image,
    percent_to_sigma,
    save_image,
)
from .metrics import CnrResult, auto_threshold, cnr, cnr_sweep, sweep_csv
from .neighborhood import (
    Direction,
    Lattice,
    Quadrant,
    direction_count,
    enumerate_directions,
    neighborhood_mask,
    quadrant_count,
)
from .phantom import (
    PhantomSpec,
    interior_region_masks,
    load_phantom_spec,
    make_phantom,
    phantom_regions,
    with_noise,
)
from .shiftops import shift_image, shift_oracle

__version__ = "0.1.0"
