"""Paley-Wiener sampling and frame reconstruction on the line and the hyperbolic plane."""

from .euclid1d import (
    FourierBandGrid,
    band_interior_pw,
    build_fourier_model,
    exponential_frame_bounds,
    jittered_sample_points,
    parseval_check,
    regular_samples,
    shannon_reconstruct,
)
from .frames import (
    ConvergenceWarning,
    FrameNotCertifiedError,
    FrameSystem,
    analysis,
    build_frame,
    dual_frame,
    estimate_frame_bounds,
    frame_from_representers,
    frame_operator,
    invert_frame_operator,
    plancherel_polya_report,
    reconstruct,
    synthesis,
)
from .hyperbolic import (
    UpperHalfPoint,
    build_helgason_model,
    eigenfunction,
    functional_transform,
    geodesic_distance,
    geodesic_polar_point,
    laplacian_pointwise_check,
    rotated_imaginary_part,
)
from .sampling import (
    HalfPlaneBox,
    Interval,
    apply_functional,
    build_lattice,
    make_functional_family,
    representer,
    verify_lattice,
)
from .spectral import (
    DomainError,
    IncompatibleModelsError,
    PWFunction,
    SpectralModel,
    apply_spectral_multiplier,
    bernstein_verify,
    evaluate,
    inner_product,
    random_pw,
)

__version__ = "0.1.0"
