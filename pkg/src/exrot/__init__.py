"""Extended rule-of-thumb bandwidth selection for Gaussian kernel density estimation."""
from .bandwidth import (
    GAUSSIAN,
    BandwidthResult,
    KernelSpec,
    h_amise,
    h_exrot_1d,
    h_exrot_deriv_1d,
    h_exrot_deriv_nd,
    h_exrot_nd,
    h_exrot_per_axis,
    h_rot_1d,
    h_rot_deriv_1d,
    h_rot_deriv_nd,
    h_rot_nd,
)
from .hermite import (
    alpha_coefficients,
    gaussian_derivative_1d,
    gaussian_pdf_nd,
    gca_density,
    hermite_1d,
    hermite_vector,
)
from .kde import DensityEstimate, kde_1d, kde_derivative_1d, kde_nd, kde_whitened
from .mixtures import NormalMixture, marron_wand, mixture_pdf, mixture_sample
from .roughness import (
    RoughnessReport,
    roughness_derivative_1d,
    roughness_derivative_nd,
    roughness_exrot_1d,
    roughness_exrot_nd,
)
from .stats import (
    Cumulants1D,
    CumulantVectors,
    WhitenTransform,
    cumulant_vectors,
    cumulants_1d,
    moment_vector,
    whiten,
)

__version__ = "0.1.0"
