"""Numerical toolkit for almost-periodic remainder functions.

Truncated exponential sums, asymptotic moments by resonance enumeration,
limiting-distribution estimation with tail analysis, exact arithmetic
remainder generators (prime counting, circle and divisor problems), and
the hyperbolic circle problem (orbit counting, spectral main term,
windowed variance, smoothing kernels, spectral transforms, integrated
remainder).
"""

__version__ = "0.1.0"

from .spectrum import (  # noqa: F401
    CutoffSchedule,
    DecayFit,
    Spectrum,
    empty_spectrum,
    fit_beta,
    load_spectrum,
    save_spectrum,
    window_coefficient_sums,
)
from .trigsum import (  # noqa: F401
    SampledFunction,
    eval_grid,
    eval_sum,
    split_truncation,
)
from .moments import (  # noqa: F401
    MomentReport,
    ResonantTuple,
    empirical_moment,
    moment_convergence,
    theoretical_moment,
)
from .distribution import (  # noqa: F401
    DistributionEstimate,
    TailFit,
    compare_moments,
    estimate_distribution,
    fit_tails,
    predicted_tail_exponent,
    truncated_distribution,
)
from .arithmetic import (  # noqa: F401
    ArithmeticTable,
    ZeroTable,
    bundled_zero_table,
    chebyshev_psi,
    divisor_remainder,
    divisor_sums,
    gauss_remainder,
    gauss_spectrum,
    lattice_count_R,
    load_zero_table,
    pnt_remainder,
    zeta_spectrum,
)
from .hyperbolic.plane import (  # noqa: F401
    HPoint,
    MoebiusMap,
    apply_map,
    hyperbolic_distance,
)
from .hyperbolic.orbit import (  # noqa: F401
    GeneratorGroup,
    ModularGroup,
    OrbitBall,
    count_orbit,
)
from .hyperbolic.shc import (  # noqa: F401
    KernelPair,
    g_transform,
    h_pm,
    shc_asymptotic,
    shc_imag,
    shc_integral,
    shc_small_r,
    smoothed_kernels,
)
from .hyperbolic.counting import (  # noqa: F401
    SpectralData,
    integrated_remainder_G3,
    main_term,
    pslz_spectral_data,
    remainder_e,
    variance_window,
)
from .errors import (  # noqa: F401
    AliasingError,
    BudgetExceededError,
    QuadratureError,
    SpectrumFormatError,
)
