"""Hyperbolic circle problem: geometry, orbit counting, spectral transforms."""

from .plane import HPoint, MoebiusMap, apply_map, hyperbolic_distance  # noqa: F401
from .orbit import GeneratorGroup, ModularGroup, OrbitBall, count_orbit  # noqa: F401
from .shc import (  # noqa: F401
    KernelPair,
    g_transform,
    h_pm,
    shc_asymptotic,
    shc_imag,
    shc_integral,
    shc_small_r,
    smoothed_kernels,
)
from .counting import (  # noqa: F401
    SpectralData,
    integrated_remainder_G3,
    load_spectral_data,
    main_term,
    pslz_spectral_data,
    remainder_e,
    save_spectral_data,
    variance_window,
)
