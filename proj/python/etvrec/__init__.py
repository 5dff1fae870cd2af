"""Enhanced total variation reconstruction from Fourier samples."""

from ._etvrec import (
    DenoiseConfig,
    FrequencyMask,
    InnerSolve,
    MeasurementOperator,
    SolverAbort,
    SolverConfig,
    add_noise,
    alpha_bound,
    check_lemmas,
    denoise,
    dft2,
    dft2_inv,
    enhanced_tv,
    full_mask,
    gradient,
    haar2,
    haar2_inv,
    radial_mask,
    relative_error,
    rip_constants,
    shepp_logan,
    solve_enhanced_tv,
    solve_tv,
    solve_tva_tvi,
    ssim,
    synthetic_image,
    tv_aniso,
    tv_iso,
    variable_density_mask,
)

__all__ = [name for name in dir() if not name.startswith("_")]
