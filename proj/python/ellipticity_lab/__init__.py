"""Strong ellipticity certification for 3x3x3x3 elasticity tensors."""

from ._core import (
    CaseMismatch,
    Elast4,
    EllipticityError,
    InvalidEpsilon,
    ParseError,
    SymmetryViolation,
    biquadratic,
    certify_mpd,
    certify_mpsd,
    check,
    check_case,
    contract_yy,
    is_spd,
    is_spsd,
    load_tensor,
    min_eigenvalue,
    oracle,
    random_spd_tensor,
    run_pocs,
    save_tensor,
    tensor_choi_lam,
    tensor_E,
    tensor_isotropic,
    tensor_mpsd_not_spsd,
    unfold,
)

__all__ = [name for name in dir() if not name.startswith("_")]
