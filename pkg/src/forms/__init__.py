from src.forms.skew_hermitian import (
    SkewHermitianForm,
    MinorSequence,
    AnisotropyReport,
    build_h,
    n2_matrix_form,
    closed_form_minor,
    principal_minors,
    beta_sign,
    float_beta,
    totally_anisotropic,
    det_sign_n2,
    det_float_n2,
    det_nonzero_n2,
    anisotropy_mask,
    minor_identity_mask,
)
