"""Generalized concurrence and entanglement of formation for d-computable states."""

from .concurrence import (
    TwoLevelSpectrum,
    eof_from_d,
    eof_two_level,
    gen_concurrence_d,
    gen_determinant_D,
    pure_summary,
    spectrum_structure,
    wootters_C,
)
from .dcomputable import (
    DComputableParams,
    SymFamilyParams,
    bracket_form,
    build_A,
    build_A4_sym,
    build_J,
    d_closed_form,
    d_sym_closed,
    family_project,
    norm_form,
    verify_identities,
)
from .linalg import haar_unitary, herm_eig, psd_sqrt, takagi
from .mixed import (
    brute_force_min,
    equalized_decomposition,
    lambda_spectrum,
    mixed_concurrence,
    optimal_decomposition,
    random_class_density,
    tau_matrix,
)
from .pmatrix import BiformMatrix, biform, derive_p, p16_explicit
from .states import (
    DensityMatrix,
    Ensemble,
    PureState,
    ensemble_density,
    entropy,
    eof_pure,
    make_pure,
    reduced_density,
    transform_ensemble,
)

__version__ = "0.1.0"
