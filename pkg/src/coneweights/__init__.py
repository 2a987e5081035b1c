"""Weight calculus for geometric elliptic operators on conical spaces.

Computes indicial roots, Fredholm weight windows, index ladders, closed-
extension and Witt criteria for the Laplacian, the Dirac operator, and
generic dilation-form operators, backed by a model-cone numerical harness
(Mellin transform, Euler radial modes, curvature identities) with
independent brute-force oracles.
"""

from ._scalars import Scalar, fmt, parse_scalar
from .errors import (
    ConeWeightsError,
    GridError,
    InsufficientSpectrumError,
    OnBreakpointError,
    SpectrumInvariantError,
    SpectrumParseError,
)
from .fredholm import (
    AcylWindows,
    ConifoldVerdict,
    DiracWindows,
    IndexLadder,
    WeightWindow,
    WeightedIndex,
    acyl_windows,
    asymptotics_set_dirac,
    asymptotics_set_laplace,
    base_window,
    conifold_windows,
    dirac_windows,
    index_ladder,
    is_elliptic_at,
    self_adjoint_weight,
    sobolev_embedding,
    to_delta_acyl,
    to_delta_ah,
    to_gamma,
    unique_closed_extension,
    window_ac0,
    window_acinf,
    window_ah,
    window_ah_shifted,
    witt_check,
)
from .link_spectra import (
    DiracSpectrumTable,
    SpectrumTable,
    dirac_gap_from_scalar_curvature,
    first_positive_eigenvalue,
    load_spectrum,
    point_spectrum,
    product_link_spectrum,
    rescale_link,
    sphere_laplace_spectrum,
)
from .model_cone import (
    EulerSolution,
    ExtractionResult,
    FdExponents,
    LogGrid,
    ModeFunction,
    ModeTerm,
    apply_mode_operator,
    asymptotics_extraction,
    conformal_scalar_identity,
    decay_check,
    euler_solve_mode,
    fd_branch_seed,
    fd_exponent_oracle,
    membership,
    mellin_derivative_check,
    mellin_forward,
    mellin_isometry_check,
    scalar_curvature_leading,
    solve_model_problem,
    warped_cone_scalar_fd,
)
from .symbols import (
    ConeData,
    Convention,
    IndicialRoot,
    dirac_roots,
    generic_conormal_roots,
    laplace_roots_downstairs,
    laplace_roots_upstairs,
    symbol_eval,
)

__version__ = "0.1.0"
