"""Exact and numerical computation for quasimodular forms: q-series over
the rationals, the bigraded ring on three Eisenstein generators, Hecke
operators, the Gauss-Manin connection of a four-parameter elliptic family,
and the period map with its Eisenstein-series inverse.
"""

from .errors import (
    BranchAmbiguity,
    DegenerateCurve,
    InsufficientOrder,
    InternalConsistencyError,
    NoSolution,
    NonUnitSeries,
    NotConvergent,
)
from .forms import (
    G1,
    G2,
    G3,
    FormSpaceKey,
    QMForm,
    assoc_derivative_check,
    decompose,
    expand_rank,
    monomial_basis,
    slash_transform_check,
    space_dimension,
)
from .gaussmanin import (
    ConnectionData,
    GroupElement,
    TPoly,
    act,
    alpha_inverse,
    alpha_map,
    detB_check,
    discriminant,
    discriminant_second,
    flatness_check,
    flatness_pair,
    gm_matrices,
    j_param,
    vectorfield_pushforward_check,
)
from .hecke import (
    HeckeContext,
    composition_exponent,
    hecke,
    hecke_commutes_with_derive,
    hecke_composition_check,
    hecke_series,
)
from .mpoly import MPoly
from .periods import (
    ParamPoint,
    PeriodPoint,
    agm,
    b_functions,
    cycle_integrals,
    embed_upper_half,
    i_ratio,
    inverse_map,
    period_matrix,
    quadrature_cycles,
    quasi_periods,
    sl2z_reduce,
    theorem2_check,
    weierstrass_periods,
)
from .qseries import QSeries, bernoulli, eisenstein, eta24, j_classical, sigma

__version__ = "0.1.0"
