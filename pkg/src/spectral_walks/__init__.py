"""Random-matrix spectra through non-backtracking walks and orthogonal polynomials.

Subpackages: `poly` (recurrences, quadrature), `measures` (limiting laws and
Kolmogorov distances), `graphs` (walk enumeration and fragments),
`ensembles` (seeded random matrices), `spectra` (eigensolving, traces),
`bounds` (stability certificates, tail experiments), `cli` (experiment
driver).
"""

from .bounds import cms_bound, certify, epsilons_from_spectrum, markov_stieltjes_polys, tail_experiment
from .ensembles import (
    RectSignMatrix,
    SignMatrix,
    covariance,
    derive_seed,
    hadamard,
    rect_sign_matrix,
    sign_matrix_on_graph,
    split_wigner,
    wigner_matrix,
)
from .graphs import (
    Graph,
    Walk,
    classify_fragments,
    complete,
    complete_bipartite,
    count_walks,
    cycle,
    enumerate_nb_walks,
    even_walk_census,
    from_edge_list,
    girth,
    load_edge_list,
    make_graph,
    petersen,
    random_regular,
    signed_walk_sum,
    signed_walk_sums,
)
from .measures import (
    EmpiricalSpectrum,
    LimitMeasure,
    bernstein_szego_measure,
    godsil_mohar_measure,
    kesten_mckay_measure,
    kesten_mckay_scaled_measure,
    ks_distance_empirical,
    ks_distance_measures,
    marchenko_pastur_measure,
    marchenko_pastur_scaled_measure,
    moment,
    wigner_measure,
)
from .poly import (
    QuadratureRule,
    ThreeTermRecurrence,
    bernstein_szego_recurrence,
    canonical_form,
    chebyshev_u,
    chebyshev_u_recurrence,
    christoffel,
    gauss_jacobi,
    growth_check,
    jacobi_zeros,
    kesten_mckay_recurrence,
    marchenko_pastur_q_recurrence,
    max_christoffel_b,
    poly_eval,
    poly_eval_matrix,
    sup_norm_B,
)
from .spectra import dk_shift_bound, empirical, operator_norm, sym_eigenvalues, trace_poly

__version__ = "0.1.0"
