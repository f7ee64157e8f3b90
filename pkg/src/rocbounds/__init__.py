"""Sharp distribution-free bounds on P(X <= Y + mu) and the AUC."""

from .bounds import (
    BoundResult,
    Branch,
    ConvergenceFailure,
    Direction,
    RootSolve,
    corollary3_bound,
    corollary6_lower,
    gauss_bound,
    lemma2_bound,
    mode_shift_constant,
    solve_u_of_t,
    theorem4_bound,
    theorem4_envelope,
    theorem9_upper,
)
from .extremal_dists import (
    BoxcarComponent,
    DensityGrid,
    ExtremalDistribution,
    is_log_concave,
    make_lemma2_atom,
    make_lemma2_flat,
    make_thm4_extremal,
    make_uniform_b,
    sample,
    tail_prob,
)
from .roc import EmpiricalSample, Label, RocCurve, auc_mann_whitney, roc_curve, threshold_of_alpha
from .verify import (
    IntervalSet,
    SweepReport,
    monte_carlo_prob,
    prob_leq_shift,
    reflection_identity_check,
    riesz_check,
    sweep_lemma2,
    sweep_theorem4,
    symmetrize,
)

__version__ = "0.1.0"
