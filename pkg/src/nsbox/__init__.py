"""Causality analysis for bipartite quantum channels and non-signalling boxes."""

from .boxes import (
    ClassicalBox,
    QuantumBoxFamily,
    is_nonsignalling_box,
    lambda_alpha,
    lambda_alpha_prime,
    lambda_k,
    lambda_nl,
    lambda_nl_prime,
    measure_box,
    pr_extreme,
)
from .causality import (
    AssignmentTable,
    CausalityVerdict,
    Semilocalization,
    SignallingWitness,
    channel_from_table,
    definitional_semicausality_probe,
    is_causal,
    is_semicausal_a_to_b,
    is_semicausal_b_to_a,
    product_projector_basis,
    reduced_map,
    same_reduced_class,
    semilocalize,
    signalling_witness,
    table_from_channel,
    unitary_form,
    unitary_is_signalling,
)
from .channels import (
    BipartiteChannel,
    Channel,
    ChoiState,
    LinearMapChoi,
    Povm,
    apply,
    choi_to_kraus,
    compose,
    depolarizing,
    ebt_channel,
    kraus_to_choi,
    max_cp_mixing,
    mix,
    mix_with_depolarizing,
    positive_map,
    random_channel,
    shift_clock_unitaries,
    tensor,
    unitary_channel,
)
from .chsh import (
    CHSHResult,
    CHSHSettings,
    chsh_box,
    chsh_experiment,
    chsh_optimize,
    i_m_analytic,
    i_m_prime_analytic,
    phi_opt,
)
from .entpower import (
    TradeoffPoint,
    e_pow_monte_carlo,
    e_pow_quadrature,
    e_r_bell_diag,
    shannon_h,
    tradeoff_curve,
)
from .vandam import (
    BooleanFunction,
    PrBoxNet,
    Transcript,
    general_protocol,
    gf2_decompose,
    inner_product_protocol,
    naive_cost,
    pr_sample,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
