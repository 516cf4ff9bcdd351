"""Desk-scale learning-with-errors laboratory.

Thin python surface over the C++ core: discrete Gaussians over Z_q, LWE
instance generation and solvers, the exact statevector QFT attack,
information-theoretic bounds, and lattice displacement decoding.
"""

from ._core import (  # noqa: F401
    AttackReport,
    DensityMatrix,
    DiscreteGaussian,
    InstanceSet,
    SecretKey,
    __version__,
    additive_channel_capacity,
    binary_entropy,
    brute_force_search,
    concatenated_error_rate,
    decision_statistical_distance,
    decode_displacement,
    exact_conditional_entropy,
    fano_bound,
    fannes_audenaert_check,
    fourier_coefficient,
    gen_secret,
    gkz_attack,
    key_confirmation,
    logical_error_probability,
    lwe_state_pair_trace_distance,
    make_gaussian,
    predicted_success_probability,
    sample_error,
    sample_lwe,
    sample_uniform,
    shannon_entropy,
    solve_noiseless,
    trace_distance,
    von_neumann_entropy,
)
