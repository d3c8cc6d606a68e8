"""Command handlers for the loggamma CLI."""

from .compute import (
    handle_compute_asymptotic_c,
    handle_compute_char_dir,
    handle_compute_cramer,
    handle_compute_decomposition,
    handle_compute_free_energy,
    handle_compute_free_energy_line,
    handle_compute_infconv,
    handle_compute_kappa,
    handle_compute_lmgf,
    handle_compute_lmgf_dual,
    handle_compute_lmgf_hor,
    handle_compute_lmgf_stationary,
    handle_compute_lmgf_ver,
    handle_compute_p_hor,
    handle_compute_r_s,
    handle_compute_rate,
    handle_compute_rate_line,
    handle_compute_rate_origin,
    handle_compute_specfun,
    handle_compute_stationary,
    handle_compute_trans,
    handle_compute_vbar,
)
from .simulate import (
    handle_simulate_env_dump,
    handle_simulate_logz,
    handle_simulate_logz_ddim,
    handle_simulate_logz_line,
    handle_simulate_lmgf,
    handle_simulate_path,
    handle_simulate_plan,
    handle_simulate_right_tail,
)
from .verify import (
    handle_verify_burke,
    handle_verify_decomp_identity,
    handle_verify_duality,
    handle_verify_epsilon_fit,
    handle_verify_lln,
    handle_verify_mean_identity,
    handle_verify_transitions,
    handle_verify_variance_scan,
)

__all__ = [
    "handle_compute_asymptotic_c",
    "handle_compute_char_dir",
    "handle_compute_cramer",
    "handle_compute_decomposition",
    "handle_compute_free_energy",
    "handle_compute_free_energy_line",
    "handle_compute_infconv",
    "handle_compute_kappa",
    "handle_compute_lmgf",
    "handle_compute_lmgf_dual",
    "handle_compute_lmgf_hor",
    "handle_compute_lmgf_stationary",
    "handle_compute_lmgf_ver",
    "handle_compute_p_hor",
    "handle_compute_r_s",
    "handle_compute_rate",
    "handle_compute_rate_line",
    "handle_compute_rate_origin",
    "handle_compute_specfun",
    "handle_compute_stationary",
    "handle_compute_trans",
    "handle_compute_vbar",
    "handle_simulate_env_dump",
    "handle_simulate_logz",
    "handle_simulate_logz_ddim",
    "handle_simulate_logz_line",
    "handle_simulate_lmgf",
    "handle_simulate_path",
    "handle_simulate_plan",
    "handle_simulate_right_tail",
    "handle_verify_burke",
    "handle_verify_decomp_identity",
    "handle_verify_duality",
    "handle_verify_epsilon_fit",
    "handle_verify_lln",
    "handle_verify_mean_identity",
    "handle_verify_transitions",
    "handle_verify_variance_scan",
]
