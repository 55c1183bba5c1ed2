//! Special functions at arbitrary precision.

pub mod bessel;
pub mod expint;
pub mod gamma;
pub mod lattice;
pub mod whittaker;

pub use bessel::{bessel_k, bessel_k_complex, k0_k1, k_half_integer, k_integer_sequence, BesselKOrder};
pub use expint::{exp_integral_e1, exp_integral_ei_neg};
pub use gamma::{bernoulli_even, digamma, digamma_real, euler_gamma, gamma, gamma_real, recip_gamma};
pub use lattice::{dedekind_eta_imag, glaisher_a, log_dedekind_eta_imag, log_glaisher_a, log_phi_k, phi_k};
pub use whittaker::{whittaker_w, whittaker_w_scaled, whittaker_w_scaled_at, WhittakerKernel, WhittakerParams};
