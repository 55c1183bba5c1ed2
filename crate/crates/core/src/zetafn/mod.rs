//! Riemann ζ, Dirichlet β and the sums-of-squares zeta ζ_k with its Laurent data.

pub mod epstein;
pub mod laurent;
pub mod riemann;

pub use epstein::{
    completed_riemann, completed_riemann_pair, eta_k, functional_equation_residual, lattice_direct_cut, lattice_remainder_bound, lattice_tail, zeta_k,
    zeta_k_direct,
};
pub use laurent::{
    laurent_at_pole, laurent_closed_form, laurent_known_constant, laurent_numerical_limit, residue, LaurentData, LaurentMethod,
};
pub use riemann::{dirichlet_beta, dirichlet_beta_prime, riemann_zeta, riemann_zeta_prime};
