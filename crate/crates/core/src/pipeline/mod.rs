//! Symbolic solution of the lifted monotone join-cut equation in the ring of
//! polynomials in `u = (1 - 4y_1)^{-1}` and `h_k = eta_k (1 - eta)^{-1}`,
//! followed by integration to the rational form of each genus.

mod genus;
mod ops;
mod ring;
pub mod series;

pub use genus::{
    basis_element, decompose_basis, delta1_h, genus1_closed, integrate_phi, rational_form, run,
    solve_genus, solve_up_to, BasisDecomp, GenusResult,
};
pub use ops::{
    apply_delta1, apply_t, delta1_sq_h0, eta_y, gamma_y, invert_one_minus_t, pi2_project, w_series,
    y_dy, TOperator,
};
pub use ring::{CoeffPoly, RElement};
