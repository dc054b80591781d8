//! Main-term polynomials, shifted residues, cancellation and the
//! integrated main term.

pub mod cancellation;
pub mod conrey_gonek;
pub mod contour;
pub mod integral;
pub mod qpoly;
pub mod residues;

pub use cancellation::{c_coefficients, limit_lemma_check};
pub use conrey_gonek::{a_k_constant, conrey_gonek_prediction, gamma_kn, w_k, w_k_coefficients};
pub use contour::{m0_contour, ContourParams, ContourResult};
pub use integral::{main_term_integral, MainTermIntegral, QuadParams};
pub use qpoly::{q_poly_gamma_form, QPolynomialSet};
pub use residues::{
    assembled_total, kappas, r1, r1_prime, r2, r2_terms, r_diag_limit, r_total, r_total_series,
    residue_blocks, DirectKit, Kappas, ResidueBlocks, ResidueKit, SeriesKit, ShiftPair,
};
