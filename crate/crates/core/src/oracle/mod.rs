//! Brute-force oracles: the smoothed mean value by direct quadrature and the
//! shifted convolution sums by direct summation.

pub mod additive;
pub mod moment;

pub use additive::{
    ad_main_term, ad_sum_bruteforce, ad_sum_integer, ADTestFunction, AdMainTerm, Profile, ERROR_TERM_TRIPLE,
};
pub use moment::{
    dirichlet_poly, moment_cross, moment_numeric, write_node_csv, DirichletPoly, MomentExperiment,
    MomentOptions, MomentResult, WORK_BUDGET,
};
