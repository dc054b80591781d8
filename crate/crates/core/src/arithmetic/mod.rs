//! Divisor functions, Ramanujan sums, g_A / G_A and the Euler products.

pub mod euler;
pub mod multiplicative;
pub mod ramanujan;
pub mod shifts;
pub mod sieve;

pub use euler::{euler_a, euler_z, series_b, EulerProduct, PartialSum};
pub use multiplicative::{big_g_mult, big_g_mult_fast, g_mult};
pub use ramanujan::ramanujan_sum;
pub use shifts::{parse_complex, sigma_shifted, sigma_table, ShiftSet};
pub use sieve::{tau_sieve, DivisorTable};
