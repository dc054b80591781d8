//! Ramanujan sums.

use super::sieve::{divisors, gcd, mobius};
use crate::error::{domain, Result};

/// c_q(r) = Σ_{d | (q, r)} d μ(q/d).
pub fn ramanujan_sum(q: u64, r: i64) -> Result<i64> {
    if q == 0 {
        return Err(domain("q", q, "q >= 1"));
    }
    if r == 0 {
        return Err(domain("r", r, "r != 0"));
    }
    let g = gcd(q, r.unsigned_abs());
    Ok(divisors(g)
        .into_iter()
        .map(|d| d as i64 * mobius(q / d))
        .sum())
}
