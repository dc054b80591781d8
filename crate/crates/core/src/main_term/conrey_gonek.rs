//! γ_k(n), w_k(x), a_k and the leading-order mean-value prediction.

use crate::arithmetic::{euler_a, EulerProduct, ShiftSet};
use crate::error::{domain, Error, Result};

fn binomial(n: i64, k: i64) -> i128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

fn check_k(k: u32) -> Result<()> {
    if (2..=4).contains(&k) {
        Ok(())
    } else {
        Err(Error::Unsupported {
            what: "divisor order k",
            index: k as usize,
            max: 4,
        })
    }
}

/// γ_k(n) = Σ_{i,j≤k} C(k,i)C(k,j)C(n−1,i+j−2)C(i+j−2,j−1), with γ_k(0) = k.
pub fn gamma_kn(k: u32, n: u32) -> Result<u64> {
    if k == 0 {
        return Err(domain("k", k, "k >= 1"));
    }
    if n == 0 {
        return Ok(k as u64);
    }
    let (k, n) = (k as i64, n as i64);
    let mut acc = 0i128;
    for i in 1..=k {
        for j in 1..=k {
            acc += binomial(k, i) * binomial(k, j) * binomial(n - 1, i + j - 2) * binomial(i + j - 2, j - 1);
        }
    }
    u64::try_from(acc).map_err(|_| Error::Capacity("gamma_kn"))
}

/// Coefficients of w_k as a polynomial in x, lowest degree first.
pub fn w_k_coefficients(k: u32) -> Result<Vec<i128>> {
    check_k(k)?;
    let k2 = (k * k) as usize;
    // x^{k²}·{1 − Σ C(k², n+1) γ_k(n) (−1)^n (1 − x^{−n−1})}
    let mut coeffs = vec![0i128; k2 + 1];
    coeffs[k2] = 1;
    for n in 0..k2 {
        let w = binomial(k2 as i64, n as i64 + 1) * gamma_kn(k, n as u32)? as i128;
        let w = if n % 2 == 0 { w } else { -w };
        coeffs[k2] -= w;
        coeffs[k2 - n - 1] += w;
    }
    Ok(coeffs)
}

/// w_k(x).
pub fn w_k(k: u32, x: f64) -> Result<f64> {
    Ok(w_k_coefficients(k)?
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * x + c as f64))
}

/// a_k = Π_p (1 − 1/p)^{k²} Σ_α τ_k(p^α)²/p^α, truncated with a fitted tail.
pub fn a_k_constant(k: u32, prime_cutoff: u64) -> Result<EulerProduct> {
    check_k(k)?;
    let z = ShiftSet::zeros(k as usize)?;
    euler_a(&z, &z, prime_cutoff)
}

/// (a_k / (k²)!) · w_k(1+η) · T (log T)^{k²}.
pub fn conrey_gonek_prediction(k: u32, t: f64, eta: f64, prime_cutoff: u64) -> Result<f64> {
    check_k(k)?;
    if !(eta > 0.0 && eta < 1.0) {
        return Err(domain("eta", eta, "0 < eta < 1"));
    }
    if !(t > 1.0) {
        return Err(domain("T", t, "T > 1"));
    }
    let a = a_k_constant(k, prime_cutoff)?.corrected().re;
    let k2 = (k * k) as i32;
    let fact: f64 = (1..=k2).map(f64::from).product();
    Ok(a / fact * w_k(k, 1.0 + eta)? * t * t.ln().powi(k2))
}
