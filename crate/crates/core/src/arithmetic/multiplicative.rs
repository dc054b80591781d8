//! The multiplicative functions g_A(s, n) and G_A(s, n).

use num_complex::Complex64;

use super::shifts::{local_units, LocalCoeffs, ShiftSet};
use super::sieve::{divisors, euler_phi, factorize, mobius};
use crate::error::{domain, Error, Result};

const LOCAL_TOL: f64 = 1e-15;
const MAX_LOCAL_TERMS: usize = 200_000;

/// g_A(s, p^{e−1}) and g_A(s, p^e) for e ≥ 1.
fn local_g_pair(set: &ShiftSet, s: Complex64, p: u64, e: u32) -> Result<(Complex64, Complex64)> {
    let e = e as usize;
    let x = (-s * (p as f64).ln()).exp();
    let units = local_units(set, p);
    let rho = units.iter().map(|u| u.norm()).fold(0.0, f64::max);
    let r = rho * x.norm();
    if r >= 1.0 {
        return Err(Error::Convergence(format!(
            "local series at p = {p} has ratio {r:.3} >= 1"
        )));
    }
    // Σ_j σ_A(p^j) x^j in closed form.
    let den = units
        .iter()
        .fold(Complex64::new(1.0, 0.0), |acc, u| acc / (1.0 - u * x));
    let k = units.len();
    let mut h: Vec<Complex64> = LocalCoeffs::new(units).take(e).collect();
    let mut num_prev = Complex64::new(0.0, 0.0);
    let mut num = Complex64::new(0.0, 0.0);
    let mut xj = Complex64::new(1.0, 0.0);
    let mut stream = LocalCoeffs::new(local_units(set, p)).skip(e);
    for j in 0..MAX_LOCAL_TERMS {
        let hm = stream.next().expect("infinite iterator");
        h.push(hm);
        num += hm * xj;
        num_prev += h[j + e - 1] * xj;
        xj *= x;
        // |h_m| <= C(m+k−1, k−1) ρ^m, so the terms after j are bounded geometrically.
        let m = (j + e + 1) as f64;
        let ratio = r * (m + k as f64 - 1.0) / m;
        if ratio < 1.0 {
            let bound = binomial_bound(m, k) * rho.powf(m) * xj.norm();
            let tail = bound / (1.0 - ratio);
            if tail <= LOCAL_TOL * num.norm().min(num_prev.norm()).max(f64::MIN_POSITIVE) {
                return Ok((num_prev / den, num / den));
            }
        }
    }
    Err(Error::Convergence(format!(
        "local series at p = {p} needs more than {MAX_LOCAL_TERMS} terms"
    )))
}

fn binomial_bound(m: f64, k: usize) -> f64 {
    // C(m+k−1, k−1)
    (1..k).fold(1.0, |acc, i| acc * (m + i as f64) / i as f64)
}

/// g_A(s, n) as a product of local ratios over p^e ∥ n.
pub fn g_mult(set: &ShiftSet, s: Complex64, n: u64) -> Result<Complex64> {
    if n == 0 {
        return Err(domain("n", n, "n >= 1"));
    }
    let mut acc = Complex64::new(1.0, 0.0);
    for (p, e) in factorize(n) {
        acc *= local_g_pair(set, s, p, e)?.1;
    }
    Ok(acc)
}

/// G_A(s, n) by the double divisor sum as written.
pub fn big_g_mult(set: &ShiftSet, s: Complex64, n: u64) -> Result<Complex64> {
    if n == 0 {
        return Err(domain("n", n, "n >= 1"));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for d in divisors(n) {
        let md = mobius(d);
        if md == 0 {
            continue;
        }
        let mut inner = Complex64::new(0.0, 0.0);
        for e in divisors(d) {
            let me = mobius(e);
            if me == 0 {
                continue;
            }
            let e_s = (s * (e as f64).ln()).exp();
            inner += me as f64 / e_s * g_mult(set, s, n / d * e)?;
        }
        let d_s = (s * (d as f64).ln()).exp();
        total += md as f64 * d_s / euler_phi(d) as f64 * inner;
    }
    Ok(total)
}

/// G_A(s, n) through its local factors
/// G(p^e) = g(p^e) − p^s/(p−1)·(g(p^{e−1}) − p^{−s} g(p^e)).
pub fn big_g_mult_fast(set: &ShiftSet, s: Complex64, n: u64) -> Result<Complex64> {
    if n == 0 {
        return Err(domain("n", n, "n >= 1"));
    }
    let mut acc = Complex64::new(1.0, 0.0);
    for (p, e) in factorize(n) {
        let (g_lo, g_hi) = local_g_pair(set, s, p, e)?;
        let ps = (s * (p as f64).ln()).exp();
        acc *= g_hi - ps / (p as f64 - 1.0) * (g_lo - g_hi / ps);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::super::shifts::{sigma_shifted, sigma_table};
    use super::*;
    use crate::zeta::ZetaContext;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Local series summed term by term from σ_A(p^j), long enough to be exact.
    fn local_series(set: &ShiftSet, s: Complex64, p: u64, shift: u32) -> Complex64 {
        let x = (-s * (p as f64).ln()).exp();
        let mut acc = c(0.0, 0.0);
        let mut xj = c(1.0, 0.0);
        for j in 0..60u32 {
            acc += sigma_shifted(set, p.pow(j + shift)).unwrap() * xj;
            xj *= x;
            if p.checked_pow(j + shift + 2).is_none() {
                break;
            }
        }
        acc
    }

    #[test]
    fn trivial_values() {
        let set = ShiftSet::real(&[0.1, 0.0]).unwrap();
        let s = c(1.3, 0.4);
        assert_eq!(g_mult(&set, s, 1).unwrap(), c(1.0, 0.0));
        assert_eq!(big_g_mult(&set, s, 1).unwrap(), c(1.0, 0.0));
        assert_eq!(big_g_mult_fast(&set, s, 1).unwrap(), c(1.0, 0.0));
        assert!(g_mult(&set, c(-0.2, 0.0), 2).is_err());
    }

    #[test]
    fn defining_ratio_at_seven() {
        let set = ShiftSet::real(&[0.1, 0.0]).unwrap();
        let s = c(2.5, 0.0);
        let lhs = g_mult(&set, s, 7).unwrap() * local_series(&set, s, 7, 0);
        let rhs = local_series(&set, s, 7, 1);
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn zero_shifts_prime_powers() {
        // With A = {0, 0}: Σ_j (j+e+1) x^j / Σ_j (j+1) x^j = (e+1) − e x.
        let set = ShiftSet::zeros(2).unwrap();
        let s = c(1.7, 0.0);
        for (p, e) in [(2u64, 1u32), (2, 3), (3, 2), (11, 1)] {
            let x = (p as f64).powf(-1.7);
            let expect = (e + 1) as f64 - e as f64 * x;
            let got = g_mult(&set, s, p.pow(e)).unwrap();
            assert!((got.re - expect).abs() < 1e-14, "p={p} e={e}");
        }
    }

    #[test]
    fn dirichlet_series_identity() {
        let set = ShiftSet::real(&[0.1, 0.0]).unwrap();
        let s = 2.5;
        let n = 12u64;
        let jmax = 100_000u64;
        let table = sigma_table(&set, n * jmax).unwrap();
        let lhs: Complex64 = (1..=jmax)
            .map(|j| table[(j * n) as usize] * (j as f64).powf(-s))
            .sum();
        let ctx = ZetaContext::new();
        let zeta_prod = ctx.zeta_real(s + 0.1).unwrap() * ctx.zeta_real(s).unwrap();
        let rhs = g_mult(&set, c(s, 0.0), n).unwrap() * zeta_prod;
        assert!((lhs - rhs).norm() <= 1e-4, "{lhs} vs {rhs}");
    }

    #[test]
    fn fast_matches_literal_at_primes() {
        let set = ShiftSet::new(vec![c(0.04, 0.1), c(0.0, 0.0)]).unwrap();
        let s = c(0.96, -0.1);
        for n in [2u64, 3, 4, 8, 9, 12, 30, 97, 360] {
            let a = big_g_mult(&set, s, n).unwrap();
            let b = big_g_mult_fast(&set, s, n).unwrap();
            assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()), "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn literal_is_multiplicative() {
        let set = ShiftSet::real(&[0.03, 0.0]).unwrap();
        let s = c(0.97, 0.0);
        let ab = big_g_mult(&set, s, 36).unwrap();
        let prod = big_g_mult(&set, s, 4).unwrap() * big_g_mult(&set, s, 9).unwrap();
        assert!((ab - prod).norm() < 1e-12 * ab.norm());
    }

    proptest! {
        #[test]
        fn g_mult_is_multiplicative(m in 1u64..300, n in 1u64..300, a in -0.3f64..0.3, im in -1.0f64..1.0) {
            prop_assume!(super::super::sieve::gcd(m, n) == 1);
            let set = ShiftSet::new(vec![c(a, im), c(0.0, 0.0)]).unwrap();
            let s = c(1.0 - a, 0.2);
            let lhs = g_mult(&set, s, m * n).unwrap();
            let rhs = g_mult(&set, s, m).unwrap() * g_mult(&set, s, n).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
        }
    }
}
