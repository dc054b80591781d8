//! The products 𝒵(I, J), 𝒜(I, J) and the series ℬ(I, J).

use num_complex::Complex64;
use rayon::prelude::*;

use super::shifts::{local_units, sigma_table, LocalCoeffs, ShiftSet};
use super::sieve::primes_up_to;
use crate::error::{domain, Error, Result};
use crate::zeta::{Neumaier, ZetaContext};

/// Guard on |a_i + b_j| below which 𝒵 is treated as sitting on a pole.
pub const POLE_GUARD: f64 = 1e-12;
/// Lower bound on Re(a_i + b_j) accepted by [`euler_a`].
pub const A_SHIFT_FLOOR: f64 = -0.4;
const LOCAL_TOL: f64 = 1e-16;
const MAX_LOCAL_TERMS: usize = 10_000;

/// 𝒵(I, J) = Π ζ(1 + a_i + b_j).
pub fn euler_z(ctx: &ZetaContext, i: &ShiftSet, j: &ShiftSet) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for &a in i.shifts() {
        for &b in j.shifts() {
            let sum = a + b;
            if sum.norm() < POLE_GUARD {
                return Err(Error::Pole {
                    what: format!("zeta(1 + a + b) with a = {a}, b = {b}"),
                });
            }
            acc *= ctx.zeta(1.0 + sum)?;
        }
    }
    Ok(acc)
}

/// A truncated Euler product with its estimated tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerProduct {
    /// Product over p ≤ cutoff.
    pub truncated: Complex64,
    /// Fitted Σ_{p > cutoff} log(local factor).
    pub tail_log: Complex64,
    /// Magnitude bound for the omitted log-sum.
    pub tail_bound: f64,
    /// Fitted decay exponent β of |log factor| ~ C p^{−β}.
    pub decay: f64,
    pub prime_cutoff: u64,
}

impl EulerProduct {
    /// Truncated product times exp(tail_log).
    pub fn corrected(&self) -> Complex64 {
        self.truncated * self.tail_log.exp()
    }
}

/// log of Π_{i,j}(1 − p^{−1−a_i−b_j}) Σ_u σ_I(p^u)σ_J(p^u) p^{−u}.
fn local_log_a(i: &ShiftSet, j: &ShiftSet, p: u64) -> Result<Complex64> {
    let ui = local_units(i, p);
    let uj = local_units(j, p);
    let pf = p as f64;
    let ri = ui.iter().map(|u| u.norm()).fold(0.0, f64::max);
    let rj = uj.iter().map(|u| u.norm()).fold(0.0, f64::max);
    let r = ri * rj / pf;
    if r >= 1.0 {
        return Err(Error::Convergence(format!("local factor of A at p = {p}")));
    }
    let k = (ui.len() + uj.len()) as f64;
    let mut zeta_part = Complex64::new(0.0, 0.0);
    for a in &ui {
        for b in &uj {
            zeta_part += (1.0 - a * b / pf).ln();
        }
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pu = 1.0;
    for (u, (hi, hj)) in LocalCoeffs::new(ui)
        .zip(LocalCoeffs::new(uj))
        .take(MAX_LOCAL_TERMS)
        .enumerate()
    {
        sum += hi * hj * pu;
        pu /= pf;
        // Crude geometric bound on the remaining terms: |h^I_u h^J_u| ≤ (u+1)^{k} (ρ_I ρ_J)^u.
        let m = (u + 1) as f64;
        let ratio = r * ((m + 1.0) / m).powf(k);
        if u > 0 && ratio < 1.0 {
            let tail = (m + 1.0).powf(k) * r.powf(m) / (1.0 - ratio);
            if tail < LOCAL_TOL {
                return Ok(zeta_part + sum.ln());
            }
        }
    }
    Err(Error::Convergence(format!(
        "local factor of A at p = {p} needs more than {MAX_LOCAL_TERMS} terms"
    )))
}

/// 𝒜(I, J) over primes p ≤ prime_cutoff, with a fitted tail.
pub fn euler_a(i: &ShiftSet, j: &ShiftSet, prime_cutoff: u64) -> Result<EulerProduct> {
    if prime_cutoff < 100 {
        return Err(domain("prime cutoff", prime_cutoff, ">= 100"));
    }
    if prime_cutoff > 10_000_000 {
        return Err(Error::Capacity("euler_a prime cutoff"));
    }
    for &a in i.shifts() {
        for &b in j.shifts() {
            if (a + b).re <= A_SHIFT_FLOOR {
                return Err(Error::Convergence(format!(
                    "Re(a + b) = {} is below {A_SHIFT_FLOOR}",
                    (a + b).re
                )));
            }
        }
    }
    let primes = primes_up_to(prime_cutoff);
    let logs: Vec<Complex64> = primes
        .par_iter()
        .map(|&p| local_log_a(i, j, p))
        .collect::<Result<_>>()?;
    let mut re = Neumaier::default();
    let mut im = Neumaier::default();
    for l in &logs {
        re.add(l.re);
        im.add(l.im);
    }
    let truncated = Complex64::new(re.value(), im.value()).exp();

    // Fit ln|ℓ_p| = ln C − β ln p on the last decade of primes.
    let lo = prime_cutoff as f64 / 10.0;
    let (xs, ys): (Vec<f64>, Vec<f64>) = primes
        .iter()
        .zip(&logs)
        .filter(|(&p, l)| p as f64 > lo && l.norm() > 0.0)
        .map(|(&p, l)| ((p as f64).ln(), l.norm().ln()))
        .unzip();
    if xs.len() < 10 {
        // Every local factor is exactly 1 at this precision.
        return Ok(EulerProduct {
            truncated,
            tail_log: Complex64::new(0.0, 0.0),
            tail_bound: 0.0,
            decay: f64::INFINITY,
            prime_cutoff,
        });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let beta = -sxy / sxx;
    if !(beta.is_finite() && beta > 1.05) {
        return Err(Error::Convergence(format!(
            "local factors of A decay like p^-{beta:.3}; the tail is not summable"
        )));
    }
    // Complex amplitude: average of ℓ_p p^β over the decade.
    let amp: Complex64 = primes
        .iter()
        .zip(&logs)
        .filter(|(&p, _)| p as f64 > lo)
        .map(|(&p, l)| l * (p as f64).powf(beta))
        .sum::<Complex64>()
        / n;
    let amp_abs = (my + beta * mx).exp();
    // Σ_{p>P} p^{−β} ≈ ∫_P^∞ t^{−β} dt / ln t = E₁((β − 1) ln P).
    let e1 = exp_integral_e1((beta - 1.0) * (prime_cutoff as f64).ln());
    Ok(EulerProduct {
        truncated,
        tail_log: amp * e1,
        tail_bound: amp_abs.max(amp.norm()) * e1,
        decay: beta,
        prime_cutoff,
    })
}

/// Π_{p ∈ primes} of the local factors of 𝒜, without any tail correction.
pub(crate) fn euler_a_partial(i: &ShiftSet, j: &ShiftSet, primes: &[u64]) -> Result<Complex64> {
    let mut re = Neumaier::default();
    let mut im = Neumaier::default();
    for &p in primes {
        let l = local_log_a(i, j, p)?;
        re.add(l.re);
        im.add(l.im);
    }
    Ok(Complex64::new(re.value(), im.value()).exp())
}

/// A partial sum with a crude bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialSum {
    pub value: Complex64,
    pub tail_bound: f64,
    pub terms: u64,
}

/// ℬ(I, J) = Σ_{n ≤ N} σ_I(n)σ_J(n)/n.
pub fn series_b(i: &ShiftSet, j: &ShiftSet, n: u64) -> Result<PartialSum> {
    let m = i.min_re() + j.min_re();
    if m <= 0.0 {
        return Err(Error::Divergence(format!(
            "min Re(a) + min Re(b) = {m} is not positive"
        )));
    }
    let ti = sigma_table(i, n)?;
    let tj = sigma_table(j, n)?;
    let mut re = Neumaier::default();
    let mut im = Neumaier::default();
    for k in 1..=n as usize {
        let t = ti[k] * tj[k] / k as f64;
        re.add(t.re);
        im.add(t.im);
    }
    // Σ_{n>N} τ_k τ_l n^{−1−m} ≈ N^{−m} (ln N)^{kl−1} / ((kl−1)! m).
    let kl = (i.len() * j.len()) as i32;
    let ln_n = (n as f64).ln().max(1.0);
    let fact: f64 = (1..kl).map(f64::from).product();
    let tail_bound = (n as f64).powf(-m) * ln_n.powi(kl - 1) / (fact * m);
    Ok(PartialSum {
        value: Complex64::new(re.value(), im.value()),
        tail_bound,
        terms: n,
    })
}

/// E₁(x) for x > 0.
pub fn exp_integral_e1(x: f64) -> f64 {
    if x <= 0.0 {
        return f64::INFINITY;
    }
    if x < 1.0 {
        // −γ − ln x − Σ (−x)^k / (k·k!)
        let mut term = 1.0;
        let mut acc = 0.0;
        for k in 1..60 {
            term *= -x / k as f64;
            acc += term / k as f64;
            if term.abs() < 1e-18 {
                break;
            }
        }
        -0.577_215_664_901_532_9 - x.ln() - acc
    } else {
        // Continued fraction, modified Lentz.
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..200 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn e1_reference_values() {
        // E₁(0.5), E₁(1), E₁(10) to 15 digits.
        assert!((exp_integral_e1(0.5) - 0.559_773_594_776_160_8).abs() < 1e-15);
        assert!((exp_integral_e1(1.0) - 0.219_383_934_395_520_3).abs() < 1e-15);
        assert!((exp_integral_e1(10.0) - 4.156_968_929_685_324e-6).abs() < 1e-19);
    }

    #[test]
    fn z_values_and_pole() {
        let ctx = ZetaContext::new();
        let half = ShiftSet::real(&[0.5]).unwrap();
        let z = euler_z(&ctx, &half, &half).unwrap();
        assert!((z.re - PI * PI / 6.0).abs() < 1e-12);
        let i = ShiftSet::real(&[0.1, 0.0]).unwrap();
        let j = ShiftSet::real(&[0.2, 0.0]).unwrap();
        assert!(matches!(euler_z(&ctx, &i, &j), Err(Error::Pole { .. })));
    }

    #[test]
    fn z_is_symmetric() {
        let ctx = ZetaContext::new();
        let i = ShiftSet::new(vec![c(0.1, 0.3), c(-0.05, 0.0)]).unwrap();
        let j = ShiftSet::new(vec![c(0.2, -1.0), c(0.07, 0.5)]).unwrap();
        let a = euler_z(&ctx, &i, &j).unwrap();
        let b = euler_z(&ctx, &j, &i).unwrap();
        assert!((a - b).norm() < 1e-13 * a.norm());
    }

    #[test]
    fn a_zero_shifts_is_inverse_zeta_two() {
        let z = ShiftSet::zeros(2).unwrap();
        let a = euler_a(&z, &z, 1_000_000).unwrap();
        let target = 6.0 / (PI * PI);
        assert!((a.corrected() - target).norm() < 1e-8, "{:?}", a);
        assert!((a.truncated - target).norm() <= target * a.tail_bound * 1.5);
        assert!((a.decay - 2.0).abs() < 0.05);
    }

    #[test]
    fn a_large_shifts_near_one() {
        let i = ShiftSet::real(&[0.5, 0.5]).unwrap();
        let a = euler_a(&i, &i, 10_000).unwrap();
        let small = ShiftSet::real(&[0.1, 0.1]).unwrap();
        let b = euler_a(&small, &small, 10_000).unwrap();
        assert!((a.corrected() - 1.0).norm() < (b.corrected() - 1.0).norm());
        // Equal shifts c collapse the local factor to 1 − p^{−2−4c}.
        let ctx = ZetaContext::new();
        assert!((a.corrected() - 1.0 / ctx.zeta_real(4.0).unwrap()).norm() < 1e-10);
        assert!((b.corrected() - 1.0 / ctx.zeta_real(2.4).unwrap()).norm() < 1e-7);
    }

    #[test]
    fn doubling_cutoff_within_tail() {
        let i = ShiftSet::new(vec![c(0.04, 0.0), c(0.0, 0.0)]).unwrap();
        let j = ShiftSet::new(vec![c(0.03, 0.0), c(0.0, 0.0)]).unwrap();
        let a1 = euler_a(&i, &j, 20_000).unwrap();
        let a2 = euler_a(&i, &j, 40_000).unwrap();
        let change = (a2.truncated / a1.truncated).ln().norm();
        assert!(change < a1.tail_bound, "{change} vs {}", a1.tail_bound);
        let drift = (a2.corrected() - a1.corrected()).norm() / a2.corrected().norm();
        assert!(drift < 0.1 * a1.tail_bound);
    }

    #[test]
    fn a_rejects_bad_shifts() {
        let i = ShiftSet::real(&[-0.3]).unwrap();
        assert!(euler_a(&i, &i, 1000).is_err());
    }

    #[test]
    fn b_matches_a_times_z() {
        let ctx = ZetaContext::new();
        let i = ShiftSet::real(&[0.6, 0.3]).unwrap();
        let b = series_b(&i, &i, 1_000_000).unwrap();
        let a = euler_a(&i, &i, 1_000_000).unwrap();
        let az = a.corrected() * euler_z(&ctx, &i, &i).unwrap();
        assert!((b.value - az).norm() <= 1e-2 * az.norm());
        assert!((b.value - az).norm() <= b.tail_bound);
    }

    #[test]
    fn b_half_shifts() {
        let half = ShiftSet::real(&[0.5]).unwrap();
        let b = series_b(&half, &half, 100_000).unwrap();
        assert!((b.value.re - PI * PI / 6.0).abs() < 1.1e-5);
        let zero = ShiftSet::zeros(1).unwrap();
        assert!(series_b(&zero, &zero, 10).is_err());
    }

    #[test]
    fn b_partial_sums_increase() {
        let i = ShiftSet::real(&[0.3, 0.2]).unwrap();
        let mut last = 0.0;
        for n in [10u64, 100, 1000, 10_000] {
            let v = series_b(&i, &i, n).unwrap().value.re;
            assert!(v > last);
            last = v;
        }
    }
}
