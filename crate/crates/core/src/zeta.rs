//! Riemann zeta function, its derivatives at 2, Stieltjes constants, and the
//! entire functions f, h, F, H built from them.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::series::PowerSeries;

/// Highest Taylor index cached for g_j and δ_j.
pub const MAX_TAYLOR: usize = 8;

/// `(numerator, denominator)` of B_2, B_4, ..., B_40.
const BERNOULLI: [(f64, f64); 20] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
    (-7709321041217.0, 510.0),
    (2577687858367.0, 6.0),
    (-26315271553053477373.0, 1919190.0),
    (2929993913841559.0, 6.0),
    (-261082718496449122051.0, 13530.0),
];

/// `B_{2k}/(2k)!` for k = 1..=20.
fn bernoulli_scaled() -> [f64; 20] {
    let mut out = [0.0; 20];
    let mut fact = 1.0;
    for (k, &(num, den)) in BERNOULLI.iter().enumerate() {
        let m = 2 * (k + 1);
        fact *= (m - 1) as f64 * m as f64;
        out[k] = num / den / fact;
    }
    out
}

/// Compensated summation.
#[derive(Default, Clone, Copy)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Cached constants and evaluation parameters for ζ.
#[derive(Debug, Clone)]
pub struct ZetaContext {
    em_cutoff: usize,
    bernoulli_terms: usize,
    taylor_radius: f64,
    bern: [f64; 20],
    stieltjes: [f64; MAX_TAYLOR],
    zeta2: [f64; MAX_TAYLOR + 1],
    g: [f64; MAX_TAYLOR + 1],
    delta: [f64; MAX_TAYLOR + 1],
}

impl Default for ZetaContext {
    fn default() -> Self {
        Self::new()
    }
}

impl ZetaContext {
    /// Cutoff 10⁴ and 8 Bernoulli corrections for the real-axis constants.
    pub fn new() -> Self {
        Self::with_parameters(10_000, 8).expect("default parameters are valid")
    }

    pub fn with_parameters(em_cutoff: usize, bernoulli_terms: usize) -> Result<Self> {
        if em_cutoff < 10 {
            return Err(domain("em_cutoff", em_cutoff, ">= 10"));
        }
        if !(1..=20).contains(&bernoulli_terms) {
            return Err(domain("bernoulli_terms", bernoulli_terms, "1..=20"));
        }
        let bern = bernoulli_scaled();
        let mut ctx = Self {
            em_cutoff,
            bernoulli_terms,
            taylor_radius: 1e-3,
            bern,
            stieltjes: [0.0; MAX_TAYLOR],
            zeta2: [0.0; MAX_TAYLOR + 1],
            g: [0.0; MAX_TAYLOR + 1],
            delta: [0.0; MAX_TAYLOR + 1],
        };
        for j in 0..MAX_TAYLOR {
            ctx.stieltjes[j] = ctx.log_power_sum(1.0, j);
        }
        for j in 0..=MAX_TAYLOR {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            ctx.zeta2[j] = sign * ctx.log_power_sum(2.0, j);
        }
        ctx.g[0] = 1.0;
        let mut fact = 1.0;
        for j in 1..=MAX_TAYLOR {
            if j > 1 {
                fact *= (j - 1) as f64;
            }
            let sign = if (j - 1) % 2 == 0 { 1.0 } else { -1.0 };
            ctx.g[j] = sign * ctx.stieltjes[j - 1] / fact;
        }
        let z = &ctx.zeta2;
        let closed = delta_closed_forms(z[0], z[1], z[2], z[3], z[4]);
        let mut jfact = 1.0;
        for j in 0..=4 {
            if j > 1 {
                jfact *= j as f64;
            }
            ctx.delta[j] = closed[j] / jfact;
        }
        // Beyond the closed forms, continue the reciprocal by long division.
        let zs: Vec<f64> = {
            let mut f = 1.0;
            (0..=MAX_TAYLOR)
                .map(|j| {
                    if j > 1 {
                        f *= j as f64;
                    }
                    z[j] / f
                })
                .collect()
        };
        for j in 5..=MAX_TAYLOR {
            let acc: f64 = (1..=j).map(|i| zs[i] * ctx.delta[j - i]).sum();
            ctx.delta[j] = -acc / zs[0];
        }
        Ok(ctx)
    }

    /// Radius below which f, h, F, H switch to their Taylor polynomials.
    pub fn taylor_radius(&self) -> f64 {
        self.taylor_radius
    }

    /// Sum of (log n)^j n^{-σ} (σ > 1), or for σ = 1 the Stieltjes limit,
    /// by Euler–Maclaurin with derivatives tracked as polynomials in log x.
    fn log_power_sum(&self, sigma: f64, j: usize) -> f64 {
        let n = self.em_cutoff;
        let mut acc = Neumaier::default();
        for k in 2..n {
            let l = (k as f64).ln();
            acc.add(l.powi(j as i32) * (k as f64).powf(-sigma));
        }
        if j == 0 {
            acc.add(1.0);
        }
        let nf = n as f64;
        let ln_n = nf.ln();
        if sigma == 1.0 {
            acc.add(-ln_n.powi(j as i32 + 1) / (j as f64 + 1.0));
        } else {
            let mut fact_ratio = 1.0;
            let mut tail = 0.0;
            for i in (0..=j).rev() {
                tail += fact_ratio * ln_n.powi(i as i32) / (sigma - 1.0).powi((j - i) as i32 + 1);
                fact_ratio *= i.max(1) as f64;
            }
            acc.add(nf.powf(1.0 - sigma) * tail);
        }
        // P_m(l) with f^{(m)}(x) = x^{-σ-m} P_m(log x).
        let mut p = vec![0.0; j + 1];
        p[j] = 1.0;
        let eval = |p: &[f64]| p.iter().rev().fold(0.0, |a, &c| a * ln_n + c);
        acc.add(0.5 * eval(&p) * nf.powf(-sigma));
        let mut m = 0usize;
        for k in 1..=self.bernoulli_terms {
            while m < 2 * k - 1 {
                let mut next = vec![0.0; j + 1];
                for (i, &c) in p.iter().enumerate() {
                    next[i] -= (sigma + m as f64) * c;
                    if i > 0 {
                        next[i - 1] += i as f64 * c;
                    }
                }
                p = next;
                m += 1;
            }
            acc.add(-self.bern[k - 1] * eval(&p) * nf.powf(-sigma - m as f64));
        }
        acc.value()
    }

    fn check_domain(&self, s: Complex64) -> Result<()> {
        if !s.re.is_finite() || !s.im.is_finite() {
            return Err(domain("zeta argument", s, "finite"));
        }
        if s.re <= -1.0 {
            return Err(domain("zeta argument", s, "Re(s) > -1"));
        }
        if s.im.abs() > 1e6 {
            return Err(domain("zeta argument", s, "|Im(s)| <= 1e6"));
        }
        if (s - 1.0).norm() < 1e-15 {
            return Err(Error::Pole {
                what: "zeta(1)".into(),
            });
        }
        Ok(())
    }

    /// ζ(s) and ζ′(s) by Euler–Maclaurin with a height-adapted cutoff.
    pub fn zeta_with_derivative(&self, s: Complex64) -> Result<(Complex64, Complex64)> {
        self.check_domain(s)?;
        let n = ((0.5 * (s.norm() + 40.0)).ceil() as usize).max(32);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut dsum = Complex64::new(0.0, 0.0);
        for k in 1..n {
            let l = (k as f64).ln();
            let t = (-s * l).exp();
            sum += t;
            dsum -= t * l;
        }
        let nf = n as f64;
        let ln_n = nf.ln();
        let n_ms = (-s * ln_n).exp();
        let n_1ms = n_ms * nf;
        let sm1 = s - 1.0;
        sum += n_1ms / sm1 + n_ms * 0.5;
        dsum += n_1ms * (-ln_n / sm1 - (sm1 * sm1).inv()) - n_ms * (0.5 * ln_n);
        let mut p = s;
        let mut dp = Complex64::new(1.0, 0.0);
        let mut pw = n_ms / nf;
        for k in 1..=20 {
            let b = self.bern[k - 1];
            sum += p * pw * b;
            dsum += (dp - p * ln_n) * pw * b;
            for m in [2 * k - 1, 2 * k] {
                dp = dp * (s + m as f64) + p;
                p *= s + m as f64;
            }
            pw /= nf * nf;
        }
        Ok((sum, dsum))
    }

    pub fn zeta(&self, s: Complex64) -> Result<Complex64> {
        Ok(self.zeta_with_derivative(s)?.0)
    }

    pub fn zeta_real(&self, s: f64) -> Result<f64> {
        Ok(self.zeta(Complex64::new(s, 0.0))?.re)
    }

    /// ζ^{(j)}(s0); only s0 = 2 and j <= 8 are supported.
    pub fn zeta_deriv(&self, j: usize, s0: f64) -> Result<f64> {
        if s0 != 2.0 {
            return Err(domain("zeta_deriv point", s0, "s0 = 2"));
        }
        self.zeta2.get(j).copied().ok_or(Error::Unsupported {
            what: "zeta_deriv order",
            index: j,
            max: MAX_TAYLOR,
        })
    }

    /// γ_j, j < 8.
    pub fn stieltjes(&self, j: usize) -> Result<f64> {
        self.stieltjes.get(j).copied().ok_or(Error::Unsupported {
            what: "stieltjes index",
            index: j,
            max: MAX_TAYLOR - 1,
        })
    }

    /// Taylor coefficient of f(s) = sζ(1+s).
    pub fn g_coeff(&self, j: usize) -> Result<f64> {
        self.g.get(j).copied().ok_or(Error::Unsupported {
            what: "g coefficient",
            index: j,
            max: MAX_TAYLOR,
        })
    }

    /// Taylor coefficient of h(s) = 1/ζ(2+s).
    pub fn delta_coeff(&self, j: usize) -> Result<f64> {
        self.delta.get(j).copied().ok_or(Error::Unsupported {
            what: "delta coefficient",
            index: j,
            max: MAX_TAYLOR,
        })
    }

    pub fn g_coeffs(&self) -> &[f64] {
        &self.g
    }

    pub fn delta_coeffs(&self) -> &[f64] {
        &self.delta
    }

    pub fn g_series(&self, order: usize) -> Result<PowerSeries> {
        let order = self.check_order(order)?;
        Ok(PowerSeries::from_real(&self.g[..=order]))
    }

    pub fn delta_series(&self, order: usize) -> Result<PowerSeries> {
        let order = self.check_order(order)?;
        Ok(PowerSeries::from_real(&self.delta[..=order]))
    }

    fn check_order(&self, order: usize) -> Result<usize> {
        if order > MAX_TAYLOR {
            return Err(Error::Unsupported {
                what: "series order",
                index: order,
                max: MAX_TAYLOR,
            });
        }
        Ok(order)
    }

    fn poly(coeffs: &[f64], s: Complex64) -> Complex64 {
        coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
    }

    /// f(s) = sζ(1+s).
    pub fn entire_f(&self, s: Complex64) -> Result<Complex64> {
        if s.norm() < self.taylor_radius {
            return Ok(Self::poly(&self.g, s));
        }
        Ok(s * self.zeta(s + 1.0)?)
    }

    /// f′(s) = ζ(1+s) + sζ′(1+s).
    pub fn entire_f_prime(&self, s: Complex64) -> Result<Complex64> {
        if s.norm() < self.taylor_radius {
            let d: Vec<f64> = (1..=MAX_TAYLOR).map(|j| j as f64 * self.g[j]).collect();
            return Ok(Self::poly(&d, s));
        }
        let (z, dz) = self.zeta_with_derivative(s + 1.0)?;
        Ok(z + s * dz)
    }

    /// F(s) = s f′(s) − f(s) = s²ζ′(1+s).
    pub fn entire_big_f(&self, s: Complex64) -> Result<Complex64> {
        if s.norm() < self.taylor_radius {
            let d: Vec<f64> = (0..=MAX_TAYLOR).map(|j| (j as f64 - 1.0) * self.g[j]).collect();
            return Ok(Self::poly(&d, s));
        }
        let (_, dz) = self.zeta_with_derivative(s + 1.0)?;
        Ok(s * s * dz)
    }

    /// h(s) = 1/ζ(2+s).
    pub fn entire_h(&self, s: Complex64) -> Result<Complex64> {
        if s.norm() < self.taylor_radius {
            return Ok(Self::poly(&self.delta, s));
        }
        let z = self.zeta(s + 2.0)?;
        if z.norm() < 1e-300 {
            return Err(Error::Pole {
                what: format!("1/zeta(2+s) at s = {s}"),
            });
        }
        Ok(z.inv())
    }

    /// H(s) = −ζ′/ζ²(2+s) = h′(s).
    pub fn entire_big_h(&self, s: Complex64) -> Result<Complex64> {
        if s.norm() < self.taylor_radius {
            let d: Vec<f64> = (0..MAX_TAYLOR).map(|j| (j + 1) as f64 * self.delta[j + 1]).collect();
            return Ok(Self::poly(&d, s));
        }
        let (z, dz) = self.zeta_with_derivative(s + 2.0)?;
        Ok(-dz / (z * z))
    }
}

/// h^{(j)}(0) for j <= 4, written in ζ^{(i)}(2). Dividing by j! gives δ_j.
pub fn delta_closed_forms(z: f64, z1: f64, z2: f64, z3: f64, z4: f64) -> [f64; 5] {
    [
        1.0 / z,
        -z1 / (z * z),
        (2.0 * z1 * z1 - z * z2) / z.powi(3),
        (-6.0 * z1.powi(3) - z3 * z * z + 6.0 * z * z1 * z2) / z.powi(4),
        (24.0 * z1.powi(4) - z4 * z.powi(3) + 6.0 * z * z * z2 * z2 + 8.0 * z3 * z * z * z1
            - 36.0 * z * z1 * z1 * z2)
            / z.powi(5),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const ZETA3: f64 = 1.202_056_903_159_594_3;
    const ZETA_PRIME_2: f64 = -0.937_548_254_315_843_8;
    const ZETA_2ND_2: f64 = 1.989_280_234_298_901;
    const GAMMA: [f64; 4] = [
        0.577_215_664_901_532_9,
        -0.072_815_845_483_676_72,
        -0.009_690_363_192_872_318,
        0.002_053_834_420_303_346,
    ];

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classical_values() {
        let z = ZetaContext::new();
        assert!((z.zeta_real(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-13);
        assert!((z.zeta_real(3.0).unwrap() - ZETA3).abs() < 1e-13);
        assert!((z.zeta_deriv(0, 2.0).unwrap() - PI * PI / 6.0).abs() < 1e-12);
        assert!((z.zeta_deriv(1, 2.0).unwrap() - ZETA_PRIME_2).abs() < 1e-12);
        assert!((z.zeta_deriv(2, 2.0).unwrap() - ZETA_2ND_2).abs() < 1e-11);
        for (j, g) in GAMMA.iter().enumerate() {
            assert!((z.stieltjes(j).unwrap() - g).abs() < 1e-12, "gamma_{j}");
        }
    }

    #[test]
    fn zeta_three_by_direct_summation() {
        let mut acc = Neumaier::default();
        for n in 1..200_000u64 {
            acc.add((n as f64).powi(-3));
        }
        let tail = 0.5 / (200_000f64).powi(2) - 0.5 / (200_000f64).powi(3);
        let z = ZetaContext::new();
        assert!((z.zeta_real(3.0).unwrap() - acc.value() - tail).abs() < 1e-14);
    }

    #[test]
    fn stieltjes_defining_limit() {
        // Partial sum at m = 10^6 with its leading correction (log m)^j/(2m).
        let z = ZetaContext::new();
        let m = 1_000_000u64;
        for j in 0..2 {
            let mut acc = Neumaier::default();
            for k in 1..=m {
                let l = (k as f64).ln();
                acc.add(l.powi(j) / k as f64);
            }
            let lm = (m as f64).ln();
            let partial = acc.value() - lm.powi(j + 1) / (j as f64 + 1.0);
            let corrected = partial - 0.5 * lm.powi(j) / m as f64;
            let gj = z.stieltjes(j as usize).unwrap();
            assert!((partial - gj).abs() < 2.0 * lm.powi(j) / m as f64);
            assert!((corrected - gj).abs() < 1e-10, "j={j}");
        }
    }

    #[test]
    fn pole_and_domain() {
        let z = ZetaContext::new();
        assert!(matches!(z.zeta(c(1.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(z.zeta(c(-2.0, 0.0)), Err(Error::Domain { .. })));
        assert!(z.zeta_deriv(1, 3.0).is_err());
        assert!(z.stieltjes(8).is_err());
        assert!(z.g_coeff(9).is_err());
    }

    #[test]
    fn laurent_expansion_at_one() {
        let z = ZetaContext::new();
        // The remainder is O(h^2) down to the rounding floor of v ~ 1/h.
        for k in 2..=6 {
            let s = 1.0 + 10f64.powi(-k);
            let h = s - 1.0;
            let v = z.zeta_real(s).unwrap();
            assert!(((v * h) - 1.0).abs() < 2.0 * h);
            let rem = (v - 1.0 / h - GAMMA[0] + GAMMA[1] * h).abs();
            assert!(rem < 0.01 * h * h + 1e-15 / h, "k={k} rem={rem}");
        }
    }

    #[test]
    fn derivative_matches_richardson_differences() {
        let z = ZetaContext::new();
        for s in [c(2.0, 0.0), c(0.5, 14.0), c(1.3, -200.0), c(-0.5, 30.0)] {
            let (_, d) = z.zeta_with_derivative(s).unwrap();
            let diff = |h: f64| {
                (z.zeta(s + c(h, 0.0)).unwrap() - z.zeta(s - c(h, 0.0)).unwrap()) / (2.0 * h)
            };
            let h = 1e-3;
            let rich = (diff(h / 2.0) * 4.0 - diff(h)) / 3.0;
            assert!((rich - d).norm() < 1e-8 * (1.0 + d.norm()), "s={s}");
        }
    }

    #[test]
    fn known_value_on_critical_line() {
        // ζ(1/2 + 14.134725141734693i) is the first nontrivial zero.
        let z = ZetaContext::new();
        let v = z.zeta(c(0.5, 14.134_725_141_734_693)).unwrap();
        assert!(v.norm() < 1e-12);
        // Conjugate symmetry and a high point.
        let s = c(0.7, 900.0);
        let a = z.zeta(s).unwrap();
        let b = z.zeta(s.conj()).unwrap();
        assert!((a - b.conj()).norm() < 1e-12);
    }

    #[test]
    fn value_at_height() {
        // Reference value from an independent arbitrary-precision evaluation.
        let z = ZetaContext::new();
        let v = z.zeta(c(0.2, 700.0)).unwrap();
        let want = c(-2.441_487_075_543_467, -1.851_723_602_072_900_9);
        assert!((v - want).norm() < 1e-11);
    }

    #[test]
    fn delta_closed_forms_match_series_division() {
        let z = ZetaContext::new();
        let mut coeffs = Vec::new();
        let mut f = 1.0;
        for j in 0..=4 {
            if j > 1 {
                f *= j as f64;
            }
            coeffs.push(z.zeta_deriv(j, 2.0).unwrap() / f);
        }
        let inv = PowerSeries::from_real(&coeffs).reciprocal().unwrap();
        for j in 0..=4 {
            let want = inv.at(j).re;
            assert!((z.delta_coeff(j).unwrap() - want).abs() < 1e-9, "delta_{j}");
        }
        assert!((z.delta_coeff(0).unwrap() - 6.0 / (PI * PI)).abs() < 1e-12);
        let want = -ZETA_PRIME_2 / (PI.powi(4) / 36.0);
        assert!((z.delta_coeff(1).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn delta_prime_from_differentiated_reciprocal() {
        let z = ZetaContext::new();
        let h = z.delta_series(8).unwrap();
        let hp = h.derivative();
        for j in 0..7 {
            let want = (j + 1) as f64 * z.delta_coeff(j + 1).unwrap();
            assert!((hp.at(j).re - want).abs() < 1e-14);
        }
        // H = h' evaluated directly.
        let s = c(0.2, 0.1);
        let direct = z.entire_big_h(s).unwrap();
        let series = hp.evaluate(s);
        assert!((direct - series).norm() < 1e-8);
    }

    #[test]
    fn g_coefficients() {
        let z = ZetaContext::new();
        assert_eq!(z.g_coeff(0).unwrap(), 1.0);
        assert!((z.g_coeff(1).unwrap() - GAMMA[0]).abs() < 1e-12);
        assert!((z.g_coeff(2).unwrap() + GAMMA[1]).abs() < 1e-12);
        assert!((z.g_coeff(4).unwrap() + GAMMA[3] / 6.0).abs() < 1e-12);
    }

    #[test]
    fn entire_functions_near_zero() {
        let z = ZetaContext::new();
        assert_eq!(z.entire_f(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert!((z.entire_h(c(0.0, 0.0)).unwrap().re - 6.0 / (PI * PI)).abs() < 1e-12);
        // Both branches agree across the switchover annulus.
        let r = z.taylor_radius();
        for k in 0..8 {
            let th = k as f64 * 0.7;
            for rr in [0.999 * r, 1.001 * r] {
                let s = Complex64::from_polar(rr, th);
                let series_f = PowerSeries::from_real(z.g_coeffs()).evaluate(s);
                let direct_f = s * z.zeta(s + 1.0).unwrap();
                assert!((series_f - direct_f).norm() < 1e-9);
                let series_h = PowerSeries::from_real(z.delta_coeffs()).evaluate(s);
                let direct_h = z.zeta(s + 2.0).unwrap().inv();
                assert!((series_h - direct_h).norm() < 1e-9);
                let fp1 = z.entire_big_f(s).unwrap();
                let fp2 = s * z.entire_f_prime(s).unwrap() - z.entire_f(s).unwrap();
                assert!((fp1 - fp2).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn series_and_direct_agree_on_disc() {
        let z = ZetaContext::new();
        let g = PowerSeries::from_real(z.g_coeffs());
        for k in 0..12 {
            let s = Complex64::from_polar(0.25, k as f64 * 0.5);
            assert!((g.evaluate(s) - z.entire_f(s).unwrap()).norm() < 1e-9);
        }
    }

    #[test]
    fn big_f_by_finite_differences() {
        let z = ZetaContext::new();
        let s = c(0.3, 0.0);
        let h = 1e-4;
        let fp = (z.entire_f(s + h).unwrap() - z.entire_f(s - h).unwrap()) / (2.0 * h);
        let want = s * fp - z.entire_f(s).unwrap();
        assert!((z.entire_big_f(s).unwrap() - want).norm() < 1e-7);
    }
}
