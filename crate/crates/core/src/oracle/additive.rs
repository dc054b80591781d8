//! Shifted convolution sums Σ_{m−n=r} σ_I(m)σ_J(n)F(m, n) and their
//! conjectured main term.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arithmetic::{big_g_mult_fast, ramanujan_sum, sigma_table, tau_sieve, ShiftSet};
use crate::error::{domain, Error, Result};
use crate::main_term::QuadParams;
use crate::quadrature::GaussLegendre;
use crate::smoothing::step;
use crate::zeta::{Neumaier, ZetaContext};

/// Largest number of terms the brute-force sum will visit.
pub const TERM_BUDGET: u64 = 10_000_000;
/// (ϑ, C, β) of the known k = ℓ = 2 error term, kept as metadata.
pub const ERROR_TERM_TRIPLE: (f64, f64, f64) = (0.75, 1.25, 1.0);
const DISTINCT_GUARD: f64 = 1e-8;

/// One-dimensional profile on [1, 2].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Profile {
    /// S((x−1)/w)·S((2−x)/w).
    Smooth { width: f64 },
    /// Indicator of [1, 2].
    Box,
    Zero,
}

impl Profile {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Profile::Smooth { width } => step((x - 1.0) / width) * step((2.0 - x) / width),
            Profile::Box => {
                if (1.0..=2.0).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
            Profile::Zero => 0.0,
        }
    }

    /// Points in [1, 2] where the profile stops being smooth.
    fn breakpoints(&self) -> Vec<f64> {
        match *self {
            Profile::Smooth { width } => vec![1.0, 1.0 + width, 2.0 - width, 2.0],
            Profile::Box | Profile::Zero => vec![1.0, 2.0],
        }
    }
}

/// F(m, n) = u(m/X)·u(n/Y), supported in [X, 2X] × [Y, 2Y].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ADTestFunction {
    x: f64,
    y: f64,
    profile: Profile,
    /// Measured sup of |x u′(x)| over [1, 2]; infinite for the box.
    p: f64,
}

impl ADTestFunction {
    pub fn new(x: f64, y: f64, profile: Profile) -> Result<Self> {
        if !(x >= 1.0 && y >= 1.0 && x.is_finite() && y.is_finite()) {
            return Err(domain("box scales", format!("X={x}, Y={y}"), "X, Y >= 1"));
        }
        if let Profile::Smooth { width } = profile {
            if !(width > 0.0 && width <= 0.5) {
                return Err(domain("profile width", width, "0 < w <= 1/2"));
            }
        }
        let p = match profile {
            Profile::Smooth { .. } => {
                let n = 20_000;
                let h = 1.0 / n as f64;
                (1..n)
                    .map(|i| {
                        let x = 1.0 + i as f64 * h;
                        (x * (profile.eval(x + h) - profile.eval(x - h)) / (2.0 * h)).abs()
                    })
                    .fold(0.0, f64::max)
            }
            Profile::Box => f64::INFINITY,
            Profile::Zero => 0.0,
        };
        Ok(Self { x, y, profile, p })
    }

    /// Smooth profile with transition width 1/4.
    pub fn smooth(x: f64, y: f64) -> Result<Self> {
        Self::new(x, y, Profile::Smooth { width: 0.25 })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    pub fn derivative_scale(&self) -> f64 {
        self.p
    }

    pub fn eval(&self, m: f64, n: f64) -> f64 {
        self.profile.eval(m / self.x) * self.profile.eval(n / self.y)
    }
}

fn check_r(f: &ADTestFunction, r: i64) -> Result<()> {
    if r == 0 {
        return Err(domain("r", r, "|r| >= 1"));
    }
    if (r.unsigned_abs() as f64) > f.x / 10.0 {
        return Err(domain("r", r, "|r| <= X/10"));
    }
    Ok(())
}

/// n-range of the brute-force loop: integers in [Y, 2Y] with m = n + r ≥ 1.
fn n_range(f: &ADTestFunction, r: i64) -> (u64, u64) {
    let lo = (f.y.ceil() as i64).max(1 - r).max(1) as u64;
    let hi = (2.0 * f.y).floor() as u64;
    (lo, hi)
}

/// Σ_{m−n=r} σ_I(m)σ_J(n)F(m, n) by a direct loop over n.
pub fn ad_sum_bruteforce(i: &ShiftSet, j: &ShiftSet, f: &ADTestFunction, r: i64) -> Result<Complex64> {
    check_r(f, r)?;
    let (lo, hi) = n_range(f, r);
    if hi < lo {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if hi - lo + 1 > TERM_BUDGET {
        return Err(Error::Budget(format!(
            "{} terms exceed the {TERM_BUDGET} term budget",
            hi - lo + 1
        )));
    }
    let si = sigma_table(i, (hi as i64 + r) as u64)?;
    let sj = sigma_table(j, hi)?;
    let ns: Vec<u64> = (lo..=hi).collect();
    let blocks: Vec<Complex64> = ns
        .par_chunks(1 << 14)
        .map(|chunk| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &n in chunk {
                let m = (n as i64 + r) as u64;
                let w = f.eval(m as f64, n as f64);
                if w != 0.0 {
                    acc += si[m as usize] * sj[n as usize] * w;
                }
            }
            acc
        })
        .collect();
    Ok(blocks.into_iter().sum())
}

/// Σ d(n+r)d(n) over n ∈ [Y, 2Y] with n + r ∈ [X, 2X], in integers.
pub fn ad_sum_integer(x: u64, y: u64, r: i64) -> Result<u128> {
    if r == 0 {
        return Err(domain("r", r, "|r| >= 1"));
    }
    let top = (2 * y) as i64 + r.max(0);
    let d = tau_sieve(2, top.max(1) as u64)?;
    let mut acc: u128 = 0;
    for n in y.max(1)..=2 * y {
        let m = n as i64 + r;
        if m < x as i64 || m > 2 * x as i64 {
            continue;
        }
        acc += d.get(m as u64)? as u128 * d.get(n)? as u128;
    }
    Ok(acc)
}

/// The conjectured main term with its truncation data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdMainTerm {
    pub value: Complex64,
    /// Bound on the omitted q > q_cutoff part, propagated through the
    /// ζ-factors and x-integrals.
    pub tail_bound: f64,
    pub q_cutoff: u64,
}

fn check_distinct(set: &ShiftSet, what: &str) -> Result<()> {
    let s = set.shifts();
    for (x, a) in s.iter().enumerate() {
        for b in &s[x + 1..] {
            if (a - b).norm() < DISTINCT_GUARD {
                return Err(Error::Pole {
                    what: format!("coincident shifts {a} and {b} in {what}"),
                });
            }
        }
    }
    Ok(())
}

/// ∫ F(x, x−r) x^{−a}(x−r)^{−b} dx over the support, by panel doubling.
fn x_integral(f: &ADTestFunction, r: i64, a: Complex64, b: Complex64, quad: QuadParams) -> Result<Complex64> {
    let rf = r as f64;
    let lo = f.x.max(f.y + rf).max(rf.max(0.0));
    let hi = (2.0 * f.x).min(2.0 * f.y + rf);
    if hi <= lo {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut cuts: Vec<f64> = f
        .profile
        .breakpoints()
        .iter()
        .flat_map(|&c| [c * f.x, c * f.y + rf])
        .filter(|&c| c > lo && c < hi)
        .chain([lo, hi])
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let gl = GaussLegendre::new(quad.order);
    let integrand = |x: f64| -> Complex64 {
        let w = f.eval(x, x - rf);
        if w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        (-a * x.ln() - b * (x - rf).ln()).exp() * w
    };
    let run = |panels: usize| -> Complex64 {
        cuts.windows(2)
            .map(|c| gl.integrate(c[0], c[1], panels, integrand))
            .sum()
    };
    let mut panels = quad.panels.max(1);
    let mut prev = run(panels);
    for _ in 0..quad.max_doublings {
        panels *= 2;
        let next = run(panels);
        if (next - prev).norm() <= quad.rel_tol * next.norm() {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Convergence(format!(
        "x-integral of the main term still moving after {panels} panels"
    )))
}

/// Σ_{q ≤ Q} c_q(r) G_I(1−a, q) G_J(1−b, q) / q^{2−a−b} and a tail bound.
fn q_series(gi: &[Complex64], gj: &[Complex64], cq: &[i64], a: Complex64, b: Complex64) -> (Complex64, f64) {
    let big_q = gi.len();
    let expo = 2.0 - a - b;
    let terms: Vec<Complex64> = (1..=big_q)
        .into_par_iter()
        .map(|q| {
            let c = cq[q - 1];
            if c == 0 {
                return Complex64::new(0.0, 0.0);
            }
            let qf = q as f64;
            gi[q - 1] * gj[q - 1] * c as f64 * (-expo * qf.ln()).exp()
        })
        .collect();
    let (mut re, mut im) = (Neumaier::default(), Neumaier::default());
    for t in &terms {
        re.add(t.re);
        im.add(t.im);
    }
    // Tail: |term_q| ≤ C q^{−(2−Re(a+b))} with C the largest normalised
    // term over the last half of the range, summed past Q.
    let e = expo.re;
    let amp = (big_q / 2..=big_q)
        .filter(|&q| q >= 1)
        .map(|q| terms[q - 1].norm() * (q as f64).powf(e))
        .fold(0.0, f64::max);
    let tail = amp * (big_q as f64).powf(1.0 - e) / (e - 1.0);
    (Complex64::new(re.value(), im.value()), tail)
}

/// The k = ℓ = 2 conjectured main term for Σ_{m−n=r} σ_I(m)σ_J(n)F(m, n):
/// Σ_{i₁,i₂} Π_{j≠i₁} ζ(1−a_{i₁}+a_j) Π_{j≠i₂} ζ(1−b_{i₂}+b_j)
///   · Σ_q c_q(r) G_I(1−a_{i₁}, q) G_J(1−b_{i₂}, q) q^{a_{i₁}+b_{i₂}−2}
///   · ∫ F(x, x−r) x^{−a_{i₁}} (x−r)^{−b_{i₂}} dx.
pub fn ad_main_term(
    ctx: &ZetaContext,
    i: &ShiftSet,
    j: &ShiftSet,
    f: &ADTestFunction,
    r: i64,
    q_cutoff: u64,
    quad: QuadParams,
) -> Result<AdMainTerm> {
    if i.len() != 2 || j.len() != 2 {
        return Err(Error::Unsupported {
            what: "shift set size (k = l = 2 only)",
            index: i.len().max(j.len()),
            max: 2,
        });
    }
    check_r(f, r)?;
    check_distinct(i, "I")?;
    check_distinct(j, "J")?;
    if !(10..=10_000_000).contains(&q_cutoff) {
        return Err(domain("q cutoff", q_cutoff, "10 <= Q <= 1e7"));
    }
    let cq: Vec<i64> = (1..=q_cutoff)
        .into_par_iter()
        .map(|q| ramanujan_sum(q, r))
        .collect::<Result<_>>()?;
    let g_table = |set: &ShiftSet, shift: Complex64| -> Result<Vec<Complex64>> {
        let s = 1.0 - shift;
        (1..=q_cutoff)
            .into_par_iter()
            .map(|q| {
                if cq[q as usize - 1] == 0 {
                    Ok(Complex64::new(0.0, 0.0))
                } else {
                    big_g_mult_fast(set, s, q)
                }
            })
            .collect()
    };
    let gi: Vec<Vec<Complex64>> = i.shifts().iter().map(|&a| g_table(i, a)).collect::<Result<_>>()?;
    let gj: Vec<Vec<Complex64>> = j.shifts().iter().map(|&b| g_table(j, b)).collect::<Result<_>>()?;

    let mut value = Complex64::new(0.0, 0.0);
    let mut tail = 0.0;
    for (i1, &a) in i.shifts().iter().enumerate() {
        for (i2, &b) in j.shifts().iter().enumerate() {
            let mut z = Complex64::new(1.0, 0.0);
            for (j1, &aj) in i.shifts().iter().enumerate() {
                if j1 != i1 {
                    z *= ctx.zeta(1.0 - a + aj)?;
                }
            }
            for (j2, &bj) in j.shifts().iter().enumerate() {
                if j2 != i2 {
                    z *= ctx.zeta(1.0 - b + bj)?;
                }
            }
            let (qs, qt) = q_series(&gi[i1], &gj[i2], &cq, a, b);
            let integral = x_integral(f, r, a, b, quad)?;
            value += z * qs * integral;
            tail += (z * integral).norm() * qt;
        }
    }
    Ok(AdMainTerm {
        value,
        tail_bound: tail,
        q_cutoff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeros() -> ShiftSet {
        ShiftSet::zeros(2).unwrap()
    }

    #[test]
    fn zero_profile_gives_zero() {
        let f = ADTestFunction::new(100.0, 100.0, Profile::Zero).unwrap();
        assert_eq!(ad_sum_bruteforce(&zeros(), &zeros(), &f, 1).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(f.derivative_scale(), 0.0);
    }

    #[test]
    fn tiny_box_by_hand() {
        let f = ADTestFunction::new(10.0, 10.0, Profile::Box).unwrap();
        // d(n) for n = 10..21.
        let d = [4u64, 2, 6, 2, 4, 4, 5, 2, 6, 2, 6, 4];
        // n ∈ [10, 20], m = n + 1 ∈ [10, 20] ⇒ n ≤ 19.
        let hand: u64 = (0..10).map(|k| d[k] * d[k + 1]).sum();
        assert_eq!(hand, 4 * 2 + 2 * 6 + 6 * 2 + 2 * 4 + 4 * 4 + 4 * 5 + 5 * 2 + 2 * 6 + 6 * 2 + 2 * 6);
        let got = ad_sum_bruteforce(&zeros(), &zeros(), &f, 1).unwrap();
        assert_eq!(got.re, hand as f64);
        assert_eq!(ad_sum_integer(10, 10, 1).unwrap(), hand as u128);
    }

    #[test]
    fn integer_cross_check() {
        for (x, r) in [(1000u64, 1i64), (5000, 7), (100_000, 12), (100_000, -3)] {
            let f = ADTestFunction::new(x as f64, x as f64, Profile::Box).unwrap();
            let float = ad_sum_bruteforce(&zeros(), &zeros(), &f, r).unwrap();
            let int = ad_sum_integer(x, x, r).unwrap();
            assert_eq!(float.re, int as f64, "x={x} r={r}");
            assert_eq!(float.im, 0.0);
        }
    }

    #[test]
    fn conjugation() {
        let i = ShiftSet::new(vec![Complex64::new(0.04, 0.3), Complex64::new(0.0, 0.0)]).unwrap();
        let j = ShiftSet::new(vec![Complex64::new(0.03, -0.2), Complex64::new(0.01, 0.0)]).unwrap();
        let f = ADTestFunction::smooth(2000.0, 2000.0).unwrap();
        let a = ad_sum_bruteforce(&i, &j, &f, 3).unwrap();
        let b = ad_sum_bruteforce(&i.conj(), &j.conj(), &f, 3).unwrap();
        assert!((a - b.conj()).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn guards() {
        let f = ADTestFunction::smooth(1000.0, 1000.0).unwrap();
        assert!(ad_sum_bruteforce(&zeros(), &zeros(), &f, 0).is_err());
        assert!(ad_sum_bruteforce(&zeros(), &zeros(), &f, 200).is_err());
        let big = ADTestFunction::smooth(2e7, 2e7).unwrap();
        assert!(matches!(
            ad_sum_bruteforce(&zeros(), &zeros(), &big, 1),
            Err(Error::Budget(_))
        ));
        let ctx = ZetaContext::new();
        assert!(matches!(
            ad_main_term(&ctx, &zeros(), &zeros(), &f, 1, 1000, QuadParams::default()),
            Err(Error::Pole { .. })
        ));
        assert!(ADTestFunction::new(10.0, 10.0, Profile::Smooth { width: 0.7 }).is_err());
    }

    #[test]
    fn profile_support_and_scale() {
        let f = ADTestFunction::smooth(100.0, 300.0).unwrap();
        assert_eq!(f.eval(99.0, 400.0), 0.0);
        assert_eq!(f.eval(150.0, 299.0), 0.0);
        assert_eq!(f.eval(150.0, 450.0), 1.0);
        assert!(f.derivative_scale() > 4.0 && f.derivative_scale().is_finite());
        assert_eq!(ERROR_TERM_TRIPLE.0, 0.75);
    }

    #[test]
    fn main_term_tracks_bruteforce() {
        let ctx = ZetaContext::new();
        let i = ShiftSet::real(&[0.04, 0.0]).unwrap();
        let j = ShiftSet::real(&[0.03, 0.0]).unwrap();
        let f = ADTestFunction::smooth(1e5, 1e5).unwrap();
        for r in [1, 12] {
            let brute = ad_sum_bruteforce(&i, &j, &f, r).unwrap();
            let main = ad_main_term(&ctx, &i, &j, &f, r, 2000, QuadParams::default()).unwrap();
            let dev = (brute - main.value).norm() / main.value.norm();
            assert!(dev < 0.1, "r={r}: {brute} vs {}", main.value);
            assert!(main.value.im.abs() < 1e-10 * main.value.re.abs());
        }
    }

    #[test]
    fn q_doubling_within_tail() {
        let ctx = ZetaContext::new();
        let i = ShiftSet::real(&[0.04, 0.0]).unwrap();
        let j = ShiftSet::real(&[0.03, 0.0]).unwrap();
        let f = ADTestFunction::smooth(1e4, 1e4).unwrap();
        let a = ad_main_term(&ctx, &i, &j, &f, 2, 1000, QuadParams::default()).unwrap();
        let b = ad_main_term(&ctx, &i, &j, &f, 2, 2000, QuadParams::default()).unwrap();
        assert!((a.value - b.value).norm() <= a.tail_bound, "{} > {}", (a.value - b.value).norm(), a.tail_bound);
    }
}
