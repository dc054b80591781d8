//! The degree-j coefficients C(j) of R(a, a) and the limit lemma.

use num_complex::Complex64;

use crate::error::Result;
use crate::series::PowerSeries;

const NEEDED_ORDER: usize = 4;

fn conv(parts: &[&PowerSeries]) -> PowerSeries {
    parts[1..]
        .iter()
        .fold(parts[0].clone(), |acc, s| acc.convolve(s))
}

fn sign(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// C(0)…C(4) from the g, δ, c Taylor sequences. C(0..=3) vanish and C(4)
/// equals Σ_j Q_j(Y, L).
pub fn c_coefficients(
    l: f64,
    y: f64,
    g: &PowerSeries,
    delta: &PowerSeries,
    c: &PowerSeries,
) -> Result<[Complex64; 5]> {
    for s in [g, delta, c] {
        s.require_order(NEEDED_ORDER)?;
    }
    let n = NEEDED_ORDER;
    let (g, delta, c) = (g.truncate(n), delta.truncate(n), c.truncate(n));
    let alpha = PowerSeries::exp_series(l, n);
    let beta = PowerSeries::exp_series(y, n);
    let gp = PowerSeries::new(
        (0..=n)
            .map(|j| g.at(j) * (j as f64 - 1.0))
            .collect(),
    );
    // (j+1)δ_{j+1}; the top entry is never read by C(j ≤ 4).
    let dp = PowerSeries::new(
        (0..=n)
            .map(|j| delta.get(j + 1).unwrap_or_default() * (j + 1) as f64)
            .collect(),
    );
    let gd = conv(&[&g, &delta]);
    let gdp = conv(&[&g, &dp]);
    let a4 = conv(&[&g, &delta, &alpha, &c.alternate(), &beta.alternate()]);
    let a5 = conv(&[&alpha, &gp, &delta]);
    let agg = conv(&[&alpha, &g, &g]);
    let gg = conv(&[&g, &g]);
    let cbg = conv(&[&c, &beta, &g.alternate()]);
    let gad = conv(&[&g, &alpha, &delta]);
    let g1 = g.at(1);
    let lp = (y - l) + g1 + c.at(1);

    let c1 = |j1: usize, j2: usize, j3: usize| {
        let p = 2f64.powi(j3 as i32) * g.at(j1) * g.at(j2);
        p * gd.at(j3) * (0.5 * (j1 as f64 + j2 as f64 - 2.0)) - p * a4.at(j3) * 0.25
            - p * a5.at(j3) * (0.25 * sign(j1 + j2 + j3))
    };
    let c2 = |j1: usize, j2: usize| {
        delta.at(0) * agg.at(j1) * gg.at(j2) * (2.0 * sign(j1))
            + gad.at(0) * g.at(j1) * cbg.at(j2) * (sign(j1 + j2) * (j2 as f64 - j1 as f64 - 1.0))
    };
    let d1 = |j1: usize, j2: usize, j3: usize| {
        let p = 2f64.powi(j3 as i32) * g.at(j1) * g.at(j2);
        p * gd.at(j3) * ((l + 2.0 * g1) * 0.5) + p * gdp.at(j3)
            - p * gad.at(j3) * lp * 0.5 * sign(j1 + j2 + j3)
    };
    let d2 = |j1: usize, j2: usize| gad.at(1) * g.at(j1) * cbg.at(j2) * (2.0 * sign(j1 + j2));

    let mut out = [Complex64::new(0.0, 0.0); 5];
    for (j, slot) in out.iter_mut().enumerate() {
        let mut s = Complex64::new(0.0, 0.0);
        for j1 in 0..=j {
            for j2 in 0..=j - j1 {
                let j3 = j - j1 - j2;
                s += c1(j1, j2, j3);
                if j3 >= 1 {
                    s += d1(j1, j2, j3 - 1);
                }
            }
            let j2 = j - j1;
            s += c2(j1, j2);
            if j2 >= 1 {
                s += d2(j1, j2 - 1);
            }
        }
        *slot = s;
    }
    Ok(out)
}

/// f₁′(a)f₂(a) − f₁(a)f₂′(a) two ways: central differences, and the
/// quotient (f₁(a+ε)f₂(a−ε) − f₁(a−ε)f₂(a+ε))/(2ε). Both are extrapolated
/// in ε (their error is even in ε).
pub fn limit_lemma_check<F1, F2>(f1: F1, f2: F2, a: Complex64) -> (Complex64, Complex64)
where
    F1: Fn(Complex64) -> Complex64,
    F2: Fn(Complex64) -> Complex64,
{
    let wronskian = |e: f64| {
        let d1 = (f1(a + e) - f1(a - e)) / (2.0 * e);
        let d2 = (f2(a + e) - f2(a - e)) / (2.0 * e);
        d1 * f2(a) - f1(a) * d2
    };
    let quotient = |e: f64| (f1(a + e) * f2(a - e) - f1(a - e) * f2(a + e)) / (2.0 * e);
    let richardson = |f: &dyn Fn(f64) -> Complex64| {
        let e = 1e-3;
        (f(e / 2.0) * 4.0 - f(e)) / 3.0
    };
    (richardson(&wronskian), richardson(&quotient))
}
