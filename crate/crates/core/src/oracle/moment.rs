//! Brute-force ∫ ω(t)|Σ τ₂(n) n^{−1/2−it} φ(n/K)|² dt.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arithmetic::{tau_sieve, DivisorTable};
use crate::error::{domain, Error, Result};
use crate::smoothing::{SmoothingKernel, WeightWindow};

/// Largest K·(node count) accepted.
pub const WORK_BUDGET: f64 = 1e10;
/// Nodes between exact phase refreshes in the incremental mode.
const PHASE_REFRESH: usize = 256;

/// One mean-value experiment: K = T^{1+η}, kernel φ, window ω.
#[derive(Debug, Clone)]
pub struct MomentExperiment {
    pub t: f64,
    pub eta: f64,
    pub kernel: SmoothingKernel,
    pub window: WeightWindow,
    /// Quadrature nodes per oscillation scale 2π/log K.
    pub oversample: usize,
}

impl MomentExperiment {
    pub fn new(t: f64, eta: f64, kernel: SmoothingKernel, window: WeightWindow, oversample: usize) -> Result<Self> {
        if !(t > 1.0 && t.is_finite()) {
            return Err(domain("T", t, "T > 1"));
        }
        if !(eta > 0.0 && eta < 1.0) {
            return Err(domain("eta", eta, "0 < eta < 1"));
        }
        if oversample < 4 {
            return Err(domain("oversample", oversample, ">= 4"));
        }
        Ok(Self {
            t,
            eta,
            kernel,
            window,
            oversample,
        })
    }

    /// μ = 1/4, ω rising and falling over T/2 around T and 2T, oversample 8.
    pub fn with_defaults(t: f64, eta: f64) -> Result<Self> {
        let kernel = SmoothingKernel::new(0.25)?;
        let window = WeightWindow::new(t, t / 4.0, 1.0, 2.0)?;
        Self::new(t, eta, kernel, window, 8)
    }

    pub fn k(&self) -> f64 {
        self.t.powf(1.0 + self.eta)
    }

    /// Last n with φ(n/K) ≠ 0.
    pub fn n_max(&self) -> u64 {
        (self.k() * (1.0 + self.kernel.mu())).floor() as u64
    }

    /// The τ₂ table this experiment needs.
    pub fn divisor_table(&self) -> Result<DivisorTable> {
        tau_sieve(2, self.n_max())
    }

    /// Node spacing bound (2π/log K)/oversample.
    pub fn max_spacing(&self) -> f64 {
        2.0 * PI / self.k().ln() / self.oversample as f64
    }

    /// Trapezoid node count over the window support, rounded up to even.
    pub fn node_count(&self) -> usize {
        let (lo, hi) = self.window.support();
        let m = ((hi - lo) / self.max_spacing()).ceil() as usize;
        m + m % 2 + 1
    }
}

/// Σ c_n e^{−it log n} with precomputed coefficients and logarithms.
#[derive(Debug, Clone)]
pub struct DirichletPoly {
    coeffs: Vec<f64>,
    logs: Vec<f64>,
}

impl DirichletPoly {
    /// c_n = τ₂(n) n^{−1/2} φ(n/K), dropping terms with φ(n/K) = 0.
    pub fn divisor(exp: &MomentExperiment, table: &DivisorTable) -> Result<Self> {
        let n_max = exp.n_max();
        if table.limit() < n_max {
            return Err(Error::TableTooShort {
                have: table.limit(),
                need: n_max,
            });
        }
        if table.k() != 2 {
            return Err(domain("divisor table order", table.k(), "k = 2"));
        }
        let k = exp.k();
        let (coeffs, logs) = (1..=n_max)
            .filter_map(|n| {
                let w = exp.kernel.phi(n as f64 / k);
                (w != 0.0).then(|| {
                    let nf = n as f64;
                    (table.values()[n as usize] as f64 * w / nf.sqrt(), nf.ln())
                })
            })
            .unzip();
        Ok(Self { coeffs, logs })
    }

    /// Arbitrary coefficients for n = 1, 2, …
    pub fn from_coeffs(coeffs: &[f64]) -> Self {
        Self {
            coeffs: coeffs.to_vec(),
            logs: (1..=coeffs.len()).map(|n| (n as f64).ln()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Value at 1/2 + it (the n^{−1/2} is already in the coefficients).
    pub fn eval(&self, t: f64) -> Complex64 {
        pairwise(&self.coeffs, &self.logs, t)
    }
}

fn pairwise(c: &[f64], l: &[f64], t: f64) -> Complex64 {
    if c.len() <= 128 {
        let (mut re, mut im) = (0.0, 0.0);
        for (&cn, &ln) in c.iter().zip(l) {
            let (s, co) = (t * ln).sin_cos();
            re += cn * co;
            im -= cn * s;
        }
        return Complex64::new(re, im);
    }
    let mid = c.len() / 2;
    pairwise(&c[..mid], &l[..mid], t) + pairwise(&c[mid..], &l[mid..], t)
}

/// Σ τ₂(n) n^{−1/2} φ(n/K) n^{−it}.
pub fn dirichlet_poly(exp: &MomentExperiment, table: &DivisorTable, t: f64) -> Result<Complex64> {
    Ok(DirichletPoly::divisor(exp, table)?.eval(t))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentOptions {
    /// Largest accepted |I(h) − I(2h)|/I(h).
    pub rel_tol: f64,
    /// Keep (t, |A|², ω) per node.
    pub keep_nodes: bool,
    /// Advance phases by e^{−ih log n} between exact refreshes.
    pub incremental: bool,
}

impl Default for MomentOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-3,
            keep_nodes: false,
            incremental: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentResult {
    pub value: f64,
    /// |I(h) − I(2h)|/I(h) from the even-indexed subset.
    pub doubling_change: f64,
    pub nodes: usize,
    pub spacing: f64,
    /// Largest drift seen at a phase refresh (incremental mode only).
    pub phase_drift: f64,
    #[serde(skip)]
    pub node_values: Option<Vec<(f64, f64, f64)>>,
}

/// ∫ ω(t)|A(1/2+it)|² dt by the trapezoid rule at spacing
/// ≤ (2π/log K)/oversample, certified against the rule at twice the spacing.
///
/// The integrand is a trigonometric polynomial with frequencies ≤ log N
/// times a C∞ window, so the uniform rule converges geometrically once the
/// spacing resolves 2π/log N.
pub fn moment_numeric(exp: &MomentExperiment, table: &DivisorTable, opts: MomentOptions) -> Result<MomentResult> {
    let m = exp.node_count();
    let work = exp.k() * m as f64;
    if work > WORK_BUDGET {
        return Err(Error::Budget(format!(
            "K x nodes = {work:.3e} exceeds {WORK_BUDGET:.0e}"
        )));
    }
    let poly = DirichletPoly::divisor(exp, table)?;
    let (lo, hi) = exp.window.support();
    let h = (hi - lo) / (m - 1) as f64;
    let ts: Vec<f64> = (0..m).map(|i| lo + i as f64 * h).collect();

    let (sq, drift) = if opts.incremental {
        incremental_values(&poly, &ts, h)
    } else {
        let sq = ts.par_iter().map(|&t| poly.eval(t).norm_sqr()).collect();
        (sq, 0.0)
    };
    let weights: Vec<f64> = ts.iter().map(|&t| exp.window.omega(t)).collect();

    let fine = tree_sum(&sq.iter().zip(&weights).map(|(a, w)| a * w).collect::<Vec<_>>()) * h;
    let coarse = tree_sum(
        &sq.iter()
            .zip(&weights)
            .step_by(2)
            .map(|(a, w)| a * w)
            .collect::<Vec<_>>(),
    ) * 2.0
        * h;
    let change = (fine - coarse).abs() / fine.abs().max(f64::MIN_POSITIVE);
    if change > opts.rel_tol {
        return Err(Error::Convergence(format!(
            "moment quadrature moved by {change:.3e} between spacings {h:.4} and {:.4}",
            2.0 * h
        )));
    }
    let node_values = opts
        .keep_nodes
        .then(|| ts.iter().zip(&sq).zip(&weights).map(|((&t, &a), &w)| (t, a, w)).collect());
    Ok(MomentResult {
        value: fine,
        doubling_change: change,
        nodes: m,
        spacing: h,
        phase_drift: drift,
        node_values,
    })
}

/// ∫ ω(t) A(1/2+it) B(1/2−it) dt on the same nodes, with B evaluated by its
/// own loop over e^{+it log n}.
pub fn moment_cross(exp: &MomentExperiment, a: &DirichletPoly, b: &DirichletPoly) -> Result<Complex64> {
    let m = exp.node_count();
    let (lo, hi) = exp.window.support();
    let h = (hi - lo) / (m - 1) as f64;
    let vals: Vec<Complex64> = (0..m)
        .into_par_iter()
        .map(|i| {
            let t = lo + i as f64 * h;
            let mut bv = Complex64::new(0.0, 0.0);
            for (&c, &l) in b.coeffs.iter().zip(&b.logs) {
                bv += Complex64::from_polar(c, t * l);
            }
            a.eval(t) * bv * exp.window.omega(t)
        })
        .collect();
    let re = tree_sum(&vals.iter().map(|z| z.re).collect::<Vec<_>>());
    let im = tree_sum(&vals.iter().map(|z| z.im).collect::<Vec<_>>());
    Ok(Complex64::new(re, im) * h)
}

fn incremental_values(poly: &DirichletPoly, ts: &[f64], h: f64) -> (Vec<f64>, f64) {
    let steps: Vec<Complex64> = poly.logs.iter().map(|&l| Complex64::from_polar(1.0, -h * l)).collect();
    let blocks: Vec<(Vec<f64>, f64)> = ts
        .par_chunks(PHASE_REFRESH)
        .map(|chunk| {
            let t0 = chunk[0];
            let mut phase: Vec<Complex64> = poly
                .coeffs
                .iter()
                .zip(&poly.logs)
                .map(|(&c, &l)| Complex64::from_polar(c, -t0 * l))
                .collect();
            let mut out = Vec::with_capacity(chunk.len());
            for _ in chunk {
                out.push(phase.iter().sum::<Complex64>().norm_sqr());
                for (p, s) in phase.iter_mut().zip(&steps) {
                    *p *= s;
                }
            }
            // The phase now sits one step past the chunk; compare with exact.
            let t_end = t0 + chunk.len() as f64 * h;
            let exact = poly.eval(t_end);
            let advanced: Complex64 = phase.iter().sum();
            let drift = (advanced - exact).norm() / exact.norm().max(f64::MIN_POSITIVE);
            (out, drift)
        })
        .collect();
    let drift = blocks.iter().map(|b| b.1).fold(0.0, f64::max);
    (blocks.into_iter().flat_map(|b| b.0).collect(), drift)
}

/// Pairwise summation in a fixed order.
fn tree_sum(v: &[f64]) -> f64 {
    if v.len() <= 64 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    tree_sum(&v[..mid]) + tree_sum(&v[mid..])
}

/// Writes `t,abs2,omega` rows.
pub fn write_node_csv<W: Write>(mut out: W, nodes: &[(f64, f64, f64)]) -> std::io::Result<()> {
    writeln!(out, "t,abs2,omega")?;
    for (t, a, w) in nodes {
        writeln!(out, "{t},{a},{w}")?;
    }
    Ok(())
}
