//! Named checks run by `dmom verify`.

use std::f64::consts::PI;
use std::fmt;

use divisor_moments::arithmetic::ShiftSet;
use divisor_moments::main_term::{
    assembled_total, c_coefficients, limit_lemma_check, m0_contour, q_poly_gamma_form, r1, r1_prime, r2,
    r2_terms, r_total, r_total_series, w_k, ContourParams, DirectKit, QPolynomialSet, SeriesKit, ShiftPair,
};
use divisor_moments::series::PowerSeries;
use divisor_moments::smoothing::{SmoothingKernel, WeightWindow};
use divisor_moments::zeta::ZetaContext;
use divisor_moments::{Complex64, Result};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Knobs for `verify`. `delta1_shift` perturbs δ₁ before the cancellation
/// checks; it exists to prove those checks can fail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub mu: f64,
    pub delta1_shift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub max: f64,
    pub tol: f64,
    /// Offending values, filled on failure.
    pub detail: String,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max <= self.tol
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{}: {verdict} (max {:.1e}, tol {:.0e})", self.name, self.max, self.tol)?;
        if !self.passed() && !self.detail.is_empty() {
            write!(f, " {}", self.detail)?;
        }
        Ok(())
    }
}

/// Tracks the worst value seen and where it came from.
struct Worst {
    max: f64,
    detail: String,
}

impl Worst {
    fn new() -> Self {
        Self { max: 0.0, detail: String::new() }
    }

    fn see(&mut self, v: f64, detail: impl FnOnce() -> String) {
        if !(v <= self.max) {
            self.max = if v.is_nan() { f64::INFINITY } else { v };
            self.detail = detail();
        }
    }

    fn finish(self, name: &'static str, tol: f64) -> CheckResult {
        CheckResult { name, max: self.max, tol, detail: self.detail }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cancellation(ctx: &ZetaContext, opts: &VerifyOptions, rng: &mut StdRng) -> Result<[CheckResult; 2]> {
    let g = ctx.g_series(8)?;
    let mut d: Vec<f64> = ctx.delta_coeffs()[..9].to_vec();
    d[1] += opts.delta1_shift;
    let d = PowerSeries::from_real(&d);
    let gq: [f64; 5] = std::array::from_fn(|j| ctx.g_coeffs()[j]);
    let dq: [f64; 5] = std::array::from_fn(|j| ctx.delta_coeffs()[j]);
    let (mut low, mut top) = (Worst::new(), Worst::new());
    for mu in [0.05, 0.1, 0.3] {
        let kernel = SmoothingKernel::new(mu)?;
        let cs = PowerSeries::from_real(kernel.c_coeffs());
        let q = QPolynomialSet::new(gq, dq, std::array::from_fn(|j| kernel.c_coeffs()[j]));
        for _ in 0..10 {
            let l = rng.gen_range(5.0..15.0);
            let y = rng.gen_range(5.0..15.0);
            let out = c_coefficients(l, y, &g, &d, &cs)?;
            for (j, v) in out[..4].iter().enumerate() {
                low.see(v.norm(), || format!("C({j}) = {v:e} at mu={mu}, L={l:.4}, Y={y:.4}"));
            }
            let target = q.total(y, l);
            let err = (out[4] - target).norm() / target.abs().max(1.0);
            top.see(err, || format!("C(4) = {} vs {target} at mu={mu}, L={l:.4}, Y={y:.4}", out[4]));
        }
    }
    Ok([
        low.finish("cancellation C(0..3)", 1e-9),
        top.finish("cancellation C(4) = sum Q_j", 1e-9),
    ])
}

fn form_equivalence(ctx: &ZetaContext, kernel: &SmoothingKernel, q: &QPolynomialSet, rng: &mut StdRng) -> Result<CheckResult> {
    let mut w = Worst::new();
    for _ in 0..20 {
        let x = rng.gen_range(1.0..10.0);
        let y = rng.gen_range(1.0..10.0);
        for j in 0..4 {
            let a = q_poly_gamma_form(ctx, j, x, y, kernel.c_coeffs())?;
            let b = q.q_poly(j, x, y)?;
            w.see((a - b).abs() / b.abs().max(1e-300), || format!("Q_{j}({x}, {y}): {a} vs {b}"));
        }
    }
    Ok(w.finish("Q-form equivalence", 1e-10))
}

fn q4_w2(q: &QPolynomialSet, rng: &mut StdRng) -> Result<CheckResult> {
    let zeta2 = PI * PI / 6.0;
    let mut w = Worst::new();
    for _ in 0..50 {
        let x = rng.gen_range(-3.0..3.0);
        let y: f64 = rng.gen_range(0.5..4.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let lhs = 24.0 * zeta2 * q.q_poly(4, x * y, y)? / y.powi(4);
        let rhs = w_k(2, x)?;
        w.see((lhs - rhs).abs() / (1.0 + rhs.abs()), || format!("X={x}, y={y}: {lhs} vs {rhs}"));
    }
    Ok(w.finish("Q4/w2 identity", 1e-12))
}

fn residue_scale(kit: &DirectKit, p: &ShiftPair) -> Result<f64> {
    Ok(r2_terms(kit, p)?.iter().map(|z| z.norm()).fold(r1(kit, p)?.norm(), f64::max))
}

fn residues(ctx: &ZetaContext, kernel: &SmoothingKernel, rng: &mut StdRng) -> Result<[CheckResult; 3]> {
    let (mut dual, mut sym) = (Worst::new(), Worst::new());
    for _ in 0..10 {
        let t = rng.gen_range(500.0..5000.0);
        let k = rng.gen_range(50.0..2000.0);
        let kit = DirectKit::new(ctx, kernel, t, k)?;
        let a = c(rng.gen_range(0.005..0.04), rng.gen_range(-0.01..0.01));
        let b = c(rng.gen_range(-0.04..-0.005), rng.gen_range(-0.01..0.01));
        let p = ShiftPair::new(a, b)?;
        let scale = residue_scale(&kit, &p)?;
        let direct = r1(&kit, &p)? + r2(&kit, &p)?;
        let kappa = r_total(&kit, &p)?;
        dual.see((direct - kappa).norm() / scale, || format!("a={a}, b={b}: {direct} vs {kappa}"));
        let swapped = r_total(&kit, &p.swapped())?;
        sym.see((kappa - swapped).norm() / scale, || format!("a={a}, b={b}: {kappa} vs {swapped}"));
    }
    let kit = DirectKit::new(ctx, kernel, 2000.0, 1000.0)?;
    let p = ShiftPair::new(c(0.02, 0.0), c(0.035, 0.0))?;
    let (v1, v1p, v2) = (r1(&kit, &p)?, r1_prime(&kit, &p)?, r2(&kit, &p)?);
    let with = assembled_total(v1, v1p, v2);
    let without = assembled_total(v1, c(0.0, 0.0), v2);
    let scale = v1.norm().max(v1p.norm()).max(v2.norm());
    let mut cancel = Worst::new();
    cancel.see((with - without).norm() / scale, || format!("{with} vs {without}"));
    Ok([
        dual.finish("kappa dual-assembly", 1e-12),
        cancel.finish("r1_prime cancellation", 1e-14),
        sym.finish("residue shift symmetry", 1e-13),
    ])
}

fn diagonal_limit(ctx: &ZetaContext, kernel: &SmoothingKernel, q: &QPolynomialSet) -> Result<CheckResult> {
    let (t, k): (f64, f64) = (2000.0, 1000.0);
    let target = q.total(k.ln(), (t / (2.0 * PI)).ln());
    let kit = SeriesKit::new(ctx, kernel, t, k)?;
    let errs = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&h| Ok((r_total_series(&kit, h)? - target).abs()))
        .collect::<Result<Vec<f64>>>()?;
    // Report the shortfall of the observed order below 1.
    let mut w = Worst::new();
    for pair in errs.windows(2) {
        let order = (pair[0] / pair[1]).log10();
        w.see(1.0 - order, || format!("observed order {order:.3} from errors {errs:?}"));
    }
    Ok(w.finish("residue limit order >= 0.9", 0.1))
}

fn contour(ctx: &ZetaContext, kernel: &SmoothingKernel) -> Result<CheckResult> {
    let window = WeightWindow::new(2000.0, 500.0, 1.0, 2.0)?;
    let (a, b, k) = (0.02, 0.035, 1000.0);
    let i = ShiftSet::real(&[a, 0.0])?;
    let j = ShiftSet::real(&[b, 0.0])?;
    let m0 = m0_contour(ctx, &i, &j, k, kernel, &window, 0.2, ContourParams::default())?;
    let kit = DirectKit::new(ctx, kernel, 2000.0, k)?;
    let p = ShiftPair::new(c(a, 0.0), c(b, 0.0))?;
    let res = (r1(&kit, &p)? + r1_prime(&kit, &p)?) * window.mass();
    let mut w = Worst::new();
    w.see((m0.value - res).norm() / res.norm(), || format!("contour {} vs residues {res}", m0.value));
    Ok(w.finish("m0 contour-vs-residue", 1e-3))
}

fn lemma(ctx: &ZetaContext, kernel: &SmoothingKernel) -> Result<CheckResult> {
    let y = 1000f64.ln();
    let f1 = |z: Complex64| z * ctx.entire_f(-z).unwrap_or(c(f64::NAN, 0.0));
    let f2 = |z: Complex64| kernel.g_big(-z) * (-z * y).exp() * ctx.entire_f(z).unwrap_or(c(f64::NAN, 0.0));
    let mut w = Worst::new();
    for a in [0.01, 0.02, -0.015] {
        let (wr, qt) = limit_lemma_check(f1, f2, c(a, 0.0));
        w.see((wr - qt).norm() / wr.norm(), || format!("a={a}: {wr} vs {qt}"));
    }
    Ok(w.finish("limit lemma", 1e-7))
}

fn constants(ctx: &ZetaContext) -> Result<[CheckResult; 2]> {
    let mut d0 = Worst::new();
    let v = ctx.delta_coeff(0)?;
    d0.see((v - 6.0 / (PI * PI)).abs(), || format!("delta_0 = {v}"));
    let mut g0 = Worst::new();
    let v = ctx.stieltjes(0)?;
    g0.see((v - 0.577_215_664_901_532_9).abs(), || format!("gamma_0 = {v}"));
    Ok([d0.finish("delta_0 = 6/pi^2", 1e-10), g0.finish("gamma_0", 1e-10)])
}

/// Runs every check in a fixed order.
pub fn run_all(opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let ctx = ZetaContext::new();
    let kernel = SmoothingKernel::new(opts.mu)?;
    let q = QPolynomialSet::from_context(&ctx, &kernel);
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let mut out = Vec::new();
    out.extend(cancellation(&ctx, opts, &mut rng)?);
    out.push(form_equivalence(&ctx, &kernel, &q, &mut rng)?);
    out.push(q4_w2(&q, &mut rng)?);
    out.extend(residues(&ctx, &kernel, &mut rng)?);
    out.push(diagonal_limit(&ctx, &kernel, &q)?);
    out.push(contour(&ctx, &kernel)?);
    out.push(lemma(&ctx, &kernel)?);
    out.extend(constants(&ctx)?);
    Ok(out)
}
