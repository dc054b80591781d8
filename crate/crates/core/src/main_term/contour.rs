//! M₀ as a vertical-line integral of K^s Φ₂(s) 𝒜(I+s, J) 𝒵(I+s, J).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arithmetic::euler::euler_a_partial;
use crate::arithmetic::sieve::primes_up_to;
use crate::arithmetic::{euler_z, ShiftSet};
use crate::error::{domain, Error, Result};
use crate::quadrature::GaussLegendre;
use crate::smoothing::{SmoothingKernel, WeightWindow};
use crate::zeta::ZetaContext;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourParams {
    /// Largest |Im s| the integration may reach.
    pub truncation: f64,
    /// Width in Im s of one quadrature panel.
    pub panel_width: f64,
    pub order: usize,
    /// Primes kept in 𝒜. The same truncated product is used at every node,
    /// so the integrand stays holomorphic in s.
    pub prime_cutoff: u64,
    /// Stop once two consecutive outer panels contribute less than this
    /// fraction of the running total.
    pub tail_tol: f64,
}

impl Default for ContourParams {
    fn default() -> Self {
        Self {
            truncation: 2000.0,
            panel_width: 4.0,
            order: 48,
            prime_cutoff: 2000,
            tail_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourResult {
    pub value: Complex64,
    /// |Im s| actually reached.
    pub reached: f64,
    /// Contribution of the last panel pair, relative to |value|.
    pub last_panel: f64,
}

/// (ω̂(0)/2π) ∫ K^{c+iu} Φ₂(c+iu) 𝒜(I+c+iu, J) 𝒵(I+c+iu, J) du.
#[allow(clippy::too_many_arguments)]
pub fn m0_contour(
    ctx: &ZetaContext,
    i: &ShiftSet,
    j: &ShiftSet,
    k: f64,
    kernel: &SmoothingKernel,
    window: &WeightWindow,
    line_re: f64,
    params: ContourParams,
) -> Result<ContourResult> {
    if !(k > 1.0 && k.is_finite()) {
        return Err(domain("K", k, "K > 1"));
    }
    for &a in i.shifts() {
        for &b in j.shifts() {
            if (a + b).re + line_re <= 0.0 || a.re + line_re <= 0.0 {
                return Err(domain("line_re", line_re, "right of every pole of the integrand"));
            }
        }
    }
    if !(params.truncation > params.panel_width && params.panel_width > 0.0) {
        return Err(domain("truncation", params.truncation, "> panel width > 0"));
    }
    let primes = primes_up_to(params.prime_cutoff);
    let gl = GaussLegendre::new(params.order);
    let log_k = k.ln();
    let integrand = |u: f64| -> Result<Complex64> {
        let s = Complex64::new(line_re, u);
        let shifted = i.translated(s)?;
        let a = euler_a_partial(&shifted, j, &primes)?;
        let z = euler_z(ctx, &shifted, j)?;
        Ok((s * log_k).exp() * kernel.phi2_mellin(s)? * a * z)
    };
    let panel = |lo: f64, hi: f64| -> Result<Complex64> {
        let nodes = gl.mapped(lo, hi, 1);
        nodes
            .par_iter()
            .map(|&(u, w)| Ok(integrand(u)? * w))
            .collect::<Result<Vec<_>>>()
            .map(|v| v.into_iter().sum())
    };

    let mut total = Complex64::new(0.0, 0.0);
    let mut quiet = 0;
    let mut reached = 0.0;
    let mut last = f64::INFINITY;
    // Poles sit at distance ~line_re from u = 0, so panels start that wide
    // and double up to the nominal width.
    let mut width = line_re.min(params.panel_width);
    while reached < params.truncation {
        let next = reached + width;
        let pair = panel(reached, next)? + panel(-next, -reached)?;
        total += pair;
        reached = next;
        width = (2.0 * width).min(params.panel_width);
        last = pair.norm() / total.norm().max(f64::MIN_POSITIVE);
        if last < params.tail_tol {
            quiet += 1;
            if quiet >= 2 {
                let scale = window.mass() / (2.0 * std::f64::consts::PI);
                return Ok(ContourResult {
                    value: total * scale,
                    reached,
                    last_panel: last,
                });
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Truncation(format!(
        "contour integrand still contributes {last:.2e} of the total at |Im s| = {reached}"
    )))
}
