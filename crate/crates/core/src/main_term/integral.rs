//! ∫ ω(t) Q_j(log K, log t/2π) dt for j = 0..4.

use std::f64::consts::PI;

use serde::Serialize;

use super::qpoly::QPolynomialSet;
use crate::error::{domain, Error, Result};
use crate::quadrature::GaussLegendre;
use crate::smoothing::TimeWeight;

/// Quadrature settings: Gauss–Legendre order, panels per smooth piece,
/// and the tolerance on the node-doubling comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadParams {
    pub order: usize,
    pub panels: usize,
    pub rel_tol: f64,
    pub max_doublings: u32,
}

impl Default for QuadParams {
    fn default() -> Self {
        Self {
            order: 24,
            panels: 4,
            rel_tol: 1e-10,
            max_doublings: 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MainTermIntegral {
    pub total: f64,
    /// Contributions of Q₀…Q₄.
    pub by_degree: [f64; 5],
    /// Relative change seen on the final doubling.
    pub doubling_change: f64,
    pub panels: usize,
}

fn integrate_once<W: TimeWeight>(
    log_k: f64,
    weight: &W,
    set: &QPolynomialSet,
    gl: &GaussLegendre,
    panels: usize,
) -> [f64; 5] {
    let cuts = weight.breakpoints();
    let mut out = [0.0; 5];
    for w in cuts.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        for (t, wt) in gl.mapped(w[0], w[1], panels) {
            let om = weight.eval(t);
            if om == 0.0 {
                continue;
            }
            let q = set.by_degree(log_k, (t / (2.0 * PI)).ln());
            for (o, v) in out.iter_mut().zip(q) {
                *o += wt * om * v;
            }
        }
    }
    out
}

/// Per-degree integrals of ω(t)Q_j(log K, log t/2π), doubling the panel
/// count until two successive totals agree to `quad.rel_tol`.
pub fn main_term_integral<W: TimeWeight>(
    k: f64,
    weight: &W,
    set: &QPolynomialSet,
    quad: QuadParams,
) -> Result<MainTermIntegral> {
    if !(k > 1.0 && k.is_finite()) {
        return Err(domain("K", k, "K > 1"));
    }
    let cuts = weight.breakpoints();
    if cuts.first().is_none_or(|&a| a <= 0.0) {
        return Err(domain("weight support", format!("{cuts:?}"), "positive t"));
    }
    let gl = GaussLegendre::new(quad.order);
    let log_k = k.ln();
    let mut panels = quad.panels.max(1);
    let mut prev = integrate_once(log_k, weight, set, &gl, panels);
    for _ in 0..quad.max_doublings {
        panels *= 2;
        let next = integrate_once(log_k, weight, set, &gl, panels);
        let total: f64 = next.iter().sum();
        let change = (total - prev.iter().sum::<f64>()).abs() / total.abs().max(f64::MIN_POSITIVE);
        let per_degree_ok = next
            .iter()
            .zip(&prev)
            .all(|(a, b)| (a - b).abs() <= quad.rel_tol * total.abs().max(a.abs()));
        if change <= quad.rel_tol && per_degree_ok {
            return Ok(MainTermIntegral {
                total,
                by_degree: next,
                doubling_change: change,
                panels,
            });
        }
        prev = next;
    }
    Err(Error::Convergence(format!(
        "main-term quadrature still moving after {} panels",
        panels
    )))
}
