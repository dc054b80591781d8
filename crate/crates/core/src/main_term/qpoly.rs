//! The main-term polynomials Q₀…Q₄ in (x, y) = (log K, log t/2π).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::smoothing::SmoothingKernel;
use crate::zeta::ZetaContext;

/// Q₀…Q₄ as monomial tables, plus the g, δ, c values they were built from.
#[derive(Debug, Clone, PartialEq)]
pub struct QPolynomialSet {
    g: [f64; 5],
    delta: [f64; 5],
    c: [f64; 5],
    /// tables[j] holds (power of x, power of y, coefficient) with the powers summing to j.
    tables: [Vec<(u32, u32, f64)>; 5],
}

impl QPolynomialSet {
    /// Build from g₀..g₄, δ₀..δ₄, c₀..c₄.
    pub fn new(g: [f64; 5], delta: [f64; 5], c: [f64; 5]) -> Self {
        let tables = theorem_tables(&g, &delta, &c);
        Self { g, delta, c, tables }
    }

    pub fn from_context(ctx: &ZetaContext, kernel: &SmoothingKernel) -> Self {
        let take = |v: &[f64]| -> [f64; 5] { [v[0], v[1], v[2], v[3], v[4]] };
        Self::new(
            take(ctx.g_coeffs()),
            take(ctx.delta_coeffs()),
            take(kernel.c_coeffs()),
        )
    }

    /// Arbitrary monomial tables, e.g. test polynomials. Entries whose
    /// degree does not match their slot are rejected.
    pub fn from_tables(tables: [Vec<(u32, u32, f64)>; 5]) -> Result<Self> {
        for (j, t) in tables.iter().enumerate() {
            if t.iter().any(|&(i, k, _)| (i + k) as usize != j) {
                return Err(Error::Config(format!("monomial of wrong degree in Q_{j}")));
            }
        }
        Ok(Self {
            g: [0.0; 5],
            delta: [0.0; 5],
            c: [0.0; 5],
            tables,
        })
    }

    pub fn g(&self) -> &[f64; 5] {
        &self.g
    }

    pub fn delta(&self) -> &[f64; 5] {
        &self.delta
    }

    pub fn c(&self) -> &[f64; 5] {
        &self.c
    }

    pub fn table(&self, j: usize) -> Result<&[(u32, u32, f64)]> {
        self.tables.get(j).map(Vec::as_slice).ok_or(Error::Unsupported {
            what: "Q index",
            index: j,
            max: 4,
        })
    }

    /// Q_j(x, y).
    pub fn q_poly(&self, j: usize, x: f64, y: f64) -> Result<f64> {
        Ok(self
            .table(j)?
            .iter()
            .map(|&(i, k, c)| c * x.powi(i as i32) * y.powi(k as i32))
            .sum())
    }

    /// Σ_j Q_j(x, y).
    pub fn total(&self, x: f64, y: f64) -> f64 {
        (0..5).map(|j| self.q_poly(j, x, y).expect("j <= 4")).sum()
    }

    /// Q₀(x,y)…Q₄(x,y).
    pub fn by_degree(&self, x: f64, y: f64) -> [f64; 5] {
        std::array::from_fn(|j| self.q_poly(j, x, y).expect("j <= 4"))
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Dump<'a> {
            g: &'a [f64; 5],
            delta: &'a [f64; 5],
            c: &'a [f64; 5],
            polynomials: BTreeMap<String, BTreeMap<String, f64>>,
        }
        let polynomials = self
            .tables
            .iter()
            .enumerate()
            .map(|(j, t)| {
                let m = t.iter().map(|&(i, k, c)| (format!("{i},{k}"), c)).collect();
                (format!("Q{j}"), m)
            })
            .collect();
        serde_json::to_value(Dump {
            g: &self.g,
            delta: &self.delta,
            c: &self.c,
            polynomials,
        })
        .expect("plain data serializes")
    }
}

fn theorem_tables(g: &[f64; 5], d: &[f64; 5], c: &[f64; 5]) -> [Vec<(u32, u32, f64)>; 5] {
    let [_, g1, g2, g3, g4] = *g;
    let [d0, d1, d2, d3, d4] = *d;
    let [_, c1, c2, c3, c4] = *c;

    let q4 = [-1.0, 8.0, -24.0, 32.0, -14.0]
        .iter()
        .enumerate()
        .map(|(k, &w)| (4 - k as u32, k as u32, d0 / 24.0 * w))
        .collect();

    let q3 = vec![
        (3, 0, 2.0 * d0 * g1 / 3.0 + d1 / 3.0 - c1 * d0 / 6.0),
        (2, 1, -4.0 * d0 * g1 - 2.0 * d1 + c1 * d0),
        (1, 2, 8.0 * d0 * g1 + 4.0 * d1 - 2.0 * c1 * d0),
        (0, 3, -4.0 * d0 * g1 - 2.0 * d1 + 4.0 * c1 * d0 / 3.0),
    ];

    let q2 = vec![
        (
            2,
            0,
            -2.0 * d0 * g2 - 3.0 * d0 * g1 * g1 - 4.0 * d1 * g1 - 2.0 * d2
                + 2.0 * c1 * d0 * g1
                + c1 * d1
                - c2 * d0 / 2.0,
        ),
        (
            1,
            1,
            8.0 * d0 * g2 + 12.0 * d0 * g1 * g1 + 16.0 * d1 * g1 + 8.0 * d2
                - 8.0 * c1 * d0 * g1
                - 4.0 * c1 * d1
                + 2.0 * c2 * d0,
        ),
        (
            0,
            2,
            -5.0 * d0 * g1 * g1 - 4.0 * d2 - 6.0 * d0 * g2 - 8.0 * d1 * g1
                + 8.0 * c1 * d0 * g1
                + 4.0 * c1 * d1
                - 2.0 * c2 * d0,
        ),
    ];

    let q1 = vec![
        (
            1,
            0,
            4.0 * d0 * g3
                + 12.0 * d0 * g1 * g2
                + 4.0 * d0 * g1.powi(3)
                + 8.0 * d1 * g2
                + 12.0 * d1 * g1 * g1
                + 16.0 * d2 * g1
                + 8.0 * d3
                - 4.0 * c1 * d0 * g2
                - 6.0 * c1 * d0 * g1 * g1
                - 8.0 * c1 * d1 * g1
                - 4.0 * c1 * d2
                + 4.0 * c2 * d0 * g1
                + 2.0 * c2 * d1
                - c3 * d0,
        ),
        (
            0,
            1,
            -12.0 * d0 * g3 - 4.0 * d0 * g1 * g2 - 8.0 * d1 * g2
                + 4.0 * d1 * g1 * g1
                + 4.0 * d0 * g1.powi(3)
                + 8.0 * c1 * d0 * g2
                + 12.0 * c1 * d0 * g1 * g1
                + 16.0 * c1 * d1 * g1
                + 8.0 * c1 * d2
                - 8.0 * c2 * d0 * g1
                - 4.0 * c2 * d1
                + 2.0 * c3 * d0,
        ),
    ];

    let q0 = vec![(
        0,
        0,
        16.0 * d4 - 16.0 * d1 * g3 + 32.0 * d3 * g1 + 32.0 * g1 * g1 * d2 - 24.0 * d0 * g4
            + 8.0 * g2 * g2 * d0
            + 5.0 * d0 * g1.powi(4)
            + 16.0 * d1 * g1.powi(3)
            - 8.0 * d0 * g1 * g3
            + 16.0 * d1 * g1 * g2
            + 12.0 * d0 * g1 * g1 * g2
            + 12.0 * g1 * g1 * d1 * c1
            + 12.0 * d0 * g1 * g2 * c1
            + 8.0 * d3 * c1
            + 4.0 * d0 * g1.powi(3) * c1
            + 4.0 * d0 * g3 * c1
            + 8.0 * d1 * g2 * c1
            + 16.0 * g1 * d2 * c1
            - 4.0 * d2 * c2
            - 6.0 * g1 * g1 * d0 * c2
            - 4.0 * d0 * g2 * c2
            - 8.0 * g1 * d1 * c2
            + 4.0 * g1 * d0 * c3
            + 2.0 * d1 * c3
            - d0 * c4,
    )];

    [q0, q1, q2, q3, q4]
}

/// Q_j(x, y) for j ≤ 3 written in γ_i, ζ^{(i)}(2), π and c₁..c₄.
pub fn q_poly_gamma_form(ctx: &ZetaContext, j: usize, x: f64, y: f64, c: &[f64]) -> Result<f64> {
    if j > 3 {
        return Err(Error::Unsupported {
            what: "gamma-form Q index",
            index: j,
            max: 3,
        });
    }
    if c.len() < 5 {
        return Err(Error::InsufficientOrder {
            have: c.len().saturating_sub(1),
            need: 4,
        });
    }
    let ga = ctx.stieltjes(0)?;
    let ga1 = ctx.stieltjes(1)?;
    let ga2 = ctx.stieltjes(2)?;
    let ga3 = ctx.stieltjes(3)?;
    let z1 = ctx.zeta_deriv(1, 2.0)?;
    let z2 = ctx.zeta_deriv(2, 2.0)?;
    let z3 = ctx.zeta_deriv(3, 2.0)?;
    let z4 = ctx.zeta_deriv(4, 2.0)?;
    let (c1, c2, c3, c4) = (c[1], c[2], c[3], c[4]);
    let p2 = PI.powi(2);
    let p4 = PI.powi(4);
    let p6 = PI.powi(6);
    let p8 = PI.powi(8);
    let p10 = PI.powi(10);
    let a = 216.0 * z1 * z1 / p6 - 18.0 * z2 / p4;
    let b = -1296.0 * z1.powi(3) / p8 + 216.0 * z1 * z2 / p6 - 6.0 * z3 / p4;
    let v = match j {
        3 => {
            (4.0 * ga / p2 - 12.0 * z1 / p4 - c1 / p2) * x.powi(3)
                + (6.0 * c1 / p2 - 24.0 * ga / p2 + 72.0 * z1 / p4) * x * x * y
                + (-12.0 * c1 / p2 + 48.0 * ga / p2 - 144.0 * z1 / p4) * x * y * y
                + (-24.0 * ga / p2 + 72.0 * z1 / p4 + 8.0 * c1 / p2) * y.powi(3)
        }
        2 => {
            (12.0 * ga1 / p2 - 18.0 * ga * ga / p2 + 144.0 * z1 * ga / p4 - 432.0 * z1 * z1 / p6
                + 36.0 * z2 / p4
                + 12.0 * c1 * ga / p2
                - 36.0 * z1 * c1 / p4
                - 3.0 * c2 / p2)
                * x
                * x
                + (-48.0 * c1 * ga / p2 + 72.0 * ga * ga / p2 + 144.0 * z1 * c1 / p4 + 12.0 * c2 / p2
                    - 48.0 * ga1 / p2
                    - 576.0 * z1 * ga / p4
                    + 1728.0 * z1 * z1 / p6
                    - 144.0 * z2 / p4)
                    * x
                    * y
                + (48.0 * c1 * ga / p2 - 30.0 * ga * ga / p2 - 144.0 * z1 * c1 / p4 - 12.0 * c2 / p2
                    + 36.0 * ga1 / p2
                    + 288.0 * z1 * ga / p4
                    - 864.0 * z1 * z1 / p6
                    + 72.0 * z2 / p4)
                    * y
                    * y
        }
        1 => {
            (-36.0 * c1 * ga * ga / p2 + 24.0 * ga.powi(3) / p2 + 24.0 * c1 * ga1 / p2
                + 288.0 * c1 * z1 * ga / p4
                + 24.0 * c2 * ga / p2
                - 72.0 * ga * ga1 / p2
                - 432.0 * z1 * ga * ga / p4
                - 4.0 * c1 * a
                - 72.0 * c2 * z1 / p4
                - 6.0 * c3 / p2
                + 12.0 * ga2 / p2
                + 288.0 * z1 * ga1 / p4
                + 16.0 * a * ga
                - 10368.0 * z1.powi(3) / p8
                + 1728.0 * z1 * z2 / p6
                - 48.0 * z3 / p4)
                * x
                + (72.0 * c1 * ga * ga / p2 + 24.0 * ga.powi(3) / p2
                    - 48.0 * c1 * ga1 / p2
                    - 576.0 * c1 * z1 * ga / p4
                    - 48.0 * c2 * ga / p2
                    + 24.0 * ga * ga1 / p2
                    - 144.0 * z1 * ga * ga / p4
                    + 8.0 * c1 * a
                    + 144.0 * c2 * z1 / p4
                    + 12.0 * c3 / p2
                    - 36.0 * ga2 / p2
                    - 288.0 * z1 * ga1 / p4)
                    * y
        }
        _ => {
            -31104.0 * z1 * z1 * z2 / p8 + 1152.0 * z1 * z3 / p6 - 72.0 * z1 * c3 / p4 - 6.0 * c4 / p2
                + 8.0 * b * c1
                - 4.0 * a * c2
                - 24.0 * z4 / p4
                + 864.0 * z2 * z2 / p6
                + 124416.0 * z1.powi(4) / p10
                + 24.0 * ga3 / p2
                + 30.0 * ga.powi(4) / p2
                + 48.0 * ga1 * ga1 / p2
                + 24.0 * ga1 * c2 / p2
                - 36.0 * ga * ga * c2 / p2
                - 72.0 * ga * ga * ga1 / p2
                + 32.0 * b * ga
                + 32.0 * ga * ga * a
                + 16.0 * ga * a * c1
                + 288.0 * z1 * ga2 / p4
                + 12.0 * ga2 * c1 / p2
                + 24.0 * ga * c3 / p2
                + 24.0 * ga.powi(3) * c1 / p2
                - 24.0 * ga * ga2 / p2
                - 576.0 * z1 * ga.powi(3) / p4
                + 288.0 * z1 * ga1 * c1 / p4
                + 288.0 * ga * z1 * c2 / p4
                + 576.0 * z1 * ga * ga1 / p4
                - 72.0 * ga * ga1 * c1 / p2
                - 432.0 * ga * ga * z1 * c1 / p4
        }
    };
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::super::conrey_gonek::w_k;
    use super::*;
    use rand::{Rng, SeedableRng};

    fn set() -> (ZetaContext, SmoothingKernel, QPolynomialSet) {
        let ctx = ZetaContext::new();
        let kernel = SmoothingKernel::new(0.25).unwrap();
        let q = QPolynomialSet::from_context(&ctx, &kernel);
        (ctx, kernel, q)
    }

    #[test]
    fn degrees_match_slots() {
        let (_, _, q) = set();
        for j in 0..5 {
            for &(i, k, _) in q.table(j).unwrap() {
                assert_eq!((i + k) as usize, j);
            }
        }
        assert!(q.q_poly(5, 1.0, 1.0).is_err());
    }

    #[test]
    fn q4_at_one() {
        let (_, _, q) = set();
        let v = q.q_poly(4, 1.0, 1.0).unwrap();
        assert!((v - 6.0 / (PI * PI) / 24.0).abs() < 1e-14);
        assert!((v - 0.025_330_295_910_584_444).abs() < 1e-12);
    }

    #[test]
    fn q4_reduces_to_w2() {
        let (_, _, q) = set();
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let zeta2 = PI * PI / 6.0;
        for _ in 0..50 {
            let x: f64 = rng.gen_range(-3.0..3.0);
            let y: f64 = rng.gen_range(0.5..4.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let lhs = 24.0 * zeta2 * q.q_poly(4, x * y, y).unwrap() / y.powi(4);
            let rhs = w_k(2, x).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn q3_literal_with_zero_c1() {
        let (ctx, _, _) = set();
        let g: [f64; 5] = std::array::from_fn(|j| ctx.g_coeff(j).unwrap());
        let d: [f64; 5] = std::array::from_fn(|j| ctx.delta_coeff(j).unwrap());
        let q = QPolynomialSet::new(g, d, [1.0, 0.0, 0.0, 0.0, 0.0]);
        let (x, y): (f64, f64) = (2.3, 1.7);
        let (d0, d1, g1) = (d[0], d[1], g[1]);
        let literal = (2.0 * d0 * g1 / 3.0 + d1 / 3.0) * x.powi(3)
            + (-4.0 * d0 * g1 - 2.0 * d1) * x * x * y
            + (8.0 * d0 * g1 + 4.0 * d1) * x * y * y
            + (-4.0 * d0 * g1 - 2.0 * d1) * y.powi(3);
        assert!((q.q_poly(3, x, y).unwrap() - literal).abs() < 1e-13);
    }

    #[test]
    fn gamma_form_agrees() {
        let (ctx, kernel, q) = set();
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for j in 0..4 {
            for _ in 0..20 {
                let x: f64 = rng.gen_range(1.0..10.0);
                let y: f64 = rng.gen_range(1.0..10.0);
                let a = q_poly_gamma_form(&ctx, j, x, y, kernel.c_coeffs()).unwrap();
                let b = q.q_poly(j, x, y).unwrap();
                assert!((a - b).abs() <= 1e-10 * b.abs().max(1e-300), "j={j}: {a} vs {b}");
            }
        }
        assert!(q_poly_gamma_form(&ctx, 4, 1.0, 1.0, kernel.c_coeffs()).is_err());
    }

    #[test]
    fn gamma_form_leading_coefficient() {
        let (ctx, kernel, _) = set();
        let c1 = kernel.c_coeff(1).unwrap();
        let lead = q_poly_gamma_form(&ctx, 3, 1.0, 0.0, kernel.c_coeffs()).unwrap();
        let expect = 4.0 * ctx.stieltjes(0).unwrap() / (PI * PI)
            - 12.0 * ctx.zeta_deriv(1, 2.0).unwrap() / PI.powi(4)
            - c1 / (PI * PI);
        assert!((lead - expect).abs() < 1e-14);
    }

    #[test]
    fn json_dump_is_stable() {
        let (_, _, q) = set();
        let a = q.to_json().to_string();
        let b = q.to_json().to_string();
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["polynomials"]["Q4"].as_object().unwrap().len(), 5);
        assert!(v["polynomials"]["Q4"]["4,0"].as_f64().unwrap() < 0.0);
    }

    #[test]
    fn custom_tables() {
        let bad = QPolynomialSet::from_tables([vec![(1, 0, 1.0)], vec![], vec![], vec![], vec![]]);
        assert!(bad.is_err());
        let one = QPolynomialSet::from_tables([vec![(0, 0, 1.0)], vec![], vec![], vec![], vec![]])
            .unwrap();
        assert_eq!(one.total(3.0, 4.0), 1.0);
    }
}
