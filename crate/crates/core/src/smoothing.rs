//! The cutoff φ, its Mellin transforms, the entire function G and its
//! Taylor coefficients c_j, and the time window ω with its Fourier transform.
//!
//! Both φ and ω use the step S(x) = ρ(x)/(ρ(x) + ρ(1−x)), ρ(x) = e^{−1/x}.
//! The window's support constants are called `support_c1`/`support_c2`; they
//! are unrelated to the coefficients returned by [`SmoothingKernel::c_coeff`].

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::quadrature::GaussLegendre;
use crate::zeta::MAX_TAYLOR;

/// Nodes per Gauss–Legendre panel.
pub const GL_NODES: usize = 64;

/// Smooth step: 0 for x ≤ 0, 1 for x ≥ 1.
pub fn step(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let arg = 1.0 / (1.0 - x) - 1.0 / x;
    if arg > 0.0 {
        1.0 / (1.0 + (-arg).exp())
    } else {
        let e = arg.exp();
        e / (1.0 + e)
    }
}

/// S′(x).
pub fn step_derivative(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    let arg = 1.0 / (1.0 - x) - 1.0 / x;
    let e = (-arg.abs()).exp();
    let core = e / ((1.0 + e) * (1.0 + e));
    core * (1.0 / (x * x) + 1.0 / ((1.0 - x) * (1.0 - x)))
}

/// The cutoff φ(t) = 1 − S((t−1)/μ) with precomputed quadrature data.
#[derive(Debug, Clone)]
pub struct SmoothingKernel {
    mu: f64,
    panels: usize,
    /// (log t, weight·(−2φφ′)(t)) on [1, 1+μ].
    g_nodes: Vec<(f64, f64)>,
    /// (log t, weight·φ(t)) on [1, 1+μ].
    phi_nodes: Vec<(f64, f64)>,
    c: [f64; MAX_TAYLOR + 1],
}

impl SmoothingKernel {
    /// Kernel with 8 panels of 64 nodes.
    pub fn new(mu: f64) -> Result<Self> {
        Self::with_panels(mu, 8)
    }

    pub fn with_panels(mu: f64, panels: usize) -> Result<Self> {
        if !(mu > 0.0 && mu < 0.5) {
            return Err(domain("mu", mu, "0 < mu < 1/2"));
        }
        if panels == 0 {
            return Err(domain("kernel panels", panels, ">= 1"));
        }
        let gl = GaussLegendre::new(GL_NODES);
        let mut g_nodes = Vec::new();
        let mut phi_nodes = Vec::new();
        // Work in x = (t−1)/μ: −2φφ′ dt = 2(1−S)S′ dx.
        for (x, w) in gl.mapped(0.0, 1.0, panels) {
            let t = 1.0 + mu * x;
            let s = step(x);
            g_nodes.push((t.ln(), w * 2.0 * (1.0 - s) * step_derivative(x)));
            phi_nodes.push((t.ln(), w * mu * (1.0 - s)));
        }
        let mut c = [0.0; MAX_TAYLOR + 1];
        let mut fact = 1.0;
        for (j, cj) in c.iter_mut().enumerate() {
            if j > 1 {
                fact *= j as f64;
            }
            *cj = g_nodes.iter().map(|&(l, w)| w * l.powi(j as i32)).sum::<f64>() / fact;
        }
        // G(0) = φ(1)² − φ(1+μ)² = 1; the residue limit needs it exactly.
        c[0] = 1.0;
        Ok(Self {
            mu,
            panels,
            g_nodes,
            phi_nodes,
            c,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn phi(&self, t: f64) -> f64 {
        1.0 - step((t - 1.0) / self.mu)
    }

    pub fn phi_prime(&self, t: f64) -> f64 {
        -step_derivative((t - 1.0) / self.mu) / self.mu
    }

    /// Φ(s) = 1/s + ∫₁^{1+μ} φ(t) t^{s−1} dt.
    pub fn mellin_phi(&self, s: Complex64) -> Result<Complex64> {
        if s.norm() == 0.0 {
            return Err(Error::Pole {
                what: "Phi(s) at s = 0".into(),
            });
        }
        let sm1 = s - 1.0;
        let body: Complex64 = self
            .phi_nodes
            .iter()
            .map(|&(l, w)| (sm1 * l).exp() * w)
            .sum();
        Ok(s.inv() + body)
    }

    /// G(s) = −2∫φφ′ t^s dt, entire.
    pub fn g_big(&self, s: Complex64) -> Complex64 {
        self.g_nodes.iter().map(|&(l, w)| (s * l).exp() * w).sum()
    }

    /// Φ₂(s) = G(s)/s.
    pub fn phi2_mellin(&self, s: Complex64) -> Result<Complex64> {
        if s.norm() == 0.0 {
            return Err(Error::Pole {
                what: "Phi_2(s) at s = 0".into(),
            });
        }
        Ok(self.g_big(s) / s)
    }

    /// Taylor coefficient c_j of G, j ≤ 8.
    pub fn c_coeff(&self, j: usize) -> Result<f64> {
        self.c.get(j).copied().ok_or(Error::Unsupported {
            what: "c coefficient",
            index: j,
            max: MAX_TAYLOR,
        })
    }

    pub fn c_coeffs(&self) -> &[f64] {
        &self.c
    }
}

/// A non-negative weight in t with known smoothness breakpoints.
pub trait TimeWeight {
    fn eval(&self, t: f64) -> f64;
    /// Points between which the weight is C∞, in increasing order. The
    /// weight vanishes outside the first and last.
    fn breakpoints(&self) -> Vec<f64>;
}

/// Indicator of [a, b].
#[derive(Debug, Clone, Copy)]
pub struct SharpWindow {
    pub a: f64,
    pub b: f64,
}

impl TimeWeight for SharpWindow {
    fn eval(&self, t: f64) -> f64 {
        if t >= self.a && t <= self.b {
            1.0
        } else {
            0.0
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        vec![self.a, self.b]
    }
}

/// Plateau window: rises on [e0, e1], equals 1 on [e1, e2], falls on [e2, e3].
#[derive(Debug, Clone)]
pub struct WeightWindow {
    edges: [f64; 4],
    t_scale: f64,
    t0: f64,
    support_c1: f64,
    support_c2: f64,
    /// The exponent ν with T₀ = T^ν, kept as metadata only.
    pub nu: Option<f64>,
}

impl WeightWindow {
    /// Transitions of width 2T₀ centred at c₁T and c₂T.
    pub fn new(t_scale: f64, t0: f64, support_c1: f64, support_c2: f64) -> Result<Self> {
        if !(t_scale > 0.0 && t_scale.is_finite()) {
            return Err(domain("T", t_scale, "T > 0"));
        }
        if !(t0 > 0.0) {
            return Err(domain("T0", t0, "T0 > 0"));
        }
        if !(support_c1 > 0.0 && support_c2 > support_c1) {
            return Err(domain("support constants", format!("c1={support_c1}, c2={support_c2}"), "0 < c1 < c2"));
        }
        let mut w = Self::from_edges([
            support_c1 * t_scale - t0,
            support_c1 * t_scale + t0,
            support_c2 * t_scale - t0,
            support_c2 * t_scale + t0,
        ])?;
        w.t_scale = t_scale;
        w.t0 = t0;
        w.support_c1 = support_c1;
        w.support_c2 = support_c2;
        Ok(w)
    }

    /// Window whose plateau contains [c₁T, c₂T] (upper sandwich).
    pub fn sandwich_upper(t_scale: f64, t0: f64, support_c1: f64, support_c2: f64) -> Result<Self> {
        Self::from_edges([
            support_c1 * t_scale - t0,
            support_c1 * t_scale,
            support_c2 * t_scale,
            support_c2 * t_scale + t0,
        ])
    }

    /// Window supported inside [c₁T, c₂T] (lower sandwich).
    pub fn sandwich_lower(t_scale: f64, t0: f64, support_c1: f64, support_c2: f64) -> Result<Self> {
        Self::from_edges([
            support_c1 * t_scale,
            support_c1 * t_scale + t0,
            support_c2 * t_scale - t0,
            support_c2 * t_scale,
        ])
    }

    pub fn from_edges(edges: [f64; 4]) -> Result<Self> {
        let ok = edges[0] > 0.0
            && edges[0] < edges[1]
            && edges[1] < edges[2]
            && edges[2] < edges[3]
            && edges.iter().all(|e| e.is_finite());
        if !ok {
            return Err(domain(
                "window edges",
                format!("{edges:?}"),
                "0 < rise start < rise end < fall start < fall end",
            ));
        }
        // Describe the window by its rise centre and half-width.
        let t_scale = 0.5 * (edges[0] + edges[1]);
        Ok(Self {
            edges,
            t_scale,
            t0: 0.5 * (edges[1] - edges[0]),
            support_c1: 1.0,
            support_c2: 0.5 * (edges[2] + edges[3]) / t_scale,
            nu: None,
        })
    }

    pub fn t_scale(&self) -> f64 {
        self.t_scale
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn support_c1(&self) -> f64 {
        self.support_c1
    }

    pub fn support_c2(&self) -> f64 {
        self.support_c2
    }

    pub fn edges(&self) -> [f64; 4] {
        self.edges
    }

    pub fn support(&self) -> (f64, f64) {
        (self.edges[0], self.edges[3])
    }

    pub fn omega(&self, t: f64) -> f64 {
        let [e0, e1, e2, e3] = self.edges;
        if t <= e0 || t >= e3 {
            0.0
        } else if t < e1 {
            step((t - e0) / (e1 - e0))
        } else if t <= e2 {
            1.0
        } else {
            1.0 - step((t - e2) / (e3 - e2))
        }
    }

    /// ω̂(u) = ∫ω(t)e^{−2πiut}dt: transitions by quadrature, plateau exactly.
    pub fn omega_hat(&self, u: f64) -> Complex64 {
        let [e0, e1, e2, e3] = self.edges;
        let k = -2.0 * std::f64::consts::PI * u;
        let plateau = if u == 0.0 {
            Complex64::new(e2 - e1, 0.0)
        } else {
            let ph = |t: f64| Complex64::from_polar(1.0, k * t);
            (ph(e2) - ph(e1)) / Complex64::new(0.0, k)
        };
        let gl = GaussLegendre::new(GL_NODES);
        let edge = |a: f64, b: f64, rising: bool| -> Complex64 {
            let panels = ((k.abs() * (b - a) / 20.0).ceil() as usize).max(2);
            gl.integrate(a, b, panels, |t| {
                let x = (t - a) / (b - a);
                let w = if rising { step(x) } else { 1.0 - step(x) };
                Complex64::from_polar(w, k * t)
            })
        };
        plateau + edge(e0, e1, true) + edge(e2, e3, false)
    }

    /// ω̂(0), the mass of the window.
    pub fn mass(&self) -> f64 {
        self.omega_hat(0.0).re
    }
}

impl TimeWeight for WeightWindow {
    fn eval(&self, t: f64) -> f64 {
        self.omega(t)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.edges.to_vec()
    }
}
