//! Shifted residue expressions R₁, R₁′, R₂ and their κ-form sum.
//!
//! Everything is written once against [`ResidueKit`], so the same formulas
//! run on the zeta-backed functions in `Complex64` and on truncated Taylor
//! polynomials in double-double (used for the limit a, b → 0).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::scalar::{Dd, Scalar};
use crate::smoothing::SmoothingKernel;
use crate::zeta::ZetaContext;

/// Largest admissible |a|, |b|.
pub const MAX_SHIFT: f64 = 0.05;
/// Smallest admissible |a|, |b|, |a ± b|.
pub const POLE_GUARD: f64 = 1e-8;

/// The pair of shifts with I = {a, 0}, J = {b, 0}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftPair<S = Complex64> {
    a: S,
    b: S,
}

impl<S: Scalar> ShiftPair<S> {
    pub fn new(a: S, b: S) -> Result<Self> {
        for (what, v) in [("|a|", a), ("|b|", b)] {
            let m = v.magnitude();
            if !m.is_finite() || m > MAX_SHIFT {
                return Err(domain(what, m, "|shift| <= 0.05"));
            }
        }
        for (what, v) in [("|a|", a), ("|b|", b), ("|a+b|", a + b), ("|a-b|", a - b)] {
            let m = v.magnitude();
            if m < POLE_GUARD {
                return Err(Error::PoleProximity {
                    what,
                    value: m,
                    guard: POLE_GUARD,
                });
            }
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> S {
        self.a
    }

    pub fn b(&self) -> S {
        self.b
    }

    pub fn swapped(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
        }
    }
}

/// The entire functions and parameters the residue formulas are built from.
///
/// f(s) = sζ(1+s), F(s) = sf′(s) − f(s), h(s) = 1/ζ(2+s), H = h′, G the
/// smoothing transform, e1(s) = (t/2π)^s and e2(s) = K^s.
pub trait ResidueKit<S: Scalar> {
    fn f(&self, s: S) -> Result<S>;
    fn big_f(&self, s: S) -> Result<S>;
    fn h(&self, s: S) -> Result<S>;
    fn big_h(&self, s: S) -> Result<S>;
    fn big_g(&self, s: S) -> Result<S>;
    fn e1(&self, s: S) -> S;
    fn e2(&self, s: S) -> S;
    /// log K.
    fn y(&self) -> S;
    /// log(t/2π).
    fn l(&self) -> S;
    fn g1(&self) -> S;
    fn c1(&self) -> S;
}

fn check_scales(t: f64, k: f64) -> Result<(f64, f64)> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain("t", t, "t > 0"));
    }
    if !(k > 1.0 && k.is_finite()) {
        return Err(domain("K", k, "K > 1"));
    }
    Ok(((t / (2.0 * PI)).ln(), k.ln()))
}

/// ζ-backed functions in complex arithmetic.
pub struct DirectKit<'a> {
    ctx: &'a ZetaContext,
    kernel: &'a SmoothingKernel,
    y: f64,
    l: f64,
}

impl<'a> DirectKit<'a> {
    pub fn new(ctx: &'a ZetaContext, kernel: &'a SmoothingKernel, t: f64, k: f64) -> Result<Self> {
        let (l, y) = check_scales(t, k)?;
        Ok(Self { ctx, kernel, y, l })
    }
}

impl ResidueKit<Complex64> for DirectKit<'_> {
    fn f(&self, s: Complex64) -> Result<Complex64> {
        self.ctx.entire_f(s)
    }
    fn big_f(&self, s: Complex64) -> Result<Complex64> {
        self.ctx.entire_big_f(s)
    }
    fn h(&self, s: Complex64) -> Result<Complex64> {
        self.ctx.entire_h(s)
    }
    fn big_h(&self, s: Complex64) -> Result<Complex64> {
        self.ctx.entire_big_h(s)
    }
    fn big_g(&self, s: Complex64) -> Result<Complex64> {
        Ok(self.kernel.g_big(s))
    }
    fn e1(&self, s: Complex64) -> Complex64 {
        (s * self.l).exp()
    }
    fn e2(&self, s: Complex64) -> Complex64 {
        (s * self.y).exp()
    }
    fn y(&self) -> Complex64 {
        self.y.into()
    }
    fn l(&self) -> Complex64 {
        self.l.into()
    }
    fn g1(&self) -> Complex64 {
        self.ctx.g_coeffs()[1].into()
    }
    fn c1(&self) -> Complex64 {
        self.kernel.c_coeffs()[1].into()
    }
}

/// Truncated Taylor polynomials of f, F, h, H, G evaluated in any scalar.
#[derive(Debug, Clone)]
pub struct SeriesKit {
    f: Vec<f64>,
    big_f: Vec<f64>,
    h: Vec<f64>,
    big_h: Vec<f64>,
    big_g: Vec<f64>,
    y: f64,
    l: f64,
}

impl SeriesKit {
    pub fn new(ctx: &ZetaContext, kernel: &SmoothingKernel, t: f64, k: f64) -> Result<Self> {
        let (l, y) = check_scales(t, k)?;
        let g = ctx.g_coeffs();
        let d = ctx.delta_coeffs();
        Ok(Self {
            f: g.to_vec(),
            big_f: g.iter().enumerate().map(|(j, &v)| (j as f64 - 1.0) * v).collect(),
            h: d.to_vec(),
            big_h: (1..d.len()).map(|j| j as f64 * d[j]).collect(),
            big_g: kernel.c_coeffs().to_vec(),
            y,
            l,
        })
    }

    fn poly<S: Scalar>(c: &[f64], s: S) -> S {
        c.iter().rev().fold(S::from(0.0), |acc, &v| acc * s + S::from(v))
    }

    fn exp<S: Scalar>(x: S) -> S {
        let mut term = S::from(1.0);
        let mut acc = term;
        for n in 1..200 {
            term = term * x / S::from(n as f64);
            acc = acc + term;
            if term.magnitude() <= 1e-34 * acc.magnitude() {
                break;
            }
        }
        acc
    }
}

impl<S: Scalar> ResidueKit<S> for SeriesKit {
    fn f(&self, s: S) -> Result<S> {
        Ok(Self::poly(&self.f, s))
    }
    fn big_f(&self, s: S) -> Result<S> {
        Ok(Self::poly(&self.big_f, s))
    }
    fn h(&self, s: S) -> Result<S> {
        Ok(Self::poly(&self.h, s))
    }
    fn big_h(&self, s: S) -> Result<S> {
        Ok(Self::poly(&self.big_h, s))
    }
    fn big_g(&self, s: S) -> Result<S> {
        Ok(Self::poly(&self.big_g, s))
    }
    fn e1(&self, s: S) -> S {
        Self::exp(s * S::from(self.l))
    }
    fn e2(&self, s: S) -> S {
        Self::exp(s * S::from(self.y))
    }
    fn y(&self) -> S {
        self.y.into()
    }
    fn l(&self) -> S {
        self.l.into()
    }
    fn g1(&self) -> S {
        self.f[1].into()
    }
    fn c1(&self) -> S {
        self.big_g[1].into()
    }
}

fn two<S: Scalar>() -> S {
    S::from(2.0)
}

/// R₁(a, b), the residue at s = 0 of the M₀ integrand.
pub fn r1<S: Scalar, K: ResidueKit<S>>(kit: &K, p: &ShiftPair<S>) -> Result<S> {
    let (a, b) = (p.a, p.b);
    let q = |x: S| -> Result<S> { Ok(kit.f(x)? / x) };
    let dq = |x: S| -> Result<S> { Ok(kit.big_f(x)? / (x * x)) };
    let ab = a + b;
    let (qab, qa, qb) = (q(ab)?, q(a)?, q(b)?);
    let hab = kit.h(ab)?;
    let l0 = kit.y() + kit.c1() + kit.g1();
    Ok(l0 * qab * qa * qb * hab
        + two::<S>() * qab * qa * qb * kit.big_h(ab)?
        + (dq(ab)? * qa * qb + qab * dq(a)? * qb + qab * qa * dq(b)?) * hab)
}

/// R₁′(a, b), the residues at s = −a, −b, −a−b.
pub fn r1_prime<S: Scalar, K: ResidueKit<S>>(kit: &K, p: &ShiftPair<S>) -> Result<S> {
    let (a, b) = (p.a, p.b);
    let one_side = |a: S, b: S| -> Result<S> {
        Ok(kit.big_g(-a)? * kit.e2(-a) / (a * a) * kit.f(b)? / b * kit.f(b - a)? / (b - a)
            * kit.f(-a)?
            * kit.h(b - a)?)
    };
    let ab = a + b;
    let joint = kit.big_g(-ab)? * kit.e2(-ab) / (ab * ab) * kit.f(-b)? / b * kit.f(-a)? / a
        * kit.f(-ab)?
        * kit.h(-ab)?;
    Ok(one_side(a, b)? + one_side(b, a)? + joint)
}

/// The seven terms of R₂(a, b) in display order.
pub fn r2_terms<S: Scalar, K: ResidueKit<S>>(kit: &K, p: &ShiftPair<S>) -> Result<[S; 7]> {
    let (a, b) = (p.a, p.b);
    let ab = a + b;
    let x = kit.y() - kit.l();
    let lp = x + kit.g1() + kit.c1();
    let lpp = x - kit.g1() + kit.c1();
    let (fa, fb, fma, fmb) = (kit.f(a)?, kit.f(b)?, kit.f(-a)?, kit.f(-b)?);
    let t1 = -kit.e1(-ab) * kit.h(-ab)? * fma / a * fmb / b
        * (kit.big_f(-ab)? / (ab * ab) + kit.f(-ab)? / ab * lp);
    let t2 = kit.e1(-a) * kit.h(b - a)? * fma * fma / (a * a) * fb * fb / (b * b);
    let t3 = kit.e1(-b) * kit.h(a - b)? * fmb * fmb / (b * b) * fa * fa / (a * a);
    let t4 = -kit.h(ab)? * fa / a * fb / b * (kit.big_f(ab)? / (ab * ab) + kit.f(ab)? / ab * lpp);
    let t5 = kit.e2(-b) * kit.e1(b - a) * kit.h(b - a)? * kit.big_g(-b)? / b * kit.f(b - a)? / (b - a)
        * fma
        / a
        * fb
        / b;
    let t6 = kit.e2(-a) * kit.e1(a - b) * kit.h(a - b)? * kit.big_g(-a)? / a * kit.f(a - b)? / (a - b)
        * fa
        / a
        * fmb
        / b;
    let t7 = -kit.e2(-ab) * kit.e1(ab) * kit.h(ab)? * kit.big_g(-ab)? / ab * kit.f(ab)? / ab * fa / a
        * fb
        / b;
    Ok([t1, t2, t3, t4, t5, t6, t7])
}

/// R₂(a, b), the residues of the M₁ integrand after the contour shift.
pub fn r2<S: Scalar, K: ResidueKit<S>>(kit: &K, p: &ShiftPair<S>) -> Result<S> {
    Ok(r2_terms(kit, p)?.into_iter().fold(S::from(0.0), |acc, t| acc + t))
}

/// The κ-table entries, named after their subscripts.
#[derive(Debug, Clone, Copy)]
pub struct Kappas<S> {
    pub k11: S,
    pub k11_tilde: S,
    pub k12: S,
    pub k13: S,
    pub k14: S,
    pub k25: S,
    pub k25_tilde: S,
    pub k26: S,
    pub k27: S,
    pub k28: S,
    pub k28_tilde: S,
    pub k29: S,
    pub k210: S,
    pub k211: S,
}

pub fn kappas<S: Scalar, K: ResidueKit<S>>(kit: &K, p: &ShiftPair<S>) -> Result<Kappas<S>> {
    let (a, b) = (p.a, p.b);
    let ab = a + b;
    let (fa, fb, fma, fmb) = (kit.f(a)?, kit.f(b)?, kit.f(-a)?, kit.f(-b)?);
    let (fab, hab) = (kit.f(ab)?, kit.h(ab)?);
    let e_ab = kit.e1(-ab) * kit.h(-ab)? * fma * fmb;
    // κ₂₈ and κ̃₂₈ come from the M₁ side; they are recomputed rather than copied.
    let k28 = fb * fa * kit.big_f(ab)? * hab;
    let k28_tilde = fb * fa * kit.h(ab)? * kit.f(ab)?;
    Ok(Kappas {
        k11: fa * fb * fab * hab,
        k11_tilde: fa * fb * fab * kit.big_h(ab)?,
        k12: fa * fb * kit.big_f(ab)? * hab,
        k13: kit.big_f(a)? * fb * fab * hab,
        k14: fa * kit.big_f(b)? * fab * hab,
        k25: -e_ab * kit.big_f(-ab)?,
        k25_tilde: e_ab * kit.f(-ab)?,
        k26: kit.e1(-a) * kit.h(b - a)? * fma * fma * fb * fb,
        k27: kit.e1(-b) * kit.h(a - b)? * fa * fa * fmb * fmb,
        k28,
        k28_tilde,
        k29: kit.e2(-b) * kit.e1(b - a) * kit.h(b - a)? * kit.big_g(-b)? * fma * fb * kit.f(b - a)?,
        k210: kit.e2(-a) * kit.e1(a - b) * kit.h(a - b)? * kit.big_g(-a)? * fa * fmb * kit.f(a - b)?,
        k211: kit.e2(-ab) * kit.e1(ab) * hab * fa * fb * kit.big_g(-ab)? * fab,
    })
}

/// R(a, b) = R₁ + R₂ assembled from the κ-table.
pub fn r_total<S: Scalar, K: ResidueKit<S>>(kit: &K, p: &ShiftPair<S>) -> Result<S> {
    let (a, b) = (p.a, p.b);
    let ab = a + b;
    let k = kappas(kit, p)?;
    let x = kit.y() - kit.l();
    let lp = x + kit.g1() + kit.c1();
    let l_plus = kit.l() + two::<S>() * kit.g1();
    let body = l_plus * k.k11 / ab
        + two::<S>() * k.k11_tilde / ab
        + k.k13 / (a * ab)
        + k.k14 / (b * ab)
        + k.k25 / (ab * ab)
        - k.k25_tilde * lp / ab
        + k.k26 / (a * b)
        + k.k27 / (a * b)
        + k.k29 / (b * (b - a))
        + k.k210 / (a * (a - b))
        - k.k211 / (ab * ab);
    Ok(body / (a * b))
}

/// M₀ + M₁ (divided by ω̂(0)) written as (R₁ + R₁′) + (R₂ − R₁′) with R₁′ supplied.
pub fn assembled_total<S: Scalar>(r1: S, r1_prime: S, r2: S) -> S {
    (r1 + r1_prime) + (r2 - r1_prime)
}

/// Residue blocks R₁₁, R₁₂, R₂₁, R₂₂ and their ζ-product weights.
#[derive(Debug, Clone, Copy)]
pub struct ResidueBlocks<S> {
    pub r11: S,
    pub r12: S,
    pub r21: S,
    pub r22: S,
    pub c11: S,
    pub c12: S,
    pub c21: S,
    pub c22: S,
}

impl<S: Scalar> ResidueBlocks<S> {
    /// Σ c_ij R_ij, which equals R₂ − R₁′.
    pub fn weighted_sum(&self) -> S {
        self.c11 * self.r11 + self.c12 * self.r12 + self.c21 * self.r21 + self.c22 * self.r22
    }
}

/// The residue blocks in ζ-form: ζ(1+s) = f(s)/s, ζ′(1+s) = F(s)/s², 1/ζ(2+s) = h(s).
pub fn residue_blocks<S: Scalar, K: ResidueKit<S>>(kit: &K, p: &ShiftPair<S>) -> Result<ResidueBlocks<S>> {
    let (a, b) = (p.a, p.b);
    let ab = a + b;
    let zeta1 = |s: S| -> Result<S> { Ok(kit.f(s)? / s) };
    let dzeta1 = |s: S| -> Result<S> { Ok(kit.big_f(s)? / (s * s)) };
    let phi2 = |s: S| -> Result<S> { Ok(kit.big_g(s)? / s) };
    let x = kit.y() - kit.l();
    let lp = x + kit.g1() + kit.c1();
    let lpp = x - kit.g1() + kit.c1();

    let r11 = kit.e1(-ab) * kit.h(-ab)? * (-dzeta1(-ab)? + zeta1(-ab)? * lp)
        - phi2(-ab)? * kit.e2(-ab) * zeta1(-ab)? * kit.h(-ab)?;
    let r22 = -kit.h(ab)? * (dzeta1(ab)? + zeta1(ab)? * lpp)
        + phi2(-ab)? * kit.e2(-ab) * kit.e1(ab) * zeta1(ab)? * kit.h(ab)?;
    let cross = |a: S, b: S| -> Result<S> {
        let hba = kit.h(b - a)?;
        let fq = kit.f(b - a)? / (b - a);
        Ok(-kit.e1(-a) * hba * kit.f(-a)? / a * kit.f(b)? / b
            + kit.e2(-a) * hba * kit.big_g(-a)? / a * fq
            - kit.e2(-b) * kit.e1(b - a) * hba * kit.big_g(-b)? / b * fq)
    };
    Ok(ResidueBlocks {
        r11,
        r12: cross(a, b)?,
        r21: cross(b, a)?,
        r22,
        c11: zeta1(-a)? * zeta1(-b)?,
        c12: zeta1(-a)? * zeta1(b)?,
        c21: zeta1(a)? * zeta1(-b)?,
        c22: zeta1(a)? * zeta1(b)?,
    })
}

/// R(h, 2h) in double-double from the order-8 Taylor polynomials.
pub fn r_total_series(kit: &SeriesKit, h: f64) -> Result<f64> {
    let p = ShiftPair::new(Dd::from(h), Dd::from(2.0 * h))?;
    Ok(r_total(kit, &p)?.to_f64())
}

/// Richardson estimate of lim_{h→0} R(h, 2h): (10·R(h/10) − R(h))/9.
pub fn r_diag_limit(kit: &SeriesKit, h: f64) -> Result<f64> {
    let coarse = r_total_series(kit, h)?;
    let fine = r_total_series(kit, h / 10.0)?;
    Ok((10.0 * fine - coarse) / 9.0)
}
