//! Shift multisets and the shifted divisor function σ_I.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::sieve::factorize;
use crate::error::{domain, Error, Result};

/// Largest |Re(a)| accepted in a shift set.
pub const MAX_SHIFT_RE: f64 = 0.6;

/// Ordered multiset (a₁, …, a_k) of complex shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSet {
    shifts: Vec<Complex64>,
}

impl ShiftSet {
    pub fn new(shifts: Vec<Complex64>) -> Result<Self> {
        if shifts.is_empty() {
            return Err(Error::InvalidShifts("empty shift set".into()));
        }
        for a in &shifts {
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::InvalidShifts(format!("non-finite shift {a}")));
            }
            if a.re.abs() > MAX_SHIFT_RE {
                return Err(Error::InvalidShifts(format!(
                    "shift {a} has |Re| above {MAX_SHIFT_RE}"
                )));
            }
        }
        Ok(Self { shifts })
    }

    pub fn real(shifts: &[f64]) -> Result<Self> {
        Self::new(shifts.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// k copies of 0.
    pub fn zeros(k: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); k])
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    pub fn shifts(&self) -> &[Complex64] {
        &self.shifts
    }

    /// Every shift translated by ξ.
    pub fn translated(&self, xi: Complex64) -> Result<Self> {
        Self::new(self.shifts.iter().map(|&a| a + xi).collect())
    }

    pub fn conj(&self) -> Self {
        Self {
            shifts: self.shifts.iter().map(|a| a.conj()).collect(),
        }
    }

    pub fn min_re(&self) -> f64 {
        self.shifts.iter().map(|a| a.re).fold(f64::INFINITY, f64::min)
    }
}

impl fmt::Display for ShiftSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.shifts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if a.im == 0.0 {
                write!(f, "{}", a.re)?;
            } else if a.im > 0.0 {
                write!(f, "{}+{}i", a.re, a.im)?;
            } else {
                write!(f, "{}-{}i", a.re, -a.im)?;
            }
        }
        Ok(())
    }
}

/// Parses one shift: `x`, `yi`, `x+yi` or `x-yi`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let t = text.trim();
    let bad = || Error::InvalidShifts(format!("cannot parse shift {t:?}"));
    let num = |s: &str| -> Result<f64> {
        let v: f64 = s.trim().parse().map_err(|_| bad())?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(num(t)?, 0.0));
    };
    // Split at the last sign that is not a leading sign or an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| {
        (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E')
    });
    match split {
        Some(k) => {
            let im_text = &body[k..];
            let im = if im_text == "+" || im_text == "-" {
                return Err(bad());
            } else {
                num(im_text)?
            };
            Ok(Complex64::new(num(&body[..k])?, im))
        }
        None => Ok(Complex64::new(0.0, num(body)?)),
    }
}

impl FromStr for ShiftSet {
    type Err = Error;

    /// Comma-separated shifts, e.g. `0.04,0` or `0.1+0.2i, -0.3i`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        let mut shifts = Vec::with_capacity(parts.len());
        for p in parts {
            if p.trim().is_empty() {
                return Err(Error::InvalidShifts(format!("empty entry in {s:?}")));
            }
            shifts.push(parse_complex(p)?);
        }
        Self::new(shifts)
    }
}

/// Streams the coefficients h_m of Π_i (1 − u_i x)^{−1}.
#[derive(Debug, Clone)]
pub(crate) struct LocalCoeffs {
    u: Vec<Complex64>,
    prev: Vec<Complex64>,
    started: bool,
}

impl LocalCoeffs {
    pub(crate) fn new(u: Vec<Complex64>) -> Self {
        let k = u.len();
        Self {
            u,
            prev: vec![Complex64::new(0.0, 0.0); k],
            started: false,
        }
    }
}

impl Iterator for LocalCoeffs {
    type Item = Complex64;

    fn next(&mut self) -> Option<Complex64> {
        // c^{(i)}_m = u_i c^{(i)}_{m−1} + c^{(i−1)}_m, c^{(0)}_m = [m = 0].
        let mut below = if self.started {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.started = true;
        for (ui, pi) in self.u.iter().zip(self.prev.iter_mut()) {
            let v = *ui * *pi + below;
            *pi = v;
            below = v;
        }
        Some(below)
    }
}

/// p^{−a} for each shift.
pub(crate) fn local_units(set: &ShiftSet, p: u64) -> Vec<Complex64> {
    let lp = (p as f64).ln();
    set.shifts().iter().map(|&a| (-a * lp).exp()).collect()
}

/// σ_I(n) = Σ_{d₁⋯d_k=n} d₁^{−a₁}⋯d_k^{−a_k}.
pub fn sigma_shifted(set: &ShiftSet, n: u64) -> Result<Complex64> {
    if n == 0 {
        return Err(domain("n", n, "n >= 1"));
    }
    let mut acc = Complex64::new(1.0, 0.0);
    for (p, e) in factorize(n) {
        let h = LocalCoeffs::new(local_units(set, p))
            .nth(e as usize)
            .expect("infinite iterator");
        acc *= h;
    }
    Ok(acc)
}

/// σ_I(n) for 0 ≤ n ≤ N (entry 0 is zero) by iterated Dirichlet convolution.
pub fn sigma_table(set: &ShiftSet, n: u64) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Err(domain("N", n, "N >= 1"));
    }
    if n > 50_000_000 {
        return Err(Error::Capacity("sigma_table size"));
    }
    let n = n as usize;
    let zero = Complex64::new(0.0, 0.0);
    let logs: Vec<f64> = (0..=n).map(|d| if d == 0 { 0.0 } else { (d as f64).ln() }).collect();
    let mut cur = vec![zero; n + 1];
    cur[1] = Complex64::new(1.0, 0.0);
    for &a in set.shifts() {
        let pw: Vec<Complex64> = logs.iter().map(|&l| (-a * l).exp()).collect();
        let mut next = vec![zero; n + 1];
        for m in 1..=n {
            let v = cur[m];
            if v == zero {
                continue;
            }
            let mut d = 1;
            while m * d <= n {
                next[m * d] += v * pw[d];
                d += 1;
            }
        }
        cur = next;
    }
    Ok(cur)
}
