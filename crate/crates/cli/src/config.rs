//! Flat `key = value` configuration with command-line overrides.

use std::path::PathBuf;
use std::str::FromStr;

use divisor_moments::arithmetic::ShiftSet;

use crate::CliError;

/// Keys accepted in a config file, with their defaults, in `--help` order.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("T", "4000", "time scale; the window sits on [c1 T, c2 T]"),
    ("eta", "0.2", "length exponent, K = T^(1+eta)"),
    ("mu", "0.25", "smoothing width of the cutoff phi"),
    ("T0", "T/4", "window ramp width"),
    ("c1", "1", "left window edge in units of T"),
    ("c2", "2", "right window edge in units of T"),
    ("oversample", "8", "quadrature nodes per oscillation scale 2 pi / log K"),
    ("moment_tol", "1e-3", "allowed node-doubling change of the moment quadrature"),
    ("incremental", "false", "incremental phase updates in the moment oracle"),
    ("prime_cutoff", "1000000", "primes kept in the a_2 Euler product"),
    ("q_cutoff", "10000", "q-series cutoff of the additive main term"),
    ("X", "1000000", "additive box scale in m"),
    ("Y", "X", "additive box scale in n"),
    ("r", "1,2,3,12", "additive shifts r"),
    ("I", "0.04,0", "shift set on m"),
    ("J", "0.03,0", "shift set on n"),
    ("profile", "smooth", "additive profile: smooth or box"),
    ("ad_tol", "0.1", "allowed relative deviation of the additive comparison"),
    ("seed", "1", "seed for the random evaluation points of verify"),
    ("sweep", "", "comma-separated T list for moment sweeps"),
    ("out", "", "write reports to this file instead of stdout"),
    ("dump_nodes", "", "CSV file for per-node moment values"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdProfile {
    Smooth,
    Box,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub t: f64,
    pub eta: f64,
    pub mu: f64,
    /// None means T/4.
    pub t0: Option<f64>,
    pub c1: f64,
    pub c2: f64,
    pub oversample: usize,
    pub moment_tol: f64,
    pub incremental: bool,
    pub prime_cutoff: u64,
    pub q_cutoff: u64,
    pub x: f64,
    /// None means X.
    pub y: Option<f64>,
    pub r: Vec<i64>,
    pub i: ShiftSet,
    pub j: ShiftSet,
    pub profile: AdProfile,
    pub ad_tol: f64,
    pub seed: u64,
    pub sweep: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    pub dump_nodes: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            t: 4000.0,
            eta: 0.2,
            mu: 0.25,
            t0: None,
            c1: 1.0,
            c2: 2.0,
            oversample: 8,
            moment_tol: 1e-3,
            incremental: false,
            prime_cutoff: 1_000_000,
            q_cutoff: 10_000,
            x: 1e6,
            y: None,
            r: vec![1, 2, 3, 12],
            i: ShiftSet::real(&[0.04, 0.0]).expect("valid default"),
            j: ShiftSet::real(&[0.03, 0.0]).expect("valid default"),
            profile: AdProfile::Smooth,
            ad_tol: 0.1,
            seed: 1,
            sweep: None,
            out: None,
            dump_nodes: None,
        }
    }
}

fn bad(key: &str, value: &str, why: &str) -> CliError {
    CliError::Config(format!("{key} = {value:?}: {why}"))
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.trim().parse().map_err(|_| bad(key, value, "not a number"))
}

fn positive(key: &str, value: &str) -> Result<f64, CliError> {
    let v: f64 = number(key, value)?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(bad(key, value, "must be positive and finite"))
    }
}

fn path(value: &str) -> Option<PathBuf> {
    let v = value.trim();
    (!v.is_empty()).then(|| PathBuf::from(v))
}

/// Parses a comma-separated list of T values.
pub fn parse_sweep(text: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let v = positive("sweep", part)?;
        if v <= 1.0 {
            return Err(bad("sweep", part, "T must exceed 1"));
        }
        out.push(v);
    }
    if out.len() > 64 {
        return Err(bad("sweep", text, "at most 64 entries"));
    }
    Ok(out)
}

fn parse_r_list(text: &str) -> Result<Vec<i64>, CliError> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let v: i64 = number("r", part)?;
        if v == 0 {
            return Err(bad("r", part, "r must be nonzero"));
        }
        out.push(v);
    }
    Ok(out)
}

impl Config {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let v = value.trim();
        match key.trim() {
            "T" => self.t = positive("T", v)?,
            "eta" => self.eta = number("eta", v)?,
            "mu" => self.mu = number("mu", v)?,
            "T0" => self.t0 = Some(positive("T0", v)?),
            "c1" => self.c1 = positive("c1", v)?,
            "c2" => self.c2 = positive("c2", v)?,
            "oversample" => self.oversample = number("oversample", v)?,
            "moment_tol" => self.moment_tol = positive("moment_tol", v)?,
            "incremental" => {
                self.incremental = v.parse().map_err(|_| bad("incremental", v, "expected true or false"))?
            }
            "prime_cutoff" => self.prime_cutoff = number("prime_cutoff", v)?,
            "q_cutoff" => self.q_cutoff = number("q_cutoff", v)?,
            "X" => self.x = positive("X", v)?,
            "Y" => self.y = Some(positive("Y", v)?),
            "r" => self.r = parse_r_list(v)?,
            "I" => self.i = v.parse().map_err(|e| bad("I", v, &format!("{e}")))?,
            "J" => self.j = v.parse().map_err(|e| bad("J", v, &format!("{e}")))?,
            "profile" => {
                self.profile = match v {
                    "smooth" => AdProfile::Smooth,
                    "box" => AdProfile::Box,
                    _ => return Err(bad("profile", v, "expected smooth or box")),
                }
            }
            "ad_tol" => self.ad_tol = positive("ad_tol", v)?,
            "seed" => self.seed = number("seed", v)?,
            "sweep" => self.sweep = if v.is_empty() { None } else { Some(parse_sweep(v)?) },
            "out" => self.out = path(v),
            "dump_nodes" => self.dump_nodes = path(v),
            other => return Err(CliError::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Applies a config file body on top of `self`. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Config(format!("line {}: expected key = value", n + 1)));
            };
            self.set(k, v).map_err(|e| match e {
                CliError::Config(m) => CliError::Config(format!("line {}: {m}", n + 1)),
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut c = Self::default();
        c.apply_text(text)?;
        c.validate()?;
        Ok(c)
    }

    /// Range checks that involve more than one key.
    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |m: String| Err(CliError::Config(m));
        if !(self.t > 1.0) {
            return fail(format!("T = {} must exceed 1", self.t));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return fail(format!("eta = {} must lie in (0, 1)", self.eta));
        }
        if !(self.mu > 0.0 && self.mu <= 1.0) {
            return fail(format!("mu = {} must lie in (0, 1]", self.mu));
        }
        if self.c2 <= self.c1 {
            return fail(format!("c2 = {} must exceed c1 = {}", self.c2, self.c1));
        }
        if self.oversample < 4 {
            return fail(format!("oversample = {} must be at least 4", self.oversample));
        }
        if self.prime_cutoff < 2 {
            return fail("prime_cutoff must be at least 2".into());
        }
        if !(10..=10_000_000).contains(&self.q_cutoff) {
            return fail(format!("q_cutoff = {} must lie in [10, 1e7]", self.q_cutoff));
        }
        if self.x < 1.0 || self.y() < 1.0 {
            return fail("X and Y must be at least 1".into());
        }
        Ok(())
    }

    pub fn t0_for(&self, t: f64) -> f64 {
        self.t0.unwrap_or(t / 4.0)
    }

    pub fn y(&self) -> f64 {
        self.y.unwrap_or(self.x)
    }

    /// T values a moment run covers.
    pub fn moment_ts(&self) -> Vec<f64> {
        self.sweep.clone().unwrap_or_else(|| vec![self.t])
    }
}
