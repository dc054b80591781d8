use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use divisor_moments::main_term::{main_term_integral, QPolynomialSet, QuadParams};
use divisor_moments::oracle::{
    ad_main_term, ad_sum_bruteforce, ad_sum_integer, moment_numeric, write_node_csv, ADTestFunction,
    MomentExperiment, MomentOptions, Profile, ERROR_TERM_TRIPLE, WORK_BUDGET,
};
use divisor_moments::smoothing::{SmoothingKernel, WeightWindow};
use divisor_moments::zeta::ZetaContext;
use serde::Serialize;
use serde_json::json;

use crate::checks::{run_all, VerifyOptions};
use crate::config::{AdProfile, Config};
use crate::report::{AdRecord, Estimate, MomentParameters, MomentReport, Pair, TOOL, VERSION};
use crate::report::now;
use crate::CliError;

/// Relative growth allowed between consecutive sweep deviations.
pub const SWEEP_SLACK: f64 = 1.2;
const MAIN_TERM_TOL: f64 = 1e-10;
const DRIFT_TOL: f64 = 1e-10;

fn line<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<(), CliError> {
    serde_json::to_writer(&mut *out, v).map_err(|e| CliError::Io(e.into()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// Coefficient dump: g_j, δ_j, c_j, γ_j, ζ^(j)(2) and the Q tables.
pub fn coeffs(cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let ctx = ZetaContext::new();
    let kernel = SmoothingKernel::new(cfg.mu)?;
    let q = QPolynomialSet::from_context(&ctx, &kernel);
    let mut v = q.to_json();
    let map = v.as_object_mut().expect("object");
    let gamma = (0..5).map(|j| ctx.stieltjes(j)).collect::<Result<Vec<_>, _>>()?;
    let zd = (0..5).map(|j| ctx.zeta_deriv(j, 2.0)).collect::<Result<Vec<_>, _>>()?;
    map.insert("delta_0".into(), json!(q.delta()[0]));
    map.insert("stieltjes".into(), json!(gamma));
    map.insert("zeta_derivatives_at_2".into(), json!(zd));
    map.insert("mu".into(), json!(cfg.mu));
    map.insert("tool".into(), json!(TOOL));
    map.insert("version".into(), json!(VERSION));
    line(out, &v)
}

/// Runs the named checks, one line each. `delta1_shift` is the test hook.
pub fn verify(cfg: &Config, delta1_shift: f64, out: &mut dyn Write) -> Result<(), CliError> {
    let results = run_all(&VerifyOptions {
        seed: cfg.seed,
        mu: cfg.mu,
        delta1_shift,
    })?;
    for r in &results {
        writeln!(out, "{r}")?;
    }
    out.flush()?;
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(failed.join(", ")))
    }
}

fn node_path(base: &Path, t: f64, many: bool) -> PathBuf {
    if !many {
        return base.to_path_buf();
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("nodes");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    base.with_file_name(format!("{stem}-T{t}.{ext}"))
}

/// One report for a single T.
pub fn moment_report(cfg: &Config, t: f64, dump: Option<&Path>) -> Result<MomentReport, CliError> {
    let kernel = SmoothingKernel::new(cfg.mu)?;
    let window = WeightWindow::new(t, cfg.t0_for(t), cfg.c1, cfg.c2)?;
    let exp = MomentExperiment::new(t, cfg.eta, kernel.clone(), window.clone(), cfg.oversample)?;
    // Refuse before the divisor table is allocated.
    let work = exp.k() * exp.node_count() as f64;
    if work > WORK_BUDGET {
        return Err(CliError::Budget(format!(
            "budget refused: K x nodes = {work:.3e} exceeds {WORK_BUDGET:.0e}"
        )));
    }
    let table = exp.divisor_table()?;
    let opts = MomentOptions {
        rel_tol: f64::INFINITY,
        keep_nodes: dump.is_some(),
        incremental: cfg.incremental,
    };
    let numeric = moment_numeric(&exp, &table, opts)?;
    if let (Some(path), Some(nodes)) = (dump, numeric.node_values.as_ref()) {
        write_node_csv(BufWriter::new(File::create(path)?), nodes)?;
    }
    let q = QPolynomialSet::from_context(&ZetaContext::new(), &kernel);
    let predicted = main_term_integral(exp.k(), &window, &q, QuadParams::default())?;

    let mut conv = BTreeMap::new();
    conv.insert(
        "moment_doubling".to_string(),
        Estimate { estimate: numeric.doubling_change, tolerance: cfg.moment_tol },
    );
    conv.insert(
        "main_term_doubling".to_string(),
        Estimate { estimate: predicted.doubling_change, tolerance: MAIN_TERM_TOL },
    );
    if cfg.incremental {
        conv.insert(
            "phase_drift".to_string(),
            Estimate { estimate: numeric.phase_drift, tolerance: DRIFT_TOL },
        );
    }
    let params = MomentParameters {
        t,
        eta: cfg.eta,
        k: exp.k(),
        mu: cfg.mu,
        t0: window.t0(),
        c1: cfg.c1,
        c2: cfg.c2,
        oversample: cfg.oversample,
        nodes: numeric.nodes,
        spacing: numeric.spacing,
        terms: exp.n_max(),
        main_term_panels: predicted.panels,
    };
    Ok(MomentReport::new(params, numeric.value, predicted.by_degree, predicted.total, conv))
}

/// True when each deviation is at most `SWEEP_SLACK` times the previous one.
pub fn sweep_trend_ok(devs: &[f64]) -> bool {
    devs.windows(2).all(|w| w[1] <= SWEEP_SLACK * w[0])
}

pub fn moment(cfg: &Config, out: &mut dyn Write) -> Result<Vec<MomentReport>, CliError> {
    let ts = cfg.moment_ts();
    let mut reports = Vec::new();
    for &t in &ts {
        let dump = cfg.dump_nodes.as_deref().map(|p| node_path(p, t, ts.len() > 1));
        let r = moment_report(cfg, t, dump.as_deref())?;
        line(out, &r)?;
        reports.push(r);
    }
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| r.failed())
        .map(|r| format!("T={} convergence", r.parameters.t))
        .collect();
    if !failed.is_empty() {
        return Err(CliError::Failed(failed.join(", ")));
    }
    let devs: Vec<f64> = reports.iter().map(|r| r.relative_deviation).collect();
    if !sweep_trend_ok(&devs) {
        return Err(CliError::Failed(format!(
            "deviations {devs:?} grow by more than {SWEEP_SLACK}x across the sweep"
        )));
    }
    Ok(reports)
}

fn distinct(set: &divisor_moments::arithmetic::ShiftSet) -> bool {
    let s = set.shifts();
    s.iter().enumerate().all(|(x, a)| s[x + 1..].iter().all(|b| (a - b).norm() >= 1e-8))
}

pub fn adsum(cfg: &Config, out: &mut dyn Write) -> Result<Vec<AdRecord>, CliError> {
    let profile = match cfg.profile {
        AdProfile::Smooth => Profile::Smooth { width: 0.25 },
        AdProfile::Box => Profile::Box,
    };
    let f = ADTestFunction::new(cfg.x, cfg.y(), profile)?;
    let ctx = ZetaContext::new();
    let has_main = cfg.i.len() == 2 && cfg.j.len() == 2 && distinct(&cfg.i) && distinct(&cfg.j);
    let all_zero = cfg.i.shifts().iter().chain(cfg.j.shifts()).all(|z| z.norm() == 0.0);
    let integral_box = cfg.x.fract() == 0.0 && cfg.y().fract() == 0.0;
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for &r in &cfg.r {
        let brute = ad_sum_bruteforce(&cfg.i, &cfg.j, &f, r)?;
        let main = if has_main {
            Some(ad_main_term(&ctx, &cfg.i, &cfg.j, &f, r, cfg.q_cutoff, QuadParams::default())?)
        } else {
            None
        };
        let integer = if cfg.profile == AdProfile::Box && all_zero && integral_box && cfg.i.len() == 2 && cfg.j.len() == 2 {
            Some(ad_sum_integer(cfg.x as u64, cfg.y() as u64, r)?)
        } else {
            None
        };
        let deviation = main.map(|m| (brute - m.value).norm() / m.value.norm());
        let mut ok = deviation.is_none_or(|d| d <= cfg.ad_tol);
        if let Some(n) = integer {
            ok &= brute.re == n as f64 && brute.im == 0.0;
        }
        if !ok {
            failures.push(format!("r={r}"));
        }
        let rec = AdRecord {
            tool: TOOL,
            version: VERSION,
            timestamp: now(),
            x: cfg.x,
            y: cfg.y(),
            r,
            i: cfg.i.to_string(),
            j: cfg.j.to_string(),
            profile: match cfg.profile {
                AdProfile::Smooth => "smooth",
                AdProfile::Box => "box",
            },
            p: f.derivative_scale(),
            error_exponents: ERROR_TERM_TRIPLE,
            bruteforce: Pair::from(brute),
            main_term: main.map(|m| Pair::from(m.value)),
            tail_bound: main.map(|m| m.tail_bound),
            q_cutoff: cfg.q_cutoff,
            relative_deviation: deviation,
            integer_oracle: integer,
            status: if ok { "OK" } else { "FAILED" },
        };
        line(out, &rec)?;
        records.push(rec);
    }
    if failures.is_empty() {
        Ok(records)
    } else {
        Err(CliError::Failed(failures.join(", ")))
    }
}
