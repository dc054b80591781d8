use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::sync::LazyLock;

use clap::{Args, Parser, Subcommand};
use divisor_moments_cli::config::{Config, KEYS};
use divisor_moments_cli::{commands, CliError};

static KEY_HELP: LazyLock<String> = LazyLock::new(|| {
    let mut s = String::from("Config file keys (key = value, # comments) and defaults:\n");
    for (k, d, what) in KEYS {
        let d = if d.is_empty() { "unset" } else { d };
        s.push_str(&format!("  {k:<13} {d:<10} {what}\n"));
    }
    s.push_str("\nExit codes: 0 pass, 1 verification failure, 2 config error, 3 budget refusal.\n");
    s.push_str("THREADS sets the worker count.");
    s
});

#[derive(Parser)]
#[command(name = "dmom", version, about = "Shifted divisor moments: main terms, checks and oracles")]
#[command(after_help = KEY_HELP.as_str())]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Overrides,
}

#[derive(Subcommand)]
enum Command {
    /// Dump g, delta, c, Stieltjes constants, zeta derivatives at 2 and the Q tables as JSON.
    Coeffs,
    /// Run every named check; exit 1 if any fails.
    Verify {
        /// Add this to delta_1 before the cancellation checks.
        #[arg(long, hide = true, default_value_t = 0.0, allow_hyphen_values = true)]
        perturb_delta1: f64,
    },
    /// Numeric mean value against the predicted main term, one JSON line per T.
    Moment,
    /// Brute-force shifted convolution sums against the conjectured main term.
    Adsum,
}

#[derive(Args)]
struct Overrides {
    /// Config file read before the flags below.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Time scale [4000].
    #[arg(long = "T", global = true)]
    t: Option<String>,
    /// K = T^(1+eta) [0.2].
    #[arg(long, global = true)]
    eta: Option<String>,
    /// Cutoff smoothing width [0.25].
    #[arg(long, global = true)]
    mu: Option<String>,
    /// Window ramp width [T/4].
    #[arg(long = "T0", global = true)]
    t0: Option<String>,
    /// Window left edge in units of T [1].
    #[arg(long, global = true)]
    c1: Option<String>,
    /// Window right edge in units of T [2].
    #[arg(long, global = true)]
    c2: Option<String>,
    /// Nodes per oscillation scale [8].
    #[arg(long, global = true)]
    oversample: Option<String>,
    /// Allowed node-doubling change of the moment quadrature [1e-3].
    #[arg(long, global = true)]
    moment_tol: Option<String>,
    /// Incremental phase updates in the moment oracle.
    #[arg(long, global = true)]
    incremental: bool,
    /// Euler product prime cutoff [1000000].
    #[arg(long, global = true)]
    prime_cutoff: Option<String>,
    /// Additive q-series cutoff [10000].
    #[arg(long, global = true)]
    q_cutoff: Option<String>,
    /// Additive box scale X [1000000].
    #[arg(long = "X", global = true)]
    x: Option<String>,
    /// Additive box scale Y [X].
    #[arg(long = "Y", global = true)]
    y: Option<String>,
    /// Additive shifts r, comma separated [1,2,3,12].
    #[arg(long, global = true, allow_hyphen_values = true)]
    r: Option<String>,
    /// Shift set I [0.04,0].
    #[arg(long = "I", global = true, allow_hyphen_values = true)]
    i: Option<String>,
    /// Shift set J [0.03,0].
    #[arg(long = "J", global = true, allow_hyphen_values = true)]
    j: Option<String>,
    /// Additive profile, smooth or box [smooth].
    #[arg(long, global = true)]
    profile: Option<String>,
    /// Allowed relative deviation in adsum [0.1].
    #[arg(long, global = true)]
    ad_tol: Option<String>,
    /// Seed for verify's random points [1].
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Write reports here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    /// CSV of per-node t, |A|^2, omega(t) for moment runs.
    #[arg(long, global = true)]
    dump_nodes: Option<String>,
    /// Comma-separated T list for moment.
    #[arg(long, global = true)]
    sweep: Option<String>,
}

impl Overrides {
    fn build(&self) -> Result<Config, CliError> {
        let mut cfg = Config::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {path}: {e}")))?;
            cfg.apply_text(&text)?;
        }
        let pairs = [
            ("T", &self.t),
            ("eta", &self.eta),
            ("mu", &self.mu),
            ("T0", &self.t0),
            ("c1", &self.c1),
            ("c2", &self.c2),
            ("oversample", &self.oversample),
            ("moment_tol", &self.moment_tol),
            ("prime_cutoff", &self.prime_cutoff),
            ("q_cutoff", &self.q_cutoff),
            ("X", &self.x),
            ("Y", &self.y),
            ("r", &self.r),
            ("I", &self.i),
            ("J", &self.j),
            ("profile", &self.profile),
            ("ad_tol", &self.ad_tol),
            ("seed", &self.seed),
            ("out", &self.out),
            ("dump_nodes", &self.dump_nodes),
            ("sweep", &self.sweep),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                cfg.set(k, v)?;
            }
        }
        if self.incremental {
            cfg.incremental = true;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("THREADS = {v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    threads()?;
    let cfg = cli.opts.build()?;
    let mut out: Box<dyn Write> = match &cfg.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    };
    match cli.command {
        Command::Coeffs => commands::coeffs(&cfg, &mut out),
        Command::Verify { perturb_delta1 } => commands::verify(&cfg, perturb_delta1, &mut out),
        Command::Moment => commands::moment(&cfg, &mut out).map(|_| ()),
        Command::Adsum => commands::adsum(&cfg, &mut out).map(|_| ()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dmom: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
