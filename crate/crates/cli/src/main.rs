use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use strata_core::charts::Recursion;
use strata_core::harness::{emit_report, run_suite, Report, Status, SuiteConfig};

#[derive(Parser)]
#[command(name = "strata", version, about = "Exact checks for incidence strata on Hilbert schemes of points")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Seed for every sampled instance.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Samples per check (overrides the per-suite defaults).
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Base field: `rat` or `fp:<p>`.
    #[arg(long, global = true, default_value = "rat")]
    field: String,
    /// Remainder recursion for the blowup charts.
    #[arg(long, global = true, default_value = "paper", value_parser = parse_recursion)]
    recursion: Recursion,
}

fn parse_recursion(s: &str) -> Result<Recursion, String> {
    s.parse().map_err(|e: strata_core::Error| e.to_string())
}

#[derive(Subcommand)]
enum Cmd {
    /// Colength of univariate tuples: gcd degree against the rank oracle.
    Uni {
        #[arg(long, value_delimiter = ',')]
        shape: Option<Vec<usize>>,
    },
    /// Blowup chart certificates.
    Charts {
        #[arg(long, value_delimiter = ',')]
        shape: Option<Vec<usize>>,
        /// 1-based blowup indices.
        #[arg(long, value_delimiter = ',', requires = "shape")]
        steps: Option<Vec<usize>>,
        /// Stratum cut out by the tower's proper transform.
        #[arg(long, requires = "steps")]
        stratum: Option<usize>,
        #[arg(long)]
        max_depth: Option<usize>,
    },
    /// Determinantal monomial ideals: colength, minors, tangent dimensions,
    /// and the x-axis reduction.
    Hilb {
        #[arg(long, value_delimiter = ',', requires = "t")]
        s: Option<Vec<u32>>,
        #[arg(long, value_delimiter = ',', requires = "s")]
        t: Option<Vec<u32>>,
        /// JSON file `{"b": [[..]], "a": [[..]]}` of deformation parameters.
        #[arg(long, requires = "s")]
        params: Option<PathBuf>,
    },
    /// Torus flat limit of a bivariate ideal (one generator per line).
    GmLimit {
        #[arg(long)]
        ideal: Option<PathBuf>,
    },
    /// Pull back the standard bivector to a blowup chart.
    PoissonCheck {
        #[arg(long, requires = "k")]
        r: Option<usize>,
        #[arg(long, requires = "r")]
        k: Option<usize>,
    },
    /// Run a named suite, or every suite.
    Suite {
        #[arg(long, conflicts_with = "name")]
        all: bool,
        #[arg(long, required_unless_present = "all")]
        name: Option<String>,
    },
}

fn config(cli: Cli) -> Result<(SuiteConfig, Option<PathBuf>), String> {
    let c = cli.common;
    let mut cfg = SuiteConfig::new("all", c.seed);
    cfg.samples = c.samples;
    cfg.field = c.field;
    cfg.recursion = c.recursion;
    match cli.cmd {
        Cmd::Uni { shape } => {
            cfg.suite = "uni".into();
            cfg.shape = shape;
        }
        Cmd::Charts { shape, steps, stratum, max_depth } => {
            cfg.suite = "charts".into();
            cfg.shape = shape;
            cfg.steps = steps;
            cfg.stratum = stratum;
            cfg.max_depth = max_depth;
        }
        Cmd::Hilb { s, t, params } => {
            cfg.suite = "hilb".into();
            cfg.s = s;
            cfg.t = t;
            if let Some(p) = params {
                let text = std::fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?;
                cfg.params = Some(serde_json::from_str(&text).map_err(|e| format!("{}: {e}", p.display()))?);
            }
        }
        Cmd::GmLimit { ideal } => {
            cfg.suite = "gm-limit".into();
            cfg.ideal = ideal.map(|p| p.display().to_string());
        }
        Cmd::PoissonCheck { r, k } => {
            cfg.suite = "poisson".into();
            cfg.r = r;
            cfg.k = k;
        }
        Cmd::Suite { all, name } => {
            cfg.suite = if all { "all".into() } else { name.unwrap_or_default() };
        }
    }
    cfg.output = c.json.as_ref().map(|p| p.display().to_string());
    Ok((cfg, c.json))
}

fn print_lines(report: &Report, out: &mut dyn Write) -> std::io::Result<()> {
    for c in &report.checks {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        let detail = if c.status == Status::Skip { c.note.clone().unwrap_or_default() } else { c.actual.clone() };
        writeln!(out, "{tag} {}: {detail}", c.name)?;
    }
    let s = &report.summary;
    writeln!(out, "{} passed, {} failed, {} skipped", s.pass, s.fail, s.skip)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cfg, json) = match config(cli) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let to_stdout = json.as_deref().is_some_and(|p| p.as_os_str() == "-");
    let lines = if to_stdout {
        print_lines(&report, &mut std::io::stderr())
    } else {
        print_lines(&report, &mut std::io::stdout())
    };
    if let Err(e) = lines {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if let Some(path) = json {
        let written = if to_stdout {
            serde_json::to_string_pretty(&report)
                .map_err(|e| e.to_string())
                .and_then(|t| writeln!(std::io::stdout(), "{t}").map_err(|e| e.to_string()))
        } else {
            emit_report(&report, &path).map_err(|e| e.to_string())
        };
        if let Err(e) = written {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
