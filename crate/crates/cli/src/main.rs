mod commands;
mod config;
mod parse;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use bianchi_klf::HPoint;

use commands::{E1Route, EisRoute, KlfRoute};
use config::{Format, Overrides, RunConfig};

/// Eisenstein series and the Kronecker limit formula for PSL(2, O_K).
#[derive(Parser, Debug)]
#[command(name = "klf", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Global {
    /// TOML configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// field Q(sqrt d), d in {-1, -2, -3, -7, -11}
    #[arg(long = "field", global = true, allow_hyphen_values = true)]
    d: Option<i64>,
    #[arg(long, global = true)]
    c_max: Option<f64>,
    #[arg(long, global = true)]
    d_max: Option<f64>,
    /// dual-lattice radius of Fourier sums
    #[arg(long, global = true)]
    omega_max: Option<f64>,
    /// radius of the w sum in g(u)
    #[arg(long, global = true)]
    w_max: Option<f64>,
    /// eps schedule `e1,e2,e3`, strictly decreasing
    #[arg(long, global = true, value_parser = config::parse_eps)]
    eps: Option<[f64; 3]>,
    #[arg(long, global = true)]
    quadrature_n: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// worker threads, 0 for one per core
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// tolerance override `id-prefix=tol`, repeatable
    #[arg(long = "tol", global = true, value_parser = config::parse_tol)]
    tol: Vec<(String, f64)>,
    /// report file; without it records go to stdout and the summary to stderr
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = clap::value_parser!(String))]
    format: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// E(u, s) by the coset sum, the full pair sum or the Fourier expansion
    Eisenstein {
        #[arg(long, value_parser = parse::point, allow_hyphen_values = true)]
        point: HPoint,
        #[arg(long)]
        s: f64,
        #[arg(long, value_enum, default_value = "direct")]
        route: EisRoute,
        /// literal truncated sum over c_max, d_max instead of the theta splitting
        #[arg(long)]
        truncated: bool,
    },
    /// Fourier coefficient a_w'(r, s) for the dual point labelled by a ring element
    FourierCoeff {
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        label: String,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        s: f64,
        /// compare with quadrature over a period
        #[arg(long)]
        quadrature: bool,
    },
    /// phi_w'(s)
    Phi {
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        label: String,
        #[arg(long)]
        s: f64,
        /// compare with the double coset sum up to c_max
        #[arg(long)]
        bruteforce: bool,
    },
    /// Laurent data at s = 1 and the residue experiment
    Laurent {
        #[arg(long, value_parser = parse::point, default_value = "0,0,1", allow_hyphen_values = true)]
        point: HPoint,
    },
    /// both sides of the limit formula
    Klf {
        #[arg(long, value_parser = parse::point, allow_hyphen_values = true)]
        point: HPoint,
        #[arg(long, value_enum, default_value = "fourier")]
        route: KlfRoute,
    },
    /// log eta(u)
    Eta {
        #[arg(long, value_parser = parse::point, allow_hyphen_values = true)]
        point: HPoint,
    },
    /// D(M) for one matrix `a,b;c,d` (entries p+qw), or the property batch
    Dgamma {
        #[arg(long, allow_hyphen_values = true, required_unless_present = "batch")]
        matrix: Option<String>,
        #[arg(long, conflicts_with = "matrix")]
        batch: bool,
    },
    /// elliptic Dedekind sum D(c, d)
    EllipticDedekind {
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long = "d", allow_hyphen_values = true)]
        denominator: String,
        #[arg(long, value_enum, default_value = "hecke-limit")]
        method: E1Route,
    },
    /// g(u) against log|eta(u)|
    GCompare {
        #[arg(long, value_parser = parse::point, allow_hyphen_values = true)]
        point: HPoint,
    },
    /// zeta_K(2) from the dual lattice readings
    Zeta2,
    /// the full acceptance suite
    VerifyAll,
}

fn overrides(g: &Global) -> Result<Overrides> {
    Ok(Overrides {
        d: g.d,
        c_max: g.c_max,
        d_max: g.d_max,
        omega_max: g.omega_max,
        w_max: g.w_max,
        eps: g.eps,
        quadrature_n: g.quadrature_n,
        seed: g.seed,
        threads: g.threads,
        tol: g.tol.clone(),
        out: g.out.clone(),
        format: g.format.as_deref().map(str::parse::<Format>).transpose().context("--format")?,
    })
}

fn run(cli: Cli) -> Result<bool> {
    let env: Vec<(String, String)> = std::env::vars().filter(|(k, _)| k.starts_with(config::ENV_PREFIX)).collect();
    let cfg = RunConfig::load(cli.global.config.as_deref(), &env, &overrides(&cli.global)?)?;
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global().context("numerics.threads")?;
    }
    let f = bianchi_klf::ImagQuadField::new(cfg.d)?;
    let records = match &cli.cmd {
        Cmd::Eisenstein { point, s, route, truncated } => commands::eisenstein(&cfg, point, *s, *route, *truncated)?,
        Cmd::FourierCoeff { label, r, s, quadrature } => {
            commands::fourier_coeff(&cfg, parse::alg(&f, label)?, *r, *s, *quadrature)?
        }
        Cmd::Phi { label, s, bruteforce } => commands::phi_cmd(&cfg, parse::alg(&f, label)?, *s, *bruteforce)?,
        Cmd::Laurent { point } => commands::laurent(&cfg, point)?,
        Cmd::Klf { point, route } => commands::klf(&cfg, point, *route)?,
        Cmd::Eta { point } => commands::eta(&cfg, point)?,
        Cmd::Dgamma { matrix: Some(m), .. } => commands::dgamma(&cfg, &parse::matrix(&f, m)?)?,
        Cmd::Dgamma { .. } => commands::dgamma_batch(&cfg)?,
        Cmd::EllipticDedekind { c, denominator, method } => {
            commands::elliptic(&cfg, parse::alg(&f, c)?, parse::alg(&f, denominator)?, *method)?
        }
        Cmd::GCompare { point } => commands::g_compare(&cfg, point)?,
        Cmd::Zeta2 => commands::zeta2(&cfg)?,
        Cmd::VerifyAll => commands::verify_all(&cfg)?,
    };
    match &cfg.out {
        Some(path) => {
            let mut file = std::io::BufWriter::new(
                std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
            );
            report::write(&records, cfg.format, &mut file)?;
            file.flush()?;
            report::summary(&records, &mut std::io::stdout().lock())?;
        }
        None => {
            report::write(&records, cfg.format, &mut std::io::stdout().lock())?;
            report::summary(&records, &mut std::io::stderr().lock())?;
        }
    }
    Ok(report::all_pass(&records))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
