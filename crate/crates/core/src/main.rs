use clap::{Parser, Subcommand};

use kahler_bounds::commands::{cmd_constants, cmd_diameter, cmd_table, cmd_verify, GlobalOpts};
use kahler_bounds::report::{OutputFormat, Report, Status};

/// Sharp Beckner-Sobolev constants and diameter bounds on Kahler manifolds.
#[derive(Parser)]
#[command(name = "kahler-bounds", version)]
struct Cli {
    /// PRNG seed for randomized suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// solver / optimizer tolerance
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Gauss-Legendre order per factor for model-space integrals
    #[arg(long, global = true, default_value_t = 64)]
    quad_order: usize,
    /// output format: json or csv
    #[arg(long, global = true, default_value = "json")]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inequality constant for (m, rho, p) with the Riemannian baseline
    Constants {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long)]
        p: f64,
    },
    /// Diameter bound by one method, or all methods with the minimum marked
    Diameter {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        /// bonnet-myers | family | family-opt | closed-24m | closed-200 | rayleigh | all
        #[arg(long, default_value = "all")]
        method: String,
        /// family parameter k (default 1 - 1/(2m))
        #[arg(long)]
        k: Option<f64>,
    },
    /// Run a verification suite and aggregate pass/fail
    Verify {
        /// identities | chain-24m | chain-200 | model | all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        m_max: u32,
    },
    /// Comparison table of every diameter bound over a range of m
    Table {
        /// inclusive range, e.g. 2:5
        #[arg(long, default_value = "2:5")]
        m_range: String,
        /// unit (rho = 1) | ric2m1 (rho = 2m - 1)
        #[arg(long, default_value = "ric2m1")]
        rho_mode: String,
        /// optional CSV output path
        #[arg(long)]
        out: Option<String>,
    },
}

fn parse_range(s: &str) -> kahler_bounds::Result<(u32, u32)> {
    let err = || kahler_bounds::Error::Domain(format!("invalid m range '{s}' (expected lo:hi)"));
    let (lo, hi) = s.split_once(':').ok_or_else(err)?;
    Ok((
        lo.parse().map_err(|_| err())?,
        hi.parse().map_err(|_| err())?,
    ))
}

fn run(cli: &Cli) -> kahler_bounds::Result<Report> {
    let opts = GlobalOpts {
        seed: cli.seed,
        tol: cli.tol,
        quad_order: cli.quad_order,
    };
    match &cli.command {
        Command::Constants { m, rho, p } => cmd_constants(*m, *rho, *p),
        Command::Diameter { m, rho, method, k } => cmd_diameter(*m, *rho, method, *k, opts),
        Command::Verify { suite, m_max } => cmd_verify(suite, *m_max, opts),
        Command::Table {
            m_range,
            rho_mode,
            out,
        } => {
            let (lo, hi) = parse_range(m_range)?;
            cmd_table(lo, hi, rho_mode, out.as_deref(), opts)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let format: OutputFormat = match cli.format.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    match run(&cli) {
        Ok(report) => {
            println!("{}", report.render(format));
            if report.status == Status::Fail {
                std::process::exit(1);
            }
        }
        Err(e) => {
            let mut report = Report::new("error");
            report.status = Status::Fail;
            report.push(serde_json::json!({"label": "error", "message": e.to_string()}));
            println!("{}", report.render(format));
            std::process::exit(e.exit_code());
        }
    }
}
