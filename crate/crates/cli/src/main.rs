//! Command line driver for the mimetic Poisson solvers.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mimetic_core::geometry::Domain;
use mimetic_core::harness::{
    manufactured_spec, measure, run_h_convergence, run_p_convergence, verify_criterion, write_csv, ErrorRecord, ExperimentConfig,
    CRITERIA,
};
use mimetic_core::solvers::{Method, ProblemSpec};
use mimetic_core::Error;

const EXIT_INVALID: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_ACCEPTANCE: u8 = 4;

#[derive(Parser)]
#[command(name = "mimetic", version, about = "Mimetic spectral element solvers for the 2D Poisson problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Dual,
    Single,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodsArg {
    Dual,
    Single,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    Unit,
    Biunit,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sweep {
    H,
    P,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Dual => Method::Dual,
            MethodArg::Single => Method::Single,
        }
    }
}

impl MethodsArg {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodsArg::Dual => vec![Method::Dual],
            MethodsArg::Single => vec![Method::Single],
            MethodsArg::Both => vec![Method::Dual, Method::Single],
        }
    }
}

impl From<DomainArg> for Domain {
    fn from(d: DomainArg) -> Self {
        match d {
            DomainArg::Unit => Domain::Unit,
            DomainArg::Biunit => Domain::Biunit,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve the manufactured problem once and write one CSV record.
    Solve {
        #[arg(long, value_enum, default_value = "dual")]
        method: MethodArg,
        /// Polynomial order N.
        #[arg(long)]
        order: usize,
        /// Element grid, `MxM` or `M`.
        #[arg(long, value_parser = parse_elements)]
        elements: (usize, usize),
        /// Deformation coefficient, |c| < 1/π.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        c: f64,
        #[arg(long, value_enum, default_value = "unit")]
        domain: DomainArg,
        /// CSV output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Gauss points per direction for assembly (default N + 3).
        #[arg(long)]
        quad_order: Option<usize>,
    },
    /// Run an h- or p-refinement sweep of the manufactured problem.
    Convergence {
        #[arg(long, value_enum)]
        sweep: Sweep,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodsArg,
        /// Orders, e.g. `1,2,3` or `2..8`.
        #[arg(long, value_parser = parse_usize_list)]
        orders: Option<UsizeList>,
        /// Elements per side, e.g. `2,4,8,16`.
        #[arg(long, value_parser = parse_usize_list)]
        mesh_levels: Option<UsizeList>,
        /// Deformation coefficients, e.g. `0,0.1,0.2`.
        #[arg(long, value_parser = parse_f64_list, allow_negative_numbers = true)]
        c_list: Option<F64List>,
        #[arg(long, value_enum, default_value = "unit")]
        domain: DomainArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        quad_order: Option<usize>,
    },
    /// Run the acceptance suite; exit code 4 when any criterion fails.
    Verify {
        /// Subset of criteria to run, e.g. `1,2,8`.
        #[arg(long, value_parser = parse_usize_list)]
        criteria: Option<UsizeList>,
        #[arg(long, default_value_t = 20240611)]
        seed: u64,
        /// Print every failed comparison.
        #[arg(long)]
        verbose: bool,
    },
}

fn parse_elements(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad element count '{t}': {e}"));
    match s.split_once(['x', 'X']) {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => parse(s).map(|m| (m, m)),
    }
}

#[derive(Clone)]
struct UsizeList(Vec<usize>);

#[derive(Clone)]
struct F64List(Vec<f64>);

fn parse_usize_list(s: &str) -> Result<UsizeList, String> {
    parse_usize_items(s).map(UsizeList)
}

fn parse_f64_list(s: &str) -> Result<F64List, String> {
    s.split(',').map(|t| t.trim().parse().map_err(|e| format!("bad number '{t}': {e}"))).collect::<Result<_, _>>().map(F64List)
}

fn parse_usize_items(s: &str) -> Result<Vec<usize>, String> {
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|e| format!("bad range start: {e}"))?;
        let b: usize = b.trim().parse().map_err(|e| format!("bad range end: {e}"))?;
        if a > b {
            return Err(format!("empty range {s}"));
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|e| format!("bad integer '{t}': {e}"))).collect()
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SingularSystem(_) | Error::SolverFailure(_) | Error::InverseMapFailure(..) => EXIT_SOLVER,
        _ => EXIT_INVALID,
    }
}

fn emit(records: &[ErrorRecord], out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => write_csv(records, std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?),
        None => write_csv(records, std::io::stdout().lock()),
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Solve { method, order, elements, c, domain, out, quad_order } => {
            let spec = ProblemSpec {
                my: elements.1,
                quad_order,
                ..manufactured_spec(method.into(), order, elements.0, c, domain.into())
            };
            spec.validate()?;
            let record = measure(&spec, order + 4)?;
            emit(std::slice::from_ref(&record), out.as_ref())?;
            if out.is_some() {
                println!(
                    "{} N={} {}x{} c={}: L2(omega) {:.3e}, L2(q) {:.3e}, conservation {:.1e}, {} dof, {:.3} s",
                    record.method, record.order, record.mx, record.my, record.c, record.l2_omega, record.l2_q,
                    record.linf_conservation, record.dof, record.runtime_s
                );
            }
            Ok(0)
        }
        Command::Convergence { sweep, method, orders, mesh_levels, c_list, domain, out, quad_order } => {
            let (default_orders, default_levels) = match sweep {
                Sweep::H => (vec![1, 2, 3], vec![2, 4, 8, 16]),
                Sweep::P => ((2..=8).collect(), vec![2, 4]),
            };
            let cfg = ExperimentConfig {
                methods: method.methods(),
                orders: orders.map_or(default_orders, |l| l.0),
                mesh_levels: mesh_levels.map_or(default_levels, |l| l.0),
                c_list: c_list.map_or_else(|| vec![0.0, 0.1, 0.2], |l| l.0),
                domain: domain.into(),
                quad_order,
                ..ExperimentConfig::default()
            };
            cfg.validate()?;
            let mut summary = Vec::new();
            let records = match sweep {
                Sweep::H => {
                    let h = run_h_convergence(&cfg)?;
                    for s in &h.slopes {
                        let f = |v: Option<f64>| v.map_or("n/a".to_string(), |v| format!("{v:.3}"));
                        summary.push(format!("{} N={} c={}: slope omega {}, q {}", s.method, s.order, s.c, f(s.omega), f(s.q)));
                    }
                    h.records
                }
                Sweep::P => {
                    let p = run_p_convergence(&cfg)?;
                    for r in &p.projection {
                        summary.push(format!(
                            "projection N={} {}x{} c={}: L2(omega) {:.3e}, L2(q) {:.3e}",
                            r.order, r.mx, r.mx, r.c, r.l2_omega, r.l2_q
                        ));
                    }
                    p.records
                }
            };
            emit(&records, out.as_ref())?;
            let mut err = std::io::stderr().lock();
            for line in summary {
                let _ = writeln!(err, "{line}");
            }
            Ok(0)
        }
        Command::Verify { criteria, seed, verbose } => {
            let ids: Vec<u8> = match criteria {
                Some(list) => list
                    .0
                    .into_iter()
                    .map(|i| {
                        u8::try_from(i)
                            .ok()
                            .filter(|i| CRITERIA.contains(i))
                            .ok_or_else(|| Error::InvalidConfig(format!("no acceptance criterion {i}")))
                    })
                    .collect::<Result<_, _>>()?,
                None => CRITERIA.to_vec(),
            };
            let mut all_passed = true;
            for id in ids {
                let report = verify_criterion(id, seed)?;
                println!("{report}");
                for n in &report.notes {
                    println!("    {n}");
                }
                let shown = if verbose { report.failures.len() } else { report.failures.len().min(5) };
                for f in &report.failures[..shown] {
                    println!("    FAILED: {f}");
                }
                if shown < report.failures.len() {
                    println!("    ... {} more (use --verbose)", report.failures.len() - shown);
                }
                all_passed &= report.passed;
            }
            Ok(if all_passed { 0 } else { EXIT_ACCEPTANCE })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
