use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polyberg::bergman_oracle::oracle_beta_entry;
use polyberg::gammaseq::{spectral_norm, tail_deviation, DEFAULT_XI_MAX};
use polyberg::generators::{matrix_unit, nu_table, random_antitriangular_generators, unit};
use polyberg::integration::beta_entry;
use polyberg::purestates::{eval_state, eval_state_integral, separate, SEPARATION_GAP};
use polyberg::symbols::make_gp;
use polyberg::verify::{run_suite, VerifyConfig};
use polyberg::{block_order, gamma_matrix, gamma_sequence, CMatrix, Complex64, Error, PureStateId, SymbolSpec, Tolerances};
use serde_json::{json, Value};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NOT_SEPARABLE: u8 = 3;

#[derive(Parser)]
#[command(name = "polyberg", version, about = "Matrix sequences of radial Toeplitz operators on polyanalytic Bergman spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute gamma(a) and write it as JSON (or one block as CSV).
    Gamma(GammaArgs),
    /// Evaluate pure states on gamma(a).
    Purestate(StateArgs),
    /// Separate two pure states.
    Separate(SeparateArgs),
    /// Rebuild matrix units from antitriangular generators.
    Basis(BasisArgs),
    /// Cross-check beta entries against 2D disk quadrature.
    Oracle(OracleArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Common {
    /// Polyanalyticity order.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// Weight exponent (must exceed -1).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the main output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct ToleranceArgs {
    #[arg(long)]
    tol_zero: Option<f64>,
    #[arg(long)]
    tol_nonzero: Option<f64>,
}

impl ToleranceArgs {
    fn resolve(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances { zero: self.tol_zero.unwrap_or(d.zero), nonzero: self.tol_nonzero.unwrap_or(d.nonzero), ..d }
    }
}

#[derive(Args)]
struct GammaArgs {
    #[command(flatten)]
    common: Common,
    /// Symbol as JSON, or @path to a JSON file.
    #[arg(long)]
    symbol: String,
    #[arg(long, default_value_t = DEFAULT_XI_MAX)]
    xi_max: usize,
    /// Frequency to export with --format csv.
    #[arg(long, allow_negative_numbers = true)]
    xi: Option<i64>,
}

#[derive(Args)]
struct StateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    symbol: String,
    /// 'inf' or '<xi>:<c0>,<c1>,...'; repeatable.
    #[arg(long = "state", required = true, allow_hyphen_values = true)]
    states: Vec<String>,
}

#[derive(Args)]
struct SeparateArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    tol: ToleranceArgs,
    /// Exactly two states: 'inf' or '<xi>:<c0>,<c1>,...'.
    #[arg(long = "state", num_args = 1, required = true, allow_hyphen_values = true)]
    states: Vec<String>,
}

#[derive(Args)]
struct BasisArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    tol: ToleranceArgs,
    /// Use the generators gamma(g_k) at this frequency instead of random ones.
    #[arg(long, allow_negative_numbers = true)]
    xi: Option<i64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    symbol: String,
    /// Largest |xi| compared.
    #[arg(long, default_value_t = 3)]
    xi_max: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest n in the suite.
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Run at this alpha only (default: 0, 0.5, 1, 2.5).
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 16)]
    xi_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    tol: ToleranceArgs,
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::NotSeparable(_)) { EXIT_NOT_SEPARABLE } else { EXIT_USAGE };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn load_symbol(arg: &str) -> Result<SymbolSpec, Failure> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?,
        None => arg.to_owned(),
    };
    Ok(SymbolSpec::from_json(&text)?)
}

fn parse_states(raw: &[String]) -> Result<Vec<PureStateId>, Failure> {
    raw.iter().map(|s| s.parse::<PureStateId>().map_err(Failure::from)).collect()
}

fn common_checks(c: &Common) -> Result<usize, Failure> {
    if !(c.alpha > -1.0) {
        return Err(usage(format!("--alpha must exceed -1, got {}", c.alpha)));
    }
    Ok(c.n as usize)
}

fn emit(c: &Common, body: &str) -> Result<(), Failure> {
    match &c.out {
        Some(path) => fs::write(path, body)?,
        None => {
            let mut out = io::stdout().lock();
            out.write_all(body.as_bytes())?;
            if !body.ends_with('\n') {
                out.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn complex_json(z: Complex64) -> Value {
    if z.im == 0.0 {
        json!(z.re)
    } else {
        json!([z.re, z.im])
    }
}

fn complex_text(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.12e}", z.re)
    } else {
        format!("{:.12e}{:+.12e}i", z.re, z.im)
    }
}

fn cmd_gamma(a: &GammaArgs) -> CmdResult {
    let n = common_checks(&a.common)?;
    let symbol = load_symbol(&a.symbol)?;
    let seq = gamma_sequence(&symbol, n, a.common.alpha, a.xi_max)?;
    let body = match a.common.format {
        Format::Json => seq.to_json(),
        Format::Csv => {
            let xi = a.xi.ok_or_else(|| usage("--format csv exports one frequency; pass --xi"))?;
            seq.to_csv(xi)?
        }
    };
    emit(&a.common, &body)?;
    let mut err = io::stderr().lock();
    writeln!(err, "xi\torder\tnorm")?;
    for m in &seq.mats {
        writeln!(err, "{}\t{}\t{:.6e}", m.xi, m.order(), spectral_norm(&m.entries))?;
    }
    if seq.scalar_limit.is_some() {
        let dev = tail_deviation(&seq, a.xi_max as i64)?;
        writeln!(err, "tail deviation at xi = {}: {dev:.6e}", a.xi_max)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_purestate(a: &StateArgs) -> CmdResult {
    let n = common_checks(&a.common)?;
    let alpha = a.common.alpha;
    let symbol = load_symbol(&a.symbol)?;
    let states = parse_states(&a.states)?;
    let xi_max = states
        .iter()
        .map(|s| match s {
            PureStateId::Finite { xi, .. } => (*xi).max(0) as usize,
            PureStateId::Infinity => 0,
        })
        .max()
        .unwrap_or(0);
    let seq = gamma_sequence(&symbol, n, alpha, xi_max)?;
    let mut rows = Vec::new();
    for s in &states {
        s.validate(n)?;
        let value = eval_state(s, &seq)?;
        let integral = match s {
            PureStateId::Finite { xi, u } => Some(complex_json(eval_state_integral(*xi, u, &symbol, n, alpha)?)),
            PureStateId::Infinity => None,
        };
        rows.push((s.to_string(), value, integral));
    }
    let body = match a.common.format {
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|(s, v, i)| json!({"state": s, "value": complex_json(*v), "integral": i}))
                .collect();
            serde_json::to_string_pretty(&items).expect("values serialize")
        }
        Format::Csv => {
            let mut out = String::from("state,re,im\n");
            for (s, v, _) in &rows {
                out.push_str(&format!("\"{s}\",{:e},{:e}\n", v.re, v.im));
            }
            out
        }
    };
    emit(&a.common, &body)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_separate(a: &SeparateArgs) -> CmdResult {
    let n = common_checks(&a.common)?;
    let states = parse_states(&a.states)?;
    let [s1, s2] = states.as_slice() else {
        return Err(usage(format!("separate needs exactly two --state values, got {}", states.len())));
    };
    let sep = separate(s1, s2, n, a.common.alpha, &a.tol.resolve())?;
    let gap = sep.gap();
    let body = json!({
        "states": [s1.to_string(), s2.to_string()],
        "witness": sep.witness,
        "values": [complex_json(sep.values.0), complex_json(sep.values.1)],
        "gap": gap,
    });
    emit(&a.common, &serde_json::to_string_pretty(&body).expect("witness serializes"))?;
    eprintln!(
        "sigma_1 = {}, sigma_2 = {}, gap = {gap:.6e}",
        complex_text(sep.values.0),
        complex_text(sep.values.1)
    );
    Ok(if gap > SEPARATION_GAP { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAILED) })
}

fn cmd_basis(a: &BasisArgs) -> CmdResult {
    let n = common_checks(&a.common)?;
    let alpha = a.common.alpha;
    let (source, g): (String, Vec<CMatrix>) = match a.xi {
        Some(xi) => {
            let d = block_order(n, xi).ok_or(Error::FrequencyOutOfRange { xi, n })?;
            let base = d - 1 + xi.unsigned_abs() as usize;
            let g = (0..d)
                .map(|j| Ok(gamma_matrix(&make_gp(base + j, alpha)?, n, alpha, xi)?.entries))
                .collect::<polyberg::Result<Vec<_>>>()?;
            (format!("gamma(g_{base}..g_{})_{xi}", base + d - 1), g)
        }
        None => (format!("random, seed {}", a.seed), random_antitriangular_generators(n, a.seed)),
    };
    let nu = nu_table(&g, &a.tol.resolve())?;
    let d = g.len();
    let mut errors = vec![vec![0.0f64; d]; d];
    for (p, row) in errors.iter_mut().enumerate() {
        for (q, e) in row.iter_mut().enumerate() {
            let m = matrix_unit(&g, &nu, p, q)?;
            *e = (m - unit(d, p, q)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        }
    }
    let worst = errors.iter().flatten().copied().fold(0.0, f64::max);
    let body = match a.common.format {
        Format::Json => {
            let nu_rows: Vec<Vec<Value>> =
                (0..d).map(|p| (0..d).map(|j| complex_json(nu.get(p, j))).collect()).collect();
            serde_json::to_string_pretty(&json!({
                "generators": source,
                "order": d,
                "nu": nu_rows,
                "unit_errors": errors,
                "max_error": worst,
            }))
            .expect("report serializes")
        }
        Format::Csv => {
            let mut out = String::from("p,q,error\n");
            for (p, row) in errors.iter().enumerate() {
                for (q, e) in row.iter().enumerate() {
                    out.push_str(&format!("{p},{q},{e:e}\n"));
                }
            }
            out
        }
    };
    emit(&a.common, &body)?;
    eprintln!("{source}: max entrywise error {worst:.3e}");
    Ok(if worst < 1e-8 { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAILED) })
}

fn cmd_oracle(a: &OracleArgs) -> CmdResult {
    let n = common_checks(&a.common)?;
    let alpha = a.common.alpha;
    let symbol = load_symbol(&a.symbol)?;
    let mut rows = Vec::new();
    for xi in (1 - n as i64).max(-(a.xi_max as i64))..=a.xi_max as i64 {
        let d = block_order(n, xi).expect("frequency in range");
        for j in 0..d {
            for k in 0..d {
                let want = beta_entry(&symbol, alpha, xi, j, k)?;
                let got = oracle_beta_entry(&symbol, alpha, xi, j, k)?;
                rows.push((xi, j, k, got, want, (got - want).norm()));
            }
        }
    }
    let worst = rows.iter().map(|r| r.5).fold(0.0, f64::max);
    let body = match a.common.format {
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|&(xi, j, k, got, want, diff)| {
                    json!({"xi": xi, "j": j, "k": k, "oracle": complex_json(got), "beta": complex_json(want), "diff": diff})
                })
                .collect();
            serde_json::to_string_pretty(&json!({"entries": items, "max_diff": worst})).expect("report serializes")
        }
        Format::Csv => {
            let mut out = String::from("xi,j,k,oracle,beta,diff\n");
            for (xi, j, k, got, want, diff) in &rows {
                out.push_str(&format!("{xi},{j},{k},{:e},{:e},{diff:e}\n", got.re, want.re));
            }
            out
        }
    };
    emit(&a.common, &body)?;
    eprintln!("{} entries, max |oracle - beta| = {worst:.3e}", rows.len());
    Ok(if worst < 1e-6 { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAILED) })
}

fn cmd_verify(a: &VerifyArgs) -> CmdResult {
    let mut cfg = VerifyConfig { n_max: a.n, xi_max: a.xi_max, seed: a.seed, tolerances: a.tol.resolve(), ..Default::default() };
    if let Some(alpha) = a.alpha {
        cfg.alphas = vec![alpha];
    }
    let report = run_suite(&cfg)?;
    print!("{report}");
    if report.all_pass() {
        println!("all checks passed");
        Ok(ExitCode::SUCCESS)
    } else {
        let names: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        eprintln!("failed: {}", names.join(", "));
        Ok(ExitCode::from(EXIT_FAILED))
    }
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("POLYBERG_THREADS") {
        let threads: usize =
            v.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| usage(format!("POLYBERG_THREADS must be a positive integer, got '{v}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| usage(format!("cannot size the thread pool: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Gamma(a) => cmd_gamma(a),
        Command::Purestate(a) => cmd_purestate(a),
        Command::Separate(a) => cmd_separate(a),
        Command::Basis(a) => cmd_basis(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Verify(a) => cmd_verify(a),
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
