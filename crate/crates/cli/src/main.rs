//! Command-line workbench: sieving, individual sums, scans over checkpoint
//! grids, model fits, plot-script emission, and the full claim audit.
//!
//! Exit codes: 0 on success (counterexample findings included), 1 when an
//! exact internal invariant fails, 2 on usage errors.

use clap::{Args, Parser, Subcommand};
use pairsieve_core::asymptotic::{fit, FitModel, FitResult};
use pairsieve_core::audit::{render, run_all, AuditConfig, AuditReport, ClaimStatus, RenderFormat};
use pairsieve_core::error::Error;
use pairsieve_core::sieve::{APClass, PrimeTable};
use pairsieve_core::sums::{
    chebyshev_tail, hl_partial_sum, inversion_decomposition, lambda_pair_sum, lambda_pair_trace,
    mertens_ap, mertens_ap_trace, pair_count, pair_count_trace, pair_weighted_sum,
    pair_weighted_trace, pi_ap, prime_power_pair_sum, psi_ap, psi_ap_trace, sig12,
    twisted_mobius_sum, twisted_mobius_trace, GridSpec, LinearForm, LogPower, MertensWeight,
    MobiusCondition, PowerWeight, SumTrace, TracePoint,
};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Parse an integer that may be written in scientific notation (1e8).
fn parse_u64_sci(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if !f.is_finite() || f < 0.0 || f > 1.8e19 || f.fract() != 0.0 {
        return Err(format!("'{s}' is not a nonnegative integer"));
    }
    Ok(f as u64)
}

fn parse_i64_sci(s: &str) -> Result<i64, String> {
    if let Ok(v) = s.parse::<i64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if !f.is_finite() || f.fract() != 0.0 || f.abs() > 9.2e18 {
        return Err(format!("'{s}' is not an integer"));
    }
    Ok(f as i64)
}

#[derive(Parser)]
#[command(
    name = "pairsieve",
    version,
    about = "Prime-pair summation workbench and claim auditor"
)]
struct Cli {
    /// Worker threads (default: available parallelism). Output bytes do not
    /// depend on this.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FormArgs {
    /// Slope m of the form m*p + k.
    #[arg(long, default_value = "1", value_parser = parse_u64_sci)]
    m: u64,
    /// Offset k of the form m*p + k (nonzero).
    #[arg(long, default_value = "2", value_parser = parse_i64_sci)]
    k: i64,
}

impl FormArgs {
    fn form(&self) -> Result<LinearForm, Error> {
        LinearForm::new(self.m, self.k)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a prime table and report pi(x).
    Sieve {
        #[arg(long, value_parser = parse_u64_sci)]
        limit: u64,
        /// Also report pi(x) at this point.
        #[arg(long, value_parser = parse_u64_sci)]
        x: Option<u64>,
        /// Construction segment size in 64-bit words.
        #[arg(long, value_parser = parse_u64_sci)]
        segment_words: Option<u64>,
    },
    /// Evaluate mu, Lambda, phi at one integer.
    Eval {
        #[arg(long, value_parser = parse_u64_sci)]
        n: u64,
    },
    /// Evaluate one sum at one point.
    Sum {
        #[command(subcommand)]
        op: SumOp,
    },
    /// Tabulate one sum over a geometric checkpoint grid, as CSV.
    Scan {
        #[command(subcommand)]
        op: ScanOp,
    },
    /// Least-squares fit of a model to a trace CSV.
    Fit {
        #[arg(long)]
        input: PathBuf,
        /// loglog | x-over-log2 | li
        #[arg(long)]
        model: String,
        /// Restrict the fit to x in [lo, hi] (format lo:hi).
        #[arg(long)]
        window: Option<String>,
    },
    /// Run the claim audit and render the report.
    Audit(AuditArgs),
    /// Emit a self-contained gnuplot script for a trace CSV with a fitted
    /// curve overlaid.
    Plot {
        #[arg(long)]
        input: PathBuf,
        /// loglog | x-over-log2 | li
        #[arg(long)]
        model: String,
        /// Output path (default: input with a .plot extension).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        window: Option<String>,
    },
}

#[derive(Args)]
struct PointArgs {
    /// Evaluation point x.
    #[arg(long, value_parser = parse_u64_sci)]
    x: u64,
    /// Table limit (default: smallest limit covering the computation).
    #[arg(long, value_parser = parse_u64_sci)]
    limit: Option<u64>,
}

#[derive(Subcommand)]
enum SumOp {
    /// sum_{p <= x} Lambda(m p + k) / p
    PairWeighted {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        form: FormArgs,
    },
    /// The inverted double sum over moduli d (must equal pair-weighted when
    /// unrestricted).
    Inversion {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        form: FormArgs,
        /// Impose gcd(d, km) = 1 on the moduli.
        #[arg(long)]
        restricted: bool,
        /// Write the per-modulus ledger as CSV to this path.
        #[arg(long)]
        ledger_out: Option<PathBuf>,
    },
    /// sum over primes p <= x, p ≡ a (mod q) of 1/p or log p / p.
    MertensAp {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_parser = parse_u64_sci)]
        q: u64,
        #[arg(long, value_parser = parse_u64_sci)]
        a: u64,
        /// reciprocal | log
        #[arg(long, default_value = "reciprocal")]
        weight: String,
    },
    /// sum_{n <= x} mu(n) log^j n / n^s
    TwistedMobius {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value = "1")]
        s: f64,
        #[arg(long, default_value = "1")]
        log_power: u8,
        /// Restrict to n coprime to this modulus.
        #[arg(long, value_parser = parse_u64_sci)]
        coprime_to: Option<u64>,
        /// Restrict to n ≡ a (mod q), format a:q.
        #[arg(long)]
        residue: Option<String>,
    },
    /// Pair sum over p with m p + k a proper prime power.
    PrimePowerPair {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        form: FormArgs,
        /// reciprocal | unweighted
        #[arg(long, default_value = "reciprocal")]
        weight: String,
        /// Drop terms with p <= x0.
        #[arg(long, value_parser = parse_u64_sci)]
        x0: Option<u64>,
    },
    /// psi(x, q, a) = sum of Lambda over the progression.
    PsiAp {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_parser = parse_u64_sci)]
        q: u64,
        #[arg(long, value_parser = parse_u64_sci)]
        a: u64,
    },
    /// pi(x, q, a): primes up to x in the progression.
    PiAp {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_parser = parse_u64_sci)]
        q: u64,
        #[arg(long, value_parser = parse_u64_sci)]
        a: u64,
    },
    /// sum_{p <= x} Lambda(m p + k)
    LambdaPair {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        form: FormArgs,
    },
    /// pi_f(x): primes p with m p + k prime and both <= x.
    PairCount {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        form: FormArgs,
    },
    /// sum_{n <= x} Lambda(n) Lambda(m n + k) / n^s
    HlPartial {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value = "1")]
        s: f64,
    },
    /// Tail of the weighted pair sum over x0 < p <= x, split by image type.
    ChebyshevTail {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, value_parser = parse_u64_sci)]
        x0: u64,
    },
}

#[derive(Args)]
struct ScanCommon {
    /// Checkpoint grid lo:hi:ratio (e.g. 1e4:1e8:3.162). Defaults to
    /// 1e3:<limit>:10^(1/4) when --limit is given.
    #[arg(long)]
    grid: Option<String>,
    /// Table limit (default: smallest limit covering the scan).
    #[arg(long, value_parser = parse_u64_sci)]
    limit: Option<u64>,
    /// Output path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ScanCommon {
    fn checkpoints(&self) -> Result<Vec<u64>, Error> {
        let spec = match (&self.grid, self.limit) {
            (Some(g), _) => GridSpec::parse(g)?,
            (None, Some(limit)) => GridSpec::default_scan(limit),
            (None, None) => {
                return Err(Error::usage(
                    "scan needs --grid lo:hi:ratio (or --limit for the default grid)",
                ))
            }
        };
        let cps = spec.checkpoints();
        if cps.is_empty() {
            return Err(Error::usage("empty checkpoint grid"));
        }
        Ok(cps)
    }
}

#[derive(Subcommand)]
enum ScanOp {
    PairWeighted {
        #[command(flatten)]
        common: ScanCommon,
        #[command(flatten)]
        form: FormArgs,
    },
    LambdaPair {
        #[command(flatten)]
        common: ScanCommon,
        #[command(flatten)]
        form: FormArgs,
    },
    PairCount {
        #[command(flatten)]
        common: ScanCommon,
        #[command(flatten)]
        form: FormArgs,
    },
    MertensAp {
        #[command(flatten)]
        common: ScanCommon,
        #[arg(long, value_parser = parse_u64_sci)]
        q: u64,
        #[arg(long, value_parser = parse_u64_sci)]
        a: u64,
        #[arg(long, default_value = "reciprocal")]
        weight: String,
    },
    PsiAp {
        #[command(flatten)]
        common: ScanCommon,
        #[arg(long, value_parser = parse_u64_sci)]
        q: u64,
        #[arg(long, value_parser = parse_u64_sci)]
        a: u64,
    },
    TwistedMobius {
        #[command(flatten)]
        common: ScanCommon,
        #[arg(long, default_value = "1")]
        s: f64,
        #[arg(long, default_value = "1")]
        log_power: u8,
        #[arg(long, value_parser = parse_u64_sci)]
        coprime_to: Option<u64>,
        #[arg(long)]
        residue: Option<String>,
    },
    PrimePowerPair {
        #[command(flatten)]
        common: ScanCommon,
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value = "reciprocal")]
        weight: String,
    },
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long, default_value = "1e7", value_parser = parse_u64_sci)]
    limit: u64,
    /// json | csv | markdown
    #[arg(long, default_value = "json")]
    format: String,
    /// Output path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated claim ids to run (default: all).
    #[arg(long)]
    claims: Option<String>,
    /// Comma-separated claim ids to skip.
    #[arg(long)]
    exclude: Option<String>,
    /// Grid lo:hi:ratio for the trace claims.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, value_parser = parse_u64_sci)]
    qmax: Option<u64>,
    #[arg(long, value_parser = parse_u64_sci)]
    dmax: Option<u64>,
    #[command(flatten)]
    form: FormArgs,
    /// Least-prime search cap exponent.
    #[arg(long)]
    cap_exponent: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
        {
            eprintln!("pairsieve: could not size worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("pairsieve: {e}");
            match e {
                Error::Usage(_) | Error::Range(_) => ExitCode::from(2),
                Error::Internal(_) => ExitCode::from(1),
            }
        }
    }
}

fn warn_parity(form: &LinearForm) {
    if let Some(w) = form.parity_warning() {
        eprintln!("pairsieve: warning: {w}");
    }
}

/// Table limit that covers images of the form at points up to x.
fn needed_limit(form: &LinearForm, x: u64) -> u64 {
    let image = form.m() as i128 * x as i128 + form.k() as i128;
    (image.max(x as i128).max(2)) as u64
}

fn build_table(explicit: Option<u64>, needed: u64) -> Result<PrimeTable, Error> {
    PrimeTable::build(explicit.unwrap_or(needed).max(2))
}

fn write_or_stdout(out: Option<&Path>, bytes: &[u8]) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| Error::usage(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Error::internal(format!("stdout: {e}"))),
    }
}

fn parse_weight(s: &str) -> Result<MertensWeight, Error> {
    match s {
        "reciprocal" => Ok(MertensWeight::Reciprocal),
        "log" | "log-over-p" => Ok(MertensWeight::LogOverP),
        other => Err(Error::usage(format!(
            "unknown --weight '{other}' (reciprocal | log)"
        ))),
    }
}

fn parse_power_weight(s: &str) -> Result<PowerWeight, Error> {
    match s {
        "reciprocal" => Ok(PowerWeight::Reciprocal),
        "unweighted" => Ok(PowerWeight::Unweighted),
        other => Err(Error::usage(format!(
            "unknown --weight '{other}' (reciprocal | unweighted)"
        ))),
    }
}

fn parse_log_power(v: u8) -> Result<LogPower, Error> {
    match v {
        1 => Ok(LogPower::One),
        2 => Ok(LogPower::Two),
        other => Err(Error::usage(format!(
            "--log-power must be 1 or 2, got {other}"
        ))),
    }
}

fn parse_condition(
    coprime_to: Option<u64>,
    residue: Option<&str>,
) -> Result<MobiusCondition, Error> {
    match (coprime_to, residue) {
        (None, None) => Ok(MobiusCondition::Unconditional),
        (Some(q), None) => Ok(MobiusCondition::CoprimeTo(q)),
        (None, Some(spec)) => {
            let parts: Vec<&str> = spec.split(':').collect();
            if parts.len() != 2 {
                return Err(Error::usage(format!("--residue '{spec}' must be a:q")));
            }
            let a = parse_u64_sci(parts[0]).map_err(Error::Usage)?;
            let q = parse_u64_sci(parts[1]).map_err(Error::Usage)?;
            Ok(MobiusCondition::Residue { a, q })
        }
        (Some(_), Some(_)) => Err(Error::usage(
            "--coprime-to and --residue are mutually exclusive",
        )),
    }
}

fn parse_window(spec: Option<&str>) -> Result<Option<(f64, f64)>, Error> {
    match spec {
        None => Ok(None),
        Some(s) => {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 2 {
                return Err(Error::usage(format!("--window '{s}' must be lo:hi")));
            }
            let lo: f64 = parts[0]
                .parse()
                .map_err(|_| Error::usage(format!("bad window bound '{}'", parts[0])))?;
            let hi: f64 = parts[1]
                .parse()
                .map_err(|_| Error::usage(format!("bad window bound '{}'", parts[1])))?;
            Ok(Some((lo, hi)))
        }
    }
}

fn print_value(label: &str, v: f64) {
    println!("{label} = {v:.6}");
    println!("full = {}", sig12(v));
}

fn dispatch(cmd: Command) -> Result<ExitCode, Error> {
    match cmd {
        Command::Sieve {
            limit,
            x,
            segment_words,
        } => {
            let t0 = std::time::Instant::now();
            let table = match segment_words {
                Some(w) => PrimeTable::build_with_segment_words(limit, w.max(1) as usize)?,
                None => PrimeTable::build(limit)?,
            };
            let dt = t0.elapsed();
            println!("limit = {limit}");
            println!("pi(limit) = {}", table.prime_count(limit)?);
            if let Some(x) = x {
                println!("pi({x}) = {}", table.prime_count(x)?);
            }
            eprintln!("pairsieve: built in {dt:?}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { n } => {
            let v = pairsieve_core::arith::evaluate(n)?;
            println!("n = {n}");
            println!("mu = {}", v.mu);
            println!("lambda = {}", sig12(v.lambda));
            println!("phi = {}", v.phi);
            Ok(ExitCode::SUCCESS)
        }
        Command::Sum { op } => run_sum(op),
        Command::Scan { op } => run_scan(op),
        Command::Fit {
            input,
            model,
            window,
        } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| Error::usage(format!("cannot read {}: {e}", input.display())))?;
            let trace = SumTrace::from_csv(&text)?;
            let model = FitModel::parse(&model)?;
            let result = fit(&trace, model, parse_window(window.as_deref())?)?;
            print_fit(&result);
            Ok(ExitCode::SUCCESS)
        }
        Command::Audit(args) => run_audit(args),
        Command::Plot {
            input,
            model,
            out,
            window,
        } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| Error::usage(format!("cannot read {}: {e}", input.display())))?;
            let trace = SumTrace::from_csv(&text)?;
            let model = FitModel::parse(&model)?;
            let result = fit(&trace, model, parse_window(window.as_deref())?)?;
            let script = plot_script(&trace, &result);
            let path = out.unwrap_or_else(|| input.with_extension("plot"));
            std::fs::write(&path, script)
                .map_err(|e| Error::usage(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("pairsieve: wrote {}", path.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_fit(result: &FitResult) {
    println!("model = {}", result.model.name());
    println!("c = {}", sig12(result.c));
    println!("b = {}", sig12(result.b));
    println!("rms_residual = {}", sig12(result.rms_residual));
    println!(
        "window = [{}, {}] ({} points)",
        sig12(result.window.0),
        sig12(result.window.1),
        result.points_used
    );
}

fn run_sum(op: SumOp) -> Result<ExitCode, Error> {
    match op {
        SumOp::PairWeighted { point, form } => {
            let form = form.form()?;
            warn_parity(&form);
            let table = build_table(point.limit, needed_limit(&form, point.x))?;
            print_value(
                &format!(
                    "pair-weighted(x={}, m={}, k={})",
                    point.x,
                    form.m(),
                    form.k()
                ),
                pair_weighted_sum(&table, point.x, form)?,
            );
        }
        SumOp::Inversion {
            point,
            form,
            restricted,
            ledger_out,
        } => {
            let form = form.form()?;
            warn_parity(&form);
            let table = build_table(point.limit, needed_limit(&form, point.x))?;
            let dec = inversion_decomposition(&table, point.x, form, restricted)?;
            print_value(
                &format!(
                    "inversion(x={}, m={}, k={}, restricted={})",
                    point.x,
                    form.m(),
                    form.k(),
                    restricted
                ),
                dec.total,
            );
            println!("moduli in ledger = {}", dec.ledger.len());
            if let Some(path) = ledger_out {
                let mut csv = String::from("d,mu,inner,contribution\n");
                for e in &dec.ledger {
                    csv.push_str(&format!(
                        "{},{},{},{}\n",
                        e.d,
                        e.mu,
                        sig12(e.inner),
                        sig12(e.contribution)
                    ));
                }
                std::fs::write(&path, csv)
                    .map_err(|e| Error::usage(format!("cannot write {}: {e}", path.display())))?;
            }
        }
        SumOp::MertensAp {
            point,
            q,
            a,
            weight,
        } => {
            let ap = APClass::new(a, q)?;
            let weight = parse_weight(&weight)?;
            let table = build_table(point.limit, point.x.max(2))?;
            let r = mertens_ap(&table, point.x, ap, weight)?;
            print_value(&format!("mertens-ap(x={}, a={a}, q={q})", point.x), r.value);
            if let (Some(m), Some(res)) = (r.main, r.residual) {
                println!("main = {}", sig12(m));
                println!("residual = {}", sig12(res));
            }
        }
        SumOp::TwistedMobius {
            point,
            s,
            log_power,
            coprime_to,
            residue,
        } => {
            let lp = parse_log_power(log_power)?;
            let cond = parse_condition(coprime_to, residue.as_deref())?;
            let r = twisted_mobius_sum(point.x, s, lp, cond)?;
            print_value(&format!("twisted-mobius(x={}, s={s})", point.x), r.value);
            if let (Some(t), Some(g)) = (r.limit_target, r.gap) {
                println!("limit_target = {}", sig12(t));
                println!("gap = {}", sig12(g));
            }
        }
        SumOp::PrimePowerPair {
            point,
            form,
            weight,
            x0,
        } => {
            let form = form.form()?;
            let weight = parse_power_weight(&weight)?;
            let table = build_table(point.limit, point.x.max(2))?;
            let v = prime_power_pair_sum(&table, point.x, form, weight, x0)?;
            print_value(
                &format!(
                    "prime-power-pair(x={}, m={}, k={})",
                    point.x,
                    form.m(),
                    form.k()
                ),
                v,
            );
        }
        SumOp::PsiAp { point, q, a } => {
            let table = build_table(point.limit, point.x.max(2))?;
            print_value(
                &format!("psi-ap(x={}, q={q}, a={a})", point.x),
                psi_ap(&table, point.x, q, a)?,
            );
        }
        SumOp::PiAp { point, q, a } => {
            let table = build_table(point.limit, point.x.max(2))?;
            println!(
                "pi-ap(x={}, q={q}, a={a}) = {}",
                point.x,
                pi_ap(&table, point.x, q, a)?
            );
        }
        SumOp::LambdaPair { point, form } => {
            let form = form.form()?;
            warn_parity(&form);
            let table = build_table(point.limit, needed_limit(&form, point.x))?;
            print_value(
                &format!("lambda-pair(x={}, m={}, k={})", point.x, form.m(), form.k()),
                lambda_pair_sum(&table, point.x, form)?,
            );
        }
        SumOp::PairCount { point, form } => {
            let form = form.form()?;
            warn_parity(&form);
            let table = build_table(point.limit, point.x.max(2))?;
            println!(
                "pair-count(x={}, m={}, k={}) = {}",
                point.x,
                form.m(),
                form.k(),
                pair_count(&table, point.x, form)?
            );
        }
        SumOp::HlPartial { point, form, s } => {
            let form = form.form()?;
            warn_parity(&form);
            let table = build_table(point.limit, needed_limit(&form, point.x))?;
            print_value(
                &format!(
                    "hl-partial(x={}, s={s}, m={}, k={})",
                    point.x,
                    form.m(),
                    form.k()
                ),
                hl_partial_sum(&table, point.x, s, form)?,
            );
        }
        SumOp::ChebyshevTail { point, form, x0 } => {
            let form = form.form()?;
            warn_parity(&form);
            let table = build_table(point.limit, needed_limit(&form, point.x))?;
            let t = chebyshev_tail(&table, x0, point.x, form)?;
            print_value(
                &format!(
                    "chebyshev-tail(x0={x0}, x={}, m={}, k={})",
                    point.x,
                    form.m(),
                    form.k()
                ),
                t.total,
            );
            println!("prime_pair_part = {}", sig12(t.prime_pair_part));
            println!("prime_power_part = {}", sig12(t.prime_power_part));
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Scans size the table to cover both the requested limit and every form
/// image on the grid, so a default grid derived from --limit never trips a
/// range error.
fn build_scan_table(explicit: Option<u64>, needed: u64) -> Result<PrimeTable, Error> {
    PrimeTable::build(explicit.unwrap_or(needed).max(needed).max(2))
}

fn run_scan(op: ScanOp) -> Result<ExitCode, Error> {
    let (common, trace) = match op {
        ScanOp::PairWeighted { common, form } => {
            let form = form.form()?;
            warn_parity(&form);
            let grid = common.checkpoints()?;
            let top = *grid.last().unwrap();
            let table = build_scan_table(common.limit, needed_limit(&form, top))?;
            (common, pair_weighted_trace(&table, &grid, form)?)
        }
        ScanOp::LambdaPair { common, form } => {
            let form = form.form()?;
            warn_parity(&form);
            let grid = common.checkpoints()?;
            let top = *grid.last().unwrap();
            let table = build_scan_table(common.limit, needed_limit(&form, top))?;
            (common, lambda_pair_trace(&table, &grid, form)?)
        }
        ScanOp::PairCount { common, form } => {
            let form = form.form()?;
            warn_parity(&form);
            let grid = common.checkpoints()?;
            let top = *grid.last().unwrap();
            let table = build_table(common.limit, top)?;
            (common, pair_count_trace(&table, &grid, form)?)
        }
        ScanOp::MertensAp {
            common,
            q,
            a,
            weight,
        } => {
            let ap = APClass::new(a, q)?;
            let weight = parse_weight(&weight)?;
            let grid = common.checkpoints()?;
            let top = *grid.last().unwrap();
            let table = build_table(common.limit, top)?;
            (common, mertens_ap_trace(&table, &grid, ap, weight)?)
        }
        ScanOp::PsiAp { common, q, a } => {
            let grid = common.checkpoints()?;
            let top = *grid.last().unwrap();
            let table = build_table(common.limit, top)?;
            (common, psi_ap_trace(&table, &grid, q, a)?)
        }
        ScanOp::TwistedMobius {
            common,
            s,
            log_power,
            coprime_to,
            residue,
        } => {
            let lp = parse_log_power(log_power)?;
            let cond = parse_condition(coprime_to, residue.as_deref())?;
            let grid = common.checkpoints()?;
            (common, twisted_mobius_trace(&grid, s, lp, cond)?)
        }
        ScanOp::PrimePowerPair {
            common,
            form,
            weight,
        } => {
            let form = form.form()?;
            let weight = parse_power_weight(&weight)?;
            let grid = common.checkpoints()?;
            let top = *grid.last().unwrap();
            let table = build_table(common.limit, top)?;
            let mut tr = SumTrace::new(
                "prime-power-pair",
                vec![
                    ("m".into(), form.m().to_string()),
                    ("k".into(), form.k().to_string()),
                ],
            );
            for &x in &grid {
                let v = prime_power_pair_sum(&table, x, form, weight, None)?;
                tr.checkpoints.push(TracePoint {
                    x: x as f64,
                    value: v,
                    main: None,
                    residual: None,
                });
            }
            (common, tr)
        }
    };
    if let Some(w) = &trace.warning {
        eprintln!("pairsieve: warning: {w}");
    }
    write_or_stdout(common.out.as_deref(), trace.to_csv().as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn run_audit(args: AuditArgs) -> Result<ExitCode, Error> {
    let mut config = AuditConfig {
        limit: args.limit,
        ..AuditConfig::default()
    };
    if let Some(grid) = &args.grid {
        let g = GridSpec::parse(grid)?;
        config.grid_lo = g.lo;
        config.grid_hi = g.hi;
        config.grid_ratio = g.ratio;
    }
    if let Some(q) = args.qmax {
        config.q_max = q;
    }
    if let Some(d) = args.dmax {
        config.d_max = d;
    }
    if let Some(c) = args.cap_exponent {
        config.linnik_cap_exponent = c;
    }
    config.form_m = args.form.m;
    config.form_k = args.form.k;
    let split_ids = |s: &str| -> Vec<String> {
        s.split(',')
            .map(|t| t.trim().to_string())
            .filter(|t| !t.is_empty())
            .collect()
    };
    if let Some(claims) = &args.claims {
        config.include = Some(split_ids(claims));
    }
    if let Some(exclude) = &args.exclude {
        config.exclude = split_ids(exclude);
    }
    let format = RenderFormat::parse(&args.format)?;
    let report = run_all(&config)?;
    for c in &report.claims {
        eprintln!("pairsieve: {:6} {}", c.claim_id, c.status.as_str());
    }
    let bytes = render(&report, format)?;
    write_or_stdout(args.out.as_deref(), &bytes)?;
    exact_claims_hold(&report)
}

/// Exit 1 when a claim that must be an exact identity is not exact-pass:
/// that means the library disagrees with itself, not that the audited
/// source is wrong.
fn exact_claims_hold(report: &AuditReport) -> Result<ExitCode, Error> {
    for c in &report.claims {
        if matches!(c.claim_id.as_str(), "C-04" | "C-42") && c.status != ClaimStatus::ExactPass {
            eprintln!(
                "pairsieve: exact identity {} reported {}, which indicates an internal \
                 inconsistency",
                c.claim_id,
                c.status.as_str()
            );
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Self-contained gnuplot script: the trace data and a densely sampled
/// fitted curve, value vs x on a logarithmic axis.
fn plot_script(trace: &SumTrace, fit_result: &FitResult) -> String {
    let mut s = String::new();
    s.push_str("# gnuplot script generated by pairsieve\n");
    s.push_str("set logscale x\n");
    s.push_str("set xlabel \"x\"\n");
    s.push_str("set ylabel \"value\"\n");
    s.push_str("set key left top\n");
    s.push_str("$DATA << EOD\n");
    for c in &trace.checkpoints {
        s.push_str(&format!("{} {}\n", sig12(c.x), sig12(c.value)));
    }
    s.push_str("EOD\n");
    s.push_str("$FIT << EOD\n");
    let (lo, hi) = fit_result.window;
    let n = 200;
    for i in 0..=n {
        let x = lo * (hi / lo).powf(i as f64 / n as f64);
        let y = fit_result.c * fit_result.model.basis(x) + fit_result.b;
        s.push_str(&format!("{} {}\n", sig12(x), sig12(y)));
    }
    s.push_str("EOD\n");
    s.push_str(&format!(
        "plot $DATA using 1:2 with points pt 7 title \"trace\", \\\n     $FIT using 1:2 with lines title \"{} (c={}, b={})\"\n",
        fit_result.model.name(),
        sig12(fit_result.c),
        sig12(fit_result.b)
    ));
    s
}
