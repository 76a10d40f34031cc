use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hypersmt::error::Error;
use hypersmt::filtration::{compute_b, filtration_dims, filtration_quotient_violations};
use hypersmt::nevanlinna::{characteristic_t, fmt_residual};
use hypersmt::scenario::ScenarioFile;
use hypersmt::selftest;
use hypersmt::smt::{emit_report, fmt_real, smt_margins, smt_meta, ReportFormat, ReportMeta, SmtVariant, Table};
use hypersmt::variety::{check_position, construct_replacement, PositionVerdict, DEFAULT_MAX_RETRIES};
use hypersmt::weights::{chow_lower_bound_margin, chow_weight_report, hilbert_chow_margin, hilbert_weight};

const GRAMMAR: &str = "\
Scenario files are line oriented: `[section]` headers, `key = value` lines, `#` comments.

  [variety]        n = 2, generator = x0*x2 - x1^2   (repeat generator; none means P^n)
  [hypersurfaces]  poly = x0 + x1, degree = 1        (degree is optional and checked)
  [curve]          component = 1, component = z, component = exp(2*z) - i*z
  [params]         N, epsilon, r_grid = 10, 20, 50 | r_from, r_to, r_points, r_log_spacing,
                   truncation = auto | INT, seed, precision, degree_cap, hilbert_max
  [weights]        chow_form, m = 2, 5, weight = 1, 0, 0 (repeat), subset = 0, 1
  [filtration]     n, u, form (repeat n times)

Polynomials use variables x0..xn, rational coefficients (3/2), `*`, `^`, `+`, `-`.
Bracket polynomials are sums of terms like `3/2 * [0,1][1,2]` or `[0,2]^2`.
Curve components use `z`, `i`, integer or rational constants, `exp(poly)` and parentheses.

Exit codes: 0 success, 2 violated inequality or position, 3 inconclusive certificate, 4 input error.";

#[derive(Parser)]
#[command(name = "hypersmt", version, about = "Certified ideal computations and value distribution checks for entire curves", after_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Which inequality to check: 1.1 (subgeneral position in V) or 1.3 (projective space).
    #[arg(long, global = true, default_value = "1.1")]
    theorem: String,
    /// Seed for every randomized step; overrides the scenario.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Working precision in bits; overrides the scenario.
    #[arg(long, global = true)]
    precision: Option<usize>,
    /// Degree cap for Hilbert computations; overrides the scenario.
    #[arg(long, global = true)]
    degree_cap: Option<u32>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value = "csv")]
    format: String,
    /// Use the truncation level as derived inside the proof (p^k in place of l^k).
    #[arg(long, global = true)]
    proof_version_m0: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Certify that every N+1 hypersurfaces have empty common zeros on V.
    CheckPosition { scenario: PathBuf },
    /// Build the replacement hypersurfaces P_1..P_{k+1} with a verified dimension chain.
    ConstructGp { scenario: PathBuf },
    /// Hilbert function table of V.
    Hilbert { scenario: PathBuf },
    /// Hilbert and Chow weights with their inequality margins.
    Weights { scenario: PathBuf },
    /// Filtration dimensions and quotient checks.
    Filtration { scenario: PathBuf },
    /// Characteristic, counting and proximity functions with first-main-theorem residuals.
    Nevanlinna { scenario: PathBuf },
    /// Truncated second-main-theorem margins on the radius grid.
    Smt { scenario: PathBuf },
    /// Run the acceptance suite.
    Selftest,
}

enum Status {
    Ok,
    Violation(String),
    Inconclusive(String),
}

struct Ctx {
    file: ScenarioFile,
    seed: u64,
    precision: usize,
}

impl Ctx {
    fn load(path: &Path, opts: &Opts) -> Result<Self, Error> {
        let mut file = ScenarioFile::load(path).map_err(|e| match e {
            Error::Io(io) => Error::InvalidInput(format!("{}: {io}", path.display())),
            other => other,
        })?;
        if let Some(cap) = opts.degree_cap {
            file.params.degree_cap = Some(cap);
        }
        if let Some(p) = opts.precision {
            file.params.precision = p;
        }
        let seed = opts.seed.unwrap_or(file.params.seed);
        let precision = file.params.precision;
        Ok(Self { file, seed, precision })
    }

    fn meta(&self) -> Result<ReportMeta, Error> {
        let v = self.file.variety()?;
        Ok(ReportMeta::new(self.seed, self.precision, v.degree_cap()))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Inconclusive(_)
        | Error::UnstableHilbert { .. }
        | Error::RetriesExhausted { .. }
        | Error::DegenerateSamples { .. }
        | Error::ChowRouteDisagreement { .. }
        | Error::NonConvergence { .. }
        | Error::WindingNotInteger { .. } => 3,
        _ => 4,
    }
}

fn write(table: &Table, meta: &ReportMeta, opts: &Opts) -> Result<(), Error> {
    let format = ReportFormat::parse(&opts.format)?;
    let text = emit_report(table, meta, format, opts.out.as_deref())?;
    if opts.out.is_none() {
        print!("{text}");
    }
    Ok(())
}

fn one_based(s: &[usize]) -> String {
    s.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ")
}

fn check_position_cmd(ctx: &Ctx, opts: &Opts) -> Result<Status, Error> {
    let v = ctx.file.variety()?;
    let level = ctx.file.level()?;
    let rep = check_position(&v, &ctx.file.hypersurfaces, level)?;
    let mut t = Table::new(&["subset", "certificate"]);
    for (s, e) in &rep.certificates {
        t.rows.push(vec![one_based(s), e.to_string()]);
    }
    let mut meta = ctx.meta()?;
    meta.push("level", level.to_string());
    meta.push("verdict", format!("{:?}", rep.verdict));
    if let Some(w) = &rep.witness {
        meta.push("witness", one_based(w));
    }
    write(&t, &meta, opts)?;
    Ok(match rep.verdict {
        PositionVerdict::Holds => Status::Ok,
        PositionVerdict::Fails => Status::Violation(format!(
            "hypersurfaces {} have a common zero on V",
            one_based(rep.witness.as_deref().unwrap_or_default())
        )),
        PositionVerdict::Inconclusive => Status::Inconclusive("some subsets could not be certified at the degree cap".into()),
    })
}

fn construct_gp_cmd(ctx: &Ctx, opts: &Opts) -> Result<Status, Error> {
    let v = ctx.file.variety()?;
    let sys = construct_replacement(&v, &ctx.file.hypersurfaces, ctx.seed, DEFAULT_MAX_RETRIES)?;
    let mut t = Table::new(&["t", "coefficients", "polynomial", "chain_dim", "attempts"]);
    for (i, p) in sys.polys.iter().enumerate() {
        let coeffs = if i == 0 {
            String::new()
        } else {
            sys.coefficients[i - 1].iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
        };
        let attempts = if i == 0 { 0 } else { sys.attempts[i - 1] };
        t.rows.push(vec![(i + 1).to_string(), coeffs, p.to_string(), sys.chain_dims[i].to_string(), attempts.to_string()]);
    }
    let mut meta = ctx.meta()?;
    meta.push("max_retries", DEFAULT_MAX_RETRIES.to_string());
    write(&t, &meta, opts)?;
    Ok(Status::Ok)
}

fn hilbert_cmd(ctx: &Ctx, opts: &Opts) -> Result<Status, Error> {
    let v = ctx.file.variety()?;
    let mut t = Table::new(&["m", "H"]);
    for m in 0..=ctx.file.params.hilbert_max {
        t.rows.push(vec![m.to_string(), v.hilbert_function(m).to_string()]);
    }
    let mut meta = ctx.meta()?;
    meta.push("dimension", v.estimate_dimension()?.to_string());
    if let Ok(deg) = v.degree() {
        meta.push("degree", deg.to_string());
    }
    meta.push("emptiness", v.certify_empty().to_string());
    write(&t, &meta, opts)?;
    Ok(Status::Ok)
}

fn weights_cmd(ctx: &Ctx, opts: &Opts) -> Result<Status, Error> {
    let v = ctx.file.variety()?;
    let w = ctx
        .file
        .weights
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("missing [weights] section".into()))?;
    if w.weights.is_empty() {
        return Err(Error::InvalidInput("no `weight` lines in [weights]".into()));
    }
    let mut t = Table::new(&["weight", "m", "S", "H", "e", "hilbert_chow_margin", "lower_bound_margin"]);
    let mut negative = Vec::new();
    for c in &w.weights {
        if c.len() != v.n_vars() {
            return Err(Error::InvalidInput(format!("weight {c} needs {} entries", v.n_vars())));
        }
        let e = match &w.chow_form {
            Some(f) => Some(chow_weight_report(f, c, ctx.seed)?.value),
            None => None,
        };
        let lower = match (&w.chow_form, &w.subset) {
            // the lower bound only applies to positive weights
            (Some(f), Some(s)) if c.min() > 0 => {
                let margin = chow_lower_bound_margin(&v, f, c, s, ctx.seed)?;
                if margin.numer() < &0.into() {
                    negative.push(format!("lower bound at c = {c}"));
                }
                margin.to_string()
            }
            _ => String::new(),
        };
        for &m in &w.m {
            let hw = hilbert_weight(&v, m, c)?;
            let margin = match &w.chow_form {
                Some(f) => {
                    let margin = hilbert_chow_margin(&v, f, m, c, ctx.seed)?;
                    if margin.numer() < &0.into() {
                        negative.push(format!("Hilbert/Chow at c = {c}, m = {m}"));
                    }
                    margin.to_string()
                }
                None => String::new(),
            };
            t.rows.push(vec![
                c.to_string(),
                m.to_string(),
                hw.s.to_string(),
                hw.basis.len().to_string(),
                e.map(|e| e.to_string()).unwrap_or_default(),
                margin,
                lower.clone(),
            ]);
        }
    }
    write(&t, &ctx.meta()?, opts)?;
    Ok(if negative.is_empty() {
        Status::Ok
    } else {
        Status::Violation(format!("negative margins: {}", negative.join("; ")))
    })
}

fn filtration_cmd(ctx: &Ctx, opts: &Opts) -> Result<Status, Error> {
    let p = ctx
        .file
        .filtration
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("missing [filtration] section".into()))?;
    let table = filtration_dims(p)?;
    let bad = filtration_quotient_violations(&table);
    let b = compute_b(&table);
    let mut t = Table::new(&["index", "dim", "quotient", "violation"]);
    for ((i, dim), m) in table.indices.iter().zip(&table.dims).zip(&table.m) {
        let idx = i.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
        t.rows.push(vec![idx, dim.to_string(), m.to_string(), bad.contains(i).to_string()]);
    }
    let mut meta = ctx.meta()?;
    meta.push("n", table.n.to_string());
    meta.push("d", table.d.to_string());
    meta.push("u", table.u.to_string());
    meta.push("b_bound", b.bound.to_string());
    for (j, (bj, mj)) in b.b.iter().zip(&b.margins).enumerate() {
        meta.push(format!("b{}", j + 1), format!("{bj} (margin {mj})"));
    }
    write(&t, &meta, opts)?;
    Ok(if bad.is_empty() && b.all_nonnegative() {
        Status::Ok
    } else {
        Status::Violation(format!("{} quotient violations; b bound holds: {}", bad.len(), b.all_nonnegative()))
    })
}

const FMT_DRIFT_LIMIT: f64 = 1e-6;

fn nevanlinna_cmd(ctx: &Ctx, opts: &Opts) -> Result<Status, Error> {
    let f = ctx.file.curve()?;
    let cfg = ctx.file.quadrature();
    let grid = &ctx.file.params.r_grid;
    if grid.is_empty() {
        return Err(Error::InvalidInput("missing r grid in [params]".into()));
    }
    let mut t = Table::new(&["hypersurface", "r", "r_used", "T", "N", "m", "residual"]);
    let mut meta = ctx.meta()?;
    if ctx.file.hypersurfaces.is_empty() {
        for &r in grid {
            let tv = characteristic_t(f, r, &cfg)?;
            t.rows.push(vec![String::new(), fmt_real(r), fmt_real(r), fmt_real(tv), String::new(), String::new(), String::new()]);
        }
    }
    let mut drift = Vec::new();
    for (i, q) in ctx.file.hypersurfaces.iter().enumerate() {
        let rep = fmt_residual(f, q, grid, &cfg)?;
        for row in &rep.rows {
            t.rows.push(vec![
                (i + 1).to_string(),
                fmt_real(row.r),
                fmt_real(row.r_used),
                fmt_real(row.t),
                fmt_real(row.n),
                fmt_real(row.m),
                fmt_real(row.residual),
            ]);
        }
        meta.push(format!("max_deviation.{}", i + 1), fmt_real(rep.max_deviation));
        if !(rep.max_deviation < FMT_DRIFT_LIMIT) {
            drift.push(i + 1);
        }
    }
    meta.push("nodes", cfg.nodes.to_string());
    meta.push("tolerance", fmt_real(cfg.tolerance));
    write(&t, &meta, opts)?;
    Ok(if drift.is_empty() {
        Status::Ok
    } else {
        Status::Violation(format!("first-main-theorem residual drifts above {FMT_DRIFT_LIMIT:e} for hypersurfaces {drift:?}"))
    })
}

fn smt_cmd(ctx: &Ctx, opts: &Opts) -> Result<Status, Error> {
    let variant = SmtVariant::parse(&opts.theorem)?;
    let s = ctx.file.smt_scenario()?;
    let rep = match smt_margins(&s, variant, ctx.file.params.truncation, opts.proof_version_m0, &ctx.file.quadrature()) {
        Err(Error::Precondition(msg)) if msg.contains("witness") => return Ok(Status::Violation(msg)),
        other => other?,
    };
    if rep.truncation_below_calculator {
        eprintln!(
            "warning: truncation {} is below the calculator value {}",
            rep.truncation, rep.calculator.m0
        );
    }
    let meta = smt_meta(&rep, ctx.meta()?);
    write(&Table::smt(&rep), &meta, opts)?;
    Ok(if rep.all_nonnegative() {
        Status::Ok
    } else {
        let bad: Vec<String> = rep.rows.iter().filter(|r| r.margin < 0.0).map(|r| fmt_real(r.r)).collect();
        Status::Violation(format!("negative margin at r = {}", bad.join(", ")))
    })
}

fn selftest_cmd(opts: &Opts) -> Result<Status, Error> {
    let seed = opts.seed.unwrap_or(0);
    let outcomes = selftest::run_all(seed);
    for o in &outcomes {
        eprintln!("{} ({:.2}s, budget {}s)", o.line(), o.elapsed.as_secs_f64(), o.budget.as_secs());
    }
    let text = selftest::render_report(&outcomes, seed);
    match &opts.out {
        Some(p) => std::fs::write(p, &text)?,
        None => print!("{text}"),
    }
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id.to_string()).collect();
    Ok(if failed.is_empty() {
        Status::Ok
    } else {
        Status::Violation(format!("failed criteria: {}", failed.join(", ")))
    })
}

fn run(cli: &Cli) -> Result<Status, Error> {
    let opts = &cli.opts;
    ReportFormat::parse(&opts.format)?;
    SmtVariant::parse(&opts.theorem)?;
    let scenario = match &cli.command {
        Command::Selftest => return selftest_cmd(opts),
        Command::CheckPosition { scenario }
        | Command::ConstructGp { scenario }
        | Command::Hilbert { scenario }
        | Command::Weights { scenario }
        | Command::Filtration { scenario }
        | Command::Nevanlinna { scenario }
        | Command::Smt { scenario } => scenario,
    };
    let ctx = Ctx::load(scenario, opts)?;
    match &cli.command {
        Command::CheckPosition { .. } => check_position_cmd(&ctx, opts),
        Command::ConstructGp { .. } => construct_gp_cmd(&ctx, opts),
        Command::Hilbert { .. } => hilbert_cmd(&ctx, opts),
        Command::Weights { .. } => weights_cmd(&ctx, opts),
        Command::Filtration { .. } => filtration_cmd(&ctx, opts),
        Command::Nevanlinna { .. } => nevanlinna_cmd(&ctx, opts),
        Command::Smt { .. } => smt_cmd(&ctx, opts),
        Command::Selftest => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Violation(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(2)
        }
        Ok(Status::Inconclusive(msg)) => {
            eprintln!("inconclusive: {msg}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
