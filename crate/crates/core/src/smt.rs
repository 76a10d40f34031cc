//! Truncation levels and parameter choices for the second main theorems,
//! scenario margins, and report output.

use std::fmt;
use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::{binomial, binomial_big, HomogeneousPolynomial};
use crate::error::{Error, Result};
use crate::nevanlinna::{
    counting_from_zeros, mean_log_norm, zeros_in_disk, EntireCurve, QuadratureConfig, ZeroList,
};
use crate::variety::{check_position, PositionReport, PositionVerdict, VarietyDescriptor};

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn int(v: u64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// `ceil(x)` for a positive rational.
pub fn ceil_rational(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}

/// Exact enclosure `[lo, hi]` of `e` from its Taylor partial sum with `terms` terms.
fn e_enclosure(terms: u32) -> (BigRational, BigRational) {
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    for j in 0..=terms {
        if j > 0 {
            term /= int(j as u64);
        }
        sum += &term;
    }
    // tail sum_{j > N} 1/j! < 1/(N! N)
    let tail = &term / int(terms as u64);
    (sum.clone(), sum + tail)
}

/// `floor(factor * e^k + offset)`, certified by rational enclosures of `e`,
/// together with a rational approximation of the value within `10^-30` relative.
fn floor_times_e_power(factor: &BigRational, k: u32, offset: &BigRational) -> (BigInt, BigRational) {
    debug_assert!(factor.is_positive());
    let mut terms = 24;
    loop {
        let (lo, hi) = e_enclosure(terms);
        let vlo = factor * num_traits::pow(lo, k as usize) + offset;
        let vhi = factor * num_traits::pow(hi, k as usize) + offset;
        let width = &vhi - &vlo;
        let scale = vhi.abs().max(BigRational::one());
        if vlo.floor() == vhi.floor() && width * BigRational::from_integer(num_traits::pow(BigInt::from(10), 30)) < scale {
            let mid = (&vlo + &vhi) / rat(2);
            return (vlo.floor().to_integer(), mid);
        }
        terms *= 2;
    }
}

/// Decimal expansion of `q` with `digits` fractional digits (truncated toward zero).
pub fn rational_to_decimal(q: &BigRational, digits: usize) -> String {
    let neg = q.is_negative();
    let a = q.abs();
    let scaled = (a * BigRational::from_integer(num_traits::pow(BigInt::from(10), digits))).floor().to_integer();
    let s = scaled.to_string();
    let s = if s.len() <= digits { format!("{}{s}", "0".repeat(digits + 1 - s.len())) } else { s };
    let (i, f) = s.split_at(s.len() - digits);
    let body = if digits == 0 { i.to_string() } else { format!("{i}.{f}") };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationResult {
    /// `floor(raw)`.
    pub m0: BigInt,
    /// The formula's value, accurate to about 30 significant digits.
    pub raw: BigRational,
    pub formula: String,
    pub inputs: Vec<(String, String)>,
}

impl TruncationResult {
    pub fn raw_decimal(&self) -> String {
        rational_to_decimal(&self.raw, 12)
    }

    /// `M0` as a machine integer, saturating (truncation levels beyond any multiplicity act alike).
    pub fn m0_u64(&self) -> u64 {
        self.m0.to_u64().unwrap_or(u64::MAX)
    }
}

fn check_eps(eps: &BigRational) -> Result<()> {
    if !eps.is_positive() {
        return Err(Error::InvalidInput(format!("epsilon = {eps} must be positive")));
    }
    Ok(())
}

/// `l_u = C(l + u - 1, u) - 1`.
pub fn l_u(l: u64, u: u64) -> BigInt {
    BigInt::from(binomial_big(l + u - 1, u)) - 1
}

fn factorial(q: u64) -> BigInt {
    (1..=q).fold(BigInt::one(), |acc, i| acc * i)
}

/// Truncation level for `q` hypersurfaces in `N`-subgeneral position on a
/// `k`-dimensional variety:
/// `floor(deg V^{k+1} e^k d^{k^2+k} p^k (2k+4)^k l^k eps^-k)`, `p = N-k+1`, `l = (k+1) q!`.
///
/// With `proof_version`, the variant
/// `deg V^{k+1} e^k d^{k^2+k} (N-k+1)^k (2k+4)^k p^k eps^-k` (no `l`) is used instead.
pub fn truncation_level_subgeneral(
    deg_v: u64,
    k: u64,
    n_level: u64,
    d: u64,
    q: u64,
    eps: &BigRational,
    proof_version: bool,
) -> Result<TruncationResult> {
    check_eps(eps)?;
    if k < 1 || k > n_level {
        return Err(Error::InvalidInput(format!("need 1 <= k <= N, got k = {k}, N = {n_level}")));
    }
    if d < 1 || q < 1 || deg_v < 1 {
        return Err(Error::InvalidInput("d, q and deg V must be at least 1".into()));
    }
    let p = n_level - k + 1;
    let l = BigInt::from(k + 1) * factorial(q);
    let kk = k as usize;
    let mut factor = BigRational::from_integer(num_traits::pow(BigInt::from(deg_v), kk + 1))
        * BigRational::from_integer(num_traits::pow(BigInt::from(d), kk * kk + kk))
        * BigRational::from_integer(num_traits::pow(BigInt::from(p), kk))
        * BigRational::from_integer(num_traits::pow(BigInt::from(2 * k + 4), kk))
        / num_traits::pow(eps.clone(), kk);
    let formula = if proof_version {
        factor *= BigRational::from_integer(num_traits::pow(BigInt::from(p), kk));
        "floor(degV^(k+1) e^k d^(k^2+k) (N-k+1)^k (2k+4)^k p^k eps^-k)  [proof-closing variant without l]"
    } else {
        factor *= BigRational::from_integer(num_traits::pow(l.clone(), kk));
        "floor(degV^(k+1) e^k d^(k^2+k) p^k (2k+4)^k l^k eps^-k)"
    };
    let (m0, raw) = floor_times_e_power(&factor, k as u32, &BigRational::zero());
    let inputs = vec![
        ("degV".into(), deg_v.to_string()),
        ("k".into(), k.to_string()),
        ("N".into(), n_level.to_string()),
        ("d".into(), d.to_string()),
        ("q".into(), q.to_string()),
        ("eps".into(), eps.to_string()),
        ("p".into(), p.to_string()),
        ("l".into(), l.to_string()),
    ];
    Ok(TruncationResult { m0, raw, formula: formula.into(), inputs })
}

/// Truncation level for hypersurfaces in `N`-subgeneral position in `P^n`:
/// `floor(4 (e d p (n+1)^2 ceil(1/eps))^n - 1)` with `p = N-n+1`.
pub fn truncation_level_projective(n: u64, n_level: u64, d: u64, eps: &BigRational) -> Result<TruncationResult> {
    check_eps(eps)?;
    if n < 1 || n_level < n {
        return Err(Error::InvalidInput(format!("need N >= n >= 1, got n = {n}, N = {n_level}")));
    }
    if d < 1 {
        return Err(Error::InvalidInput("d must be at least 1".into()));
    }
    let p = n_level - n + 1;
    let i = ceil_rational(&(BigRational::one() / eps));
    let base = BigRational::from_integer(BigInt::from(d * p * (n + 1) * (n + 1)) * &i);
    let factor = rat(4) * num_traits::pow(base, n as usize);
    let (m0, raw) = floor_times_e_power(&factor, n as u32, &rat(-1));
    let inputs = vec![
        ("n".into(), n.to_string()),
        ("N".into(), n_level.to_string()),
        ("d".into(), d.to_string()),
        ("eps".into(), eps.to_string()),
        ("p".into(), p.to_string()),
        ("ceil(1/eps)".into(), i.to_string()),
    ];
    Ok(TruncationResult { m0, raw, formula: "floor(4 (e d p (n+1)^2 ceil(1/eps))^n - 1)".into(), inputs })
}

/// `u = floor(C/eps) + 1` and `eps' = eps - C/u > 0` for `C = (N-k+1)(2k+1)(k+1) p Δ`.
pub fn choose_u_subgeneral(n_level: u64, k: u64, p: u64, delta: u64, eps: &BigRational) -> Result<(BigInt, BigRational)> {
    check_eps(eps)?;
    if k < 1 || k > n_level || p < 1 || delta < 1 {
        return Err(Error::InvalidInput("need 1 <= k <= N and p, Δ >= 1".into()));
    }
    let c = BigInt::from((n_level - k + 1) * (2 * k + 1) * (k + 1) * p * delta);
    let u: BigInt = (BigRational::from_integer(c.clone()) / eps).floor().to_integer() + 1;
    let eps_prime = eps - BigRational::new(c, u.clone());
    debug_assert!(eps_prime.is_positive() && &eps_prime < eps);
    Ok((u, eps_prime))
}

/// `u = (n+1) d + p (n+1)^3 ceil(1/eps) d`, with the ratio `(n+1) d / (u - (n+1) d)`.
pub fn choose_u_projective(n: u64, d: u64, p: u64, eps: &BigRational) -> Result<(BigInt, BigRational)> {
    check_eps(eps)?;
    if n < 1 || d < 1 || p < 1 {
        return Err(Error::InvalidInput("n, d and p must be at least 1".into()));
    }
    let i = ceil_rational(&(BigRational::one() / eps));
    let head = BigInt::from((n + 1) * d);
    let u = &head + BigInt::from(p * (n + 1).pow(3) * d) * i;
    let ratio = BigRational::new(head.clone(), &u - &head);
    let bound = BigRational::new(1.into(), BigInt::from((n + 1) * (n + 1)));
    if ratio > bound {
        return Err(Error::Precondition(format!("ratio {ratio} exceeds {bound}")));
    }
    debug_assert!(u.is_multiple_of(&BigInt::from(d)));
    Ok((u, ratio))
}

/// `(1 + x)^n <= 1 + (n+1) x`, exactly, for `0 < x <= 1/(n+1)^2`.
pub fn binomial_power_bound_holds(n: u64, x: &BigRational) -> Result<bool> {
    let limit = BigRational::new(1.into(), BigInt::from((n + 1) * (n + 1)));
    if !x.is_positive() || x > &limit {
        return Err(Error::InvalidInput(format!("x = {x} outside (0, {limit}]")));
    }
    let lhs = num_traits::pow(BigRational::one() + x, n as usize);
    Ok(lhs <= BigRational::one() + int(n + 1) * x)
}

/// `H_Y(u) - 1 <= Δ C(k+u, k)` for the variety `Y`.
pub fn hilbert_growth_bound_holds(y: &VarietyDescriptor, u: u32) -> Result<bool> {
    let k = y.dimension()? as u64;
    let delta = y.degree()?;
    let h = y.hilbert_function(u);
    Ok(h.saturating_sub(1) as u128 <= delta as u128 * binomial(k + u as u64, k) as u128)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmtVariant {
    /// Hypersurfaces in `N`-subgeneral position with respect to a `k`-dimensional `V`.
    Subgeneral,
    /// Hypersurfaces in `N`-subgeneral position in `P^n`.
    Projective,
}

impl SmtVariant {
    /// Accepts `1.1`/`subgeneral` and `1.3`/`projective`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "1.1" | "subgeneral" => Ok(Self::Subgeneral),
            "1.3" | "projective" => Ok(Self::Projective),
            _ => Err(Error::InvalidInput(format!("unknown theorem `{s}` (expected 1.1 or 1.3)"))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Subgeneral => "1.1",
            Self::Projective => "1.3",
        }
    }
}

impl fmt::Display for SmtVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    Auto,
    Fixed(u64),
}

#[derive(Clone, Debug)]
pub struct SmtScenario {
    pub variety: VarietyDescriptor,
    pub hypersurfaces: Vec<HomogeneousPolynomial>,
    /// Subgeneral position level `N`.
    pub level: usize,
    pub epsilon: BigRational,
    pub curve: EntireCurve,
    pub r_grid: Vec<f64>,
}

impl SmtScenario {
    /// `lcm(d_1, .., d_q)`.
    pub fn d(&self) -> u64 {
        self.hypersurfaces.iter().fold(1u64, |acc, h| acc.lcm(&(h.degree() as u64)))
    }

    pub fn validate(&self) -> Result<()> {
        check_eps(&self.epsilon)?;
        let q = self.hypersurfaces.len();
        if q < self.level + 1 {
            return Err(Error::Precondition(format!("q = {q} < N + 1 = {}", self.level + 1)));
        }
        if self.curve.n() != self.variety.n() {
            return Err(Error::InvalidInput(format!(
                "curve maps to P^{}, variety lives in P^{}",
                self.curve.n(),
                self.variety.n()
            )));
        }
        if let Some(h) = self.hypersurfaces.iter().find(|h| h.n_vars() != self.variety.n_vars() || h.is_zero()) {
            return Err(Error::InvalidInput(format!("hypersurface `{h}` is zero or has the wrong number of variables")));
        }
        let k = self.variety.dimension()? as usize;
        if self.level < k {
            return Err(Error::Precondition(format!("N = {} below dim V = {k}", self.level)));
        }
        if !self.curve.lies_in(&self.variety)? {
            return Err(Error::Precondition("the curve does not lie in V".into()));
        }
        for &r in &self.r_grid {
            if !(r >= 1.0) || !r.is_finite() {
                return Err(Error::InvalidInput(format!("grid radius {r} must be >= 1")));
            }
        }
        if self.r_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("r grid must be strictly increasing".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmtRow {
    pub r: f64,
    pub t: f64,
    /// `sum_i N^{[M]}_{Q_i(f)}(r) / d_i`.
    pub n_truncated_sum: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub flags: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct SmtReport {
    pub variant: SmtVariant,
    pub truncation: u64,
    pub calculator: TruncationResult,
    /// Explicit truncation below the calculator's value.
    pub truncation_below_calculator: bool,
    pub coefficient: BigRational,
    pub vacuous: bool,
    pub position: PositionReport,
    pub notes: Vec<String>,
    pub rows: Vec<SmtRow>,
}

impl SmtReport {
    pub fn all_nonnegative(&self) -> bool {
        self.rows.iter().all(|r| r.margin >= 0.0)
    }
}

struct Counting {
    weight: f64,
    zeros: ZeroList,
}

/// Margins `sum_i N^{[M]}_{Q_i(f)}(r) / d_i - coefficient * T_f(r)` on the scenario grid.
pub fn smt_margins(
    s: &SmtScenario,
    variant: SmtVariant,
    truncation: Truncation,
    proof_version: bool,
    cfg: &QuadratureConfig,
) -> Result<SmtReport> {
    s.validate()?;
    let q = s.hypersurfaces.len() as u64;
    let n_level = s.level as u64;
    let d = s.d();
    let mut notes = Vec::new();
    let (position, calculator, coefficient) = match variant {
        SmtVariant::Subgeneral => {
            let k = s.variety.dimension()? as u64;
            let position = check_position(&s.variety, &s.hypersurfaces, s.level)?;
            let calc = truncation_level_subgeneral(s.variety.degree()?, k, n_level, d, q, &s.epsilon, proof_version)?;
            let coeff = int(q) - int((n_level - k + 1) * (k + 1)) - &s.epsilon;
            (position, calc, coeff)
        }
        SmtVariant::Projective => {
            let n = s.variety.n() as u64;
            if n_level < n {
                return Err(Error::Precondition(format!("N = {n_level} below n = {n}")));
            }
            let ambient = VarietyDescriptor::projective_space(s.variety.n()).with_degree_cap(s.variety.degree_cap());
            let position = check_position(&ambient, &s.hypersurfaces, s.level)?;
            if !s.variety.generators().is_empty() {
                notes.push("curve lies in a proper subvariety of P^n; it is algebraically degenerate there".into());
            }
            let calc = truncation_level_projective(n, n_level, d, &s.epsilon)?;
            let coeff = int(q) - int((n_level - n + 1) * (n + 1)) - &s.epsilon;
            (position, calc, coeff)
        }
    };
    match position.verdict {
        PositionVerdict::Holds => {}
        PositionVerdict::Fails => {
            return Err(Error::Precondition(format!(
                "hypersurfaces are not in {}-subgeneral position; witness subset {:?}",
                s.level,
                position.witness.as_ref().map(|w| w.iter().map(|i| i + 1).collect::<Vec<_>>())
            )));
        }
        PositionVerdict::Inconclusive => {
            return Err(Error::Inconclusive(format!("position at level {} could not be certified", s.level)));
        }
    }
    let (m, below) = match truncation {
        Truncation::Auto => (calculator.m0_u64(), false),
        Truncation::Fixed(m) => (m, BigInt::from(m) < calculator.m0),
    };
    let vacuous = !coefficient.is_positive();
    let r_max = s.r_grid.iter().copied().fold(1.0, f64::max);
    let counts = s
        .hypersurfaces
        .iter()
        .map(|h| {
            let g = s.curve.compose(h)?;
            if g.is_zero() {
                return Err(Error::Precondition(format!("{h} vanishes identically on the curve")));
            }
            Ok(Counting { weight: 1.0 / h.degree() as f64, zeros: zeros_in_disk(&g, r_max, cfg)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let coeff = coefficient.to_f64().unwrap_or(f64::NAN);
    let t_one = mean_log_norm(&s.curve, 1.0, cfg)?;
    let rows = s
        .r_grid
        .par_iter()
        .map(|&r| {
            let t = mean_log_norm(&s.curve, r, cfg)? - t_one;
            let n_truncated_sum: f64 = counts.iter().map(|c| c.weight * counting_from_zeros(&c.zeros, r, Some(m))).sum();
            let lhs = coeff * t;
            let rhs = n_truncated_sum;
            let mut flags = Vec::new();
            if vacuous {
                flags.push("vacuous".to_string());
            }
            if rhs < lhs {
                flags.push("violated".to_string());
            }
            Ok(SmtRow { r, t, n_truncated_sum, lhs, rhs, margin: rhs - lhs, flags })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SmtReport {
        variant,
        truncation: m,
        calculator,
        truncation_below_calculator: below,
        coefficient,
        vacuous,
        position,
        notes,
        rows,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Text,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "text" => Ok(Self::Text),
            _ => Err(Error::InvalidInput(format!("unknown format `{s}` (expected csv or text)"))),
        }
    }
}

/// Reproducibility metadata embedded in every report.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReportMeta {
    pub entries: Vec<(String, String)>,
}

impl ReportMeta {
    pub fn new(seed: u64, precision: usize, degree_cap: u32) -> Self {
        let mut m = Self::default();
        m.push("tool", format!("hypersmt {}", crate::VERSION));
        m.push("seed", seed.to_string());
        m.push("precision", precision.to_string());
        m.push("degree_cap", degree_cap.to_string());
        m
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.push((key.into(), value.into()));
    }
}

/// A table of named columns; every cell already formatted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub const SMT_COLUMNS: [&str; 7] = ["r", "T", "N_truncated_sum", "lhs", "rhs", "margin", "flags"];

/// Fixed scientific formatting so reports are byte-stable.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.12e}")
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn smt(report: &SmtReport) -> Self {
        let mut t = Self::new(&SMT_COLUMNS);
        for r in &report.rows {
            t.rows.push(vec![
                fmt_real(r.r),
                fmt_real(r.t),
                fmt_real(r.n_truncated_sum),
                fmt_real(r.lhs),
                fmt_real(r.rhs),
                fmt_real(r.margin),
                r.flags.join(";"),
            ]);
        }
        t
    }
}

/// Metadata lines describing an SMT report.
pub fn smt_meta(report: &SmtReport, mut meta: ReportMeta) -> ReportMeta {
    meta.push("theorem", report.variant.label());
    meta.push("truncation", report.truncation.to_string());
    meta.push("truncation_formula", report.calculator.formula.clone());
    meta.push("truncation_raw", report.calculator.raw_decimal());
    for (k, v) in &report.calculator.inputs {
        meta.push(format!("input.{k}"), v.clone());
    }
    meta.push("truncation_rule", "M0 = floor(raw); min(nu, M) agrees for M and floor(M)");
    if report.truncation_below_calculator {
        meta.push("warning", format!("explicit truncation below calculator value {}", report.calculator.m0));
    }
    meta.push("coefficient", report.coefficient.to_string());
    meta.push("vacuous", report.vacuous.to_string());
    meta.push("position_level", report.position.level.to_string());
    meta.push("position_subsets_certified", report.position.certificates.len().to_string());
    for n in &report.notes {
        meta.push("note", n.clone());
    }
    meta
}

/// Render a report; CSV puts metadata in leading `#` lines.
pub fn render_report(table: &Table, meta: &ReportMeta, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Csv => {
            let mut out = String::new();
            for (k, v) in &meta.entries {
                out.push_str(&format!("# {k}: {v}\n"));
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.columns)?;
            for row in &table.rows {
                w.write_record(row)?;
            }
            let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
            out.push_str(&String::from_utf8(body).expect("utf-8 csv"));
            Ok(out)
        }
        ReportFormat::Text => {
            let mut out = String::new();
            let key_w = meta.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in &meta.entries {
                out.push_str(&format!("{k:<key_w$}  {v}\n"));
            }
            out.push('\n');
            let widths: Vec<usize> = (0..table.columns.len())
                .map(|j| table.rows.iter().map(|r| r[j].len()).chain([table.columns[j].len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: &[String]| {
                cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
            };
            out.push_str(&line(&table.columns));
            out.push('\n');
            for row in &table.rows {
                out.push_str(&line(row));
                out.push('\n');
            }
            Ok(out)
        }
    }
}

/// Write a rendered report to `path`, or return it when `path` is `None`.
pub fn emit_report(table: &Table, meta: &ReportMeta, format: ReportFormat, path: Option<&Path>) -> Result<String> {
    let text = render_report(table, meta, format)?;
    if let Some(p) = path {
        let mut f = std::fs::File::create(p)?;
        f.write_all(text.as_bytes())?;
    }
    Ok(text)
}

/// Read back a CSV report written by [`emit_report`].
pub fn read_csv_report(text: &str) -> Result<Table> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let columns = r.headers()?.iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|rec| rec.iter().map(str::to_string).collect()))
        .collect::<std::result::Result<Vec<Vec<String>>, _>>()?;
    Ok(Table { columns, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_rational;
    use proptest::prelude::*;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    /// Independent evaluation of `e` by its series in 256-bit fixed point.
    fn e_fixed_point(bits: u32) -> BigInt {
        let one = BigInt::one() << bits;
        let mut term = one.clone();
        let mut sum = one;
        for j in 1..200u32 {
            term /= j;
            sum += &term;
        }
        sum
    }

    #[test]
    fn projective_examples() {
        let r = truncation_level_projective(1, 1, 1, &q("1")).unwrap();
        assert_eq!(r.m0, BigInt::from(42));
        // 16 e - 1 with an independent fixed-point e
        let e = e_fixed_point(256);
        let want = (BigInt::from(16) * &e - (BigInt::one() << 256u32)) >> 256u32;
        assert_eq!(r.m0, want);
        let r2 = truncation_level_projective(2, 2, 1, &q("1")).unwrap();
        let want2 = (((BigInt::from(324) * &e * &e) >> 256u32) - (BigInt::one() << 256u32)) >> 256u32;
        assert_eq!(r2.m0, want2);
        assert!(truncation_level_projective(2, 2, 1, &q("0.99")).unwrap().m0 > r2.m0);
        assert!(truncation_level_projective(1, 1, 1, &q("0")).is_err());
        assert!(truncation_level_projective(2, 1, 1, &q("1")).is_err());
    }

    #[test]
    fn subgeneral_examples() {
        let r = truncation_level_subgeneral(1, 1, 2, 1, 6, &q("1"), false).unwrap();
        let e = e_fixed_point(256);
        assert_eq!(r.m0, (BigInt::from(17280) * e) >> 256u32);
        let half = truncation_level_subgeneral(1, 1, 2, 1, 6, &q("1/2"), false).unwrap();
        assert_eq!(half.raw, &r.raw * rat(2));
        let k2 = truncation_level_subgeneral(1, 2, 3, 1, 4, &q("1"), false).unwrap();
        let k2_half = truncation_level_subgeneral(1, 2, 3, 1, 4, &q("1/2"), false).unwrap();
        assert_eq!(k2_half.raw, &k2.raw * rat(4));
        let proof = truncation_level_subgeneral(1, 1, 2, 1, 6, &q("1"), true).unwrap();
        assert!(proof.m0 < r.m0);
        assert!(truncation_level_subgeneral(1, 3, 2, 1, 6, &q("1"), false).is_err());
        assert!(truncation_level_subgeneral(1, 1, 2, 1, 6, &q("-1"), false).is_err());
        assert_eq!(l_u(3, 2), BigInt::from(5));
    }

    #[test]
    fn u_choices() {
        let (u, e) = choose_u_subgeneral(2, 1, 2, 1, &q("1")).unwrap();
        assert_eq!(u, BigInt::from(25));
        assert_eq!(e, q("1/25"));
        let (u, ratio) = choose_u_projective(2, 1, 1, &q("1")).unwrap();
        assert_eq!(u, BigInt::from(30));
        assert_eq!(ratio, q("1/9"));
        let (u, _) = choose_u_projective(3, 4, 2, &q("0.3")).unwrap();
        assert!(u.is_multiple_of(&BigInt::from(4)));
    }

    #[test]
    fn binomial_power_bound() {
        assert!(binomial_power_bound_holds(3, &q("1/16")).unwrap());
        for n in 1..=6u64 {
            let x = BigRational::new(1.into(), BigInt::from((n + 1) * (n + 1)));
            assert!(binomial_power_bound_holds(n, &x).unwrap());
        }
        assert!(binomial_power_bound_holds(1, &q("1/2")).is_err());
        assert!(binomial_power_bound_holds(2, &q("0")).is_err());
    }

    #[test]
    fn decimals() {
        assert_eq!(rational_to_decimal(&q("1/3"), 4), "0.3333");
        assert_eq!(rational_to_decimal(&q("-5/2"), 2), "-2.50");
        assert_eq!(rational_to_decimal(&q("42"), 0), "42");
        assert_eq!(rational_to_decimal(&q("1/200"), 2), "0.00");
    }

    #[test]
    fn csv_round_trip_and_empty() {
        let meta = ReportMeta::new(0, 53, 12);
        let empty = Table::new(&SMT_COLUMNS);
        let text = render_report(&empty, &meta, ReportFormat::Csv).unwrap();
        assert!(text.ends_with("r,T,N_truncated_sum,lhs,rhs,margin,flags\n"));
        assert_eq!(read_csv_report(&text).unwrap(), empty);
        let mut t = Table::new(&SMT_COLUMNS);
        t.rows.push(vec!["1".into(), "2".into(), "3".into(), "4".into(), "5".into(), fmt_real(-0.5), "vacuous".into()]);
        let text = render_report(&t, &meta, ReportFormat::Csv).unwrap();
        let back = read_csv_report(&text).unwrap();
        assert_eq!(back.rows[0][5].parse::<f64>().unwrap(), -0.5);
        let txt = render_report(&t, &meta, ReportFormat::Text).unwrap();
        assert!(txt.contains("seed"));
    }

    #[test]
    fn conic_scenario_margins() {
        let variety = VarietyDescriptor::parse(2, &["x0*x2 - x1^2"]).unwrap();
        let lines = ["x0 + 2*x1 + 3*x2", "x0 - x1 + 5*x2", "2*x0 + x1 - x2", "3*x0 - 2*x1 + x2", "x0 + 7*x1 + 2*x2"];
        let hypersurfaces = lines.iter().map(|s| HomogeneousPolynomial::parse(s, 3).unwrap()).collect();
        let s = SmtScenario {
            variety,
            hypersurfaces,
            level: 1,
            epsilon: q("0.5"),
            curve: EntireCurve::parse(&["1", "z", "z^2"]).unwrap(),
            r_grid: crate::nevanlinna::radius_grid(10.0, 100.0, 10, true),
        };
        let cfg = QuadratureConfig::default();
        let rep = smt_margins(&s, SmtVariant::Subgeneral, Truncation::Auto, false, &cfg).unwrap();
        assert!(!rep.vacuous);
        assert!(rep.all_nonnegative(), "{:?}", rep.rows);
        // raising M cannot lower the margins
        let m1 = smt_margins(&s, SmtVariant::Subgeneral, Truncation::Fixed(1), false, &cfg).unwrap();
        assert!(m1.truncation_below_calculator);
        for (a, b) in m1.rows.iter().zip(&rep.rows) {
            assert!(a.margin <= b.margin + 1e-12);
        }
        let mut scaled = s.clone();
        scaled.hypersurfaces = scaled.hypersurfaces.iter().map(|h| h.scale(&q("7/3"))).collect();
        let rs = smt_margins(&scaled, SmtVariant::Subgeneral, Truncation::Auto, false, &cfg).unwrap();
        for (a, b) in rs.rows.iter().zip(&rep.rows) {
            assert!((a.margin - b.margin).abs() < 1e-9);
        }
        let mut few = s.clone();
        few.hypersurfaces.truncate(2);
        let v = smt_margins(&few, SmtVariant::Subgeneral, Truncation::Auto, false, &cfg).unwrap();
        assert!(v.vacuous && v.rows.iter().all(|r| r.flags.contains(&"vacuous".to_string())));
    }

    proptest! {
        #[test]
        fn calculators_monotone(k in 1u64..3, gap in 0u64..3, d in 1u64..3, q in 3u64..6, inv in 1u64..5) {
            let n_level = k + gap;
            let eps = BigRational::new(1.into(), inv.into());
            let base = truncation_level_subgeneral(1, k, n_level, d, q, &eps, false).unwrap();
            for bigger in [
                truncation_level_subgeneral(2, k, n_level, d, q, &eps, false).unwrap(),
                truncation_level_subgeneral(1, k, n_level + 1, d, q, &eps, false).unwrap(),
                truncation_level_subgeneral(1, k, n_level, d + 1, q, &eps, false).unwrap(),
                truncation_level_subgeneral(1, k, n_level, d, q + 1, &eps, false).unwrap(),
                truncation_level_subgeneral(1, k, n_level, d, q, &(eps.clone() / rat(2)), false).unwrap(),
            ] {
                prop_assert!(bigger.m0 >= base.m0);
            }
            let p = truncation_level_projective(k, n_level, d, &eps).unwrap();
            prop_assert!(truncation_level_projective(k, n_level + 1, d, &eps).unwrap().m0 >= p.m0);
            prop_assert!(truncation_level_projective(k, n_level, d + 1, &eps).unwrap().m0 >= p.m0);
            prop_assert!(p.m0 >= BigInt::one());
        }

        #[test]
        fn u_choices_hold(n in 1u64..6, k in 1u64..4, p in 1u64..5, delta in 1u64..5, num in 1i64..50, den in 1i64..50) {
            let eps = BigRational::new(num.into(), den.into());
            let n_level = k + n;
            let (_, e) = choose_u_subgeneral(n_level, k, p, delta, &eps).unwrap();
            prop_assert!(e.is_positive() && e < eps);
            let (u, ratio) = choose_u_projective(n, k, p, &eps).unwrap();
            prop_assert!(ratio <= BigRational::new(1.into(), BigInt::from((n + 1) * (n + 1))));
            prop_assert!(u.is_multiple_of(&BigInt::from(k)));
        }
    }
}
